/**
 * mfnas-eval/1 request loop over stdio.
 *
 * First stdout line is the handshake {"protocol":"mfnas-eval/1"}; afterwards
 * each request line gets exactly one response line carrying the same id (or
 * id -1 when the request could not even be parsed). Stdout carries protocol
 * bytes only; diagnostics go to stderr.
 */

import * as readline from "node:readline";

export const PROTOCOL_NAME = "mfnas-eval/1";

export interface Request {
  id: number;
  genotype: number[];
  kernels: number[];
}

export type Evaluate = (req: Request) => Promise<number> | number;

function parseRequest(line: string): Request {
  let parsed: unknown;
  try {
    parsed = JSON.parse(line);
  } catch {
    throw new ParseFailure("malformed JSON request");
  }
  if (typeof parsed !== "object" || parsed === null) {
    throw new ParseFailure("request is not an object");
  }
  const req = parsed as Record<string, unknown>;
  if (typeof req.id !== "number" || !Number.isInteger(req.id)) {
    throw new ParseFailure("missing integer id");
  }
  const id = req.id;
  if (!Array.isArray(req.genotype) ||
      !req.genotype.every((v) => Number.isInteger(v) && v >= 0 && v <= 2)) {
    throw new RequestError(id, "genotype must be an array of integers in {0,1,2}");
  }
  if (!Array.isArray(req.kernels) ||
      req.kernels.length !== req.genotype.length ||
      !req.kernels.every((k) => [3, 5, 7].includes(k as number))) {
    throw new RequestError(id, "kernels must map each slot to one of {3,5,7}");
  }
  return { id, genotype: req.genotype as number[], kernels: req.kernels as number[] };
}

class ParseFailure extends Error {}

class RequestError extends Error {
  constructor(public id: number, message: string) {
    super(message);
  }
}

export async function serve(
  evaluate: Evaluate,
  input: NodeJS.ReadableStream = process.stdin,
  output: NodeJS.WritableStream = process.stdout,
): Promise<void> {
  const write = (msg: object) => output.write(JSON.stringify(msg) + "\n");
  write({ protocol: PROTOCOL_NAME });
  const lines = readline.createInterface({ input, terminal: false });
  for await (const line of lines) {
    if (line.trim() === "") continue;
    try {
      const req = parseRequest(line);
      try {
        const accuracy = await evaluate(req);
        write({ id: req.id, accuracy });
      } catch (err) {
        write({ id: req.id, error: String(err instanceof Error ? err.message : err) });
      }
    } catch (err) {
      if (err instanceof RequestError) {
        write({ id: err.id, error: err.message });
      } else {
        write({ id: -1, error: String(err instanceof Error ? err.message : err) });
      }
    }
  }
}
