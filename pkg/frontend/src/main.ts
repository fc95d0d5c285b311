#!/usr/bin/env node
/**
 * mfnas-eval: reference external evaluator.
 *
 *   mfnas-eval --mode surrogate_echo [--base B --step S --target DIGITS
 *                                     --noise-amplitude N --noise-seed SEED]
 *   mfnas-eval --mode train --data DIR [--epochs E --batch-size B]
 *
 * Speaks mfnas-eval/1 over stdio; logs to stderr only.
 */

import { serve, Request } from "./protocol";
import { DEFAULT_SURROGATE, SurrogateSpec, surrogateAccuracy } from "./surrogate";
import { DEFAULT_TRAIN, TrainOptions, trainAccuracy } from "./train";

interface Args {
  mode: string;
  surrogate: SurrogateSpec;
  train: TrainOptions;
}

function parseArgs(argv: string[]): Args {
  const args: Args = {
    mode: "surrogate_echo",
    surrogate: { ...DEFAULT_SURROGATE },
    train: { dataDir: "", ...DEFAULT_TRAIN },
  };
  for (let i = 0; i < argv.length; i++) {
    const flag = argv[i];
    const next = () => {
      i++;
      if (i >= argv.length) throw new Error(`missing value for ${flag}`);
      return argv[i];
    };
    switch (flag) {
      case "--mode":
        args.mode = next();
        break;
      case "--base":
        args.surrogate.base = Number(next());
        break;
      case "--step":
        args.surrogate.step = Number(next());
        break;
      case "--target":
        args.surrogate.target = next().split("").map(Number);
        break;
      case "--noise-amplitude":
        args.surrogate.noiseAmplitude = Number(next());
        break;
      case "--noise-seed":
        args.surrogate.noiseSeed = Number(next());
        break;
      case "--data":
        args.train.dataDir = next();
        break;
      case "--epochs":
        args.train.epochs = Number(next());
        break;
      case "--batch-size":
        args.train.batchSize = Number(next());
        break;
      default:
        throw new Error(`unknown flag ${flag}`);
    }
  }
  if (args.mode !== "surrogate_echo" && args.mode !== "train") {
    throw new Error(`unknown mode ${args.mode}`);
  }
  if (args.mode === "train" && args.train.dataDir === "") {
    throw new Error("train mode requires --data DIR");
  }
  return args;
}

async function main(): Promise<void> {
  const args = parseArgs(process.argv.slice(2));
  const evaluate =
    args.mode === "surrogate_echo"
      ? (req: Request) => surrogateAccuracy(req.genotype, args.surrogate)
      : (req: Request) => trainAccuracy(req.genotype, args.train);
  await serve(evaluate);
}

main().catch((err) => {
  console.error(`[mfnas-eval] fatal: ${err instanceof Error ? err.message : err}`);
  process.exit(2);
});
