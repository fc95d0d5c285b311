/**
 * Deterministic pattern-match accuracy surrogate.
 *
 * Mirrors the search engine's in-process surrogate bit-for-bit: accuracy is
 * base + step * (slots matching the target pattern) plus optional hash noise,
 * clamped to [0, 1]. All arithmetic is plain IEEE doubles so values agree
 * exactly across processes.
 */

import { createHash } from "node:crypto";

export interface SurrogateSpec {
  target: number[];
  base: number;
  step: number;
  noiseAmplitude: number;
  noiseSeed: number;
}

export const DEFAULT_SURROGATE: SurrogateSpec = {
  target: [0, 1, 2, 0, 1, 2, 0, 1, 2],
  base: 0.5,
  step: 0.03,
  noiseAmplitude: 0,
  noiseSeed: 0,
};

/** sha256-derived value in [-1, 1), identical to the engine's derivation. */
export function hashUnit(seed: number, digits: string): number {
  const digest = createHash("sha256").update(`mfnas:${seed}:${digits}`).digest();
  const n = digest.readBigUInt64BE(0);
  return (Number(n >> 11n) / 2 ** 53) * 2 - 1;
}

export function surrogateAccuracy(
  genotype: number[],
  spec: SurrogateSpec = DEFAULT_SURROGATE,
): number {
  if (genotype.length !== spec.target.length) {
    throw new Error(
      `genotype length ${genotype.length} != target length ${spec.target.length}`,
    );
  }
  let matches = 0;
  for (let i = 0; i < genotype.length; i++) {
    if (genotype[i] === spec.target[i]) matches++;
  }
  let acc = spec.base + spec.step * matches;
  if (spec.noiseAmplitude !== 0) {
    acc += spec.noiseAmplitude * hashUnit(spec.noiseSeed, genotype.join(""));
  }
  return Math.min(1, Math.max(0, acc));
}
