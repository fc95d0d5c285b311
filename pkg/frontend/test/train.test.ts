import { describe, expect, it } from "vitest";

import { countParams } from "../src/costs";
import { buildModel, trainableParamCount } from "../src/train";

// Assembling the network is cheap; actual training needs a CIFAR-10 download
// and is exercised manually.
describe("train-mode network assembly", () => {
  it("matches the cost model for the all-3x3 genotype", async () => {
    const g = Array(9).fill(0);
    const model = await buildModel(g);
    expect(trainableParamCount(model)).toBe(countParams(g));
    expect(trainableParamCount(model)).toBe(272474);
    model.dispose();
  });

  it("matches the cost model for a mixed genotype", async () => {
    const g = [0, 1, 2, 0, 1, 2, 0, 1, 2];
    const model = await buildModel(g);
    expect(trainableParamCount(model)).toBe(countParams(g));
    model.dispose();
  });
}, 120_000);
