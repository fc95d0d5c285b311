/**
 * Parameter accounting for the searched ResNet family.
 *
 * Follows the engine's cost-model skeleton exactly (bias-free convs, 2
 * learnable scalars per normalized channel, 1x1 projection shortcut at stage
 * transitions, affine classifier) so train mode can assert that the network
 * it assembles has not drifted from what the engine charges for.
 */

export interface SpaceSpec {
  stemInChannels: number;
  stemOutChannels: number;
  stageWidths: number[];
  blocksPerStage: number[];
  stageStrides: number[];
  numClasses: number;
  kernels: number[]; // kernel size per slot value
  inputResolution: number;
}

export const PAPER_SPACE: SpaceSpec = {
  stemInChannels: 3,
  stemOutChannels: 16,
  stageWidths: [16, 32, 64],
  blocksPerStage: [3, 3, 3],
  stageStrides: [1, 2, 2],
  numClasses: 10,
  kernels: [3, 5, 7],
  inputResolution: 32,
};

export function countParams(genotype: number[], space: SpaceSpec = PAPER_SPACE): number {
  const slots = space.blocksPerStage.reduce((a, b) => a + b, 0);
  if (genotype.length !== slots) {
    throw new Error(`expected ${slots} slots, got ${genotype.length}`);
  }
  let total = space.stemInChannels * space.stemOutChannels * 9 + 2 * space.stemOutChannels;
  let cIn = space.stemOutChannels;
  let slot = 0;
  for (let stage = 0; stage < space.stageWidths.length; stage++) {
    const width = space.stageWidths[stage];
    for (let block = 0; block < space.blocksPerStage[stage]; block++) {
      const stride = block === 0 ? space.stageStrides[stage] : 1;
      const k = space.kernels[genotype[slot]];
      slot++;
      total += cIn * width * k * k + 2 * width; // choice conv + norm
      total += width * width * 9 + 2 * width; // fixed 3x3 conv + norm
      if (stride !== 1 || cIn !== width) {
        total += cIn * width + 2 * width; // 1x1 projection shortcut + norm
      }
      cIn = width;
    }
  }
  total += space.stageWidths[space.stageWidths.length - 1] * space.numClasses + space.numClasses;
  return total;
}
