/**
 * Best-effort training evaluator.
 *
 * Assembles the genotype's network with TensorFlow.js following the same
 * skeleton the engine's cost model charges for (bias-free convs, batch norm
 * after every conv, 1x1 projection shortcut at stage transitions, affine
 * classifier) and trains briefly on CIFAR-10 read from the standard binary
 * batches. Pure-JS training is slow; this mode exists for protocol parity
 * and for users who accept the cost. It makes no fidelity claim about any
 * published accuracy.
 */

import * as fs from "node:fs";
import * as path from "node:path";

import type * as tfTypes from "@tensorflow/tfjs";

import { PAPER_SPACE, SpaceSpec, countParams } from "./costs";

export interface TrainOptions {
  dataDir: string;
  epochs: number;
  batchSize: number;
  trainImages: number; // subset size; CIFAR-10 full train is 50,000
  valImages: number;
}

export const DEFAULT_TRAIN: Omit<TrainOptions, "dataDir"> = {
  epochs: 1,
  batchSize: 128,
  trainImages: 2000,
  valImages: 1000,
};

let tfModule: typeof tfTypes | null = null;

async function tf(): Promise<typeof tfTypes> {
  if (tfModule === null) {
    tfModule = await import("@tensorflow/tfjs");
  }
  return tfModule;
}

export async function buildModel(
  genotype: number[],
  space: SpaceSpec = PAPER_SPACE,
): Promise<tfTypes.LayersModel> {
  const t = await tf();
  const input = t.input({
    shape: [space.inputResolution, space.inputResolution, space.stemInChannels],
  });

  const convBn = (
    x: tfTypes.SymbolicTensor,
    filters: number,
    kernel: number,
    stride: number,
  ): tfTypes.SymbolicTensor => {
    const conv = t.layers
      .conv2d({ filters, kernelSize: kernel, strides: stride, padding: "same", useBias: false })
      .apply(x) as tfTypes.SymbolicTensor;
    return t.layers.batchNormalization().apply(conv) as tfTypes.SymbolicTensor;
  };

  let x = convBn(input, space.stemOutChannels, 3, 1);
  x = t.layers.reLU().apply(x) as tfTypes.SymbolicTensor;

  let cIn = space.stemOutChannels;
  let slot = 0;
  for (let stage = 0; stage < space.stageWidths.length; stage++) {
    const width = space.stageWidths[stage];
    for (let block = 0; block < space.blocksPerStage[stage]; block++) {
      const stride = block === 0 ? space.stageStrides[stage] : 1;
      const kernel = space.kernels[genotype[slot]];
      slot++;
      let main = convBn(x, width, kernel, stride);
      main = t.layers.reLU().apply(main) as tfTypes.SymbolicTensor;
      main = convBn(main, width, 3, 1);
      const shortcut = stride !== 1 || cIn !== width ? convBn(x, width, 1, stride) : x;
      x = t.layers.add().apply([main, shortcut]) as tfTypes.SymbolicTensor;
      x = t.layers.reLU().apply(x) as tfTypes.SymbolicTensor;
      cIn = width;
    }
  }

  x = t.layers.globalAveragePooling2d({}).apply(x) as tfTypes.SymbolicTensor;
  x = t.layers.dense({ units: space.numClasses }).apply(x) as tfTypes.SymbolicTensor;
  return t.model({ inputs: input, outputs: x });
}

export function trainableParamCount(model: tfTypes.LayersModel): number {
  return model.trainableWeights.reduce(
    (sum, w) => sum + w.shape.reduce((a: number, b) => a * (b ?? 1), 1),
    0,
  );
}

interface Batch {
  images: Float32Array;
  labels: Int32Array;
  count: number;
}

/** Read records from the CIFAR-10 binary format (1 label byte + 3072 pixel bytes). */
function readCifarFile(file: string, limit: number): Batch {
  const RECORD = 3073;
  const buf = fs.readFileSync(file);
  const count = Math.min(Math.floor(buf.length / RECORD), limit);
  const images = new Float32Array(count * 3072);
  const labels = new Int32Array(count);
  for (let i = 0; i < count; i++) {
    const base = i * RECORD;
    labels[i] = buf[base];
    // stored channel-major (R plane, G plane, B plane); emit HWC
    for (let p = 0; p < 1024; p++) {
      for (let c = 0; c < 3; c++) {
        images[i * 3072 + p * 3 + c] = buf[base + 1 + c * 1024 + p] / 255;
      }
    }
  }
  return { images, labels, count };
}

function loadCifar(dataDir: string, trainLimit: number, valLimit: number): {
  train: Batch;
  val: Batch;
} {
  const trainFile = path.join(dataDir, "data_batch_1.bin");
  const valFile = path.join(dataDir, "test_batch.bin");
  if (!fs.existsSync(trainFile) || !fs.existsSync(valFile)) {
    throw new Error(
      `CIFAR-10 binary batches not found under ${dataDir} ` +
        "(expected data_batch_1.bin and test_batch.bin; download and extract " +
        "cifar-10-binary.tar.gz manually)",
    );
  }
  return { train: readCifarFile(trainFile, trainLimit), val: readCifarFile(valFile, valLimit) };
}

export async function trainAccuracy(
  genotype: number[],
  options: TrainOptions,
  space: SpaceSpec = PAPER_SPACE,
): Promise<number> {
  const t = await tf();
  const model = await buildModel(genotype, space);
  const built = trainableParamCount(model);
  const charged = countParams(genotype, space);
  console.error(`[mfnas-eval] genotype ${genotype.join("")}: ${built} trainable params`);
  if (built !== charged) {
    throw new Error(`skeleton drift: model has ${built} params, cost model says ${charged}`);
  }

  const { train, val } = loadCifar(options.dataDir, options.trainImages, options.valImages);
  const side = space.inputResolution;
  const xTrain = t.tensor4d(train.images, [train.count, side, side, 3]);
  const yTrain = t.oneHot(t.tensor1d(train.labels, "int32"), space.numClasses);
  const xVal = t.tensor4d(val.images, [val.count, side, side, 3]);
  const yVal = t.tensor1d(val.labels, "int32");
  try {
    model.compile({
      optimizer: t.train.adam(1e-3),
      loss: "categoricalCrossentropy",
      metrics: ["accuracy"],
    });
    await model.fit(xTrain, yTrain, {
      epochs: options.epochs,
      batchSize: options.batchSize,
      verbose: 0,
    });
    const predictions = (model.predict(xVal) as tfTypes.Tensor).argMax(-1);
    const accuracy = (await t.equal(predictions, yVal).mean().data())[0];
    predictions.dispose();
    return accuracy;
  } finally {
    xTrain.dispose();
    yTrain.dispose();
    xVal.dispose();
    yVal.dispose();
    model.dispose();
  }
}
