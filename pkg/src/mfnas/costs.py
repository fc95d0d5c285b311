"""Deterministic parameter and multiply-accumulate accounting.

Conventions: convolutions are bias-free; every conv is followed by a norm
layer contributing 2 learnable scalars per channel (running statistics not
counted); stage transitions use a 1x1 projection shortcut (conv + norm); the
classifier is a single affine layer with bias. Norms and pooling contribute
zero MACs; one multiply-accumulate counts as one operation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .space import PAPER_SPACE, Genotype, SpaceSpec, validate_genotype


@dataclass(frozen=True)
class ModelCost:
    params: int
    macs: int


@dataclass(frozen=True)
class ConvLayer:
    """One convolution of the assembled network, with its output geometry."""

    c_in: int
    c_out: int
    kernel: int
    stride: int
    out_side: int


def conv_params(c_in: int, c_out: int, k: int) -> int:
    """Learnable scalars of a bias-free k x k convolution."""
    return c_in * c_out * k * k


def _norm_params(channels: int) -> int:
    return 2 * channels


def conv_layers(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> Iterator[ConvLayer]:
    """Walk every convolution of the network a genotype describes, in order."""
    g = validate_genotype(g, spec)
    side = spec.input_resolution
    yield ConvLayer(spec.stem_in_channels, spec.stem_out_channels, 3, 1, side)

    c_in = spec.stem_out_channels
    slot = 0
    for width, blocks, stage_stride in zip(spec.stage_widths, spec.blocks_per_stage,
                                           spec.stage_strides):
        for block in range(blocks):
            stride = stage_stride if block == 0 else 1
            side = side // stride
            kernel = spec.kernel_of(g[slot])
            slot += 1
            yield ConvLayer(c_in, width, kernel, stride, side)
            yield ConvLayer(width, width, 3, 1, side)
            if stride != 1 or c_in != width:
                yield ConvLayer(c_in, width, 1, stride, side)
            c_in = width


def count_params(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> int:
    """Total learnable scalars of the network for genotype g."""
    total = 0
    for layer in conv_layers(g, spec):
        total += conv_params(layer.c_in, layer.c_out, layer.kernel)
        total += _norm_params(layer.c_out)
    total += spec.stage_widths[-1] * spec.num_classes + spec.num_classes
    return total


def count_macs(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> int:
    """Multiply-accumulate operations of one forward pass for genotype g."""
    total = 0
    for layer in conv_layers(g, spec):
        total += (layer.kernel ** 2) * layer.c_in * layer.c_out * layer.out_side ** 2
    total += spec.stage_widths[-1] * spec.num_classes
    return total


def model_cost(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> ModelCost:
    return ModelCost(params=count_params(g, spec), macs=count_macs(g, spec))


def p_min(spec: SpaceSpec = PAPER_SPACE) -> int:
    """Parameter count of the smallest model in the space.

    Params are strictly increasing in every slot's kernel size, so the
    minimum is attained by the all-smallest-kernel genotype.
    """
    smallest = min(range(spec.num_choices), key=spec.kernel_of)
    return count_params((smallest,) * spec.num_slots, spec)
