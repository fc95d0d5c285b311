"""Discrete kernel-choice search space over a fixed ResNet skeleton.

A genotype is a fixed-length tuple of slot indices, one per residual block,
each selecting the kernel size of that block's first convolution. Slots are
ordered stage-major, block-minor, so the base-3 reading of the tuple is a
canonical architecture id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import InvalidArchId, InvalidGenotype, InvalidSpace

Genotype = tuple[int, ...]


@dataclass(frozen=True)
class KernelChoice:
    """One selectable convolution: odd kernel with 'same' padding."""

    index: int
    kernel: int

    @property
    def padding(self) -> int:
        return (self.kernel - 1) // 2


DEFAULT_CHOICES = (KernelChoice(0, 3), KernelChoice(1, 5), KernelChoice(2, 7))


@dataclass(frozen=True)
class SpaceSpec:
    """Structural description of the searchable ResNet family.

    The defaults describe the CIFAR-scale space used throughout: a 16-channel
    stem, three stages of widths 16/32/64 with three blocks each, strides
    1/2/2, and per-block kernel choices 3/5/7.
    """

    stem_in_channels: int = 3
    stem_out_channels: int = 16
    stage_widths: tuple[int, ...] = (16, 32, 64)
    blocks_per_stage: tuple[int, ...] = (3, 3, 3)
    stage_strides: tuple[int, ...] = (1, 2, 2)
    num_classes: int = 10
    choices: tuple[KernelChoice, ...] = DEFAULT_CHOICES
    input_resolution: int = 32

    def __post_init__(self):
        if not (len(self.stage_widths) == len(self.blocks_per_stage) == len(self.stage_strides)):
            raise InvalidSpace("stage descriptions must have equal length")
        if any(w <= 0 for w in self.stage_widths) or any(b <= 0 for b in self.blocks_per_stage):
            raise InvalidSpace("widths and block counts must be positive")
        if any(s <= 0 for s in self.stage_strides):
            raise InvalidSpace("strides must be positive")
        if self.stem_out_channels <= 0 or self.num_classes <= 0 or self.input_resolution <= 0:
            raise InvalidSpace("stem width, class count and resolution must be positive")
        if len(self.choices) < 2:
            raise InvalidSpace("need at least two kernel choices")
        for i, c in enumerate(self.choices):
            if c.index != i:
                raise InvalidSpace("choice indices must be 0..k-1 in order")
            if c.kernel <= 0 or c.kernel % 2 == 0:
                raise InvalidSpace("kernels must be positive odd integers")

    @property
    def num_slots(self) -> int:
        return sum(self.blocks_per_stage)

    @property
    def num_choices(self) -> int:
        return len(self.choices)

    @property
    def num_configurations(self) -> int:
        return self.num_choices ** self.num_slots

    def kernel_of(self, slot_value: int) -> int:
        return self.choices[slot_value].kernel


PAPER_SPACE = SpaceSpec()


def validate_genotype(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> Genotype:
    """Return g as a tuple, raising InvalidGenotype if it does not fit spec."""
    g = tuple(int(v) for v in g)
    if len(g) != spec.num_slots:
        raise InvalidGenotype(f"expected {spec.num_slots} slots, got {len(g)}")
    for v in g:
        if not 0 <= v < spec.num_choices:
            raise InvalidGenotype(f"slot value {v} outside [0, {spec.num_choices - 1}]")
    return g


def encode(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> int:
    """Base-k architecture id of a genotype (big-endian, slot 0 most significant)."""
    g = validate_genotype(g, spec)
    arch_id = 0
    for v in g:
        arch_id = arch_id * spec.num_choices + v
    return arch_id


def decode(arch_id: int, spec: SpaceSpec = PAPER_SPACE) -> Genotype:
    """Inverse of encode."""
    arch_id = int(arch_id)
    if not 0 <= arch_id < spec.num_configurations:
        raise InvalidArchId(f"arch_id {arch_id} outside [0, {spec.num_configurations - 1}]")
    slots = []
    for _ in range(spec.num_slots):
        arch_id, v = divmod(arch_id, spec.num_choices)
        slots.append(v)
    return tuple(reversed(slots))


def enumerate_space(spec: SpaceSpec = PAPER_SPACE) -> Iterator[Genotype]:
    """Yield every genotype of the space in arch_id order."""
    import itertools

    yield from itertools.product(range(spec.num_choices), repeat=spec.num_slots)


def sample_uniform(rng: np.random.Generator, spec: SpaceSpec = PAPER_SPACE) -> Genotype:
    """Draw each slot independently uniform over the choice set."""
    return tuple(int(v) for v in rng.integers(0, spec.num_choices, size=spec.num_slots))


def mutate_one_slot(g: Sequence[int], rng: np.random.Generator,
                    spec: SpaceSpec = PAPER_SPACE) -> Genotype:
    """Reassign one uniformly chosen slot to a uniformly chosen *different* value."""
    g = validate_genotype(g, spec)
    slot = int(rng.integers(spec.num_slots))
    alternatives = [v for v in range(spec.num_choices) if v != g[slot]]
    new_value = alternatives[int(rng.integers(len(alternatives)))]
    return g[:slot] + (new_value,) + g[slot + 1:]


def genotype_to_string(g: Sequence[int], spec: SpaceSpec = PAPER_SPACE) -> str:
    """Digit-string form, e.g. '000000000'."""
    return "".join(str(v) for v in validate_genotype(g, spec))


def genotype_from_string(s: str, spec: SpaceSpec = PAPER_SPACE) -> Genotype:
    """Parse the digit-string form."""
    if not s.isdigit():
        raise InvalidGenotype(f"genotype string must be digits, got {s!r}")
    return validate_genotype([int(ch) for ch in s], spec)
