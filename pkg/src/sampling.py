"""
Seeded sampling of points, vectors and smooth test fields

All randomness comes from numpy's PCG64 bit generator seeded through SeedSequence,
so a given seed reproduces the same sample set on every platform numpy supports.
"""

from typing import List

import numpy as np

from .constants import SAMPLE_MARGIN_FRACTION
from .geometry import DomainBox, VectorField


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator for a seed"""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def sample_point(domain: DomainBox, rng: np.random.Generator,
                 margin_fraction: float = SAMPLE_MARGIN_FRACTION) -> np.ndarray:
    """Uniform point of the box shrunk by margin_fraction"""
    box = domain.shrink(margin_fraction)
    return rng.uniform(np.asarray(box.lows), np.asarray(box.highs))


def sample_points(domain: DomainBox, count: int, rng: np.random.Generator,
                  margin_fraction: float = SAMPLE_MARGIN_FRACTION) -> List[np.ndarray]:
    return [sample_point(domain, rng, margin_fraction) for _ in range(count)]


def random_vector(rng: np.random.Generator, dimension: int) -> np.ndarray:
    return rng.standard_normal(dimension)


def random_smooth_field(rng: np.random.Generator, dimension: int, scale: float = 0.5) -> VectorField:
    """Vector field a + Bx + c·sin(Wx) with random coefficients"""
    offset = rng.standard_normal(dimension)
    linear = scale * rng.standard_normal((dimension, dimension))
    amplitude = scale * rng.standard_normal(dimension)
    frequency = rng.standard_normal((dimension, dimension))
    return VectorField(lambda x: offset + linear @ x + amplitude * np.sin(frequency @ x), dimension, "random-smooth")
