"""Shared helpers for the test suite."""

from __future__ import annotations

import numpy as np

from eprkit import BipartiteVector
from eprkit.sampling import complex_normal, rng_for


def bell(d: int = 2) -> BipartiteVector:
    """Maximally entangled unit vector with coefficient matrix I/sqrt(d)."""
    return BipartiteVector(np.eye(d) / np.sqrt(d))


def basis_state(i: int, j: int, da: int, db: int) -> BipartiteVector:
    c = np.zeros((da, db), dtype=complex)
    c[i, j] = 1.0
    return BipartiteVector(c)


def random_unit_state(rng: np.random.Generator, da: int, db: int) -> BipartiteVector:
    c = complex_normal(rng, da, db)
    return BipartiteVector(c / np.linalg.norm(c))


def seeded_rng(*stream: int) -> np.random.Generator:
    return rng_for(20260809, *stream)
