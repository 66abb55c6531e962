"""Shared fixtures for the test modules: seeded random constant families."""

from __future__ import annotations

import random
from fractions import Fraction

from calat import constant_family

SEED = 20261018


def _rational(rng: random.Random, bound: int, nonzero: bool) -> Fraction:
    while True:
        q = rng.randint(1, 4)
        x = Fraction(rng.randint(-bound * q, bound * q), q)
        if x or not nonzero:
            return x


def random_families(n: int = 200, seed: int = SEED):
    """``n`` compatible constant sets with b, c in [-3,3]\\{0}, beta, delta in [-2,2]."""
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        b, c = _rational(rng, 3, True), _rational(rng, 3, True)
        beta, delta = _rational(rng, 2, False), _rational(rng, 2, False)
        if beta * delta == 1:
            continue
        if b + c + b * c * (beta * delta - 1) == 1:
            continue
        out.append(constant_family(b, c, beta, delta))
    return out


def random_matrices(n: int = 50, seed: int = SEED, bound: int = 5):
    """``n`` nondegenerate 3x3 integer matrices as row tuples."""
    rng = random.Random(seed + 1)
    out = []
    while len(out) < n:
        m = tuple(tuple(Fraction(rng.randint(-bound, bound)) for _ in range(3)) for _ in range(3))
        det = (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )
        if det:
            out.append(m)
    return out
