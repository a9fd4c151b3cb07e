"""Shared random generators for the test suite.

Floating ensembles are kept well scaled (diagonals bounded away from zero)
so that inverse-based identities are testable at double precision; the
rational generators have no such restriction.
"""

from fractions import Fraction

import numpy as np

import summakit as sk


def random_normal_matrix(rng, order, diag_low=0.8, off_scale=1.0):
    E = np.tril(rng.uniform(-1.0, 1.0, size=(order + 1, order + 1))) * off_scale
    d = rng.uniform(diag_low, 1.0, size=order + 1) * rng.choice([-1.0, 1.0], size=order + 1)
    np.fill_diagonal(E, d)
    return sk.NormalMatrix(E)


def random_row_stochastic(rng, order):
    E = np.tril(rng.uniform(0.5, 1.0, size=(order + 1, order + 1)))
    E /= E.sum(axis=1)[:, None]
    return sk.NormalMatrix(E)


def random_positive_matrix(rng, order):
    E = np.tril(rng.uniform(0.2, 1.0, size=(order + 1, order + 1)))
    return sk.NormalMatrix(E)


def random_rational(rng, span=9, nonzero=False):
    num = int(rng.integers(-span, span + 1))
    if nonzero:
        while num == 0:
            num = int(rng.integers(-span, span + 1))
    return Fraction(num, int(rng.integers(1, span + 1)))


def random_rational_matrix(rng, order, span=9):
    ent = np.zeros((order + 1, order + 1), dtype=object)
    for n in range(order + 1):
        for v in range(n):
            ent[n, v] = random_rational(rng, span)
        ent[n, n] = random_rational(rng, span, nonzero=True)
    return sk.NormalMatrix(ent)


def random_rational_row_stochastic(rng, order, span=9):
    ent = np.zeros((order + 1, order + 1), dtype=object)
    for n in range(order + 1):
        vals = [int(rng.integers(1, span + 1)) for _ in range(n + 1)]
        total = sum(vals)
        ent[n, : n + 1] = [Fraction(x, total) for x in vals]
    return sk.NormalMatrix(ent)


def random_rational_vector(rng, size, span=9):
    return np.asarray([random_rational(rng, span) for _ in range(size)], dtype=object)


def random_rational_weights(rng, size, span=9):
    vals = [Fraction(int(rng.integers(1, span + 1)), int(rng.integers(1, span + 1))) for _ in range(size)]
    return sk.WeightSequence(np.asarray(vals, dtype=object))


def random_positive_weights(rng, size, low=0.1, high=2.0):
    return sk.WeightSequence(rng.uniform(low, high, size=size))


def ones_factors(count, exact=False):
    if exact:
        return sk.FactorSequence(np.asarray([Fraction(1)] * count, dtype=object))
    return sk.FactorSequence(np.ones(count))
