from fractions import Fraction

import numpy as np
import pytest

from app.models.kulkarni import ExactCoefficients, KulkarniRep
from app.models.polynomial import Polynomial, RationalTransform


def var(n, j):
    return Polynomial.variable(n, j)


def random_mphstar(rng: np.random.Generator, m: int, n: int, exact: bool = True) -> KulkarniRep:
    """Random valid Markovian representation with small rational entries."""
    T = np.zeros((m, m))
    for i in range(m):
        for j in range(m):
            if i != j and rng.random() < 0.5:
                T[i, j] = int(rng.integers(1, 4)) / 2
        T[i, i] = -(T[i].sum() + int(rng.integers(1, 4)) / 2)
    K = rng.integers(0, 3, size=(m, n)).astype(float)
    K[np.arange(m), rng.integers(0, n, size=m)] += 1
    alpha = rng.integers(0, 4, size=m).astype(float)
    alpha[0] += 1
    alpha = alpha / alpha.sum()
    coeffs = ExactCoefficients.from_rows([[Fraction(x) for x in row] for row in T],
                                         [[Fraction(x) for x in row] for row in K]) if exact else None
    return KulkarniRep.markovian(alpha, T, K, exact=coeffs)


def random_polynomial(rng: np.random.Generator, n: int, degree: int = 3, terms: int = 5) -> Polynomial:
    """Up to `terms` monomials of total degree <= degree with small rational coefficients."""
    coeffs = {}
    for _ in range(terms):
        mono = rng.multinomial(int(rng.integers(0, degree + 1)), [1 / n] * n)
        coeffs[tuple(int(e) for e in mono)] = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
    return Polynomial(n, coeffs)


def random_rational_point(rng: np.random.Generator, n: int):
    return [Fraction(int(rng.integers(-7, 8)), int(rng.integers(1, 6))) for _ in range(n)]


@pytest.fixture
def exp_rep():
    """Single state, rate one: reward is Exp(1)."""
    return KulkarniRep.markovian([1.0], [[-1.0]], [[1.0]])


@pytest.fixture
def series_rep():
    """Two states in series, each rewarding its own coordinate."""
    return KulkarniRep.markovian([1.0, 0.0], [[-1.0, 1.0], [0.0, -1.0]], np.eye(2))


@pytest.fixture
def atom_rep():
    return KulkarniRep.markovian([0.0], [[-1.0]], [[1.0]])


@pytest.fixture
def wishart_Q():
    s1, s2, s3 = (var(3, j) for j in (1, 2, 3))
    return (1 + s1 + 2 * s2 + 3 * s3) * (1 + s1 + 2 * s2 + s3) - s2 * s2


@pytest.fixture
def exp_transform():
    """1/(1 + s1)."""
    return RationalTransform(p0=0, num=Polynomial.constant(1, 1), den=1 + var(1, 1))


@pytest.fixture
def realization_suite(wishart_Q):
    """Transforms covering products of exponentials, an atom and the Wishart denominator."""
    one = Polynomial.constant
    suite = [RationalTransform(p0=0, num=one(1, 1), den=1 + var(1, 1))]
    x1, x2 = var(2, 1), var(2, 2)
    suite.append(RationalTransform(p0=0, num=one(2, 1), den=(1 + x1) * (1 + x2)))
    suite.append(RationalTransform(p0=0, num=one(2, 1), den=(1 + x1 + x2)))
    suite.append(RationalTransform(p0=0, num=one(2, 6), den=(2 + x1) * (3 + x2)))
    suite.append(RationalTransform(p0=0, num=one(2, 2), den=(1 + x1) * (2 + x1 + x2)))
    y1, y2, y3 = var(3, 1), var(3, 2), var(3, 3)
    suite.append(RationalTransform(p0=0, num=one(3, 1), den=(1 + y1) * (1 + y2) * (1 + y3)))
    suite.append(RationalTransform(p0=0, num=one(3, 1), den=(1 + y1 + y2) * (1 + y3)))
    suite.append(RationalTransform(p0=0, num=one(3, 1), den=wishart_Q))
    suite.append(RationalTransform(p0=Fraction(3, 10), num=one(1, Fraction(7, 10)), den=1 + var(1, 1)))
    suite.append(RationalTransform(p0=0, num=2 + x1, den=(1 + x1) * (2 + x2) + x1))
    return suite
