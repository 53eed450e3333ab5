from fractions import Fraction

import numpy as np
import pytest


def rational_rank(rows):
    """Rank over Q(i) by plain Gaussian elimination on Fraction pairs."""
    m = [[(Fraction(int(complex(x).real)), Fraction(int(complex(x).imag))) for x in r] for r in rows]
    if not m:
        return 0
    ncols = len(m[0])

    def mul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def inv(a):
        d = a[0] * a[0] + a[1] * a[1]
        return (a[0] / d, -a[1] / d)

    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != (0, 0)), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        pinv = inv(m[r][c])
        for i in range(r + 1, len(m)):
            if m[i][c] == (0, 0):
                continue
            f = mul(m[i][c], pinv)
            m[i] = [(x[0] - y[0], x[1] - y[1]) for x, y in zip(m[i], (mul(f, z) for z in m[r]))]
        r += 1
    return r


def random_gauss_matrix(rng, rows, cols, bound=5, density=1.0):
    re = rng.integers(-bound, bound + 1, size=(rows, cols))
    im = rng.integers(-bound, bound + 1, size=(rows, cols))
    a = re + 1j * im
    if density < 1.0:
        a = a * (rng.random((rows, cols)) < density)
    return a


def crandn(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
