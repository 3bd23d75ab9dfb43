import os
import random
import sys

import sympy
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from parcalc.chaincx import ChainComplex  # noqa: E402
from parcalc.exactla import RatMatrix  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

small_ints = st.integers(min_value=-3, max_value=3)


@st.composite
def rat_matrices(draw, max_rows=6, max_cols=6):
    r = draw(st.integers(0, max_rows))
    c = draw(st.integers(0, max_cols))
    rows = draw(st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r))
    return RatMatrix.from_rows(rows, c)


def unimodular(rng: random.Random, n: int) -> sympy.Matrix:
    """Random integer matrix of determinant ±1 as a product of elementary moves."""
    m = sympy.eye(n)
    for _ in range(3 * n):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        m = m.elementary_row_op("n->n+km", row=i, k=rng.choice((-2, -1, 1, 2)), row2=j)
    return m


def _to_rat(m: sympy.Matrix, r: int, c: int) -> RatMatrix:
    return RatMatrix.from_rows([[int(m[i, j]) for j in range(c)] for i in range(r)], c)


def random_complex(rng: random.Random, max_dim=6, max_top=5):
    """A complex with prescribed differential ranks, disguised by change of
    basis.  Returns the complex and its Betti numbers known by construction."""
    top = rng.randint(0, max_top)
    dims = [rng.randint(0, max_dim) for _ in range(top + 1)]
    ranks = [0] * (top + 2)  # ranks[n] = rank d_n
    for n in range(1, top + 1):
        ranks[n] = rng.randint(0, min(dims[n], dims[n - 1] - ranks[n - 1]))
    expected = [dims[n] - ranks[n] - ranks[n + 1] for n in range(top + 1)]
    # normal form: in C_n the first ranks[n] coordinates map isomorphically onto
    # the last ranks[n] coordinates of C_{n-1}, which are cycles
    q = [unimodular(rng, dims[n]) for n in range(top + 1)]
    diffs = []
    for n in range(1, top + 1):
        d = sympy.zeros(dims[n - 1], dims[n])
        for r in range(ranks[n]):
            d[dims[n - 1] - 1 - r, r] = 1
        diffs.append(_to_rat(q[n - 1] * d * q[n].inv(), dims[n - 1], dims[n]))
    return ChainComplex(tuple(dims), tuple(diffs)), tuple(expected)


@st.composite
def complexes(draw, max_dim=6, max_top=5):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_complex(random.Random(seed), max_dim, max_top)
