"""Closed-form members of the dsrg(9(2n+3), 3(2n+3), 2n+4, 2n+1, 2n+4) family.

The compact matrix is a literal 9x9 template over Z[x]/(x^(2n+3) - 1): the
first row is written out, rows 2-6 are that row times x, x^2, ..., x^5, and
rows 7-9 are one shared row built from Q, R and S.
"""

from __future__ import annotations

from .blockmat import BinaryMatrix, CompactMatrix, decompactify
from .dsrg import Digraph, DsrgParams
from .polyring import CycPoly, family_modulus, make_P, make_Q, make_R, make_S, shift

BLOCKS = 9


def params_for(n: int) -> DsrgParams:
    if n < 1:
        raise ValueError(f"the family starts at n = 1, got n={n}")
    m = family_modulus(n)
    return DsrgParams(9 * m, 3 * m, 2 * n + 4, 2 * n + 1, 2 * n + 4)


def build_cn(n: int) -> list[list[int]]:
    """Block arc counts A_n(1): six equal rows over three equal rows."""
    if n < 1:
        raise ValueError(f"C_n is defined for n >= 1, got n={n}")
    top = [0, n + 1, n + 1, n + 1, n + 1, 1, 2, n + 1, n + 1]
    bottom = [2 * n + 3, 1, 1, 1, 1, 2 * n + 1, 2 * n - 1, 1, 1]
    return [list(top) for _ in range(6)] + [list(bottom) for _ in range(3)]


def build_family_compact(n: int, *, allow_reduced: bool = False) -> CompactMatrix:
    """A_n(x) for n >= 2.

    With ``allow_reduced`` the template is also evaluated at n = 1 by reading
    negative exponents modulo 2n+3.  Nothing is claimed about that matrix.
    """
    if n < 2 and not (allow_reduced and n == 1):
        raise ValueError(f"A_n(x) is defined for n >= 2, got n={n}")
    m = family_modulus(n)
    P, Q = make_P(n), make_Q(n)
    R = make_R(n, reduce_exponents=allow_reduced)
    S = make_S(n, reduce_exponents=allow_reduced)

    def x(e: int) -> CycPoly:
        return CycPoly.monomial(m, e)

    one_plus_xn = x(0) + x(n)
    top = [
        CycPoly.zero(m),
        P,
        shift(P, 1),
        shift(P, n - 1),
        shift(P, n - 2),
        x(2 * n),
        shift(one_plus_xn, 1),
        shift(P, 2),
        shift(P, 1),
    ]
    bottom = [Q, x(0), x(1), x(n - 1), x(n - 2), R, S, x(2), x(1)]
    rows = [tuple(shift(p, i) for p in top) for i in range(6)]
    rows += [tuple(bottom)] * 3
    return CompactMatrix(BLOCKS, m, tuple(rows))


def build_family_matrix(n: int) -> BinaryMatrix:
    return decompactify(build_family_compact(n))


def build_family_digraph(n: int) -> Digraph:
    g = Digraph.from_matrix(build_family_matrix(n))
    k = 3 * family_modulus(n)
    # Internal invariant, not a user error: the template is loop-free and 3(2n+3)-regular.
    assert all(d == k for d in g.out_degrees()) and all(d == k for d in g.in_degrees())
    return g


_DSRG8 = (
    "00010110",
    "10000011",
    "01001001",
    "00101100",
    "00110100",
    "10010010",
    "11000001",
    "01101000",
)


def example_dsrg8() -> BinaryMatrix:
    """A dsrg(8,3,2,1,1) made of four circulant blocks of order 4."""
    return BinaryMatrix.from_rows([[int(ch) for ch in row] for row in _DSRG8])
