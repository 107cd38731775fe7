"""Exact arithmetic in the cyclic ring Z[x]/(x^m - 1).

A :class:`CycPoly` is a dense coefficient vector of length ``m``; entry ``i``
is the coefficient of ``x^i``.  Multiplication by ``x`` is a cyclic rotation,
which is what makes these polynomials a stand-in for circulant matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence


class ModulusMismatchError(ValueError):
    """Raised when combining polynomials reduced modulo different x^m - 1."""


@dataclass(frozen=True)
class CycPoly:
    modulus: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if len(self.coeffs) != self.modulus:
            raise ValueError(
                f"expected {self.modulus} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int]) -> CycPoly:
        c = tuple(int(a) for a in coeffs)
        return cls(len(c), c)

    @classmethod
    def zero(cls, m: int) -> CycPoly:
        return cls(m, (0,) * m)

    @classmethod
    def one(cls, m: int) -> CycPoly:
        return cls.monomial(m, 0)

    @classmethod
    def monomial(cls, m: int, exponent: int, coeff: int = 1) -> CycPoly:
        """``coeff * x^exponent``; the exponent is reduced mod m."""
        c = [0] * m
        c[exponent % m] = coeff
        return cls(m, tuple(c))

    @classmethod
    def from_exponents(cls, m: int, exponents: Iterable[int]) -> CycPoly:
        """Sum of ``x^e`` over the given exponents (repeats accumulate)."""
        c = [0] * m
        for e in exponents:
            c[e % m] += 1
        return cls(m, tuple(c))

    def support(self) -> list[int]:
        return [i for i, a in enumerate(self.coeffs) if a]

    def __add__(self, other: CycPoly) -> CycPoly:
        return add(self, other)

    def __sub__(self, other: CycPoly) -> CycPoly:
        return add(self, scalar_mul(other, -1))

    def __neg__(self) -> CycPoly:
        return scalar_mul(self, -1)

    def __mul__(self, other: CycPoly | int) -> CycPoly:
        if isinstance(other, int):
            return scalar_mul(self, other)
        return mul(self, other)

    __rmul__ = __mul__

    def __str__(self) -> str:
        return format_poly(self)

    def pretty(self) -> str:
        """Human-readable form such as ``x^2+x^3``."""
        terms = []
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if i == 0:
                terms.append(str(a))
            elif a == 1:
                terms.append(mono)
            elif a == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{a}{mono}")
        if not terms:
            return "0"
        return "+".join(terms).replace("+-", "-")


def _check(a: CycPoly, b: CycPoly) -> None:
    if a.modulus != b.modulus:
        raise ModulusMismatchError(
            f"moduli differ: x^{a.modulus}-1 vs x^{b.modulus}-1"
        )


def add(a: CycPoly, b: CycPoly) -> CycPoly:
    _check(a, b)
    return CycPoly(a.modulus, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))


def mul(a: CycPoly, b: CycPoly) -> CycPoly:
    """Product modulo x^m - 1 (cyclic convolution).

    Accumulates rotated copies of ``b``, one per nonzero term of ``a``.
    """
    _check(a, b)
    m = a.modulus
    acc = [0] * m
    bc = list(b.coeffs)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        rotated = bc[m - i:] + bc[:m - i]
        for k in range(m):
            acc[k] += ai * rotated[k]
    return CycPoly(m, tuple(acc))


def shift(a: CycPoly, s: int) -> CycPoly:
    """Multiply by ``x^s``: coefficient ``i`` moves to ``(i + s) mod m``."""
    m = a.modulus
    s %= m
    c = a.coeffs
    return CycPoly(m, c[m - s:] + c[:m - s])


def scalar_mul(a: CycPoly, c: int) -> CycPoly:
    return CycPoly(a.modulus, tuple(c * x for x in a.coeffs))


def eval_at_one(a: CycPoly) -> int:
    return sum(a.coeffs)


def is_binary(a: CycPoly) -> bool:
    return all(x in (0, 1) for x in a.coeffs)


def constant_term(a: CycPoly) -> int:
    return a.coeffs[0]


# Named polynomials of the construction, all over m = 2n + 3.

def family_modulus(n: int) -> int:
    return 2 * n + 3


def make_P(n: int) -> CycPoly:
    """1 + x + ... + x^n."""
    if n < 1:
        raise ValueError(f"P is defined for n >= 1, got n={n}")
    return CycPoly.from_exponents(family_modulus(n), range(n + 1))


def make_Q(n: int) -> CycPoly:
    """1 + x + ... + x^(2n+2), the all-ones block."""
    if n < 1:
        raise ValueError(f"Q is defined for n >= 1, got n={n}")
    m = family_modulus(n)
    return CycPoly(m, (1,) * m)


def _remove(q: CycPoly, exponents: Sequence[int]) -> CycPoly:
    return q - CycPoly.from_exponents(q.modulus, exponents)


def make_R(n: int, *, reduce_exponents: bool = False) -> CycPoly:
    """Q - x^(n-1) - x^(2n+1).

    ``reduce_exponents`` permits n = 1, where the removed exponents are read
    modulo m; this is exploratory only.
    """
    if n < 2 and not (reduce_exponents and n >= 1):
        raise ValueError(f"R is defined for n >= 2, got n={n}")
    return _remove(make_Q(n), [n - 1, 2 * n + 1])


def make_S(n: int, *, reduce_exponents: bool = False) -> CycPoly:
    """Q - 1 - x^2 - x^(n+2) - x^(n+3)."""
    if n < 2 and not (reduce_exponents and n >= 1):
        raise ValueError(f"S is defined for n >= 2, got n={n}")
    return _remove(make_Q(n), [0, 2, n + 2, n + 3])


# Text form: ``m:c0,c1,...,c{m-1}``.

def format_poly(a: CycPoly, *, with_modulus: bool = True) -> str:
    body = ",".join(str(x) for x in a.coeffs)
    return f"{a.modulus}:{body}" if with_modulus else body


def parse_poly(text: str, modulus: int | None = None) -> CycPoly:
    """Inverse of :func:`format_poly`.

    When ``modulus`` is given the ``m:`` prefix may be omitted; if both are
    present they must agree.
    """
    text = text.strip()
    head, sep, body = text.partition(":")
    if sep:
        m = int(head)
        if modulus is not None and modulus != m:
            raise ValueError(f"modulus prefix {m} disagrees with expected {modulus}")
    else:
        if modulus is None:
            raise ValueError(f"missing modulus prefix in {text!r}")
        m, body = modulus, head
    try:
        coeffs = tuple(int(tok) for tok in body.split(","))
    except ValueError as exc:
        raise ValueError(f"bad coefficient list {body!r}") from exc
    return CycPoly(m, coeffs)
