"""Block matrices of circulants and their compactified (polynomial) form.

Circulant convention: each row is the previous one cyclically shifted one
place to the right, and the first row ``(a_0, ..., a_{m-1})`` corresponds to
``a_0 + a_1 x + ... + a_{m-1} x^{m-1}``.  Getting this backwards transposes
every graph, so it is pinned by a golden test.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .polyring import (
    CycPoly,
    ModulusMismatchError,
    eval_at_one,
    format_poly,
    is_binary,
    parse_poly,
)


class NotCirculantError(ValueError):
    def __init__(self, block: tuple[int, int], detail: str = "") -> None:
        self.block = block
        i, j = block
        msg = f"block ({i + 1}, {j + 1}) is not circulant"
        super().__init__(f"{msg}: {detail}" if detail else msg)


class NonBinaryEntryError(ValueError):
    def __init__(self, entry: tuple[int, int], exponent: int, value: int) -> None:
        self.entry = entry
        self.exponent = exponent
        self.value = value
        i, j = entry
        super().__init__(
            f"entry ({i + 1}, {j + 1}) has coefficient {value} at x^{exponent}; "
            "only 0/1 coefficients decompactify"
        )


@dataclass(frozen=True)
class BinaryMatrix:
    order: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.order or any(len(r) != self.order for r in self.rows):
            raise ValueError(f"matrix is not {self.order}x{self.order}")
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) = {a!r} is not 0/1")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> BinaryMatrix:
        t = tuple(tuple(int(a) for a in r) for r in rows)
        return cls(len(t), t)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    def to_text(self) -> str:
        lines = [str(self.order)]
        lines += ["".join(str(a) for a in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BinaryMatrix:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty matrix file")
        try:
            v = int(lines[0])
        except ValueError as exc:
            raise ValueError(f"bad matrix header {lines[0]!r}") from exc
        body = lines[1:]
        if len(body) != v:
            raise ValueError(f"expected {v} matrix rows, found {len(body)}")
        rows = []
        for ln in body:
            if len(ln) != v or set(ln) - {"0", "1"}:
                raise ValueError(f"bad matrix row {ln!r}")
            rows.append(tuple(int(ch) for ch in ln))
        return cls(v, tuple(rows))


@dataclass(frozen=True)
class CompactMatrix:
    block_dim: int
    modulus: int
    entries: tuple[tuple[CycPoly, ...], ...]

    def __post_init__(self) -> None:
        b = self.block_dim
        if len(self.entries) != b or any(len(r) != b for r in self.entries):
            raise ValueError(f"compact matrix grid is not {b}x{b}")
        for r in self.entries:
            for p in r:
                if p.modulus != self.modulus:
                    raise ModulusMismatchError(
                        f"entry modulus {p.modulus} differs from matrix modulus {self.modulus}"
                    )

    @classmethod
    def from_grid(cls, grid: Sequence[Sequence[CycPoly]]) -> CompactMatrix:
        entries = tuple(tuple(r) for r in grid)
        return cls(len(entries), entries[0][0].modulus, entries)

    @classmethod
    def zero(cls, b: int, m: int) -> CompactMatrix:
        z = CycPoly.zero(m)
        return cls(b, m, tuple((z,) * b for _ in range(b)))

    @classmethod
    def identity(cls, b: int, m: int) -> CompactMatrix:
        z, one = CycPoly.zero(m), CycPoly.one(m)
        return cls(b, m, tuple(tuple(one if i == j else z for j in range(b)) for i in range(b)))

    @classmethod
    def all_ones(cls, b: int, m: int) -> CompactMatrix:
        """Compactification of J_{bm}: every entry is 1 + x + ... + x^(m-1)."""
        q = CycPoly(m, (1,) * m)
        return cls(b, m, tuple((q,) * b for _ in range(b)))

    def __getitem__(self, ij: tuple[int, int]) -> CycPoly:
        i, j = ij
        return self.entries[i][j]

    def __add__(self, other: CompactMatrix) -> CompactMatrix:
        return cm_add(self, other)

    def __mul__(self, other: CompactMatrix | int) -> CompactMatrix:
        if isinstance(other, int):
            return cm_scalar(self, other)
        return cm_mul(self, other)

    __rmul__ = __mul__

    def is_binary(self) -> bool:
        return all(is_binary(p) for r in self.entries for p in r)

    def to_text(self) -> str:
        lines = [f"{self.block_dim} {self.modulus}"]
        for r in self.entries:
            lines.append(" ".join(format_poly(p, with_modulus=False) for p in r))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> CompactMatrix:
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty compact matrix file")
        header = lines[0].split()
        if len(header) != 2:
            raise ValueError(f"bad compact header {lines[0]!r}")
        b, m = int(header[0]), int(header[1])
        body = lines[1:]
        if len(body) != b:
            raise ValueError(f"expected {b} rows of entries, found {len(body)}")
        grid = []
        for ln in body:
            toks = ln.split()
            if len(toks) != b:
                raise ValueError(f"expected {b} entries in row {ln!r}")
            grid.append(tuple(parse_poly(t, m) for t in toks))
        return cls(b, m, tuple(grid))

    def pretty(self) -> str:
        return "[" + ", ".join(
            "[" + ", ".join(p.pretty() for p in r) + "]" for r in self.entries
        ) + "]"


def compactify(M: BinaryMatrix, b: int, m: int) -> CompactMatrix:
    if b * m != M.order:
        raise ValueError(f"{b} blocks of order {m} do not tile a {M.order}x{M.order} matrix")
    grid = []
    for I in range(b):
        row = []
        for J in range(b):
            first = M.rows[I * m][J * m:(J + 1) * m]
            for r in range(1, m):
                got = M.rows[I * m + r][J * m:(J + 1) * m]
                want = first[m - r:] + first[:m - r]
                if got != want:
                    raise NotCirculantError((I, J), f"row {r} is not row 0 shifted right by {r}")
            row.append(CycPoly(m, tuple(first)))
        grid.append(tuple(row))
    return CompactMatrix(b, m, tuple(grid))


def decompactify(C: CompactMatrix) -> BinaryMatrix:
    b, m = C.block_dim, C.modulus
    for I in range(b):
        for J in range(b):
            for e, a in enumerate(C.entries[I][J].coeffs):
                if a not in (0, 1):
                    raise NonBinaryEntryError((I, J), e, a)
    v = b * m
    rows = []
    for I in range(b):
        for r in range(m):
            row: list[int] = []
            for J in range(b):
                c = C.entries[I][J].coeffs
                row.extend(c[m - r:] + c[:m - r])
            rows.append(tuple(row))
    return BinaryMatrix(v, tuple(rows))


def _same_shape(A: CompactMatrix, B: CompactMatrix) -> None:
    if A.block_dim != B.block_dim:
        raise ValueError(f"block dimensions differ: {A.block_dim} vs {B.block_dim}")
    if A.modulus != B.modulus:
        raise ModulusMismatchError(f"moduli differ: {A.modulus} vs {B.modulus}")


def cm_add(A: CompactMatrix, B: CompactMatrix) -> CompactMatrix:
    _same_shape(A, B)
    return CompactMatrix(
        A.block_dim,
        A.modulus,
        tuple(tuple(p + q for p, q in zip(ra, rb)) for ra, rb in zip(A.entries, B.entries)),
    )


def cm_mul(A: CompactMatrix, B: CompactMatrix) -> CompactMatrix:
    _same_shape(A, B)
    b, m = A.block_dim, A.modulus
    grid = []
    for i in range(b):
        row = []
        for j in range(b):
            acc = CycPoly.zero(m)
            for k in range(b):
                acc = acc + A.entries[i][k] * B.entries[k][j]
            row.append(acc)
        grid.append(tuple(row))
    return CompactMatrix(b, m, tuple(grid))


def cm_scalar(A: CompactMatrix, c: int) -> CompactMatrix:
    return CompactMatrix(
        A.block_dim, A.modulus, tuple(tuple(p * c for p in r) for r in A.entries)
    )


def cm_eval_at_one(A: CompactMatrix) -> list[list[int]]:
    return [[eval_at_one(p) for p in r] for r in A.entries]
