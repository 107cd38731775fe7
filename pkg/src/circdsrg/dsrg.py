"""Directed strongly regular graphs: the digraph type and two verifiers.

``verify_matrix`` checks the adjacency-matrix identities with dense integer
matrix products; ``verify_combinatorial`` counts 2-paths pair by pair with
bitset intersections.  The two share no arithmetic, so each is an oracle for
the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .blockmat import BinaryMatrix


class DsrgParams(NamedTuple):
    v: int
    k: int
    t: int
    lam: int
    mu: int

    def __str__(self) -> str:
        return f"dsrg({self.v},{self.k},{self.t},{self.lam},{self.mu})"

    @classmethod
    def parse(cls, text: str) -> DsrgParams:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        if len(parts) != 5:
            raise ValueError(f"expected v,k,t,lambda,mu, got {text!r}")
        return cls(*(int(p) for p in parts))

    def check(self) -> None:
        v, k, t, lam, mu = self
        if min(self) < 0:
            raise ValueError(f"{self}: parameters must be nonnegative")
        if not k < v:
            raise ValueError(f"{self}: need k < v")
        if t > k or lam > k or mu > k:
            raise ValueError(f"{self}: t, lambda and mu cannot exceed k")


class NotDsrgError(ValueError):
    """The digraph is not strongly regular; ``witness`` says why."""

    def __init__(self, witness: str) -> None:
        self.witness = witness
        super().__init__(witness)


class Digraph:
    """Loop-free digraph stored as out- and in-neighbour bitsets."""

    __slots__ = ("v", "out_adj", "in_adj")

    def __init__(self, v: int, out_adj: Sequence[int]) -> None:
        if len(out_adj) != v:
            raise ValueError(f"expected {v} adjacency rows, got {len(out_adj)}")
        full = (1 << v) - 1
        in_adj = [0] * v
        for i, row in enumerate(out_adj):
            if row & ~full:
                raise ValueError(f"vertex {i} has an arc to a vertex >= {v}")
            if row >> i & 1:
                raise ValueError(f"loop at vertex {i}")
            r = row
            while r:
                low = r & -r
                in_adj[low.bit_length() - 1] |= 1 << i
                r ^= low
        self.v = v
        self.out_adj = list(out_adj)
        self.in_adj = in_adj

    @classmethod
    def from_matrix(cls, M: BinaryMatrix) -> Digraph:
        rows = []
        for r in M.rows:
            bits = 0
            for j, a in enumerate(r):
                if a:
                    bits |= 1 << j
            rows.append(bits)
        return cls(M.order, rows)

    @classmethod
    def from_arcs(cls, v: int, arcs: Iterable[tuple[int, int]]) -> Digraph:
        rows = [0] * v
        for i, j in arcs:
            if not (0 <= i < v and 0 <= j < v):
                raise ValueError(f"arc ({i}, {j}) out of range for {v} vertices")
            rows[i] |= 1 << j
        return cls(v, rows)

    def to_matrix(self) -> BinaryMatrix:
        return BinaryMatrix(
            self.v,
            tuple(tuple((row >> j) & 1 for j in range(self.v)) for row in self.out_adj),
        )

    def to_array(self) -> np.ndarray:
        A = np.zeros((self.v, self.v), dtype=np.int64)
        for i, j in self.arcs():
            A[i, j] = 1
        return A

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.out_adj[i] >> j & 1)

    def arcs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.v) for j in _bits(self.out_adj[i])]

    def out_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.out_adj]

    def in_degrees(self) -> list[int]:
        return [r.bit_count() for r in self.in_adj]

    def converse(self) -> Digraph:
        return Digraph(self.v, self.in_adj)

    def relabel(self, perm: Sequence[int]) -> Digraph:
        """Image under the vertex map ``i -> perm[i]``."""
        rows = [0] * self.v
        for i, j in self.arcs():
            rows[perm[i]] |= 1 << perm[j]
        return Digraph(self.v, rows)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Digraph) and self.v == other.v and self.out_adj == other.out_adj

    def __hash__(self) -> int:
        return hash((self.v, tuple(self.out_adj)))

    def __repr__(self) -> str:
        return f"Digraph(v={self.v}, arcs={sum(self.out_degrees())})"

    # Edge-list text form: header ``v e`` then one 1-based ``i j`` per arc.
    def to_edges_text(self) -> str:
        arcs = self.arcs()
        lines = [f"{self.v} {len(arcs)}"] + [f"{i + 1} {j + 1}" for i, j in arcs]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edges_text(cls, text: str) -> Digraph:
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not lines or len(lines[0]) != 2:
            raise ValueError("edge list needs a 'v e' header")
        v, e = int(lines[0][0]), int(lines[0][1])
        body = lines[1:]
        if len(body) != e:
            raise ValueError(f"header promises {e} arcs, found {len(body)}")
        arcs = []
        for toks in body:
            if len(toks) != 2:
                raise ValueError(f"bad arc line {' '.join(toks)!r}")
            arcs.append((int(toks[0]) - 1, int(toks[1]) - 1))
        if len(set(arcs)) != len(arcs):
            raise ValueError("repeated arc in edge list")
        return cls.from_arcs(v, arcs)


def _bits(x: int) -> Iterable[int]:
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class Verification:
    ok: bool
    violation: str | None = None
    pair: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def _check_size(g: Digraph, p: DsrgParams) -> None:
    if g.v != p.v:
        raise ValueError(f"digraph has {g.v} vertices but parameters say v={p.v}")


def verify_matrix(g: Digraph, p: DsrgParams) -> Verification:
    """A^2 == tI + lam*A + mu*(J - I - A) and AJ == JA == kJ, exactly."""
    _check_size(g, p)
    v, k, t, lam, mu = p
    A = g.to_array()
    rows, cols = A.sum(axis=1), A.sum(axis=0)
    for name, sums in (("row", rows), ("column", cols)):
        bad = np.flatnonzero(sums != k)
        if bad.size:
            i = int(bad[0])
            return Verification(False, f"(AJ=JA=kJ) {name} {i} sums to {int(sums[i])}, expected {k}")
    I = np.eye(v, dtype=np.int64)
    J = np.ones((v, v), dtype=np.int64)
    lhs = A @ A
    rhs = t * I + lam * A + mu * (J - I - A)
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        i, j = (int(x) for x in bad[0])
        return Verification(
            False,
            f"(A^2) entry ({i}, {j}): lhs {int(lhs[i, j])} != rhs {int(rhs[i, j])}",
            (i, j),
        )
    return Verification(True)


def verify_combinatorial(g: Digraph, p: DsrgParams) -> Verification:
    """Count 2-paths x -> z -> y as |out(x) & in(y)| for every ordered pair."""
    _check_size(g, p)
    v, k, t, lam, mu = p
    out, inn = g.out_adj, g.in_adj
    for x in range(v):
        d = out[x].bit_count()
        if d != k:
            return Verification(False, f"vertex {x} has outdegree {d}, expected {k}", (x, x))
        d = inn[x].bit_count()
        if d != k:
            return Verification(False, f"vertex {x} has indegree {d}, expected {k}", (x, x))
    for x in range(v):
        ox = out[x]
        for y in range(v):
            paths = (ox & inn[y]).bit_count()
            if y == x:
                want, kind = t, "closed 2-walks"
            elif ox >> y & 1:
                want, kind = lam, "2-paths along an arc"
            else:
                want, kind = mu, "2-paths across a non-arc"
            if paths != want:
                return Verification(
                    False, f"pair ({x}, {y}): {paths} {kind}, expected {want}", (x, y)
                )
    return Verification(True)


def infer_params(g: Digraph) -> DsrgParams:
    """Read (v, k, t, lambda, mu) off the digraph and confirm them.

    lambda (mu) is taken from the first arc (non-arc) pair in row-major order
    and is 0 if no such pair exists.  Raises :class:`NotDsrgError`.
    """
    if g.v < 1:
        raise ValueError("empty digraph")
    out, inn = g.out_adj, g.in_adj
    k = out[0].bit_count()
    t = (out[0] & inn[0]).bit_count()
    lam = mu = None
    for x in range(g.v):
        for y in range(g.v):
            if x == y:
                continue
            c = (out[x] & inn[y]).bit_count()
            if out[x] >> y & 1:
                if lam is None:
                    lam = c
            elif mu is None:
                mu = c
            if lam is not None and mu is not None:
                break
        if lam is not None and mu is not None:
            break
    p = DsrgParams(g.v, k, t, lam or 0, mu or 0)
    res = verify_combinatorial(g, p)
    if not res:
        raise NotDsrgError(f"not strongly regular under {p}: {res.violation}")
    return p


def read_digraph(text: str) -> Digraph:
    """Parse a digraph from matrix text (header ``v``) or edge-list text (``v e``)."""
    for ln in text.splitlines():
        if ln.strip():
            header = ln.split()
            break
    else:
        raise ValueError("empty input")
    if len(header) == 1:
        return Digraph.from_matrix(BinaryMatrix.from_text(text))
    return Digraph.from_edges_text(text)
