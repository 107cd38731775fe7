"""Permutation groups via a deterministic Schreier-Sims stabilizer chain.

Permutations are tuples ``p`` with ``p[i]`` the image of ``i``.  Products
compose left to right: ``mult(g, h)`` applies ``g`` first.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Perm = tuple[int, ...]


def identity(n: int) -> Perm:
    return tuple(range(n))


def mult(g: Sequence[int], h: Sequence[int]) -> Perm:
    return tuple(h[x] for x in g)


def inverse(g: Sequence[int]) -> Perm:
    r = [0] * len(g)
    for i, x in enumerate(g):
        r[x] = i
    return tuple(r)


def is_identity(g: Sequence[int]) -> bool:
    return all(i == x for i, x in enumerate(g))


def orbits(n: int, gens: Iterable[Sequence[int]]) -> list[int]:
    """Union-find roots: ``root[i]`` is the smallest point in the orbit of ``i``."""
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g):
            a, b = find(i), find(x)
            if a != b:
                if a < b:
                    parent[b] = a
                else:
                    parent[a] = b
    return [find(i) for i in range(n)]


class StabChain:
    """Base and strong generating set for the group generated by ``gens``.

    ``base`` seeds the base; further points are appended as needed.  Level
    ``l`` is the pointwise stabilizer of ``base[:l]``.
    """

    def __init__(self, degree: int, gens: Iterable[Sequence[int]], base: Sequence[int] = ()) -> None:
        self.degree = degree
        self._id = identity(degree)
        self.base: list[int] = list(base)
        self.sgs: list[Perm] = []
        self._glev: list[int] = []
        self.transversals: list[dict[int, Perm]] = [{b: self._id} for b in self.base]
        self._checked: list[set[tuple[int, int]]] = [set() for _ in self.base]
        for g in gens:
            g = tuple(g)
            if len(g) != degree:
                raise ValueError(f"generator has degree {len(g)}, expected {degree}")
            if is_identity(g):
                continue
            lev = self._first_moved_level(g)
            if lev == len(self.base):
                self._append_base(next(i for i, x in enumerate(g) if i != x))
            self.sgs.append(g)
            self._glev.append(lev)
        self._build()

    def _first_moved_level(self, g: Perm) -> int:
        for l, b in enumerate(self.base):
            if g[b] != b:
                return l
        return len(self.base)

    def _append_base(self, point: int) -> None:
        self.base.append(point)
        self.transversals.append({point: self._id})
        self._checked.append(set())

    def _extend_orbit(self, l: int) -> None:
        trans = self.transversals[l]
        gens = [s for s, lv in zip(self.sgs, self._glev) if lv >= l]
        queue = list(trans)
        for x in queue:
            ux = trans[x]
            for s in gens:
                y = s[x]
                if y not in trans:
                    trans[y] = mult(ux, s)
                    queue.append(y)

    def sift(self, g: Sequence[int], start: int = 0) -> tuple[Perm, int]:
        """Strip ``g`` through levels ``start..``; return residue and stop level."""
        h = tuple(g)
        for l in range(start, len(self.base)):
            x = h[self.base[l]]
            u = self.transversals[l].get(x)
            if u is None:
                return h, l
            if x != self.base[l]:
                h = mult(h, inverse(u))
        return h, len(self.base)

    def _build(self) -> None:
        i = len(self.base) - 1
        while i >= 0:
            self._extend_orbit(i)
            trans = self.transversals[i]
            checked = self._checked[i]
            gen_ids = [k for k, lv in enumerate(self._glev) if lv >= i]
            added = None
            for x in list(trans):
                ux = trans[x]
                for k in gen_ids:
                    if (x, k) in checked:
                        continue
                    checked.add((x, k))
                    s = self.sgs[k]
                    y = s[x]
                    h = mult(mult(ux, s), inverse(trans[y]))
                    if is_identity(h):
                        continue
                    h, j = self.sift(h, i + 1)
                    if is_identity(h):
                        continue
                    if j == len(self.base):
                        self._append_base(next(p for p, q in enumerate(h) if p != q))
                    self.sgs.append(h)
                    self._glev.append(j)
                    added = j
                    break
                if added is not None:
                    break
            i = added if added is not None else i - 1

    def order(self) -> int:
        total = 1
        for t in self.transversals:
            total *= len(t)
        return total

    def contains(self, g: Sequence[int]) -> bool:
        h, _ = self.sift(g)
        return is_identity(h)

    def stabilizer_gens(self, level: int) -> list[Perm]:
        """Strong generators of the pointwise stabilizer of ``base[:level]``."""
        return [s for s, lv in zip(self.sgs, self._glev) if lv >= level]

    def basic_orbit(self, level: int) -> list[int]:
        return sorted(self.transversals[level])


def group_order(degree: int, gens: Iterable[Sequence[int]]) -> int:
    return StabChain(degree, gens).order()


def point_stabilizer(degree: int, gens: Sequence[Sequence[int]], point: int) -> list[Perm]:
    if not gens:
        return []
    return StabChain(degree, gens, base=[point]).stabilizer_gens(1)


def format_perm(p: Sequence[int]) -> str:
    """One line of 1-based images."""
    return " ".join(str(x + 1) for x in p)


def parse_perm(text: str) -> Perm:
    p = tuple(int(tok) - 1 for tok in text.split())
    if sorted(p) != list(range(len(p))):
        raise ValueError(f"not a permutation of 1..{len(p)}: {text!r}")
    return p
