"""Canonical labeling, isomorphism and automorphism groups of digraphs.

Individualization-refinement in the style of nauty, kept deliberately plain:

* refinement splits cells by out- and in-neighbour counts into a splitter
  cell until the ordered partition is equitable;
* automorphisms come from a first-path search: every first-path node is
  revisited bottom-up and each target-cell vertex not yet known to be in the
  first child's orbit is searched for a leaf equivalent to the first leaf;
* the group order is read off a Schreier-Sims chain on those generators;
* the canonical form is the best leaf (largest refinement trace, then
  largest relabeled adjacency) found with children pruned by orbits of the
  true pointwise stabilizer of the individualized prefix.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

from .blockmat import BinaryMatrix
from .dsrg import Digraph
from .permgroup import Perm, StabChain, orbits, point_stabilizer


class NodeBudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class Coloring:
    """Ordered partition of the vertex set; cell order is significant."""

    cells: tuple[tuple[int, ...], ...]

    @classmethod
    def unit(cls, v: int) -> Coloring:
        return cls((tuple(range(v)),))

    @classmethod
    def from_colors(cls, colors: Sequence[int]) -> Coloring:
        """Cells ordered by color value."""
        groups: dict[int, list[int]] = {}
        for vert, c in enumerate(colors):
            groups.setdefault(c, []).append(vert)
        return cls(tuple(tuple(groups[c]) for c in sorted(groups)))

    def colors(self) -> list[int]:
        out = [0] * sum(len(c) for c in self.cells)
        for idx, cell in enumerate(self.cells):
            for vert in cell:
                out[vert] = idx
        return out

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.cells)


@dataclass
class AutResult:
    order: int
    generators: list[Perm] = field(default_factory=list)


class _Node:
    """Ordered partition as a vertex array plus cell sizes keyed by start."""

    __slots__ = ("lab", "start", "size", "ncells", "trace")

    def __init__(self, lab: list[int], start: list[int], size: list[int], ncells: int) -> None:
        self.lab = lab
        self.start = start
        self.size = size
        self.ncells = ncells
        self.trace: tuple = ()

    def copy(self) -> _Node:
        return _Node(self.lab[:], self.start[:], self.size[:], self.ncells)

    def discrete(self) -> bool:
        return self.ncells == len(self.lab)

    def target_cell(self) -> int:
        """Start of the first smallest non-singleton cell."""
        best, best_size = -1, 0
        c, v = 0, len(self.lab)
        while c < v:
            s = self.size[c]
            if s > 1 and (best < 0 or s < best_size):
                best, best_size = c, s
                if s == 2:
                    break
            c += s
        return best

    def cell(self, c: int) -> list[int]:
        return self.lab[c:c + self.size[c]]


def _refine(g: Digraph, node: _Node, queue: list[int]) -> tuple:
    """Split cells in place until equitable; return the split trace."""
    v = len(node.lab)
    lab, start, size = node.lab, node.start, node.size
    inq = [False] * v
    for s in queue:
        inq[s] = True
    dq = deque(queue)
    trace = []
    while dq and node.ncells < v:
        s = dq.popleft()
        inq[s] = False
        wmask = 0
        for u in lab[s:s + size[s]]:
            wmask |= 1 << u
        for direction, adj in enumerate((g.out_adj, g.in_adj)):
            c = 0
            while c < v:
                L = size[c]
                if L == 1:
                    c += 1
                    continue
                cell = lab[c:c + L]
                counts = [(adj[u] & wmask).bit_count() for u in cell]
                c0 = counts[0]
                if all(x == c0 for x in counts):
                    c += L
                    continue
                groups: dict[int, list[int]] = {}
                for u, x in zip(cell, counts):
                    groups.setdefault(x, []).append(u)
                keys = sorted(groups)
                frags = []
                pos = c
                for key in keys:
                    grp = groups[key]
                    lab[pos:pos + len(grp)] = grp
                    size[pos] = len(grp)
                    for u in grp:
                        start[u] = pos
                    frags.append(pos)
                    pos += len(grp)
                node.ncells += len(keys) - 1
                trace.append((s, direction, c, tuple((key, len(groups[key])) for key in keys)))
                if inq[c]:
                    new = frags[1:]
                else:
                    largest = max(frags, key=lambda f: (size[f], -f))
                    new = [f for f in frags if f != largest]
                for f in new:
                    inq[f] = True
                    dq.append(f)
                c = pos
    return tuple(trace)


def _root(g: Digraph, coloring: Coloring | None = None) -> _Node:
    v = g.v
    if coloring is None:
        coloring = Coloring.unit(v)
    lab: list[int] = []
    start = [0] * v
    size = [0] * v
    starts = []
    for cell in coloring.cells:
        if not cell:
            continue
        c = len(lab)
        starts.append(c)
        size[c] = len(cell)
        for u in cell:
            start[u] = c
        lab.extend(cell)
    if sorted(lab) != list(range(v)):
        raise ValueError("coloring is not a partition of the vertex set")
    node = _Node(lab, start, size, len(starts))
    node.trace = _refine(g, node, starts)
    return node


def _individualize(g: Digraph, node: _Node, c: int, w: int) -> _Node:
    child = node.copy()
    lab = child.lab
    L = child.size[c]
    i = lab.index(w, c, c + L)
    lab[c], lab[i] = lab[i], lab[c]
    child.size[c] = 1
    child.size[c + 1] = L - 1
    for u in lab[c + 1:c + L]:
        child.start[u] = c + 1
    child.ncells += 1
    child.trace = (c,) + _refine(g, child, [c])
    return child


def _certificate(g: Digraph, lab: Sequence[int]) -> tuple[int, ...]:
    pos = [0] * len(lab)
    for i, u in enumerate(lab):
        pos[u] = i
    rows = []
    for u in lab:
        r, bits = g.out_adj[u], 0
        while r:
            low = r & -r
            bits |= 1 << pos[low.bit_length() - 1]
            r ^= low
        rows.append(bits)
    return tuple(rows)


def refine(g: Digraph, c: Coloring) -> Coloring:
    """Coarsest equitable refinement of ``c`` (out- and in-neighbour counts)."""
    node = _root(g, c)
    cells = []
    p = 0
    while p < g.v:
        L = node.size[p]
        cells.append(tuple(sorted(node.lab[p:p + L])))
        p += L
    return Coloring(tuple(cells))


class _Search:
    def __init__(self, g: Digraph, node_budget: int | None = None) -> None:
        self.g = g
        self.v = g.v
        self.budget = node_budget
        self.nodes = 0

    def _tick(self) -> None:
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise NodeBudgetExceeded(f"search tree exceeded {self.budget} nodes")

    # automorphisms

    def automorphisms(self) -> tuple[list[Perm], list[int], list[int]]:
        """Return (generators, first-path base, first-path orbit sizes)."""
        g = self.g
        path = [_root(g)]
        chosen: list[int] = []
        while not path[-1].discrete():
            self._tick()
            nd = path[-1]
            c = nd.target_cell()
            w = nd.lab[c]
            chosen.append(w)
            path.append(_individualize(g, nd, c, w))
        self.first_traces = [nd.trace for nd in path]
        self.first_lab = path[-1].lab
        self.first_cert = _certificate(g, self.first_lab)
        gens: list[Perm] = []
        orbit_sizes = [0] * len(chosen)
        for lvl in reversed(range(len(chosen))):
            nd = path[lvl]
            c = nd.target_cell()
            prefix = chosen[:lvl]
            first = chosen[lvl]
            fixing = [p for p in gens if all(p[x] == x for x in prefix)]
            root = orbits(self.v, fixing)
            failed: list[int] = []
            for w in nd.cell(c):
                if root[w] == root[first] or any(root[w] == root[f] for f in failed):
                    continue
                gamma = self._equivalent(_individualize(g, nd, c, w), lvl + 1, prefix + [w], gens)
                if gamma is None:
                    failed.append(w)
                else:
                    gens.append(gamma)
                    fixing.append(gamma)
                    root = orbits(self.v, fixing)
            orbit_sizes[lvl] = sum(1 for u in nd.cell(c) if root[u] == root[first])
        return gens, chosen, orbit_sizes

    def _equivalent(self, nd: _Node, lvl: int, prefix: list[int], gens: list[Perm]) -> Perm | None:
        self._tick()
        if lvl >= len(self.first_traces) or nd.trace != self.first_traces[lvl]:
            return None
        if nd.discrete():
            if _certificate(self.g, nd.lab) != self.first_cert:
                return None
            gamma = [0] * self.v
            for a, b in zip(self.first_lab, nd.lab):
                gamma[a] = b
            return tuple(gamma)
        c = nd.target_cell()
        fixing = [p for p in gens if all(p[x] == x for x in prefix)]
        root = orbits(self.v, fixing)
        tried: set[int] = set()
        for u in nd.cell(c):
            if root[u] in tried:
                continue
            tried.add(root[u])
            found = self._equivalent(_individualize(self.g, nd, c, u), lvl + 1, prefix + [u], gens)
            if found is not None:
                return found
        return None

    # canonical labeling

    def canonical(self, gens: list[Perm]) -> tuple[list[int], tuple[int, ...]]:
        self.best_traces: list[tuple] = []
        self.best_cert: tuple[int, ...] | None = None
        self.best_lab: list[int] | None = None
        self._canon(_root(self.g), 0, gens)
        assert self.best_lab is not None and self.best_cert is not None
        return self.best_lab, self.best_cert

    def _canon(self, nd: _Node, lvl: int, stab: list[Perm]) -> None:
        self._tick()
        t = nd.trace
        if lvl < len(self.best_traces):
            if t < self.best_traces[lvl]:
                return
            if t > self.best_traces[lvl]:
                del self.best_traces[lvl:]
                self.best_traces.append(t)
                self.best_cert = None
        else:
            self.best_traces.append(t)
        if nd.discrete():
            cert = _certificate(self.g, nd.lab)
            if self.best_cert is None or cert > self.best_cert:
                self.best_cert = cert
                self.best_lab = nd.lab[:]
            return
        c = nd.target_cell()
        root = orbits(self.v, stab)
        seen: set[int] = set()
        for u in nd.cell(c):
            if root[u] in seen:
                continue
            seen.add(root[u])
            child = _individualize(self.g, nd, c, u)
            child_stab = [] if child.discrete() else point_stabilizer(self.v, stab, u)
            self._canon(child, lvl + 1, child_stab)


@dataclass
class _Analysis:
    aut: AutResult
    labeling: list[int]
    certificate: tuple[int, ...]
    nodes: int


def analyse(g: Digraph, node_budget: int | None = None) -> _Analysis:
    """Automorphism group, canonical labeling and certificate in one pass."""
    s = _Search(g, node_budget)
    gens, base, orbit_sizes = s.automorphisms()
    chain = StabChain(g.v, gens, base=base)
    order = chain.order()
    path_order = 1
    for k in orbit_sizes:
        path_order *= k
    # Both are |Aut|; a mismatch means the first-path search missed generators.
    assert order == path_order, (order, path_order)
    lab, cert = s.canonical(gens)
    return _Analysis(AutResult(order, gens), lab, cert, s.nodes)


def automorphism_group(g: Digraph, node_budget: int | None = None) -> AutResult:
    s = _Search(g, node_budget)
    gens, base, _ = s.automorphisms()
    return AutResult(StabChain(g.v, gens, base=base).order(), gens)


def canonical_labeling(g: Digraph, node_budget: int | None = None) -> list[int]:
    """Vertex order: canonical vertex ``i`` is original vertex ``lab[i]``."""
    return analyse(g, node_budget).labeling


def _cert_matrix(v: int, cert: Sequence[int]) -> BinaryMatrix:
    return BinaryMatrix(v, tuple(tuple((r >> j) & 1 for j in range(v)) for r in cert))


def canonical_form(g: Digraph, node_budget: int | None = None) -> BinaryMatrix:
    return _cert_matrix(g.v, analyse(g, node_budget).certificate)


def are_isomorphic(g1: Digraph, g2: Digraph) -> tuple[bool, Perm | None]:
    """Return ``(True, phi)`` with ``phi`` mapping g1's arcs onto g2's, else ``(False, None)``."""
    if g1.v != g2.v or sum(g1.out_degrees()) != sum(g2.out_degrees()):
        return False, None
    a1, a2 = analyse(g1), analyse(g2)
    if a1.certificate != a2.certificate:
        return False, None
    phi = [0] * g1.v
    for x, y in zip(a1.labeling, a2.labeling):
        phi[x] = y
    return True, tuple(phi)


def is_automorphism(g: Digraph, p: Sequence[int]) -> bool:
    """Arc (u, w) present iff (p[u], p[w]) present."""
    if sorted(p) != list(range(g.v)):
        return False
    for u in range(g.v):
        img = 0
        r = g.out_adj[u]
        while r:
            low = r & -r
            img |= 1 << p[low.bit_length() - 1]
            r ^= low
        if img != g.out_adj[p[u]]:
            return False
    return True


@dataclass
class IsoClass:
    representative: int
    members: list[int]
    aut_order: int
    form: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


def classify(graphs: Sequence[Digraph], node_budget: int | None = None) -> list[IsoClass]:
    """Group digraphs by canonical form; classes sorted by (aut order, form)."""
    by_form: dict[tuple[int, tuple[int, ...]], IsoClass] = {}
    for idx, g in enumerate(graphs):
        a = analyse(g, node_budget)
        key = (g.v, a.certificate)
        if key in by_form:
            by_form[key].members.append(idx)
        else:
            by_form[key] = IsoClass(idx, [idx], a.aut.order, a.certificate)
    return sorted(by_form.values(), key=lambda c: (c.aut_order, len(c.form), c.form))


def format_class_table(classes: Sequence[IsoClass], names: Sequence[str]) -> str:
    lines = ["class size aut_order representative"]
    for i, c in enumerate(classes, 1):
        lines.append(f"{i} {c.size} {c.aut_order} {names[c.representative]}")
    return "\n".join(lines) + "\n"
