"""Backtracking search for compact 9x9 adjacency matrices A_n(x).

Structural rules imposed on the search (all indices 1-based as printed):

1. every block has the arc count prescribed by ``target_c`` (default C_n);
2. entry [1,2] is 1 + x + ... + x^n;
3. entry [7,2] is 1;
4. rows 8 and 9 equal row 7;
5. rows 2..6 are x times the previous row;
6. column 3 is x times column 2;
7. column 8 is x times column 9.

On top of these the matrix must be binary, loop-free and satisfy
A^2 + 3A = (2n+4) J_9 Q.  After the structural rules the unknowns are the
entries of rows 1 and 7 in columns 1, 4, 5, 6, 7, 9; each is enumerated as
a subset of exponents of the prescribed size.

Internally a polynomial is packed into one Python int, coefficient ``i``
in bits ``[L*i, L*(i+1))``, so a cyclic product is one integer multiply
followed by folding the top half onto the bottom.
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .blockmat import CompactMatrix
from .polyring import CycPoly, family_modulus, make_P, shift

log = logging.getLogger(__name__)

B = 9
ROW1, ROW7 = 0, 6
FREE_COLS = (0, 3, 4, 5, 6, 8)
DEFAULT_BUDGET = 10**8


@dataclass
class SearchSpec:
    n: int
    target_c: list[list[int]] | None = None
    node_budget: int | None = None
    time_budget: float | None = None

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"search needs n >= 1, got n={self.n}")
        if self.target_c is None:
            from .family import build_cn

            self.target_c = build_cn(self.n)
        if len(self.target_c) != B or any(len(r) != B for r in self.target_c):
            raise ValueError("target_c must be 9x9")
        k = 3 * family_modulus(self.n)
        sums = [sum(r) for r in self.target_c] + [sum(col) for col in zip(*self.target_c)]
        if any(s != k for s in sums):
            log.warning("target_c row/column sums differ from %d; the search is vacuous", k)

    @property
    def modulus(self) -> int:
        return family_modulus(self.n)

    def effective_budget(self) -> int | None:
        if self.node_budget is not None:
            return self.node_budget
        return None if self.n <= 2 else DEFAULT_BUDGET


@dataclass
class SearchStats:
    nodes: int = 0
    wall_time: float = 0.0
    pruned: dict[str, int] = field(default_factory=dict)
    complete: bool = True

    def to_text(self, n_solutions: int) -> str:
        lines = [
            f"nodes {self.nodes}",
            f"time {self.wall_time:.3f}",
            f"solutions {n_solutions}",
            f"complete {'yes' if self.complete else 'no'}",
        ]
        lines += [f"pruned_{k} {v}" for k, v in sorted(self.pruned.items())]
        return "\n".join(lines) + "\n"


@dataclass
class SearchResult:
    solutions: list[CompactMatrix]
    stats: SearchStats

    @property
    def complete(self) -> bool:
        return self.stats.complete


# Entry templates: ("fixed", CycPoly) | ("var", (row, col), shift).

def _template(n: int) -> dict[tuple[int, int], tuple]:
    """Express every entry of the 9x9 grid through the free unknowns."""
    m = family_modulus(n)
    tmpl: dict[tuple[int, int], tuple] = {}
    for r in (ROW1, ROW7):
        for c in range(B):
            if c in FREE_COLS:
                tmpl[r, c] = ("var", (r, c), 0)
    tmpl[ROW1, 1] = ("fixed", make_P(n))
    tmpl[ROW7, 1] = ("fixed", CycPoly.one(m))

    def shifted(entry: tuple, s: int) -> tuple:
        if entry[0] == "fixed":
            return ("fixed", shift(entry[1], s))
        return ("var", entry[1], (entry[2] + s) % m)

    for r in (ROW1, ROW7):
        tmpl[r, 2] = shifted(tmpl[r, 1], 1)
        tmpl[r, 7] = shifted(tmpl[r, 8], 1)
    for i in range(1, 6):
        for c in range(B):
            tmpl[i, c] = shifted(tmpl[ROW1, c], i)
    for i in (7, 8):
        for c in range(B):
            tmpl[i, c] = tmpl[ROW7, c]
    return tmpl


@dataclass
class FreeVariable:
    entry: tuple[int, int]
    status: str  # "FREE", "FIXED" or "DERIVED"
    source: tuple[int, int] | None = None
    shift: int = 0
    coeff_sum: int | None = None

    def describe(self) -> str:
        i, j = self.entry
        name = f"[{i + 1},{j + 1}]"
        if self.status == "DERIVED":
            si, sj = self.source
            how = f"x^{self.shift} * [{si + 1},{sj + 1}]" if self.shift else f"[{si + 1},{sj + 1}]"
            return f"{name} DERIVED = {how}"
        if self.status == "FIXED":
            return f"{name} FIXED"
        return f"{name} FREE sum={self.coeff_sum}"


def free_variables(spec: SearchSpec) -> list[FreeVariable]:
    """Status of each of the 81 entries under the structural rules."""
    tmpl = _template(spec.n)
    out = []
    for i in range(B):
        for j in range(B):
            e = tmpl[i, j]
            if e[0] == "fixed":
                out.append(FreeVariable((i, j), "FIXED", coeff_sum=sum(e[1].coeffs)))
            elif e[1] == (i, j):
                out.append(FreeVariable((i, j), "FREE", coeff_sum=spec.target_c[i][j]))
            else:
                out.append(FreeVariable((i, j), "DERIVED", e[1], e[2]))
    return out


class _Problem:
    """Packed-int model of the search: domains, entry lookup, check schedule."""

    def __init__(self, spec: SearchSpec) -> None:
        n, m = spec.n, spec.modulus
        self.n, self.m = n, m
        target = spec.target_c
        tmpl = _template(n)
        self.feasible = True

        # Lane width: W coefficients stay below 9*m + 3*m + 1.
        self.L = L = (12 * m + 1).bit_length() + 1
        self.full = (1 << (L * m)) - 1
        self.goal = sum((2 * n + 4) << (L * i) for i in range(m))

        # Each unknown must agree with the block counts of every entry derived from it.
        sums: dict[tuple[int, int], int] = {}
        for (i, j), e in tmpl.items():
            if e[0] == "fixed":
                if sum(e[1].coeffs) != target[i][j] or any(a not in (0, 1) for a in e[1].coeffs):
                    self.feasible = False
            else:
                if sums.setdefault(e[1], target[i][j]) != target[i][j]:
                    self.feasible = False
        # Loop-freeness: the constant term of every diagonal block is 0.
        banned: dict[tuple[int, int], set[int]] = {key: set() for key in sums}
        for d in range(B):
            e = tmpl[d, d]
            if e[0] == "fixed":
                if e[1].coeffs[0] != 0:
                    self.feasible = False
            else:
                banned[e[1]].add((-e[2]) % m)

        domains: dict[tuple[int, int], list[tuple[int, ...]]] = {}
        for key, s in sums.items():
            allowed = [p for p in range(m) if p not in banned[key]]
            if not 0 <= s <= len(allowed):
                domains[key] = []
            else:
                domains[key] = [tuple(c) for c in combinations(allowed, s)]
            if not domains[key]:
                self.feasible = False

        # Single-valued unknowns become constants.
        fixed_vals: dict[tuple[int, int], CycPoly] = {}
        for key, dom in domains.items():
            if len(dom) == 1:
                fixed_vals[key] = CycPoly.from_exponents(m, dom[0])
        self.vars = sorted(
            (key for key, dom in domains.items() if len(dom) > 1),
            key=lambda key: (key[0] != ROW7, sums[key], key[1]),
        )
        self.domains = [domains[key] for key in self.vars]
        self.fixed_vals = fixed_vals
        vidx = {key: i for i, key in enumerate(self.vars)}

        # shifted[var][s][d]: packed x^s * (d-th domain element)
        self.shifted = []
        for dom in self.domains:
            table = []
            for s in range(m):
                table.append([self._pack_exps((e + s) % m for e in exps) for exps in dom])
            self.shifted.append(table)

        # entry[i][j] = packed constant, or (var index, shift)
        self.entry: list[list] = [[None] * B for _ in range(B)]
        for (i, j), e in tmpl.items():
            if e[0] == "fixed":
                self.entry[i][j] = self._pack(e[1])
            elif e[1] in fixed_vals:
                self.entry[i][j] = self._pack(shift(fixed_vals[e[1]], e[2]))
            else:
                self.entry[i][j] = (vidx[e[1]], e[2])

        # W[i][j] can be checked once the deepest unknown it touches is set.
        self.checks_at: list[list[tuple[int, int]]] = [[] for _ in range(len(self.vars) + 1)]
        for i in range(B):
            for j in range(B):
                deps = set()
                for k in range(B):
                    for e in (self.entry[i][k], self.entry[k][j]):
                        if isinstance(e, tuple):
                            deps.add(e[0])
                depth = max(deps) + 1 if deps else 0
                self.checks_at[depth].append((i, j))
        self.order_keys = list(self.vars)

    def _pack_exps(self, exps) -> int:
        x = 0
        for e in exps:
            x += 1 << (self.L * e)
        return x

    def _pack(self, p: CycPoly) -> int:
        return sum(a << (self.L * i) for i, a in enumerate(p.coeffs))

    def _fold(self, x: int) -> int:
        Lm = self.L * self.m
        while x >> Lm:
            x = (x & self.full) + (x >> Lm)
        return x

    def value(self, i: int, j: int, assign: list[int]) -> int:
        e = self.entry[i][j]
        if isinstance(e, tuple):
            return self.shifted[e[0]][e[1]][assign[e[0]]]
        return e

    def w_ok(self, i: int, j: int, assign: list[int]) -> bool:
        acc = 3 * self.value(i, j, assign)
        for k in range(B):
            a = self.value(i, k, assign)
            if a:
                b = self.value(k, j, assign)
                if b:
                    acc += a * b
        return self._fold(acc) == self.goal

    def to_compact(self, assign: Sequence[int]) -> CompactMatrix:
        m, L = self.m, self.L
        mask = (1 << L) - 1
        grid = []
        for i in range(B):
            row = []
            for j in range(B):
                x = self.value(i, j, list(assign))
                row.append(CycPoly(m, tuple((x >> (L * t)) & mask for t in range(m))))
            grid.append(tuple(row))
        return CompactMatrix(B, m, tuple(grid))


class _Budget(Exception):
    pass


def _dfs(prob: _Problem, prefix: Sequence[int], budget: int | None, deadline: float | None):
    """Exhaust the subtree below ``prefix``; return (solutions, nodes, pruned, complete)."""
    nvars = len(prob.vars)
    assign = list(prefix) + [0] * (nvars - len(prefix))
    sols: list[list[int]] = []
    pruned = [0] * (nvars + 1)
    nodes = 0
    checks_at = prob.checks_at
    w_ok = prob.w_ok

    for depth in range(len(prefix) + 1):
        if not all(w_ok(i, j, assign) for i, j in checks_at[depth]):
            return sols, nodes, pruned, True

    def rec(depth: int) -> None:
        nonlocal nodes
        if depth == nvars:
            sols.append(assign[:])
            return
        checks = checks_at[depth + 1]
        for d in range(len(prob.domains[depth])):
            nodes += 1
            if budget is not None and nodes > budget:
                raise _Budget
            if deadline is not None and nodes & 0xFFF == 0 and time.monotonic() > deadline:
                raise _Budget
            assign[depth] = d
            for i, j in checks:
                if not w_ok(i, j, assign):
                    pruned[depth + 1] += 1
                    break
            else:
                rec(depth + 1)

    try:
        rec(len(prefix))
    except _Budget:
        return sols, nodes, pruned, False
    return sols, nodes, pruned, True


def _prefixes(prob: _Problem, want: int) -> list[tuple[int, ...]]:
    prefixes: list[tuple[int, ...]] = [()]
    depth = 0
    while len(prefixes) < want and depth < len(prob.vars):
        prefixes = [p + (d,) for p in prefixes for d in range(len(prob.domains[depth]))]
        depth += 1
    return prefixes


def _worker(args):
    spec, prefixes, budget, deadline = args
    prob = _Problem(spec)
    out = []
    for p in prefixes:
        out.append(_dfs(prob, p, budget, deadline))
    return out


def _sort_key(cm: CompactMatrix) -> tuple[int, ...]:
    return tuple(c for r in cm.entries for p in r for c in p.coeffs)


def search(spec: SearchSpec, jobs: int = 1) -> SearchResult:
    """All compact matrices meeting the structural rules and the dsrg congruence.

    Solutions come back sorted by their concatenated coefficient vectors.
    With a node or time budget the result may be partial; check ``complete``.
    """
    t0 = time.monotonic()
    prob = _Problem(spec)
    stats = SearchStats()
    budget = spec.effective_budget()
    deadline = t0 + spec.time_budget if spec.time_budget is not None else None
    if not prob.feasible:
        stats.wall_time = time.monotonic() - t0
        return SearchResult([], stats)

    if jobs <= 1:
        parts = [_dfs(prob, (), budget, deadline)]
    else:
        prefixes = _prefixes(prob, 8 * jobs)
        chunks = [prefixes[i::jobs] for i in range(jobs)]
        per_task = None if budget is None else max(1, budget // jobs)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = ex.map(_worker, [(spec, ch, per_task, deadline) for ch in chunks])
            parts = [r for res in results for r in res]

    assigns = []
    for sols, nodes, pruned, complete in parts:
        assigns.extend(sols)
        stats.nodes += nodes
        stats.complete &= complete
        for depth, cnt in enumerate(pruned):
            if cnt:
                key = f"depth{depth:02d}"
                stats.pruned[key] = stats.pruned.get(key, 0) + cnt
    solutions = sorted((prob.to_compact(a) for a in assigns), key=_sort_key)
    stats.wall_time = time.monotonic() - t0
    return SearchResult(solutions, stats)


def write_results(result: SearchResult, out_dir) -> list[str]:
    """Write ``sol_<index>.cm`` files and ``stats.txt``; return the file names."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    names = []
    width = max(3, len(str(len(result.solutions))))
    for i, cm in enumerate(result.solutions):
        name = f"sol_{i:0{width}d}.cm"
        (out / name).write_text(cm.to_text())
        names.append(name)
    (out / "stats.txt").write_text(result.stats.to_text(len(result.solutions)))
    return names
