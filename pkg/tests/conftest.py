import random

import pytest

from circdsrg.blockmat import BinaryMatrix
from circdsrg.dsrg import Digraph
from circdsrg.family import example_dsrg8


@pytest.fixture
def S() -> BinaryMatrix:
    return example_dsrg8()


@pytest.fixture
def S_graph(S) -> Digraph:
    return Digraph.from_matrix(S)


def random_block_circulant(rng: random.Random, b: int, m: int, density: float = 0.5) -> BinaryMatrix:
    """Random 0/1 matrix whose b x b blocks of order m are circulant."""
    first = [[[int(rng.random() < density) for _ in range(m)] for _ in range(b)] for _ in range(b)]
    rows = []
    for I in range(b):
        for r in range(m):
            row = []
            for J in range(b):
                c = first[I][J]
                row.extend(c[m - r:] + c[:m - r])
            rows.append(row)
    return BinaryMatrix.from_rows(rows)


def random_digraph(rng: random.Random, v: int, p: float) -> Digraph:
    return Digraph.from_arcs(v, [(i, j) for i in range(v) for j in range(v) if i != j and rng.random() < p])


def random_regular_digraph(rng: random.Random, v: int, k: int) -> Digraph:
    """Loop-free k-in/k-out regular digraph: union of k random derangement-like circulant shifts, relabeled."""
    shifts = rng.sample(range(1, v), k)
    g = Digraph.from_arcs(v, [(i, (i + s) % v) for i in range(v) for s in shifts])
    perm = list(range(v))
    rng.shuffle(perm)
    return g.relabel(perm)
