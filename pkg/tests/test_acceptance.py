"""Acceptance criteria 1-7, one test each.

Every test prints a single ``criterion N: PASS|FAIL ...`` line.  Run the file
directly (``python tests/test_acceptance.py``) for just the summary.
"""

import itertools
import random
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import random_block_circulant, random_digraph, random_regular_digraph  # noqa: E402
from circdsrg.autiso import automorphism_group, classify  # noqa: E402
from circdsrg.blockmat import cm_eval_at_one, cm_mul, compactify, decompactify  # noqa: E402
from circdsrg.dsrg import Digraph, DsrgParams, verify_combinatorial, verify_matrix  # noqa: E402
from circdsrg.family import (  # noqa: E402
    build_cn,
    build_family_compact,
    build_family_digraph,
    example_dsrg8,
    params_for,
)
from circdsrg.polyring import CycPoly, make_P, make_Q, mul, scalar_mul, shift  # noqa: E402
from circdsrg.search import SearchSpec, search  # noqa: E402


def _report(num, ok, detail, reporter=None):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}"
    if reporter is None:
        print(line, flush=True)
    else:
        # bypasses output capture so the line shows in every pytest run
        reporter.ensure_newline()
        reporter.write_line(line)
    return ok


def _aut_formula(n):
    return 2 * 2 ** (2 * n + 2) * (2 * n + 3)


def check_1():
    t0 = time.perf_counter()
    S = example_dsrg8()
    Sx = compactify(S, 2, 4)
    x = lambda *e: CycPoly.from_exponents(4, e)  # noqa: E731
    golden = Sx.entries == ((x(3), x(1, 2)), (x(2, 3), x(1)))
    g = Digraph.from_matrix(S)
    p = DsrgParams(8, 3, 2, 1, 1)
    verified = bool(verify_matrix(g, p)) and bool(verify_combinatorial(g, p))
    dt = time.perf_counter() - t0
    return golden and verified and dt < 1, f"S(x) = {Sx.pretty()}, verified={verified}, {dt:.3f}s"


def check_2():
    t0 = time.perf_counter()
    bad = []
    for n in range(2, 11):
        g, p = build_family_digraph(n), params_for(n)
        if not (verify_matrix(g, p) and verify_combinatorial(g, p)
                and cm_eval_at_one(build_family_compact(n)) == build_cn(n)):
            bad.append(n)
    dt = time.perf_counter() - t0
    return not bad and dt < 60, f"n=2..10 failing={bad}, {dt:.2f}s"


def _plain_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, w in enumerate(b):
            out[i + j] += u * w
    return out


def check_3():
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 51):
        C = np.array(build_cn(n), dtype=object)
        J = np.ones((9, 9), dtype=object)
        m = 2 * n + 3
        if not ((C @ C + 3 * C == m * (2 * n + 4) * J).all()
                and (C @ J == 3 * m * J).all() and (J @ C == 3 * m * J).all()):
            bad.append(("C", n))
    for n in range(1, 11):
        m = 2 * n + 3
        P, Q = make_P(n), make_Q(n)
        items = [
            all(shift(Q, s) == Q for s in range(3 * m)),
            mul(P, Q) == scalar_mul(Q, n + 1),
            mul(Q, Q) == scalar_mul(Q, m),
            _plain_mul([1, -1], [1] * (n + 1)) == [1] + [0] * n + [-1]
            and _plain_mul([1, -1], [1] * m) == [1] + [0] * (m - 1) + [-1],
        ]
        bad += [("PQ", n, i + 1) for i, ok in enumerate(items) if not ok]
    dt = time.perf_counter() - t0
    return not bad and dt < 5, f"failing={bad}, {dt:.2f}s"


def check_4():
    parts, ok = [], True
    for n, want, budget in ((1, 6, 30 * 60), (2, 4, 4 * 3600)):
        t0 = time.perf_counter()
        res = search(SearchSpec(n))
        graphs = [Digraph.from_matrix(decompactify(c)) for c in res.solutions]
        k = len(classify(graphs))
        dt = time.perf_counter() - t0
        ok &= res.complete and k == want
        soft = "" if dt < budget else " (over soft budget)"
        parts.append(f"n={n}: {len(res.solutions)} solutions, {k} classes (want {want}), {dt:.1f}s{soft}")
    return ok, "; ".join(parts)


def check_5():
    parts, ok = [], True
    for n in range(2, 8):
        t0 = time.perf_counter()
        order = automorphism_group(build_family_digraph(n)).order
        dt = time.perf_counter() - t0
        hit = order == _aut_formula(n)
        if n <= 5:
            ok &= hit and dt < 600
            parts.append(f"n={n}: {order} {'=' if hit else '!='} {_aut_formula(n)} ({dt:.2f}s)")
        else:
            parts.append(f"n={n} [reported]: {order} {'matches' if hit else 'differs from'} formula {_aut_formula(n)}")
    return ok, "; ".join(parts)


def _brute_aut_order(g):
    A = g.to_array()
    P = np.array(list(itertools.permutations(range(g.v))), dtype=np.intp)
    return int((A[P[:, :, None], P[:, None, :]] == A).all(axis=(1, 2)).sum())


def _schoolbook(a, b):
    m = len(a)
    return tuple(sum(a[i] * b[(k - i) % m] for i in range(m)) for k in range(m))


def check_6():
    t0 = time.perf_counter()
    rng = random.Random(2024)
    graphs = [Digraph.from_matrix(example_dsrg8()), Digraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])]
    for i in range(60):
        v = rng.randint(2, 8)
        if i % 3 == 0 and v > 2:
            graphs.append(random_regular_digraph(rng, v, rng.randint(1, v - 1)))
        else:
            graphs.append(random_digraph(rng, v, rng.choice([0.2, 0.4, 0.6])))
    aut_bad = sum(automorphism_group(g).order != _brute_aut_order(g) for g in graphs)

    hom_bad = 0
    for i in range(100):
        b, m = rng.choice([(2, 4), (2, 5), (3, 4), (3, 5), (3, 7), (4, 3)])
        M1, M2 = random_block_circulant(rng, b, m), random_block_circulant(rng, b, m)
        prod = np.array(M1.rows) @ np.array(M2.rows)
        C = cm_mul(compactify(M1, b, m), compactify(M2, b, m))
        hom_bad += any(C[I, J].coeffs != tuple(prod[I * m, J * m:(J + 1) * m])
                       for I in range(b) for J in range(b))

    mul_bad = 0
    for i in range(800):
        m = rng.choice([3, 5, 7, 9, 11, 13])
        a = tuple(rng.randint(-9, 9) for _ in range(m))
        b = tuple(rng.randint(-9, 9) for _ in range(m))
        mul_bad += mul(CycPoly.from_coeffs(a), CycPoly.from_coeffs(b)).coeffs != _schoolbook(a, b)
    dt = time.perf_counter() - t0
    ok = aut_bad == hom_bad == mul_bad == 0 and dt < 30
    return ok, (f"aut {len(graphs) - aut_bad}/{len(graphs)}, homomorphism {100 - hom_bad}/100, "
                f"mul {800 - mul_bad}/800, {dt:.2f}s")


def _candidate_params(g):
    """Parameters read off the first vertex, first arc and first non-arc."""
    A = g.to_array()
    A2 = A @ A
    k = int(A[0].sum())
    arcs = [(i, j) for i in range(g.v) for j in range(g.v) if A[i, j]]
    non = [(i, j) for i in range(g.v) for j in range(g.v) if i != j and not A[i, j]]
    lam = int(A2[arcs[0]]) if arcs else 0
    mu = int(A2[non[0]]) if non else 0
    return DsrgParams(g.v, k, int(A2[0, 0]), lam, mu)


def check_7():
    rng = random.Random(77)
    corpus = []
    for n in range(2, 11):
        g, p = build_family_digraph(n), params_for(n)
        corpus.append(("family", g, p))
        for _ in range(3):
            u, w = rng.sample(range(g.v), 2)
            rows = list(g.out_adj)
            rows[u] ^= 1 << w
            corpus.append(("perturbed", Digraph(g.v, rows), p))
    for _ in range(30):
        v = rng.randint(4, 30)
        g = random_regular_digraph(rng, v, rng.randint(1, v - 1))
        corpus.append(("random", g, _candidate_params(g)))
    disagree, perturbed_passed, family_failed = 0, 0, 0
    for kind, g, p in corpus:
        a, b = bool(verify_matrix(g, p)), bool(verify_combinatorial(g, p))
        disagree += a != b
        perturbed_passed += kind == "perturbed" and (a or b)
        family_failed += kind == "family" and not (a and b)
    ok = len(corpus) >= 60 and disagree == perturbed_passed == family_failed == 0
    return ok, (f"{len(corpus)} digraphs, disagreements={disagree}, "
                f"perturbed accepted={perturbed_passed}, family rejected={family_failed}")


CHECKS = {1: check_1, 2: check_2, 3: check_3, 4: check_4, 5: check_5, 6: check_6, 7: check_7}


@pytest.mark.parametrize("num", sorted(CHECKS))
def test_criterion(num, pytestconfig):
    ok, detail = CHECKS[num]()
    reporter = pytestconfig.pluginmanager.get_plugin("terminalreporter")
    assert _report(num, ok, detail, reporter), detail


if __name__ == "__main__":
    results = [_report(num, *CHECKS[num]()) for num in sorted(CHECKS)]
    sys.exit(0 if all(results) else 1)
