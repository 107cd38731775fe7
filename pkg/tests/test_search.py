import itertools

import numpy as np
import pytest

from circdsrg.blockmat import CompactMatrix, decompactify
from circdsrg.dsrg import Digraph, verify_combinatorial, verify_matrix
from circdsrg.family import build_cn, build_family_compact, params_for
from circdsrg.polyring import CycPoly
from circdsrg.search import SearchSpec, free_variables, search, write_results


@pytest.fixture(scope="module")
def result_n1():
    return search(SearchSpec(1))


@pytest.fixture(scope="module")
def result_n2():
    return search(SearchSpec(2))


def _subsets(m, s):
    out = []
    for c in itertools.combinations(range(m), s):
        v = np.zeros(m, dtype=np.int64)
        v[list(c)] = 1
        out.append(v)
    return np.array(out)


def _brute_force_n1():
    """Enumerate every assignment of the twelve unknown entries of rows 1 and 7
    (sizes from C_1 only) and keep those passing the full congruence and loop test.

    For a fixed row 7, the row-7 equation in column j involves only the row-1
    entry of column j, so row-1 candidates are filtered column by column before
    the product is formed.  Every survivor then gets the full 9x9 check.
    """
    n, m = 1, 5
    C = build_cn(n)
    idx = (np.arange(m)[None, :] - np.arange(m)[:, None]) % m  # idx[p, q] = q - p

    def conv(a, b):
        return np.einsum("...p,...pq->...q", a, b[..., idx])

    def xs(a, s):
        return np.roll(a, s, axis=-1)

    def mono(e):
        v = np.zeros(m, dtype=np.int64)
        v[e % m] = 1
        return v

    def full_ok(A):
        if A[np.arange(9), np.arange(9), 0].any():
            return False
        W = 3 * A + np.einsum("ikp,kjpq->ijq", A, A[..., idx])
        return bool((W == 2 * n + 4).all())

    P = mono(0) + mono(1)
    free_cols = [0, 3, 4, 5, 6, 8]
    top_doms = {c: _subsets(m, C[0][c]) for c in free_cols}
    bot_doms = [_subsets(m, C[6][c]) for c in free_cols]
    goal = np.full(m, 2 * n + 4)

    found = []
    for bot_choice in itertools.product(*[range(len(d)) for d in bot_doms]):
        bot = {c: bot_doms[i][bot_choice[i]] for i, c in enumerate(free_cols)}
        bot[1], bot[2] = mono(0), mono(1)
        bot[7] = xs(bot[8], 1)
        lead = sum(xs(bot[k], k) for k in range(6))
        tail = {j: 3 * bot[j] + sum(conv(bot[k], bot[j]) for k in (6, 7, 8)) for j in range(9)}
        top_fixed = {1: P, 2: xs(P, 1)}
        if any((tail[j] + conv(lead, top_fixed[j]) != goal).any() for j in (1, 2)):
            continue
        cands = {}
        for c in free_cols:
            d = top_doms[c]
            ok = (tail[c] + conv(lead, d) == goal).all(axis=-1)
            if c == 8:
                ok &= (tail[7] + conv(lead, xs(d, 1)) == goal).all(axis=-1)
            cands[c] = d[ok]
        if any(len(v) == 0 for v in cands.values()):
            continue
        for pick in itertools.product(*[cands[c] for c in free_cols]):
            top = dict(zip(free_cols, pick)) | top_fixed
            top[7] = xs(top[8], 1)
            A = np.array([[xs(top[j], i) for j in range(9)] for i in range(6)]
                         + [[bot[j] for j in range(9)]] * 3)
            if full_ok(A):
                found.append(CompactMatrix(9, m, tuple(
                    tuple(CycPoly(m, tuple(int(x) for x in p)) for p in row) for row in A)))
    return found


def test_exhaustive_against_generate_and_test(result_n1):
    brute = _brute_force_n1()
    assert result_n1.complete
    assert sorted(map(CompactMatrix.to_text, brute)) == sorted(map(CompactMatrix.to_text, result_n1.solutions))
    assert len(brute) == 24


@pytest.mark.parametrize("fixture", ["result_n1", "result_n2"])
def test_solutions_are_dsrgs(fixture, request):
    res = request.getfixturevalue(fixture)
    n = int(fixture[-1])
    p = params_for(n)
    assert res.complete and res.solutions
    for cm in res.solutions:
        g = Digraph.from_matrix(decompactify(cm))
        assert verify_matrix(g, p) and verify_combinatorial(g, p)


def test_solutions_sorted(result_n1):
    keys = [tuple(c for r in cm.entries for p in r for c in p.coeffs) for cm in result_n1.solutions]
    assert keys == sorted(keys) and len(set(keys)) == len(keys)


def test_family_member_found(result_n2):
    assert build_family_compact(2) in result_n2.solutions


def test_family_member_found_n3():
    assert build_family_compact(3) in search(SearchSpec(3)).solutions


def test_deterministic_across_jobs(result_n1):
    again = search(SearchSpec(1))
    parallel = search(SearchSpec(1), jobs=2)
    assert again.solutions == result_n1.solutions == parallel.solutions
    assert parallel.complete


def test_perturbed_target_is_empty():
    C = build_cn(1)
    C[0][3] += 1
    res = search(SearchSpec(1, target_c=C))
    assert res.solutions == [] and res.complete


def test_budget_marks_incomplete():
    res = search(SearchSpec(1, node_budget=10))
    assert not res.complete
    assert res.stats.nodes <= 11


def test_free_variables():
    status = {fv.entry: fv for fv in free_variables(SearchSpec(2))}
    assert status[0, 1].status == "FIXED" and status[6, 1].status == "FIXED"
    assert status[1, 4].status == "DERIVED" and status[1, 4].source == (0, 4) and status[1, 4].shift == 1
    assert status[7, 5].status == "DERIVED" and status[7, 5].source == (6, 5) and status[7, 5].shift == 0
    free = [fv for fv in status.values() if fv.status == "FREE"]
    assert sorted(fv.entry for fv in free) == [(r, c) for r in (0, 6) for c in (0, 3, 4, 5, 6, 8)]
    assert status[6, 5].coeff_sum == 2 * 2 + 1
    assert status[1, 4].describe() == "[2,5] DERIVED = x^1 * [1,5]"


def test_write_results(tmp_path, result_n2):
    names = write_results(result_n2, tmp_path)
    assert names == [f"sol_{i:03d}.cm" for i in range(len(result_n2.solutions))]
    assert CompactMatrix.from_text((tmp_path / names[0]).read_text()) == result_n2.solutions[0]
    stats = (tmp_path / "stats.txt").read_text()
    assert "complete yes" in stats and f"solutions {len(names)}" in stats


def test_vacuous_target_warns(caplog):
    C = build_cn(1)
    C[0][0] = 1
    search(SearchSpec(1, target_c=C))
    assert "vacuous" in caplog.text
