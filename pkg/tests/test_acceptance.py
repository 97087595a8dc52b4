"""Acceptance criteria, one test each; every test prints a PASS/FAIL line.

The n = 4 exhaustive sweep is shared between criteria 1, 2, 5 and 6.
"""

import json
import os
import time

import numpy as np
import pytest

import oracles
from boolalt import comm, extremal, families, measures, spectra, verify
from boolalt.core import TruthTable, is_monotone
from conftest import ACCEPTANCE_LINES

JOBS = os.cpu_count() or 1

N4_THEOREMS = [
    "bs_alt_explicit",
    "extreme_cert_alt_s",
    "extreme_cert_alt_degree",
    "odd_support_full_degree",
    "degree_log_sparsity",
    "dt_alt_degree_squared",
    "dt_alt_s_degree",
    "monotone_s_bs_c",
    "monotone_s_degree",
    "xor_protocol_log_rank",
    "extreme_cert_construction",
    "dt_cmin_closure_degree",
]


def report(number: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def n4_sweep():
    start = time.perf_counter()
    result = verify.sweep(verify.Space.exhaustive(4), N4_THEOREMS, jobs=JOBS)
    return result, time.perf_counter() - start


@pytest.fixture(scope="module")
def small_sweeps():
    ids = ["extreme_cert_construction", "dt_cmin_closure_degree", "minterm_cover",
           "cover_number_lower_bound", "tree_protocol_simulation"]
    return [verify.sweep(verify.Space.exhaustive(n), ids, jobs=1) for n in range(4)]


def _clean(result, tid):
    tally = result.tallies[tid]
    return tally.violation_count == 0 and tally.skipped + tally.total == result.functions


def test_criterion_1_bs_alt_bound_n4(n4_sweep):
    result, seconds = n4_sweep
    tally = result.tallies["bs_alt_explicit"]
    ok = result.functions == 65536 and tally.total == 65536 and tally.violation_count == 0 and seconds < 600
    report(1, ok, f"bs <= C_t s / (C_t+1) s on all {tally.total} 4-ary functions, "
                  f"{tally.violation_count} violations, max ratio {float(tally.max_ratio):.4f}, "
                  f"n=4 sweep {seconds:.0f}s on {JOBS} worker(s) (< 600s)")


def test_criterion_2_exhaustive_n4_facts(n4_sweep):
    result, _ = n4_sweep
    ids = ["extreme_cert_alt_s", "extreme_cert_alt_degree", "odd_support_full_degree",
           "degree_log_sparsity", "dt_alt_degree_squared", "dt_alt_s_degree"]
    bad = {tid: result.tallies[tid].violation_count for tid in ids if not _clean(result, tid)}
    full = all(result.tallies[tid].total == 65536 for tid in ids if tid != "degree_log_sparsity")
    full &= result.tallies["degree_log_sparsity"].total == 65535
    mono = [result.tallies[tid] for tid in ("monotone_s_bs_c", "monotone_s_degree")]
    mono_ok = all(t.total == 168 and t.violation_count == 0 for t in mono)
    report(2, not bad and full and mono_ok,
           f"extreme-certificate bounds, odd support, degree/log sparsity, dt bounds: violations {bad or 0}; "
           f"monotone s = bs = C and s <= deg2 on {mono[0].total} monotone functions")


def test_criterion_3_rank_identities_n3():
    start = time.perf_counter()
    mismatches = []
    for bits in range(256):
        t = TruthTable(3, bits)
        f = oracles.table_values(3, bits)
        xor_rank = comm.exact_rank(comm.build_comm_matrix(t, comm.XOR))
        and_rank = comm.exact_rank(comm.build_comm_matrix(t, comm.AND))
        want = (spectra.fourier_sparsity(t), spectra.mono_sparsity(t))
        oracle = (oracles.rank_fraction(oracles.comm_rows(f, 3, "xor")),
                  oracles.rank_fraction(oracles.comm_rows(f, 3, "and")))
        if (xor_rank, and_rank) != want or oracle != want:
            mismatches.append(bits)
    seconds = time.perf_counter() - start
    report(3, not mismatches and seconds < 60,
           f"rank M_xor = Fourier sparsity, rank M_and = Mobius sparsity on 256 3-ary functions "
           f"({len(mismatches)} mismatches, {seconds:.1f}s < 60s)")


def test_criterion_4_mono_or():
    values = {n: spectra.mono_sparsity(families.or_(n)) for n in range(1, 5)}
    ranks = {n: comm.exact_rank(comm.build_comm_matrix(families.or_(n), comm.AND)) for n in range(1, 4)}
    ok = all(v == 2 ** n - 1 for n, v in values.items()) and all(r == 2 ** n - 1 for n, r in ranks.items())
    report(4, ok, f"mono(OR_n) = 2^n - 1: transform {values}, matrix rank {ranks}")


def test_criterion_5_protocol_chain(n4_sweep):
    result, _ = n4_sweep
    tally = result.tallies["xor_protocol_log_rank"]
    chain_ok = tally.total == 65535 and tally.violation_count == 0
    bad_protocols = 0
    for bits in range(256):
        t = TruthTable(3, bits)
        tree = extremal.build_optimal_tree(t)
        for composition in comm.COMPOSITIONS:
            ok, cost = comm.tree_protocol_correct(t, composition, tree)
            bad_protocols += not ok or cost > 2 * measures.dt_depth(t)
    report(5, chain_ok and bad_protocols == 0,
           f"2 dt <= 2 alt deg2^2 <= 2 alt log2^2 fs on {tally.total} 4-ary functions "
           f"({tally.violation_count} violations); tree protocols on 256 x 2 compositions: "
           f"{bad_protocols} failures")


def test_criterion_6_constructions(n4_sweep, small_sweeps):
    result, _ = n4_sweep
    parts = [(r, tid) for r in [*small_sweeps, result]
             for tid in ("extreme_cert_construction", "dt_cmin_closure_degree")]
    bad = sum(r.tallies[tid].violation_count for r, tid in parts)
    unchecked = sum(r.tallies[tid].skipped for r, tid in parts)
    covers = [r.tallies["minterm_cover"] for r in small_sweeps]
    cover_bad = sum(t.violation_count for t in covers)
    cover_count = sum(t.total for t in covers)
    report(6, bad == 0 and unchecked == 0 and cover_bad == 0 and cover_count == 1 + 2 + 8 + 128,
           f"certificates and min-certificate trees self-verify on all n <= 4 functions ({bad} failures); "
           f"min-term covers valid with per-level count <= mono on {cover_count} n <= 3 functions "
           f"({cover_bad} failures)")


def test_criterion_7_oracles(small_sweeps):
    problems = []
    for n in range(4):
        for bits in range(1 << (1 << n)):
            if measures.alt(TruthTable(n, bits)).value != oracles.alt_by_paths(oracles.table_values(n, bits), n):
                problems.append(f"alt {n}:{bits:x}")
    idx = np.arange(1 << 16, dtype=np.int64)
    vals = (idx[:, None] >> np.arange(16)) & 1
    best = np.zeros(idx.size, dtype=np.int64)
    for chain in oracles.maximal_chains(4):
        best = np.maximum(best, sum(vals[:, a] != vals[:, b] for a, b in zip(chain, chain[1:])))
    dp = np.array([measures.alt(TruthTable(4, int(b))).value for b in idx])
    problems += [f"alt 4:{b:x}" for b in np.flatnonzero(dp != best)[:5]]

    rng = np.random.Generator(np.random.PCG64(20240611))
    for _ in range(1000):
        t = TruthTable.from_values(rng.integers(0, 2, size=32))
        f = t.values.tolist()
        got = (measures.block_sensitivity(t).value, measures.certificate(t).value, measures.cmin(t).value)
        want = (oracles.block_sensitivity(f, 5), oracles.certificate(f, 5), oracles.cmin(f, 5))
        if got != want:
            problems.append(f"bs/C/Cmin {t}")

    covers = [r.tallies["cover_number_lower_bound"] for r in small_sweeps]
    cover_bad = sum(t.violation_count for t in covers)
    report(7, not problems and cover_bad == 0,
           f"alt DP = path search (n <= 3) and maximal chains (n = 4); bs/C/Cmin = brute force on 1000 "
           f"random 5-ary functions; exact cover <= min-term cover on {sum(t.total for t in covers)} "
           f"n <= 3 functions; mismatches {problems[:5] or 0}, cover violations {cover_bad}")


def test_criterion_8_determinism():
    space = verify.Space.exhaustive(3)
    one = json.dumps(verify.sweep(space, jobs=1).to_json())
    many = json.dumps(verify.sweep(space, jobs=max(2, JOBS), chunk_size=13).to_json())
    listed = verify.Space.of([families.with_alt(5, a, seed) for a in range(6) for seed in range(3)])
    a = json.dumps(verify.sweep(listed, ["bs_alt_explicit", "dt_alt_s_degree"], jobs=1).to_json())
    b = json.dumps(verify.sweep(listed, ["bs_alt_explicit", "dt_alt_s_degree"], jobs=3, chunk_size=2).to_json())
    report(8, one == many and a == b,
           f"sweep JSON byte-identical across jobs=1 and jobs={max(2, JOBS)} ({len(one)} bytes) "
           f"and on a family list ({len(a)} bytes)")
