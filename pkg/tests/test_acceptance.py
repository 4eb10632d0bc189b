"""Acceptance criteria, one test each.

Every test appends a single PASS/FAIL line to the acceptance log, which the
terminal summary prints after the run.  All comparisons are exact.
"""

import itertools
import random
import subprocess
import sys
import time
from contextlib import contextmanager
from fractions import Fraction as F

import pytest

from rasacx import golden
from rasacx.bernstein import bernstein_apply, standard_battery, tensor_sum
from rasacx.convex_order import cx_falsify_random, is_cx_dominated
from rasacx.distributions import DiscreteDistribution, binomial
from rasacx.majorization import (
    ProbVector,
    bernoulli_convolution,
    pinch_chain,
    random_equal_sum_pair,
    random_majorized_pair,
    replay_chain,
    sigma_criterion,
)
from rasacx.rasa import GENERAL_COMBINED, GENERAL_EXPANDED, convolution_chain, jensen_chain
from rasacx.sweeps import BATTERY, _run_task, block_tasks, count_failures, grid, ns_product, rasa_tasks


@contextmanager
def criterion(log, label):
    """Record PASS/FAIL for ``label``; the body may update ``note["detail"]``."""
    note = {"detail": ""}
    try:
        yield note
    except BaseException as exc:
        log.append(f"FAIL  {label}: {note['detail'] or exc}".rstrip())
        raise
    log.append(f"PASS  {label}: {note['detail']}".rstrip())


def test_c1_first_example(acceptance_log):
    with criterion(acceptance_log, "C1 first example") as note:
        start = time.perf_counter()
        checks = golden.first_example()
        elapsed = time.perf_counter() - start
        bad = [c.label for c in checks if not c.ok]
        note["detail"] = f"{len(checks) - len(bad)}/{len(checks)} values exact in {elapsed:.3f} s"
        assert not bad, f"mismatched: {bad}"
        assert elapsed < 1


def test_c2_second_example(acceptance_log):
    with criterion(acceptance_log, "C2 second example") as note:
        start = time.perf_counter()
        checks = golden.second_example()
        elapsed = time.perf_counter() - start
        bad = [c.label for c in checks if not c.ok]
        spread_p, spread_q = golden.SECOND_P.dispersion(), golden.SECOND_P_PRIME.dispersion()
        note["detail"] = (
            f"{len(checks) - len(bad)}/{len(checks)} values exact, spread {spread_p} > {spread_q}, {elapsed:.3f} s"
        )
        assert not bad, f"mismatched: {bad}"
        assert (spread_p, spread_q) == (F(1, 2), F(4, 9)) and spread_p > spread_q
        assert elapsed < 1


def test_c3_rasa_sweep(acceptance_log):
    with criterion(acceptance_log, "C3 rasa sweep n=1..5, grid 1/8") as note:
        tasks = rasa_tasks("rasa", range(1, 6), 8, BATTERY, 0)
        start = time.perf_counter()
        total, failing = count_failures(tasks, workers=1)
        elapsed = time.perf_counter() - start
        note["detail"] = f"{total} margins, {len(failing)} failures, {elapsed:.1f} s"
        assert total > 0 and not failing
        assert elapsed < 60


@pytest.mark.slow
def test_c4_split_and_general_sweeps(acceptance_log):
    with criterion(acceptance_log, "C4 split and generalized sweeps") as note:
        split_total, split_failing = count_failures(rasa_tasks("split", range(1, 6), 8, BATTERY, 0))
        general_total = general_failing = mismatched = 0
        for task in block_tasks("general", ns_product((2, 3), (1, 2, 3)), 8, BATTERY, 0):
            margins = _run_task(task)
            general_total += len(margins)
            general_failing += sum(not m.holds for m in margins)
            combined = {m.f_id: m.margin for m in margins if m.inequality_id == GENERAL_COMBINED}
            expanded = {m.f_id: m.margin for m in margins if m.inequality_id == GENERAL_EXPANDED}
            mismatched += combined != expanded
        note["detail"] = (
            f"split {split_total} margins/{len(split_failing)} failures, "
            f"general {general_total} margins/{general_failing} failures, "
            f"{mismatched} combined-vs-expanded mismatches"
        )
        assert not split_failing and general_failing == 0 and mismatched == 0


def test_c5_majorization_theorem(acceptance_log):
    with criterion(acceptance_log, "C5 majorization theorem") as note:
        rng = random.Random(20240501)
        pairs = steps_checked = 0
        for _ in range(300):
            m = rng.randint(2, 6)
            p, q = random_majorized_pair(rng, m)
            mu, nu = bernoulli_convolution(p), bernoulli_convolution(q)
            assert is_cx_dominated(mu, nu), (p, q)
            # the constant vector at the average is majorized by everything
            assert is_cx_dominated(mu, binomial(m, p.average())), p
            vectors = replay_chain(p.sorted_desc(), pinch_chain(p, q))
            assert vectors[-1] == list(q.sorted_desc())
            for a, b in zip(vectors, vectors[1:]):
                assert is_cx_dominated(bernoulli_convolution(ProbVector(tuple(a))), bernoulli_convolution(ProbVector(tuple(b))))
                steps_checked += 1
            pairs += 1
        note["detail"] = f"{pairs} pairs, binomial specialization on each, {steps_checked} pinch steps <=cx"


def test_c6_sigma_cross_validation(acceptance_log):
    with criterion(acceptance_log, "C6 sigma criterion vs convex order") as note:
        rng = random.Random(777)
        agree = positives = 0
        discrepancies = []
        for i in range(300):
            m = rng.randint(2, 5)
            p, q = random_majorized_pair(rng, m) if i % 3 == 0 else random_equal_sum_pair(rng, m)
            assert p.total() == q.total()
            crit = sigma_criterion(p, q)
            direct = is_cx_dominated(bernoulli_convolution(p), bernoulli_convolution(q)).dominated
            if crit == direct:
                agree += 1
            else:
                discrepancies.append((p.entries, q.entries))
            positives += direct
        first = sigma_criterion(golden.FIRST_P, golden.FIRST_P_PRIME)
        second = sigma_criterion(golden.SECOND_P, golden.SECOND_P_PRIME)
        note["detail"] = f"{agree}/300 agree ({positives} dominated), first example {first}, second example {second}"
        assert not discrepancies, f"sigma criterion discrepancy: {discrepancies[:3]}"
        assert first is True and second is False


def _equal_mean_pair(rng):
    """Two laws on {0..6} with one common mean, related by random spreads and merges."""
    mu = {k: F(rng.randint(0, 4)) for k in range(7)}
    if not any(mu.values()):
        mu[rng.randint(0, 6)] = F(1)
    total = sum(mu.values())
    mu = {k: v / total for k, v in mu.items()}
    nu = dict(mu)
    for _ in range(rng.randint(1, 4)):
        c = rng.randint(1, 5)
        a, b = rng.randint(1, c), rng.randint(1, 6 - c)
        lo, hi = c - a, c + b
        frac = F(rng.randint(1, 4), 4)
        if rng.randrange(2):
            # spread: mass w at c goes to lo and hi in the ratio b : a
            w = nu[c] * frac
            nu[c] -= w
            nu[lo] += w * F(b, a + b)
            nu[hi] += w * F(a, a + b)
        else:
            # merge: the same move in reverse, limited by what lo and hi hold
            w = min(nu[lo] * F(a + b, b), nu[hi] * F(a + b, a)) * frac
            nu[c] += w
            nu[lo] -= w * F(b, a + b)
            nu[hi] -= w * F(a, a + b)
    return DiscreteDistribution.from_dict(mu), DiscreteDistribution.from_dict(nu)


def test_c7_oracle_agreement(acceptance_log):
    with criterion(acceptance_log, "C7 decision vs random falsifier") as note:
        rng = random.Random(4242)
        agree = dominated = 0
        disagreements = []
        for i in range(500):
            mu, nu = _equal_mean_pair(rng)
            verdict = is_cx_dominated(mu, nu)
            found = cx_falsify_random(mu, nu, 2000, i)
            if verdict.dominated == (found is None):
                agree += 1
            else:
                disagreements.append((str(mu), str(nu)))
            dominated += verdict.dominated
        note["detail"] = f"{agree}/500 agree ({dominated} dominated, {500 - dominated} refuted)"
        assert not disagreements, disagreements[:3]


def test_c8_chain_monotonicity(acceptance_log):
    with criterion(acceptance_log, "C8 chain monotonicity") as note:
        checked = 0
        for ns in ((1, 1, 2), (1, 2, 3)):
            m = sum(ns)
            battery = standard_battery(m)
            for xs in itertools.product(grid(4), repeat=len(ns)):
                xbar = sum(n * x for n, x in zip(ns, xs)) / m
                for f in battery:
                    conv, jens = convolution_chain(ns, xs, f), jensen_chain(ns, xs, f)
                    assert conv.holds and jens.holds, (ns, xs, f.f_id)
                    assert conv.values[0] == tensor_sum(ns, xs, f)
                    assert conv.values[-1] == jens.values[0] == bernstein_apply(m, f, xbar)
                    assert jens.values[-1] == sum(F(n, m) * bernstein_apply(m, f, x) for n, x in zip(ns, xs))
                    checked += 1
        note["detail"] = f"{checked} (ns, xs, f) chains monotone with exact endpoints"


def test_c9_determinism(acceptance_log, tmp_path):
    with criterion(acceptance_log, "C9 deterministic reports") as note:
        outputs = []
        for run, workers in enumerate(("1", "1", "2")):
            path = tmp_path / f"run{run}.json"
            cmd = [sys.executable, "-m", "rasacx.cli", "verify", "rasa", "--n", "1..3",
                   "--grid-denominator", "4", "--seed", "7", "--workers", workers, "--out", str(path)]
            proc = subprocess.run(cmd, capture_output=True, text=True)
            assert proc.returncode == 0, proc.stderr
            outputs.append(path.read_bytes())
        note["detail"] = f"3 runs (workers 1, 1, 2), {len(outputs[0])} bytes each, identical={len(set(outputs)) == 1}"
        assert len(set(outputs)) == 1
