"""Acceptance criteria, one test and one PASS/FAIL line each.

Run directly (python3 tests/test_acceptance.py) or under pytest, where the
lines are repeated in the terminal summary.
"""
import time

import pytest

from wachlog import suites
from wachlog.cli import run
from wachlog.coleman import wach_for_form
from wachlog.padic import PrecisionProfile

RESULTS: dict[int, str] = {}
SMALL = PrecisionProfile(20, 100, 32)
STANDARD = PrecisionProfile(20, 200, 32)


def record(n: int, title: str, ok: bool, elapsed: float, budget: float, detail: str = "") -> None:
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    extra = f" {detail}" if detail else ""
    line = f"criterion {n:2d} {status}  {title} ({elapsed:.1f}s of {budget:.0f}s){extra}"
    RESULTS[n] = line
    print(line)
    assert ok, line
    assert in_time, line


def failing(report: dict) -> list[str]:
    return [c["check"] for c in report["checks"] if c["status"] != "pass"]


@pytest.fixture(scope="module")
def rank_reports():
    t = time.time()
    one = suites.rank_one(STANDARD, 3)
    t1 = time.time() - t
    t = time.time()
    two = suites.rank_two(STANDARD)
    return one, t1, two, time.time() - t


def test_criterion_1_operators():
    t = time.time()
    reps = [suites.operators(p, SMALL, cases=50, seed=0) for p in (3, 5)]
    bad = [c for r in reps for c in failing(r)]
    digits = min(r["precision_used"] for r in reps)
    record(1, "psi phi = id, psi((1+pi) phi f) = 0, gamma phi = phi gamma", not bad and digits >= 10,
           time.time() - t, 30, f"min digits {digits}; failing {bad[:3]}" if bad else f"min digits {digits}")


def test_criterion_2_mellin():
    t = time.time()
    rep = suites.mellin_suite(3, STANDARD, cases=25, seed=0, max_s=10)
    bad = failing(rep)
    record(2, "Mellin roundtrip and dual evaluation, s <= 10", not bad and rep["precision_used"] >= 10,
           time.time() - t, 60, f"min digits {rep['precision_used']}")


def test_criterion_3_annihilator():
    t = time.time()
    reps = [suites.annihilator_suite(p, STANDARD, cases=10, seed=0) for p in (3, 5)]
    bad = [c for r in reps for c in failing(r)]
    record(3, "t^k divides the Mellin image of ell_{k-1}...ell_0 f; ell_1 alone fails", not bad,
           time.time() - t, 60, f"failing {bad[:3]}" if bad else "")


def test_criterion_4_rank_one(rank_reports):
    one, t1, _, _ = rank_reports
    bad = failing(one)
    record(4, "rank one: M = unit * frak_n_r with constant value ratio at s = r..r+5", not bad, t1, 60,
           f"failing {bad}" if bad else "")


def test_criterion_5_rank_two(rank_reports):
    _, _, two, t2 = rank_reports
    bad = [c for c in failing(two) if not c.endswith(".weights")]
    record(5, "rank two: M(0) = A^T, det M zeros simple at u^i - 1, unit quotient", not bad, t2, 300,
           f"failing {bad}" if bad else "")


def test_criterion_6_filtration(rank_reports):
    one, t1, two, t2 = rank_reports
    checks = [c for r in (one, two) for c in r["checks"] if c["check"].endswith(".weights")]
    bad = [c["check"] for c in checks if c["status"] != "pass"]
    record(6, "Hodge-Tate weights recovered from the Wach data", bool(checks) and not bad, t1 + t2, 360,
           f"{len(checks)} cases")


def test_criterion_7_interpolation():
    t = time.time()
    rep = suites.interpolation_suite(3, modules=100, samples=20, seed=0)
    bad = failing(rep)
    agree = next(c for c in rep["checks"] if c["check"] == "membership_agreement")
    record(7, "interpolation modules: det, membership oracle, projection ideals", not bad,
           time.time() - t, 120, f"membership {agree['agreed']}/{agree['total']}")


def test_criterion_8_relations():
    t = time.time()
    rep = suites.relations()
    bad = failing(rep)
    record(8, "closed-form relations match the V_j lines; j = 0 relation at X = 0", not bad,
           time.time() - t, 60, f"failing {bad}" if bad else "")


def test_criterion_9_rho():
    wach_for_form.cache_clear()
    t = time.time()
    # the weight-2 line only needs M at X = 0, which D = 100 gives to all 20 digits
    rep = suites.rho_suite(SMALL)
    codes = {
        "rho": run(["rho", "--p", "3", "--ap", "0", "--profile", "20,100,32"])[0],
        "ordinary": run(["image", "--p", "3", "--k", "2", "--ap", "1", "--eta", "1"])[0],
        "bad_prime": run(["rho", "--p", "4", "--ap", "0"])[0],
        "bad_profile": run(["rho", "--ap", "0", "--profile", "1,2"])[0],
    }
    contract = codes == {"rho": 0, "ordinary": 64, "bad_prime": 64, "bad_profile": 64}
    record(9, "kernel of rho is the weight-2 image line; exit codes", not failing(rep) and contract,
           time.time() - t, 30, f"exit codes {codes}")


def test_criterion_10_coleman():
    wach_for_form.cache_clear()
    t = time.time()
    rep = suites.coleman_suite(STANDARD, seed=0)
    bad = failing(rep)
    record(10, "Coleman images: I1, I2 disjoint, X1 X2 | X_k, X_k multiples, all-relation basis", not bad,
           time.time() - t, 120, f"failing {bad[:3]}" if bad else "")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
