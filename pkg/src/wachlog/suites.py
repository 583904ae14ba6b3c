"""Verification suites shared by the command line and the acceptance tests.

Each suite returns a report {"id", "status", "params", "precision_used",
"checks": [...]}; status is "pass", "fail" or "indeterminate".  Reports
contain no timings so a fixed seed gives byte-identical output.
"""
from __future__ import annotations

import random
from fractions import Fraction
from math import comb, factorial

from . import linalg as la
from .coleman import (
    all_relation_basis,
    check_membership,
    classify_and_generators,
    image_conditions,
    rho_consistency,
    wach_for_form,
    x_k,
)
from .errors import IndeterminateError, PadicError
from .interpolation import (
    build_module,
    det_matches,
    pmul,
    projection_image,
    _pdivmod,
)
from .mellin import (
    CharacterIndex,
    annihilator_check,
    eval_at_chi_power,
    gamma_act,
    inverse_mellin,
    log_growth_ok,
    mellin,
    phi,
    psi,
    special_element,
)
from .padic import PadicScalar, PrecisionProfile, teichmuller
from .phi_module import build_modular, derive_relation, relation_at_zero
from .series import PiSeries, XSeries, binomial_series, divide
from .wach import build_wach, divisor_check, hodge_filtration, log_matrix

RANK2_CASES = [(3, 2, 0), (5, 2, 0), (3, 4, 0), (3, 2, 3), (5, 2, 5)]
MIN_DIGITS = 10


def _report(sid: str, params: dict, checks: list[dict]) -> dict:
    statuses = {c["status"] for c in checks}
    if "fail" in statuses:
        status = "fail"
    elif "indeterminate" in statuses:
        status = "indeterminate"
    else:
        status = "pass"
    precs = [c["precision"] for c in checks if isinstance(c.get("precision"), int)]
    return {"id": sid, "status": status, "params": params,
            "precision_used": min(precs) if precs else None,
            "checks": sorted(checks, key=lambda c: c["check"])}


def _check(name: str, ok: bool | None, precision: int | None = None, **extra) -> dict:
    status = "indeterminate" if ok is None else ("pass" if ok else "fail")
    out = {"check": name, "status": status}
    if precision is not None:
        out["precision"] = precision
    out.update(extra)
    return out


def _agree(a, b, upto: int) -> tuple[bool, int]:
    """Coefficientwise agreement of two series on degrees 0..upto at their joint precision."""
    worst = 10**9
    for n in range(upto + 1):
        prec = min(a.precision_at(n), b.precision_at(n))
        diff = a.coeff(n) - b.coeff(n)
        if not PadicScalar(a.prime, diff.value, prec).is_zero():
            return False, prec
        worst = min(worst, prec)
    return True, worst


def _checked_degrees(s, digits: int = MIN_DIGITS) -> int:
    """Largest degree up to which every coefficient is known to `digits` digits."""
    top = -1
    for n in range(s.top + 1):
        if s.precision_at(n) < digits:
            break
        top = n
    return top


def _random_pi(rng: random.Random, p: int, D: int, N: int) -> PiSeries:
    return PiSeries.from_coeffs(p, [rng.randrange(p**N) for _ in range(D + 1)], N)


def _random_x(rng: random.Random, p: int, DX: int, N: int) -> XSeries:
    return XSeries.from_coeffs(p, [rng.randrange(p**N) for _ in range(DX + 1)], N)


# ----- 1: operators --------------------------------------------------------------

def operators(p: int, profile: PrecisionProfile, cases: int = 50, seed: int = 0) -> dict:
    rng = random.Random(seed)
    D, N = profile.pi_degree, profile.digits
    checks = []
    need = max(1, D // (2 * p * p))
    for c in range(cases):
        f = _random_pi(rng, p, D, N)
        pf = phi(f)
        back = psi(pf, 0)
        top = _checked_degrees(back)
        ok, prec = _agree(back, f, top)
        checks.append(_check(f"{c:02d}.psi_phi", ok and top >= need, prec, degrees=top))
        opp = binomial_series(PiSeries, p, 1, D, N + 4)
        z = psi(opp * pf, 0)
        top = _checked_degrees(z)
        zero_ok = all(z.coeff(n).is_zero() for n in range(z.top + 1))
        checks.append(_check(f"{c:02d}.psi_kills_phi_multiples", zero_ok and top >= need,
                             z.min_precision(top) if top >= 0 else 0, degrees=top))
        a = 1 + p if c % 2 == 0 else teichmuller(rng.randrange(1, p), p, N + 4)
        lhs = gamma_act(a, pf)
        rhs = phi(gamma_act(a, f))
        top = min(_checked_degrees(lhs), _checked_degrees(rhs))
        ok, prec = _agree(lhs, rhs, top)
        checks.append(_check(f"{c:02d}.gamma_phi_commute", ok and top >= need, prec, degrees=top))
    return _report("operators", {"p": p, "profile": str(profile), "cases": cases, "seed": seed}, checks)


# ----- 2: Mellin -----------------------------------------------------------------

def mellin_suite(p: int, profile: PrecisionProfile, cases: int = 25, seed: int = 0,
                 max_s: int = 10) -> dict:
    rng = random.Random(seed)
    N, DX = profile.digits, profile.x_degree
    checks = []
    for c in range(cases):
        f = _random_x(rng, p, DX, N)
        g = mellin(f, profile)
        back = inverse_mellin(g, profile)
        ok, prec = _agree(back, f, DX)
        checks.append(_check(f"{c:02d}.roundtrip", ok and prec >= MIN_DIGITS, prec))
        for s in range(max_s + 1):
            a = eval_at_chi_power(f, s, 0)
            b = eval_at_chi_power(g, s)
            prec = min(a.abs_precision, b.abs_precision)
            same = PadicScalar(p, (a - b).value, prec).is_zero()
            checks.append(_check(f"{c:02d}.eval_s{s:02d}", same and prec >= MIN_DIGITS, prec))
    return _report("mellin", {"p": p, "profile": str(profile), "cases": cases, "seed": seed}, checks)


# ----- 3: annihilator ------------------------------------------------------------

def annihilator_suite(p: int, profile: PrecisionProfile, cases: int = 10, seed: int = 0) -> dict:
    rng = random.Random(seed)
    N, DX = profile.digits, profile.x_degree
    checks = []
    for k in (1, 2, 3):
        for c in range(cases):
            f = _random_x(rng, p, DX, N)
            rep = annihilator_check(k, f, profile)
            ok = None if rep["status"] == "indeterminate" else rep["status"] == "pass"
            checks.append(_check(f"k{k}.{c:02d}", ok, rep["precision_used"]))
    f = _random_x(rng, p, DX, N)
    wrong = annihilator_check(1, f, profile, indices=[1])
    checks.append(_check("wrong_product_rejected", wrong["t_divisible"] is False, wrong["precision_used"]))
    return _report("annihilator", {"p": p, "profile": str(profile), "cases": cases, "seed": seed}, checks)


# ----- 4: rank one ---------------------------------------------------------------

def twist_values(p: int, r: int, s: int) -> Fraction:
    """Exact value at X = u^s - 1 of the log matrix of the r-th twist.

    With t = log(1 + pi) the Mellin image is e^t (t / (e^{pt} - 1))^r, and
    the value at u^s - 1 is its s-th t-derivative at 0.
    """
    n = s + 1
    # t / (e^{pt} - 1) = (1/p) * sum B_j (pt)^j / j!
    bern = _bernoulli(n)
    base = [Fraction(bern[j]) * Fraction(p) ** j / factorial(j) / p for j in range(n)]
    series = [Fraction(1)] + [Fraction(0)] * (n - 1)
    for _ in range(r):
        series = [sum(series[i] * base[j - i] for i in range(j + 1)) for j in range(n)]
    exp = [Fraction(1, factorial(j)) for j in range(n)]
    prod = [sum(series[i] * exp[j - i] for i in range(j + 1)) for j in range(n)]
    return prod[s] * factorial(s)


def _bernoulli(n: int) -> list[Fraction]:
    B = [Fraction(0)] * (n + 1)
    B[0] = Fraction(1)
    for m in range(1, n + 1):
        B[m] = -sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1)
    return B


def rank_one(profile: PrecisionProfile, p: int = 3, rs=(1, 2, 3), literal: bool = True) -> dict:
    checks = []
    for r in rs:
        w = build_wach("twist", p, profile, r=r)
        L = log_matrix(w)
        m = L.M[0][0]
        n_r = special_element("frak_n", r, p, profile)
        quotient = divide(m, n_r.cap(max(m.precs)))
        q0 = quotient.coeff(0)
        checks.append(_check(f"r{r}.ratio_constant_nonzero", not q0.is_zero(), q0.abs_precision))
        checks.append(_check(f"r{r}.ratio_bounded",
                             log_growth_ok(quotient, order=0, slack=3, upto=profile.x_degree // 2)))
        checks.append(_check(f"r{r}.weights", hodge_filtration(w) == [r]))
        ratios = []
        for s in range(r, r + 6):
            a = eval_at_chi_power(m, s, L.tail)
            exact = twist_values(p, r, s)
            oracle = PadicScalar(p, (a - exact).value, a.abs_precision).is_zero()
            checks.append(_check(f"r{r}.s{s}.closed_form", oracle, a.abs_precision))
            ratios.append(a / eval_at_chi_power(n_r, s, L.tail))
        first = ratios[0]
        unit_ok = all(((x / first) - 1).valuation >= 1 for x in ratios)
        checks.append(_check(f"r{r}.ratio_values_unit_congruent", unit_ok))
        if literal:
            spread = min(PadicScalar(p, (x - first).value, min(x.abs_precision, first.abs_precision))
                         .valuation - first.valuation for x in ratios)
            checks.append(_check(f"r{r}.ratio_values_constant_8_digits", spread >= 8, spread))
    return _report("rank_one", {"p": p, "profile": str(profile), "r": list(rs)}, checks)


# ----- 5 and 6: rank two ---------------------------------------------------------

def rank_two(profile: PrecisionProfile, cases=RANK2_CASES, literal: bool = True) -> dict:
    checks = []
    for p, k, a in cases:
        tag = f"p{p}k{k}a{a}"
        w = wach_for_form(p, k, a, profile)
        L = log_matrix(w)
        checks.append(_check(f"{tag}.M0_is_AT", L.checks["M(0)=A^T"], L.checks["M(0) precision"]))
        checks.append(_check(f"{tag}.weights", hodge_filtration(w) == [0, k - 1]))
        try:
            rep = divisor_check(L, points=k + 4)
        except IndeterminateError as exc:
            checks.append(_check(f"{tag}.divisors", None, detail=str(exc)))
            continue
        checks.append(_check(f"{tag}.zero_orders_match_frak_n", rep["orders"] == rep["predicted"],
                             orders=rep["orders"]))
        checks.append(_check(f"{tag}.quotient_unit", rep["quotient_unit"]))
        checks.append(_check(f"{tag}.entries_nonzero", rep["entries_nonzero"]))
        if literal:
            simple = all(rep["orders"][i] == 1 for i in range(k - 1))
            elsewhere = all(rep["orders"][s] == 0 for s in range(k - 1, k + 5))
            checks.append(_check(f"{tag}.det_simple_zeros_at_u^i-1", simple and elsewhere,
                                 orders=rep["orders"]))
    return _report("rank_two", {"profile": str(profile), "cases": [list(c) for c in cases]}, checks)


# ----- 7: interpolation ----------------------------------------------------------

def _random_module(rng: random.Random, p: int):
    d = rng.choice([2, 3])
    n = rng.randint(1, 3)
    xs = rng.sample([0, p, 2 * p, p * p, -p, p**3, 4 * p], n)
    conds = []
    for x in xs:
        dim = rng.randint(0, d)
        rows = [[rng.randint(-3, 3) for _ in range(d)] for _ in range(dim)]
        if rng.random() < 0.3 and rows:
            rows[0][rng.randrange(d)] = 0
            rows = [[0 if j == 0 else v for j, v in enumerate(row)] for row in rows]
        conds.append((x, rows))
    return build_module(p, d, conds)


def _random_poly(rng: random.Random, deg: int) -> list[Fraction]:
    return [Fraction(rng.randint(-4, 4)) for _ in range(deg + 1)]


def interpolation_suite(p: int = 3, modules: int = 100, samples: int = 20, seed: int = 0) -> dict:
    rng = random.Random(seed)
    checks = []
    agree = total = 0
    divides = True
    for mi in range(modules):
        S = _random_module(rng, p)
        checks.append(_check(f"{mi:03d}.det", det_matches(S)))
        for si in range(samples):
            if si % 2 == 0:
                F = [_random_poly(rng, 4) for _ in range(S.d)]
            else:
                G = [_random_poly(rng, 1) for _ in range(S.d)]
                F = [_sum(pmul(G[i], S.basis[i][j]) for i in range(S.d)) for j in range(S.d)]
            total += 1
            agree += S.satisfies(F) == S.contains(F)
        _, gen, _ = projection_image(S, 0)
        for _ in range(10):
            G = [_random_poly(rng, 2) for _ in range(S.d)]
            first = _sum(pmul(G[i], S.basis[i][0]) for i in range(S.d))
            _, rem = _pdivmod(first, gen)
            divides = divides and not rem
    checks.append(_check("membership_agreement", agree == total, agreed=agree, total=total))
    checks.append(_check("projection_divides", divides))
    return _report("interpolation", {"p": p, "modules": modules, "seed": seed}, checks)


def _sum(polys) -> list[Fraction]:
    from .interpolation import padd

    out: list[Fraction] = []
    for f in polys:
        out = padd(out, f)
    return out


# ----- 8: relations --------------------------------------------------------------

def relations(cases=RANK2_CASES) -> dict:
    checks = []
    for p, k, a in cases:
        M = build_modular(k, a, p, weil_check=False)
        for j in range(k - 1):
            try:
                c2, c1 = derive_relation(M, j)
                ok = c2.value == -a + p ** (j + 1) + p ** (k - 1 - j) and c1.value == p - 1
            except PadicError:
                ok = False
            checks.append(_check(f"p{p}k{k}a{a}.j{j}", ok))
        g, h = relation_at_zero(M)
        display = g * (p ** (k - 2) * (p - 1)) == h * (1 + p ** (k - 2) - a)
        checks.append(_check(f"p{p}k{k}a{a}.display_at_zero", display))
    return _report("relations", {"cases": [list(c) for c in cases]}, checks)


# ----- 9: rho --------------------------------------------------------------------

def rho_suite(profile: PrecisionProfile, cases=((3, 0), (5, 0), (3, 3))) -> dict:
    checks = []
    for p, a in cases:
        try:
            rep = rho_consistency(p, a, profile)
            checks.append(_check(f"p{p}a{a}.kernel_is_image_line", rep["match"]))
        except PadicError as exc:
            checks.append(_check(f"p{p}a{a}.kernel_is_image_line", False, detail=str(exc)))
    return _report("rho", {"profile": str(profile), "cases": [list(c) for c in cases]}, checks)


# ----- 10: Coleman bookkeeping ---------------------------------------------------

def coleman_suite(profile: PrecisionProfile, cases=RANK2_CASES, seed: int = 0) -> dict:
    rng = random.Random(seed)
    checks = []
    for p, k, a in cases:
        for s in range(p - 1):
            tag = f"p{p}k{k}a{a}e{s}"
            data = classify_and_generators(image_conditions(p, k, a, s, profile))
            checks.append(_check(f"{tag}.disjoint", data.checks["I1_I2_disjoint"]))
            checks.append(_check(f"{tag}.X1X2_divides_Xk", data.checks["X1X2_divides_Xk"]))
            checks.append(_check(f"{tag}.witnesses", data.checks["witnesses_in_image"]))
            Xk = x_k(p, k)
            f, g = _random_poly(rng, 3), _random_poly(rng, 3)
            mem = check_membership(pmul(Xk, f), pmul(Xk, g), data)
            checks.append(_check(f"{tag}.Xk_multiples_member", mem["member"]))
            B = all_relation_basis(data)
            again = image_conditions(p, k, a, s, profile, basis_change=B)
            checks.append(_check(f"{tag}.all_relations_after_change", not again.I1 and not again.I2,
                                 I1=again.I1, I2=again.I2))
    return _report("coleman", {"profile": str(profile), "cases": [list(c) for c in cases], "seed": seed},
                   checks)


SUITES = {
    "operators": operators,
    "mellin": mellin_suite,
    "annihilator": annihilator_suite,
    "rank_one": rank_one,
    "rank_two": rank_two,
    "interpolation": interpolation_suite,
    "relations": relations,
    "rho": rho_suite,
    "coleman": coleman_suite,
}
