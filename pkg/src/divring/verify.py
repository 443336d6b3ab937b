"""Verification campaigns and reports.

A campaign is a named list of checks with parameters and one seed.  Each
check draws its randomness from ``random.Random(f"{seed}:{check_id}")``, so
checks are independent of each other and of execution order.  Reports are
deterministic JSON except for the ``timing`` block.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import __version__
from .cyclic import build_paper_example, norm_obstruction_certify
from .fields import GF, artin_schreier_solve, is_prime, parse_fq, trace
from .ore import (OrePoly, evaluate, factor_through_root, frobenius_field, left_divide,
                  perfect_closure_field, right_divide, right_gcd, root_factor)
from .sigma_linear import (build_G, decompose_sigma_delta, printed_identity_residuals,
                           radical_test_G)

SCHEMA = "divring-report/1"


class ConfigError(ValueError):
    """Invalid campaign configuration (exit code 2)."""


@dataclass(frozen=True)
class CheckSpec:
    id: str
    kind: str
    params: dict = field(default_factory=dict)


@dataclass
class Campaign:
    name: str
    seed: int
    checks: list[CheckSpec]
    params: dict = field(default_factory=dict)
    out: str | None = None

    def to_json(self) -> dict:
        return {"name": self.name, "seed": self.seed, "params": _jsonable(self.params),
                "out": self.out,
                "checks": [{"id": c.id, "kind": c.kind, "params": _jsonable(c.params)}
                           for c in self.checks]}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


def check_rng(seed, check_id: str) -> random.Random:
    return random.Random(f"{seed}:{check_id}")


# ---------------------------------------------------------------------------
# check implementations: each returns (passed, counters, details)


def _algebra(params):
    return build_paper_example(params["p"], params.get("prec"))


def check_construction(params, rng):
    A = _algebra(params)
    x, alpha = A.x, A.d(A.alpha)
    th = A.d(A.theta)
    counters = {"s": A.s, "dimension": A.dimension}
    ok = (x ** A.s == alpha)
    counters["x^s_equals_alpha"] = ok
    fails = 0
    for _ in range(params.get("samples", 20)):
        a = A.random_k(rng)
        if x * A.d(a) != A.d(A.k_sigma(a)) * x:
            fails += 1
    counters["twist_rule_failures"] = fails
    witness = (x * th - th * x).is_zero() is False
    counters["noncommutative_witness"] = witness
    counters["sigma_order"] = A.s
    return ok and fails == 0 and witness, counters, {"descriptor": A.to_json()}


def check_ring_axioms(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    bad = {"associativity": 0, "distributivity": 0, "unit": 0}
    for _ in range(n):
        a, b, c = A.random_d(rng), A.random_d(rng), A.random_d(rng)
        if not ((a * b) * c - a * (b * c)).is_zero():
            bad["associativity"] += 1
        if not (a * (b + c) - (a * b + a * c)).is_zero():
            bad["distributivity"] += 1
        if a * A.one != a or A.one * a != a:
            bad["unit"] += 1
    return not any(bad.values()), {"triples": n, **{f"{k}_failures": v for k, v in bad.items()}}, {}


def check_associativity(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    fails = 0
    for _ in range(n):
        a, b, c = A.random_d(rng), A.random_d(rng), A.random_d(rng)
        if not ((a * b) * c - a * (b * c)).is_zero():
            fails += 1
    return fails == 0, {"triples": n, "failures": fails}, {}


def check_inverse(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    fails = 0
    min_prec = None
    for _ in range(n):
        u = A.random_d(rng)
        while u.is_zero():
            u = A.random_d(rng)
        v = u.inverse()
        r1, r2 = u * v - 1, v * u - 1
        if not (r1.is_zero() and r2.is_zero()):
            fails += 1
        prec = min(c.prec for r in (r1, r2) for kc in r.coords for c in kc.coords)
        min_prec = prec if min_prec is None else min(min_prec, prec)
    # a residual known only to precision <= 0 would make the check vacuous
    meaningful = min_prec is None or min_prec > 0
    return fails == 0 and meaningful, {"samples": n, "failures": fails,
                                       "min_residual_precision": str(min_prec)}, {}


def check_norm_forms(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    fails = 0
    for _ in range(n):
        u = A.random_k(rng)
        if not (A.norm(u) - A.norm_closed_form(u)).is_zero():
            fails += 1
    return fails == 0, {"samples": n, "failures": fails}, {}


def check_norm_obstruction(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    report = norm_obstruction_certify(A, n, rng.randrange(2 ** 32))
    equal = report["reasons"].get("equal", 0)
    counters = {"samples": n, "violations": len(report["violations"]), "norm_equals_alpha": equal}
    return not report["violations"] and equal == 0, counters, {"certificate": report}


def check_metro(params, rng):
    A = _algebra(params)
    n = params.get("samples", 20)
    fails = sum(1 for _ in range(n) if not A.metro_identity_check(A.random_d(rng)))
    return fails == 0, {"samples": n, "failures": fails}, {}


def check_brauer(params, rng):
    A = _algebra(params)
    results = {}
    ok = True
    for name, a in (("x", A.x), ("theta", A.d(A.theta))):
        r = A.brauer_check(a)
        results[name] = {k: str(v) if isinstance(v, Fraction) else v for k, v in r.items()}
        ok = ok and r["holds"] and r["dim_C"] == A.s
    return ok, {"elements": 2}, {"results": results}


def _ore_handles(params):
    handles = [frobenius_field(p, n) for p, n in params.get("fields", [(2, 2), (3, 2)])]
    if params.get("perfect_closure", True):
        handles.append(perfect_closure_field(params.get("perfect_p", 3)))
    return handles


def check_ore_euclid(params, rng):
    n = params.get("samples", 20)
    fails = 0
    for H in _ore_handles(params):
        small = not H.is_finite
        for _ in range(n):
            f = OrePoly.random(H, rng, rng.randint(-1, 2 if small else 4))
            g = OrePoly.random(H, rng, rng.randint(0, 1 if small else 3))
            q, r = right_divide(f, g)
            if q * g + r != f or not r.degree < g.degree:
                fails += 1
            q, r = left_divide(f, g)
            if g * q + r != f or not r.degree < g.degree:
                fails += 1
    return fails == 0, {"pairs_per_field": n, "failures": fails}, {}


def check_ore_root_factor(params, rng):
    n = params.get("samples", 20)
    fails = 0
    for H in _ore_handles(params):
        for _ in range(n):
            a = H.random_element(rng, nonzero=True)
            d = OrePoly.random(H, rng, rng.randint(0, 2))
            f = d * root_factor(H, a)
            if evaluate(f, a) or factor_through_root(f, a) != d:
                fails += 1
    return fails == 0, {"planted_per_field": n, "failures": fails}, {}


def check_ore_root_equivalence(params, rng):
    """evaluate(f, a) = 0 iff f is right-divisible by sigma - sigma(a)/a, exhaustively over small twists."""
    p, n = params.get("field", (3, 2))
    H = frobenius_field(p, n)
    elems = list(H.elements())
    nonzero = [a for a in elems if a]
    checked = fails = 0
    max_deg = params.get("max_degree", 1)
    for deg in range(0, max_deg + 1):
        for coeffs in itertools.product(elems, repeat=deg + 1):
            f = OrePoly(H, coeffs)
            for a in nonzero:
                root = not evaluate(f, a)
                divisible = right_divide(f, root_factor(H, a))[1].is_zero()
                checked += 1
                fails += root != divisible
    return fails == 0, {"pairs": checked, "failures": fails}, {}


def check_ore_gcd(params, rng):
    n = params.get("samples", 20)
    fails = 0
    for H in _ore_handles({**params, "perfect_closure": False}):
        for _ in range(n):
            h = OrePoly.random(H, rng, rng.randint(1, 2))
            a = OrePoly.random(H, rng, rng.randint(0, 2))
            b = OrePoly.random(H, rng, rng.randint(0, 2))
            g = right_gcd(a * h, b * h)
            if (right_divide(a * h, g)[1] or right_divide(b * h, g)[1]
                    or right_divide(g, h)[1]):
                fails += 1
    return fails == 0, {"planted_per_field": n, "failures": fails}, {}


def check_decomposition(params, rng):
    H = perfect_closure_field(params.get("perfect_p", 3))
    n = params.get("samples", 20)
    fails = 0
    printed_holds = 0
    for _ in range(n):
        d = OrePoly.random(H, rng, rng.randint(0, 2), valuation_zero=True)
        a = H.random_element(rng)
        u, v = decompose_sigma_delta(a, d)
        if H.sigma(u) + evaluate(d, v) != a:
            fails += 1
        res = printed_identity_residuals(a, d)
        if res["valid"]:
            fails += 1
        if not res["scaled"] or not res["unscaled"]:
            printed_holds += 1
    counters = {"samples": n, "failures": fails, "printed_forms_holding": printed_holds}
    details = {"note": "the printed rearrangements of sum r_i sigma^i(a) hold only for a = 0; "
                       "decomposition uses r_0 a = delta(a) - sum_{i>=1} r_i sigma^i(a)"}
    return fails == 0, counters, details


def check_gbar(params, rng):
    p, n = params["field"]
    H = frobenius_field(p, n)
    b = [parse_fq(t, H.field) for t in params["b"]]
    if any(not c for c in b):
        raise ConfigError("every b_i must be nonzero")
    G = build_G(H, b)
    results = {"radical": radical_test_G(H, b), "dimension_upper": G.dimension_upper()}
    try:
        results["radical_exhaustive"] = radical_test_G(H, b, "exhaustive")
    except Exception as exc:  # bound exceeded: report, do not fail
        results["radical_exhaustive"] = f"skipped: {exc}"
    results["radical_moore"] = radical_test_G(H, b, "moore")
    agree = results["radical_exhaustive"] in (results["radical_moore"],) or isinstance(
        results["radical_exhaustive"], str)
    counters = {"n": len(b), "radical": results.pop("radical"),
                "dimension_upper": results.pop("dimension_upper"), "methods_agree": agree}
    results["presentation"] = G.to_json()
    results["note"] = ("dimension_upper is n minus the rank of the presentation; it is the "
                       "dimension only when the presentation generates the vanishing module")
    return agree, counters, results


def check_artin_schreier(params, rng):
    p, n = params.get("field", (3, 2))
    F = GF(p, n)
    fails = 0
    for b in F.elements():
        y = artin_schreier_solve(b)
        roots = [z for z in F.elements() if z ** p - z == b]
        solvable = trace(b, 1) == 0
        if (y is not None) != solvable or (y is not None and y ** p - y != b):
            fails += 1
        if len(roots) != (p if solvable else 0):
            fails += 1
    return fails == 0, {"elements": F.order, "failures": fails}, {}


CHECKS: dict[str, Callable] = {
    "construction": check_construction,
    "ring-axioms": check_ring_axioms,
    "associativity": check_associativity,
    "inverse": check_inverse,
    "norm-forms": check_norm_forms,
    "norm-obstruction": check_norm_obstruction,
    "metro": check_metro,
    "brauer": check_brauer,
    "ore-euclid": check_ore_euclid,
    "ore-root-factor": check_ore_root_factor,
    "ore-root-equivalence": check_ore_root_equivalence,
    "ore-gcd": check_ore_gcd,
    "decomposition": check_decomposition,
    "gbar": check_gbar,
    "artin-schreier": check_artin_schreier,
}


# ---------------------------------------------------------------------------
# campaigns


def ex1_campaign(p: int, prec=None, samples: int = 20, seed: int = 0) -> Campaign:
    if not is_prime(p):
        raise ConfigError(f"p = {p} is not prime")
    base = {"p": p, "prec": prec, "samples": samples}
    kinds = ["construction", "ring-axioms", "inverse", "norm-forms", "norm-obstruction",
             "metro", "brauer"]
    return Campaign(f"ex1-p{p}", seed, [CheckSpec(k, k, base) for k in kinds], base)


def ore_campaign(samples: int = 20, seed: int = 0) -> Campaign:
    base = {"samples": samples}
    kinds = ["ore-euclid", "ore-root-factor", "ore-root-equivalence", "ore-gcd",
             "decomposition", "artin-schreier"]
    return Campaign("ore-selftest", seed, [CheckSpec(k, k, base) for k in kinds], base)


def gbar_campaign(b: list[str], field: tuple[int, int], seed: int = 0) -> Campaign:
    p, n = field
    if not is_prime(p) or n < 1:
        raise ConfigError(f"invalid field {p},{n}")
    base = {"b": list(b), "field": [p, n]}
    return Campaign("gbar", seed, [CheckSpec("gbar", "gbar", base)], base)


def standard_campaign(samples: int = 10, seed: int = 0) -> Campaign:
    checks = []
    for p in (2, 3, 5):
        for c in ex1_campaign(p, samples=samples, seed=seed).checks:
            checks.append(CheckSpec(f"ex1-p{p}/{c.id}", c.kind, c.params))
    for c in ore_campaign(samples=samples, seed=seed).checks:
        checks.append(CheckSpec(f"ore/{c.id}", c.kind, c.params))
    for b in (["1", "1"], ["1", "[0,1]"]):
        checks.append(CheckSpec(f"gbar/{','.join(b)}", "gbar", {"b": b, "field": [3, 2]}))
    return Campaign("standard", seed, checks, {"samples": samples})


def named_campaign(name: str, samples: int = 10, seed: int = 0) -> Campaign:
    if name == "standard":
        return standard_campaign(samples, seed)
    if name == "empty":
        return Campaign("empty", seed, [], {})
    if name == "ore-selftest":
        return ore_campaign(samples, seed)
    if name.startswith("ex1-p") and name[5:].isdigit():
        return ex1_campaign(int(name[5:]), samples=samples, seed=seed)
    raise ConfigError(f"unknown campaign {name!r}")


CAMPAIGNS = ("standard", "empty", "ore-selftest", "ex1-p2", "ex1-p3", "ex1-p5")


def run_campaign(campaign: Campaign) -> dict:
    """Run every check, recording failures and exceptions without aborting."""
    for spec in campaign.checks:
        if spec.kind not in CHECKS:
            raise ConfigError(f"unknown check kind {spec.kind!r}")
    results = []
    timing = {}
    start = time.perf_counter()
    for spec in campaign.checks:
        t0 = time.perf_counter()
        rng = check_rng(campaign.seed, spec.id)
        entry = {"id": spec.id, "kind": spec.kind}
        try:
            passed, counters, details = CHECKS[spec.kind](spec.params, rng)
            entry.update(status="pass" if passed else "fail",
                         counters=_jsonable(counters), details=_jsonable(details))
        except ConfigError:
            raise
        except Exception as exc:
            entry.update(status="fail", reason=f"{type(exc).__name__}: {exc}",
                         counters={}, details={})
        results.append(entry)
        timing[spec.id] = round(time.perf_counter() - t0, 6)
    summary = {s: sum(1 for r in results if r["status"] == s) for s in ("pass", "fail", "skip")}
    summary["total"] = len(results)
    return {
        "schema": SCHEMA,
        "tool": {"name": "divring", "version": __version__},
        "campaign": campaign.to_json(),
        "checks": results,
        "summary": summary,
        "timing": {"total_seconds": round(time.perf_counter() - start, 6), "checks": timing},
    }


def exit_code(report: dict) -> int:
    return 0 if report["summary"]["fail"] == 0 else 1


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k != "timing"}


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def render_markdown(report: dict) -> str:
    camp = report["campaign"]
    s = report["summary"]
    lines = [f"# Campaign `{camp['name']}`", "",
             f"seed {camp['seed']}, tool {report['tool']['name']} {report['tool']['version']}", "",
             f"{s['pass']} passed, {s['fail']} failed, {s['skip']} skipped of {s['total']}", "",
             "| check | status | counters |", "|---|---|---|"]
    for r in report["checks"]:
        counters = ", ".join(f"{k}={v}" for k, v in sorted(r["counters"].items()))
        if "reason" in r:
            counters = (counters + "; " if counters else "") + r["reason"]
        lines.append(f"| {r['id']} | {r['status']} | {counters} |")
    lines += ["", f"total time {report['timing']['total_seconds']:.2f} s", ""]
    return "\n".join(lines)
