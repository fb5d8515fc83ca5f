"""Verification checks for the catalog: p-adic valuations of the companion
form coefficients, the p-adic limit property, coefficient congruences, Hecke
decompositions against the echelonized spans, and structural consistency
checks.  Every check returns a CheckReport with exact integer witnesses."""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field

from .qseries import (
    QSeries,
    add,
    coefficient,
    first_difference,
    mul,
    padic_valuation,
    padic_valuation_range,
    scale,
    sub,
    truncate,
)
from . import eta
from .eta import CURVES, CurveSpec, catalog_form, eta_quotient_expand
from .operators import apply_U, hecke, is_inert, kronecker, theta, twist
from .spans import build_H, build_psi

__all__ = [
    "CheckReport",
    "FormCache",
    "DEFAULT_CACHE",
    "prime_eligibility",
    "eligible_inert_primes",
    "check_valuation",
    "check_limit",
    "check_congruence",
    "check_hecke_decomposition",
    "check_theta_psi",
    "check_residue",
    "check_nondivisibility",
    "check_twist_consistency",
    "check_support",
    "report_sort_key",
]


def _jsonify(v):
    if v is None or isinstance(v, (bool, str)):
        return v
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, (list, tuple)):
        return [_jsonify(x) for x in v]
    if isinstance(v, dict):
        return {k: _jsonify(x) for k, x in v.items()}
    raise TypeError(f"cannot serialize {v!r}")


@dataclass
class CheckReport:
    """Outcome of one verification check.

    expected and actual are exact witnesses (integers, valuations, or small
    structures of them); integers are serialized as decimal strings so that
    arbitrary-precision values survive JSON round trips."""

    check_id: str
    params: dict
    passed: bool
    expected: object = None
    actual: object = None
    notes: str = ""

    def to_json_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "params": dict(self.params),
            "passed": self.passed,
            "expected": _jsonify(self.expected),
            "actual": _jsonify(self.actual),
            "notes": self.notes,
        }


def report_sort_key(r: CheckReport):
    p = r.params
    return (
        p.get("level", 0),
        p.get("p", 0),
        p.get("m", -1),
        p.get("n", 0),
        r.check_id,
    )


class FormCache:
    """Shared store of catalog expansions, keyed by form name.

    Each name keeps its highest-precision expansion so far; requests at or
    below that precision are answered by truncation.  Access is serialized
    by a reentrant lock, so concurrent checks never tear a read or duplicate
    a full expansion."""

    def __init__(self):
        self._data: dict[str, QSeries] = {}
        self._lock = threading.RLock()

    def series(self, name: str, prec: int) -> QSeries:
        with self._lock:
            f = self._data.get(name)
            if f is not None and f.prec >= prec:
                return truncate(f, prec)
            need = prec if f is None else max(prec, f.prec)
            if name in eta.TWIST_FORMS:
                base, disc = eta.TWIST_FORMS[name]
                g = twist(self.series(base, need), disc)
            else:
                g = catalog_form(name, need)
            self._data[name] = g
            return truncate(g, prec)


DEFAULT_CACHE = FormCache()


def _curve(c) -> CurveSpec:
    if isinstance(c, CurveSpec):
        return c
    return CURVES[c]


def _cache(cache) -> FormCache:
    return DEFAULT_CACHE if cache is None else cache


def prime_eligibility(level: int, p: int) -> tuple[bool, str]:
    """Whether the checks run at (level, p), with a reason when they do not.

    Levels 27, 32 and 64 admit every inert prime not dividing the level;
    levels 36 and 144 additionally require p >= 5."""
    spec = CURVES[level]
    if not is_inert(p, spec.cm_disc):
        return False, f"{p} is not inert in the CM field (disc {spec.cm_disc})"
    if level % p == 0:
        return False, f"{p} divides the level {level}"
    if level in (36, 144) and p < 5:
        return False, f"levels 36 and 144 admit only inert p >= 5, got {p}"
    return True, ""


def eligible_inert_primes(level: int, bound: int) -> list[int]:
    from .qseries import _is_prime

    return [
        p for p in range(2, bound + 1)
        if _is_prime(p) and prime_eligibility(level, p)[0]
    ]


def _require_eligible(level: int, p: int):
    ok, reason = prime_eligibility(level, p)
    if not ok:
        raise ValueError(f"ineligible prime for level {level}: {reason}")


# ---------------------------------------------------------------------------
# the individual checks

def check_valuation(curve, p: int, m: int, cache: FormCache | None = None
                    ) -> CheckReport:
    """v_p of the companion-form coefficient at p^(2m+1) equals m."""
    spec = _curve(curve)
    _require_eligible(spec.level, p)
    e = p ** (2 * m + 1)
    G = _cache(cache).series(f"G{spec.level}", e + 1)
    C = coefficient(G, e)
    v = padic_valuation(C, p)
    return CheckReport(
        check_id="valuation",
        params={"level": spec.level, "p": p, "m": m},
        passed=(v == m),
        expected=m,
        actual=v,
        notes=f"C({e}) = {C}",
    )


def check_limit(curve, p: int, m: int, K: int = 20,
                cache: FormCache | None = None) -> CheckReport:
    """Division-free form of the p-adic limit property: every one of the
    first K coefficients of G|U(p^(2m+1)) - C(p^(2m+1))*g is divisible by
    p^(2m+1)."""
    spec = _curve(curve)
    _require_eligible(spec.level, p)
    pe = p ** (2 * m + 1)
    store = _cache(cache)
    G = store.series(f"G{spec.level}", K * pe + 1)
    GU = apply_U(G, pe)
    C = coefficient(G, pe)
    g = store.series(f"g{spec.level}", K + 1)
    D = sub(GU, scale(g, C))
    e_lo = min(D.order, 1)
    v = padic_valuation_range(D, p, e_lo, K + 1)
    return CheckReport(
        check_id="limit",
        params={"level": spec.level, "p": p, "m": m, "K": K},
        passed=(v >= 2 * m + 1),
        expected=2 * m + 1,
        actual=v,
        notes=(
            f"min v_{p} of G|U({pe}) - C({pe})*g over exponents "
            f"[{e_lo}, {K + 1}); expected value is a lower bound"
        ),
    )


def check_congruence(level: int, p: int, m: int,
                     cache: FormCache | None = None) -> CheckReport:
    """C(p^(2m+1)) = (-1)^m p^m C(p) mod p^(m+1), at levels 27 and 36."""
    if level not in (27, 36):
        raise ValueError(f"congruence check runs at levels 27 and 36, "
                         f"not {level}")
    _require_eligible(level, p)
    e = p ** (2 * m + 1)
    G = _cache(cache).series(f"G{level}", e + 1)
    C1 = coefficient(G, p)
    C2 = coefficient(G, e)
    mod = p ** (m + 1)
    lhs = C2 % mod
    rhs = ((-1) ** m * p ** m * C1) % mod
    return CheckReport(
        check_id="congruence",
        params={"level": level, "p": p, "m": m},
        passed=(lhs == rhs),
        expected=rhs,
        actual=lhs,
        notes=f"C({e}) = {C2}, C({p}) = {C1}, modulus {mod}",
    )


def check_hecke_decomposition(level: int, p: int, n: int, prec: int = 30,
                              cache: FormCache | None = None) -> CheckReport:
    """G|T_2(p^n) = p^n H_(p^n) + C(p^n) g, compared coefficientwise from
    the pole through q^(prec-1)."""
    if level not in (27, 36):
        raise ValueError(f"span decomposition runs at levels 27 and 36, "
                         f"not {level}")
    _require_eligible(level, p)
    pn = p ** n
    store = _cache(cache)
    G = store.series(f"G{level}", prec * pn)
    lhs = hecke(G, 2, p, n)
    C = coefficient(G, pn)
    H = build_H(level, pn, prec)
    rhs = add(scale(H, pn), scale(store.series(f"g{level}", prec), C))
    bad = first_difference(lhs, rhs)
    shared = min(lhs.prec, rhs.prec)
    return CheckReport(
        check_id="hecke-decomposition",
        params={"level": level, "p": p, "n": n, "prec": prec},
        passed=(bad is None and shared >= prec),
        expected=None,
        actual=bad,
        notes=(
            f"first differing exponent of G|T2({pn}) vs {pn}*H_{pn} + "
            f"C({pn})*g on [{-pn}, {shared}), C({pn}) = {C}"
        ),
    )


def check_theta_psi(level: int, p: int, prec: int = 30, m_max: int = 1,
                    cong_K: int = 20,
                    cache: FormCache | None = None) -> CheckReport:
    """G|T_2(p) = -theta(psi_p) on the full shared precision, and the
    derived congruence G|U(p^(2m+1)) = (-1)^(m+1) p^m theta(psi_p)
    mod p^(m+1) on the first cong_K coefficients for m <= m_max."""
    if level not in (27, 36):
        raise ValueError(f"theta-psi identity runs at levels 27 and 36, "
                         f"not {level}")
    _require_eligible(level, p)
    store = _cache(cache)
    psi = build_psi(level, p, prec)
    th = theta(psi)
    G = store.series(f"G{level}", p * prec)
    lhs = hecke(G, 2, p, 1)
    bad = first_difference(lhs, scale(th, -1))
    cong_vals = []
    passed = bad is None
    for m in range(m_max + 1):
        pe = p ** (2 * m + 1)
        GU = apply_U(store.series(f"G{level}", cong_K * pe + 1), pe)
        target = scale(th, (-1) ** (m + 1) * p ** m)
        D = sub(GU, target)
        e_hi = min(D.prec, cong_K + 1)
        v = padic_valuation_range(D, p, min(D.order, e_hi), e_hi)
        cong_vals.append(v)
        if not v >= m + 1:
            passed = False
    return CheckReport(
        check_id="theta-psi",
        params={"level": level, "p": p, "prec": prec, "m_max": m_max},
        passed=passed,
        expected=[None, [m + 1 for m in range(m_max + 1)]],
        actual=[bad, cong_vals],
        notes=(
            "parts: first differing exponent of G|T2(p) vs -theta(psi_p), "
            "then min v_p of G|U(p^(2m+1)) - (-1)^(m+1) p^m theta(psi_p) "
            f"for m = 0..{m_max} (lower bounds)"
        ),
    )


def check_residue(level: int, p: int, prec: int = 30,
                  cache: FormCache | None = None) -> CheckReport:
    """The constant term of G*psi_p vanishes, and the q-coefficient of
    psi_p is -C(p)."""
    if level not in (27, 36):
        raise ValueError(f"residue pairing runs at levels 27 and 36, "
                         f"not {level}")
    _require_eligible(level, p)
    store = _cache(cache)
    psi = build_psi(level, p, prec)
    G = store.series(f"G{level}", prec + p)
    prod = mul(G, psi)
    const = coefficient(prod, 0)
    Cp = coefficient(G, p)
    cpsi = coefficient(psi, 1)
    return CheckReport(
        check_id="residue",
        params={"level": level, "p": p, "prec": prec},
        passed=(const == 0 and cpsi == -Cp),
        expected=[0, -Cp],
        actual=[const, cpsi],
        notes=f"constant term of G*psi_{p}, then q-coefficient of psi_{p} "
              f"against -C({p})",
    )


def check_nondivisibility(curve, p: int,
                          cache: FormCache | None = None) -> CheckReport:
    """p does not divide C(p)."""
    spec = _curve(curve)
    _require_eligible(spec.level, p)
    G = _cache(cache).series(f"G{spec.level}", p + 1)
    C = coefficient(G, p)
    return CheckReport(
        check_id="nondivisibility",
        params={"level": spec.level, "p": p},
        passed=(C % p != 0),
        expected="nonzero residue",
        actual=C % p,
        notes=f"C({p}) = {C} mod {p}",
    )


def check_twist_consistency(prec: int = 200,
                            samples: tuple = ((3, 0), (7, 0)),
                            sample_K: int = 50,
                            cache: FormCache | None = None) -> CheckReport:
    """The two newform twist identities (the level 64 and 144 eta products
    equal the character twists of the level 32 and 36 newforms), plus the
    U-twist commutation for the level 32 companion form at the sample
    (p, m) pairs on sample_K coefficients."""
    store = _cache(cache)
    mismatches = []
    for src, disc, dst in ((32, 8, 64), (36, 12, 144)):
        direct = eta_quotient_expand(eta.ETA_RECIPES[f"g{dst}"], prec)
        twisted = twist(store.series(f"g{src}", prec), disc)
        mismatches.append(first_difference(direct, twisted))
    commute = []
    for p, m in samples:
        pe = p ** (2 * m + 1)
        G = store.series("G32", sample_K * pe + 1)
        lhs = apply_U(twist(G, 8), pe)
        rhs = scale(twist(apply_U(G, pe), 8), kronecker(8, pe))
        commute.append(first_difference(lhs, rhs))
    ok = all(x is None for x in mismatches + commute)
    return CheckReport(
        check_id="twist",
        params={"prec": prec, "samples": [list(s) for s in samples],
                "K": sample_K},
        passed=ok,
        expected=[None] * (len(mismatches) + len(commute)),
        actual=mismatches + commute,
        notes=(
            "first differing exponents: g64 vs g32 twisted by (8|.), "
            "g144 vs g36 twisted by (12|.), then U-twist commutation on "
            "G32 at each sample"
        ),
    )


_SUPPORT_CLASSES = {
    27: ((1, 3), (2, 3)),
    32: ((1, 4), (3, 4)),
    36: ((1, 6), (5, 6)),
    64: ((1, 4), (3, 4)),
    144: ((1, 6), (5, 6)),
}


def check_support(curve, prec: int = 500,
                  cache: FormCache | None = None) -> CheckReport:
    """Support lattices of g and G, and for level 27 the even-power
    degeneration: C(p^(2m)) = 0 and G|T_2(p^(2m)) = p^(2m) H_(p^(2m)) at
    small p^(2m)."""
    spec = _curve(curve)
    store = _cache(cache)
    (g_res, g_mod), (G_res, G_mod) = _SUPPORT_CLASSES[spec.level]
    g = store.series(f"g{spec.level}", prec)
    G = store.series(f"G{spec.level}", prec)
    bad_g = sorted(e for e in g.support() if e % g_mod != g_res)
    bad_G = sorted(e for e in G.support() if e % G_mod != G_res)
    extras = []
    if spec.level == 27:
        for p, m in ((2, 1), (5, 1)):
            pe = p ** (2 * m)
            Gbig = store.series("G27", 31 * pe)
            Ce = coefficient(Gbig, pe)
            lhs = hecke(Gbig, 2, p, 2 * m)
            rhs = scale(build_H(27, pe, 31), pe)
            extras.append([Ce, first_difference(lhs, rhs)])
    ok = (not bad_g and not bad_G
          and all(c == 0 and d is None for c, d in extras))
    return CheckReport(
        check_id="support",
        params={"level": spec.level, "prec": prec},
        passed=ok,
        expected=[[], [], [[0, None]] * len(extras)],
        actual=[bad_g[:5], bad_G[:5], extras],
        notes=(
            f"exponents of g outside {g_res} mod {g_mod}, of G outside "
            f"{G_res} mod {G_mod}"
            + ("; then [C(p^2m), T2 vs span mismatch] at p^2m = 4, 25"
               if spec.level == 27 else "")
        ),
    )
