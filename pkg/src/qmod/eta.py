"""Dedekind eta quotients and the catalog of named forms.

An eta quotient prod_delta eta(delta z)^(r_delta) expands as
q^s * prod_delta prod_n (1 - q^(delta n))^(r_delta) with s = sum(delta *
r_delta) / 24, which must be an integer.  Expansion works with two lacunary
building blocks: the pentagonal-number expansion of prod(1 - q^n) and the
triangular-number expansion of its cube.  Positive powers are folded in as
products; negative powers are divided out term by term, so no dense-by-dense
product ever forms.

The catalog holds the five weight-2 CM newforms that are eta quotients
(levels 27, 32, 36, 64, 144), the weight-2 companion forms with a simple
pole at infinity, and the weight-0 pole generators used by the span
constructions.  The level 64 and 144 companions are quadratic twists of the
level 32 and 36 ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count
from math import gcd

from .qseries import PrecisionError, QSeries, div, mul, one, shift
from .operators import apply_V, twist as _twist_op

__all__ = [
    "EtaQuotient",
    "Twist",
    "CurveSpec",
    "CURVES",
    "ETA_RECIPES",
    "TWIST_FORMS",
    "CATALOG_NAMES",
    "ShiftError",
    "LevelMismatchError",
    "eta_quotient_expand",
    "substitute_qpower",
    "catalog_form",
    "cusp_orders",
    "catalog_manifest",
]


class ShiftError(ValueError):
    """24 does not divide sum(delta * r_delta)."""


class LevelMismatchError(ValueError):
    """A factor's delta does not divide the requested level."""


@dataclass(frozen=True)
class EtaQuotient:
    """Formal product prod eta(delta z)^r over distinct positive deltas."""

    factors: tuple[tuple[int, int], ...]
    level: int

    def __post_init__(self):
        deltas = [d for d, _ in self.factors]
        if any(d < 1 for d in deltas):
            raise ValueError("eta arguments must be positive multiples of z")
        if len(set(deltas)) != len(deltas):
            raise ValueError("repeated delta in eta quotient")
        if self.level < 1:
            raise ValueError("level must be positive")

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self.factors), 2)

    @property
    def shift(self) -> Fraction:
        return Fraction(sum(d * r for d, r in self.factors), 24)


@dataclass(frozen=True)
class Twist:
    """Recipe: twist the same-letter form at base_level by (disc|.)."""

    base_level: int
    disc: int


@dataclass(frozen=True)
class CurveSpec:
    """One catalog row: a CM elliptic curve, its newform recipe and the
    companion weight-2 form with a simple pole at infinity.  Levels 64 and
    144 also carry the twist form of the newform alongside the eta product."""

    level: int
    cm_disc: int
    g_recipe: EtaQuotient | Twist
    G_recipe: EtaQuotient | Twist
    weierstrass: tuple[int, int, int, int, int]
    g_twist: Twist | None = None


ETA_RECIPES: dict[str, EtaQuotient] = {
    "g27": EtaQuotient(((3, 2), (9, 2)), 27),
    "G27": EtaQuotient(((3, 1), (9, 6), (27, -3)), 27),
    "g32": EtaQuotient(((4, 2), (8, 2)), 32),
    "G32": EtaQuotient(((4, 2), (16, 6), (32, -4)), 32),
    "g36": EtaQuotient(((6, 4),), 36),
    "G36": EtaQuotient(((6, 3), (12, 1), (18, 3), (36, -3)), 36),
    "g64": EtaQuotient(((8, 8), (4, -2), (16, -2)), 64),
    "g144": EtaQuotient(((12, 12), (6, -4), (24, -4)), 144),
    "L1": EtaQuotient(((9, 4), (3, -1), (27, -3)), 27),
    "L2": EtaQuotient(((3, 3), (27, -3)), 27),
    "L36": EtaQuotient(((6, 1), (9, 3), (3, -1), (18, -3)), 36),
}

# Forms defined as twists of another catalog form.
TWIST_FORMS: dict[str, tuple[str, int]] = {
    "G64": ("G32", 8),
    "G144": ("G36", 12),
}

CATALOG_NAMES = tuple(sorted(ETA_RECIPES) + sorted(TWIST_FORMS))

CURVES: dict[int, CurveSpec] = {
    27: CurveSpec(27, -3, ETA_RECIPES["g27"], ETA_RECIPES["G27"],
                  (0, 0, 1, 0, -7)),
    32: CurveSpec(32, -4, ETA_RECIPES["g32"], ETA_RECIPES["G32"],
                  (0, 0, 0, 4, 0)),
    36: CurveSpec(36, -3, ETA_RECIPES["g36"], ETA_RECIPES["G36"],
                  (0, 0, 0, 0, 1)),
    64: CurveSpec(64, -4, ETA_RECIPES["g64"], Twist(32, 8),
                  (0, 0, 0, -4, 0), g_twist=Twist(32, 8)),
    144: CurveSpec(144, -3, ETA_RECIPES["g144"], Twist(36, 12),
                   (0, 0, 0, 0, -1), g_twist=Twist(36, 12)),
}


# ---------------------------------------------------------------------------
# expansion

def _euler_factor(delta: int, prec: int) -> QSeries:
    """prod_n (1 - q^(delta n)) via generalized pentagonal numbers."""
    if prec <= 0:
        return QSeries._trusted({}, prec)
    d = {0: 1}
    for k in count(1):
        s = -1 if k % 2 else 1
        e1 = delta * (k * (3 * k - 1) // 2)
        if e1 >= prec:
            break
        d[e1] = s
        e2 = delta * (k * (3 * k + 1) // 2)
        if e2 < prec:
            d[e2] = s
    return QSeries._trusted(d, prec)


def _euler_factor_cubed(delta: int, prec: int) -> QSeries:
    """prod_n (1 - q^(delta n))^3 = sum_k (-1)^k (2k+1) q^(delta k(k+1)/2)."""
    if prec <= 0:
        return QSeries._trusted({}, prec)
    d = {}
    for k in count(0):
        e = delta * (k * (k + 1) // 2)
        if e >= prec:
            break
        d[e] = (2 * k + 1) * (-1 if k % 2 else 1)
    return QSeries._trusted(d, prec)


def eta_quotient_expand(eq: EtaQuotient, prec: int) -> QSeries:
    """q-expansion of the eta quotient with certified precision prec.

    Raises ShiftError when the q-shift sum(delta*r)/24 is not an integer and
    PrecisionError when prec does not reach past the shift.
    """
    s_frac = eq.shift
    if s_frac.denominator != 1:
        raise ShiftError(
            f"sum(delta*r) = {24 * s_frac} is not divisible by 24"
        )
    s = int(s_frac)
    if prec <= s:
        raise PrecisionError(
            f"precision {prec} does not reach past the q-shift {s}"
        )
    pw = prec - s
    mul_atoms: list[QSeries] = []
    div_atoms: list[QSeries] = []
    for delta, r in eq.factors:
        cubes, rest = divmod(abs(r), 3)
        atoms = [_euler_factor_cubed(delta, pw) for _ in range(cubes)]
        atoms += [_euler_factor(delta, pw) for _ in range(rest)]
        (mul_atoms if r > 0 else div_atoms).extend(atoms)
    # fold the widest factors into the scatter product first; later factors
    # each cost (their term count) * (dense length)
    mul_atoms.sort(key=lambda a: -len(a._c))
    acc = one(pw)
    for atom in mul_atoms:
        acc = mul(acc, atom)
    for atom in div_atoms:
        acc = div(acc, atom)
    assert acc.prec == pw
    return shift(acc, s)


# shared with operators.apply_V: substitution q -> q^t
substitute_qpower = apply_V


def catalog_form(name: str, prec: int) -> QSeries:
    """Expand a catalog form to the given precision.

    Eta-quotient entries expand directly; twist entries expand their base
    form at the same precision and twist it coefficientwise.  Every catalog
    expansion has leading coefficient 1.
    """
    if name in ETA_RECIPES:
        f = eta_quotient_expand(ETA_RECIPES[name], prec)
    elif name in TWIST_FORMS:
        base, disc = TWIST_FORMS[name]
        f = _twist_op(catalog_form(base, prec), disc)
    else:
        raise ValueError(f"unknown catalog form {name!r}")
    assert f.coefficient(f.order) == 1
    return f


# ---------------------------------------------------------------------------
# cusp orders

def cusp_orders(eq: EtaQuotient, level: int) -> list[tuple[int, Fraction]]:
    """Vanishing order at each cusp of Gamma_0(level), one cusp per divisor
    d of the level (the cusp with denominator d).  Exact rationals.

    The entry at d = level is the order at infinity, i.e. the leading
    exponent of the q-expansion.  Orders at other cusps are in terms of the
    local uniformizer and may be non-integral.
    """
    for delta, _ in eq.factors:
        if level % delta != 0:
            raise LevelMismatchError(
                f"delta {delta} does not divide level {level}"
            )
    out = []
    for d in sorted(k for k in range(1, level + 1) if level % k == 0):
        total = Fraction(0)
        for delta, r in eq.factors:
            g = gcd(d, delta)
            total += Fraction(g * g * r, gcd(d, level // d) * d * delta)
        out.append((d, Fraction(level, 24) * total))
    return out


# ---------------------------------------------------------------------------
# manifest

def _format_factors(recipe) -> str:
    if isinstance(recipe, EtaQuotient):
        return "[" + ",".join(f"({d},{r})" for d, r in recipe.factors) + "]"
    return f"twist(g{recipe.base_level},{recipe.disc})"


def catalog_manifest() -> str:
    """Human-readable catalog dump, one record per line:

        name level [(delta,r),...] cm_disc (a1,a2,a3,a4,a6)

    Forms without an attached curve carry '-' in the curve fields.  Twist
    recipes show twist(base,disc) in the factor slot.
    """
    lines = []
    curve_of = {}
    for level, spec in CURVES.items():
        curve_of[f"g{level}"] = spec
        curve_of[f"G{level}"] = spec
    for name in CATALOG_NAMES:
        if name in ETA_RECIPES:
            recipe = ETA_RECIPES[name]
            level = recipe.level
            factors = _format_factors(recipe)
        else:
            base, disc = TWIST_FORMS[name]
            level = curve_of[name].level
            factors = f"twist({base},{disc})"
        spec = curve_of.get(name)
        if spec is not None:
            cm = str(spec.cm_disc)
            wc = "(" + ",".join(str(a) for a in spec.weierstrass) + ")"
        else:
            cm = "-"
            wc = "-"
        lines.append(f"{name} {level} {factors} {cm} {wc}")
    return "\n".join(lines) + "\n"
