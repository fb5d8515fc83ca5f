"""Exact truncated Laurent series in q over the integers.

A QSeries is a finite set of integer coefficients together with an absolute
precision P.  It represents

    f = sum_{e < P} a(e) q^e  +  O(q^P),

with every stored exponent strictly below P.  Coefficients are exact Python
integers; there are no floats and no rationals anywhere in this module.
Every operation tracks the precision it can certify and refuses to report a
coefficient beyond it.  For the zero series (no stored entries) the leading
exponent is reported as P itself, which acts as an order sentinel in the
precision rules below.
"""

from __future__ import annotations

import math

__all__ = [
    "QSeries",
    "PrecisionError",
    "NotInvertibleError",
    "make_series",
    "zero",
    "one",
    "add",
    "sub",
    "neg",
    "scale",
    "mul",
    "div",
    "invert",
    "power",
    "pow",
    "coefficient",
    "truncate",
    "shift",
    "first_difference",
    "padic_valuation",
    "padic_valuation_range",
]


class PrecisionError(ValueError):
    """A coefficient or range beyond the certified precision was requested."""


class NotInvertibleError(ValueError):
    """Inversion or division needs a nonzero series with unit leading term."""


def _ceil_div(a: int, b: int) -> int:
    # b > 0; works for negative a
    return -(-a // b)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


class QSeries:
    """Truncated integer Laurent series.  Immutable after construction."""

    __slots__ = ("_c", "prec", "_order")

    def __init__(self, entries, prec: int):
        if not isinstance(prec, int):
            raise ValueError("precision must be an integer")
        d: dict[int, int] = {}
        items = entries.items() if isinstance(entries, dict) else entries
        for e, c in items:
            if not isinstance(e, int) or not isinstance(c, int):
                raise ValueError("exponents and coefficients must be integers")
            if e >= prec:
                raise ValueError(
                    f"exponent {e} is not below the precision {prec}"
                )
            d[e] = d.get(e, 0) + c
        for e in [e for e, c in d.items() if c == 0]:
            del d[e]
        self._c = d
        self.prec = prec
        self._order = min(d) if d else prec

    @classmethod
    def _trusted(cls, d: dict, prec: int) -> "QSeries":
        # d must already be normalized: nonzero values, all exponents < prec
        self = object.__new__(cls)
        self._c = d
        self.prec = prec
        self._order = min(d) if d else prec
        return self

    @property
    def order(self) -> int:
        """Leading exponent; equals prec for the zero series (sentinel)."""
        return self._order

    @property
    def is_zero(self) -> bool:
        return not self._c

    def coefficient(self, e: int) -> int:
        if e >= self.prec:
            raise PrecisionError(
                f"coefficient at q^{e} is not certified (precision {self.prec})"
            )
        return self._c.get(e, 0)

    def items(self):
        """Stored (exponent, coefficient) pairs, sorted by exponent."""
        return sorted(self._c.items())

    def support(self):
        return sorted(self._c)

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.prec == other.prec and self._c == other._c

    __hash__ = None

    def __add__(self, other):
        if isinstance(other, QSeries):
            return add(self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, QSeries):
            return sub(self, other)
        return NotImplemented

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, QSeries):
            return mul(self, other)
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, k):
        if isinstance(k, int):
            return power(self, k)
        return NotImplemented

    def __str__(self):
        if not self._c:
            return f"O(q^{self.prec})"
        parts = []
        for e, c in self.items():
            mag = abs(c)
            if e == 0:
                body = str(mag)
            else:
                head = "q" if e == 1 else f"q^{e}"
                body = head if mag == 1 else f"{mag}*{head}"
            parts.append(("- " if c < 0 else "+ ") + body)
        lead = parts[0][2:] if parts[0][0] == "+" else "-" + parts[0][2:]
        rest = " ".join(parts[1:])
        tail = f" + O(q^{self.prec})"
        return lead + (" " + rest if rest else "") + tail

    def __repr__(self):
        return f"QSeries({self.items()}, prec={self.prec})"


def make_series(entries, prec: int) -> QSeries:
    """Build a series from (exponent, coefficient) pairs with precision prec.

    Repeated exponents are summed.  Every exponent must lie strictly below
    prec, otherwise a ValueError is raised.
    """
    return QSeries(entries, prec)


def zero(prec: int) -> QSeries:
    return QSeries._trusted({}, prec)


def one(prec: int) -> QSeries:
    return QSeries._trusted({0: 1} if prec > 0 else {}, prec)


def coefficient(f: QSeries, e: int) -> int:
    """Certified coefficient of q^e.  Raises PrecisionError for e >= prec."""
    return f.coefficient(e)


def add(f: QSeries, g: QSeries) -> QSeries:
    """Sum at precision min(f.prec, g.prec)."""
    P = min(f.prec, g.prec)
    d = {}
    for e, c in f._c.items():
        if e < P:
            d[e] = c
    for e, c in g._c.items():
        if e < P:
            s = d.get(e, 0) + c
            if s:
                d[e] = s
            elif e in d:
                del d[e]
    return QSeries._trusted(d, P)


def neg(f: QSeries) -> QSeries:
    return QSeries._trusted({e: -c for e, c in f._c.items()}, f.prec)


def sub(f: QSeries, g: QSeries) -> QSeries:
    return add(f, neg(g))


def scale(f: QSeries, c: int) -> QSeries:
    """Multiply every coefficient by the integer c.  Precision is unchanged."""
    if not isinstance(c, int):
        raise ValueError("scalar must be an integer")
    if c == 0:
        return QSeries._trusted({}, f.prec)
    return QSeries._trusted({e: c * v for e, v in f._c.items()}, f.prec)


def truncate(f: QSeries, prec: int) -> QSeries:
    """Forget coefficients at exponents >= prec.  prec may not exceed f.prec."""
    if prec > f.prec:
        raise PrecisionError(
            f"cannot extend precision from {f.prec} to {prec}"
        )
    if prec == f.prec:
        return f
    return QSeries._trusted(
        {e: c for e, c in f._c.items() if e < prec}, prec
    )


def shift(f: QSeries, k: int) -> QSeries:
    """Multiply by q^k exactly: exponents and precision both move by k."""
    return QSeries._trusted({e + k: c for e, c in f._c.items()}, f.prec + k)


# ---------------------------------------------------------------------------
# multiplication

# Largest pairwise-product count handled by direct dictionary scatter.
_SCATTER_CAP = 1 << 16


def _lattice(f: QSeries, g: QSeries | None = None) -> int:
    """gcd of exponent offsets from the leading exponent, over one or two
    series.  The supports lie in order + L*Z for the returned L (L=1 when no
    common stride exists)."""
    L = 0
    w = f._order
    for e in f._c:
        L = math.gcd(L, e - w)
        if L == 1:
            return 1
    if g is not None:
        w = g._order
        for e in g._c:
            L = math.gcd(L, e - w)
            if L == 1:
                return 1
    return L or 1


def _mul_dense(f: QSeries, g: QSeries, P: int) -> QSeries:
    wf, wg = f._order, g._order
    w = wf + wg
    if P <= w:
        return QSeries._trusted({}, P)
    L = _lattice(f, g)
    n_out = _ceil_div(P - w, L)
    bound_f = min(f.prec, P - wg)
    bound_g = min(g.prec, P - wf)
    items_f = [((e - wf) // L, c) for e, c in f._c.items() if e < bound_f]
    items_g = [((e - wg) // L, c) for e, c in g._c.items() if e < bound_g]
    if not items_f or not items_g:
        return QSeries._trusted({}, P)
    if len(items_f) <= len(items_g):
        driver, follower = items_f, items_g
    else:
        driver, follower = items_g, items_f
    n_fol = max(i for i, _ in follower) + 1
    dense = [0] * n_fol
    for i, c in follower:
        dense[i] = c
    out = [0] * n_out
    for i, c in driver:
        if i >= n_out:
            continue
        seg = min(n_out - i, n_fol)
        if seg <= 0:
            continue
        sl = out[i:i + seg]
        out[i:i + seg] = [x + c * y for x, y in zip(sl, dense)]
    d = {w + L * k: v for k, v in enumerate(out) if v}
    return QSeries._trusted(d, P)


def mul(f: QSeries, g: QSeries) -> QSeries:
    """Product at precision min(f.prec + order(g), g.prec + order(f)).

    The zero-series order sentinel (order = prec) makes the rule correct when
    either factor has no certified nonzero term.  Internally small products
    use pairwise scatter; large ones run on dense coefficient arrays
    compressed onto the common exponent lattice.
    """
    P = min(f.prec + g._order, g.prec + f._order)
    if not f._c or not g._c:
        return QSeries._trusted({}, P)
    if len(f._c) * len(g._c) <= _SCATTER_CAP:
        d: dict[int, int] = {}
        gi = g._c.items()
        for e1, c1 in f._c.items():
            bound = P - e1
            for e2, c2 in gi:
                if e2 < bound:
                    e = e1 + e2
                    d[e] = d.get(e, 0) + c1 * c2
        for e in [e for e, c in d.items() if c == 0]:
            del d[e]
        return QSeries._trusted(d, P)
    return _mul_dense(f, g, P)


# ---------------------------------------------------------------------------
# division and inversion

def div(f: QSeries, g: QSeries) -> QSeries:
    """Solve g*h = f for h by forward substitution.

    Requires g nonzero with leading coefficient +-1.  The result is certified
    to precision min(f.prec - order(g), g.prec - 2*order(g) + order(f)),
    matching mul(f, invert(g)).  Cost is (number of stored terms of g) times
    the output length, so division by a lacunary series is cheap.
    """
    if not g._c:
        raise NotInvertibleError("division by a zero series")
    wg = g._order
    u = g._c[wg]
    if u not in (1, -1):
        raise NotInvertibleError(
            f"leading coefficient {u} of the divisor is not a unit"
        )
    Pout = min(f.prec - wg, g.prec - 2 * wg + f._order)
    if not f._c:
        return QSeries._trusted({}, Pout)
    wf = f._order
    w0 = wf - wg
    if Pout <= w0:
        return QSeries._trusted({}, Pout)
    L = _lattice(f, g)
    n = _ceil_div(Pout - w0, L)
    F = [0] * n
    for e, c in f._c.items():
        i = (e - wf) // L
        if i < n:
            F[i] = c
    g_items = sorted(
        ((e - wg) // L, c) for e, c in g._c.items() if e != wg
    )
    g_items = [(k, c) for k, c in g_items if k < n]
    H = [0] * n
    for j in range(n):
        s = F[j]
        for k, c in g_items:
            if k > j:
                break
            s -= c * H[j - k]
        H[j] = s if u == 1 else -s
    d = {w0 + L * j: v for j, v in enumerate(H) if v}
    return QSeries._trusted(d, Pout)


def invert(f: QSeries) -> QSeries:
    """Multiplicative inverse; certified to precision f.prec - 2*order(f).

    Requires a nonzero series whose leading coefficient is +-1.
    """
    if not f._c:
        raise NotInvertibleError("cannot invert a zero series")
    return div(one(f.prec - f._order), f)


def power(f: QSeries, k: int) -> QSeries:
    """f**k by repeated squaring, with the mul/invert precision rules.

    Convention for k == 0: the result is the constant series 1 at precision
    f.prec - 2*order(f), the precision an invert-based chain f^k * f^(-k)
    supports.  (For a zero input that precision is negative and the returned
    object certifies nothing.)
    """
    if not isinstance(k, int):
        raise ValueError("exponent must be an integer")
    if k == 0:
        return one(f.prec - 2 * f._order)
    if k < 0:
        return _power_positive(invert(f), -k)
    return _power_positive(f, k)


def _power_positive(f: QSeries, k: int) -> QSeries:
    result = None
    sq = f
    while k:
        if k & 1:
            result = sq if result is None else mul(result, sq)
        k >>= 1
        if k:
            sq = mul(sq, sq)
    return result


pow = power


# ---------------------------------------------------------------------------
# comparisons and p-adic valuations

def first_difference(f: QSeries, g: QSeries):
    """Smallest exponent below min(f.prec, g.prec) where the coefficients
    differ, or None if the two series agree on that whole range."""
    P = min(f.prec, g.prec)
    bad = None
    for e in set(f._c) | set(g._c):
        if e < P and f._c.get(e, 0) != g._c.get(e, 0):
            if bad is None or e < bad:
                bad = e
    return bad


def padic_valuation(n: int, p: int):
    """v_p(n) for an integer n; math.inf for n == 0."""
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if n == 0:
        return math.inf
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def padic_valuation_range(f: QSeries, p: int, e_lo: int, e_hi: int):
    """Minimum of v_p(a(e)) over e_lo <= e < e_hi; math.inf if all zero.

    Raises PrecisionError when the range reaches beyond the certified
    precision, rather than treating unknown coefficients as zero.
    """
    if not _is_prime(p):
        raise ValueError(f"{p} is not prime")
    if e_lo > e_hi:
        raise ValueError(f"empty range bounds {e_lo} > {e_hi}")
    if e_hi > f.prec:
        raise PrecisionError(
            f"range end {e_hi} exceeds certified precision {f.prec}"
        )
    v = math.inf
    for e, c in f._c.items():
        if e_lo <= e < e_hi:
            w = 0
            while c % p == 0:
                c //= p
                w += 1
            if w < v:
                v = w
                if v == 0:
                    break
    return v
