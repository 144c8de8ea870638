"""Generalized and simple continued fractions at fixed-point precision.

Provides convergent-recurrence evaluation with periodic rescaling,
simple-CF expansion of rationals and rounded decimals, a registry of
machine-generated conjecture records (pi, e, log 2, Catalan, zeta(3))
with numeric verification against independently computed references,
the Rogers-Ramanujan fraction, and the classical Gamma-ratio fraction
checked against a Spouge-series Gamma.

Throughout, a "digits" argument counts fractional digits and equals the
scale of the returned BigDecimal.
"""

import json
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from . import DomainError
from .bigdec import BigDecimal, exp_bd, iroot, ln_bd
from .pi_engine import guard_digits, pi_chudnovsky

_DEPTH_CAP = 10 ** 6
_BITS_PER_DIGIT = math.log2(10)
_DIGITS_PER_BIT = math.log10(2)


def _poly_eval(coeffs, n: int) -> int:
    """Integer polynomial in n, coefficients highest degree first."""
    acc = 0
    for c in coeffs:
        acc = acc * n + c
    return acc


@dataclass(frozen=True)
class CFSpec:
    """Term generators of a generalized continued fraction

        a0 + b1/(a1 + b2/(a2 + ...))

    truncated at `depth`. Each side comes either from an integer
    polynomial in n (coefficients highest degree first, degree <= 6)
    or from an explicit term list covering n = 1..depth.
    """

    a0: int
    depth: int
    a_poly: tuple | None = None
    b_poly: tuple | None = None
    a_list: tuple | None = None
    b_list: tuple | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise DomainError("depth must be nonnegative")
        for poly, terms, label in (
            (self.a_poly, self.a_list, "a"),
            (self.b_poly, self.b_list, "b"),
        ):
            if (poly is None) == (terms is None):
                raise DomainError(f"exactly one of {label}_poly/{label}_list required")
            if poly is not None and len(poly) > 7:
                raise DomainError(f"{label}_poly degree exceeds 6")
            source = poly if poly is not None else terms
            if not all(isinstance(c, int) for c in source):
                raise DomainError(f"{label} terms must be integers")
            if terms is not None and len(terms) < self.depth:
                raise DomainError(f"{label}_list shorter than depth")

    @classmethod
    def simple(cls, coeffs) -> "CFSpec":
        """Simple CF [a0; a1, a2, ...]: all partial numerators 1."""
        coeffs = tuple(int(c) for c in coeffs)
        if not coeffs:
            raise DomainError("empty coefficient list")
        n = len(coeffs) - 1
        return cls(a0=coeffs[0], depth=n, a_list=coeffs[1:], b_list=(1,) * n)

    def with_depth(self, depth: int) -> "CFSpec":
        return replace(self, depth=depth)

    def term_a(self, n: int) -> int:
        return _poly_eval(self.a_poly, n) if self.a_poly is not None else self.a_list[n - 1]

    def term_b(self, n: int) -> int:
        return _poly_eval(self.b_poly, n) if self.b_poly is not None else self.b_list[n - 1]


@dataclass(frozen=True)
class EvalResult:
    """Truncated CF value with the |x_d - x_{d-1}| convergence estimate.

    `exact` carries h_d/k_d as a Fraction while the recurrence ran
    without rescaling (always the case for short simple CFs), else None.
    """

    value: BigDecimal
    error: BigDecimal | None
    depth: int
    exact: Fraction | None


def _run_recurrence(a0: int, pairs, w: int):
    """Convergent recurrence h_n = a_n h_{n-1} + b_n h_{n-2} (k alike).

    Both numerator and denominator tracks are floor-divided by a common
    power of ten whenever they outgrow the working budget; that keeps
    the ratios to a relative error around 10^-(w+10) per rescale while
    bounding every integer near w+60 digits.
    """
    hp, h = 1, a0
    kp, k = 0, 1
    exact = True
    cap_bits = int((w + 60) * _BITS_PER_DIGIT)
    for an, bn in pairs:
        h, hp = an * h + bn * hp, h
        k, kp = an * k + bn * kp, k
        m = max(h.bit_length(), k.bit_length(), hp.bit_length(), kp.bit_length())
        if m > cap_bits:
            drop = 10 ** (int(m * _DIGITS_PER_BIT) - (w + 10))
            h //= drop
            hp //= drop
            k //= drop
            kp //= drop
            exact = False
    return h, k, hp, kp, exact


def eval_cf(spec: CFSpec, digits: int) -> EvalResult:
    """Evaluate the depth-truncated fraction to `digits` fractional digits."""
    if digits < 1:
        raise DomainError("digits must be positive")
    w = digits + guard_digits(spec.depth + 2)
    pairs = ((spec.term_a(n), spec.term_b(n)) for n in range(1, spec.depth + 1))
    h, k, hp, kp, exact = _run_recurrence(spec.a0, pairs, w)
    if k == 0:
        raise DomainError("zero denominator in the final convergent")
    value = BigDecimal.from_fraction(Fraction(h, k), digits)
    error = None
    if kp != 0:
        diff = abs(Fraction(h, k) - Fraction(hp, kp))
        error = BigDecimal.from_fraction(diff, digits + 10)
    return EvalResult(value=value, error=error, depth=spec.depth,
                      exact=Fraction(h, k) if exact else None)


@dataclass(frozen=True)
class ExpandResult:
    """Simple CF coefficients; `truncated` marks an early stop because
    the input's precision could no longer certify the next term."""

    coeffs: tuple
    truncated: bool


def _expand_exact(fr: Fraction, max_terms: int):
    coeffs = []
    num, den = fr.numerator, fr.denominator
    while den and len(coeffs) < max_terms:
        a, rem = divmod(num, den)
        coeffs.append(a)
        num, den = den, rem
    truncated = den != 0
    if not truncated and len(coeffs) > 1 and coeffs[-1] == 1:
        # canonical form: fold a trailing 1 into the previous term
        coeffs.pop()
        coeffs[-1] += 1
    return ExpandResult(tuple(coeffs), truncated)


def _expand_interval(lo: Fraction, hi: Fraction, max_terms: int):
    coeffs = []
    while len(coeffs) < max_terms:
        flo = lo.numerator // lo.denominator
        fhi = hi.numerator // hi.denominator
        if flo != fhi:
            return ExpandResult(tuple(coeffs), True)
        coeffs.append(flo)
        rlo, rhi = lo - flo, hi - flo
        if rlo == 0 or rhi == 0:
            return ExpandResult(tuple(coeffs), True)
        lo, hi = 1 / rhi, 1 / rlo
    return ExpandResult(tuple(coeffs), False)


def simple_cf_expand(x, max_terms: int) -> ExpandResult:
    """Expand x into [a0; a1, a2, ...] by floor/reciprocal steps.

    Exact (and canonically terminated, last coefficient >= 2) for ints
    and Fractions. A BigDecimal is treated as its value plus/minus one
    ulp, and coefficients are emitted only while both interval ends
    agree, so every returned term is certified by the input precision.
    """
    if max_terms < 1:
        raise DomainError("max_terms must be positive")
    if isinstance(x, BigDecimal):
        v = x.as_fraction()
        eps = x.ulp()
        return _expand_interval(v - eps, v + eps, max_terms)
    if isinstance(x, float):
        raise DomainError("binary floats are ambiguous here; pass a Fraction or BigDecimal")
    return _expand_exact(Fraction(x), max_terms)


# -- reference constants ----------------------------------------------------

_REF_NAMES = ("pi", "e", "log2", "catalan", "zeta3", "sqrt5")


def _e_series(digits: int) -> BigDecimal:
    g = 15
    unit = 10 ** (digits + g)
    term, total, k = unit, unit, 1
    while term:
        term //= k
        total += term
        k += 1
    return BigDecimal(total, digits + g).at_scale(digits)


def _log2_series(digits: int) -> BigDecimal:
    # log 2 = 2 atanh(1/3) = 2 sum 3^-(2k+1)/(2k+1)
    g = 15
    p = 10 ** (digits + g) // 3
    total, k = 0, 0
    while p:
        total += p // (2 * k + 1)
        p //= 9
        k += 1
    return BigDecimal(2 * total, digits + g).at_scale(digits)


def _alternating_accel(a_den, digits: int) -> Fraction:
    """Chebyshev acceleration of sum_k (-1)^k / a_den(k) for positive
    increasing a_den; error falls like (3+sqrt 8)^-n with n terms."""
    n = int(1.35 * (digits + 8)) + 4
    dprev, d = 1, 3  # d_n = ((3+2sqrt2)^n + (3-2sqrt2)^n)/2, Pell recurrence
    for _ in range(n - 1):
        dprev, d = d, 6 * d - dprev
    unit = 10 ** (digits + 12)
    b, c, s = -1, -d, 0
    for k in range(n):
        c = b - c
        s += c * unit // a_den(k)
        b, r = divmod(2 * b * (k + n) * (k - n), (2 * k + 1) * (k + 1))
        if r:
            raise DomainError("acceleration weights left integer range")
    return Fraction(s, d * unit)


def _sqrt_int(v: int, digits: int) -> BigDecimal:
    g = digits + 4
    return BigDecimal(math.isqrt(v * 10 ** (2 * g)), g).at_scale(digits)


@lru_cache(maxsize=64)
def reference_constant(name: str, digits: int) -> BigDecimal:
    """Independent high-precision references: pi (Chudnovsky), e
    (factorial series), log2 (atanh series), catalan and zeta3
    (accelerated alternating series), sqrt5 (integer square root)."""
    if name not in _REF_NAMES:
        raise DomainError(f"unsupported constant {name!r}")
    if not 1 <= digits <= 500:
        raise DomainError("digits must be in 1..500")
    if name == "pi":
        return pi_chudnovsky(digits)
    if name == "e":
        return _e_series(digits)
    if name == "log2":
        return _log2_series(digits)
    if name == "catalan":
        fr = _alternating_accel(lambda k: (2 * k + 1) ** 2, digits)
        return BigDecimal.from_fraction(fr, digits)
    if name == "zeta3":
        # zeta(3) = (4/3) eta(3) with eta(3) = sum (-1)^k/(k+1)^3
        fr = _alternating_accel(lambda k: (k + 1) ** 3, digits)
        return BigDecimal.from_fraction(Fraction(4, 3) * fr, digits)
    return _sqrt_int(5, digits)


def catalan_via_binomial(digits: int) -> BigDecimal:
    """Second, structurally different Catalan series for cross-checks:
    G = (pi/8) ln(2+sqrt3) + (3/8) sum_{n>=0} 1/(binom(2n,n)(2n+1)^2)."""
    w = digits + 12
    unit = 10 ** w
    t, total, n = unit, unit, 1
    while t:
        t = t * n * (2 * n - 1) // (2 * (2 * n + 1) ** 2)
        total += t
        n += 1
    s = BigDecimal(3 * total, w)
    root3 = _sqrt_int(3, w)
    lnpart = ln_bd(root3 + BigDecimal.from_int(2).at_scale(w), w)
    value = pi_chudnovsky(w) * lnpart + s
    return value.divide(BigDecimal.from_int(8), digits)


def zeta3_via_binomial(digits: int) -> BigDecimal:
    """Apery-style cross-check: zeta(3) = (5/2) sum (-1)^(n-1) /
    (n^3 binom(2n,n))."""
    w = digits + 12
    unit = 10 ** w
    t = unit // 2  # n = 1
    total, sign, n = t, 1, 2
    while t:
        t = t * (n - 1) ** 3 // (2 * n * n * (2 * n - 1))
        sign = -sign
        total += sign * t
        n += 1
    return BigDecimal.from_fraction(Fraction(5 * total, 2 * unit), digits)


# -- conjecture registry ----------------------------------------------------

@dataclass(frozen=True)
class ConjectureRecord:
    """One machine-generated CF identity: transform(constant) equals the
    fraction generated by (a0, a_poly, b_poly). transform holds Mobius
    coefficients (alpha, beta, gamma, delta) for (alpha c + beta) /
    (gamma c + delta)."""

    name: str
    constant: str
    transform: tuple
    a0: int
    a_poly: tuple
    b_poly: tuple
    status: str
    reconstructed: bool
    note: str

    def cf_spec(self, depth: int) -> CFSpec:
        return CFSpec(a0=self.a0, depth=depth, a_poly=self.a_poly, b_poly=self.b_poly)

    def lhs_value(self, digits: int) -> BigDecimal:
        c = reference_constant(self.constant, digits + 10).as_fraction()
        al, be, ga, de = self.transform
        den = ga * c + de
        if den == 0:
            raise DomainError(f"transform pole in record {self.name}")
        return BigDecimal.from_fraction((al * c + be) / den, digits)


# first printed partial fractions (n, b_n, a_n); loader refuses a
# registry whose generators drift from these anchors
_ANCHORS = {
    "pi": ((1, -1, 6), (2, -6, 9), (3, -15, 12), (4, -28, 15)),
    "e": ((1, -1, 4), (2, -2, 5), (3, -3, 6), (4, -4, 7)),
    "log2": ((1, -8, 14), (2, -72, 30)),
    "catalan": ((1, -2, 7), (2, -32, 19)),
    "zeta3": ((1, -1, 9), (2, -64, 35)),
}


@lru_cache(maxsize=1)
def load_registry() -> dict:
    """Registry of built-in conjecture records, keyed by name."""
    text = resources.files("ramkit").joinpath("data/conjectures.jsonl").read_text()
    registry = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        raw = json.loads(line)
        if raw.get("schema") != 1:
            raise DomainError(f"unknown registry schema in record {raw.get('name')!r}")
        rec = ConjectureRecord(
            name=raw["name"],
            constant=raw["constant"],
            transform=tuple(raw["transform"]),
            a0=raw["a0"],
            a_poly=tuple(raw["a_poly"]),
            b_poly=tuple(raw["b_poly"]),
            status=raw["status"],
            reconstructed=raw["reconstructed"],
            note=raw.get("note", ""),
        )
        for n, bn, an in _ANCHORS.get(rec.name, ()):
            if _poly_eval(rec.b_poly, n) != bn or _poly_eval(rec.a_poly, n) != an:
                raise DomainError(f"registry record {rec.name} fails its anchor terms")
        registry[rec.name] = rec
    return registry


@dataclass(frozen=True)
class VerifyResult:
    name: str
    status: str
    digits: int
    match: bool
    abs_error: BigDecimal
    depth_used: int
    converged: bool


def verify_conjecture(rec, digits: int) -> VerifyResult:
    """Numerically test one registry record to `digits` digits.

    The fraction is evaluated on a doubling depth schedule until two
    successive convergents agree to digits+5 places or the depth cap of
    10^6 is hit; non-convergence is reported in the result rather than
    raised. match means |cf - transform(reference)| < 10^-digits.
    """
    if isinstance(rec, str):
        registry = load_registry()
        if rec not in registry:
            raise DomainError(f"unknown conjecture {rec!r}")
        rec = registry[rec]
    if not 1 <= digits <= 200:
        raise DomainError("digits must be in 1..200")
    w = digits + 15
    lhs = rec.lhs_value(w)
    agree = Fraction(1, 10 ** (digits + 5))
    depth = 50
    while True:
        res = eval_cf(rec.cf_spec(depth), w)
        if res.error is not None and res.error.as_fraction() < agree:
            converged = True
            break
        if depth >= _DEPTH_CAP:
            converged = False
            break
        depth = min(depth * 2, _DEPTH_CAP)
    err = abs(res.value - lhs)
    return VerifyResult(
        name=rec.name,
        status=rec.status,
        digits=digits,
        match=err.as_fraction() < Fraction(1, 10 ** digits),
        abs_error=err,
        depth_used=depth,
        converged=converged,
    )


# -- Rogers-Ramanujan -------------------------------------------------------

def rogers_ramanujan_R(q: BigDecimal, digits: int, depth: int) -> BigDecimal:
    """R(q) = q^(1/5) / (1 + q/(1 + q^2/(1 + ...))), depth partial
    numerators, evaluated bottom-up. The fifth root comes from an exact
    integer Newton root on the scaled mantissa."""
    if not isinstance(q, BigDecimal):
        raise DomainError("q must be a BigDecimal")
    if depth < 1:
        raise DomainError("depth must be positive")
    one_raw = BigDecimal.from_int(1)
    if q.sign <= 0 or not q < one_raw:
        raise DomainError("q must lie in (0,1)")
    w = digits + guard_digits(depth + 2)
    qs = q.at_scale(w)
    powers = [qs]
    for _ in range(depth - 1):
        powers.append((powers[-1] * qs).at_scale(w))
    one = one_raw.at_scale(w)
    t = one
    for j in range(depth - 1, -1, -1):
        t = one + powers[j].divide(t, w)
    root = BigDecimal(iroot(qs.mantissa * 10 ** (4 * w), 5), w)
    return root.divide(t, digits)


def rr_series_quotient(q: BigDecimal, digits: int, terms: int) -> BigDecimal:
    """Independent oracle for R(q): the theta-like quotient
    q^(1/5) H(q)/G(q) with
      G(q) = sum q^(n^2)   / ((1-q)...(1-q^n)),
      H(q) = sum q^(n^2+n) / ((1-q)...(1-q^n)),
    both truncated at `terms`."""
    if q.sign <= 0 or not q < BigDecimal.from_int(1):
        raise DomainError("q must lie in (0,1)")
    w = digits + 12
    qs = q.at_scale(w)
    one = BigDecimal.from_int(1).at_scale(w)
    g_sum, h_sum = one, one
    prod = one
    qn = one          # q^n
    qn2 = one         # q^(n^2)
    qodd = qs         # q^(2n-1)
    qsq = (qs * qs).at_scale(w)
    for _ in range(1, terms + 1):
        qn = (qn * qs).at_scale(w)
        qn2 = (qn2 * qodd).at_scale(w)
        qodd = (qodd * qsq).at_scale(w)
        prod = (prod * (one - qn)).at_scale(w)
        g_sum = g_sum + qn2.divide(prod, w)
        h_sum = h_sum + (qn2 * qn).divide(prod, w)
    root = BigDecimal(iroot(qs.mantissa * 10 ** (4 * w), 5), w)
    return (root * h_sum.divide(g_sum, w)).at_scale(digits)


# -- Gamma ratio fraction ---------------------------------------------------

def gamma_bd(z, digits: int) -> BigDecimal:
    """Gamma(z) for rational z in (0, 24] by the Spouge series with
    a = ceil(digits ln10/ln 2pi) terms; relative error below 10^-digits."""
    if digits > 60:
        raise DomainError("gamma budget capped at 60 digits")
    zf = z.as_fraction() if isinstance(z, BigDecimal) else Fraction(z)
    if zf <= 0 or zf > 24:
        raise DomainError("z must lie in (0, 24]")
    w = digits + 14
    a = int(digits * math.log(10) / math.log(2 * math.pi)) + 4
    zs = zf - 1
    base = BigDecimal.from_fraction(zs + a, w + 4)
    expo = BigDecimal.from_fraction(zf - Fraction(1, 2), w + 4)
    pow_part = exp_bd((expo * ln_bd(base, w + 4)).at_scale(w + 4), w)
    # e^-(zs+a) is tiny; widen its scale so it keeps w significant digits
    drop = int(float(zs + a) * math.log10(math.e)) + 6
    exp_neg = exp_bd(BigDecimal.from_fraction(-(zs + a), w + 4), w + drop)
    two_pi = pi_chudnovsky(w + 2) * BigDecimal.from_int(2)
    total = two_pi.sqrt(w + 4)  # c_0 = sqrt(2 pi)
    e1 = exp_bd(BigDecimal.from_int(1).at_scale(w + 4), w + 4)
    ek = exp_bd(BigDecimal.from_int(a - 1).at_scale(w + 4), w + 4)  # e^(a-k)
    fact = 1
    for k in range(1, a):
        if k > 1:
            fact *= k - 1
        ck = BigDecimal.from_int((a - k) ** (k - 1)) * BigDecimal.from_int(a - k).sqrt(w + 4) * ek
        ck = ck.divide(BigDecimal.from_int(fact), w + 4)
        den = BigDecimal.from_fraction(zs + k, w + 4)
        term = ck.divide(den, w + 4)
        total = total + term if k % 2 == 1 else total - term
        ek = ek.divide(e1, w + 4)
    return (pow_part * exp_neg * total).at_scale(digits)


@dataclass(frozen=True)
class GammaCheck:
    lhs: BigDecimal
    rhs: BigDecimal
    abs_error: BigDecimal
    depth: int


def gamma_ratio_cf_check(x, digits: int, depth: int = 100000) -> GammaCheck:
    """Test {Gamma((x+1)/4)/Gamma((x+3)/4)}^2 = 4/(x + 1^2/(2x + 3^2/(2x
    + ...))) numerically.

    lhs uses the Spouge Gamma, rhs the convergent recurrence on the
    integer-rescaled fraction (rational x = u/v multiplies b_n by v^2).
    The fraction's tail only decays like depth^-x, so abs_error is
    dominated by CF truncation, not by Gamma accuracy.
    """
    xf = x.as_fraction() if isinstance(x, BigDecimal) else Fraction(x)
    if xf <= 0 or xf > 10:
        raise DomainError("x must lie in (0, 10]")
    if digits > 40:
        raise DomainError("digits capped at 40 (gamma budget)")
    w = digits + 8
    g1 = gamma_bd((xf + 1) / 4, digits + 6)
    g2 = gamma_bd((xf + 3) / 4, digits + 6)
    ratio = g1.divide(g2, w)
    lhs = (ratio * ratio).at_scale(digits)
    u, v = xf.numerator, xf.denominator

    def pairs():
        yield (u, 4 * v)
        for n in range(2, depth + 1):
            yield (2 * u, v * v * (2 * n - 3) ** 2)

    h, k, _, _, _ = _run_recurrence(0, pairs(), w)
    if k == 0:
        raise DomainError("zero denominator in the final convergent")
    rhs = BigDecimal.from_fraction(Fraction(h, k), digits)
    return GammaCheck(lhs=lhs, rhs=rhs, abs_error=abs(lhs - rhs), depth=depth)
