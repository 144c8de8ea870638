"""Ramanujan sums, the tau function, Ramanujan subspaces, and
integer-period estimation.

c_q(n) is evaluated exactly through the Mobius-sum formula

    c_q(n) = sum_{d | gcd(q, n)} mu(q/d) * d

with the trigonometric definition kept only as a floating cross-check.
Signal decomposition projects onto the circulant bases B_q for each
divisor q of the length, solving the square system exactly over
Fractions when the samples are rational, least squares otherwise.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import DomainError
from .numtheory import (
    divisors,
    gcd,
    mobius,
    mobius_sieve,
    primes_up_to,
    totient,
)
from .pi_engine import pi_chudnovsky

_EXACT_SOLVE_LIMIT = 144  # exact rational decomposition up to this length
_TRIG_TOLERANCE = 1e-9


def ramanujan_sum(q: int, n: int) -> int:
    """c_q(n), exact, via the Mobius formula over divisors of gcd(q, n)."""
    if q < 1:
        raise DomainError("modulus q must be >= 1")
    g = gcd(q, abs(n))  # c_q is even and q-periodic in n
    return sum(mobius(q // d) * d for d in divisors(g))


def ramanujan_sum_trig(q: int, n: int) -> float:
    """c_q(n) from its defining cosine sum; floating cross-check only."""
    if q < 1:
        raise DomainError("modulus q must be >= 1")
    return sum(
        math.cos(2.0 * math.pi * k * n / q)
        for k in range(1, q + 1)
        if gcd(k, q) == 1
    )


def _sums_for_fixed_n(n: int, q_limit: int) -> list[int]:
    """c_q(n) for q = 0..q_limit (index 0 unused) with one Mobius sieve."""
    mu = mobius_sieve(q_limit)
    out = [0] * (q_limit + 1)
    for d in divisors(n):
        if d > q_limit:
            break
        for q in range(d, q_limit + 1, d):
            out[q] += mu[q // d] * d
    return out


@dataclass(frozen=True)
class SumPropertyReport:
    """Outcome of the exhaustive Ramanujan-sum property checks.

    diagonal_sums records sum_{n<q} c_q(n)^2 for each q; no closed form
    is asserted for it, the value is only reported.
    """

    q_max: int
    n_max: int
    orthogonal_pairs: int
    coprime_pairs: int
    diagonal_sums: dict[int, int]
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def check_sum_properties(q_max: int, n_max: int) -> SumPropertyReport:
    """Verify periodicity, integrality, multiplicativity and orthogonality.

    Checks run exhaustively for q <= q_max (periodicity scanned for
    n <= n_max); every failure is listed in the report rather than
    raised. Orthogonality sums run over one lcm period per pair, so
    large q_max is quadratically slow.
    """
    if not 1 <= q_max <= 200 or not 1 <= n_max <= 200:
        raise DomainError("q_max and n_max must lie in 1..200")
    bad: list[str] = []
    table = {q: [ramanujan_sum(q, n) for n in range(q)] for q in range(1, q_max + 1)}

    # trig agreement doubles as the integrality check
    for q in range(1, q_max + 1):
        for n in range(q):
            t = ramanujan_sum_trig(q, n)
            if abs(t - table[q][n]) > _TRIG_TOLERANCE:
                bad.append(f"trig mismatch at q={q} n={n}: {t} vs {table[q][n]}")

    for q in range(1, q_max + 1):
        if table[q][0] != totient(q):
            bad.append(f"c_{q}(0) != phi({q})")
        for n in range(n_max + 1):
            if ramanujan_sum(q, n + q) != table[q][n % q]:
                bad.append(f"periodicity fails at q={q} n={n}")

    coprime_pairs = 0
    for q1 in range(1, q_max + 1):
        for q2 in range(q1 + 1, q_max // q1 + 1):
            if gcd(q1, q2) != 1:
                continue
            coprime_pairs += 1
            prod = table[q1 * q2]
            for n in range(q1 * q2):
                if prod[n] != table[q1][n % q1] * table[q2][n % q2]:
                    bad.append(f"multiplicativity fails at q1={q1} q2={q2} n={n}")
                    break

    orthogonal_pairs = 0
    for q1 in range(1, q_max + 1):
        for q2 in range(q1 + 1, q_max + 1):
            orthogonal_pairs += 1
            l = q1 * q2 // gcd(q1, q2)
            s = sum(table[q1][n % q1] * table[q2][n % q2] for n in range(l))
            if s != 0:
                bad.append(f"orthogonality fails at q1={q1} q2={q2}: sum={s}")

    diagonal = {
        q: sum(v * v for v in table[q]) for q in range(1, q_max + 1)
    }
    return SumPropertyReport(
        q_max=q_max,
        n_max=n_max,
        orthogonal_pairs=orthogonal_pairs,
        coprime_pairs=coprime_pairs,
        diagonal_sums=diagonal,
        violations=tuple(bad),
    )


@dataclass(frozen=True)
class CorrelationTrend:
    """Partial averages (1/x) sum_{n<=x} c_r(n) c_s(n+h) against their limit."""

    r: int
    s: int
    h: int
    target: int
    averages: tuple[float, ...]

    @property
    def moving_toward(self) -> bool:
        errs = [abs(a - self.target) for a in self.averages]
        return all(b <= a + 1e-12 for a, b in zip(errs, errs[1:]))


def shifted_correlation_trend(
    r: int, s: int, h: int = 0, xs: tuple[int, ...] = (1000, 10000)
) -> CorrelationTrend:
    """Empirical check of the density limit of (1/x) sum c_r(n) c_s(n+h).

    The limit is 0 for r != s and c_r(h) for r = s (phi(r) at h = 0).
    Only the trend is checked: the averages at increasing x must move
    toward the limit, since no finite x can witness it.
    """
    if r < 1 or s < 1:
        raise DomainError("moduli must be >= 1")
    if not xs or any(x < 1 for x in xs) or list(xs) != sorted(xs):
        raise DomainError("xs must be increasing positive cutoffs")
    target = ramanujan_sum(r, h) if r == s else 0
    cr = [ramanujan_sum(r, n) for n in range(r)]
    cs = [ramanujan_sum(s, n) for n in range(s)]
    averages = []
    for x in xs:
        total = sum(cr[n % r] * cs[(n + h) % s] for n in range(1, x + 1))
        averages.append(total / x)
    return CorrelationTrend(r=r, s=s, h=h, target=target, averages=tuple(averages))


def rf_partial_sum(func: str, n: int, Q: int) -> float:
    """Q-term partial sum of a classical Ramanujan-Fourier expansion.

    func "sigma":      sigma(n) = (pi^2 n / 6) sum_q c_q(n) / q^2
    func "divisor_d":  d(n)    = - sum_q (log q)/q * c_q(n)
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if Q < 1:
        raise DomainError("term count Q must be >= 1")
    c = _sums_for_fixed_n(n, Q)
    if func == "sigma":
        pi_sq = float(pi_chudnovsky(30)) ** 2
        return pi_sq * n / 6.0 * sum(c[q] / (q * q) for q in range(1, Q + 1))
    if func == "divisor_d":
        return -sum(math.log(q) / q * c[q] for q in range(2, Q + 1))
    raise DomainError(f"unknown series {func!r}; use 'sigma' or 'divisor_d'")


def tau_coefficients(n_max: int) -> list[int]:
    """tau(1..n_max): coefficients of q prod_k (1-q^k)^24, exact integers.

    prod (1-q^k) is expanded once by the pentagonal-number recurrence
    (sparse), then applied 24 times to a dense coefficient array.
    """
    if not 1 <= n_max <= 5000:
        raise DomainError("n_max must lie in 1..5000")
    m = n_max  # needed degrees 0..m-1 of prod (1-q^k)^24
    pent = [(0, 1)]
    k = 1
    while k * (3 * k - 1) // 2 < m:
        sign = -1 if k % 2 else 1
        for d in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if d < m:
                pent.append((d, sign))
        k += 1
    arr = [0] * m
    arr[0] = 1
    for _ in range(24):
        out = [0] * m
        for off, sign in pent:
            if sign > 0:
                for i in range(m - off):
                    out[i + off] += arr[i]
            else:
                for i in range(m - off):
                    out[i + off] -= arr[i]
        arr = out
    return arr  # arr[i] is the q^(i+1) coefficient, i.e. tau(i+1)


@dataclass(frozen=True)
class TauBoundReport:
    """Result of checking |tau(p)| <= 2 p^(11/2) over all primes <= p_max."""

    p_max: int
    primes_checked: int
    holds: bool
    max_ratio: float
    worst_prime: int


def check_tau_bound(p_max: int) -> TauBoundReport:
    """Verify tau(p)^2 <= 4 p^11 (exact integers) for every prime <= p_max."""
    if not 2 <= p_max <= 5000:
        raise DomainError("p_max must lie in 2..5000")
    taus = tau_coefficients(p_max)
    holds = True
    max_ratio, worst = 0.0, 0
    checked = 0
    for p in primes_up_to(p_max):
        checked += 1
        t = taus[p - 1]
        if t * t > 4 * p**11:
            holds = False
        ratio = math.sqrt(t * t / (4 * p**11))
        if ratio > max_ratio:
            max_ratio, worst = ratio, p
    return TauBoundReport(
        p_max=p_max,
        primes_checked=checked,
        holds=holds,
        max_ratio=max_ratio,
        worst_prime=worst,
    )


def _exact_rank(rows: list[list[Fraction]]) -> int:
    """Rank by Gaussian elimination over Fractions."""
    rows = [list(r) for r in rows]
    nrows, ncols = len(rows), len(rows[0])
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, nrows) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        lead = rows[rank][col]
        for r in range(rank + 1, nrows):
            f = rows[r][col] / lead
            if f:
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        if rank == nrows:
            break
    return rank


@dataclass(frozen=True)
class RamanujanBasis:
    """The circulant matrix B_q with entries c_q((j-k) mod q).

    basis_cols holds the first phi(q) columns, which span the same
    column space as the whole of B_q; rank is verified exactly.
    """

    q: int
    matrix: tuple[tuple[int, ...], ...]
    basis_cols: tuple[tuple[int, ...], ...]
    rank: int


def ramanujan_basis(q: int) -> RamanujanBasis:
    """Build B_q and confirm rank(B_q) = phi(q) by exact elimination."""
    if q < 1:
        raise DomainError("q must be >= 1")
    row = [ramanujan_sum(q, n) for n in range(q)]
    matrix = tuple(tuple(row[(j - k) % q] for k in range(q)) for j in range(q))
    phi = totient(q)
    cols = tuple(tuple(matrix[j][k] for j in range(q)) for k in range(phi))
    rank = _exact_rank([[Fraction(v) for v in r] for r in matrix])
    if rank != phi:
        raise DomainError(f"rank(B_{q}) = {rank}, expected phi({q}) = {phi}")
    return RamanujanBasis(q=q, matrix=matrix, basis_cols=cols, rank=rank)


@dataclass(frozen=True)
class Signal:
    """One period of an N-periodic sequence, N = len(samples) >= 1."""

    samples: tuple

    def __post_init__(self):
        if len(self.samples) < 1:
            raise DomainError("signal must have at least one sample")

    @property
    def n(self) -> int:
        return len(self.samples)


def parse_samples(text: str, csv: bool = False) -> Signal:
    """Parse signal samples from text.

    Default format is one sample per line, either a real number or
    "re,im" for a complex sample. csv=True reads a flat list of reals
    separated by commas and/or whitespace. Integer-looking tokens stay
    exact ints so the rational decomposition path applies.
    """

    def scalar(tok: str):
        tok = tok.strip()
        try:
            return int(tok)
        except ValueError:
            try:
                return float(tok)
            except ValueError:
                raise DomainError(f"cannot parse sample {tok!r}") from None

    values = []
    if csv:
        for tok in text.replace(",", " ").split():
            values.append(scalar(tok))
    else:
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if "," in line:
                re_part, _, im_part = line.partition(",")
                values.append(complex(scalar(re_part), scalar(im_part)))
            else:
                values.append(scalar(line))
    if not values:
        raise DomainError("no samples found in input")
    return Signal(samples=tuple(values))


def minimal_period(samples) -> int:
    """Smallest divisor d of len(samples) with samples[i] == samples[i mod d]."""
    n = len(samples)
    if n < 1:
        raise DomainError("empty sequence has no period")
    for d in divisors(n):
        if all(samples[i] == samples[i % d] for i in range(n)):
            return d
    return n


@dataclass(frozen=True)
class FirDecomposition:
    """x split as sum over divisors q of N of a component in the span of B_q."""

    n: int
    components: dict
    residual_norm: float
    exact: bool

    def reconstruction(self) -> tuple:
        out = [0] * self.n
        for comp in self.components.values():
            for i, v in enumerate(comp):
                out[i] = out[i] + v
        return tuple(out)


def _is_exact_value(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _period_dictionary(n: int) -> tuple[list[int], list[list[int]], list[int]]:
    """Divisors of n, dictionary columns (length n), and each column's q."""
    qs = divisors(n)
    columns: list[list[int]] = []
    col_q: list[int] = []
    for q in qs:
        for col in ramanujan_basis(q).basis_cols:
            columns.append([col[i % q] for i in range(n)])
            col_q.append(q)
    return qs, columns, col_q


def _solve_exact(columns: list[list[int]], rhs: list) -> list[Fraction]:
    """Solve the square system (columns as matrix columns) over Fractions."""
    n = len(rhs)
    aug = [
        [Fraction(columns[j][i]) for j in range(n)] + [Fraction(rhs[i])]
        for i in range(n)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            raise RuntimeError("period dictionary is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        lead = aug[col][col]
        aug[col] = [v / lead for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]


def fir_decompose(x: Signal) -> FirDecomposition:
    """Decompose x into q-periodic components, one per divisor q of N.

    The dictionary stacks, for each divisor q of N, the first phi(q)
    columns of B_q extended periodically; sum phi(q) = N makes it
    square. Rational samples with N <= 144 are solved exactly
    (residual 0); anything else falls back to least squares.
    """
    n = x.n
    qs, columns, col_q = _period_dictionary(n)
    exact = n <= _EXACT_SOLVE_LIMIT and all(_is_exact_value(v) for v in x.samples)
    if exact:
        coef = _solve_exact(columns, list(x.samples))
        residual = 0.0
    else:
        a = np.array(columns, dtype=float).T
        b = np.array([complex(v) for v in x.samples])
        if not np.iscomplexobj(b) or not b.imag.any():
            b = b.real
        coef, _, _, _ = np.linalg.lstsq(a, b, rcond=None)
        residual = float(np.linalg.norm(b - a @ coef))
    components = {}
    for q in qs:
        comp = [Fraction(0) if exact else 0.0] * n
        for j, cq in enumerate(col_q):
            if cq != q:
                continue
            cj = coef[j]
            for i in range(n):
                comp[i] = comp[i] + cj * columns[j][i]
        if exact:
            comp = [int(v) if v.denominator == 1 else v for v in comp]
        else:
            comp = [complex(v) if np.iscomplexobj(coef) else float(v) for v in comp]
        components[q] = tuple(comp)
    return FirDecomposition(
        n=n, components=components, residual_norm=residual, exact=exact
    )


def estimate_periods(x: Signal, top_k: int) -> list[tuple[int, float]]:
    """Rank divisor periods of the signal by component energy fraction.

    Returns up to top_k pairs (q, energy fraction), strongest first;
    ties and the all-zero signal rank by ascending q.
    """
    if top_k < 1:
        raise DomainError("top_k must be >= 1")
    dec = fir_decompose(x)
    energies = {
        q: float(sum(abs(complex(v)) ** 2 for v in comp))
        for q, comp in dec.components.items()
    }
    total = sum(energies.values())
    fractions = {
        q: (e / total if total > 0.0 else 0.0) for q, e in energies.items()
    }
    ranked = sorted(fractions.items(), key=lambda item: (-item[1], item[0]))
    return ranked[:top_k]
