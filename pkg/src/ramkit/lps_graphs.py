"""LPS Ramanujan graphs X^{p,q}, spectral verification, and expansion
constants.

The graphs are Cayley graphs of PGL(2,q) or PSL(2,q) over a generating
set built from the p+1 integer solutions of a0^2+a1^2+a2^2+a3^2 = p.
Projective matrices are stored as canonical representatives so equality
and hashing are exact; vertex ids are positions in the deterministic
group enumeration order.
"""

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import DomainError
from .numtheory import is_prime, legendre_is_qr, mod_inverse, sqrt_mod

PGL = "PGL"
PSL = "PSL"


@dataclass(frozen=True)
class ProjMatrix:
    """2x2 matrix over F_q up to scalars, in canonical form.

    PGL canon: first nonzero entry in (a,b,c,d) order scaled to 1.
    PSL canon: determinant 1, sign chosen so the first nonzero entry
    lies in [1, (q-1)/2].
    """

    a: int
    b: int
    c: int
    d: int
    q: int
    kind: str

    @classmethod
    def canonical(cls, a: int, b: int, c: int, d: int, q: int, kind: str) -> "ProjMatrix":
        a, b, c, d = a % q, b % q, c % q, d % q
        det = (a * d - b * c) % q
        if det == 0:
            raise DomainError("projective matrix must be invertible")
        if kind == PSL:
            if det != 1:
                raise DomainError("PSL representative needs determinant 1")
            first = next(x for x in (a, b, c, d) if x)
            if first > (q - 1) // 2:
                a, b, c, d = (-a) % q, (-b) % q, (-c) % q, (-d) % q
        elif kind == PGL:
            first = next(x for x in (a, b, c, d) if x)
            s = mod_inverse(first, q)
            a, b, c, d = a * s % q, b * s % q, c * s % q, d * s % q
        else:
            raise DomainError(f"unknown group kind {kind!r}")
        return cls(a, b, c, d, q, kind)

    def __matmul__(self, other: "ProjMatrix") -> "ProjMatrix":
        if (self.q, self.kind) != (other.q, other.kind):
            raise DomainError("mixed group multiplication")
        return ProjMatrix.canonical(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.q,
            self.kind,
        )

    def inverse(self) -> "ProjMatrix":
        # adjugate; exact inverse for det 1, same class for PGL
        return ProjMatrix.canonical(
            self.d, -self.b, -self.c, self.a, self.q, self.kind
        )

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class FourSquares:
    """One solution of a0^2+a1^2+a2^2+a3^2 = p with a0 positive odd and
    the rest even."""

    a0: int
    a1: int
    a2: int
    a3: int

    def __post_init__(self):
        if self.a0 <= 0 or self.a0 % 2 == 0:
            raise DomainError("a0 must be positive and odd")
        if any(x % 2 for x in (self.a1, self.a2, self.a3)):
            raise DomainError("a1, a2, a3 must be even")

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.a0, self.a1, self.a2, self.a3)


@dataclass
class Graph:
    """Undirected multigraph as per-vertex sorted neighbor lists.

    Multi-edges appear with multiplicity; a vertex's degree is the
    length of its list.
    """

    n: int
    adjacency: list[list[int]]

    def degree_set(self) -> set[int]:
        return {len(lst) for lst in self.adjacency}

    def edge_count(self) -> int:
        loops = sum(lst.count(u) for u, lst in enumerate(self.adjacency))
        return (sum(len(lst) for lst in self.adjacency) - loops) // 2 + loops

    def edges(self):
        """Each undirected edge once (loops once), with multiplicity."""
        for u, lst in enumerate(self.adjacency):
            for v in lst:
                if v >= u:
                    yield (u, v)

    def check_symmetric(self) -> None:
        cnt: Counter = Counter()
        for u, lst in enumerate(self.adjacency):
            for v in lst:
                cnt[(u, v)] += 1
        for (u, v), m in cnt.items():
            if u != v and cnt[(v, u)] != m:
                raise DomainError(f"asymmetric adjacency at ({u},{v})")


@dataclass(frozen=True)
class SpectralReport:
    """Eigenvalue summary of a connected k-regular graph.

    lambda2 is the literal second-largest absolute eigenvalue (for a
    bipartite graph this is k itself, via the -k eigenvalue).
    lambda_nontrivial drops one +k, and one -k when bipartite; the
    Ramanujan verdict compares it against bound = 2 sqrt(k-1). The
    looser degree-based bound 2 sqrt(k) is reported alongside.
    """

    k: int
    lambda1: float
    lambda2: float
    lambda_nontrivial: float
    bound: float
    bound_alt: float
    bipartite: bool
    is_ramanujan: bool


def four_square_solutions(p: int) -> list[FourSquares]:
    """All p+1 integer solutions with odd positive a0 and even a1,a2,a3,
    in lexicographic order."""
    if not is_prime(p) or p % 4 != 1:
        raise DomainError("p must be a prime congruent to 1 mod 4")
    sols = []
    for a0 in range(1, math.isqrt(p) + 1, 2):
        r0 = p - a0 * a0
        m1 = math.isqrt(r0)
        for a1 in range(-m1, m1 + 1):
            if a1 % 2:
                continue
            r1 = r0 - a1 * a1
            m2 = math.isqrt(r1)
            for a2 in range(-m2, m2 + 1):
                if a2 % 2:
                    continue
                r2 = r1 - a2 * a2
                a3 = math.isqrt(r2)
                if a3 * a3 != r2 or a3 % 2:
                    continue
                for signed in {a3, -a3}:
                    sols.append(FourSquares(a0, a1, a2, signed))
    sols.sort(key=FourSquares.astuple)
    return sols


def _check_lps_args(p: int, q: int) -> None:
    if p == q or not (is_prime(p) and is_prime(q)):
        raise DomainError("p and q must be distinct primes")
    if p % 4 != 1 or q % 4 != 1:
        raise DomainError("p and q must be congruent to 1 mod 4")
    if q * q <= 4 * p:
        raise DomainError("q must exceed 2*sqrt(p)")


def generating_set(p: int, q: int) -> list[ProjMatrix]:
    """The p+1 canonical generators of X^{p,q}.

    Each four-squares solution maps to [[a0+i*a1, a2+i*a3],
    [-a2+i*a3, a0-i*a1]] with i the smaller square root of -1 mod q.
    When p is a quadratic residue mod q the matrices are rescaled by
    1/sqrt(p) to determinant 1 and live in PSL; otherwise PGL.
    """
    _check_lps_args(p, q)
    i = sqrt_mod(q - 1, q)
    qr_branch = legendre_is_qr(p, q)
    scale = mod_inverse(sqrt_mod(p, q), q) if qr_branch else 1
    kind = PSL if qr_branch else PGL
    gens = []
    for sol in four_square_solutions(p):
        a0, a1, a2, a3 = sol.astuple()
        gens.append(
            ProjMatrix.canonical(
                scale * (a0 + i * a1),
                scale * (a2 + i * a3),
                scale * (-a2 + i * a3),
                scale * (a0 - i * a1),
                q,
                kind,
            )
        )
    if len(set(gens)) != p + 1:
        raise DomainError("generators collapsed mod q; q too small for p")
    return gens


def enumerate_group(q: int, kind: str) -> list[ProjMatrix]:
    """All canonical elements of PGL(2,q) or PSL(2,q), sorted by entry
    tuple. Counts are q(q^2-1) and q(q^2-1)/2."""
    if q == 2 or not is_prime(q):
        raise DomainError("q must be an odd prime")
    elems: list[ProjMatrix] = []
    if kind == PGL:
        # a = 1: any b,c,d with d != bc; a = 0: b = 1, c != 0, any d
        for b in range(q):
            for c in range(q):
                bc = b * c % q
                for d in range(q):
                    if d != bc:
                        elems.append(ProjMatrix(1, b, c, d, q, PGL))
        for c in range(1, q):
            for d in range(q):
                elems.append(ProjMatrix(0, 1, c, d, q, PGL))
    elif kind == PSL:
        half = (q - 1) // 2
        inv = [0] * q
        for x in range(1, q):
            inv[x] = pow(x, q - 2, q)
        seen = set()

        def add(a, b, c, d):
            if next(x for x in (a, b, c, d) if x) > half:
                a, b, c, d = (-a) % q, (-b) % q, (-c) % q, (-d) % q
            seen.add((a, b, c, d))

        for a in range(1, q):
            for b in range(q):
                for c in range(q):
                    add(a, b, c, (1 + b * c) * inv[a] % q)
        for b in range(1, q):  # a = 0 forces c = -1/b, d free
            c = (q - inv[b]) % q
            for d in range(q):
                add(0, b, c, d)
        return [ProjMatrix(*m, q, PSL) for m in sorted(seen)]
    else:
        raise DomainError(f"unknown group kind {kind!r}")
    elems.sort(key=ProjMatrix.entries)
    return elems


def cayley_graph(elements, gens, multiply=None) -> Graph:
    """Cayley graph: one edge (g, g*s) per element g and generator s.

    Works for any hashable element type given a multiply callable;
    ProjMatrix elements default to projective matrix multiplication.
    The generator set must be symmetric (closed under inverse), which
    is what makes the adjacency an undirected multigraph.
    """
    elements = list(elements)
    if multiply is None:
        multiply = lambda x, y: x @ y
    index = {g: i for i, g in enumerate(elements)}
    if len(index) != len(elements):
        raise DomainError("duplicate group elements")
    for s in gens:
        if s not in index:
            raise DomainError("generator not in group")
    adj: list[list[int]] = [[] for _ in elements]
    for i, g in enumerate(elements):
        row = adj[i]
        for s in gens:
            h = multiply(g, s)
            j = index.get(h)
            if j is None:
                raise DomainError("products leave the element list")
            row.append(j)
        row.sort()
    graph = Graph(len(elements), adj)
    graph.check_symmetric()  # fails on non-symmetric generator sets
    return graph


def is_connected(g: Graph) -> bool:
    """Breadth-first reachability from vertex 0."""
    if g.n == 0:
        raise DomainError("empty graph")
    seen = bytearray(g.n)
    seen[0] = 1
    frontier = [0]
    count = 1
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.adjacency[u]:
                if not seen[v]:
                    seen[v] = 1
                    count += 1
                    nxt.append(v)
        frontier = nxt
    return count == g.n


def _bipartition(g: Graph) -> bool:
    """Two-colorability by BFS (graph assumed connected)."""
    color = [-1] * g.n
    color[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for u in frontier:
            for v in g.adjacency[u]:
                if color[v] == -1:
                    color[v] = color[u] ^ 1
                    nxt.append(v)
                elif color[v] == color[u]:
                    return False
        frontier = nxt
    return True


_DENSE_LIMIT = 2000


def _extremal_eigenvalues(g: Graph, how_many: int, force_iterative: bool = False) -> np.ndarray:
    """Largest-magnitude adjacency eigenvalues, descending by |value|.

    Dense symmetric solve up to 2000 vertices, Lanczos (ARPACK) above;
    the Lanczos start vector is seeded for run-to-run determinism.
    """
    if g.n <= _DENSE_LIMIT and not force_iterative:
        a = np.zeros((g.n, g.n))
        for u, lst in enumerate(g.adjacency):
            for v in lst:
                a[u, v] += 1.0
        vals = np.linalg.eigvalsh(a)
        order = np.argsort(-np.abs(vals), kind="stable")
        return vals[order][:how_many]
    import scipy.sparse as sp
    import scipy.sparse.linalg as spla

    rows, cols = [], []
    for u, lst in enumerate(g.adjacency):
        rows.extend([u] * len(lst))
        cols.extend(lst)
    data = np.ones(len(rows))
    a = sp.coo_matrix((data, (rows, cols)), shape=(g.n, g.n)).tocsr()
    v0 = np.random.default_rng(0).standard_normal(g.n)
    k_eig = min(how_many, g.n - 1)
    vals = spla.eigsh(a, k=k_eig, which="LM", v0=v0, return_eigenvectors=False)
    order = np.argsort(-np.abs(vals), kind="stable")
    return vals[order]


def spectral_report(g: Graph, k: int, force_iterative: bool = False) -> SpectralReport:
    """Spectral summary with the Ramanujan verdict.

    The verdict tests the nontrivial spectrum: the +k eigenvalue of a
    connected k-regular graph is always dropped, and so is the -k
    eigenvalue forced by bipartiteness, since those say nothing about
    expansion. lambda2 keeps the literal second-largest |eigenvalue|
    for reporting (equal to k on bipartite graphs).
    """
    if g.degree_set() != {k}:
        raise DomainError(f"graph is not {k}-regular")
    if not is_connected(g):
        raise DomainError("spectral report requires a connected graph")
    bipartite = _bipartition(g)
    want = 4 if not bipartite else 5
    vals = _extremal_eigenvalues(g, want, force_iterative)
    abs_desc = list(vals)
    lambda1 = float(max(vals))
    lambda2 = float(abs(abs_desc[1])) if len(abs_desc) > 1 else 0.0
    # drop one eigenvalue nearest +k, and one nearest -k when bipartite
    rest = list(abs_desc)
    rest.pop(int(np.argmin([abs(v - k) for v in rest])))
    if bipartite and rest:
        rest.pop(int(np.argmin([abs(v + k) for v in rest])))
    lam_nt = float(max(abs(v) for v in rest)) if rest else 0.0
    bound = 2.0 * math.sqrt(k - 1)
    return SpectralReport(
        k=k,
        lambda1=lambda1,
        lambda2=lambda2,
        lambda_nontrivial=lam_nt,
        bound=bound,
        bound_alt=2.0 * math.sqrt(k),
        bipartite=bipartite,
        is_ramanujan=lam_nt <= bound + 1e-6,
    )


def expansion_constant(g: Graph) -> Fraction:
    """Exact isoperimetric constant min |boundary(F)| / min(|F|,|V-F|)
    over all nonempty proper vertex subsets, by exhaustive enumeration."""
    if g.n > 24:
        raise DomainError("exhaustive expansion limited to 24 vertices")
    if g.n < 2:
        raise DomainError("expansion needs at least two vertices")
    if not is_connected(g):
        raise DomainError("expansion constant requires a connected graph")
    edge_masks = []
    for u, lst in enumerate(g.adjacency):
        for v in lst:
            if v > u:
                edge_masks.append((1 << u) | (1 << v))
    best = None
    for subset in range(1, 1 << (g.n - 1)):  # vertex n-1 stays outside F
        size = subset.bit_count()
        boundary = sum(1 for m in edge_masks if (subset & m).bit_count() == 1)
        h = Fraction(boundary, min(size, g.n - size))
        if best is None or h < best:
            best = h
    return best


def build_lps(p: int, q: int) -> tuple[Graph, SpectralReport, dict]:
    """Construct X^{p,q} and verify its spectrum.

    Selects PSL(2,q) when p is a quadratic residue mod q (q(q^2-1)/2
    vertices) and PGL(2,q) otherwise (q(q^2-1) vertices, bipartite);
    degree is p+1 either way.
    """
    gens = generating_set(p, q)
    kind = gens[0].kind
    elements = enumerate_group(q, kind)
    graph = cayley_graph(elements, gens)
    report = spectral_report(graph, p + 1)
    metadata = {
        "p": p,
        "q": q,
        "branch": kind,
        "vertex_count": graph.n,
        "degree": p + 1,
        "connected": is_connected(graph),
        "bipartite": report.bipartite,
        "lambda": report.lambda2,
        "lambda_nontrivial": report.lambda_nontrivial,
        "bound": report.bound,
        "bound_alt": report.bound_alt,
        "is_ramanujan": report.is_ramanujan,
    }
    return graph, report, metadata
