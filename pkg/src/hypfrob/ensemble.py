"""Exhaustive computations over the ensemble of monic squarefree odd-degree
polynomials: enumeration, exact averages, auxiliary Moebius/character sums,
trace-product moments, and the prime / prime-square / higher-power
decomposition of traces.

The bulk pipeline is vectorized with numpy but stays exact: coefficients,
character values and scaled traces are small integers, sums are checked
against 64-bit bounds, and every ensemble statistic is reduced to an
integer total before any floating-point rendering.  Reductions are
associative integer sums, so results are bit-identical for any worker
count or chunking.
"""

import itertools
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import rmt
from .charsym import jacobi_symbol
from .exact import HalfPowerRational
from .lfunction import Curve
from .polyfield import (
    check_field,
    get_prime_table,
    irreducible_count,
    mobius,
    monic_code,
    monic_from_code,
    monic_polys,
    poly_divmod,
    poly_mod,
    poly_mul,
)

DEFAULT_BUDGET = 2_000_000
INT64_SAFE = 2 ** 62


class BudgetError(RuntimeError):
    """Requested enumeration exceeds the configured candidate budget."""


@dataclass(frozen=True)
class EnsembleSpec:
    q: int
    g: int

    def __post_init__(self):
        check_field(self.q)
        if self.g < 1:
            raise ValueError("genus must be >= 1")

    @property
    def degree(self):
        return 2 * self.g + 1

    @property
    def count(self):
        return (self.q - 1) * self.q ** (2 * self.g)

    def check_budget(self, budget=DEFAULT_BUDGET):
        candidates = self.q ** self.degree
        if candidates > budget:
            raise BudgetError(
                f"enumerating q^{self.degree} = {candidates} candidates exceeds "
                f"budget {budget}; lower g or raise the budget explicitly")


@dataclass(frozen=True)
class MomentSpec:
    """Product statistic prod_j (tr Theta^{k_j})^{a_j} with distinct k_j."""
    terms: tuple

    def __post_init__(self):
        terms = tuple(sorted((int(k), int(a)) for k, a in self.terms))
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("moment spec needs at least one (k, a) term")
        ks = [k for k, _ in terms]
        if len(set(ks)) != len(ks):
            raise ValueError("powers k_j must be distinct; fold repeats into the exponent")
        if any(k < 1 or a < 1 for k, a in terms):
            raise ValueError("powers and exponents must be >= 1")

    @classmethod
    def parse(cls, text):
        """Parse '(k,a);(k,a);...'; bare 'k' means (k, 1)."""
        terms = []
        for part in text.replace(" ", "").split(";"):
            if not part:
                continue
            item = part.strip("()")
            bits = item.split(",")
            if len(bits) == 1:
                terms.append((int(bits[0]), 1))
            elif len(bits) == 2:
                terms.append((int(bits[0]), int(bits[1])))
            else:
                raise ValueError(f"cannot parse moment term {part!r}")
        return cls(tuple(terms))

    @property
    def total(self):
        return sum(k * a for k, a in self.terms)

    @property
    def max_k(self):
        return max(k for k, _ in self.terms)

    def etas(self):
        return tuple(1 if k % 2 == 0 else 0 for k, _ in self.terms)

    def label(self):
        return ";".join(f"({k},{a})" for k, a in self.terms)


# -- enumeration -------------------------------------------------------------

def _codes_to_digits(codes, length, q):
    out = np.empty((len(codes), length), np.uint8)
    rest = codes.astype(np.int64, copy=True)
    for i in range(length):
        out[:, i] = rest % q
        rest //= q
    return out


def _monic_digit_matrix(d, q):
    mat = np.empty((q ** d, d + 1), np.uint8)
    mat[:, :d] = _codes_to_digits(np.arange(q ** d, dtype=np.int64), d, q)
    mat[:, d] = 1
    return mat


def squarefree_codes(q, g, budget=DEFAULT_BUDGET):
    """Codes of all monic squarefree polynomials of degree 2g+1, ascending.

    Sieve: mark every P^2 * B for primes P of degree <= g; the count must
    equal (q-1) q^{2g} exactly.
    """
    spec = EnsembleSpec(q, g)
    spec.check_budget(budget)
    d_tot = spec.degree
    marked = np.zeros(q ** d_tot, bool)
    table = get_prime_table(q, g)
    qpow = q ** np.arange(d_tot, dtype=np.int64)
    for e in range(1, g + 1):
        bmat = _monic_digit_matrix(d_tot - 2 * e, q).astype(np.int64)
        for prime in table.irreducibles(e):
            p2 = poly_mul(prime, prime, q)
            conv = np.zeros((bmat.shape[0], d_tot + 1), np.int64)
            for j, cj in enumerate(p2):
                if cj:
                    conv[:, j:j + bmat.shape[1]] += cj * bmat
            conv %= q
            marked[conv[:, :d_tot] @ qpow] = True
    codes = np.nonzero(~marked)[0].astype(np.int64)
    if len(codes) != spec.count:
        raise ArithmeticError(
            f"squarefree sieve count {len(codes)} != {spec.count} at q={q}, g={g}")
    return codes


def curve_coeff_matrix(q, g, codes):
    mat = np.empty((len(codes), 2 * g + 2), np.uint8)
    mat[:, : 2 * g + 1] = _codes_to_digits(codes, 2 * g + 1, q)
    mat[:, 2 * g + 1] = 1
    return mat


def curve_from_code(spec, code):
    coeffs = []
    rest = int(code)
    for _ in range(spec.degree):
        rest, c = divmod(rest, spec.q)
        coeffs.append(c)
    coeffs.append(1)
    return Curve(q=spec.q, g=spec.g, Q=tuple(coeffs))


def enumerate_curves(spec, method="sieve", budget=DEFAULT_BUDGET):
    """Every curve of the ensemble exactly once, in canonical order."""
    if method == "sieve":
        for code in squarefree_codes(spec.q, spec.g, budget):
            yield curve_from_code(spec, int(code))
    elif method == "filter":
        from .polyfield import is_squarefree, monic_from_code
        spec.check_budget(budget)
        for code in range(spec.q ** spec.degree):
            Q = monic_from_code(code, spec.degree, spec.q)
            if is_squarefree(Q, spec.q):
                yield Curve(q=spec.q, g=spec.g, Q=Q)
    else:
        raise ValueError(f"unknown enumeration method {method!r}")


# -- vectorized trace engine ---------------------------------------------------

class TraceEngine:
    """Exact batch pipeline from curve coefficients to scaled traces.

    Per curve: character values at primes of degree <= g via residue
    tables, multiplicative sieve over monic polynomials of degree <= g,
    coefficient symmetry for the upper half, Newton recursion for the
    power sums.  Everything is integer-valued end to end.
    """

    def __init__(self, q, g, N):
        check_field(q)
        self.q, self.g, self.N = q, g, N
        self.table = get_prime_table(q, max(g, 1))
        deg_in = 2 * g + 2
        # global index over monic polynomials of degree 0..g
        offsets = [0, 1]
        for d in range(1, g):
            offsets.append(offsets[-1] + q ** d)
        self.offsets = offsets  # offsets[d] = first index of degree d (deg 0 at 0)
        self.n_monic = offsets[g] + q ** g if g >= 1 else 1
        spf = np.zeros(self.n_monic, np.int32)
        cof = np.zeros(self.n_monic, np.int32)
        is_prime = np.zeros(self.n_monic, bool)
        prime_index = {}
        for d in range(1, g + 1):
            base = offsets[d]
            primes_d = set(self.table.irreducibles(d))
            for code in range(q ** d):
                f = monic_from_code(code, d, q)
                gi = base + code
                if f in primes_d:
                    is_prime[gi] = True
                    prime_index[f] = gi
                    continue
                for e in range(1, d // 2 + 1):
                    hit = None
                    for prime in self.table.irreducibles(e):
                        quo, rem = poly_divmod(f, prime, q)
                        if not rem:
                            hit = (prime, quo)
                            break
                    if hit:
                        break
                prime_, quo = hit
                spf[gi] = prime_index[prime_]
                ec = len(quo) - 1
                cof[gi] = offsets[ec] + monic_code(quo, q) if ec >= 1 else 0
        self.spf, self.cof, self.is_prime = spf, cof, is_prime
        self.composites_by_degree = []
        for d in range(1, g + 1):
            base = offsets[d]
            idx = np.arange(base, base + q ** d, dtype=np.int64)
            self.composites_by_degree.append((d, idx[~is_prime[idx]]))
        # residue-reduction matrices and quadratic-character tables per prime
        self.primes = []
        for d in range(1, g + 1):
            for prime in self.table.irreducibles(d):
                red = _reduction_matrix(prime, deg_in, q)
                chitab = _char_table(prime, q)
                qpow = q ** np.arange(d, dtype=np.int64)
                self.primes.append((prime_index[prime], d, prime, red, chitab, qpow))

    def coefficients(self, coeffs):
        """Completed L-coefficient rows A(0..2g): the lower half by the
        multiplicative sieve, the upper half by coefficient symmetry."""
        q, g = self.q, self.g
        n = coeffs.shape[0]
        vals = self._symbol_matrix(coeffs)
        A = np.ones((n, 2 * g + 1), np.int64)
        for beta in range(1, g + 1):
            lo = self.offsets[beta]
            A[:, beta] = vals[:, lo:lo + q ** beta].sum(axis=1, dtype=np.int64)
        for beta in range(g + 1, 2 * g + 1):
            A[:, beta] = q ** (beta - g) * A[:, 2 * g - beta]
        return A

    def traces(self, coeffs):
        """Scaled traces s_1..s_N for each coefficient row, int64 exact."""
        return _newton_matrix(self.coefficients(coeffs), self.N)

    def _symbol_matrix(self, coeffs):
        q = self.q
        n = coeffs.shape[0]
        vals = np.empty((n, self.n_monic), np.int8)
        vals[:, 0] = 1
        cf = coeffs.astype(np.int64)
        for gi, d, _prime, red, chitab, qpow in self.primes:
            res = (cf @ red) % q
            vals[:, gi] = chitab[res @ qpow]
        for _d, idx in self.composites_by_degree:
            if len(idx):
                vals[:, idx] = vals[:, self.spf[idx]] * vals[:, self.cof[idx]]
        return vals

    def divisor_degree_counts(self, coeffs):
        """z[:, d] = number of distinct degree-d prime divisors, d <= N.

        Prime divisors of degree <= g come from residue tests; the cofactor
        beyond degree g is a single prime because 2(g+1) > 2g+1.
        """
        q, g, N = self.q, self.g, self.N
        n = coeffs.shape[0]
        z = np.zeros((n, N + 1), np.int16)
        hit_degrees = np.zeros(n, np.int64)
        cf = coeffs.astype(np.int64)
        for _gi, d, _prime, red, chitab, qpow in self.primes:
            res = (cf @ red) % q
            hit = (res @ qpow) == 0
            if d <= N:
                z[:, d] += hit
            hit_degrees += d * hit
        cof_deg = (2 * g + 1) - hit_degrees
        inside = (cof_deg >= 1) & (cof_deg <= N)
        np.add.at(z, (np.nonzero(inside)[0], cof_deg[inside]), 1)
        return z

    def prime_symbol_sums(self, s, z):
        """c[:, d] = sum of chi over degree-d primes, inverted from the traces.

        n c_n = -s_n - sum over prime powers P^e, e >= 2, of the exponent-e
        slice, which only involves lower degrees; integrality of the division
        is asserted.
        """
        q, N = self.q, self.N
        n = s.shape[0]
        c = np.zeros((n, N + 1), np.int64)
        for nn in range(1, N + 1):
            acc = -s[:, nn - 1].astype(np.int64)
            for e in range(2, nn + 1):
                if nn % e:
                    continue
                d = nn // e
                if e % 2:
                    acc -= d * c[:, d]
                else:
                    acc -= d * (irreducible_count(q, d) - z[:, d].astype(np.int64))
            if (acc % nn).any():
                raise ArithmeticError(f"prime-sum inversion not integral at n={nn}")
            c[:, nn] = acc // nn
        return c


def _reduction_matrix(prime, n_rows, q):
    """Rows x^i mod prime, i = 0..n_rows-1, as an (n_rows x deg) int64 matrix."""
    d = len(prime) - 1
    rows = np.zeros((n_rows, d), np.int64)
    cur = (1,)
    for i in range(n_rows):
        rows[i, :len(cur)] = cur
        cur = poly_mod((0,) + cur, prime, q)
    return rows


def _char_table(prime, q):
    """Quadratic-character lookup for F_q[x]/(prime), indexed by residue code."""
    d = len(prime) - 1
    size = q ** d
    digits = _codes_to_digits(np.arange(size, dtype=np.int64), d, q).astype(np.int64)
    sq = np.zeros((size, 2 * d - 1), np.int64)
    for i in range(d):
        for j in range(d):
            sq[:, i + j] += digits[:, i] * digits[:, j]
    red = _reduction_matrix(prime, 2 * d - 1, q)
    resid = (sq @ red) % q
    qpow = q ** np.arange(d, dtype=np.int64)
    codes = resid @ qpow
    tab = np.full(size, -1, np.int8)
    tab[codes] = 1
    tab[0] = 0
    if int((tab == 1).sum()) != (size - 1) // 2:
        raise ArithmeticError("square table has wrong cardinality; modulus not prime?")
    return tab


def _newton_matrix(A, N):
    """Vectorized Newton recursion: power sums of inverse roots per row."""
    n, width = A.shape
    d = width - 1
    p = np.zeros((n, N + 1), np.int64)
    for nn in range(1, N + 1):
        acc = (-nn) * A[:, nn] if nn <= d else np.zeros(n, np.int64)
        acc = acc.astype(np.int64, copy=True)
        for i in range(1, nn):
            if i <= d:
                acc -= A[:, i] * p[:, nn - i]
        p[:, nn] = acc
    return p[:, 1:]


# -- ensemble data (traces for every curve) -----------------------------------

@dataclass
class EnsembleData:
    q: int
    g: int
    N: int
    codes: np.ndarray   # int64, ascending
    coeffs: np.ndarray  # uint8 (n, 2g+2) including the leading 1
    s: np.ndarray       # int64 (n, N)

    @property
    def count(self):
        return len(self.codes)

    @property
    def spec(self):
        return EnsembleSpec(self.q, self.g)

    def curve(self, i):
        return Curve(q=self.q, g=self.g, Q=tuple(int(c) for c in self.coeffs[i]))

    def sliced(self, N):
        if N > self.N:
            raise ValueError(f"data holds traces through N={self.N}, need {N}")
        return EnsembleData(self.q, self.g, N, self.codes, self.coeffs, self.s[:, :N])


_worker_engines = {}


def _trace_chunk(args):
    q, g, N, budget, lo, hi = args
    key = (q, g, N)
    entry = _worker_engines.get(key)
    if entry is None:
        codes = squarefree_codes(q, g, budget)
        entry = (TraceEngine(q, g, N), codes)
        _worker_engines[key] = entry
    engine, codes = entry
    coeffs = curve_coeff_matrix(q, g, codes[lo:hi])
    return engine.traces(coeffs)


def compute_ensemble_data(q, g, N, workers=1, budget=DEFAULT_BUDGET):
    """Traces s_1..s_N for every curve of the ensemble.

    Worker-count independent: curves are split into contiguous chunks and
    the per-curve results concatenated in enumeration order.
    """
    codes = squarefree_codes(q, g, budget)
    coeffs = curve_coeff_matrix(q, g, codes)
    n = len(codes)
    if workers <= 1 or n < 4096:
        s = TraceEngine(q, g, N).traces(coeffs)
    else:
        bounds = [n * i // workers for i in range(workers + 1)]
        jobs = [(q, g, N, budget, bounds[i], bounds[i + 1]) for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trace_chunk, jobs))
        s = np.vstack(parts)
    return EnsembleData(q=q, g=g, N=N, codes=codes, coeffs=coeffs, s=s)


# -- exact ensemble averages ---------------------------------------------------

def ensemble_average(spec, func, budget=DEFAULT_BUDGET):
    """Exact mean of a per-curve functional over the full ensemble."""
    total = Fraction(0)
    for curve in enumerate_curves(spec, budget=budget):
        total += Fraction(func(curve))
    return total / spec.count


def moebius_decomposed_average(spec, func, budget=DEFAULT_BUDGET):
    """The same mean through the squarefree-indicator decomposition:
    sum over A^2 B = (monic of degree 2g+1) of mu(A) func(A^2 B).

    `func` must accept every monic polynomial of degree 2g+1, squarefree
    or not; must agree with `ensemble_average` for any such functional.
    """
    spec.check_budget(budget)
    q, g = spec.q, spec.g
    total = Fraction(0)
    for alpha in range(0, g + 1):
        beta = 2 * g + 1 - 2 * alpha
        for A in monic_polys(alpha, q):
            mu = mobius(A, q)
            if mu == 0:
                continue
            A2 = poly_mul(A, A, q)
            for B in monic_polys(beta, q):
                total += mu * Fraction(func(poly_mul(A2, B, q)))
    return total / spec.count


# -- auxiliary sums ------------------------------------------------------------

def sigma_sum(q, degrees, alpha, representatives=None, table=None):
    """Moebius sum over monic A of degree alpha coprime to fixed distinct
    primes of the given degrees; depends only on the degree multiset."""
    degrees = tuple(degrees)
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if table is None:
        table = get_prime_table(q, max([alpha] + [d // 2 for d in degrees] + list(degrees) + [1]))
    if representatives is None:
        representatives = default_representatives(q, degrees, table)
    reps = tuple(representatives)
    if len(reps) != len(degrees) or len(set(reps)) != len(reps):
        raise ValueError("need pairwise distinct prime representatives")
    total = 0
    for A in monic_polys(alpha, q):
        if any(not poly_mod(A, prime, q) for prime in reps):
            continue
        total += mobius(A, q)
    return total


def default_representatives(q, degrees, table=None):
    """First unused prime of each requested degree, canonical order."""
    if table is None:
        table = get_prime_table(q, max(degrees))
    used = {}
    reps = []
    for d in degrees:
        idx = used.get(d, 0)
        primes = table.irreducibles(d)
        if idx >= len(primes):
            raise ValueError(f"not enough distinct primes of degree {d} (pi={len(primes)})")
        reps.append(primes[idx])
        used[d] = idx + 1
    return tuple(reps)


def multi_char_sum(q, beta, degrees, method="direct", table=None, budget=5_000_000):
    """S(beta; k_1..k_n): sum over ordered tuples of pairwise distinct primes
    of the given degrees and monic B of degree beta of (B / p_1...p_n).

    method 'reciprocity' evaluates the coefficient-side sum with the
    reciprocity sign (-1)^(((q-1)/2) * beta * sum k_i) instead; the two
    must agree exactly.
    """
    degrees = tuple(degrees)
    if table is None:
        table = get_prime_table(q, max(degrees))
    lists = [table.irreducibles(k) for k in degrees]
    n_tuples = 1
    for lst in lists:
        n_tuples *= len(lst)
    if n_tuples * q ** beta > budget:
        raise BudgetError("multiple character sum grid exceeds budget")
    total = 0
    for combo in itertools.product(*lists):
        if len(set(combo)) != len(combo):
            continue
        modulus = (1,)
        for prime in combo:
            modulus = poly_mul(modulus, prime, q)
        if method == "direct":
            total += sum(jacobi_symbol(B, modulus, q) for B in monic_polys(beta, q))
        elif method == "reciprocity":
            total += sum(jacobi_symbol(modulus, B, q) for B in monic_polys(beta, q))
        else:
            raise ValueError(f"unknown method {method!r}")
    if method == "reciprocity":
        if ((q - 1) // 2) % 2 and (beta % 2) and (sum(degrees) % 2):
            total = -total
    return total


# -- trace-product moments -----------------------------------------------------

def trace_product_total(s, mspec):
    """Integer total sum over curves of prod s_{k_j}^{a_j}, overflow-guarded."""
    n = s.shape[0]
    prod = np.ones(n, np.int64)
    bound = 1
    safe = True
    for k, a in mspec.terms:
        col = s[:, k - 1]
        colmax = max(int(np.abs(col).max()), 1)
        for _ in range(a):
            bound *= colmax
            if bound >= INT64_SAFE // max(n, 1):
                safe = False
                break
            prod = prod * col
        if not safe:
            break
    if safe:
        return int(prod.sum(dtype=np.int64))
    total = 0
    rows = s.tolist()
    for row in rows:
        term = 1
        for k, a in mspec.terms:
            term *= row[k - 1] ** a
        total += term
    return total


def squares_prediction(q, mspec):
    """Finite-size prediction for the trace-product mean from prime squares:
    the binomial-count main term, exact in pi_q.

    For odd k the half-degree binomial is empty: the t >= 1 terms vanish."""
    result = Fraction(1)
    for k, a in mspec.terms:
        pi_k = irreducible_count(q, k)
        pi_half = irreducible_count(q, k // 2) if k % 2 == 0 else None
        term = Fraction(0)
        for i in range(a // 2 + 1):
            t = a - 2 * i
            if k % 2 == 1:
                choose_half = 1 if t == 0 else 0
            else:
                choose_half = math.comb(pi_half, t) if t <= pi_half else 0
            if choose_half == 0:
                continue
            piece = (Fraction(math.comb(a, 2 * i))
                     * Fraction(math.factorial(2 * i), 2 ** i)
                     * math.factorial(t)
                     * Fraction(k) ** (2 * i)
                     * Fraction(-k, 2) ** t
                     * math.comb(pi_k, i)
                     * choose_half)
            term += piece
        if term == 0:
            return Fraction(0)
        # term != 0 forces k*a even (odd k survives only through t = 0, a = 2i)
        result *= term * Fraction(1, q ** ((k * a) // 2))
    return result


@dataclass
class EnsembleReport:
    q: int
    g: int
    curves: int
    spec: MomentSpec
    total: int
    empirical: HalfPowerRational
    squares: Fraction
    rmt_moment: rmt.RmtMoment
    dev_vs_squares: float
    dev_vs_rmt: float
    in_range: bool
    wall_seconds: float


def trace_product_moment(data, mspec):
    """Exact empirical mean of the trace product, with the finite-size
    squares prediction and the matrix-integral asymptote attached."""
    t0 = time.perf_counter()
    if mspec.max_k > data.N:
        raise ValueError(f"traces available through N={data.N}, need k={mspec.max_k}")
    total = trace_product_total(data.s, mspec)
    empirical = HalfPowerRational.from_scaled_integer(
        data.q, total, data.count, mspec.total)
    squares = squares_prediction(data.q, mspec)
    moment = rmt.usp_moment_exact(mspec.terms, data.g)
    emp_f = float(empirical)
    report = EnsembleReport(
        q=data.q, g=data.g, curves=data.count, spec=mspec, total=total,
        empirical=empirical, squares=squares, rmt_moment=moment,
        dev_vs_squares=abs(emp_f - float(squares)),
        dev_vs_rmt=abs(emp_f - float(moment.value)),
        in_range=mspec.total <= 2 * data.g - 1,
        wall_seconds=time.perf_counter() - t0)
    return report


# -- decomposition of traces ---------------------------------------------------

@dataclass(frozen=True)
class TermDecomposition:
    """Split of -tr Theta^k for one curve, in scaled-integer form.

    Each part is an integer in units of q^(-k/2):
    prime_part + square_part + higher_part == -s_k exactly.
    """
    q: int
    k: int
    prime_symbol_sum: int     # sum of chi over degree-k primes
    square_symbol_sum: int    # sum of chi^2 over degree-(k/2) primes (even k)
    higher_sums: tuple        # ((e, d, symbol-power sum), ...) for e >= 3
    prime_part: int
    square_part: int
    higher_part: int

    def parts_float(self):
        scale = self.q ** (self.k / 2)
        return (self.prime_part / scale, self.square_part / scale,
                self.higher_part / scale)


def term_decomposition(curve, k, table=None):
    """Per-curve prime / prime-square / higher-power split of -tr Theta^k,
    by direct character sums (definitional path)."""
    q = curve.q
    if table is None:
        table = get_prime_table(q, k)
    higher = []
    prime_sum = sum(jacobi_symbol(curve.Q, P, q) for P in table.irreducibles(k))
    square_sum = 0
    if k % 2 == 0:
        square_sum = sum(jacobi_symbol(curve.Q, P, q) ** 2
                         for P in table.irreducibles(k // 2))
    for e in range(3, k + 1):
        if k % e:
            continue
        d = k // e
        if e % 2:
            val = sum(jacobi_symbol(curve.Q, P, q) for P in table.irreducibles(d))
        else:
            val = sum(jacobi_symbol(curve.Q, P, q) ** 2 for P in table.irreducibles(d))
        higher.append((e, d, val))
    return TermDecomposition(
        q=q, k=k,
        prime_symbol_sum=prime_sum,
        square_symbol_sum=square_sum,
        higher_sums=tuple(higher),
        prime_part=k * prime_sum,
        square_part=(k // 2) * square_sum if k % 2 == 0 else 0,
        higher_part=sum(d * val for _e, d, val in higher))


def omega_count(pi_k, z_k, l):
    """Number of l-subsets of degree-k primes containing a divisor of Q."""
    return math.comb(pi_k, l) - math.comb(pi_k - z_k, l)


def ordered_prime_tuple_sum(pi_k, z_k, c_k, m):
    """Sum of chi(p_1...p_m) over ordered distinct m-tuples of degree-k primes,
    from the counts of +1 / -1 / 0 symbol values."""
    if (pi_k - z_k + c_k) % 2:
        raise ArithmeticError("inconsistent symbol counts")
    n_plus = (pi_k - z_k + c_k) // 2
    n_minus = (pi_k - z_k - c_k) // 2
    subsets = sum((-1) ** (m - j) * math.comb(n_plus, j) * math.comb(n_minus, m - j)
                  for j in range(m + 1))
    return math.factorial(m) * subsets


def ordered_square_tuple_sum(pi_k, z_k, m):
    """Sum of chi(p_1^2...p_m^2) over ordered distinct m-tuples."""
    return math.factorial(m) * math.comb(pi_k - z_k, m)


@dataclass
class DecompositionData:
    """Bulk per-curve divisor counts and prime symbol sums alongside traces."""
    data: EnsembleData
    z: np.ndarray  # (n, N+1) int16
    c: np.ndarray  # (n, N+1) int64

    @classmethod
    def build(cls, data):
        engine = TraceEngine(data.q, data.g, data.N)
        z = engine.divisor_degree_counts(data.coeffs)
        c = engine.prime_symbol_sums(data.s, z)
        return cls(data=data, z=z, c=c)


@dataclass
class PrimeTermReport:
    q: int
    g: int
    k: int
    l: int
    curves: int
    p_power_mean: Fraction      # <(P_k)^(2l)>
    delta2_mean: Fraction       # <Delta(2, k)>
    p2_tuple_mean: Fraction     # <P(2, k)> (ordered pairs)
    reference: int              # k, the leading value of <Delta(2, k)>


def prime_term_moment(decomp, k, l):
    """Exact ensemble means of (P_k)^(2l) and Delta(2,k); the l=1 reference
    value is k."""
    data = decomp.data
    q, n = data.q, data.count
    if k > data.N:
        raise ValueError("k beyond available traces")
    c_k = decomp.c[:, k].astype(object)
    z_k = decomp.z[:, k].astype(np.int64)
    pi_k = irreducible_count(q, k)
    if l == 0:
        p_power = Fraction(1)
    else:
        tot = int(sum(int(v) ** (2 * l) for v in c_k))
        p_power = Fraction(k ** (2 * l) * tot, n * q ** (l * k))
    delta2 = Fraction(k ** 2 * int((pi_k - z_k).sum()), n * q ** k)
    # ordered distinct pairs: (sum chi)^2 - sum chi^2
    pair_tot = int(sum(int(v) * int(v) for v in c_k)) - int((pi_k - z_k).sum())
    p2_tuple = Fraction(k ** 2 * pair_tot, n * q ** k)
    return PrimeTermReport(q=q, g=data.g, k=k, l=l, curves=n,
                           p_power_mean=p_power, delta2_mean=delta2,
                           p2_tuple_mean=p2_tuple, reference=k)
