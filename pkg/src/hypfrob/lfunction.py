"""Per-curve exact L-data: Dirichlet coefficients, completed polynomial,
Frobenius traces by two independent routes, eigenphases, point counts.

All character sums and coefficients are exact integers; floating point
enters only in eigenphase extraction.  The scaled trace s_n equals the
power sums of the inverse roots of the completed polynomial, so that
s_n = q^(n/2) tr(Theta^n) and, by the explicit character-sum route,
s_n = -(von Mangoldt weighted sum of chi_Q over monic f of degree n).
The two routes are compared exactly in the tests, which pins the sign
convention.
"""

import cmath
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from . import polyfield as pf
from .charsym import jacobi_symbol
from .polyfield import degree, get_prime_table, is_monic, is_squarefree, monic_polys

ROOT_MAGNITUDE_TOL = 1e-9


class FunctionalEquationError(ArithmeticError):
    """Completed-coefficient symmetry violated; an arithmetic bug, not data."""


class RootMagnitudeError(ArithmeticError):
    """A completed-polynomial root left the critical circle beyond tolerance."""


@dataclass(frozen=True)
class Curve:
    """y^2 = Q(x) with Q monic squarefree of degree 2g+1 over F_q."""
    q: int
    g: int
    Q: tuple

    def __post_init__(self):
        pf.check_field(self.q)
        if self.g < 1:
            raise ValueError("genus must be >= 1")
        if not is_monic(self.Q) or degree(self.Q) != 2 * self.g + 1:
            raise ValueError("curve polynomial must be monic of degree 2g+1")
        if not is_squarefree(self.Q, self.q):
            raise ValueError("curve polynomial must be squarefree")

    @classmethod
    def from_coeffs(cls, q, coeffs):
        Q = pf.poly(coeffs, q)
        d = degree(Q)
        if d < 3 or d % 2 == 0:
            raise ValueError("curve polynomial must have odd degree >= 3")
        return cls(q=q, g=(d - 1) // 2, Q=Q)


@dataclass(frozen=True)
class LData:
    """Dirichlet coefficients A(beta) and the completed coefficients Astar."""
    A: tuple          # beta = 0 .. 2g
    lam: int          # trivial-zero count; 0 for odd-degree moduli
    delta: int        # half-degree of the completed polynomial
    Astar: tuple      # beta = 0 .. 2*delta


@dataclass(frozen=True)
class FrobeniusSummary:
    """Scaled integer power sums s_n = q^(n/2) tr Theta^n and eigenphases."""
    s: tuple
    theta: tuple


def dirichlet_coefficients(curve, up_to=None, strategy="funceq"):
    """A(beta) = sum of chi_Q over monic B of degree beta, exact integers.

    strategy 'funceq' enumerates beta <= g and completes the upper half by
    the coefficient symmetry; 'enumerate' sums every degree directly (test
    oracle).
    """
    q, g, Q = curve.q, curve.g, curve.Q
    if up_to is None:
        up_to = 2 * g
    if up_to > 2 * g:
        raise ValueError("coefficients vanish beyond degree 2g; request up_to <= 2g")
    if strategy not in ("funceq", "enumerate"):
        raise ValueError(f"unknown strategy {strategy!r}")
    cut = up_to if strategy == "enumerate" else min(g, up_to)
    coeffs = [0] * (up_to + 1)
    coeffs[0] = 1
    for beta in range(1, cut + 1):
        coeffs[beta] = sum(jacobi_symbol(Q, B, q) for B in monic_polys(beta, q))
    for beta in range(cut + 1, up_to + 1):
        coeffs[beta] = q ** (beta - g) * coeffs[2 * g - beta]
    return coeffs


def complete_l(curve, A=None):
    """Complete the L-polynomial; the symmetry residual must vanish exactly."""
    q, g = curve.q, curve.g
    if A is None:
        A = dirichlet_coefficients(curve)
    A = tuple(A)
    if len(A) != 2 * g + 1:
        raise ValueError("need coefficients for beta = 0 .. 2g")
    lam, delta = 0, g          # odd-degree modulus: no trivial zero
    astar = A
    if astar[0] != 1:
        raise FunctionalEquationError("constant coefficient must be 1")
    for beta in range(delta, 2 * delta + 1):
        expected = q ** (beta - delta) * astar[2 * delta - beta]
        if astar[beta] != expected:
            raise FunctionalEquationError(
                f"coefficient symmetry fails at beta={beta}: "
                f"{astar[beta]} != {expected}")
    return LData(A=A, lam=lam, delta=delta, Astar=astar)


def newton_power_sums(coeffs, N):
    """Power sums p_n of the inverse roots of 1 + c_1 u + ... + c_d u^d.

    Exact integer recursion p_n = -n c_n - sum_{i<n} c_i p_{n-i}, with
    c_i = 0 beyond the polynomial degree.
    """
    d = len(coeffs) - 1
    c = list(coeffs) + [0] * max(0, N - d)
    p = [0] * (N + 1)
    for n in range(1, N + 1):
        acc = -n * c[n] if n <= d else 0
        for i in range(1, n):
            if i <= d and c[i]:
                acc -= c[i] * p[n - i]
        p[n] = acc
    return p[1:]


def traces_from_lpoly(ldata, N):
    """s_n from the completed polynomial via Newton's identities."""
    return newton_power_sums(ldata.Astar, N)


def explicit_trace_sum(D, q, n, table=None):
    """-s_n-style character sum for an arbitrary monic modulus D:
    sum over prime powers P^e of degree n of (deg P) * (D/P)^e."""
    if table is None:
        table = get_prime_table(q, n)
    total = 0
    for d in range(1, n + 1):
        if n % d:
            continue
        e = n // d
        sub = 0
        for prime in table.irreducibles(d):
            sym = jacobi_symbol(D, prime, q)
            sub += sym if e % 2 else sym * sym
        total += d * sub
    return total


def traces_explicit(curve, N, table=None):
    """s_n = -(von Mangoldt weighted character sum of degree n), exact."""
    if table is None:
        table = get_prime_table(curve.q, N)
    return [-explicit_trace_sum(curve.Q, curve.q, n, table) for n in range(1, N + 1)]


def _qpoly_normalize(f):
    while f and f[-1] == 0:
        f = f[:-1]
    return list(f)


def _qpoly_divmod(f, g):
    f, g = _qpoly_normalize(f), _qpoly_normalize(g)
    quo = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    while len(f) >= len(g):
        c = f[-1] / g[-1]
        k = len(f) - len(g)
        quo[k] = c
        for j, b in enumerate(g):
            f[k + j] -= c * b
        f = _qpoly_normalize(f[:-1])
        if not f:
            break
    return _qpoly_normalize(quo), f


def _qpoly_gcd(f, g):
    f, g = _qpoly_normalize(f), _qpoly_normalize(g)
    while g:
        f, g = g, _qpoly_divmod(f, g)[1]
    return [c / f[-1] for c in f]


def _qpoly_deriv(f):
    return [i * f[i] for i in range(1, len(f))]


def squarefree_factors(coeffs):
    """Yun decomposition over Q: [(factor coefficients, multiplicity)].

    Exact rational arithmetic; repeated roots are separated before any
    numerical work so the root-finder only ever sees simple roots.
    """
    f = [Fraction(c) for c in coeffs]
    d = _qpoly_gcd(f, _qpoly_deriv(f))
    if len(d) == 1:
        return [(f, 1)]
    out = []
    b = _qpoly_divmod(f, d)[0]
    c = _qpoly_divmod(_qpoly_deriv(f), d)[0]
    i = 1
    while len(b) > 1:
        delta = _qpoly_normalize(
            [x - y for x, y in
             zip(c + [Fraction(0)] * len(b), _qpoly_deriv(b) + [Fraction(0)] * len(c))])
        a = _qpoly_gcd(b, delta) if delta else list(b)
        if len(a) > 1:
            out.append((a, i))
        b = _qpoly_divmod(b, a)[0]
        c = _qpoly_divmod(delta, a)[0] if delta else []
        i += 1
    return out


def _polished_roots(coeffs):
    """Companion-matrix roots of a simple-root polynomial, Newton refined."""
    cf = np.array([float(c) for c in coeffs])
    roots = np.roots(cf[::-1])
    dcf = cf[1:] * np.arange(1, len(cf))
    for _ in range(3):
        vals = np.polynomial.polynomial.polyval(roots, cf)
        ders = np.polynomial.polynomial.polyval(roots, dcf)
        step = np.where(ders != 0, vals / np.where(ders != 0, ders, 1.0), 0.0)
        roots = roots - step
    return roots


def eigenphases(ldata, q):
    """Angles theta_j with completed-polynomial roots q^(-1/2) e^(-i theta_j).

    Repeated factors are split off exactly first (multiple roots would cost
    the companion matrix half its digits), then each simple root is Newton
    polished.  Root magnitudes must sit on the critical circle within
    ROOT_MAGNITUDE_TOL; violations abort rather than clamp.
    """
    target = q ** -0.5
    thetas = []
    for factor, mult in squarefree_factors(ldata.Astar):
        for u in _polished_roots(factor):
            if abs(abs(u) - target) > ROOT_MAGNITUDE_TOL:
                raise RootMagnitudeError(
                    f"root magnitude {abs(u):.12g} vs {target:.12g} exceeds tolerance")
            thetas.extend([-cmath.phase(u * q ** 0.5)] * mult)
    if len(thetas) != 2 * ldata.delta:
        raise ArithmeticError("root multiplicities do not add up to the degree")
    thetas.sort()
    return tuple(thetas)


def frobenius_summary(curve, N, table=None):
    ldata = complete_l(curve)
    s = traces_from_lpoly(ldata, N)
    theta = eigenphases(ldata, curve.q)
    return FrobeniusSummary(s=tuple(s), theta=theta)


def traces_from_eigenphases(theta, q, N):
    """Float reconstruction q^(n/2) sum_j e^(i n theta_j); conjugate pairing
    makes the result real."""
    out = []
    for n in range(1, N + 1):
        val = sum(cmath.exp(1j * n * t) for t in theta)
        out.append(q ** (n / 2) * val.real)
    return out


def point_count_direct(curve, n):
    """Points over F_{q^n}: affine solutions of y^2 = Q(x) plus one at infinity."""
    ext = pf.ExtField(curve.q, n)
    total = 1
    for x in ext.elements():
        total += 1 + ext.quad_character(ext.evaluate_poly(curve.Q, x))
    return total


def point_count_from_traces(curve, s, n):
    """N_n = q^n + 1 - s_n from the trace power sums."""
    return curve.q ** n + 1 - s[n - 1]
