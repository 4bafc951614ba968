"""Arithmetic in F_p[x] for an odd prime p, irreducible tables, extension fields.

Polynomials are tuples of ints in [0, p), lowest degree first, with no
trailing zeros; the zero polynomial is the empty tuple ().  All routines
are pure functions of their arguments and exact over the integers.

The canonical order on monic polynomials of a fixed degree d is
lexicographic on the coefficient sequence read from the x^(d-1)
coefficient down to the constant term.  Equivalently it is ascending in
the integer code

    code(f) = sum_{i < d} f[i] * p^i

over the non-leading coefficients.  Enumeration, the choice of extension
moduli and trial-division order all follow this order.
"""

from dataclasses import dataclass

ZERO = ()
ONE = (1,)


def is_odd_prime(p):
    if p < 3 or p % 2 == 0:
        return False
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def check_field(p):
    """Validate the base field modulus (odd prime)."""
    if not isinstance(p, int) or not is_odd_prime(p):
        raise ValueError(f"field size must be an odd prime, got {p!r}")
    return p


def poly(coeffs, p):
    """Build a polynomial from an integer coefficient iterable (low degree first)."""
    return normalize(tuple(c % p for c in coeffs))


def normalize(coeffs):
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return tuple(coeffs[:n])


def degree(f):
    """Degree of f; -1 flags the zero polynomial."""
    return len(f) - 1


def is_zero(f):
    return not f


def constant(c, p):
    c %= p
    return (c,) if c else ZERO


def leading(f):
    if not f:
        raise ValueError("zero polynomial has no leading coefficient")
    return f[-1]


def is_monic(f):
    return bool(f) and f[-1] == 1


def poly_add(f, g, p):
    if len(f) < len(g):
        f, g = g, f
    out = list(f)
    for i, c in enumerate(g):
        out[i] = (out[i] + c) % p
    return normalize(tuple(out))


def poly_neg(f, p):
    return tuple((-c) % p for c in f)


def poly_sub(f, g, p):
    return poly_add(f, poly_neg(g, p), p)


def poly_mul(f, g, p):
    if not f or not g:
        return ZERO
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return tuple(c % p for c in out)


def scalar_mul(c, f, p):
    c %= p
    if c == 0:
        return ZERO
    return tuple((c * a) % p for a in f)


def poly_divmod(f, g, p):
    """Euclidean division: f = q*g + r with deg r < deg g."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    if len(f) < len(g):
        return ZERO, f
    inv_lead = pow(g[-1], p - 2, p)
    rem = list(f)
    dq = len(f) - len(g)
    quo = [0] * (dq + 1)
    for k in range(dq, -1, -1):
        c = (rem[k + len(g) - 1] * inv_lead) % p
        if c:
            quo[k] = c
            for j, b in enumerate(g):
                rem[k + j] = (rem[k + j] - c * b) % p
    return normalize(tuple(quo)), normalize(tuple(rem[: len(g) - 1]))


def poly_mod(f, g, p):
    return poly_divmod(f, g, p)[1]


def poly_div(f, g, p):
    return poly_divmod(f, g, p)[0]


def make_monic(f, p):
    """Return (monic associate, unit) with f = unit * monic."""
    if not f:
        raise ValueError("zero polynomial has no monic associate")
    u = f[-1]
    if u == 1:
        return f, 1
    inv = pow(u, p - 2, p)
    return tuple((c * inv) % p for c in f), u


def poly_gcd(f, g, p):
    """Monic gcd; gcd(f, 0) is the monic associate of f."""
    while g:
        f, g = g, poly_mod(f, g, p)
    if not f:
        raise ValueError("gcd(0, 0) is undefined")
    return make_monic(f, p)[0]


def derivative(f, p):
    """Formal derivative; terms with index divisible by p vanish."""
    return normalize(tuple((i * f[i]) % p for i in range(1, len(f))))


def poly_eval(f, a, p):
    y = 0
    for c in reversed(f):
        y = (y * a + c) % p
    return y


def poly_pow_mod(f, e, mod, p):
    """f^e mod `mod` by square and multiply."""
    result = ONE
    base = poly_mod(f, mod, p)
    while e > 0:
        if e & 1:
            result = poly_mod(poly_mul(result, base, p), mod, p)
        base = poly_mod(poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


# -- canonical enumeration ---------------------------------------------------

def monic_code(f, p):
    """Integer code of a monic polynomial within its degree block."""
    if not is_monic(f):
        raise ValueError("code is defined for monic polynomials")
    code = 0
    for c in reversed(f[:-1]):
        code = code * p + c
    return code


def monic_from_code(code, d, p):
    coeffs = []
    for _ in range(d):
        code, c = divmod(code, p)
        coeffs.append(c)
    coeffs.append(1)
    return tuple(coeffs)


def monic_polys(d, p):
    """All monic polynomials of degree d in canonical order."""
    for code in range(p ** d):
        yield monic_from_code(code, d, p)


# -- factorization -----------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Complete factorization f = unit * prod(prime^mult)."""
    unit: int
    factors: tuple  # ((prime, mult), ...) in canonical prime order

    def reassemble(self, p):
        out = constant(self.unit, p)
        for prime, mult in self.factors:
            for _ in range(mult):
                out = poly_mul(out, prime, p)
        return out


def _mobius_int(n):
    m, cnt, d = n, 0, 2
    while d * d <= m:
        if m % d == 0:
            m //= d
            if m % d == 0:
                return 0
            cnt += 1
        d += 1
    if m > 1:
        cnt += 1
    return (-1) ** cnt


def irreducible_count(q, n):
    """Number of monic irreducibles of degree n over F_q (divisor Moebius sum)."""
    if n < 1:
        raise ValueError("degree must be >= 1")
    total = sum(_mobius_int(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    count, rem = divmod(total, n)
    if rem:
        raise ArithmeticError(f"irreducible count formula not integral at q={q}, n={n}")
    return count


class PrimeTable:
    """Monic irreducibles of F_q[x] by degree, in canonical order.

    Immutable after construction; the enumeration is cross-checked against
    the closed-form count at build time.
    """

    def __init__(self, q, max_degree, by_degree):
        self.q = q
        self.max_degree = max_degree
        self.by_degree = by_degree  # degree -> tuple of polys
        self._sets = {d: frozenset(ps) for d, ps in by_degree.items()}
        self.counts = {d: len(ps) for d, ps in by_degree.items()}

    @classmethod
    def build(cls, q, max_degree):
        check_field(q)
        by_degree = {}
        for d in range(1, max_degree + 1):
            found = []
            for f in monic_polys(d, q):
                if _trial_irreducible(f, d, by_degree, q):
                    found.append(f)
            if len(found) != irreducible_count(q, d):
                raise ArithmeticError(
                    f"irreducible enumeration mismatch at q={q}, degree {d}: "
                    f"{len(found)} found, {irreducible_count(q, d)} expected")
            by_degree[d] = tuple(found)
        return cls(q, max_degree, by_degree)

    def irreducibles(self, n):
        if n < 1 or n > self.max_degree:
            raise ValueError(f"degree {n} outside table range 1..{self.max_degree}")
        return self.by_degree[n]

    def pi(self, n):
        """pi_q(n), from the table when available, else the closed form."""
        if 1 <= n <= self.max_degree:
            return self.counts[n]
        return irreducible_count(self.q, n)

    def first_irreducible(self, n):
        return self.irreducibles(n)[0]

    def is_irreducible(self, f):
        d = degree(f)
        if d < 1:
            return False
        if not is_monic(f):
            f = make_monic(f, self.q)[0]
        if d <= self.max_degree:
            return f in self._sets[d]
        return _trial_irreducible(f, d, self.by_degree, self.q)

    def primes_up_to(self, max_deg):
        for d in range(1, max_deg + 1):
            yield from self.irreducibles(d)


def _trial_irreducible(f, d, by_degree, q):
    if d == 1:
        return True
    for e in range(1, d // 2 + 1):
        for prime in by_degree[e]:
            if not poly_mod(f, prime, q):
                return False
    return True


_prime_tables = {}


def get_prime_table(q, max_degree):
    """Per-process memo of prime tables; grows monotonically per q."""
    cached = _prime_tables.get(q)
    if cached is None or cached.max_degree < max_degree:
        cached = PrimeTable.build(q, max_degree)
        _prime_tables[q] = cached
    return cached


def factorize(f, p, table=None):
    """Factor a nonzero polynomial into monic irreducibles with multiplicities."""
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    monic, unit = make_monic(f, p)
    d = degree(monic)
    if table is None or table.max_degree < d // 2:
        table = get_prime_table(p, max(1, d // 2))
    factors = []
    rest = monic
    for e in range(1, d // 2 + 1):
        if degree(rest) < 2 * e:
            break
        for prime in table.irreducibles(e):
            if degree(rest) < e:
                break
            mult = 0
            while True:
                quo, rem = poly_divmod(rest, prime, p)
                if rem:
                    break
                rest = quo
                mult += 1
            if mult:
                factors.append((prime, mult))
    if degree(rest) >= 1:
        # all factors of degree <= d//2 removed, so the cofactor is prime
        factors.append((rest, 1))
    return Factorization(unit=unit, factors=tuple(factors))


def is_squarefree(f, p):
    """Squarefree test: gcd(f, f') constant, with a factorization fallback
    for the vanishing-derivative branch."""
    if not f:
        raise ValueError("squarefreeness is undefined for the zero polynomial")
    if degree(f) == 0:
        return True
    fp = derivative(f, p)
    if not fp:
        return all(m == 1 for _, m in factorize(f, p).factors)
    return degree(poly_gcd(f, fp, p)) == 0


def mobius(f, p):
    """Moebius function on monic polynomials."""
    if not f:
        raise ValueError("Moebius function is undefined at zero")
    if not is_monic(f):
        raise ValueError("Moebius function expects a monic polynomial")
    if degree(f) == 0:
        return 1
    fact = factorize(f, p)
    if any(m > 1 for _, m in fact.factors):
        return 0
    return (-1) ** len(fact.factors)


def von_mangoldt(f, p):
    """deg P if f = P^k for a prime P, else 0."""
    if not f or not is_monic(f):
        raise ValueError("von Mangoldt expects a nonzero monic polynomial")
    if degree(f) == 0:
        return 0
    fact = factorize(f, p)
    if len(fact.factors) == 1:
        return degree(fact.factors[0][0])
    return 0


# -- extension fields --------------------------------------------------------

class ExtField:
    """F_{p^n} as F_p[x] modulo the first canonical irreducible of degree n.

    Elements are reduced polynomial tuples of degree < n.
    """

    def __init__(self, p, n, modulus=None):
        check_field(p)
        if n < 1:
            raise ValueError("extension degree must be >= 1")
        self.p = p
        self.n = n
        if modulus is None:
            modulus = get_prime_table(p, n).first_irreducible(n)
        self.modulus = modulus
        self.size = p ** n

    def embed(self, c):
        return constant(c, self.p)

    def element(self, code):
        coeffs = []
        for _ in range(self.n):
            code, c = divmod(code, self.p)
            coeffs.append(c)
        return normalize(tuple(coeffs))

    def elements(self):
        for code in range(self.size):
            yield self.element(code)

    def add(self, a, b):
        return poly_add(a, b, self.p)

    def mul(self, a, b):
        return poly_mod(poly_mul(a, b, self.p), self.modulus, self.p)

    def pow(self, a, e):
        return poly_pow_mod(a, e, self.modulus, self.p)

    def evaluate_poly(self, f, x):
        """Evaluate a base-field polynomial at an extension element (Horner)."""
        acc = ZERO
        for c in reversed(f):
            acc = poly_add(self.mul(acc, x), self.embed(c), self.p)
        return acc

    def quad_character(self, a):
        """Quadratic character of the extension field: a^((p^n - 1)/2) as +-1, 0 at 0."""
        if not a:
            return 0
        r = self.pow(a, (self.size - 1) // 2)
        if r == ONE:
            return 1
        if r == constant(-1, self.p):
            return -1
        raise ArithmeticError("quadratic character did not land in {+-1}; bad modulus?")
