"""Quadratic residue and Jacobi symbols over F_q[x], and curve characters.

Two independent evaluation routes are provided: a definitional modular
exponentiation for prime moduli (`residue_symbol_def`) and a
factorization-free Euclidean reduction using quadratic reciprocity
(`jacobi_symbol`).  The character chi(D, .) places D in the numerator
slot: chi_D(f) = (D / f).
"""

from functools import lru_cache

from .polyfield import (
    ONE,
    check_field,
    degree,
    factorize,
    get_prime_table,
    is_monic,
    make_monic,
    poly_mod,
    poly_mul,
    poly_pow_mod,
    poly_sub,
)


@lru_cache(maxsize=None)
def legendre_table(q):
    """Quadratic residue symbol of F_q constants, indexed by residue."""
    check_field(q)
    table = [0] * q
    for c in range(1, q):
        r = pow(c, (q - 1) // 2, q)
        table[c] = 1 if r == 1 else -1
    return tuple(table)


def legendre(c, q):
    return legendre_table(q)[c % q]


def residue_symbol_def(f, prime, q, table=None, check=True):
    """Definitional residue symbol (f / P) = f^((|P|-1)/2) mod P, in {-1, 0, 1}.

    Slow oracle path; P must be monic irreducible.
    """
    if check:
        if not is_monic(prime) or degree(prime) < 1:
            raise ValueError("modulus must be a monic polynomial of positive degree")
        if table is None:
            table = get_prime_table(q, degree(prime))
        if not table.is_irreducible(prime):
            raise ValueError(f"modulus {prime} is reducible")
    f = poly_mod(f, prime, q)
    if not f:
        return 0
    r = poly_pow_mod(f, (q ** degree(prime) - 1) // 2, prime, q)
    if r == ONE:
        return 1
    if degree(r) == 0 and r[0] == q - 1:
        return -1
    raise ArithmeticError("residue symbol exponentiation left the unit circle; reducible modulus?")


def jacobi_symbol(B, A, q):
    """Jacobi symbol (B / A) for monic A, by Euclidean reduction and reciprocity.

    Handles constant B through (c / A) = legendre(c)^deg A, B = 0 (symbol 0
    unless A is constant), and non-monic remainders by extracting the
    leading unit before each reciprocity swap.
    """
    if not is_monic(A):
        raise ValueError("Jacobi symbol denominator must be monic")
    swap_signs = (q - 1) // 2 % 2 == 1
    sign = 1
    while True:
        if degree(A) == 0:
            return sign
        B = poly_mod(B, A, q)
        if not B:
            return 0
        B, unit = make_monic(B, q)
        if unit != 1 and legendre(unit, q) == -1 and degree(A) % 2 == 1:
            sign = -sign
        if degree(B) == 0:
            return sign
        if swap_signs and degree(A) % 2 == 1 and degree(B) % 2 == 1:
            sign = -sign
        A, B = B, A


def poly_sqrt(f, q):
    """Monic square root of a monic polynomial, or None."""
    d = degree(f)
    if d % 2 or d < 0:
        return None
    if d == 0:
        return ONE
    half = d // 2
    root = [0] * half + [1]
    inv2 = pow(2, q - 2, q)
    # match coefficients from the top down: f[d-k] determines root[half-k]
    for k in range(1, half + 1):
        acc = 0
        for i in range(half - k + 1, half):
            j = d - k - i
            if 0 <= j <= half:
                acc += root[i] * root[j]
        root[half - k] = ((f[d - k] - acc) * inv2) % q
    candidate = tuple(root)
    return candidate if not poly_sub(f, poly_mul(candidate, candidate, q), q) else None


def is_perfect_square(f, q):
    return is_monic(f) and poly_sqrt(f, q) is not None


def chi(D, f, q):
    """Curve character chi_D(f) = (D / f); completely multiplicative in f."""
    if not is_monic(D) or degree(D) < 1:
        raise ValueError("character modulus must be monic of positive degree")
    if is_perfect_square(D, q):
        raise ValueError("character modulus must not be a perfect square")
    return jacobi_symbol(D, f, q)


def residue_symbol_product(B, A, q, table=None):
    """Factorization-backed (B / A): product of definitional prime symbols.

    Oracle counterpart of `jacobi_symbol`, used for cross-checks.
    """
    if not is_monic(A):
        raise ValueError("denominator must be monic")
    if degree(A) == 0:
        return 1
    value = 1
    for prime, mult in factorize(A, q, table).factors:
        s = residue_symbol_def(B, prime, q, table=table, check=False)
        if s == 0:
            return 0
        if mult % 2:
            value *= s
    return value
