import pytest

from hypfrob import charsym as cs
from hypfrob import polyfield as pf


def P(coeffs, p=3):
    return pf.poly(coeffs, p)


def all_polys_up_to(deg, p):
    out = [()]
    for d in range(0, deg + 1):
        for lead in range(1, p):
            for f in pf.monic_polys(d, p):
                out.append(pf.scalar_mul(lead, f, p))
    return out


class TestResidueSymbol:
    def test_x_mod_x2_plus_1(self):
        # x^4 = (x^2)^2 = (-1)^2 = 1 mod x^2+1, so the symbol is +1
        assert cs.residue_symbol_def(P((0, 1)), P((1, 0, 1)), 3) == 1

    def test_shared_factor(self):
        assert cs.residue_symbol_def(P((1, 0, 1)), P((1, 0, 1)), 3) == 0

    def test_constant_argument_identity(self):
        # (c/P) = legendre(c)^deg P
        for prime in pf.get_prime_table(3, 3).primes_up_to(3):
            for c in range(1, 3):
                expected = cs.legendre(c, 3) ** pf.degree(prime)
                assert cs.residue_symbol_def((c,), prime, 3) == expected
        assert cs.residue_symbol_def((2,), P((2, 1, 1)), 3) == 1  # (-1)^2

    def test_reducible_modulus_rejected(self):
        with pytest.raises(ValueError):
            cs.residue_symbol_def(P((0, 1)), P((2, 0, 1)), 3)  # x^2 - 1 splits


class TestJacobiSymbol:
    def test_fast_path_equals_slow_path_exhaustively(self):
        table = pf.get_prime_table(3, 4)
        denominators = [f for d in range(1, 5) for f in pf.monic_polys(d, 3)]
        numerators = all_polys_up_to(3, 3)
        for A in denominators:
            for B in numerators:
                assert cs.jacobi_symbol(B, A, 3) == cs.residue_symbol_product(B, A, 3, table)

    def test_zero_numerator(self):
        assert cs.jacobi_symbol((), P((0, 1)), 3) == 0
        assert cs.jacobi_symbol((), (1,), 3) == 1  # empty product over no primes

    def test_non_monic_denominator_rejected(self):
        with pytest.raises(ValueError):
            cs.jacobi_symbol(P((0, 1)), P((2, 2)), 3)

    @pytest.mark.parametrize("q,maxdeg", [(3, 4), (5, 3)])
    def test_reciprocity(self, q, maxdeg):
        sign_unit = (q - 1) // 2
        monics = [f for d in range(1, maxdeg + 1) for f in pf.monic_polys(d, q)]
        for A in monics:
            for B in monics:
                sign = -1 if (sign_unit % 2 and pf.degree(A) % 2 and pf.degree(B) % 2) else 1
                assert cs.jacobi_symbol(B, A, q) == sign * cs.jacobi_symbol(A, B, q)

    def test_reciprocity_specific_odd_degrees(self):
        # both degrees odd at q = 3 flips the sign
        A, B = P((1, 2, 0, 1)), P((0, 1))
        assert cs.jacobi_symbol(B, A, 3) == -cs.jacobi_symbol(A, B, 3)
        assert cs.jacobi_symbol(B, A, 3) == -1

    def test_shared_factor_annihilates(self):
        A = P((0, 1, 1))  # x(x+1)
        assert cs.jacobi_symbol(P((0, 2)), A, 3) == 0
        assert cs.jacobi_symbol(P((0, 1, 1)), P((0, 1)), 3) == 0

    def test_bilateral_multiplicativity(self):
        smalls = [f for d in range(0, 3) for f in pf.monic_polys(d, 3)]
        denoms = [f for d in range(1, 4) for f in pf.monic_polys(d, 3)]
        for A in denoms:
            for B1 in smalls:
                for B2 in smalls:
                    lhs = cs.jacobi_symbol(pf.poly_mul(B1, B2, 3), A, 3)
                    assert lhs == cs.jacobi_symbol(B1, A, 3) * cs.jacobi_symbol(B2, A, 3)
        for B in smalls:
            for A1 in denoms:
                for A2 in denoms:
                    lhs = cs.jacobi_symbol(B, pf.poly_mul(A1, A2, 3), 3)
                    assert lhs == cs.jacobi_symbol(B, A1, 3) * cs.jacobi_symbol(B, A2, 3)


class TestCurveCharacter:
    def test_linear_denominator_evaluation(self):
        # chi_D(x - a) = legendre(D(a))
        D = P((1, 2, 0, 1))
        for a in range(3):
            linear = pf.poly((-a, 1), 3)
            assert cs.chi(D, linear, 3) == cs.legendre(pf.poly_eval(D, a, 3), 3)
        assert cs.chi(D, P((0, 1)), 3) == 1  # D(0) = 1 is a square

    def test_trivial_argument(self):
        assert cs.chi(P((1, 2, 0, 1)), (1,), 3) == 1

    def test_square_argument_values(self):
        D = P((1, 2, 0, 1))
        for d in range(1, 3):
            for f in pf.monic_polys(d, 3):
                val = cs.chi(D, pf.poly_mul(f, f, 3), 3)
                shares = pf.degree(pf.poly_gcd(f, D, 3)) > 0
                assert val == (0 if shares else 1)

    def test_perfect_square_modulus_rejected(self):
        with pytest.raises(ValueError):
            cs.chi(P((1, 2, 1)), P((0, 1)), 3)  # (x+1)^2

    def test_constant_modulus_rejected(self):
        with pytest.raises(ValueError):
            cs.chi((1,), P((0, 1)), 3)

    def test_completely_multiplicative(self):
        D = P((1, 2, 0, 1))
        monics = [f for d in range(1, 3) for f in pf.monic_polys(d, 3)]
        for f in monics:
            for g in monics:
                assert (cs.chi(D, pf.poly_mul(f, g, 3), 3)
                        == cs.chi(D, f, 3) * cs.chi(D, g, 3))


class TestPolySqrt:
    def test_roundtrip(self):
        for d in range(1, 4):
            for f in pf.monic_polys(d, 3):
                sq = pf.poly_mul(f, f, 3)
                assert cs.poly_sqrt(sq, 3) == f
                assert cs.is_perfect_square(sq, 3)

    def test_non_squares(self):
        assert cs.poly_sqrt(P((1, 0, 0, 0, 1)), 3) is None  # x^4 + 1
        assert not cs.is_perfect_square(P((1, 2, 0, 1)), 3)
        assert not cs.is_perfect_square(P((0, 1)), 3)  # odd degree
