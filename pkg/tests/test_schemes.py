
import pytest

from kdvgalerkin import CompositionScheme, scheme_by_name, scheme_imr, scheme_yoshida


class TestSchemeIMR:
    def test_single_unit_substep(self):
        s = scheme_imr()
        assert s.b == (1.0,)
        assert s.formal_order == 2
        assert s.stages == 1
        assert sum(s.b) == 1.0


class TestSchemeYoshida:
    def test_order4_coefficients(self):
        s = scheme_yoshida(4)
        b1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
        assert s.b == pytest.approx((b1, 1.0 - 2.0 * b1, b1), abs=1e-15)
        # the two closed forms of b1 coincide
        assert b1 == pytest.approx((2.0 + 2.0 ** (1 / 3) + 2.0 ** (-1 / 3)) / 3.0, abs=1e-15)
        assert s.b[0] == pytest.approx(1.351207191959658, abs=1e-14)
        assert s.b[1] == pytest.approx(-1.702414383919315, abs=1e-14)

    def test_order4_cubic_sum_vanishes(self):
        b1 = scheme_yoshida(4).b[0]
        assert abs(2.0 * b1**3 + (1.0 - 2.0 * b1) ** 3) < 1e-12

    def test_order6_structure(self):
        s = scheme_yoshida(6)
        assert s.stages == 9
        d1 = 1.0 / (2.0 - 2.0 ** (1.0 / 5.0))
        assert d1 == pytest.approx(1.1746717580893635, abs=1e-12)
        inner = scheme_yoshida(4).b
        expected = tuple(d * x for d in (d1, 1.0 - 2.0 * d1, d1) for x in inner)
        assert s.b == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("order,stages", [(4, 3), (6, 9), (8, 27)])
    def test_stage_counts(self, order, stages):
        assert scheme_yoshida(order).stages == stages

    @pytest.mark.parametrize("order", [4, 6, 8])
    def test_coefficient_identities(self, order):
        s = scheme_yoshida(order)
        assert abs(sum(s.b) - 1.0) <= 1e-14
        for j in range(3, order, 2):
            assert abs(sum(x**j for x in s.b)) <= 1e-12, f"sum b^{j} nonzero"

    @pytest.mark.parametrize("order", [4, 6, 8])
    def test_palindromic(self, order):
        b = scheme_yoshida(order).b
        assert b == tuple(reversed(b))

    @pytest.mark.parametrize("order", [0, 2, 3, 5, 7])
    def test_invalid_orders(self, order):
        with pytest.raises(ValueError):
            scheme_yoshida(order)


class TestSchemeValidation:
    def test_sum_must_be_one(self):
        with pytest.raises(ValueError, match="sum to 1"):
            CompositionScheme(b=(0.6, 0.6), formal_order=2, name="bad")

    def test_palindrome_required(self):
        with pytest.raises(ValueError, match="palindromic"):
            CompositionScheme(b=(0.75, 0.5, -0.25), formal_order=2, name="bad")

    def test_odd_power_sum_checked_for_declared_order(self):
        # sums to 1 and is palindromic, but sum b^3 != 0, so order 4 is a lie
        with pytest.raises(ValueError, match="b\\^3"):
            CompositionScheme(b=(0.25, 0.5, 0.25), formal_order=4, name="bad")

    def test_zero_fraction_rejected(self):
        with pytest.raises(ValueError):
            CompositionScheme(b=(1.0, 0.0), formal_order=2, name="bad")


class TestSchemeByName:
    @pytest.mark.parametrize("name,order", [("imr", 2), ("yoshida4", 4), ("yoshida6", 6), ("yoshida8", 8)])
    def test_known_names(self, name, order):
        s = scheme_by_name(name)
        assert s.name == name
        assert s.formal_order == order

    def test_unknown_name_lists_valid_ones(self):
        with pytest.raises(ValueError) as err:
            scheme_by_name("yoshida5")
        message = str(err.value)
        for name in ("imr", "yoshida4", "yoshida6", "yoshida8"):
            assert name in message
