from fractions import Fraction as F

import pytest

from svest import twotank as tt
from svest.geometry import EMPTY, RationalPolygon, affine_image, intersect
from svest.lcomplete import window_estimate
from svest.machine import UnknownSymbol


def test_alphabet_sizes():
    assert len(tt.ALPHABET) == 81
    d1, d2 = tt.TwoTankSource(1), tt.TwoTankSource(2)
    assert len(d1.alphabet) + len(d2.alphabet) == 54
    suite = tt.twotank_suite()
    assert suite.functions[0]("u23|y12") == "u23|y1:1"
    assert suite.functions[1]("u23|y12") == "u23|y2:2"


def test_cells():
    assert tt.output_cell(1, 1) == RationalPolygon.box(0, 10, 0, 10)
    assert tt.output_cell(2, 3) == RationalPolygon.box(10, 20, 20, 30)
    for nu1 in tt.LEVELS:
        total = sum(tt.output_cell(nu1, nu2).area() for nu2 in tt.LEVELS)
        assert total == 300


def test_quantize_half_open():
    assert [tt.quantize(v) for v in (0, F(99, 10), 10, 20, 30)] == [1, 1, 2, 3, 3]
    with pytest.raises(ValueError):
        tt.quantize(31)


def test_symbol_parsing():
    assert tt.parse_symbol("u31|y22") == (3, 1, 2, 2)
    for bad in ("u41|y22", "x", "u31y22"):
        with pytest.raises(UnknownSymbol):
            tt.parse_symbol(bad)


def test_single_symbols_feasible():
    src = tt.TwoTankSource(0)
    for sym in src.alphabet:
        chi, _ = window_estimate(src, [sym])
        mu1, mu2, nu1, nu2 = tt.parse_symbol(sym)
        assert chi == tt.output_cell(nu1, nu2)


def test_first_step_prediction():
    chi, rho = tt.symbolic_step(tt.DOMAIN, "u22|y11")
    assert chi == RationalPolygon.box(0, 10, 0, 10)
    # corners of the square mapped by x -> A x + (7, 7); all inside the domain
    assert rho.vertices == ((7, 7), (11, F(19, 2)), (F(27, 2), F(27, 2)), (F(19, 2), 11))
    assert tt.symbolic_step(EMPTY, "u22|y11") == (EMPTY, EMPTY)


def test_prediction_clipped_to_domain():
    _, rho = tt.symbolic_step(tt.DOMAIN, "u33|y33")
    assert rho == intersect(affine_image(tt.output_cell(3, 3), tt.MATRIX, (14, 14)), tt.DOMAIN)
    assert rho.bbox[1] == 30


def test_simulation_start():
    states, symbols = tt.observation_trace()
    assert states[:3] == [(0, 0), (7, 7), (F(231, 20), F(231, 20))]
    assert symbols[:3] == ["u22|y11", "u22|y11", "u22|y22"]
    assert len(symbols) == 8
    for x in states:
        assert 0 <= x[0] <= 30 and 0 <= x[1] <= 30


def test_trace_contains_state_and_is_exact():
    for ell in (1, 2, 3):
        for step in tt.run_trace(ell):
            assert step.contained and step.exact


def test_unknown_reading():
    with pytest.raises(UnknownSymbol):
        tt.TwoTankSource(1).step(None, "u22|y11")
    with pytest.raises(ValueError):
        tt.TwoTankSource(4)
