from fractions import Fraction

import pytest

from fdk.tautsys import (HAT, TAUT, annihilates_dual, fl_presentation, gkz_presentation,
                         hat_presentation, homogenized_data, homogenized_generators,
                         homogenized_ideal_Is, specialize_s)
from fdk.weyl import apply

from helpers import analysis_of


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_fl_of_hat_is_gkz(n):
    a = analysis_of(f"nc:{n}")
    hat = hat_presentation(a, 1, -n - 1)
    taut = fl_presentation(hat, a)
    assert taut.side == TAUT
    assert taut.rendered() == gkz_presentation(n, 1, -n - 1)


def test_hat_presentation_nc2():
    a = analysis_of("nc:2")
    hat = hat_presentation(a, Fraction(3), Fraction(-1, 2))
    assert hat.side == HAT
    assert hat.rendered() == ["3*w0^2 - w1*w2", "-w1*dw1 + w2*dw2",
                              "w0*dw0 + w1*dw1 + w2*dw2 + 1/2"]


def test_hat_rejects_point_on_divisor():
    with pytest.raises(ValueError):
        hat_presentation(analysis_of("nc:2"), 0, -3)


def test_fl_signs_are_recorded():
    a = analysis_of("nc:2")
    taut = fl_presentation(hat_presentation(a, 1, -3), a)
    assert len(taut.parameters["signs"]) == 3
    assert set(taut.parameters["signs"]) <= {1, -1}


def test_star3_dual_fields_annihilate():
    a = analysis_of("star3")
    taut = fl_presentation(hat_presentation(a, 1, -9), a)
    assert annihilates_dual(taut, a)
    assert len(taut.generators) == 7


def test_homogenized_euler_eigenvalue_for_general_d():
    a = analysis_of("nc:2")
    gens, ctx = homogenized_generators(a, Fraction(2), 3, with_s=False)
    data = homogenized_data(a, Fraction(2), 3, ctx)
    ring = ctx.position_context()
    w0, w1, w2 = ring.gens()
    h_tilde = w1 * w2 - (w0 ** 3).scale(2)
    assert apply(data.chi_tilde, h_tilde) == h_tilde.scale(2)


def test_homogenized_ideal_and_specialization():
    a = analysis_of("nc:2")
    Is = homogenized_ideal_Is(a, 1)
    assert Is.ctx.centrals == ("s",)
    assert Is.rendered()[-1] == "w0*dw0 + w1*dw1 + w2*dw2 - 2*s"
    specialized = specialize_s(Is, Fraction(-3, 2))
    assert specialized.ctx.centrals == ()
    assert specialized.rendered()[-1] == "w0*dw0 + w1*dw1 + w2*dw2 + 3"


def test_presentation_json():
    a = analysis_of("nc:1")
    data = hat_presentation(a, 1, -2).as_json()
    assert data["side"] == HAT
    assert data["positions"] == ["w0", "w1"]
    assert data["parameters"]["beta0"] == "-2"
