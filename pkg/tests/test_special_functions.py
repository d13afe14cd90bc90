"""Bessel/Hankel/Airy evaluators, their scaling conventions, and continuations.

Reference values marked "frozen" were produced by the independent
power-series oracle in tests/oracles.py at 90 significant digits and
rounded to shortest-round-trip doubles.
"""

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from resonance_atlas.errors import DomainError
from resonance_atlas.special_functions import (
    AiryArgument,
    AiryCoefficients,
    MAX_ORDER,
    SUPPORTED_RADIUS,
    airy_ai,
    airy_ai_prime,
    airy_asymptotic,
    bessel_j,
    bessel_j_prime,
    continue_bessel,
    continue_hankel1,
    hankel1,
    hankel1_prime,
)

import oracles

TWO_OVER_PI = 2.0 / math.pi

# Frozen oracle values: (function, order, argument, value).
FROZEN_VALUES = [
    (bessel_j, 1.0, 1.0 + 0j, 0.4400505857449335 + 0j),
    (bessel_j, 0.0, 2.5 + 0j, -0.048383776468198 + 0j),
    (bessel_j, 2.5, 3.7 + 0.4j, 0.4765847474064691 - 0.006093548989585082j),
    (hankel1, 0.0, 1.0 + 0j, 0.7651976865579666 + 0.08825696421567696j),
    (hankel1, 3.0, 2.2 + 1.1j, -0.2975427195646918 - 0.3452162348831115j),
    (bessel_j_prime, 2.0, 1.8 - 0.6j, 0.2884281555142352 + 0.038945659638663394j),
    (hankel1_prime, 1.0, 4.4 + 0.3j, -0.2283814324042427 - 0.1703324308916446j),
]


@pytest.mark.parametrize("fn,nu,z,want", FROZEN_VALUES,
                         ids=lambda v: getattr(v, "__name__", None) or str(v))
def test_frozen_values(fn, nu, z, want):
    got = fn(nu, z).to_complex()
    assert abs(got - want) <= 1e-12 * abs(want)


def test_exponent_conventions():
    # J grows like exp(|Im z|) on both sides of the axis, H1 like exp(-Im z);
    # the envelope lands in the exponent and the mantissa stays normalized,
    # so values survive where the raw double would overflow.
    z = 3.0 + 40.0j
    assert abs(bessel_j(2.0, z).log_abs() - 40.0) < 5.0
    assert abs(hankel1(2.0, z).log_abs() + 40.0) < 5.0
    assert abs(bessel_j(2.0, z.conjugate()).log_abs() - 40.0) < 5.0
    assert abs(hankel1(2.0, z.conjugate()).log_abs() - 40.0) < 5.0

    tall = 2.0 + 1000.0j
    grown = bessel_j(0.0, tall)
    assert 0.5 <= abs(grown.mantissa) <= 2.0
    assert grown.log_abs() == pytest.approx(1000.0, abs=6.0)
    with pytest.raises(OverflowError):
        grown.to_complex()


def test_deep_evanescent_scaled_value():
    # J_60 near the turning point: |J| ~ 1e-13 with a large twist.  Frozen
    # log-modulus and phase from the oracle.
    val = bessel_j(60.0, 30.0 + 5.0j)
    assert val.log_abs() == pytest.approx(-29.006104898224171, abs=1e-10)
    want_phase = 2.3161731965611262
    diff = (val.phase() - want_phase) % (2.0 * math.pi)
    assert min(diff, 2.0 * math.pi - diff) < 1e-10


@pytest.mark.parametrize("nu", [0.0, 0.5, 3.0, 17.5, 42.0])
@pytest.mark.parametrize("z", [0.7 + 0j, 5.5 - 1.2j, 23.0 + 2.0j, 80.0 + 0.01j])
def test_against_series_oracle(nu, z):
    mp_nu, mp_z = oracles.mp.mpf(nu), oracles.mp.mpc(z)
    pairs = [
        (bessel_j(nu, z), oracles.bessel_j_series(mp_nu, mp_z)),
        (hankel1(nu, z), oracles.hankel1_series(mp_nu, mp_z)),
        (bessel_j_prime(nu, z), oracles.bessel_j_prime_series(mp_nu, mp_z)),
        (hankel1_prime(nu, z), oracles.hankel1_prime_series(mp_nu, mp_z)),
    ]
    for got, want_mp in pairs:
        want = oracles.to_complex(want_mp)
        assert abs(got.to_complex() - want) <= 1e-11 * abs(want)


half_integer_orders = st.integers(min_value=0, max_value=80).map(lambda n: n / 2.0)
strip_points = st.builds(
    complex,
    st.floats(min_value=0.3, max_value=150.0),
    st.floats(min_value=-3.0, max_value=3.0),
)


@given(nu=half_integer_orders, z=strip_points)
@settings(max_examples=150, deadline=None)
def test_wronskian_identity(nu, z):
    # z * (J' H - J H') = -2i/pi for every order and argument.
    j = bessel_j(nu, z)
    jp = bessel_j_prime(nu, z)
    h = hankel1(nu, z)
    hp = hankel1_prime(nu, z)
    w = (jp * h - j * hp).to_complex() * z
    assert abs(w + 2j / math.pi) <= 1e-10 * TWO_OVER_PI


@pytest.mark.parametrize("nu", [0.5, 1.0, 2.5, 7.0])
@pytest.mark.parametrize("derivative", [False, True])
def test_bessel_half_turn_matches_principal_branch(nu, derivative, rng):
    # For Im z < 0 the rotated point z*e^{i pi} still lies on the principal
    # sheet, so the continuation must agree with direct evaluation at -z.
    fn = bessel_j_prime if derivative else bessel_j
    for _ in range(20):
        z = complex(rng.uniform(0.5, 30.0), rng.uniform(-3.0, -0.05))
        base = fn(nu, z).to_complex()
        direct = fn(nu, -z).to_complex()
        continued = continue_bessel(nu, 1, base, derivative=derivative)
        assert continued == pytest.approx(direct, rel=1e-10)


@pytest.mark.parametrize("n", [0, 1, 4])
@pytest.mark.parametrize("derivative", [False, True])
def test_hankel_half_turn_matches_principal_branch(n, derivative, rng):
    h_fn = hankel1_prime if derivative else hankel1
    j_fn = bessel_j_prime if derivative else bessel_j
    for _ in range(20):
        z = complex(rng.uniform(0.5, 30.0), rng.uniform(-3.0, -0.05))
        continued = continue_hankel1(
            n, 1, h_fn(n, z).to_complex(), j_fn(n, z).to_complex(),
            derivative=derivative)
        direct = h_fn(n, -z).to_complex()
        assert continued == pytest.approx(direct, rel=1e-9)


@given(nu=half_integer_orders,
       m1=st.integers(min_value=-6, max_value=6),
       m2=st.integers(min_value=-6, max_value=6))
@settings(max_examples=80)
def test_bessel_continuation_semigroup(nu, m1, m2):
    v = 0.8 - 0.3j
    twice = continue_bessel(nu, m1, continue_bessel(nu, m2, v))
    once = continue_bessel(nu, m1 + m2, v)
    # Quarter-turn phases are exact, so this holds to the last bit.
    assert twice == once


@given(n=st.integers(min_value=0, max_value=40),
       m1=st.integers(min_value=-4, max_value=4),
       m2=st.integers(min_value=-4, max_value=4))
@settings(max_examples=80)
def test_hankel_continuation_semigroup(n, m1, m2):
    h, j = 0.25 + 1.5j, -0.75 + 0.5j
    h_mid = continue_hankel1(n, m2, h, j)
    j_mid = continue_bessel(float(n), m2, j)
    twice = continue_hankel1(n, m1, h_mid, j_mid)
    once = continue_hankel1(n, m1 + m2, h, j)
    assert twice == pytest.approx(once, rel=1e-15)


def test_continuation_phase_is_exact_quarter_turn():
    assert continue_bessel(0.5, 1, 1.0 + 0j) == 1j
    assert continue_bessel(0.5, 2, 1.0 + 0j) == -1 + 0j
    assert continue_bessel(1.0, 1, 1.0 + 0j) == -1 + 0j
    assert continue_bessel(1.0, -1, 1.0 + 0j) == -1 + 0j
    assert continue_bessel(1.5, -1, 1.0 + 0j) == 1j
    assert continue_bessel(2.0, 7, 1.0 + 0j) == 1 + 0j


@pytest.mark.parametrize("bad", [-1.0, 0.3, MAX_ORDER + 0.5, float("nan")])
def test_order_validation(bad):
    with pytest.raises(DomainError):
        bessel_j(bad, 1.0 + 0j)


def test_argument_validation():
    with pytest.raises(DomainError):
        bessel_j(1.0, complex(SUPPORTED_RADIUS + 1, 0.0))
    with pytest.raises(DomainError):
        hankel1(1.0, complex(float("nan"), 0.0))
    with pytest.raises(DomainError):
        hankel1(0.0, 0j)
    with pytest.raises(DomainError):
        hankel1_prime(0.0, 0j)
    with pytest.raises(DomainError):
        bessel_j(0.5, 0j)


def test_bessel_at_origin():
    assert bessel_j(0.0, 0j).to_complex() == 1.0 + 0j
    assert bessel_j(3.0, 0j).is_zero()
    assert bessel_j_prime(1.0, 0j).to_complex() == 0.5 + 0j
    assert bessel_j_prime(0.0, 0j).is_zero()
    assert bessel_j_prime(4.0, 0j).is_zero()


def test_hankel_continuation_rejects_fractional_order():
    with pytest.raises(DomainError):
        continue_hankel1(2.5, 1, 1.0 + 0j, 0.5 + 0j)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# Airy
# ---------------------------------------------------------------------------


def test_airy_frozen_values():
    w = 1.2 + 0.8j
    assert airy_ai(w) == pytest.approx(
        0.06358216407186493 - 0.10081170134289169j, rel=1e-12)
    assert airy_ai_prime(w) == pytest.approx(
        -0.11027066400735883 + 0.11048943491047634j, rel=1e-12)
    assert airy_ai(0j) == pytest.approx(0.3550280538878172, rel=1e-13)
    assert airy_ai_prime(0j) == pytest.approx(-0.2588194037928068, rel=1e-13)


def test_airy_against_series_oracle(rng):
    for _ in range(12):
        w = complex(rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 1.5))
        want = oracles.to_complex(oracles.airy_ai_series(oracles.mp.mpc(w)))
        assert airy_ai(w) == pytest.approx(want, rel=1e-11, abs=1e-14)
        want_p = oracles.to_complex(oracles.airy_ai_prime_series(oracles.mp.mpc(w)))
        assert airy_ai_prime(w) == pytest.approx(want_p, rel=1e-10, abs=1e-13)


def test_airy_expansion_coefficients_exact():
    coeffs = AiryCoefficients.build(3)
    assert coeffs.c[0] == 1.0 and coeffs.d[0] == 1.0
    assert coeffs.c[1] == float(Fraction(-5, 72))
    assert coeffs.d[1] == float(Fraction(7, 72))
    # Next pair, for a second exactness point: c_2 = 385/10368.
    assert coeffs.c[2] == float(Fraction(385, 10368))
    assert coeffs.d[2] == float(Fraction(-455, 10368))


def test_airy_asymptotic_accuracy_at_ten():
    arg = AiryArgument.from_w(10.0 + 0j)
    ai, aip = airy_asymptotic(arg, terms=3)
    assert abs(ai / airy_ai(10.0 + 0j) - 1.0) < 1e-6
    assert abs(aip / airy_ai_prime(10.0 + 0j) - 1.0) < 1e-6


def test_airy_asymptotic_improves_with_terms():
    arg = AiryArgument.from_w(8.0 + 2.0j)
    exact = airy_ai(8.0 + 2.0j)
    errors = [abs(airy_asymptotic(arg, terms)[0] / exact - 1.0)
              for terms in (0, 1, 2, 3)]
    assert errors == sorted(errors, reverse=True)
    assert errors[-1] < 1e-6


def test_airy_asymptotic_domain_errors():
    with pytest.raises(DomainError):
        airy_asymptotic(AiryArgument.from_w(10.0 + 0j), terms=7)
    with pytest.raises(DomainError):
        # Close to the negative real axis, where Ai oscillates through zeros.
        airy_asymptotic(AiryArgument(-5.0 + 0.01j, 1.0 + 0j), terms=2)
    with pytest.raises(DomainError):
        AiryArgument.from_w(-3.0 + 0j)
    with pytest.raises(DomainError):
        airy_ai(2.0e4 + 0j)


def test_airy_argument_xi():
    arg = AiryArgument.from_w(4.0 + 0j)
    assert arg.xi == pytest.approx((2.0 / 3.0) * 8.0)
    arg_c = AiryArgument.from_w(1.0 + 1.0j)
    assert arg_c.xi == pytest.approx((2.0 / 3.0) * (1.0 + 1.0j) ** 1.5)


@pytest.mark.parametrize("family", [(bessel_j, bessel_j_prime),
                                    (hankel1, hankel1_prime)])
@pytest.mark.parametrize("nu, z", [(2.0, 1.3 + 0.4j),
                                   (7.0, 6.0 - 1.0j),
                                   (19.0, 15.0 + 2.0j)])
def test_second_derivative_satisfies_bessel_ode(family, nu, z):
    # Build f'' from values at orders nu-2, nu-1, nu through the downward
    # recurrence and check the cylinder equation
    #   f'' + f'/z + (1 - nu^2/z^2) f = 0.
    # Each order is evaluated independently, so this ties three separate
    # evaluations together.
    fn, fn_prime = family
    f = fn(nu, z).to_complex()
    fp = fn_prime(nu, z).to_complex()
    fm1 = fn(nu - 1.0, z).to_complex()
    fm2 = fn(nu - 2.0, z).to_complex()
    fp_m1 = fm2 - (nu - 1.0) / z * fm1
    fpp = fp_m1 + nu / (z * z) * f - nu / z * fp
    residual = fpp + fp / z + (1.0 - nu * nu / (z * z)) * f
    scale = max(abs(fpp), abs(fp / z), abs(f))
    assert abs(residual) < 1e-9 * scale


@given(nu=st.integers(min_value=0, max_value=40).map(lambda n: n / 2.0),
       re=st.floats(min_value=0.5, max_value=80.0),
       im=st.floats(min_value=0.05, max_value=5.0))
@settings(max_examples=40, deadline=None)
def test_bessel_conjugation_symmetry(nu, re, im):
    # J_nu has real Taylor coefficients for real order, so conjugating the
    # argument conjugates the value.
    z = complex(re, im)
    a = bessel_j(nu, z).to_complex()
    b = bessel_j(nu, z.conjugate()).to_complex()
    assert b == pytest.approx(a.conjugate(), rel=1e-12, abs=1e-300)


@pytest.mark.parametrize("w", [0.3 + 0j, 1.2 + 0.8j, 2.0 - 0.5j])
def test_airy_derivative_consistency(w):
    # Ai' must match a finite difference of Ai, and Ai'' (= w Ai by the
    # defining equation) a finite difference of Ai'.  Fourth-order stencils
    # leave ~1e-8 truncation noise, so the tolerance sits at 1e-6.
    h = 0.02

    def fd(fn, at):
        return (8.0 * (fn(at + h) - fn(at - h))
                - (fn(at + 2 * h) - fn(at - 2 * h))) / (12.0 * h)

    assert fd(airy_ai, w) == pytest.approx(airy_ai_prime(w), rel=1e-6)
    assert fd(airy_ai_prime, w) == pytest.approx(w * airy_ai(w), rel=1e-6)
