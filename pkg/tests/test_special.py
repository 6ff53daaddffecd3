"""Special-function kit against independent series oracles."""

import math

import numpy as np
import pytest

from qbrownian.special import (BranchCutError, EvaluationOverflowError,
                               cosint, erf_complex, faddeeva, sinint,
                               _ci_si_q1, _chi_shi_series, _cin_series,
                               _e1_continued_fraction, _si_series,
                               EULER_GAMMA)

import oracles


def _rel(a, b, floor=1e-300):
    return abs(a - b) / max(abs(b), floor)


def _random_disk(rng, n, radius):
    z = rng.uniform(-radius, radius, size=(n, 2)).view(complex).ravel()
    return z[np.abs(z) <= radius]


# ---------------------------------------------------------------- erf

def test_erf_values():
    assert erf_complex(0.0) == 0.0
    assert _rel(erf_complex(1.0), 0.8427007929497149) < 1e-12
    # erf(i) = i erfi(1)
    val = erf_complex(1j)
    assert abs(val.real) < 1e-14
    assert _rel(val.imag, 1.6504257587975429) < 1e-12


def test_erf_against_series_oracle():
    rng = np.default_rng = np.random.default_rng(101)
    pts = _random_disk(rng, 300, 5.0)[:200]
    for z in pts:
        ref = oracles.erf_series(complex(z))
        assert _rel(erf_complex(complex(z)), ref, 1e-13) < 1e-11


def test_erf_symmetries_exact():
    rng = np.random.default_rng(7)
    for z in _random_disk(rng, 80, 8.0):
        z = complex(z)
        assert erf_complex(-z) == -erf_complex(z)
        assert erf_complex(z.conjugate()) == erf_complex(z).conjugate()


def test_erf_overflow_signal():
    with pytest.raises(EvaluationOverflowError):
        erf_complex(30j)


def test_erf_saturates_along_real_direction():
    assert erf_complex(2e6) == 1.0
    assert erf_complex(-2e6) == -1.0


def test_erf_rejects_nonfinite():
    with pytest.raises(ValueError):
        erf_complex(complex("nan"))


# ----------------------------------------------------------- faddeeva

def test_faddeeva_values():
    assert _rel(faddeeva(0.0), 1.0) < 1e-13
    # w(i) = e * erfc(1)
    assert _rel(faddeeva(1j), 0.42758357615580705) < 1e-12
    assert abs(faddeeva(1j).imag) < 1e-14


def test_faddeeva_reflection_exact():
    z = 1 + 2j
    assert faddeeva(-z.conjugate()) == faddeeva(z).conjugate()


def test_faddeeva_against_series_oracle():
    rng = np.random.default_rng(11)
    for z in _random_disk(rng, 120, 4.0):
        ref = oracles.faddeeva_series(complex(z))
        assert _rel(faddeeva(complex(z)), ref, 1e-13) < 1e-11


def test_faddeeva_grid_accuracy():
    # contract grid |Re z|, |Im z| <= 10, away from the lower-half zeros
    import mpmath as mp
    for x in np.linspace(-10, 10, 9):
        for y in np.linspace(-10, 10, 9):
            z = complex(x, y)
            with mp.workdps(40):
                ref = complex(mp.e**(-mp.mpc(z)**2) * mp.erfc(-1j * mp.mpc(z)))
            assert abs(faddeeva(z) - ref) <= 1e-12 * abs(ref) + 1e-14


# ------------------------------------------------------ cosint/sinint

def test_trig_integral_values():
    assert _rel(cosint(1.0), 0.3374039229009681) < 1e-11
    assert abs(cosint(1000.0)) < 1e-3
    assert sinint(0.0) == -math.pi / 2
    assert _rel(sinint(1.0), 0.9460830703671830 - math.pi / 2) < 1e-11
    assert abs(sinint(1000.0)) < 1e-3


def test_trig_integral_symmetries():
    z = 2 + 1j
    assert cosint(z.conjugate()) == cosint(z).conjugate()
    assert sinint(z.conjugate()) == sinint(z).conjugate()
    # si(-z) = -si(z) - pi through a different code path
    for z in (2 + 1j, 0.3 - 2j, 7 + 0.1j):
        lhs = sinint(-z)
        rhs = -sinint(z) - math.pi
        assert abs(lhs - rhs) <= 1e-12 * (1 + abs(rhs))


def test_trig_integral_against_series_oracle():
    rng = np.random.default_rng(23)
    pts = list(_random_disk(rng, 320, 5.0)[:200])
    for z in pts:
        z = complex(z)
        if abs(z) < 1e-3:
            continue
        if z.real < 0 and abs(z.imag) < 1e-6:
            z = complex(z.real, z.imag + 0.1)  # step off the cut
        ci_ref = oracles.ci_series(z)
        si_ref = oracles.si_series(z)
        assert _rel(cosint(z), ci_ref, 1e-13) < 1e-11
        assert _rel(sinint(z), si_ref, 1e-13) < 1e-11


def test_trig_integral_branch_errors():
    with pytest.raises(BranchCutError):
        cosint(0.0)
    with pytest.raises(BranchCutError):
        cosint(-2.0)
    # sinint has no cut
    assert abs(sinint(-2.0) - (-sinint(2.0) - math.pi)) < 1e-14


def test_large_argument_annulus():
    """Accuracy 1e-3 <= |z| <= 1e3 sampled off the overflow wedge."""
    import mpmath as mp
    rng = np.random.default_rng(31)
    radii = 10.0**rng.uniform(-3, 3, size=60)
    angles = rng.uniform(-math.pi + 0.05, math.pi - 0.05, size=60)
    for rad, ang in zip(radii, angles):
        z = complex(rad * math.cos(ang), rad * math.sin(ang))
        if abs(z.imag) > 200.0:
            continue  # value magnitude ~ exp(|Im z|): outside double comfort
        with mp.workdps(40):
            ci_ref = complex(mp.ci(mp.mpc(z)))
            si_ref = complex(mp.si(mp.mpc(z)) - mp.pi / 2)
        assert _rel(cosint(z), ci_ref, 1e-300) < 1e-11
        assert _rel(sinint(z), si_ref, 1e-300) < 1e-11


def test_series_cf_switchover_consistency():
    """Both regimes agree to 1e-11 in the overlap annulus 3 <= |z| <= 5."""
    rng = np.random.default_rng(43)
    for _ in range(40):
        rad = rng.uniform(3.0, 5.0)
        ang = rng.uniform(0.01, math.pi / 2 - 0.01)  # first quadrant
        z = complex(rad * math.cos(ang), rad * math.sin(ang))
        ci_series = EULER_GAMMA + np.log(complex(z)) + _cin_series(z)
        si_series = _si_series(z)
        if z.imag > z.real:
            chi, shi = _chi_shi_series(-1j * z)
            ci_other, big_si_other = chi + 1j * math.pi / 2, 1j * shi
        else:
            e1p = _e1_continued_fraction(1j * z)
            e1m = _e1_continued_fraction(-1j * z)
            ci_other = -0.5 * (e1p + e1m)
            big_si_other = (e1p - e1m) / 2j + math.pi / 2
        assert abs(ci_series - ci_other) <= 1e-11 * max(abs(ci_other), 1.0)
        assert abs(si_series - big_si_other) <= 1e-11 * max(abs(big_si_other), 1.0)


def test_si_derivative_matches_sinc():
    """d/dz Si(z) = sin(z)/z by central differences."""
    rng = np.random.default_rng(5)
    h = 1e-5
    for _ in range(20):
        z = complex(rng.uniform(-6, 6), rng.uniform(-6, 6))
        if abs(z) < 0.2:
            z += 0.5
        deriv = (sinint(z + h) - sinint(z - h)) / (2 * h)
        assert abs(deriv - np.sin(z) / z) < 1e-7


def test_q1_dispatcher_agrees_with_public():
    # internal consistency of the quadrant folding
    for z in (0.5 + 0.2j, 3 + 4j, 9 + 1j, 2j + 8):
        ci, big_si = _ci_si_q1(complex(z))
        assert ci == cosint(complex(z))
        assert abs(big_si - (sinint(complex(z)) + math.pi / 2)) < 1e-15 * max(1.0, abs(big_si))
