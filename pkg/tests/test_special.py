import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsi_bench.special import HANKEL_RADIUS, SERIES_RADIUS, BesselError, bessel_j, bessel_y

mp.mp.dps = 40


def _oracle(kind, order, z):
    fn = mp.besselj if kind == "j" else mp.bessely
    return np.array([complex(fn(order, mp.mpc(complex(x)))) for x in np.ravel(z)])


def _disc_samples(n, radius, seed):
    rng = np.random.default_rng(seed)
    z = radius * np.sqrt(rng.uniform(0, 1, n)) * np.exp(1j * rng.uniform(-np.pi, np.pi, n))
    return z[np.abs(z) > 1e-3]


@pytest.mark.parametrize("order", [0, 1])
@pytest.mark.parametrize("kind", ["j", "y"])
def test_matches_extended_precision(kind, order):
    z = _disc_samples(1000, 50.0, seed=order + (2 if kind == "y" else 0))
    f = bessel_j if kind == "j" else bessel_y
    ref = _oracle(kind, order, z)
    rel = np.abs(f(order, z) - ref) / np.abs(ref)
    assert rel.max() < 1e-10


@pytest.mark.parametrize("radius", [SERIES_RADIUS, HANKEL_RADIUS])
@pytest.mark.parametrize("order", [0, 1])
def test_regime_boundaries_agree_with_oracle(radius, order):
    theta = np.linspace(-np.pi + 0.01, np.pi - 0.01, 64)
    for r in (radius * (1 - 1e-12), radius * (1 + 1e-12)):
        z = r * np.exp(1j * theta)
        for kind, f in (("j", bessel_j), ("y", bessel_y)):
            ref = _oracle(kind, order, z)
            assert np.max(np.abs(f(order, z) - ref) / np.abs(ref)) < 1e-12


def test_real_values():
    # J0(1), J1(1), Y0(1), Y1(1) from standard tables
    assert bessel_j(0, 1.0) == pytest.approx(0.7651976865579666, rel=1e-15)
    assert bessel_j(1, 1.0) == pytest.approx(0.44005058574493355, rel=1e-15)
    assert bessel_y(0, 1.0).real == pytest.approx(0.08825696421567697, rel=1e-14)
    assert bessel_y(1, 1.0).real == pytest.approx(-0.7812128213002887, rel=1e-14)


def test_branch_cut_takes_upper_side():
    x = np.array([0.5, 3.0, 10.0, 30.0])
    on_cut = bessel_y(0, -x + 0j)
    above = _oracle("y", 0, -x + 1e-30j)
    assert np.allclose(on_cut, above, rtol=1e-12)
    below = bessel_y(0, complex(-3.0, -0.0))
    assert below == pytest.approx(on_cut[1], rel=1e-14)


def test_parity():
    z = _disc_samples(200, 40.0, seed=9)
    assert np.allclose(bessel_j(0, -z), bessel_j(0, z), rtol=1e-13, atol=0)
    assert np.allclose(bessel_j(1, -z), -bessel_j(1, z), rtol=1e-13, atol=0)


def test_conjugate_symmetry():
    z = _disc_samples(200, 40.0, seed=10)
    z = z[np.abs(z.imag) > 1e-6]
    for f in (bessel_j, bessel_y):
        for n in (0, 1):
            assert np.allclose(f(n, np.conj(z)), np.conj(f(n, z)), rtol=1e-13, atol=0)


def test_wronskian():
    z = _disc_samples(1000, 50.0, seed=11)
    w = bessel_j(1, z) * bessel_y(0, z) - bessel_j(0, z) * bessel_y(1, z)
    expected = 2 / (np.pi * z)
    scale = np.abs(bessel_j(1, z) * bessel_y(0, z)) + np.abs(bessel_j(0, z) * bessel_y(1, z))
    assert np.max(np.abs(w - expected) / np.maximum(np.abs(expected), scale)) < 1e-10


@pytest.mark.parametrize("f", [bessel_j, bessel_y])
def test_derivative_identities(f):
    z = _disc_samples(400, 30.0, seed=12)
    z = z[np.abs(z) > 0.5]
    h = 1e-5
    d0 = (f(0, z + h) - f(0, z - h)) / (2 * h)
    assert np.max(np.abs(d0 + f(1, z)) / np.maximum(np.abs(f(1, z)), 1)) < 1e-6
    d1 = (f(1, z + h) - f(1, z - h)) / (2 * h)
    ref = f(0, z) - f(1, z) / z
    assert np.max(np.abs(d1 - ref) / np.maximum(np.abs(ref), 1)) < 1e-6


@pytest.mark.parametrize("f", [bessel_j, bessel_y])
def test_bessel_ode_residual_is_smooth(f):
    x = np.linspace(1.0, 25.0, 2000) * np.exp(0.3j)
    h = 1e-4
    for n in (0, 1):
        d2 = (f(n, x + h) - 2 * f(n, x) + f(n, x - h)) / h**2
        d1 = (f(n, x + h) - f(n, x - h)) / (2 * h)
        res = d2 + d1 / x + (1 - n * n / x**2) * f(n, x)
        assert np.max(np.abs(res) / np.maximum(np.abs(f(n, x)), 1)) < 1e-6


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 45.0), st.floats(-np.pi, np.pi))
def test_recurrence_property(r, theta):
    z = r * np.exp(1j * theta)
    if abs(z.real) < 1e-12 and z.imag < 0:
        return
    # J0 + J2 = (2/z) J1 with J2 from the oracle-free recurrence identity
    j0, j1 = bessel_j(0, z), bessel_j(1, z)
    j2_ref = complex(mp.besselj(2, mp.mpc(z)))
    scale = abs(j0) + abs(2 / z * j1) + 1e-300
    assert abs(2 / z * j1 - j0 - j2_ref) / scale < 1e-12


def test_array_shape_preserved():
    z = np.full((3, 4), 2.5 + 0.5j)
    assert bessel_j(0, z).shape == (3, 4)
    assert bessel_y(1, z).shape == (3, 4)
    assert np.ndim(bessel_j(0, 1.5)) == 0


def test_errors():
    with pytest.raises(BesselError):
        bessel_y(0, 0.0)
    with pytest.raises(BesselError):
        bessel_j(2, 1.0)
    with pytest.raises(BesselError):
        bessel_j(0, np.nan)
    assert bessel_j(0, 0.0) == 1.0
    assert bessel_j(1, 0.0) == 0.0
