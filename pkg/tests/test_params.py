import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fsi_bench.params import (
    CASE_KEYS, PARAM_KEYS, CaseSpec, Dimension, ParameterError, ProblemParams, Regime,
    SingularParameterError, SolidLaw, angular_frequency, build_case_and_params,
    default_params, derive_constants, guard, parse_config_text, read_config, reynolds,
    womersley,
)
from fsi_bench.special import bessel_j, bessel_y

from conftest import ALL_CASES, CHANNEL_CASE, TUBE_CASE, aorta_params, channel_params, tube_params


def test_sixteen_distinct_cases():
    assert len(ALL_CASES) == 16
    assert len({c.label for c in ALL_CASES}) == 16
    assert ALL_CASES == CaseSpec.all()


def test_parse_aliases():
    c = CaseSpec.parse("channel", "nonlinear", "qs", "t")
    assert c == CaseSpec(Dimension.CHANNEL_2D, SolidLaw.NONLINEAR,
                         Regime.QUASI_STATIC, Regime.TRANSIENT)
    assert c.label == "2d-nonlinear-qf-ts"
    with pytest.raises(ParameterError):
        CaseSpec.parse("4d", "linear", "t", "t")


def test_omega():
    assert angular_frequency(1.024) == pytest.approx(2 * math.pi / 1.024, rel=1e-15)
    with pytest.raises(ParameterError):
        angular_frequency(0.0)


@pytest.mark.parametrize("bad", [
    dict(mu_f=0.0), dict(mu_s=-1.0), dict(H_i=1.3), dict(H_i=0.0), dict(L=0.0),
    dict(T=-1.0), dict(rho_f=-1.0), dict(P=float("nan")),
])
def test_invalid_params(bad):
    with pytest.raises(ParameterError):
        channel_params().with_values(**bad)


def test_density_regime_consistency():
    qs = CaseSpec.parse("2d", "linear", "qs", "t")
    with pytest.raises(ParameterError):
        derive_constants(qs, channel_params())
    with pytest.raises(ParameterError):
        derive_constants(CHANNEL_CASE, channel_params().with_values(rho_s=0.0))
    derive_constants(qs, default_params(qs))


def test_womersley_and_reynolds_values():
    assert womersley(channel_params()) == pytest.approx(24.77, rel=5e-3)
    assert womersley(tube_params()) == pytest.approx(14.51, rel=5e-3)
    assert womersley(aorta_params()) == pytest.approx(10.16, rel=5e-3)
    p = channel_params()
    assert reynolds(p, 1.0) == pytest.approx(2 * p.rho_f * p.H_i / p.mu_f)
    with pytest.raises(ParameterError):
        womersley(p.with_values(rho_f=0.0))


def test_transient_fluid_wavenumber_branch():
    d = derive_constants(CHANNEL_CASE, channel_params())
    p = channel_params()
    assert d.k_f**2 == pytest.approx(1j * p.rho_f * p.omega / p.mu_f, rel=1e-14)
    assert d.k_f.real > 0 and d.k_f.imag > 0
    assert d.k_s == pytest.approx(p.omega * math.sqrt(p.rho_s / p.mu_s), rel=1e-15)
    assert d.alpha == pytest.approx(2 * np.cosh(d.k_f * p.H_i), rel=1e-13)
    assert d.beta == pytest.approx(2 * p.mu_f * d.k_f * np.sinh(d.k_f * p.H_i), rel=1e-13)


def test_3d_constants_against_direct_bessel():
    p = tube_params()
    d = derive_constants(TUBE_CASE, p)
    ks = d.k_s
    gamma = bessel_j(0, -ks * p.H_o) / bessel_y(0, -ks * p.H_o)
    assert d.gamma == pytest.approx(complex(gamma), rel=1e-13)
    assert d.Delta0 == pytest.approx(
        complex(bessel_j(0, -ks * p.H_i) - gamma * bessel_y(0, -ks * p.H_i)), rel=1e-12)
    assert d.J0f_star == pytest.approx(complex(bessel_j(0, 1j * d.k_f * p.H_i)), rel=1e-14)


def test_unused_constants_stay_none():
    case = CaseSpec.parse("2d", "linear", "qs", "qs")
    d = derive_constants(case, default_params(case))
    assert set(d.populated()) == {"omega"}


def test_singular_guard_on_wall_zero():
    case = CaseSpec.parse("2d", "nonlinear", "t", "t")
    p = default_params(case)
    # k_s H_o = pi makes sin(k_s H_o) vanish
    T = 2 * math.pi * p.H_o / math.pi * math.sqrt(p.rho_s / p.mu_s)
    with pytest.raises(SingularParameterError) as info:
        derive_constants(case, p.with_values(T=T))
    assert "sin(k_s H_o)" in str(info.value)


def test_guard():
    guard("x", 1.0, 1.0)
    with pytest.raises(SingularParameterError):
        guard("x", 1e-13, 1.0)
    with pytest.raises(SingularParameterError):
        guard("x", float("inf"), 1.0)


def test_config_parsing(tmp_path):
    text = "dimension = 3d  # tube\nsolid_law=nonlinear\n\nrho_f = 2.5\nP_im = 0.5\n"
    values = parse_config_text(text)
    case, params = build_case_and_params(values)
    assert case == TUBE_CASE
    assert params.rho_f == 2.5 and params.P == complex(1.0, 0.5)
    path = tmp_path / "c.cfg"
    path.write_text(text)
    assert read_config(path) == values


@pytest.mark.parametrize("text, where", [("rho_f 1", ":1:"), ("a = 1\nfoo = 2", ":1:"),
                                         ("rho_f = 1\nbar = 2", ":2:")])
def test_config_errors_report_line(text, where):
    with pytest.raises(ParameterError, match=where):
        parse_config_text(text)


def test_config_explicit_density_is_checked():
    with pytest.raises(ParameterError):
        build_case_and_params({"fluid_regime": "qs", "rho_f": "1.0"})
    with pytest.raises(ParameterError):
        build_case_and_params({"rho_f": "abc"})


def test_keys_cover_parameters():
    assert set(PARAM_KEYS) - {"P_re", "P_im"} | {"P"} == {
        f for f in ProblemParams.__dataclass_fields__}
    assert len(CASE_KEYS) == 4


@settings(max_examples=50, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.001, 1), st.floats(0.1, 5))
def test_womersley_scaling(rho, mu, T):
    p = channel_params().with_values(rho_f=rho, mu_f=mu, T=T)
    w = womersley(p)
    assert w > 0
    assert womersley(p.with_values(rho_f=4 * rho)) == pytest.approx(2 * w, rel=1e-12)
