"""Case definitions with their parameters and derived constants."""

import enum
import itertools
import math
import cmath
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .special import bessel_j, bessel_y

# |denominator| below this fraction of its magnitude scale counts as singular
SINGULAR_RTOL = 1e-12


class ParameterError(ValueError):
    """Invalid or inconsistent problem parameters."""


class SingularParameterError(ParameterError):
    """A closed-form denominator vanishes (resonance or removable singularity)."""

    def __init__(self, name, value, scale):
        self.name = name
        self.value = value
        self.scale = scale
        super().__init__(
            f"singular parameter set: denominator {name} = {abs(value):.3e} "
            f"(scale {scale:.3e})"
        )


class Dimension(enum.Enum):
    CHANNEL_2D = "2d"
    TUBE_3D = "3d"


class SolidLaw(enum.Enum):
    LINEAR = "linear"
    NONLINEAR = "nonlinear"


class Regime(enum.Enum):
    QUASI_STATIC = "quasi-static"
    TRANSIENT = "transient"


@dataclass(frozen=True)
class CaseSpec:
    dimension: Dimension
    solid_law: SolidLaw
    fluid_regime: Regime
    solid_regime: Regime

    @classmethod
    def all(cls):
        """The 16 cases, in a fixed order."""
        return [cls(*combo) for combo in itertools.product(Dimension, SolidLaw, Regime, Regime)]

    @classmethod
    def parse(cls, dimension, solid_law, fluid_regime, solid_regime):
        try:
            return cls(
                Dimension(_norm(dimension)),
                SolidLaw(_norm(solid_law)),
                Regime(_norm(fluid_regime)),
                Regime(_norm(solid_regime)),
            )
        except ValueError as exc:
            raise ParameterError(str(exc)) from None

    @property
    def dim(self):
        return 2 if self.dimension is Dimension.CHANNEL_2D else 3

    @property
    def nonlinear(self):
        return self.solid_law is SolidLaw.NONLINEAR

    @property
    def fluid_transient(self):
        return self.fluid_regime is Regime.TRANSIENT

    @property
    def solid_transient(self):
        return self.solid_regime is Regime.TRANSIENT

    @property
    def label(self):
        f = "tf" if self.fluid_transient else "qf"
        s = "ts" if self.solid_transient else "qs"
        return f"{self.dimension.value}-{self.solid_law.value}-{f}-{s}"

    def __str__(self):
        return self.label


_ALIASES = {
    "2": "2d", "channel": "2d", "channel2d": "2d",
    "3": "3d", "tube": "3d", "tube3d": "3d",
    "qs": "quasi-static", "quasistatic": "quasi-static", "quasi_static": "quasi-static",
    "t": "transient",
}


def _norm(value):
    v = str(value).strip().lower()
    return _ALIASES.get(v, v)


@dataclass(frozen=True)
class ProblemParams:
    rho_f: float
    mu_f: float
    rho_s: float
    mu_s: float
    H_i: float
    H_o: float
    L: float
    T: float
    P: complex

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not cmath.isfinite(complex(value)):
                raise ParameterError(f"{f.name} must be finite")
        object.__setattr__(self, "P", complex(self.P))
        if self.rho_f < 0 or self.rho_s < 0:
            raise ParameterError("densities must be non-negative")
        if self.mu_f <= 0 or self.mu_s <= 0:
            raise ParameterError("mu_f and mu_s must be positive")
        if not 0 < self.H_i < self.H_o:
            raise ParameterError("require 0 < H_i < H_o")
        if self.L <= 0 or self.T <= 0:
            raise ParameterError("L and T must be positive")

    @property
    def omega(self):
        return angular_frequency(self.T)

    def with_values(self, **changes):
        return replace(self, **changes)

    def check_case(self, case):
        """Raise ParameterError unless densities match the case regimes."""
        if case.fluid_transient != (self.rho_f > 0):
            raise ParameterError(
                f"rho_f = {self.rho_f} is inconsistent with a "
                f"{case.fluid_regime.value} fluid"
            )
        if case.solid_transient != (self.rho_s > 0):
            raise ParameterError(
                f"rho_s = {self.rho_s} is inconsistent with a "
                f"{case.solid_regime.value} solid"
            )


# Parameter families used for the channel, tube and aorta-like benchmarks.
CHANNEL_FAMILY = dict(rho_f=1.0, mu_f=0.01, rho_s=1.0, mu_s=0.1,
                      H_i=1.0, H_o=1.2, L=1.0, T=1.024, P=1.0)
TUBE_FAMILY = dict(rho_f=2.1, mu_f=0.03, rho_s=1.0, mu_s=0.1,
                   H_i=0.7, H_o=1.0, L=1.0, T=1.024, P=1.0)
AORTA_FAMILY = dict(rho_f=1.03, mu_f=0.03, rho_s=1.03, mu_s=2e5,
                    H_i=0.7, H_o=0.923, L=5.53, T=1.024, P=583.0)


def default_params(case, family=None, **overrides):
    """Family parameters with densities zeroed for quasi-static regimes."""
    if family is None:
        family = CHANNEL_FAMILY if case.dim == 2 else TUBE_FAMILY
    values = dict(family)
    if not case.fluid_transient:
        values["rho_f"] = 0.0
    if not case.solid_transient:
        values["rho_s"] = 0.0
    values.update(overrides)
    return ProblemParams(**values)


def angular_frequency(T):
    if not T > 0:
        raise ParameterError("cycle length T must be positive")
    return 2.0 * math.pi / T


@dataclass(frozen=True)
class DerivedConstants:
    """Short-form constants; entries not used by a case stay ``None``."""

    omega: float
    k_f: Optional[complex] = None
    k_s: Optional[float] = None
    alpha: Optional[complex] = None
    beta: Optional[complex] = None
    gamma: Optional[complex] = None
    J0f_star: Optional[complex] = None
    J1f_star: Optional[complex] = None
    J0s_star: Optional[complex] = None
    J1s_star: Optional[complex] = None
    Y0s_star: Optional[complex] = None
    Y1s_star: Optional[complex] = None
    J0s_r: Optional[complex] = None
    Y0s_r: Optional[complex] = None
    Delta0: Optional[complex] = None
    Delta1: Optional[complex] = None
    nu0: Optional[complex] = None
    nu1: Optional[complex] = None
    xi1: Optional[float] = None
    xi2: Optional[float] = None
    zeta1: Optional[float] = None
    zeta2: Optional[float] = None

    def populated(self):
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}


def guard(name, value, scale):
    """Raise SingularParameterError if ``value`` is negligible against ``scale``."""
    if abs(value) < SINGULAR_RTOL * scale or not cmath.isfinite(complex(value)):
        raise SingularParameterError(name, value, scale)


def _j(order, z):
    return complex(bessel_j(order, z))


def _y(order, z):
    return complex(bessel_y(order, z))


def derive_constants(case, params):
    params.check_case(case)
    omega = params.omega
    H_i, H_o = params.H_i, params.H_o
    out = {"omega": omega}

    if case.fluid_transient:
        k_f = cmath.sqrt(1j * params.rho_f * omega / params.mu_f)
        out["k_f"] = k_f
        if case.dim == 2:
            ep, em = cmath.exp(k_f * H_i), cmath.exp(-k_f * H_i)
            out["alpha"] = ep + em
            out["beta"] = params.mu_f * k_f * (ep - em)
        else:
            out["J0f_star"] = _j(0, 1j * k_f * H_i)
            out["J1f_star"] = k_f * _j(1, 1j * k_f * H_i)

    if case.solid_transient:
        k_s = omega * math.sqrt(params.rho_s / params.mu_s)
        out["k_s"] = k_s
        if case.dim == 2 and case.nonlinear:
            s_o = math.sin(k_s * H_o)
            guard("sin(k_s H_o)", s_o, 1.0)
            cot, csc = math.cos(k_s * H_o) / s_o, 1.0 / s_o
            out["xi1"] = math.sin(k_s * H_i) + cot * math.cos(k_s * H_i)
            out["xi2"] = cot * math.sin(k_s * H_i) - math.cos(k_s * H_i)
            out["zeta1"] = csc * math.cos(k_s * H_i)
            out["zeta2"] = 1.0 - math.sin(k_s * H_i) * csc
        elif case.dim == 3:
            J0r = _j(0, -k_s * H_o)
            Y0r = _y(0, -k_s * H_o)
            guard("Y0(-k_s H_o)", Y0r, abs(J0r) + 1.0)
            gamma = J0r / Y0r
            J0s, Y0s = _j(0, -k_s * H_i), _y(0, -k_s * H_i)
            J1s = 1j * k_s * _j(1, -k_s * H_i)
            Y1s = 1j * k_s * _y(1, -k_s * H_i)
            out.update(
                J0s_r=J0r, Y0s_r=Y0r, gamma=gamma,
                J0s_star=J0s, J1s_star=J1s, Y0s_star=Y0s, Y1s_star=Y1s,
                Delta0=J0s - gamma * Y0s, Delta1=J1s - gamma * Y1s,
                nu0=Y0s / Y0r, nu1=Y1s / Y0r,
            )
    return DerivedConstants(**out)


def womersley(params):
    if params.rho_f <= 0:
        raise ParameterError("the Womersley number is undefined for a quasi-static fluid")
    return params.H_i * math.sqrt(params.omega * params.rho_f / params.mu_f)


def reynolds(params, V_f):
    if params.rho_f <= 0:
        raise ParameterError("the Reynolds number is undefined for a quasi-static fluid")
    if V_f < 0:
        raise ParameterError("peak speed must be non-negative")
    return 2.0 * params.rho_f * V_f * params.H_i / params.mu_f


CASE_KEYS = ("dimension", "solid_law", "fluid_regime", "solid_regime")
PARAM_KEYS = ("rho_f", "mu_f", "rho_s", "mu_s", "H_i", "H_o", "L", "T", "P_re", "P_im")


def parse_config_text(text, source="<config>"):
    """Parse ``key = value`` lines (``#`` comments) into a dict of strings."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParameterError(f"{source}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CASE_KEYS and key not in PARAM_KEYS:
            raise ParameterError(f"{source}:{lineno}: unknown key {key!r}")
        values[key] = value
    return values


def read_config(path):
    with open(path, encoding="utf-8") as fh:
        return parse_config_text(fh.read(), source=str(path))


def build_case_and_params(values=None):
    """CaseSpec and ProblemParams from string key-value pairs.

    Missing case keys default to a 2D linear transient/transient setup; missing
    parameters come from the channel (2D) or tube (3D) family with densities
    zeroed for quasi-static regimes.  Explicit densities are never adjusted.
    """
    values = dict(values or {})
    case = CaseSpec.parse(
        values.pop("dimension", "2d"),
        values.pop("solid_law", "linear"),
        values.pop("fluid_regime", "transient"),
        values.pop("solid_regime", "transient"),
    )
    base = default_params(case)
    numbers = {}
    for key, text in values.items():
        try:
            numbers[key] = float(text)
        except ValueError:
            raise ParameterError(f"{key} must be a number, got {text!r}") from None
    P = complex(numbers.pop("P_re", base.P.real), numbers.pop("P_im", base.P.imag))
    params = base.with_values(P=P, **numbers)
    params.check_case(case)
    return case, params


def format_complex(z):
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def constants_as_dict(constants):
    return {k: v for k, v in constants.populated().items()}


def is_close_to_zero(x, scale):
    return bool(np.abs(x) <= SINGULAR_RTOL * scale)
