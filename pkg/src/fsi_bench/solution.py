"""Coupling constants and field evaluation for the 16 analytic FSI cases.

Geometry conventions
--------------------
2D channel: points are ``(x, y)``; ``x`` is axial, the fluid occupies
``|y| <= H_i`` and the two solid layers ``H_i <= |y| <= H_o``.
3D tube: points are ``(x, y, z)``; ``z`` is axial and ``r = hypot(x, y)``.

Every field is axial and has the form ``Re{amp(s) e^{i w t}}`` where ``s`` is
the transverse profile coordinate (signed ``y`` for the 2D fluid, ``|y|`` for
the 2D solid, ``r`` in 3D).  Nonlinear solid fields are functions of the
reference coordinates; since the motion is purely axial, the transverse
coordinate is the same in both frames.
"""

import cmath
import math
import warnings
from dataclasses import dataclass, fields, replace
from typing import Optional

import numpy as np

from .params import (
    ParameterError,
    SingularParameterError,
    derive_constants,
    guard,
)
from .special import bessel_j, bessel_y

# condition number above which the numeric oracle flags near-resonance
COND_WARN = 1e12
# relative tolerance for "point lies on this surface / inside this domain"
GEOM_RTOL = 1e-9

COEFF_NAMES = ("c1", "c2", "c3", "c4", "c5", "P_f", "P_s", "cI_coeff")


class DomainError(ValueError):
    """A point lies outside the subdomain or boundary it was evaluated on."""


class NearResonanceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class CoefficientSet:
    """Integration constants; entries a case does not use stay ``None``."""

    c1: Optional[complex] = None
    c2: Optional[complex] = None
    c3: Optional[complex] = None
    c4: Optional[complex] = None
    c5: Optional[complex] = None
    P_f: Optional[complex] = None
    P_s: Optional[complex] = None
    cI_coeff: Optional[complex] = None
    warning: Optional[str] = None

    def populated(self):
        return {name: getattr(self, name) for name in COEFF_NAMES
                if getattr(self, name) is not None}

    def perturbed(self, name, rel=1e-3):
        """Copy with one constant scaled by ``1 + rel``.

        A zero constant gets an absolute shift of ``rel`` times the largest
        constant magnitude (or ``rel`` if all are zero) instead.
        """
        value = getattr(self, name)
        if value is None:
            raise KeyError(f"{name} is not populated")
        if value != 0:
            new = value * (1 + rel)
        else:
            scale = max((abs(v) for v in self.populated().values()), default=0.0)
            new = rel * (scale if scale > 0 else 1.0)
        return replace(self, **{name: complex(new)})


# ---------------------------------------------------------------------------
# profile bases: each returns a list of (coefficient name, value, derivative)


def _fluid_terms(case, params, consts, s):
    s = np.asarray(s, dtype=float)
    mu = params.mu_f
    one, zero = np.ones_like(s), np.zeros_like(s)
    if case.dim == 2:
        if not case.fluid_transient:
            return [("P_f", -s**2 / (2 * mu), -s / mu),
                    ("c1", one, zero),
                    ("c2", s, one)]
        k = consts.k_f
        ep, em = np.exp(k * s), np.exp(-k * s)
        return [("P_f", -1j / (params.rho_f * consts.omega) * one, zero),
                ("c1", ep, k * ep),
                ("c2", em, -k * em)]
    if not case.fluid_transient:
        return [("P_f", -s**2 / (4 * mu), -s / (2 * mu)), ("c1", one, zero)]
    k = consts.k_f
    z = 1j * k * s
    return [("P_f", one / (mu * k * k), zero),
            ("c1", bessel_j(0, z), -1j * k * bessel_j(1, z))]


def _solid_bessel(k, s, H_o):
    # the wall value is computed in the same call so that u(H_o) is exactly 0
    z = np.append(-k * np.ravel(s), -k * H_o)
    j0, j1 = bessel_j(0, z), bessel_j(1, z)
    y0, y1 = bessel_y(0, z), bessel_y(1, z)
    shape = np.shape(s)
    return (j0[:-1].reshape(shape), j1[:-1].reshape(shape),
            y0[:-1].reshape(shape), y1[:-1].reshape(shape), j0[-1], y0[-1])


def _solid_terms(case, params, consts, s):
    s = np.asarray(s, dtype=float)
    mu, H_o = params.mu_s, params.H_o
    one, zero = np.ones_like(s), np.zeros_like(s)
    if case.dim == 2 and not case.nonlinear:
        if not case.solid_transient:
            return [("P_s", -s**2 / (2 * mu), -s / mu),
                    ("c3", s, one),
                    ("c4", one, zero)]
        k = consts.k_s
        a = params.rho_s * consts.omega**2
        return [("P_s", -one / a, zero),
                ("c3", np.sin(k * s), k * np.cos(k * s)),
                ("c4", np.cos(k * s), -k * np.sin(k * s))]
    if case.dim == 2:
        if not case.solid_transient:
            return [("c3", (s**2 - H_o**2) / (2 * mu), s / mu),
                    ("c4", s - H_o, one)]
        k = consts.k_s
        a = params.rho_s * consts.omega**2
        so = math.sin(k * H_o)
        return [("c3", (so - np.sin(k * s)) / (a * so), -k * np.cos(k * s) / (a * so)),
                ("c4", np.sin(k * (H_o - s)) / so, -k * np.cos(k * (H_o - s)) / so)]
    # 3D: linear carries P_s and c3, nonlinear carries c3 (= -P) and c4
    lead, unknown = ("c3", "c4") if case.nonlinear else ("P_s", "c3")
    sign = 1.0 if case.nonlinear else -1.0
    if not case.solid_transient:
        return [(lead, sign * (s**2 - H_o**2) / (4 * mu), sign * s / (2 * mu)),
                (unknown, np.log(s / H_o), 1.0 / s)]
    k = consts.k_s
    a = params.rho_s * consts.omega**2
    j0, j1, y0, y1, j0r, y0r = _solid_bessel(k, s, H_o)
    return [(lead, sign * (y0r - y0) / (a * y0r), -sign * k * y1 / (a * y0r)),
            (unknown, (j0 * y0r - j0r * y0) / y0r, k * (j1 * y0r - j0r * y1) / y0r)]


def _combine(terms, coeffs):
    value = 0j
    deriv = 0j
    for name, v, d in terms:
        c = getattr(coeffs, name)
        if c is None:
            raise ParameterError(f"coefficient {name} is required but unset")
        value = value + c * v
        deriv = deriv + c * d
    return value, deriv


# ---------------------------------------------------------------------------
# closed forms


def _den(name, terms, scale=None):
    """Sum ``terms`` and guard the result against cancellation to ~0.

    ``scale`` defaults to the sum of term magnitudes; bounded factors such as
    a lone cosine pass their natural scale instead.
    """
    value = sum(terms)
    guard(name, value, sum(abs(t) for t in terms) if scale is None else scale)
    return value


def _closed_2d_linear(case, p, d):
    P, Hi, Ho, w = p.P, p.H_i, p.H_o, d.omega
    mf, ms, rf, rs = p.mu_f, p.mu_s, p.rho_f, p.rho_s
    if not case.fluid_transient and not case.solid_transient:
        c1 = P * Hi**2 / (2 * mf) + 1j * w * P / (2 * ms) * (Ho**2 - Hi**2)
        return dict(c1=c1, c2=0j, c3=0j, c4=P * Ho**2 / (2 * ms))
    if not case.fluid_transient:
        ks = d.k_s
        cosd = _den("cos(k_s (H_o - H_i))", [math.cos(ks * (Ho - Hi))], 1.0)
        sec, tan = 1.0 / cosd, math.tan(ks * (Ho - Hi))
        c1 = (P * Hi**2 / (2 * mf) - 1j * P / (rs * w)
              + P * Hi * 1j * w / (ms * ks) * tan + 1j * P / (rs * w) * sec)
        c3 = (math.sin(ks * Hi) / (rs * w**2) - Hi / (ms * ks) * math.cos(ks * Ho)) * P * sec
        c4 = (Hi / (ms * ks) * math.sin(ks * Ho) + math.cos(ks * Hi) / (rs * w**2)) * P * sec
        return dict(c1=c1, c2=0j, c3=c3, c4=c4)
    a, b = d.alpha, d.beta
    if not case.solid_transient:
        den = _den("alpha mu_s + i w (H_o - H_i) beta", [a * ms, 1j * w * (Ho - Hi) * b])
        c1 = (1j * ms * P / (rf * w) + 1j * w * P / 2 * (Ho**2 - Hi**2)
              - 1j * w * P * (Ho - Hi) * Hi) / den
        c3 = ((1j * P / (rf * w) + 1j * w * P / (2 * ms) * (Ho**2 - Hi**2)) * b + P * Hi * a) / den
        c4 = P * Ho**2 / (2 * ms) - Ho * c3
        return dict(c1=c1, c2=c1, c3=c3, c4=c4)
    ks = d.k_s
    cd, sd = math.cos(ks * (Hi - Ho)), math.sin(ks * (Hi - Ho))
    den = _den("-mu_s k_s alpha cos(k_s (H_i - H_o)) + i w beta sin(k_s (H_i - H_o))",
               [-ms * ks * a * cd, 1j * w * b * sd])
    cos_o = _den("cos(k_s H_o)", [math.cos(ks * Ho)], 1.0)
    q = P / (1j * rf * w) + 1j * P / (rs * w)
    c1 = (ms * ks * cd * q - 1j * w * ms * ks * P / (rs * w**2)) / den
    c3 = (b * cos_o * q
          - (1j * w * b * math.cos(ks * Hi) + a * ms * ks * math.sin(ks * Hi)) * P / (rs * w**2)) / den
    c4 = P / (rs * w**2) / cos_o - math.tan(ks * Ho) * c3
    return dict(c1=c1, c2=c1, c3=c3, c4=c4)


def _closed_2d_nonlinear(case, p, d):
    P, Hi, Ho, w = p.P, p.H_i, p.H_o, d.omega
    mf, ms, rf, rs = p.mu_f, p.mu_s, p.rho_f, p.rho_s
    out = dict(c3=-P)
    if not case.fluid_transient and not case.solid_transient:
        c1 = P * Hi**2 / (2 * mf) + 1j * w * P / (2 * ms) * (Ho**2 - Hi**2)
        out.update(c1=c1, c2=0j, c4=0j)
        return out
    if not case.solid_transient:
        a, b = d.alpha, d.beta
        den = _den("i w beta (H_o - H_i) + mu_s alpha", [1j * w * b * (Ho - Hi), ms * a])
        br = 1j * P / (rf * w) + 1j * w * P / (2 * ms) * (Ho**2 - Hi**2)
        c1 = (-1j * w * (Ho - Hi) * Hi * P + ms * br) / den
        out.update(c1=c1, c2=c1, c4=(a * Hi * P + b * br) / den)
        return out
    ks = d.k_s
    x1, x2, z1, z2 = d.xi1, d.xi2, d.zeta1, d.zeta2
    if not case.fluid_transient:
        cot_o = math.cos(ks * Ho) / math.sin(ks * Ho)
        x1 = _den("xi1", [math.sin(ks * Hi), cot_o * math.cos(ks * Hi)])
        c1 = (P * Hi**2 / (2 * mf) - 1j * z2 * P / (rs * w)
              - 1j * x2 * (ms * ks * z1 * P + rs * w**2 * P * Hi) / (ms * ks * rs * w * x1))
        c4 = (ms * ks * z1 * P + rs * w**2 * P * Hi) / (ms * ks * rs * w**2 * x1)
        out.update(c1=c1, c2=0j, c4=c4)
        return out
    a, b = d.alpha, d.beta
    den = _den("i w xi2 beta - alpha mu_s k_s xi1", [1j * w * x2 * b, -a * ms * ks * x1])
    c1 = 1j * P / (rs * rf * w * ks) * (w**2 * x2 * z1 * rs * rf - ms * ks**2 * x1 * (rs - z2 * rf)) / den
    c4 = P / (rs * rf * w * ks) * (-w * a * z1 * rs * rf + 1j * b * ks * (rs - z2 * rf)) / den
    out.update(c1=c1, c2=c1, c4=c4)
    return out


def _closed_3d_nonlinear(case, p, d):
    P, Hi, Ho, w = p.P, p.H_i, p.H_o, d.omega
    mf, ms = p.mu_f, p.mu_s
    out = dict(c2=0j, c3=-P)
    if not case.fluid_transient and not case.solid_transient:
        out.update(c1=P * Hi**2 / (4 * mf) + 1j * w * P * (Ho**2 - Hi**2) / (4 * ms), c4=0j)
        return out
    if not case.solid_transient:
        kf, J0f, J1f = d.k_f, d.J0f_star, d.J1f_star
        lg = math.log(Hi / Ho)
        den = _den("mu_f w H_i ln(H_i/H_o) J1f* - mu_s J0f*",
                   [mf * w * Hi * lg * J1f, -ms * J0f])
        c1 = -1j * P * (w * Hi**2 * lg / 2 + w * (Ho**2 - Hi**2) / 4 + 1j * ms / (mf * kf**2)) / den
        c4 = -P * (ms * J0f * Hi / 2 + mf * w * J1f * (Ho**2 - Hi**2) / 4
                   + 1j * ms * J1f / kf**2) / (den * ms / Hi)
        out.update(c1=c1, c4=c4)
        return out
    ks, Y0r, Y1s = d.k_s, d.Y0s_r, d.Y1s_star
    D0, n0, n1 = d.Delta0, d.nu0, d.nu1
    if not case.fluid_transient:
        D1 = _den("Delta1", [d.J1s_star, -d.gamma * Y1s])
        c4 = -P * (2 * Y1s + 1j * Hi * ks**2 * Y0r) / (2 * ms * ks**2 * Y0r * D1)
        c1 = (P * Hi**2 / (4 * mf) - 1j * w * P / (ms * ks**2) * (1 - n0)
              - P * w * (2j * Y1s - Hi * ks**2 * Y0r) / (2 * ms * ks**2 * Y0r) * D0 / D1)
        out.update(c1=c1, c4=c4)
        return out
    kf, J0f, J1f, D1 = d.k_f, d.J0f_star, d.J1f_star, d.Delta1
    den = _den("mu_s J0f* Delta1 - i w mu_f J1f* Delta0", [ms * J0f * D1, -1j * w * mf * J1f * D0])
    br = (1 - n0) * 1j * w * P / (ms * ks**2) + P / (mf * kf**2)
    c1 = -(1j * w * D0 * n1 * P / ks**2 + ms * D1 * br) / den
    c4 = -(J0f * n1 * P / ks**2 + mf * J1f * br) / den
    out.update(c1=c1, c4=c4)
    return out


def _closed_3d_linear(case, p, d):
    P, Hi, Ho, w = p.P, p.H_i, p.H_o, d.omega
    mf, ms, rs = p.mu_f, p.mu_s, p.rho_s
    out = dict(c2=0j)
    if not case.fluid_transient and not case.solid_transient:
        out.update(c1=P * Hi**2 / (4 * mf) + 1j * w * P * (Ho**2 - Hi**2) / (4 * ms), c3=0j)
        return out
    if not case.solid_transient:
        kf, J0f, J1f = d.k_f, d.J0f_star, d.J1f_star
        lg = math.log(Hi / Ho)
        den = _den("-w mu_f J1f* ln(H_i/H_o) + J0f* mu_s / H_i",
                   [-w * mf * J1f * lg, J0f * ms / Hi])
        c1 = (1j * w * lg * P * Hi / 2 + 1j * w * P / (4 * Hi) * (Ho**2 - Hi**2)
              - ms * P / (mf * kf**2 * Hi)) / den
        c3 = (J0f * P * Hi / 2 + J1f * mf * w * P / (4 * ms) * (Ho**2 - Hi**2)
              + J1f * 1j * P / kf**2) / den
        out.update(c1=c1, c3=c3)
        return out
    D0, n0, n1 = d.Delta0, d.nu0, d.nu1
    if not case.fluid_transient:
        D1 = _den("Delta1", [d.J1s_star, -d.gamma * d.Y1s_star])
        bracket = Hi / (2 * ms) - 1j * n1 / (rs * w**2)
        c3 = P / (1j * D1) * bracket
        c1 = P * Hi**2 / (4 * mf) - 1j * w * P * ((1 - n0) / (rs * w**2) + 1j * D0 / D1 * bracket)
        out.update(c1=c1, c3=c3)
        return out
    kf, J0f, J1f, D1 = d.k_f, d.J0f_star, d.J1f_star, d.Delta1
    den = _den("-mu_f J1f* w Delta0 - i mu_s J0f* Delta1", [-mf * J1f * w * D0, -1j * ms * J0f * D1])
    c1 = (-n1 * D0 * ms * P / (rs * w) - ms * (1 - n0) * D1 * P / (rs * w)
          + 1j * ms * D1 * P / (mf * kf**2)) / den
    c3 = (1j * n1 * J0f * ms * P / (rs * w**2) - mf * (1 - n0) * J1f * P / (rs * w)
          + 1j * J1f * P / kf**2) / den
    out.update(c1=c1, c3=c3)
    return out


def _finish(case, params, values, warning=None):
    P = params.P
    values = {k: complex(v) for k, v in values.items()}
    values.update(P_f=P, P_s=P)
    if case.nonlinear:
        values["cI_coeff"] = params.L * P
    return CoefficientSet(warning=warning, **values)


def solve_coefficients(case, params, constants=None):
    """Integration constants from the closed-form expressions.

    Raises SingularParameterError when a denominator vanishes.
    """
    d = constants if constants is not None else derive_constants(case, params)
    if case.dim == 2:
        fn = _closed_2d_nonlinear if case.nonlinear else _closed_2d_linear
    else:
        fn = _closed_3d_nonlinear if case.nonlinear else _closed_3d_linear
    return _finish(case, params, fn(case, params, d))


# ---------------------------------------------------------------------------
# numeric oracle


def _unknowns(case):
    if case.dim == 2 and not case.nonlinear:
        return ["c1", "c3", "c4"]
    return ["c1", "c4" if case.nonlinear else "c3"]


def coupling_system(case, params, constants=None):
    """Complex linear system for the unknown constants.

    Rows are the kinematic condition ``v_f = i w u_s`` and the axial traction
    balance ``mu_f v_f' = mu_s u_s'`` at the interface, plus the wall
    condition ``u_s(H_o) = 0`` for the 2D linear solid (the other solid bases
    satisfy it identically).  Returns ``(A, b, names)``.
    """
    d = constants if constants is not None else derive_constants(case, params)
    names = _unknowns(case)
    P = params.P
    # fixed values: smoothness ties c2 to c1 in 2D; nonlinear c3 = -P
    known = {"P_f": P, "P_s": P, "c3": -P}
    tie_c2 = 1.0 if case.fluid_transient else 0.0

    def split(terms, s_index=0):
        col = {n: 0j for n in names}
        rhs_v = 0j
        rhs_d = 0j
        colv = {n: 0j for n in names}
        for name, v, dv in terms:
            v, dv = complex(np.ravel(v)[s_index]), complex(np.ravel(dv)[s_index])
            if name == "c2":
                colv["c1"] += tie_c2 * v
                col["c1"] += tie_c2 * dv
            elif name in names:
                colv[name] += v
                col[name] += dv
            else:
                rhs_v -= known[name] * v
                rhs_d -= known[name] * dv
        return colv, col, rhs_v, rhs_d

    w = d.omega
    fv, fd, fbv, fbd = split(_fluid_terms(case, params, d, np.array([params.H_i])))
    sv, sd, sbv, sbd = split(_solid_terms(case, params, d, np.array([params.H_i])))
    n = len(names)
    A = np.zeros((n, n), dtype=complex)
    b = np.zeros(n, dtype=complex)
    for j, name in enumerate(names):
        A[0, j] = fv[name] - 1j * w * sv[name]
        A[1, j] = params.mu_f * fd[name] - params.mu_s * sd[name]
    b[0] = fbv - 1j * w * sbv
    b[1] = params.mu_f * fbd - params.mu_s * sbd
    if n == 3:
        wv, _, wbv, _ = split(_solid_terms(case, params, d, np.array([params.H_o])))
        for j, name in enumerate(names):
            A[2, j] = wv[name]
        b[2] = wbv
    return A, b, names


def scaled_determinant(A):
    """``|det A|`` divided by the product of the row 2-norms (Hadamard bound)."""
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms == 0):
        return 0.0
    return float(abs(np.linalg.det(A)) / np.prod(norms))


def equilibrated_condition(A):
    """2-norm condition number after scaling columns, then rows, to unit 2-norm.

    Columns first: a constant multiplying an exponentially large basis must
    not make the rows it appears in look parallel.
    """
    B = np.array(A, dtype=complex)
    for axis in (0, 1):
        n = np.linalg.norm(B, axis=axis, keepdims=True)
        n[n == 0] = 1.0
        B = B / n
    return float(np.linalg.cond(B))


def solve_coefficients_numeric(case, params, constants=None):
    """Integration constants by solving the coupling system with LU (partial pivoting).

    Independent of the closed forms; a near-resonance warning is attached
    (and emitted) when the equilibrated condition number exceeds 1e12.
    """
    d = constants if constants is not None else derive_constants(case, params)
    A, b, names = coupling_system(case, params, d)
    cond = equilibrated_condition(A)
    warning = None
    if not np.isfinite(cond) or cond > COND_WARN:
        warning = f"near-resonant coupling system: condition number {cond:.3e}"
        warnings.warn(warning, NearResonanceWarning, stacklevel=2)
    try:
        x = np.linalg.solve(A, b)
    except np.linalg.LinAlgError:
        raise SingularParameterError("coupling system", 0.0, 1.0) from None
    values = dict(zip(names, x))
    if case.dim == 2:
        values["c2"] = values["c1"] if case.fluid_transient else 0j
    else:
        values["c2"] = 0j
    if case.nonlinear:
        values["c3"] = -params.P
    return _finish(case, params, values, warning)


# ---------------------------------------------------------------------------
# field evaluation


def _as_points(points, dim):
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2 or pts.shape[1] != dim:
        raise DomainError(f"expected points of shape (N, {dim}), got {np.shape(points)}")
    if not np.all(np.isfinite(pts)):
        raise DomainError("point coordinates must be finite")
    return pts


def _near(a, b, scale):
    return np.abs(a - b) <= GEOM_RTOL * scale


def piola_neo_hookean(F, p, mu):
    """First Piola-Kirchhoff stress of the incompressible neo-Hookean solid.

    ``P = mu J^{-2/d} (F - (F:F / d) F^{-T}) - p F^{-T}`` for stacks of
    ``d x d`` tensors ``F`` and pressures ``p``.
    """
    F = np.asarray(F, dtype=float)
    d = F.shape[-1]
    J = np.linalg.det(F)
    FinvT = np.swapaxes(np.linalg.inv(F), -1, -2)
    FF = np.einsum("...ij,...ij->...", F, F)
    p = np.asarray(p, dtype=float)
    return (mu * J[..., None, None] ** (-2.0 / d) * (F - (FF / d)[..., None, None] * FinvT)
            - p[..., None, None] * FinvT)


@dataclass(frozen=True)
class AnalyticSolution:
    case: object
    params: object
    constants: object
    coeffs: CoefficientSet

    @classmethod
    def build(cls, case, params, coeffs=None, numeric=False):
        constants = derive_constants(case, params)
        if coeffs is None:
            solver = solve_coefficients_numeric if numeric else solve_coefficients
            coeffs = solver(case, params, constants)
        return cls(case, params, constants, coeffs)

    def with_coeffs(self, coeffs):
        return replace(self, coeffs=coeffs)

    @property
    def dim(self):
        return self.case.dim

    @property
    def axial_index(self):
        return 0 if self.dim == 2 else 2

    def referenced_coefficients(self):
        """Names of the constants that enter the field formulas."""
        d = self.constants
        names = {n for n, _, _ in _fluid_terms(self.case, self.params, d, np.array([1.0]))}
        names |= {n for n, _, _ in _solid_terms(self.case, self.params, d,
                                                np.array([self.params.H_i]))}
        names.add("P_f")
        names.add("cI_coeff" if self.case.nonlinear else "P_s")
        return [n for n in COEFF_NAMES if n in names]

    # -- geometry ---------------------------------------------------------

    def _split(self, points):
        pts = _as_points(points, self.dim)
        if self.dim == 2:
            axial, trans = pts[:, 0], pts[:, 1]
        else:
            axial, trans = pts[:, 2], np.hypot(pts[:, 0], pts[:, 1])
        return pts, axial, trans

    def _check_axial(self, axial):
        L = self.params.L
        tol = GEOM_RTOL * L
        if np.any(axial < -tol) or np.any(axial > L + tol):
            raise DomainError(f"axial coordinate outside [0, {L}]")

    def _fluid_coords(self, points):
        pts, axial, trans = self._split(points)
        self._check_axial(axial)
        H_i = self.params.H_i
        if np.any(np.abs(trans) > H_i * (1 + GEOM_RTOL)):
            raise DomainError("point outside the fluid domain")
        return pts, axial, trans

    def _solid_coords(self, points):
        pts, axial, trans = self._split(points)
        self._check_axial(axial)
        s = np.abs(trans)
        H_i, H_o = self.params.H_i, self.params.H_o
        if np.any(s < H_i * (1 - GEOM_RTOL)) or np.any(s > H_o * (1 + GEOM_RTOL)):
            raise DomainError("point outside the solid domain")
        return pts, axial, np.clip(s, H_i, H_o)

    def _phase(self, t, n):
        t = np.broadcast_to(np.asarray(t, dtype=float), (n,))
        if not np.all(np.isfinite(t)):
            raise DomainError("time must be finite")
        return np.exp(1j * self.constants.omega * t)

    def _transverse_unit(self, pts):
        """Unit vector of increasing profile coordinate (zero on the axis)."""
        e = np.zeros_like(pts)
        if self.dim == 2:
            e[:, 1] = np.sign(pts[:, 1])
        else:
            r = np.hypot(pts[:, 0], pts[:, 1])
            safe = np.where(r > 0, r, 1.0)
            e[:, 0] = np.where(r > 0, pts[:, 0] / safe, 0.0)
            e[:, 1] = np.where(r > 0, pts[:, 1] / safe, 0.0)
        return e

    # -- amplitudes -------------------------------------------------------

    def fluid_amplitude(self, s):
        return _combine(_fluid_terms(self.case, self.params, self.constants, s), self.coeffs)

    def solid_amplitude(self, s):
        return _combine(_solid_terms(self.case, self.params, self.constants, s), self.coeffs)

    def _axial_vector(self, pts, values):
        out = np.zeros_like(pts)
        out[:, self.axial_index] = values
        return out

    # -- fields -----------------------------------------------------------

    def eval_fluid_velocity(self, points, t):
        pts, _, s = self._fluid_coords(points)
        amp, _ = self.fluid_amplitude(s)
        return self._axial_vector(pts, np.real(amp * self._phase(t, len(pts))))

    def eval_solid_displacement(self, points, t):
        pts, _, s = self._solid_coords(points)
        amp, _ = self.solid_amplitude(s)
        return self._axial_vector(pts, np.real(amp * self._phase(t, len(pts))))

    def eval_solid_velocity(self, points, t):
        pts, _, s = self._solid_coords(points)
        amp, _ = self.solid_amplitude(s)
        w = self.constants.omega
        return self._axial_vector(pts, np.real(1j * w * amp * self._phase(t, len(pts))))

    def eval_fluid_pressure(self, points, t):
        pts, axial, _ = self._fluid_coords(points)
        return np.real(self.coeffs.P_f * (self.params.L - axial) * self._phase(t, len(pts)))

    def eval_solid_pressure(self, points, t):
        """Solid pressure; nonlinear cases use the reference axial coordinate.

        The nonlinear pressure is built from real fields,
        ``c_I(t) + (X + u_s) Re{c3 e^{iwt}} - (mu_s/d) (du_s/ds)^2`` with
        ``c_I(t) = Re{cI_coeff e^{iwt}} + u_s(H_i, t) Re{P_f e^{iwt}}``.
        """
        pts, axial, s = self._solid_coords(points)
        phase = self._phase(t, len(pts))
        c = self.coeffs
        if not self.case.nonlinear:
            return np.real(c.P_s * (self.params.L - axial) * phase)
        amp, damp = self.solid_amplitude(s)
        amp_i, _ = self.solid_amplitude(np.array([self.params.H_i]))
        u = np.real(amp * phase)
        du = np.real(damp * phase)
        u_i = np.real(amp_i[0] * phase)
        c_I = np.real(c.cI_coeff * phase) + u_i * np.real(c.P_f * phase)
        return c_I + (axial + u) * np.real(c.c3 * phase) - self.params.mu_s / self.dim * du**2

    # -- stresses and tractions -------------------------------------------

    def _gradient(self, pts, dvalue):
        """Tensor G[i, j] = d(field_i)/dx_j of an axial field with radial slope ``dvalue``."""
        G = np.zeros(pts.shape + (pts.shape[1],))
        G[:, self.axial_index, :] = dvalue[:, None] * self._transverse_unit(pts)
        return G

    def fluid_stress(self, points, t):
        """Cauchy stress ``mu_f (grad v + grad v^T) - p_f I``."""
        pts, _, s = self._fluid_coords(points)
        phase = self._phase(t, len(pts))
        _, damp = self.fluid_amplitude(s)
        G = self._gradient(pts, np.real(damp * phase))
        if self.dim == 2:
            # the 2D profile coordinate is signed y, so no sign flip is needed
            G[:, 0, 1] = np.real(damp * phase)
        p = self.eval_fluid_pressure(pts, t)
        eye = np.eye(self.dim)
        return self.params.mu_f * (G + np.swapaxes(G, 1, 2)) - p[:, None, None] * eye

    def solid_stress(self, points, t):
        """Cauchy stress (linear law) or first Piola-Kirchhoff stress (nonlinear law)."""
        pts, _, s = self._solid_coords(points)
        phase = self._phase(t, len(pts))
        _, damp = self.solid_amplitude(s)
        G = self._gradient(pts, np.real(damp * phase))
        p = self.eval_solid_pressure(pts, t)
        mu = self.params.mu_s
        if self.case.nonlinear:
            return piola_neo_hookean(np.eye(self.dim) + G, p, mu)
        return mu * (G + np.swapaxes(G, 1, 2)) - p[:, None, None] * np.eye(self.dim)

    def _on_boundary(self, side, axial, s):
        p = self.params
        hit = _near(axial, 0.0, p.L) | _near(axial, p.L, p.L) | _near(s, p.H_i, p.H_o)
        if side == "solid":
            hit |= _near(s, p.H_o, p.H_o)
        return hit

    def eval_traction(self, side, points, t, normal):
        """Traction ``sigma n`` (fluid, linear solid) or ``P N`` (nonlinear solid).

        ``normal`` is the outward unit normal of the chosen subdomain, one
        vector or one per point.  Points must lie on an inlet, outlet,
        interface or (solid only) wall surface.
        """
        if side not in ("fluid", "solid"):
            raise ValueError(f"side must be 'fluid' or 'solid', got {side!r}")
        pts, axial, trans = self._split(points)
        n = np.broadcast_to(np.asarray(normal, dtype=float), pts.shape)
        if not np.allclose(np.linalg.norm(n, axis=1), 1.0, atol=1e-9):
            raise ValueError("normal must be a unit vector")
        if not np.all(self._on_boundary(side, axial, np.abs(trans))):
            raise DomainError(f"point not on a {side} boundary")
        stress = self.fluid_stress(pts, t) if side == "fluid" else self.solid_stress(pts, t)
        return np.einsum("nij,nj->ni", stress, n)

    # -- aggregates -------------------------------------------------------

    def peak_speed(self, n_s=401, n_t=401):
        """Max of |v_f| over a uniform (profile coordinate x one period) grid."""
        if n_s < 2 or n_t < 2:
            raise ValueError("grid densities must be at least 2")
        s = np.linspace(0.0, self.params.H_i, n_s)
        amp, _ = self.fluid_amplitude(s)
        t = np.linspace(0.0, self.params.T, n_t)
        phase = np.exp(1j * self.constants.omega * t)
        return float(np.max(np.abs(np.real(amp[:, None] * phase[None, :]))))


def resonance_frequencies(params, n_max):
    """``w_n = (2n + 1) pi / (2 (H_o - H_i)) sqrt(mu_s / rho_s)`` for n = 0..n_max."""
    if params.rho_s <= 0:
        raise ParameterError("resonance frequencies need a transient solid (rho_s > 0)")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    n = np.arange(n_max + 1)
    c = math.sqrt(params.mu_s / params.rho_s)
    return (2 * n + 1) * math.pi / (2 * (params.H_o - params.H_i)) * c


def apply_phase(params, phi):
    """Parameters with P rotated by ``e^{i phi}``."""
    return params.with_values(P=params.P * cmath.exp(1j * phi))
