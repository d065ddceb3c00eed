"""Finite-difference certification of analytic solutions.

Each check evaluates the strong-form equations with second-order central
differences at seeded quasi-random interior points and reports the largest
imbalance.  The relative residual divides that imbalance by the largest
individual term of the equation over the whole sample set.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .solution import _fluid_terms, _solid_terms


@dataclass(frozen=True)
class ValidationConfig:
    n_points: int = 64
    seed: int = 0
    h_rel: float = 1e-4
    tol_momentum: float = 1e-6
    tol_momentum_nonlinear: float = 1e-5
    tol_mass: float = 1e-9
    tol_coupling: float = 1e-10
    tol_boundary: float = 1e-10


@dataclass(frozen=True)
class ResidualReport:
    name: str
    max_abs: float
    max_rel: float
    n: int
    h: float
    tol: float

    @property
    def passed(self):
        return bool(self.max_rel < self.tol)

    def to_line(self):
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: max_rel={self.max_rel:.3e} max_abs={self.max_abs:.3e} "
                f"tol={self.tol:.1e} n={self.n} h={self.h:.3e}")

    def to_kv(self):
        key = f"check.{self.name}"
        return [f"{key}.max_rel = {self.max_rel:.6e}",
                f"{key}.max_abs = {self.max_abs:.6e}",
                f"{key}.n = {self.n}",
                f"{key}.h = {self.h:.6e}",
                f"{key}.tol = {self.tol:.6e}",
                f"{key}.passed = {str(self.passed).lower()}"]


@dataclass
class ValidationResult:
    label: str
    reports: list = field(default_factory=list)

    @property
    def passed(self):
        return all(r.passed for r in self.reports)

    def failed(self):
        return [r for r in self.reports if not r.passed]

    def format_text(self):
        lines = [f"case {self.label}"]
        lines += ["  " + r.to_line() for r in self.reports]
        lines.append(f"  {'PASS' if self.passed else 'FAIL'} overall")
        return "\n".join(lines)

    def format_kv(self):
        lines = [f"case = {self.label}"]
        for r in self.reports:
            lines += r.to_kv()
        lines.append(f"validate.passed = {str(self.passed).lower()}")
        return "\n".join(lines)


def _report(name, residual, terms, n, h, tol):
    max_abs = float(np.max(np.abs(residual))) if np.size(residual) else 0.0
    scale = max((float(np.max(np.abs(t))) for t in terms if np.size(t)), default=0.0)
    if max_abs == 0.0:
        rel = 0.0
    elif scale == 0.0:
        rel = math.inf
    else:
        rel = max_abs / scale
    return ResidualReport(name, max_abs, rel, int(n), float(h), float(tol))


# ---------------------------------------------------------------------------
# steps and stencils


@dataclass(frozen=True)
class Steps:
    t: float
    axial: float
    fluid: float
    solid: float


def default_steps(sol, h_rel=1e-4):
    """Steps of ``h_rel`` times the scale of each axis.

    Time and axial scales are T and L.  A transverse scale is the layer
    thickness or, if shorter, one wavelength ``2 pi / |k|``.
    """
    p, d = sol.params, sol.constants
    fluid = p.H_i
    if d.k_f is not None:
        fluid = min(fluid, 2 * math.pi / abs(d.k_f))
    solid = p.H_o - p.H_i
    if d.k_s is not None:
        solid = min(solid, 2 * math.pi / d.k_s)
    return Steps(t=h_rel * p.T, axial=h_rel * p.L, fluid=h_rel * fluid, solid=h_rel * solid)


def _hvec(sol, h_trans, h_axial):
    h = np.full(sol.dim, h_trans)
    h[sol.axial_index] = h_axial
    return h


def _d_dx(f, pts, t, j, h):
    e = np.zeros(pts.shape[1])
    e[j] = h
    return (f(pts + e, t) - f(pts - e, t)) / (2 * h)


def _d2_dx2(f, pts, t, j, h, f0=None):
    e = np.zeros(pts.shape[1])
    e[j] = h
    f0 = f(pts, t) if f0 is None else f0
    return (f(pts + e, t) - 2 * f0 + f(pts - e, t)) / h**2


def _gradient_fd(f, pts, t, hvec):
    """G[n, i, j] = d f_i / d x_j by central differences."""
    return np.stack([_d_dx(f, pts, t, j, hvec[j]) for j in range(pts.shape[1])], axis=-1)


def _divergence_terms(tensor_fn, pts, t, hvec):
    """Per-direction contributions d T_ij / d x_j of a tensor field's divergence."""
    out = []
    for j in range(pts.shape[1]):
        e = np.zeros(pts.shape[1])
        e[j] = hvec[j]
        out.append((tensor_fn(pts + e, t)[:, :, j] - tensor_fn(pts - e, t)[:, :, j]) / (2 * hvec[j]))
    return out


# ---------------------------------------------------------------------------
# sampling


def _unit_samples(n, dims, seed):
    return qmc.Halton(d=dims, scramble=True, seed=seed).random(n)


def _to_cartesian(sol, axial, s, theta):
    n = len(axial)
    if sol.dim == 2:
        return np.column_stack([axial, s])
    return np.column_stack([s * np.cos(theta), s * np.sin(theta), axial])[:n]


def sample_fluid(sol, n, seed, steps, margin=2.0):
    p = sol.params
    u = _unit_samples(n, 4, seed)
    ha, hs = margin * steps.axial, margin * steps.fluid
    axial = ha + (p.L - 2 * ha) * u[:, 0]
    t = p.T * u[:, 3]
    if sol.dim == 2:
        s = (-p.H_i + hs) + (2 * p.H_i - 2 * hs) * u[:, 1]
    else:
        s = hs + (p.H_i - 2 * hs) * u[:, 1]
    return _to_cartesian(sol, axial, s, 2 * math.pi * u[:, 2]), t


def sample_solid(sol, n, seed, steps, margin=2.0):
    p = sol.params
    u = _unit_samples(n, 4, seed + 1)
    ha, hs = margin * steps.axial, margin * steps.solid
    axial = ha + (p.L - 2 * ha) * u[:, 0]
    s = (p.H_i + hs) + (p.H_o - p.H_i - 2 * hs) * u[:, 1]
    t = p.T * u[:, 3]
    if sol.dim == 2:
        s = np.where(u[:, 2] < 0.5, s, -s)
    return _to_cartesian(sol, axial, s, 2 * math.pi * u[:, 2]), t


def sample_surface(sol, n, seed, radius):
    p = sol.params
    u = _unit_samples(n, 3, seed + 2)
    axial = p.L * u[:, 0]
    t = p.T * u[:, 2]
    s = np.full(n, radius)
    if sol.dim == 2:
        s = np.where(u[:, 1] < 0.5, s, -s)
    return _to_cartesian(sol, axial, s, 2 * math.pi * u[:, 1]), t


# ---------------------------------------------------------------------------
# PDE residuals


def _fluid_laplacian_terms(sol, pts, t, h, h_axial):
    f = sol.eval_fluid_velocity
    if sol.dim == 2:
        f0 = f(pts, t)
        return [_d2_dx2(f, pts, t, 0, h_axial, f0), _d2_dx2(f, pts, t, 1, h, f0)]
    r = np.hypot(pts[:, 0], pts[:, 1])
    th = np.arctan2(pts[:, 1], pts[:, 0])
    z = pts[:, 2]

    def g(rr, tt, zz):
        return f(np.column_stack([rr * np.cos(tt), rr * np.sin(tt), zz]), t)

    g0 = g(r, th, z)
    rc = r[:, None]
    radial = ((rc + h / 2) * (g(r + h, th, z) - g0) - (rc - h / 2) * (g0 - g(r - h, th, z))) / (rc * h**2)
    dth = h / r
    angular = (g(r, th + dth, z) - 2 * g0 + g(r, th - dth, z)) / (dth[:, None] * rc) ** 2
    axial = (g(r, th, z + h_axial) - 2 * g0 + g(r, th, z - h_axial)) / h_axial**2
    return [radial, angular, axial]


def residual_fluid_momentum(sol, pts, t, steps=None):
    """``rho_f (dv/dt + v.grad v) - mu_f lap v + grad p_f`` and its individual terms.

    The advective term is included for nonlinear cases.  Returns
    ``(residual, terms)`` with arrays of shape (N, dim).
    """
    steps = steps or default_steps(sol)
    p = sol.params
    hvec = _hvec(sol, steps.fluid, steps.axial)
    f = sol.eval_fluid_velocity
    ht = steps.t
    inertia = p.rho_f * (f(pts, t + ht) - f(pts, t - ht)) / (2 * ht)
    terms = [inertia]
    residual = inertia.copy()
    if sol.case.nonlinear:
        G = _gradient_fd(f, pts, t, hvec)
        adv = p.rho_f * np.einsum("nij,nj->ni", G, f(pts, t))
        terms.append(adv)
        residual += adv
    for lap in _fluid_laplacian_terms(sol, pts, t, steps.fluid, steps.axial):
        terms.append(p.mu_f * lap)
        residual -= p.mu_f * lap
    pf = lambda x, tt: sol.eval_fluid_pressure(x, tt)[:, None]
    grad_p = np.concatenate([_d_dx(pf, pts, t, j, hvec[j]) for j in range(sol.dim)], axis=1)
    terms.append(grad_p)
    residual += grad_p
    return residual, terms


def residual_solid_momentum(sol, pts, t, steps=None):
    """``rho_s d2u/dt2 - div S`` with S the Cauchy (linear) or Piola (nonlinear) stress.

    The stress is assembled from the analytic displacement gradient and its
    divergence is taken by central differences in Cartesian coordinates; the
    inertia term differences displacement values in time, so the analytic
    gradient is itself checked.  Returns ``(residual, terms)``.
    """
    steps = steps or default_steps(sol)
    p = sol.params
    hvec = _hvec(sol, steps.solid, steps.axial)
    f = sol.eval_solid_displacement
    ht = steps.t
    terms = []
    residual = np.zeros_like(pts)
    if sol.case.solid_transient:
        inertia = p.rho_s * (f(pts, t + ht) - 2 * f(pts, t) + f(pts, t - ht)) / ht**2
        terms.append(inertia)
        residual += inertia
    for part in _divergence_terms(sol.solid_stress, pts, t, hvec):
        terms.append(part)
        residual -= part
    return residual, terms


def residual_mass(sol, pts, t, side, steps=None):
    """Incompressibility residual and its terms.

    Fluid and linear solid: divergence of the velocity.  Nonlinear solid:
    ``det F - 1`` with ``F`` from the finite-difference displacement gradient.
    """
    steps = steps or default_steps(sol)
    if side == "fluid":
        hvec = _hvec(sol, steps.fluid, steps.axial)
        G = _gradient_fd(sol.eval_fluid_velocity, pts, t, hvec)
    else:
        hvec = _hvec(sol, steps.solid, steps.axial)
        if sol.case.nonlinear:
            G = _gradient_fd(sol.eval_solid_displacement, pts, t, hvec)
            J = np.linalg.det(np.eye(sol.dim) + G)
            return J - 1.0, [np.ones_like(J)]
        G = _gradient_fd(sol.eval_solid_velocity, pts, t, hvec)
    diag = np.einsum("nii->ni", G)
    return diag.sum(axis=1), [G.reshape(len(pts), -1)]


# ---------------------------------------------------------------------------
# coupling and boundary checks


def _interface_normal(sol, pts):
    return sol._transverse_unit(pts)


def check_coupling(sol, n=64, seed=0, tol=1e-10):
    """Kinematic mismatch and traction balance on the interface."""
    pts, t = sample_surface(sol, n, seed, sol.params.H_i)
    v_f = sol.eval_fluid_velocity(pts, t)
    v_s = sol.eval_solid_velocity(pts, t)
    kin = _report("coupling.kinematic", v_f - v_s, [v_f, v_s], n, 0.0, tol)
    normal = _interface_normal(sol, pts)
    t_f = sol.eval_traction("fluid", pts, t, normal)
    t_s = sol.eval_traction("solid", pts, t, -normal)
    trac = _report("coupling.traction", t_f + t_s, [t_f, t_s], n, 0.0, tol)
    return [kin, trac]


def check_boundaries(sol, n=64, seed=0, tol=1e-10, steps=None):
    """Wall condition, centreline smoothness and zero transverse components."""
    steps = steps or default_steps(sol)
    p = sol.params
    reports = []

    pts, t = sample_surface(sol, n, seed, p.H_o)
    u = sol.eval_solid_displacement(pts, t)
    v = sol.eval_solid_velocity(pts, t)
    # scale: individual displacement terms across the layer (the basis
    # vanishes at the wall itself, so the interface values are used)
    wall_terms = _solid_terms(sol.case, p, sol.constants, np.array([p.H_i]))
    scale = sum(abs(getattr(sol.coeffs, name)) * abs(val[0]) for name, val, _ in wall_terms)
    omega = sol.constants.omega
    reports.append(_report("boundary.wall", np.concatenate([u.ravel(), v.ravel() / omega]),
                           [np.array([scale])], n, 0.0, tol))

    # smoothness / regularity at the centreline
    u_ax = _unit_samples(n, 2, seed + 3)
    axial = p.L * u_ax[:, 0]
    tt = p.T * u_ax[:, 1]
    h = steps.fluid
    if sol.dim == 2:
        centre = np.column_stack([axial, np.zeros(n)])
        j_list = [1]
    else:
        centre = np.column_stack([np.zeros(n), np.zeros(n), axial])
        j_list = [0, 1]
    slopes = [_d_dx(sol.eval_fluid_velocity, centre, tt, j, h) for j in j_list]
    # scale: individual slope terms at the interface
    edge_terms = _fluid_terms(sol.case, p, sol.constants, np.array([p.H_i]))
    slope_scale = [abs(getattr(sol.coeffs, name)) * abs(dv[0]) for name, _, dv in edge_terms]
    reports.append(_report("boundary.symmetry", np.concatenate(slopes),
                           [np.array(slope_scale)], n, h, tol))

    # transverse components of every vector field vanish identically
    fpts, ft = sample_fluid(sol, n, seed, steps)
    spts, st = sample_solid(sol, n, seed, steps)
    mask = np.ones(sol.dim, dtype=bool)
    mask[sol.axial_index] = False
    vals = [sol.eval_fluid_velocity(fpts, ft), sol.eval_solid_displacement(spts, st),
            sol.eval_solid_velocity(spts, st)]
    trans = np.concatenate([x[:, mask].ravel() for x in vals])
    axial_vals = [x[:, sol.axial_index] for x in vals]
    reports.append(_report("boundary.transverse", trans, axial_vals, 3 * n, 0.0, tol))
    return reports


def validate_case(sol, config=None):
    """Run every applicable check on a deterministic seeded sample set."""
    cfg = config or ValidationConfig()
    steps = default_steps(sol, cfg.h_rel)
    n, seed = cfg.n_points, cfg.seed
    result = ValidationResult(sol.case.label)

    fpts, ft = sample_fluid(sol, n, seed, steps)
    res, terms = residual_fluid_momentum(sol, fpts, ft, steps)
    result.reports.append(_report("fluid.momentum", res, terms, n, steps.fluid, cfg.tol_momentum))
    res, terms = residual_mass(sol, fpts, ft, "fluid", steps)
    result.reports.append(_report("fluid.mass", res, terms, n, steps.fluid, cfg.tol_mass))

    spts, st = sample_solid(sol, n, seed, steps)
    res, terms = residual_solid_momentum(sol, spts, st, steps)
    tol = cfg.tol_momentum_nonlinear if sol.case.nonlinear else cfg.tol_momentum
    result.reports.append(_report("solid.momentum", res, terms, n, steps.solid, tol))
    res, terms = residual_mass(sol, spts, st, "solid", steps)
    result.reports.append(_report("solid.mass", res, terms, n, steps.solid, cfg.tol_mass))

    result.reports.extend(check_coupling(sol, n, seed, cfg.tol_coupling))
    result.reports.extend(check_boundaries(sol, n, seed, cfg.tol_boundary, steps))
    return result


def fault_injection(sol, config=None, rel=1e-3):
    """Validate one perturbed copy per referenced constant.

    Returns ``{name: ValidationResult}``; every result should fail.
    """
    out = {}
    for name in sol.referenced_coefficients():
        bad = sol.with_coeffs(sol.coeffs.perturbed(name, rel))
        out[name] = validate_case(bad, config)
    return out
