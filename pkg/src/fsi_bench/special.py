"""Bessel functions J0, J1, Y0, Y1 of complex argument.

Three regimes, by ``|z|`` after reflection onto ``Re z >= 0``:

* ascending power series (with the logarithmic term for Y) up to
  ``SERIES_RADIUS``, where cancellation between terms is negligible;
* Miller's backward recurrence for J, normalised by the generating-function
  sum for ``e^{+-iz}``, with Neumann series for Y, up to ``HANKEL_RADIUS``;
* Hankel's large-argument expansions beyond.

Each regime is accurate to a few ulps of the function scale, so values are
smooth enough to be differentiated numerically.  Arguments in the left half
plane are reflected with the analytic-continuation formulas.

Y has its branch cut on the negative real axis.  Points exactly on the cut
(either sign of zero imaginary part) take the limit from above, i.e.
``Y_n(-x) = Y_n(x e^{i pi})``.
"""

import numpy as np

SERIES_RADIUS = 2.0
HANKEL_RADIUS = 17.0

_EULER_GAMMA = 0.57721566490153286061
_SERIES_TERMS = 80
_ASYMPTOTIC_TERMS = 40


class BesselError(ValueError):
    """Raised for non-finite input or evaluation at a singularity."""


def _as_complex(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(z)):
        raise BesselError("Bessel argument must be finite")
    return z


def _series_j(order, z):
    q = -0.25 * z * z
    term = np.ones_like(z) if order == 0 else 0.5 * z
    total = term.copy()
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + order))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def _series_y(order, z, jz):
    q = -0.25 * z * z
    log_part = (2.0 / np.pi) * (np.log(0.5 * z) + _EULER_GAMMA) * jz
    if order == 0:
        # (2/pi) sum_{k>=1} (-1)^{k+1} H_k (z^2/4)^k / (k!)^2
        term = np.ones_like(z)
        harmonic = 0.0
        total = np.zeros_like(z)
        for k in range(1, _SERIES_TERMS):
            term = term * q / (k * k)
            harmonic += 1.0 / k
            contrib = -harmonic * term
            total += contrib
            if np.all(np.abs(contrib) <= 1e-17 * np.abs(total)):
                break
        return log_part + (2.0 / np.pi) * total
    # order 1: -2/(pi z) + (2/pi) ln(z/2) J1
    #          - (z/2pi) sum (psi(k+1) + psi(k+2)) (-z^2/4)^k / (k!(k+1)!)
    # with the Euler-gamma pieces of psi folded into log_part above.
    term = np.ones_like(z)
    h_k = 0.0
    total = (h_k + (h_k + 1.0)) * term
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (k + 1))
        h_k += 1.0 / k
        contrib = (2.0 * h_k + 1.0 / (k + 1)) * term
        total += contrib
        if np.all(np.abs(contrib) <= 1e-17 * np.abs(total)):
            break
    return -2.0 / (np.pi * z) + log_part - (0.5 * z / np.pi) * total


def _hankel_pair(order, z):
    """Hankel expansions of H1 and H2 for Re z >= 0, |z| large."""
    mu = 4.0 * order * order
    omega = z - 0.5 * order * np.pi - 0.25 * np.pi
    s1 = np.ones_like(z)
    s2 = np.ones_like(z)
    a = np.ones_like(z)
    prev = np.full(z.shape, np.inf)
    active = np.ones(z.shape, dtype=bool)
    for k in range(1, _ASYMPTOTIC_TERMS):
        a = a * (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        size = np.abs(a)
        # stop each element at its smallest term (optimal truncation)
        active &= size < prev
        if not np.any(active):
            break
        ik = 1j ** k
        s1 = np.where(active, s1 + ik * a, s1)
        s2 = np.where(active, s2 + np.conj(ik) * a, s2)
        prev = np.where(active, size, prev)
        active &= size > 1e-17
    scale = np.sqrt(2.0 / (np.pi * z))
    return scale * np.exp(1j * omega) * s1, scale * np.exp(-1j * omega) * s2


def _miller(order, z):
    """J and Y by backward recurrence and Neumann series (moderate |z|)."""
    n_top = int(1.5 * np.max(np.abs(z)) + 30)
    n_top += n_top % 2
    f = np.zeros((n_top + 2,) + z.shape, dtype=complex)
    f[n_top] = 1e-30
    for n in range(n_top, 0, -1):
        f[n - 1] = (2.0 * n / z) * f[n] - f[n + 1]
        big = np.abs(f[n - 1]) > 1e250
        if np.any(big):
            f[:, big] *= 1e-250
    n = np.arange(n_top + 2)[:, None]
    # e^{+iz} = sum i^n J_n, e^{-iz} = sum (-i)^n J_n; pick the larger one
    t = np.where(z.imag < 0, 1j, -1j)
    weights = np.where(n == 0, 1.0, 2.0) * t[None, :] ** n
    scale = np.exp(t * z) / np.sum(weights * f, axis=0)
    j0, j1 = f[0] * scale, f[1] * scale
    log_part = (2.0 / np.pi) * (np.log(0.5 * z) + _EULER_GAMMA)
    k = np.arange(1, n_top // 2 + 1)[:, None]
    sign = (-1.0) ** k
    if order == 0:
        neumann = np.sum(sign * f[2 * k[:, 0]] / k, axis=0) * scale
        return j0, log_part * j0 - (4.0 / np.pi) * neumann
    neumann = np.sum(sign * (f[2 * k[:, 0] - 1] - f[2 * k[:, 0] + 1]) / k, axis=0) * scale
    return j1, -2.0 / (np.pi * z) * j0 + log_part * j1 + (2.0 / np.pi) * neumann


def _right_half(order, w):
    """J and Y for an array with Re w >= 0."""
    j = np.empty_like(w)
    y = np.empty_like(w)
    size = np.abs(w)
    small = size <= SERIES_RADIUS
    large = size >= HANKEL_RADIUS
    mid = ~small & ~large
    if np.any(small):
        ws = w[small]
        js = _series_j(order, ws)
        j[small] = js
        with np.errstate(divide="ignore", invalid="ignore"):
            y[small] = _series_y(order, ws, js)
    if np.any(mid):
        j[mid], y[mid] = _miller(order, w[mid])
    if np.any(large):
        h1, h2 = _hankel_pair(order, w[large])
        j[large] = 0.5 * (h1 + h2)
        y[large] = (h1 - h2) / 2j
    return j, y


def _evaluate(order, z, want_y):
    if order not in (0, 1):
        raise BesselError(f"only orders 0 and 1 are supported, got {order}")
    z = _as_complex(z)
    if want_y and np.any(z == 0):
        raise BesselError("Y is singular at z = 0")
    flat = np.atleast_1d(z).ravel()
    left = flat.real < 0
    w = np.where(left, -flat, flat)
    j, y = _right_half(order, w)
    sign = 1.0 if order == 0 else -1.0
    out_j = np.where(left, sign * j, j)
    if not want_y:
        return out_j.reshape(z.shape)
    # continuation: Y_n(w e^{+-i pi}) = e^{-+i n pi} Y_n(w) +- 2i cos(n pi) J_n(w)
    lower = left & (flat.imag < 0)
    pm = np.where(lower, -1.0, 1.0)
    out_y = np.where(left, sign * (y + pm * 2j * j), y)
    return out_y.reshape(z.shape)


def bessel_j(order, z):
    """Bessel function of the first kind, order 0 or 1, complex argument."""
    return _evaluate(order, z, want_y=False)


def bessel_y(order, z):
    """Bessel function of the second kind, order 0 or 1, complex argument.

    Principal branch, cut along the negative real axis; points on the cut
    take the value from the upper side.
    """
    return _evaluate(order, z, want_y=True)
