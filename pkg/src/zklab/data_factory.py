"""Initial data used throughout the laboratory.

- phi: the radial exponential peak e^{-r}, whose transform 2 pi (1+rho^2)^{-3/2}
  has exactly the H^{2-} borderline tail that drives the focusing construction.
- build_blowup_data: v0 = sum_j alpha_j V(-j) phi; the group refocuses one term
  into the non-C^1 peak at each integer time while the rest stays smooth.
- lp_singular_datum: profile in H^1 and W^{1,1} whose gradient has a
  (r log^2(e/r))^{-1} singularity, hence lies outside W^{1,p} for every p > 2;
  optionally translated onto the upper half plane behind a smooth cutoff.
- weighted_identity_residual: checks the exponential-weight smoothing identity
  e^{x+y} V(t) v0 = V(t)[ e^{3 t Lap} ( e^{x+y-4t} v0(. - 3t) ) ]
  and, in PDE mode, that w = e^{x+y} V(t) v0 satisfies
  w_t = 3 Lap w + 2 w - 3 (w_x + w_y) - (w_xxx + w_yyy).
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .grid import (
    RealField,
    SpectralField,
    deriv,
    field_from_function,
    forward,
    inverse,
)
from .propagator import apply_group, apply_group_spec


@dataclass(frozen=True)
class BlowupDataSpec:
    J: int = 3
    c: float = 3.0  # alpha_j = scale * e^{-c j}; c > 2 keeps alpha_j e^{2j} summable
    spacing: float = 1.0
    frame: str = "symmetrized"
    scale: float = 1.0

    def __post_init__(self):
        if self.J < 1:
            raise ConfigurationError(f"need J >= 1, got {self.J}")
        if not self.c > 2:
            raise ConfigurationError(f"amplitude rule requires c > 2, got {self.c}")

    def alpha(self, j):
        return self.scale * np.exp(-self.c * j)


def phi(grid):
    """Samples of e^{-sqrt(x^2+y^2)}."""
    return field_from_function(grid, lambda X, Y: np.exp(-np.hypot(X, Y)))


def build_blowup_data(spec, grid):
    """v0 = sum_{j=1}^J alpha_j V(-j*spacing) phi, built spectrally in one pass."""
    base = forward(phi(grid))
    acc = np.zeros_like(base.coeffs)
    for j in range(1, spec.J + 1):
        acc += spec.alpha(j) * apply_group_spec(base, -j * spec.spacing, spec.frame).coeffs
    return inverse(SpectralField(grid, acc))


def smoothstep(t):
    """C^infinity transition: 0 for t <= 0, 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    f = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
    fc = np.where(t < 1, np.exp(-1.0 / np.maximum(1 - t, 1e-300)), 0.0)
    return f / (f + fc)


def _cutoff(r):
    """C^infinity radial bump: 1 on r <= 1/2, 0 on r >= 1."""
    return smoothstep(2.0 * (1.0 - r))


def _singular_profile(r):
    """int_r^1 (rho log^2(e/rho))^{-1} drho = 1 - 1/(1 - log r), times the cutoff."""
    rs = np.maximum(r, 1e-300)
    return _cutoff(r) * np.where(r < 1, 1.0 - 1.0 / (1.0 - np.log(rs)), 0.0)


def lp_singular_datum(grid, kind="fullplane_w1p", center=(0.0, 2.0), amplitude=1.0):
    """Profile in H^1 cap W^{1,1} but outside every W^{1,p}, p > 2.

    fullplane_w1p: singular at the origin. halfplane_wrp: singular at `center`
    on the upper half plane, multiplied by a smooth cutoff supported in y > 0.
    """
    if kind == "fullplane_w1p":
        return field_from_function(
            grid, lambda X, Y: amplitude * _singular_profile(np.hypot(X, Y))
        )
    if kind == "halfplane_wrp":
        cx, cy = center
        if cy <= 1.0:
            raise ConfigurationError("half-plane singular point must sit at y > 1")

        def f(X, Y):
            prof = _singular_profile(np.hypot(X - cx, Y - cy))
            return amplitude * prof * smoothstep(Y / (cy - 1.0))

        return field_from_function(grid, f)
    raise ConfigurationError(f"unknown singular-datum kind {kind!r}")


def _window_mask(grid, halfwidth):
    X, Y = grid.meshgrid()
    return (np.abs(X) <= halfwidth) & (np.abs(Y) <= halfwidth)


def weighted_identity_residual(grid, t, window_halfwidth, mode=1, dt_fd=1e-4, v0=None):
    """Relative residual of the exponential-weight smoothing identity.

    mode 1 compares both sides of the identity on the sub-window; mode 2
    checks the advected-heat PDE for w = e^{x+y} V(t) v0 with a centered
    finite-difference time derivative. v0 defaults to the unit Gaussian bump.
    """
    if np.exp(2 * window_halfwidth) > 1e12:
        raise DomainError(f"weight e^(x+y) overflows tolerance on window {window_halfwidth}")
    X, Y = grid.meshgrid()
    if v0 is None:
        v0_vals = np.exp(-(X**2 + Y**2) / 2)
    else:
        v0_vals = v0.values
    field = RealField(grid, v0_vals)
    W = np.exp(X + Y)
    mask = _window_mask(grid, window_halfwidth)

    if mode == 1:
        lhs = W * apply_group(field, t, "symmetrized").values
        # right side: heat flow e^{3 t Lap} of the weighted, shifted datum
        shifted = RealField(
            grid, np.exp(X + Y - 4 * t) * _spectral_shift(grid, v0_vals, 3 * t, 3 * t)
        )
        c = forward(shifted)
        KX, KY = grid.kgrid()
        heat = SpectralField(grid, c.coeffs * np.exp(-3 * t * (KX**2 + KY**2)))
        rhs = apply_group(inverse(heat), t, "symmetrized").values
        scale = np.max(np.abs(lhs[mask]))
        return float(np.max(np.abs(lhs - rhs)[mask]) / scale)

    if mode == 2:
        # product-rule derivatives: the weight is differentiated analytically so
        # nothing unbounded ever passes through the periodic transform
        def w_derivs(tt):
            v = forward(apply_group(field, tt, "symmetrized"))
            vx = inverse(deriv(v, "x")).values
            vy = inverse(deriv(v, "y")).values
            vxx = inverse(deriv(v, "x", 2)).values
            vyy = inverse(deriv(v, "y", 2)).values
            vxxx = inverse(deriv(v, "x", 3)).values
            vyyy = inverse(deriv(v, "y", 3)).values
            vv = inverse(v).values
            lap_w = W * (vxx + vyy + 2 * (vx + vy) + 2 * vv)
            wx_plus_wy = W * (vx + vy + 2 * vv)
            wxxx = W * (vxxx + 3 * vxx + 3 * vx + vv)
            wyyy = W * (vyyy + 3 * vyy + 3 * vy + vv)
            return 3 * lap_w + 2 * (W * vv) - 3 * wx_plus_wy - (wxxx + wyyy)

        wp = W * apply_group(field, t + dt_fd, "symmetrized").values
        wm = W * apply_group(field, t - dt_fd, "symmetrized").values
        dwdt = (wp - wm) / (2 * dt_fd)
        rhs = w_derivs(t)
        scale = np.max(np.abs(dwdt[mask]))
        return float(np.max(np.abs(dwdt - rhs)[mask]) / scale)

    raise ConfigurationError(f"mode must be 1 or 2, got {mode}")


def _spectral_shift(grid, values, sx, sy):
    """v(x - sx, y - sy) on the grid; exact for the band-limited interpolant."""
    import scipy.fft as sfft

    c = sfft.fft2(values)
    kx = 2 * np.pi * np.fft.fftfreq(grid.nx, d=grid.dx)
    ky = 2 * np.pi * np.fft.fftfreq(grid.ny, d=grid.dy)
    phase = np.exp(-1j * (kx[:, None] * sx + ky[None, :] * sy))
    return np.real(sfft.ifft2(c * phase))
