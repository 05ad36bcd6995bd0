"""Numerical laboratory for the 2D (generalized) Zakharov-Kuznetsov equation.

Subsystems:
- grid: periodic grid, continuum-normalized FFT, Fourier-multiplier operators
- propagator: exact linear group in original/symmetrized frames, Airy oracle
- data_factory: initial data (exponential peak, dispersive-focusing sums,
  W^{1,p}-singular profiles) and the weighted smoothing identity check
- evolve: ETDRK4 pseudo-spectral integrator with dealiasing and snapshots
- diagnostics: invariants, Sobolev/weighted norms, windowed regularity slopes,
  gradient-jump indicator, Lp gradient norms
- estimates: numerical verification of dispersive/smoothing/maximal estimates
  and commutator/Leibniz/interpolation lemmas
- config/io_/experiments/cli: experiment configs, snapshot format, reports
"""

__version__ = "0.1.0"

from .grid import (  # noqa: F401
    Grid2D,
    RealField,
    SpectralField,
    make_grid,
    field_from_function,
    forward,
    inverse,
    frac_deriv,
    bessel_op,
    hilbert,
    deriv,
    gradient,
    dealias_mask,
    l2_norm,
    eval_at,
)
from .propagator import (  # noqa: F401
    apply_group,
    airy_1d,
    symbol_correspondence_check,
    transform_closed_form,
)
