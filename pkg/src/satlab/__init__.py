"""satlab: numerical laboratory for saturated-NLS solitons in 3d.

Modules
-------
nonlinearity : saturated beta families, derivatives, antiderivative
soliton      : radial profile shooting, mass/energy, soliton curve
operators    : radial grids, L-/L+ discretizations, spectra, powers, admissibility
kernels      : limiting-absorption convolution kernels and norm probes
distorted    : distorted Fourier modes, transform, continuous projection
evolution    : linearized flow, decay fits, dispersive and Strichartz suites
cli          : command-line front end, config, cache, CSV/JSON emission
"""

__version__ = "0.1.0"
