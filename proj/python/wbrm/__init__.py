"""NPT-region widths of eigenfunctions of banded random matrices.

Thin python surface over the C++ core: ensemble generation, dense
diagonalization, the spectral-radius oracle and the pivot-scan method for
non-perturbative region widths, eigenfunction/LDOS shape profiles, and the
analytic width laws.
"""

from ._core import (
    Instance,
    ResonanceError,
    ValidationError,
    assemble_u_up,
    diagonalize,
    ef_profile,
    eigenvalues,
    erfc,
    generate,
    half_width,
    hamiltonian_dense,
    instance_from_json,
    localization_length,
    mean_np_large,
    mean_np_small,
    npt_iterative,
    npt_oracle,
    quartic_s,
    spectral_radius,
    x_statistic,
)

__all__ = [
    "Instance",
    "ResonanceError",
    "ValidationError",
    "assemble_u_up",
    "diagonalize",
    "ef_profile",
    "eigenvalues",
    "erfc",
    "generate",
    "half_width",
    "hamiltonian_dense",
    "instance_from_json",
    "localization_length",
    "mean_np_large",
    "mean_np_small",
    "npt_iterative",
    "npt_oracle",
    "quartic_s",
    "spectral_radius",
    "x_statistic",
]

__version__ = "0.1.0"
