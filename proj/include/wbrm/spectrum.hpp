#pragma once

#include <Eigen/Dense>

#include "wbrm/banded.hpp"

namespace wbrm {

/// Full eigen decomposition: energies ascending, components(a, k) = C_{alpha k}
/// (rows are eigenvectors in the unperturbed basis, 0-based storage).
struct SpectrumResult {
    Eigen::VectorXd energies;
    Eigen::MatrixXd components;
};

/// Dense-scale eigensolve of a symmetric banded matrix (divide and conquer).
/// Throws ValidationError above dense_limit and ConvergenceError (with a
/// matrix fingerprint) if the solver fails.
SpectrumResult diagonalize(const BandedSymmetricMatrix& m, int dense_limit = 4000);

/// Eigenvalues only, ascending.
Eigen::VectorXd eigenvalues_banded(const BandedSymmetricMatrix& m);

/// max|eigenvalue| of a symmetric banded matrix.
double spectral_radius_banded(const BandedSymmetricMatrix& m);

/// max|eigenvalue| of a general real square matrix (dense nonsymmetric solve).
double spectral_radius(const Eigen::MatrixXd& m);

}  // namespace wbrm
