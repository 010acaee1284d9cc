#pragma once

// Symmetric tridiagonal eigensolver: Sturm-sequence bisection for the
// eigenvalues, inverse iteration with partial pivoting for the eigenvectors.

#include <cstddef>
#include <vector>

namespace shapeinv {

struct TridiagonalMatrix {
  std::vector<double> diagonal;
  std::vector<double> off_diagonal;  // length n-1, mirrored above and below
  double spacing = 1.0;              // quadrature weight for eigenvectors
  std::size_t offset = 0;            // grid index of the first row

  std::size_t size() const { return diagonal.size(); }
};

struct EigenPairs {
  std::vector<double> values;                // ascending
  std::vector<std::vector<double>> vectors;  // trapezoid-normalized
};

/// Number of eigenvalues strictly below `shift`.
std::size_t count_below(const TridiagonalMatrix& m, double shift);

/// The k smallest eigenpairs. Eigenvectors have unit trapezoid norm with the
/// matrix spacing as weight and their first significant component positive.
/// Throws ConvergenceError.
EigenPairs eigs_lowest(const TridiagonalMatrix& m, std::size_t k);

}  // namespace shapeinv
