#pragma once

// Finite-difference reference solver for the partner Hamiltonians and
// reports comparing it with the algebraic spectrum and ladder states.

#include <vector>

#include "shapeinv/grid.hpp"
#include "shapeinv/models.hpp"
#include "shapeinv/tridiagonal.hpp"

namespace shapeinv {

/// Where the Dirichlet walls sit: on the first and last grid points (rows for
/// the interior points only), or one step beyond them (a row for every point,
/// as for half-line grids that leave out the origin).
enum class Walls { AtEdges, BeyondEdges };

/// -(hbar^2/2m) d^2/dx^2 + V: diag = 2c/h^2 + V(x_i), off = -c/h^2. Throws
/// DomainError when V cannot be evaluated at a grid point.
TridiagonalMatrix build_hamiltonian(const Expr& potential, const Grid& grid,
                                    const UnitSystem& units,
                                    Walls walls = Walls::AtEdges);
/// Same for V1 or V2 at parameters a_n; half-line models put the left wall at
/// the origin, one step before their open grid.
TridiagonalMatrix build_hamiltonian(const SuperpotentialModel& model,
                                    const Grid& grid, Partner which, int n = 1);

/// Lowest k eigenpairs with eigenvectors as grid functions, zero on wall
/// points and unit trapezoid norm.
struct GridEigenstates {
  std::vector<double> energies;
  std::vector<GridFunction> states;
};
GridEigenstates solve_lowest(const TridiagonalMatrix& m, const Grid& grid,
                             std::size_t k);

/// Trapezoid-rule integral of f*g. Throws GridMismatch.
double inner_product(const GridFunction& f, const GridFunction& g);

struct LevelComparison {
  int n = 0;
  double algebraic = 0.0;
  double numeric_gap = 0.0;  // lambda_n - lambda_0
  double difference = 0.0;
  double overlap = 0.0;      // |<psi_n ladder | psi_n grid>|
};

struct ComparisonReport {
  Grid grid;
  double numeric_ground = 0.0;  // lambda_0 of the discretized H1(a_1)
  std::vector<LevelComparison> levels;
  double max_abs_difference = 0.0;
  double min_overlap = 1.0;
};

/// Compares the first k algebraic levels and ladder states with the grid
/// eigenpairs of H1(a_1). Throws LevelUnbound when k exceeds the bound count.
ComparisonReport compare(const SuperpotentialModel& model, const Grid& grid,
                         int k);

}  // namespace shapeinv
