#pragma once

// Factorization operators A, A^dagger and the ladder operators B+- acting on
// states labeled by parameter offsets: label k carries parameters a_{k+1}.

#include <vector>

#include "shapeinv/grid.hpp"
#include "shapeinv/models.hpp"

namespace shapeinv {

/// psi_0 at a_1, L2-normalized; requires validate_normalizable to pass.
GridFunction ground_state(const SuperpotentialModel& model, const Grid& grid);

/// exp(-(sqrt(2m)/hbar) int W(x; a_n) dx), L2-normalized, without the
/// normalizability check. The integral uses per-cell Gauss-Legendre
/// quadrature of W from the left edge and is recentered before
/// exponentiation.
GridFunction ground_state_at(const SuperpotentialModel& model, int n,
                             const Grid& grid);

/// A(a_n) psi = W(x; a_n) psi + (hbar/sqrt(2m)) psi'.
GridFunction apply_A(const SuperpotentialModel& model, int n,
                     const GridFunction& psi);
/// A^dagger(a_n) psi = W(x; a_n) psi - (hbar/sqrt(2m)) psi'.
GridFunction apply_Adag(const SuperpotentialModel& model, int n,
                        const GridFunction& psi);

/// H1(a_n) psi = A^dagger(a_n) A(a_n) psi.
GridFunction apply_hamiltonian(const SuperpotentialModel& model, int n,
                               const GridFunction& psi);

/// Normalized n-th excited state of H1(a_1),
/// A^dagger(a_1) ... A^dagger(a_n) psi_0(a_{n+1}) with each step divided by
/// the square root of the energy the intermediate state carries, the
/// remainder sum R(a_j) + ... + R(a_n). The derivatives inside A^dagger are
/// taken exactly through A A^dagger = H1(a_{j+1}) + R(a_j), which turns the
/// product into a pointwise three-term recurrence. Throws LevelUnbound.
GridFunction excited_state(const SuperpotentialModel& model, int n,
                           const Grid& grid);

/// Functions psi(x, k) for a contiguous window of labels k_lo..k_hi.
class LabeledStateBundle {
 public:
  LabeledStateBundle(int k_lo, std::vector<GridFunction> states);

  /// The same function at every label in [k_lo, k_hi].
  static LabeledStateBundle constant(const GridFunction& f, int k_lo, int k_hi);

  int k_lo() const { return k_lo_; }
  int k_hi() const { return k_lo_ + static_cast<int>(states_.size()) - 1; }
  const Grid& grid() const { return states_.front().grid(); }
  const GridFunction& at(int k) const;
  GridFunction& at(int k);
  bool contains(int k) const { return k >= k_lo() && k <= k_hi(); }

 private:
  int k_lo_;
  std::vector<GridFunction> states_;
};

/// Label-wise combinations restricted to the overlap of the two windows.
/// Throw WindowExhausted when the windows do not overlap.
LabeledStateBundle operator+(const LabeledStateBundle& a,
                             const LabeledStateBundle& b);
LabeledStateBundle operator-(const LabeledStateBundle& a,
                             const LabeledStateBundle& b);
LabeledStateBundle operator*(double s, const LabeledStateBundle& a);

/// (B+ psi)(k) = A^dagger(a_{k+1}) psi(k+1); drops the top label.
LabeledStateBundle raise(const SuperpotentialModel& model,
                         const LabeledStateBundle& bundle);
/// (B- psi)(k) = A(a_k) psi(k-1); drops the bottom label.
LabeledStateBundle lower(const SuperpotentialModel& model,
                         const LabeledStateBundle& bundle);
/// H = B+ B- acting label by label.
LabeledStateBundle hamiltonian(const SuperpotentialModel& model,
                               const LabeledStateBundle& bundle);

/// Multiplies the state at label k by R(a_{k+j}), i.e. the operator R(a_j)
/// evaluated at the state's own label. Custom-model remainders are taken on
/// the bundle's grid.
LabeledStateBundle multiply_remainder(const SuperpotentialModel& model, int j,
                                      const LabeledStateBundle& bundle);

}  // namespace shapeinv
