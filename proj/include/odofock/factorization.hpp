#pragma once

// Wandering subspaces of creation-invariant subspaces, the inner multi-analytic
// factorization Φ = i_S ∘ Π and the symbol L_* of an odometer subrepresentation.

#include <optional>
#include <vector>

#include "odofock/odometer.hpp"

namespace odofock {

struct InvariantSubspace {
  FockSpace ambient;
  Matrix basis;  // orthonormal columns
  std::vector<double> invariance_residuals;  // ‖(I - P_S)(S_i⊗I)P_S‖, i = 1..n

  /// Orthonormalizes span(columns) and records the invariance residuals.
  static InvariantSubspace from_columns(const FockSpace& ambient, const Matrix& columns,
                                        double tol = kDefaultTol);
  /// Span of e_μ ⊗ E for lo ≤ |μ| ≤ hi.
  static InvariantSubspace levels(const FockSpace& ambient, int lo, int hi);

  Index rank() const noexcept { return basis.cols(); }
  bool is_invariant(double tol = kDefaultTol) const;
};

/// Orthonormal basis of S ⊖ Σ_i (S_i⊗I)S.
Matrix wandering_subspace(const InvariantSubspace& s, double tol = kDefaultTol);

struct BeurlingFactorization {
  Matrix wandering_basis;  // η_j as columns of the ambient space
  int wandering_dim = 0;
  int wandering_level = 0;  // highest level met by any η_j
  int budget = 0;           // words |μ| ≤ budget
  FockSpace star_space;     // F(n, budget) ⊗ E_*
  Matrix phi;               // ambient × star_space
  Matrix pi;                // S coordinates × star_space, so phi = basis · pi
  double inner_residual = 0.0;           // ‖Φ^*Φ - I‖
  double multi_analytic_residual = 0.0;  // max_i ‖Φ(S_i⊗I) - (S_i⊗I)Φ‖ on star levels < budget
  double factor_residual = 0.0;          // ‖i_S Π - Φ‖
  Index coverage_rank = 0;               // rank Φ
  bool covers = false;                   // rank Φ = dim S
};

/// Throws WindowError when a wandering vector reaches level M.
BeurlingFactorization beurling_factorize(const InvariantSubspace& s, double tol = kDefaultTol);
/// Same, with a caller-chosen orthonormal basis of the wandering subspace.
BeurlingFactorization beurling_factorize(const InvariantSubspace& s, const Matrix& wandering,
                                         double tol = kDefaultTol);

struct FactorizationRelation {
  Matrix tau;                 // Φ' = Φ (I ⊗ τ)
  double residual = 0.0;      // ‖Φ' - Φ(I⊗τ)‖
  double unitarity = 0.0;     // ‖τ^*τ - I‖ and ‖ττ^* - I‖
};

FactorizationRelation relate_factorizations(const BeurlingFactorization& a, const BeurlingFactorization& b);

struct InducedSymbol {
  bool invariant = false;
  double invariance_residual = 0.0;    // ‖(I - P_S) W_L P_S‖
  std::optional<Symbol> symbol;        // L_* on F(n, budget) ⊗ E_*
  double intertwining_residual = 0.0;  // ‖W_L Φ - Φ W_{L_*}‖ on the window
  double compression_residual = 0.0;   // ‖Φ^* W_L Φ - W_{L_*}‖ on the window
  int window = 0;                      // star-space column levels checked
};

InducedSymbol induced_symbol(const InvariantSubspace& s, const BeurlingFactorization& f,
                             const OdometerMap& w, double tol = kDefaultTol);

}  // namespace odofock
