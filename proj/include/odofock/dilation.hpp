#pragma once

// Pure row contractions, their Poisson kernel dilation into a truncated Fock
// space, and the odometer lift of a contractive pair.

#include <vector>

#include "odofock/odometer.hpp"

namespace odofock {

/// (T_1, …, T_n) on C^h with Σ T_i T_i^* ≤ I.
class RowContraction {
public:
  RowContraction(int n, std::vector<Matrix> tuple);

  int arity() const noexcept { return n_; }
  Index dim() const noexcept { return dim_; }
  const std::vector<Matrix>& tuple() const noexcept { return t_; }
  const Matrix& operator[](int i) const { return t_.at(static_cast<std::size_t>(i)); }

  /// Σ T_i T_i^*
  Matrix row_square() const;
  /// ‖(T_1 … T_n)‖
  double row_norm() const;

private:
  int n_;
  Index dim_;
  std::vector<Matrix> t_;
};

struct ContractivePair {
  RowContraction t;
  Matrix w;
};

struct PurityResult {
  bool pure = false;
  bool shortcut = false;          // decided by ‖row‖ < 1
  std::vector<double> residuals;  // r_m = trace Φ^m(I), m = 1, 2, …
};

PurityResult purity_test(const RowContraction& t, int m_max, double tol = kDefaultTol);

struct DilationData {
  FockSpace space;      // F(n, M) ⊗ D_{T*}, coordinates in defect_basis
  Matrix defect_root;   // (I - Σ T_j T_j^*)^{1/2}
  Matrix defect_basis;  // h × r, orthonormal columns spanning D_{T*}
  int defect_dim = 0;
  Matrix poisson;       // D × h
  /// max over basis vectors h of Σ_{|μ|=M+1} ‖T_μ^* h‖²
  double purity_residual = 0.0;
  /// ‖Π^* Π - I‖
  double isometry_defect = 0.0;
};

/// Poisson kernel without the purity gate.
DilationData poisson_kernel_unchecked(const RowContraction& t, int max_level, double tol = kDefaultTol);

/// Throws DilationInexactError when the purity tail at M exceeds tol.
DilationData poisson_kernel(const RowContraction& t, int max_level, double tol = kDefaultTol);

/// ‖Π T_i^* - (S_i⊗I)^* Π‖ over rows of level ≤ M-1, maximized over i.
double intertwining_residual(const RowContraction& t, const DilationData& data);

/// Rank of ∪_{|μ| ≤ budget} (S_μ⊗I) ran Π.
Index minimality_rank(const DilationData& data, int budget, double tol = kDefaultTol);

struct PairVerdict {
  bool pass = false;
  std::vector<double> relation_residuals;  // ‖W T_i - T_{i+1}‖, …, ‖W T_n - T_1 W‖
  double max_residual = 0.0;
  PurityResult purity;
};

PairVerdict verify_pair(const ContractivePair& p, double tol = kDefaultTol, int m_max = 256);

/// Compression of (W_L, S^E) to levels ≤ k. Needs k ≤ M - support_degree.
ContractivePair compress_pair(const Symbol& l, int k);

struct LiftResult {
  Symbol symbol;
  DilationData dilation;
  double residual = 0.0;             // ‖Π W^* - W_{L'}^* Π‖ on rows of level < window
  int window = 0;
  double round_trip_residual = 0.0;  // ‖Π^* W_{L'} Π - W‖
  double invariance_residual = 0.0;  // Q_T invariance under S_i^* and W_{L'}^*
  double pair_norm = 0.0;            // ‖W‖
  double lift_norm = 0.0;            // truncated ‖W_{L'}‖
};

LiftResult odometer_lift(const ContractivePair& p, int max_level, double tol = kDefaultTol);

}  // namespace odofock
