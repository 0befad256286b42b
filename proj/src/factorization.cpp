#include "odofock/factorization.hpp"

#include <algorithm>
#include <cmath>

namespace odofock {

namespace {

/// Rounding noise below this is not a coefficient of the induced symbol.
constexpr double kChop = 1e-14;

Matrix creation_images(const FockSpace& space, const Matrix& q) {
  const int n = space.alphabet();
  Matrix out(space.dim(), n * q.cols());
  for (int i = 1; i <= n; ++i) out.middleCols((i - 1) * q.cols(), q.cols()) = apply_creation(i, space, q);
  return out;
}

int highest_level(const FockSpace& space, const Matrix& cols, double tol) {
  const Index d = space.coeff_dim();
  int top = -1;
  for (int m = 0; m <= space.max_level(); ++m) {
    const Index begin = space.level_offset(m) * d;
    const Index count = space.level_size(m) * d;
    if (cols.middleRows(begin, count).cwiseAbs().maxCoeff() > tol) top = m;
  }
  return top;
}

/// Columns of star_space at levels < k.
Index star_cols_below(const FockSpace& star, int k) {
  if (k <= 0) return 0;
  return star.level_offset(std::min(k, star.max_level() + 1)) * star.coeff_dim();
}

}  // namespace

InvariantSubspace InvariantSubspace::from_columns(const FockSpace& ambient, const Matrix& columns, double tol) {
  if (columns.rows() != ambient.dim()) throw DimensionError("subspace columns do not match the ambient space");
  if (!all_finite(columns)) throw InputError("subspace has non-finite entries");
  // Already orthonormal columns are kept verbatim so that files round-trip.
  const Index k = columns.cols();
  const bool orthonormal = k > 0 && (columns.adjoint() * columns - Matrix::Identity(k, k)).cwiseAbs().maxCoeff() <= 1e-14;
  InvariantSubspace s{ambient, orthonormal ? columns : orthonormal_basis(columns, tol), {}};
  for (int i = 1; i <= ambient.alphabet(); ++i) {
    const Matrix moved = apply_creation(i, ambient, s.basis);
    s.invariance_residuals.push_back(op_norm(Matrix(moved - s.basis * (s.basis.adjoint() * moved))));
  }
  return s;
}

InvariantSubspace InvariantSubspace::levels(const FockSpace& ambient, int lo, int hi) {
  ambient.require_dense();
  const std::vector<Index> idx = ambient.level_range(lo, hi);
  Matrix cols = Matrix::Zero(ambient.dim(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) cols(idx[j], static_cast<Index>(j)) = 1.0;
  return from_columns(ambient, cols);
}

bool InvariantSubspace::is_invariant(double tol) const {
  return std::all_of(invariance_residuals.begin(), invariance_residuals.end(),
                     [tol](double r) { return r <= tol; });
}

Matrix wandering_subspace(const InvariantSubspace& s, double tol) {
  if (!s.is_invariant(tol)) throw PreconditionError("subspace is not invariant under the creation tuple");
  return orthonormal_complement(creation_images(s.ambient, s.basis), s.basis, tol);
}

BeurlingFactorization beurling_factorize(const InvariantSubspace& s, double tol) {
  return beurling_factorize(s, wandering_subspace(s, tol), tol);
}

BeurlingFactorization beurling_factorize(const InvariantSubspace& s, const Matrix& wandering, double tol) {
  const FockSpace& space = s.ambient;
  if (!s.is_invariant(tol)) throw PreconditionError("subspace is not invariant under the creation tuple");
  if (wandering.rows() != space.dim() || wandering.cols() == 0) {
    throw DimensionError("wandering basis must be a nonempty column set of the ambient space");
  }
  const int n = space.alphabet();
  const auto k = static_cast<int>(wandering.cols());
  const int top = highest_level(space, wandering, tol);
  if (top >= space.max_level()) {
    throw WindowError("wandering vectors reach level " + std::to_string(top) +
                      "; no room for any word below the truncation");
  }
  const int budget = space.max_level() - top;
  FockSpace star(n, budget, k);
  star.require_dense();

  // Φ(e_{iμ} ⊗ ε_j) = (S_i⊗I) Φ(e_μ ⊗ ε_j).
  Matrix phi = Matrix::Zero(space.dim(), star.dim());
  phi.leftCols(k) = wandering;
  for (Index wi = 0; wi < star.level_offset(budget); ++wi) {
    for (int i = 1; i <= n; ++i) {
      const Index target = star.creation_target(i, wi);
      phi.middleCols(target * k, k) = apply_creation(i, space, phi.middleCols(wi * k, k));
    }
  }

  BeurlingFactorization f{wandering, k, top, budget, star, phi, s.basis.adjoint() * phi};
  f.inner_residual = op_norm(Matrix(phi.adjoint() * phi - Matrix::Identity(star.dim(), star.dim())));
  const Index cols = star_cols_below(star, budget);
  for (int i = 1; i <= n; ++i) {
    if (cols == 0) break;
    const Matrix lhs = phi * apply_creation(i, star, Matrix::Identity(star.dim(), star.dim()));
    const Matrix rhs = apply_creation(i, space, phi);
    f.multi_analytic_residual = std::max(f.multi_analytic_residual, op_norm(Matrix((lhs - rhs).leftCols(cols))));
  }
  f.factor_residual = op_norm(Matrix(s.basis * f.pi - phi));
  f.coverage_rank = orthonormal_basis(phi, tol).cols();
  f.covers = f.coverage_rank == s.rank();
  return f;
}

FactorizationRelation relate_factorizations(const BeurlingFactorization& a, const BeurlingFactorization& b) {
  if (!(a.star_space == b.star_space) || a.phi.rows() != b.phi.rows()) {
    throw DimensionError("factorizations have different wandering dimensions or budgets");
  }
  const int k = a.wandering_dim;
  FactorizationRelation r;
  // Least squares for Φ_Ω τ = Φ'_Ω with Φ_Ω isometric.
  r.tau = a.wandering_basis.adjoint() * b.wandering_basis;
  const Index words = a.star_space.word_count();
  Matrix expanded = Matrix::Zero(a.star_space.dim(), a.star_space.dim());
  for (Index w = 0; w < words; ++w) expanded.block(w * k, w * k, k, k) = r.tau;
  r.residual = op_norm(Matrix(b.phi - a.phi * expanded));
  const Matrix id = Matrix::Identity(k, k);
  r.unitarity = std::max((r.tau.adjoint() * r.tau - id).norm(), (r.tau * r.tau.adjoint() - id).norm());
  return r;
}

InducedSymbol induced_symbol(const InvariantSubspace& s, const BeurlingFactorization& f,
                             const OdometerMap& w, double tol) {
  const FockSpace& space = s.ambient;
  if (!(w.op.space == space)) throw DimensionError("odometer map and subspace live in different spaces");
  const Matrix& big_w = w.op.matrix;
  InducedSymbol out;
  const Matrix moved = big_w * s.basis;
  out.invariance_residual = op_norm(Matrix(moved - s.basis * (s.basis.adjoint() * moved)));
  out.invariant = out.invariance_residual <= tol;
  if (!out.invariant) return out;

  const FockSpace& star = f.star_space;
  const Matrix coeffs = f.phi.adjoint() * big_w * f.wandering_basis;
  Symbol l_star = Symbol::from_dense(star, coeffs, kChop);
  const OdometerMap w_star = build_odometer(l_star);

  // Columns whose Φ-image stays below the exact window of W_L, and that are
  // themselves exact for W_{L_*}.
  const int window = std::max(0, std::min(w_star.exact_below(), w.exact_below() - f.wandering_level));
  const Index cols = star_cols_below(star, window);
  out.window = window;
  if (cols > 0) {
    const Matrix lhs = big_w * f.phi.leftCols(cols);
    const Matrix rhs = f.phi * w_star.op.matrix.leftCols(cols);
    out.intertwining_residual = op_norm(Matrix(lhs - rhs));
    out.compression_residual = op_norm(Matrix(f.phi.adjoint() * lhs - w_star.op.matrix.leftCols(cols)));
  }
  out.symbol = std::move(l_star);
  return out;
}

}  // namespace odofock
