#include "odofock/dilation.hpp"

#include <algorithm>
#include <cmath>

namespace odofock {

namespace {

constexpr double kPsdSlack = 1e-12;
/// Rounding noise below this is not a coefficient of the lift symbol.
constexpr double kChop = 1e-14;

Matrix hermitian_part(const Matrix& a) { return (a + a.adjoint()) * 0.5; }

}  // namespace

RowContraction::RowContraction(int n, std::vector<Matrix> tuple) : n_(n), t_(std::move(tuple)) {
  if (n_ < 1) throw InputError("row contraction needs n >= 1");
  if (static_cast<int>(t_.size()) != n_) throw DimensionError("row contraction needs exactly n matrices");
  dim_ = t_.front().rows();
  if (dim_ < 1) throw DimensionError("row contraction acts on an empty space");
  for (const Matrix& m : t_) {
    if (m.rows() != dim_ || m.cols() != dim_) throw DimensionError("tuple entries must be square of equal size");
    if (!all_finite(m)) throw InputError("tuple has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(row_square()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().maxCoeff() > 1.0 + kPsdSlack) {
    throw PreconditionError("tuple is not a row contraction: ‖Σ T_i T_i^*‖ = " +
                            std::to_string(eig.eigenvalues().maxCoeff()));
  }
}

Matrix RowContraction::row_square() const {
  Matrix s = Matrix::Zero(dim_, dim_);
  for (const Matrix& m : t_) s += m * m.adjoint();
  return s;
}

double RowContraction::row_norm() const {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(row_square()), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

PurityResult purity_test(const RowContraction& t, int m_max, double tol) {
  if (m_max < 1) throw InputError("purity_test needs m_max >= 1");
  PurityResult out;
  out.shortcut = t.row_norm() < 1.0;
  Matrix x = Matrix::Identity(t.dim(), t.dim());
  for (int m = 1; m <= m_max; ++m) {
    Matrix next = Matrix::Zero(t.dim(), t.dim());
    for (const Matrix& ti : t.tuple()) next += ti * x * ti.adjoint();
    x = std::move(next);
    const double r = x.trace().real();
    out.residuals.push_back(r);
    if (r < tol) {
      out.pure = true;
      break;
    }
  }
  out.pure = out.pure || out.shortcut;
  return out;
}

DilationData poisson_kernel_unchecked(const RowContraction& t, int max_level, double tol) {
  if (max_level < 0) throw InputError("dilation level must be non-negative");
  const int n = t.arity();
  const Index h = t.dim();

  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(Matrix::Identity(h, h) - t.row_square()));
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -kPsdSlack) {
    throw PreconditionError("defect operator has eigenvalue " + std::to_string(lambda.minCoeff()));
  }
  const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
  const Matrix& v = eig.eigenvectors();
  Matrix defect_root = v * root.cast<Complex>().asDiagonal() * v.adjoint();

  std::vector<Index> kept;
  for (Index j = h - 1; j >= 0; --j) {
    if (root(j) > tol) kept.push_back(j);
  }
  if (kept.empty()) throw PreconditionError("defect space is trivial; the tuple is not pure");
  const auto r = static_cast<int>(kept.size());
  Matrix basis(h, r);
  for (int j = 0; j < r; ++j) basis.col(j) = v.col(kept[static_cast<std::size_t>(j)]);

  FockSpace space(n, max_level, r);
  space.require_dense();
  Matrix poisson = Matrix::Zero(space.dim(), h);
  const Matrix head = basis.adjoint() * defect_root;  // B^* D

  // T_{μi}^* = T_i^* T_μ^*, so appending letters walks the canonical order.
  std::vector<Matrix> level{Matrix::Identity(h, h)};
  for (int m = 0; m <= max_level; ++m) {
    const Index off = space.level_offset(m);
    for (std::size_t rank = 0; rank < level.size(); ++rank) {
      poisson.middleRows((off + static_cast<Index>(rank)) * r, r) = head * level[rank];
    }
    if (m == max_level) break;
    std::vector<Matrix> next;
    next.reserve(level.size() * static_cast<std::size_t>(n));
    for (const Matrix& x : level) {
      for (int i = 0; i < n; ++i) next.push_back(t[i].adjoint() * x);
    }
    level = std::move(next);
  }

  Matrix tail = Matrix::Identity(h, h);
  for (int m = 0; m <= max_level; ++m) {
    Matrix next = Matrix::Zero(h, h);
    for (const Matrix& ti : t.tuple()) next += ti * tail * ti.adjoint();
    tail = std::move(next);
  }

  DilationData out{space, std::move(defect_root), std::move(basis), r, std::move(poisson)};
  out.purity_residual = std::max(0.0, tail.diagonal().real().maxCoeff());
  out.isometry_defect = op_norm(Matrix(out.poisson.adjoint() * out.poisson - Matrix::Identity(h, h)));
  return out;
}

DilationData poisson_kernel(const RowContraction& t, int max_level, double tol) {
  DilationData out = poisson_kernel_unchecked(t, max_level, tol);
  if (out.purity_residual > tol) {
    throw DilationInexactError("purity tail " + std::to_string(out.purity_residual) +
                                   " exceeds tolerance at level " + std::to_string(max_level),
                               out.purity_residual);
  }
  return out;
}

double intertwining_residual(const RowContraction& t, const DilationData& data) {
  const Index rows = data.space.level_offset(data.space.max_level()) * data.defect_dim;
  double worst = 0.0;
  for (int i = 1; i <= t.arity(); ++i) {
    const Matrix lhs = data.poisson * t[i - 1].adjoint();
    const Matrix rhs = apply_creation_adjoint(i, data.space, data.poisson);
    worst = std::max(worst, (lhs - rhs).topRows(rows).norm());
  }
  return worst;
}

Index minimality_rank(const DilationData& data, int budget, double tol) {
  const int n = data.space.alphabet();
  std::vector<Matrix> all{data.poisson};
  std::vector<Matrix> frontier{data.poisson};
  for (int j = 1; j <= budget; ++j) {
    std::vector<Matrix> next;
    for (const Matrix& x : frontier) {
      for (int i = 1; i <= n; ++i) next.push_back(apply_creation(i, data.space, x));
    }
    all.insert(all.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  Matrix stacked(data.poisson.rows(), static_cast<Index>(all.size()) * data.poisson.cols());
  for (std::size_t k = 0; k < all.size(); ++k) {
    stacked.middleCols(static_cast<Index>(k) * data.poisson.cols(), data.poisson.cols()) = all[k];
  }
  return orthonormal_basis(stacked, tol).cols();
}

PairVerdict verify_pair(const ContractivePair& p, double tol, int m_max) {
  const RowContraction& t = p.t;
  if (p.w.rows() != t.dim() || p.w.cols() != t.dim()) throw DimensionError("W must act on the tuple's space");
  PairVerdict out;
  const int n = t.arity();
  for (int i = 0; i + 1 < n; ++i) out.relation_residuals.push_back(op_norm(Matrix(p.w * t[i] - t[i + 1])));
  out.relation_residuals.push_back(op_norm(Matrix(p.w * t[n - 1] - t[0] * p.w)));
  out.max_residual = *std::max_element(out.relation_residuals.begin(), out.relation_residuals.end());
  out.purity = purity_test(t, m_max, tol);
  out.pass = out.max_residual <= tol && out.purity.pure;
  return out;
}

ContractivePair compress_pair(const Symbol& l, int k) {
  const FockSpace& space = l.space();
  if (k < 0) throw InputError("compression level must be non-negative");
  if (k > space.max_level() - l.support_degree()) {
    throw WindowError("compression level " + std::to_string(k) + " exceeds the exact window M - deg L = " +
                      std::to_string(space.max_level() - l.support_degree()));
  }
  const int n = space.alphabet();
  const int d = space.coeff_dim();
  FockSpace sub(n, k, d);
  sub.require_dense();
  std::vector<Matrix> tuple;
  for (int i = 1; i <= n; ++i) tuple.push_back(creation_operator(i, sub).matrix);
  Matrix w = Matrix::Zero(sub.dim(), sub.dim());
  for (Index wi = 0; wi < sub.word_count(); ++wi) {
    const Word mu = sub.word_at(wi);
    for (int p = 0; p < d; ++p) {
      for (const auto& [key, v] : apply_odometer(l, mu, p)) {
        if (key.first.length() <= k) w(sub.basis_index(key.first, key.second), wi * d + p) = v;
      }
    }
  }
  return ContractivePair{RowContraction(n, std::move(tuple)), std::move(w)};
}

LiftResult odometer_lift(const ContractivePair& p, int max_level, double tol) {
  const PairVerdict verdict = verify_pair(p, tol);
  if (!verdict.pass) {
    throw PreconditionError("odometer_lift: pair fails its relations or purity (residual " +
                            std::to_string(verdict.max_residual) + ")");
  }
  DilationData data = poisson_kernel(p.t, max_level, tol);
  const Matrix pi = data.poisson;
  const int r = data.defect_dim;
  const Matrix lifted = pi * p.w * pi.adjoint();
  Symbol symbol = Symbol::from_dense(data.space, lifted.leftCols(r), kChop);
  const OdometerMap wl = build_odometer(symbol);
  const Matrix& big_w = wl.op.matrix;

  const int window = std::max(0, wl.exact_below());
  const Index rows = data.space.level_offset(std::min(window, data.space.max_level() + 1)) * r;
  const Matrix diff = pi * p.w.adjoint() - big_w.adjoint() * pi;

  LiftResult out{std::move(symbol), std::move(data)};
  out.window = window;
  out.residual = rows > 0 ? op_norm(Matrix(diff.topRows(rows))) : 0.0;
  out.round_trip_residual = op_norm(Matrix(pi.adjoint() * big_w * pi - p.w));

  const Matrix proj_out = Matrix::Identity(pi.rows(), pi.rows()) - pi * pi.adjoint();
  double inv = op_norm(Matrix(proj_out * big_w.adjoint() * pi));
  for (int i = 1; i <= p.t.arity(); ++i) {
    inv = std::max(inv, op_norm(Matrix(proj_out * apply_creation_adjoint(i, out.dilation.space, pi))));
  }
  out.invariance_residual = inv;
  out.pair_norm = op_norm(p.w);
  out.lift_norm = op_norm(big_w);
  return out;
}

}  // namespace odofock
