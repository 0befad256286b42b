#include "odofock/gallery.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>
#include <sstream>

#include "odofock/classification.hpp"

namespace odofock {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double angle_of(Complex z) {
  double a = std::arg(z);
  if (a < 0) a += kTwoPi;
  return a;
}

double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  auto one_sided = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double worst = 0.0;
    for (Complex u : x) {
      double best = INFINITY;
      for (Complex v : y) best = std::min(best, std::abs(u - v));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

Matrix matrix_power(Matrix base, Index exponent) {
  Matrix out = Matrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) out = out * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return out;
}

}  // namespace

SpectrumReport spectrum_per_level(const Symbol& l, int max_level, double tol) {
  if (max_level < 0) throw InputError("spectrum level must be non-negative");
  if (!classify(l, tol).is_unitary) throw PreconditionError("spectrum_per_level needs a unitary odometer map");
  const int n = l.space().alphabet();
  const Index d = l.coeff_dim();
  const Matrix b0 = l.block(Word::vacuum(n));
  Eigen::ComplexEigenSolver<Matrix> base(b0);
  const Eigen::VectorXcd& sigma = base.eigenvalues();

  SpectrumReport report;
  std::vector<double> angles;
  FockSpace space(n, max_level, static_cast<int>(d));
  for (int m = 0; m <= max_level; ++m) {
    const Index words = space.level_size(m);
    const Index size = words * d;
    if (size > kMaxDenseDim) throw DimensionError("level block too large for dense storage");
    const Index off = space.level_offset(m);
    Matrix block = Matrix::Zero(size, size);
    for (Index wi = 0; wi < words; ++wi) {
      const Word mu = space.word_at(off + wi);
      for (Index p = 0; p < d; ++p) {
        for (const auto& [key, v] : apply_odometer(l, mu, static_cast<int>(p))) {
          block((space.word_index(key.first) - off) * d + key.second, wi * d + p) = v;
        }
      }
    }
    SpectrumLevel lvl;
    lvl.level = m;
    Eigen::ComplexEigenSolver<Matrix> eig(block, false);
    for (Index j = 0; j < size; ++j) {
      const Complex lambda = eig.eigenvalues()(j);
      lvl.eigenvalues.push_back(lambda);
      lvl.unit_modulus_residual = std::max(lvl.unit_modulus_residual, std::abs(std::abs(lambda) - 1.0));
      angles.push_back(angle_of(lambda));
    }
    for (Index j = 0; j < sigma.size(); ++j) {
      const double radius = std::pow(std::abs(sigma(j)), 1.0 / static_cast<double>(words));
      for (Index k = 0; k < words; ++k) {
        const double theta = (std::arg(sigma(j)) + kTwoPi * static_cast<double>(k)) / static_cast<double>(words);
        lvl.predicted.push_back(std::polar(radius, theta));
      }
    }
    lvl.hausdorff = hausdorff(lvl.eigenvalues, lvl.predicted);
    lvl.block_unitary_residual = op_norm(Matrix(block.adjoint() * block - Matrix::Identity(size, size)));
    Matrix expected = Matrix::Zero(size, size);
    for (Index wi = 0; wi < words; ++wi) expected.block(wi * d, wi * d, d, d) = b0;
    lvl.power_residual = op_norm(Matrix(matrix_power(block, words) - expected));
    report.per_level.push_back(std::move(lvl));
  }

  std::sort(angles.begin(), angles.end());
  for (std::size_t j = 0; j + 1 < angles.size(); ++j) {
    report.max_gap = std::max(report.max_gap, angles[j + 1] - angles[j]);
  }
  if (!angles.empty()) report.max_gap = std::max(report.max_gap, angles.front() + kTwoPi - angles.back());
  return report;
}

std::string angle_histogram(const SpectrumReport& report, int bins) {
  if (bins < 1) throw InputError("histogram needs at least one bin");
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (const auto& lvl : report.per_level) {
    for (Complex z : lvl.eigenvalues) {
      auto b = static_cast<int>(angle_of(z) / kTwoPi * bins);
      counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))]++;
    }
  }
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  for (int b = 0; b < bins; ++b) {
    os << '[' << kTwoPi * b / bins << ", " << kTwoPi * (b + 1) / bins << ") "
       << counts[static_cast<std::size_t>(b)] << ' '
       << std::string(static_cast<std::size_t>(counts[static_cast<std::size_t>(b)]), '#') << '\n';
  }
  return os.str();
}

AddingMachine gallery_adding_machine(Complex q, int size, double tol) {
  if (std::abs(std::abs(q) - 1.0) > 1e-12) throw InputError("q must be unimodular");
  if (size < 4) throw WindowError("adding machine needs N >= 4 for a nonempty relation window");
  AddingMachine am;
  am.q = q;
  am.size = size;
  am.window = (size - 3) / 2;
  const Complex qb = std::conj(q);
  const Index n = size;
  am.v1 = Matrix::Zero(n, n);
  am.v2 = Matrix::Zero(n, n);
  am.w = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    if (2 * k < n) am.v1(2 * k, k) = std::pow(qb, static_cast<double>(2 * k));
    if (2 * k + 1 < n) am.v2(2 * k + 1, k) = std::pow(qb, static_cast<double>(2 * k + 1));
    if (k + 1 < n) am.w(k + 1, k) = qb;
  }
  const Index cols = am.window + 1;
  auto on_window = [cols](const Matrix& m) { return op_norm(Matrix(m.leftCols(cols))); };
  const Matrix ws = am.w.adjoint();
  am.relation_v1 = on_window(am.w * am.v1 - am.v2);
  am.relation_v2 = on_window(am.w * am.v2 - q * am.v1 * am.w);
  am.twisted_nica = on_window(ws * am.v1 - qb * am.v2 * ws);
  am.nica_relation = on_window(ws * am.v1 - am.v2 * ws);
  am.nica = am.nica_relation <= tol;
  am.expected_nica = std::abs(q - Complex(1.0, 0.0)) <= tol;
  return am;
}

WeakBishift gallery_weak_bishift(int d, int max_level, int n) {
  if (d < 1) throw InputError("weak bi-shift needs d >= 1");
  if (d > max_level) throw WindowError("weak bi-shift needs d <= M so every block fits the truncation");
  FockSpace space(n, max_level, d);
  std::vector<SymbolEntry> entries;
  for (int m = 0; m < d; ++m) {
    entries.push_back({space.basis_index(Word::power(n, 1, m), m), m, Complex(1.0, 0.0)});
  }
  WeakBishift out{Symbol(space, std::move(entries))};
  double sq = 0.0;
  for (int m = 1; m < d; ++m) {
    const SparseImage img = apply_odometer(out.symbol, Word::vacuum(n), m);
    for (const auto& [key, v] : img) {
      const Word& w = key.first;
      if (w.empty() || w[0] != 1) continue;
      const Word stripped(n, std::vector<int>(w.letters().begin() + 1, w.letters().end()));
      const bool target = stripped == Word::power(n, 1, m - 1) && key.second == m;
      sq += std::norm(target ? v - 1.0 : v);
    }
  }
  out.witness_residual = std::sqrt(sq);
  return out;
}

ShiftSymbol gallery_shift_symbol(int d, int max_level, int n) {
  if (d < 2) throw InputError("shift symbol needs d >= 2");
  FockSpace space(n, max_level, d);
  std::vector<SymbolEntry> entries;
  for (int p = 0; p + 1 < d; ++p) entries.push_back({p + 1, p, Complex(1.0, 0.0)});
  ShiftSymbol out{Symbol(space, std::move(entries)), d - 1};

  std::set<Index> seen{0};
  std::deque<Index> queue{0};
  while (!queue.empty()) {
    const Index b = queue.front();
    queue.pop_front();
    const Index wi = b / d;
    const auto p = static_cast<int>(b % d);
    std::vector<Index> next;
    for (int i = 1; i <= n; ++i) {
      const Index t = space.creation_target(i, wi);
      if (t >= 0) next.push_back(t * d + p);
    }
    for (const auto& [key, v] : apply_odometer(out.symbol, space.word_at(wi), p)) {
      if (key.first.length() <= max_level && v != Complex(0.0, 0.0)) {
        next.push_back(space.basis_index(key.first, key.second));
      }
    }
    for (Index t : next) {
      if (seen.insert(t).second) queue.push_back(t);
    }
  }
  out.reachable_rank = static_cast<Index>(seen.size());
  return out;
}

GoldenRatio gallery_golden_ratio(int terms, int max_level) {
  if (terms < 1) throw InputError("golden-ratio symbol needs P >= 1");
  const double sqrt5 = std::sqrt(5.0);
  const double c0 = std::sqrt(2.0 / (sqrt5 + 3.0));
  const double omega = (1.0 - sqrt5) / 2.0;
  std::vector<double> c{c0};
  for (int p = 1; p <= terms; ++p) c.push_back(c0 * std::pow(omega, p - 1));

  const int m = std::max(terms, max_level);
  FockSpace space(2, m, 1);
  std::vector<SymbolEntry> entries;
  for (int p = 0; p <= terms; ++p) {
    entries.push_back({space.word_index(Word::power(2, 1, p)), 0, Complex(c[static_cast<std::size_t>(p)], 0.0)});
  }
  GoldenRatio out{c, Symbol(space, std::move(entries)), 0.0, 0.0, {}, {}};

  double sum = 0.0;
  for (double x : c) sum += x * x;
  out.norm_defect = std::abs(sum - 1.0);
  const double denom = 1.0 - omega * omega;
  out.norm_tail = c0 * c0 * std::pow(omega, 2 * terms) / denom;
  for (int r = 1; r <= 4; ++r) {
    double s = 0.0;
    for (int p = 0; p + r <= terms; ++p) s += c[static_cast<std::size_t>(p + r)] * c[static_cast<std::size_t>(p)];
    out.cross_sums.push_back(std::abs(s));
    out.cross_tails.push_back(c0 * c0 * std::pow(std::abs(omega), 2 * terms - r) / denom);
  }
  return out;
}

Symbol scalar_vacuum_symbol(Complex c, int n, int max_level) {
  FockSpace space(n, max_level, 1);
  return Symbol(space, {{0, 0, c}});
}

}  // namespace odofock
