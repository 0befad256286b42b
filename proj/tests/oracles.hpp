#pragma once

// Brute-force reference implementations used to cross-check the library.
// Everything here works from raw data (letters, entry lists) and never calls
// the library's indexing, carry or odometer code.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "odofock/odometer.hpp"

namespace oracle {

using odofock::Complex;
using odofock::Index;
using odofock::Matrix;
using Letters = std::vector<int>;

/// Words of length ≤ M by repeatedly appending letters to the previous level.
inline std::vector<Letters> words(int n, int max_level) {
  std::vector<Letters> out{{}};
  std::vector<Letters> level{{}};
  for (int m = 1; m <= max_level; ++m) {
    std::vector<Letters> next;
    for (const Letters& w : level) {
      for (int i = 1; i <= n; ++i) {
        Letters x = w;
        x.push_back(i);
        next.push_back(x);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    level = std::move(next);
  }
  return out;
}

inline std::map<Letters, Index> index_map(int n, int max_level) {
  std::map<Letters, Index> idx;
  const auto all = words(n, max_level);
  for (std::size_t k = 0; k < all.size(); ++k) idx[all[k]] = static_cast<Index>(k);
  return idx;
}

/// Reads the word as a base-n integer, first letter least significant.
inline unsigned long long to_integer(const Letters& w, int n) {
  unsigned long long v = 0;
  for (std::size_t j = w.size(); j-- > 0;) v = v * static_cast<unsigned long long>(n) + static_cast<unsigned>(w[j] - 1);
  return v;
}

inline Letters from_integer(unsigned long long v, int n, std::size_t length) {
  Letters w(length);
  for (std::size_t j = 0; j < length; ++j) {
    w[j] = static_cast<int>(v % static_cast<unsigned long long>(n)) + 1;
    v /= static_cast<unsigned long long>(n);
  }
  return w;
}

/// Successor by integer increment; empty result with overflow=true on n^{⊗m}.
inline Letters integer_successor(const Letters& w, int n, bool& overflow) {
  unsigned long long top = 1;
  for (std::size_t j = 0; j < w.size(); ++j) top *= static_cast<unsigned long long>(n);
  const unsigned long long v = to_integer(w, n) + 1;
  overflow = v == top;
  return overflow ? Letters{} : from_integer(v, n, w.size());
}

/// D×D matrix of W_L written straight from the definition: vacuum columns
/// are Lh_p, n^{⊗m} columns are e_1^{⊗m}⊗Lh_p (truncated), the rest move by
/// integer increment.
inline Matrix naive_odometer(const odofock::Symbol& l) {
  const auto& sp = l.space();
  const int n = sp.alphabet();
  const int m_max = sp.max_level();
  const Index d = sp.coeff_dim();
  const auto all = words(n, m_max);
  const auto idx = index_map(n, m_max);
  const auto dim = static_cast<Index>(all.size()) * d;
  Matrix w = Matrix::Zero(dim, dim);
  for (std::size_t k = 0; k < all.size(); ++k) {
    const Letters& mu = all[k];
    bool overflow = mu.empty();
    Letters next;
    if (!mu.empty()) next = integer_successor(mu, n, overflow);
    for (Index p = 0; p < d; ++p) {
      const Index col = static_cast<Index>(k) * d + p;
      if (!overflow) {
        w(idx.at(next) * d + p, col) = 1.0;
        continue;
      }
      for (const auto& e : l.entries()) {
        if (e.col != p) continue;
        Letters target(mu.size(), 1);
        const Letters& nu = all[static_cast<std::size_t>(e.row / d)];
        target.insert(target.end(), nu.begin(), nu.end());
        if (static_cast<int>(target.size()) > m_max) continue;
        w(idx.at(target) * d + e.row % d, col) += e.value;
      }
    }
  }
  return w;
}

/// Naive D×d matrix of L from its entry list.
inline Matrix naive_symbol(const odofock::Symbol& l) {
  Matrix m = Matrix::Zero(l.space().dim(), l.coeff_dim());
  for (const auto& e : l.entries()) m(e.row, e.col) += e.value;
  return m;
}

/// Coefficient block of L at e_1^{⊗r}.
inline Matrix e1_block(const odofock::Symbol& l, int r) {
  const Index d = l.coeff_dim();
  Matrix b = Matrix::Zero(d, d);
  if (r > l.space().max_level()) return b;
  const auto idx = index_map(l.space().alphabet(), l.space().max_level());
  const Index row0 = idx.at(Letters(static_cast<std::size_t>(r), 1));
  for (const auto& e : l.entries()) {
    if (e.row / d == row0) b(e.row % d, e.col) += e.value;
  }
  return b;
}

/// Σ_p B_p^* B_{p+r} summed term by term.
inline Matrix brute_gram(const odofock::Symbol& l, int r) {
  const Index d = l.coeff_dim();
  Matrix g = Matrix::Zero(d, d);
  for (int p = 0; p + r <= l.space().max_level(); ++p) {
    const Matrix bp = e1_block(l, p);
    const Matrix bq = e1_block(l, p + r);
    for (Index z = 0; z < d; ++z) {
      for (Index y = 0; y < d; ++y) {
        for (Index s = 0; s < d; ++s) g(z, y) += std::conj(bp(s, z)) * bq(s, y);
      }
    }
  }
  return g;
}

/// Number of basis vectors on levels < m.
inline Index basis_below(int n, int m, Index d) {
  Index c = 0;
  Index p = 1;
  for (int k = 0; k < m; ++k) {
    c += p;
    p *= n;
  }
  return c * d;
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

// ---- random generators -------------------------------------------------

using Rng = std::mt19937_64;

inline Complex gaussian(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

inline Matrix random_matrix(Rng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = gaussian(rng);
  }
  return m;
}

inline Matrix random_unitary(Rng& rng, Index d) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(rng, d, d));
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Random coefficients on a random subset of rows, levels ≤ max_degree
/// (all levels when negative).
inline odofock::Symbol random_symbol(Rng& rng, const odofock::FockSpace& space, double density = 0.5,
                                     int max_degree = -1) {
  std::bernoulli_distribution keep(density);
  std::vector<odofock::SymbolEntry> e;
  const Index rows = max_degree < 0 ? space.dim()
                                    : basis_below(space.alphabet(), max_degree + 1, space.coeff_dim());
  for (Index r = 0; r < rows; ++r) {
    for (int c = 0; c < space.coeff_dim(); ++c) {
      if (keep(rng)) e.push_back({r, c, gaussian(rng)});
    }
  }
  return odofock::Symbol(space, std::move(e));
}

/// L h_q = Ω ⊗ U h_q.
inline odofock::Symbol constant_unitary_symbol(Rng& rng, const odofock::FockSpace& space) {
  const Index d = space.coeff_dim();
  const Matrix u = random_unitary(rng, d);
  std::vector<odofock::SymbolEntry> e;
  for (Index s = 0; s < d; ++s) {
    for (Index q = 0; q < d; ++q) e.push_back({s, static_cast<int>(q), u(s, q)});
  }
  return odofock::Symbol(space, std::move(e));
}

/// L h_q = e_1^{⊗k_q} ⊗ U h_q with random k_q ≤ max_shift. Isometric: the
/// Gram sums vanish because distinct shifts hit orthogonal columns of U.
inline odofock::Symbol e1_diagonal_symbol(Rng& rng, const odofock::FockSpace& space, int max_shift) {
  const Index d = space.coeff_dim();
  const Matrix u = random_unitary(rng, d);
  const auto idx = index_map(space.alphabet(), space.max_level());
  std::vector<odofock::SymbolEntry> e;
  for (Index q = 0; q < d; ++q) {
    const int k = uniform_int(rng, 0, max_shift);
    const Index row0 = idx.at(Letters(static_cast<std::size_t>(k), 1)) * d;
    for (Index s = 0; s < d; ++s) e.push_back({row0 + s, static_cast<int>(q), u(s, q)});
  }
  return odofock::Symbol(space, std::move(e));
}

/// Golden-ratio coefficients in long double.
inline std::vector<long double> golden_coefficients(int terms) {
  const long double s5 = std::sqrt(5.0L);
  const long double c0 = std::sqrt(2.0L / (s5 + 3.0L));
  const long double w = (1.0L - s5) / 2.0L;
  std::vector<long double> c{c0};
  long double pw = 1.0L;
  for (int p = 1; p <= terms; ++p) {
    c.push_back(c0 * pw);
    pw *= w;
  }
  return c;
}

/// Φ^m(I) for Φ(X) = Σ T_i X T_i^*.
inline Matrix cp_power(const std::vector<Matrix>& t, int m) {
  const Index h = t.front().rows();
  Matrix x = Matrix::Identity(h, h);
  for (int k = 0; k < m; ++k) {
    Matrix y = Matrix::Zero(h, h);
    for (const Matrix& ti : t) y += ti * x * ti.adjoint();
    x = y;
  }
  return x;
}

}  // namespace oracle
