#pragma once

// Words of the free semigroup, truncated vector-valued Fock spaces and the
// dense complex-matrix operators every other module is built on.

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "odofock/errors.hpp"

namespace odofock {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = std::int64_t;

/// Tolerance used when neither the caller nor ODOFOCK_TOL provides one.
inline constexpr double kDefaultTol = 1e-10;

/// Largest dimension for which dense matrices are materialized.
inline constexpr Index kMaxDenseDim = 12000;

/// Element of the free semigroup on letters 1..n. The empty word is the
/// vacuum label.
class Word {
public:
  Word() = default;
  explicit Word(int alphabet, std::vector<int> letters = {});

  static Word vacuum(int alphabet) { return Word(alphabet); }
  /// letter^{⊗count}
  static Word power(int alphabet, int letter, int count);

  int alphabet() const noexcept { return alphabet_; }
  int length() const noexcept { return static_cast<int>(letters_.size()); }
  bool empty() const noexcept { return letters_.empty(); }
  const std::vector<int>& letters() const noexcept { return letters_; }
  int operator[](int i) const { return letters_.at(static_cast<std::size_t>(i)); }

  Word prepend(int letter) const;
  Word concat(const Word& tail) const;
  /// True when every letter equals `letter` (vacuously for the empty word).
  bool is_power_of(int letter) const noexcept;

  std::string to_string() const;

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

private:
  int alphabet_ = 1;
  std::vector<int> letters_;
};

/// All words of length 0..max_level, level-major then base-n numeric order.
std::vector<Word> enumerate_words(int n, int max_level);

/// F(n, M) ⊗ C^d with basis e_μ ⊗ h_p at index word_index(μ)·d + p.
class FockSpace {
public:
  FockSpace(int n, int max_level, int coeff_dim);

  int alphabet() const noexcept { return n_; }
  int max_level() const noexcept { return max_level_; }
  int coeff_dim() const noexcept { return d_; }

  Index word_count() const noexcept { return offsets_.back(); }
  Index dim() const noexcept { return word_count() * d_; }
  /// Number of words of length < m, for 0 ≤ m ≤ M+1.
  Index level_offset(int m) const { return offsets_.at(static_cast<std::size_t>(m)); }
  Index level_size(int m) const { return level_offset(m + 1) - level_offset(m); }

  Index word_index(const Word& w) const;
  Word word_at(Index word_idx) const;
  int level_of(Index word_idx) const;
  Index basis_index(const Word& w, int p) const { return word_index(w) * d_ + p; }

  /// Word index of letter·μ, or -1 when it would exceed the truncation.
  Index creation_target(int letter, Index word_idx) const;

  /// Basis indices (word_index·d + p) of every vector at levels [lo, hi].
  std::vector<Index> level_range(int lo, int hi) const;

  bool dense_ok() const noexcept { return dim() <= kMaxDenseDim; }
  void require_dense() const;

  friend bool operator==(const FockSpace& a, const FockSpace& b) {
    return a.n_ == b.n_ && a.max_level_ == b.max_level_ && a.d_ == b.d_;
  }

private:
  int n_;
  int max_level_;
  int d_;
  std::vector<Index> offsets_;  // size M+2
};

Index word_index(const Word& w, const FockSpace& space);

/// Dense operator on a truncated space. Columns of level < exact_below carry
/// no truncation error.
struct Operator {
  Operator(FockSpace space, Matrix matrix, int exact_below);

  FockSpace space;
  Matrix matrix;
  int exact_below;
};

/// S_i ⊗ I_E on the truncation; level-M columns are annihilated.
Operator creation_operator(int letter, const FockSpace& space);

/// (S_i ⊗ I) applied to the columns of x, truncated at level M.
Matrix apply_creation(int letter, const FockSpace& space, const Matrix& x);
/// (S_i ⊗ I)^* applied to the columns of x.
Matrix apply_creation_adjoint(int letter, const FockSpace& space, const Matrix& x);

/// Largest singular value.
double op_norm(const Matrix& a);
double op_norm(const Operator& a);

/// Orthonormal basis of span(columns), rank decided by singular values > tol.
Matrix orthonormal_basis(const Matrix& columns, double tol);

/// Orthonormal basis of span(within) ∩ span(columns)^⊥.
Matrix orthonormal_complement(const Matrix& columns, const Matrix& within, double tol);

bool all_finite(const Matrix& m);

}  // namespace odofock
