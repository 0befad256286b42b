#include "odofock/fock.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace odofock {

Word::Word(int alphabet, std::vector<int> letters)
    : alphabet_(alphabet), letters_(std::move(letters)) {
  if (alphabet_ < 1) throw InputError("alphabet size must be at least 1");
  for (int l : letters_) {
    if (l < 1 || l > alphabet_) {
      throw InputError("letter " + std::to_string(l) + " outside [1, " +
                       std::to_string(alphabet_) + "]");
    }
  }
}

Word Word::power(int alphabet, int letter, int count) {
  return Word(alphabet, std::vector<int>(static_cast<std::size_t>(count), letter));
}

Word Word::prepend(int letter) const {
  std::vector<int> out;
  out.reserve(letters_.size() + 1);
  out.push_back(letter);
  out.insert(out.end(), letters_.begin(), letters_.end());
  return Word(alphabet_, std::move(out));
}

Word Word::concat(const Word& tail) const {
  if (tail.alphabet_ != alphabet_) throw DimensionError("alphabet mismatch in concat");
  std::vector<int> out = letters_;
  out.insert(out.end(), tail.letters_.begin(), tail.letters_.end());
  return Word(alphabet_, std::move(out));
}

bool Word::is_power_of(int letter) const noexcept {
  for (int l : letters_) {
    if (l != letter) return false;
  }
  return true;
}

std::string Word::to_string() const {
  if (letters_.empty()) return "()";
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < letters_.size(); ++i) {
    if (i) os << ',';
    os << letters_[i];
  }
  os << ')';
  return os.str();
}

std::vector<Word> enumerate_words(int n, int max_level) {
  if (n < 1 || max_level < 0) throw InputError("enumerate_words needs n >= 1, M >= 0");
  std::vector<Word> out{Word::vacuum(n)};
  std::size_t level_begin = 0;
  for (int m = 1; m <= max_level; ++m) {
    const std::size_t level_end = out.size();
    // Appending the last letter keeps base-n numeric order within a level.
    for (std::size_t k = level_begin; k < level_end; ++k) {
      for (int i = 1; i <= n; ++i) {
        std::vector<int> letters = out[k].letters();
        letters.push_back(i);
        out.emplace_back(n, std::move(letters));
      }
    }
    level_begin = level_end;
  }
  return out;
}

FockSpace::FockSpace(int n, int max_level, int coeff_dim)
    : n_(n), max_level_(max_level), d_(coeff_dim) {
  if (n < 1) throw InputError("alphabet size must be at least 1");
  if (max_level < 0) throw InputError("max level must be non-negative");
  if (coeff_dim < 1) throw InputError("coefficient dimension must be at least 1");
  constexpr Index kMax = std::numeric_limits<Index>::max();
  offsets_.reserve(static_cast<std::size_t>(max_level) + 2);
  offsets_.push_back(0);
  Index level_size = 1;
  for (int m = 0; m <= max_level; ++m) {
    if (offsets_.back() > kMax - level_size) throw DimensionError("Fock space too large to index");
    offsets_.push_back(offsets_.back() + level_size);
    if (m < max_level) {
      if (level_size > kMax / n) throw DimensionError("Fock space too large to index");
      level_size *= n;
    }
  }
  if (offsets_.back() > kMax / d_) throw DimensionError("Fock space too large to index");
}

Index FockSpace::word_index(const Word& w) const {
  if (w.alphabet() != n_) throw DimensionError("word alphabet does not match the space");
  if (w.length() > max_level_) {
    throw LevelOverflowError("word " + w.to_string() + " longer than truncation level " +
                             std::to_string(max_level_));
  }
  Index rank = 0;
  for (int l : w.letters()) rank = rank * n_ + (l - 1);
  return level_offset(w.length()) + rank;
}

int FockSpace::level_of(Index word_idx) const {
  if (word_idx < 0 || word_idx >= word_count()) throw LevelOverflowError("word index out of range");
  int m = 0;
  while (offsets_[static_cast<std::size_t>(m) + 1] <= word_idx) ++m;
  return m;
}

Word FockSpace::word_at(Index word_idx) const {
  const int m = level_of(word_idx);
  Index rank = word_idx - level_offset(m);
  std::vector<int> letters(static_cast<std::size_t>(m));
  for (int j = m - 1; j >= 0; --j) {
    letters[static_cast<std::size_t>(j)] = static_cast<int>(rank % n_) + 1;
    rank /= n_;
  }
  return Word(n_, std::move(letters));
}

Index FockSpace::creation_target(int letter, Index word_idx) const {
  const int m = level_of(word_idx);
  if (m >= max_level_) return -1;
  const Index rank = word_idx - level_offset(m);
  return level_offset(m + 1) + static_cast<Index>(letter - 1) * level_size(m) + rank;
}

std::vector<Index> FockSpace::level_range(int lo, int hi) const {
  std::vector<Index> out;
  if (lo < 0) lo = 0;
  if (hi > max_level_) hi = max_level_;
  if (lo > hi) return out;
  for (Index i = level_offset(lo) * d_; i < level_offset(hi + 1) * d_; ++i) out.push_back(i);
  return out;
}

void FockSpace::require_dense() const {
  if (!dense_ok()) {
    throw DimensionError("space of dimension " + std::to_string(dim()) +
                         " exceeds the dense limit " + std::to_string(kMaxDenseDim));
  }
}

Index word_index(const Word& w, const FockSpace& space) { return space.word_index(w); }

Operator::Operator(FockSpace sp, Matrix m, int window)
    : space(std::move(sp)), matrix(std::move(m)), exact_below(window) {
  if (matrix.rows() != space.dim() || matrix.cols() != space.dim()) {
    throw DimensionError("operator matrix does not match its space");
  }
  if (exact_below > space.max_level() + 1) throw WindowError("exact_below exceeds M+1");
  if (!all_finite(matrix)) throw InputError("operator has non-finite entries");
}

Matrix apply_creation(int letter, const FockSpace& space, const Matrix& x) {
  if (letter < 1 || letter > space.alphabet()) throw InputError("creation letter out of range");
  if (x.rows() != space.dim()) throw DimensionError("apply_creation: row count mismatch");
  const Index d = space.coeff_dim();
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  const Index below_top = space.level_offset(space.max_level());
  for (Index w = 0; w < below_top; ++w) {
    const Index t = space.creation_target(letter, w);
    out.middleRows(t * d, d) = x.middleRows(w * d, d);
  }
  return out;
}

Matrix apply_creation_adjoint(int letter, const FockSpace& space, const Matrix& x) {
  if (letter < 1 || letter > space.alphabet()) throw InputError("creation letter out of range");
  if (x.rows() != space.dim()) throw DimensionError("apply_creation_adjoint: row count mismatch");
  const Index d = space.coeff_dim();
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  const Index below_top = space.level_offset(space.max_level());
  for (Index w = 0; w < below_top; ++w) {
    const Index t = space.creation_target(letter, w);
    out.middleRows(w * d, d) = x.middleRows(t * d, d);
  }
  return out;
}

Operator creation_operator(int letter, const FockSpace& space) {
  space.require_dense();
  const Matrix id = Matrix::Identity(space.dim(), space.dim());
  return Operator(space, apply_creation(letter, space, id), space.max_level());
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

double op_norm(const Operator& a) { return op_norm(a.matrix); }

Matrix orthonormal_basis(const Matrix& columns, double tol) {
  if (tol <= 0) throw InputError("rank tolerance must be positive");
  if (columns.cols() == 0 || columns.rows() == 0) return Matrix(columns.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(columns, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  return svd.matrixU().leftCols(rank);
}

Matrix orthonormal_complement(const Matrix& columns, const Matrix& within, double tol) {
  if (tol <= 0) throw InputError("rank tolerance must be positive");
  if (columns.cols() > 0 && columns.rows() != within.rows()) {
    throw DimensionError("orthonormal_complement: column sets live in different spaces");
  }
  const Matrix qa = orthonormal_basis(within, tol);
  if (columns.cols() == 0 || qa.cols() == 0) return qa;
  const Matrix qb = orthonormal_basis(columns, tol);
  if (qb.cols() == 0) return qa;
  // Null space of the cosine matrix between the two bases.
  const Matrix cosines = qb.adjoint() * qa;
  Eigen::BDCSVD<Matrix> svd(cosines, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  return qa * svd.matrixV().rightCols(qa.cols() - rank);
}

bool all_finite(const Matrix& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = 0; i < m.rows(); ++i) {
      const Complex z = m(i, j);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

}  // namespace odofock
