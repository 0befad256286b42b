#include "odofock/odometer.hpp"

#include <algorithm>
#include <cmath>

#include "odofock/classification.hpp"

namespace odofock {

namespace {

/// Word index of e_1^{⊗m} ⊗ e_ν: prefixing 1's keeps the within-level rank.
Index prefix_ones(const FockSpace& space, Index word_idx, int word_level, int m) {
  const Index rank = word_idx - space.level_offset(word_level);
  return space.level_offset(word_level + m) + rank;
}

bool is_e1_power(const FockSpace& space, Index word_idx) {
  return word_idx == space.level_offset(space.level_of(word_idx));
}

}  // namespace

Symbol::Symbol(FockSpace space, std::vector<SymbolEntry> entries) : space_(std::move(space)) {
  const Index dim = space_.dim();
  for (const auto& e : entries) {
    if (e.row < 0 || e.row >= dim) throw LevelOverflowError("symbol row index out of range");
    if (e.col < 0 || e.col >= space_.coeff_dim()) throw LevelOverflowError("symbol column out of range");
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) {
      throw InputError("symbol has non-finite coefficient");
    }
  }
  std::sort(entries.begin(), entries.end(), [](const SymbolEntry& a, const SymbolEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  for (const auto& e : entries) {
    if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
      entries_.back().value += e.value;
    } else {
      entries_.push_back(e);
    }
  }
  std::erase_if(entries_, [](const SymbolEntry& e) { return e.value == Complex(0.0, 0.0); });
  for (const auto& e : entries_) {
    support_degree_ = std::max(support_degree_, space_.level_of(e.row / space_.coeff_dim()));
  }
}

Symbol Symbol::from_dense(FockSpace space, const Matrix& columns, double chop) {
  if (columns.rows() != space.dim() || columns.cols() != space.coeff_dim()) {
    throw DimensionError("dense symbol must be D×d");
  }
  std::vector<SymbolEntry> entries;
  for (Index r = 0; r < columns.rows(); ++r) {
    for (Index q = 0; q < columns.cols(); ++q) {
      if (std::abs(columns(r, q)) > chop) entries.push_back({r, static_cast<int>(q), columns(r, q)});
    }
  }
  return Symbol(std::move(space), std::move(entries));
}

Matrix Symbol::dense() const {
  space_.require_dense();
  Matrix out = Matrix::Zero(space_.dim(), space_.coeff_dim());
  for (const auto& e : entries_) out(e.row, e.col) = e.value;
  return out;
}

Matrix Symbol::block(const Word& w) const {
  const int d = space_.coeff_dim();
  Matrix out = Matrix::Zero(d, d);
  if (w.length() > space_.max_level()) return out;
  const Index base = space_.word_index(w) * d;
  for (const auto& e : entries_) {
    if (e.row >= base && e.row < base + d) out(e.row - base, e.col) = e.value;
  }
  return out;
}

std::vector<Matrix> Symbol::e1_blocks(int levels) const {
  const int d = space_.coeff_dim();
  std::vector<Matrix> out(static_cast<std::size_t>(levels) + 1, Matrix::Zero(d, d));
  for (const auto& e : entries_) {
    const Index w = e.row / d;
    const int level = space_.level_of(w);
    if (level <= levels && w == space_.level_offset(level)) {
      out[static_cast<std::size_t>(level)](e.row % d, e.col) = e.value;
    }
  }
  return out;
}

double Symbol::off_e1_norm() const {
  double sq = 0.0;
  for (const auto& e : entries_) {
    if (!is_e1_power(space_, e.row / space_.coeff_dim())) sq += std::norm(e.value);
  }
  return std::sqrt(sq);
}

double Symbol::above_vacuum_norm() const {
  double sq = 0.0;
  for (const auto& e : entries_) {
    if (e.row >= space_.coeff_dim()) sq += std::norm(e.value);
  }
  return std::sqrt(sq);
}

Symbol Symbol::embed(int max_level) const {
  if (max_level < space_.max_level()) throw WindowError("embed cannot shrink a symbol's truncation");
  FockSpace target(space_.alphabet(), max_level, space_.coeff_dim());
  // Level-major order makes the canonical index of a word independent of M.
  return Symbol(target, entries_);
}

CarryResult carry_successor(const Word& w) {
  if (w.empty()) throw InputError("carry_successor needs a nonempty word");
  const int n = w.alphabet();
  std::vector<int> letters = w.letters();
  for (auto& l : letters) {
    if (l != n) {
      ++l;
      return Word(n, std::move(letters));
    }
    l = 1;
  }
  return Overflow{w.length()};
}

std::optional<Word> carry_predecessor(const Word& w) {
  const int n = w.alphabet();
  std::vector<int> letters = w.letters();
  for (auto& l : letters) {
    if (l != 1) {
      --l;
      return Word(n, std::move(letters));
    }
    l = n;
  }
  return std::nullopt;
}

OdometerMap build_odometer(const Symbol& symbol) {
  const FockSpace& space = symbol.space();
  space.require_dense();
  const int big_m = space.max_level();
  const Index d = space.coeff_dim();
  Matrix w = Matrix::Zero(space.dim(), space.dim());

  // Ω ⊗ h_p ↦ L h_p.
  for (const auto& e : symbol.entries()) w(e.row, e.col) = e.value;

  for (Index wi = 1; wi < space.word_count(); ++wi) {
    const Word mu = space.word_at(wi);
    const CarryResult next = carry_successor(mu);
    if (const auto* succ = std::get_if<Word>(&next)) {
      const Index target = space.word_index(*succ);
      for (Index p = 0; p < d; ++p) w(target * d + p, wi * d + p) = 1.0;
      continue;
    }
    // n^{⊗m} ⊗ h_q ↦ e_1^{⊗m} ⊗ L h_q, truncated at level M.
    const int m = std::get<Overflow>(next).level;
    for (const auto& e : symbol.entries()) {
      const Index src_word = e.row / d;
      const int level = space.level_of(src_word);
      if (level + m > big_m) continue;
      const Index target = prefix_ones(space, src_word, level, m);
      w(target * d + e.row % d, wi * d + e.col) = e.value;
    }
  }
  const int window = big_m - symbol.support_degree() + 1;
  return OdometerMap{symbol, Operator(space, std::move(w), window)};
}

SparseImage apply_odometer(const Symbol& symbol, const Word& w, int p) {
  const FockSpace& space = symbol.space();
  const int d = space.coeff_dim();
  const int n = space.alphabet();
  if (p < 0 || p >= d) throw LevelOverflowError("coefficient index out of range");
  if (w.alphabet() != n) throw DimensionError("word alphabet does not match the symbol");
  SparseImage out;
  int overflow_level = 0;
  if (!w.empty()) {
    const CarryResult next = carry_successor(w);
    if (const auto* succ = std::get_if<Word>(&next)) {
      out[{*succ, p}] = 1.0;
      return out;
    }
    overflow_level = std::get<Overflow>(next).level;
  }
  const Word prefix = Word::power(n, 1, overflow_level);
  for (const auto& e : symbol.entries()) {
    if (e.col != p) continue;
    out[{prefix.concat(space.word_at(e.row / d)), static_cast<int>(e.row % d)}] += e.value;
  }
  return out;
}

RepresentationVerdict verify_fock_representation(const Operator& w, double tol) {
  const FockSpace& space = w.space;
  space.require_dense();
  const int n = space.alphabet();
  const Index d = space.coeff_dim();
  const int big_m = space.max_level();

  RepresentationVerdict verdict;
  // Creation operators raise the level by one, so the relations survive
  // compression to the truncation on every column below level M.
  verdict.checked_levels = big_m;
  const Index window_words = space.level_offset(big_m);
  const Index cols = window_words * d;

  for (int k = 1; k <= n; ++k) {
    Matrix lhs(space.dim(), cols);
    Matrix rhs = Matrix::Zero(space.dim(), cols);
    for (Index wi = 0; wi < window_words; ++wi) {
      const Index shifted = space.creation_target(k, wi);
      lhs.middleCols(wi * d, d) = w.matrix.middleCols(shifted * d, d);
      if (k < n) {
        const Index next = space.creation_target(k + 1, wi);
        for (Index p = 0; p < d; ++p) rhs(next * d + p, wi * d + p) = 1.0;
      }
    }
    if (k == n) rhs = apply_creation(1, space, w.matrix.leftCols(cols));
    verdict.relation_residuals.push_back((lhs - rhs).norm());
  }
  verdict.max_residual = verdict.relation_residuals.empty()
                             ? 0.0
                             : *std::max_element(verdict.relation_residuals.begin(),
                                                 verdict.relation_residuals.end());
  verdict.pass = verdict.max_residual <= tol;
  if (verdict.pass) verdict.symbol = Symbol::from_dense(space, w.matrix.leftCols(d));
  return verdict;
}

SparseImage apply_adjoint_isometric(const std::vector<Matrix>& blocks, const Word& f, int l) {
  const int n = f.alphabet();
  SparseImage out;
  int m = 0;
  while (m < f.length() && f[m] == 1) ++m;
  if (m < f.length()) {
    // e_1^{⊗m} ⊗ e_{μ1} ⊗ … with μ1 > 1 ↦ e_n^{⊗m} ⊗ e_{μ1-1} ⊗ …
    std::vector<int> letters = f.letters();
    for (int j = 0; j < m; ++j) letters[static_cast<std::size_t>(j)] = n;
    letters[static_cast<std::size_t>(m)] -= 1;
    out[{Word(n, std::move(letters)), l}] = 1.0;
    return out;
  }
  // e_1^{⊗m} ⊗ h_l ↦ Σ_{p ≤ m} Σ_q conj(c^{h_q}_{m-p, l}) e_n^{⊗p} ⊗ h_q
  for (int p = 0; p <= m; ++p) {
    const auto r = static_cast<std::size_t>(m - p);
    if (r >= blocks.size()) continue;
    const Matrix& c = blocks[r];
    for (Index q = 0; q < c.cols(); ++q) {
      if (c(l, q) != Complex(0.0, 0.0)) out[{Word::power(n, n, p), static_cast<int>(q)}] = std::conj(c(l, q));
    }
  }
  return out;
}

Operator adjoint_isometric(const OdometerMap& w, double tol) {
  const Symbol& symbol = w.symbol;
  const FockSpace& space = symbol.space();
  if (symbol.off_e1_norm() > kE1SupportTol) {
    throw PreconditionError(
        "adjoint_isometric: symbol is not e_1-supported; the adjoint of a general odometer "
        "map has no known closed form (use truncated_adjoint)");
  }
  if (!check_isometric(symbol, tol, {.cross_check = false}).is_isometric) {
    throw PreconditionError(
        "adjoint_isometric: W_L is not an isometry; the adjoint of a general odometer map has "
        "no known closed form (use truncated_adjoint)");
  }
  space.require_dense();
  const Index d = space.coeff_dim();
  const std::vector<Matrix> blocks = symbol.e1_blocks(space.max_level());
  Matrix adj = Matrix::Zero(space.dim(), space.dim());
  for (Index wi = 0; wi < space.word_count(); ++wi) {
    const Word f = space.word_at(wi);
    for (int l = 0; l < d; ++l) {
      for (const auto& [key, value] : apply_adjoint_isometric(blocks, f, l)) {
        adj(space.basis_index(key.first, key.second), wi * d + l) = value;
      }
    }
  }
  return Operator(space, std::move(adj), space.max_level() + 1);
}

Operator truncated_adjoint(const OdometerMap& w) {
  return Operator(w.op.space, w.op.matrix.adjoint(), w.op.space.max_level() + 1);
}

NormBounds norm_bounds(const OdometerMap& w) {
  NormBounds out;
  out.symbol_norm = op_norm(w.symbol.dense());
  out.map_norm = op_norm(w.op);
  const double slack = 1e-12 * std::max(1.0, out.map_norm);
  // Ω ⊗ E columns are never truncated, so the lower bound is exact; the
  // truncation can only underestimate ‖W_L‖, which keeps the upper bound valid.
  out.lower_holds = out.symbol_norm <= out.map_norm + slack;
  out.upper_holds = out.map_norm <= 1.0 + out.symbol_norm + slack;
  return out;
}

}  // namespace odofock
