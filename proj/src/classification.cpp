#include "odofock/classification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace odofock {

namespace {

constexpr Index kCrossCheckWords = 4096;

/// Largest level ≤ k whose word count stays under the cross-check budget.
int capped_level(int n, int k) {
  Index count = 1;
  Index size = 1;
  int level = 0;
  while (level < k) {
    size *= n;
    if (count + size > kCrossCheckWords) break;
    count += size;
    ++level;
  }
  return level;
}

int active_count(const Symbol& l, const ClassifyOptions& opts) {
  const int d = l.coeff_dim();
  if (opts.active_columns < 0) return d;
  if (opts.active_columns < 1 || opts.active_columns > d) {
    throw InputError("active column count must lie in [1, d]");
  }
  return opts.active_columns;
}

/// (L^*L)(q, q') from the sparse coefficients.
Matrix symbol_gram(const Symbol& l) {
  const int d = l.coeff_dim();
  Matrix g = Matrix::Zero(d, d);
  const auto& e = l.entries();
  std::size_t i = 0;
  while (i < e.size()) {
    std::size_t j = i;
    while (j < e.size() && e[j].row == e[i].row) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = i; b < j; ++b) g(e[a].col, e[b].col) += std::conj(e[a].value) * e[b].value;
    }
    i = j;
  }
  return g;
}

/// ‖a - b‖² for sparse vectors.
double diff_sq(const SparseImage& a, const SparseImage& b) {
  double sq = 0.0;
  for (const auto& [key, v] : a) {
    const auto it = b.find(key);
    sq += std::norm(it == b.end() ? v : v - it->second);
  }
  for (const auto& [key, v] : b) {
    if (!a.contains(key)) sq += std::norm(v);
  }
  return sq;
}

SparseImage strip_first(const SparseImage& a, int letter) {
  SparseImage out;
  for (const auto& [key, v] : a) {
    const Word& w = key.first;
    if (w.empty() || w[0] != letter) continue;
    std::vector<int> rest(w.letters().begin() + 1, w.letters().end());
    out[{Word(w.alphabet(), std::move(rest)), key.second}] += v;
  }
  return out;
}

SparseImage prepend_all(const SparseImage& a, int letter) {
  SparseImage out;
  for (const auto& [key, v] : a) out[{key.first.prepend(letter), key.second}] += v;
  return out;
}

/// W^*(S_1⊗I) - (S_n⊗I)W^* on columns of level ≤ k, by the closed-form adjoint.
double nica_relation_adjoint(const Symbol& l, int k, int active) {
  const int n = l.space().alphabet();
  const std::vector<Matrix> blocks = l.e1_blocks(l.support_degree());
  double sq = 0.0;
  for (const Word& mu : enumerate_words(n, k)) {
    for (int p = 0; p < active; ++p) {
      const SparseImage lhs = apply_adjoint_isometric(blocks, mu.prepend(1), p);
      const SparseImage rhs = prepend_all(apply_adjoint_isometric(blocks, mu, p), n);
      sq += diff_sq(lhs, rhs);
    }
  }
  return std::sqrt(sq);
}

/// (S_1⊗I)^* W - W (S_n⊗I)^*: the adjoint-free form, usable when only some
/// columns are isometric.
double nica_relation_direct(const Symbol& l, int k, int active) {
  const int n = l.space().alphabet();
  double sq = 0.0;
  for (const Word& mu : enumerate_words(n, k)) {
    for (int p = 0; p < active; ++p) {
      const SparseImage lhs = strip_first(apply_odometer(l, mu, p), 1);
      SparseImage rhs;
      if (!mu.empty() && mu[0] == n) {
        rhs = apply_odometer(l, Word(n, std::vector<int>(mu.letters().begin() + 1, mu.letters().end())), p);
      }
      sq += diff_sq(lhs, rhs);
    }
  }
  return std::sqrt(sq);
}

/// Level blocks of W_L restricted to active columns: Gram defect inside each
/// level plus all mass that leaves the level.
double level_block_residual(const Symbol& l, int k, int active) {
  const int n = l.space().alphabet();
  const std::vector<Word> words = enumerate_words(n, k);
  double sq = 0.0;
  std::size_t begin = 0;
  for (int m = 0; m <= k; ++m) {
    std::size_t end = begin;
    while (end < words.size() && words[end].length() == m) ++end;
    std::map<std::pair<Word, int>, std::vector<std::pair<Index, Complex>>> rows;
    Index col = 0;
    for (std::size_t w = begin; w < end; ++w) {
      for (int p = 0; p < active; ++p, ++col) {
        for (const auto& [key, v] : apply_odometer(l, words[w], p)) {
          if (key.first.length() != m) {
            sq += std::norm(v);
          } else {
            rows[key].emplace_back(col, v);
          }
        }
      }
    }
    Matrix g = Matrix::Identity(col, col) * Complex(-1.0, 0.0);
    for (const auto& [key, list] : rows) {
      for (const auto& [a, va] : list) {
        for (const auto& [b, vb] : list) g(a, b) += std::conj(va) * vb;
      }
    }
    sq += g.squaredNorm();
    begin = end;
  }
  return std::sqrt(sq);
}

}  // namespace

Symbol restrict_columns(const Symbol& l, int k) {
  if (k < 0 || k > l.coeff_dim()) throw InputError("column count out of range");
  std::vector<SymbolEntry> kept;
  for (const auto& e : l.entries()) {
    if (e.col < k) kept.push_back(e);
  }
  return Symbol(l.space(), std::move(kept));
}

Matrix compute_E_L(const Symbol& l, int levels, double tol) {
  if (levels < 0) throw InputError("compute_E_L needs levels >= 0");
  const Index d = l.coeff_dim();
  const int sd = l.support_degree();
  const std::vector<Matrix> blocks = l.e1_blocks(levels);
  const Index rows = (levels + 1) * d;
  // Only the e_1-diagonal part of e_1^{⊗p} ⊗ Lζ meets the first span.
  const int shifts = std::max(0, levels - sd);
  Matrix shifted = Matrix::Zero(rows, shifts * d);
  for (int p = 1; p <= shifts; ++p) {
    for (int r = 0; r + p <= levels; ++r) {
      shifted.block((r + p) * d, (p - 1) * d, d, d) = blocks[static_cast<std::size_t>(r)];
    }
  }
  return orthonormal_complement(shifted, Matrix::Identity(rows, rows), tol);
}

Matrix compute_E_L(const Symbol& l, double tol) { return compute_E_L(l, l.space().max_level(), tol); }

std::vector<Matrix> gram_sums(const Symbol& l) {
  const int sd = l.support_degree();
  const std::vector<Matrix> b = l.e1_blocks(sd);
  std::vector<Matrix> out;
  for (int r = 1; r <= sd; ++r) {
    Matrix g = Matrix::Zero(l.coeff_dim(), l.coeff_dim());
    for (int p = 0; p + r <= sd; ++p) {
      g += b[static_cast<std::size_t>(p)].adjoint() * b[static_cast<std::size_t>(p + r)];
    }
    out.push_back(std::move(g));
  }
  return out;
}

double column_gram_defect(const Symbol& l, int window, int active_columns) {
  const int n = l.space().alphabet();
  const int d = l.coeff_dim();
  const int k = active_columns < 0 ? d : active_columns;
  if (window < 0) return 0.0;

  std::vector<SparseImage> images;
  for (int m = 0; m <= window; ++m) {
    for (int q = 0; q < k; ++q) images.push_back(apply_odometer(l, Word::power(n, n, m), q));
  }
  const auto cols = static_cast<Index>(images.size());
  Matrix g = Matrix::Identity(cols, cols) * Complex(-1.0, 0.0);
  for (Index a = 0; a < cols; ++a) {
    for (Index b = 0; b < cols; ++b) {
      for (const auto& [key, va] : images[static_cast<std::size_t>(a)]) {
        const auto it = images[static_cast<std::size_t>(b)].find(key);
        if (it != images[static_cast<std::size_t>(b)].end()) g(a, b) += std::conj(va) * it->second;
      }
    }
  }
  double sq = g.squaredNorm();

  // A carry column e_ν ⊗ h_s meets an overflow image only at e_{succ(ν)} ⊗ h_s.
  for (const auto& img : images) {
    for (const auto& [key, v] : img) {
      if (key.first.length() > window || key.second >= k) continue;
      if (carry_predecessor(key.first)) sq += 2.0 * std::norm(v);
    }
  }
  return std::sqrt(sq);
}

IsometryReport check_isometric(const Symbol& l, double tol, ClassifyOptions opts) {
  const int d = l.coeff_dim();
  const int k = active_count(l, opts);
  const Symbol a = k < d ? restrict_columns(l, k) : l;
  const FockSpace& space = a.space();
  const int sd = a.support_degree();
  IsometryReport r;

  r.isometry_residual = (symbol_gram(a).topLeftCorner(k, k) - Matrix::Identity(k, k)).norm();
  r.e1_support_residual = a.off_e1_norm();
  for (const Matrix& g : gram_sums(a)) r.gram_residual = std::max(r.gram_residual, g.cwiseAbs().maxCoeff());

  const int levels = space.max_level();
  const Matrix el = compute_E_L(a, levels, tol);
  const std::vector<Matrix> blocks = a.e1_blocks(levels);
  Matrix coords(static_cast<Index>(levels + 1) * d, k);
  for (int m = 0; m <= levels; ++m) coords.middleRows(m * d, d) = blocks[static_cast<std::size_t>(m)].leftCols(k);
  r.el_residual = (coords - el * (el.adjoint() * coords)).norm();

  r.window = opts.window >= 0 ? opts.window : std::max(0, space.max_level() - sd);
  bool cross_ok = true;
  if (opts.cross_check) {
    r.cross_checked = true;
    r.column_residual = column_gram_defect(a, r.window, k);
    const int exact = std::min(r.window, space.max_level() - sd);
    if (space.dense_ok() && exact >= 0) {
      r.random_checked = true;
      const OdometerMap w = build_odometer(a);
      const Index rows = space.level_offset(exact + 1);
      std::mt19937_64 rng(opts.seed);
      std::normal_distribution<double> gauss;
      for (int t = 0; t < 50; ++t) {
        Vector v = Vector::Zero(space.dim());
        for (Index wi = 0; wi < rows; ++wi) {
          for (int p = 0; p < k; ++p) v(wi * d + p) = Complex(gauss(rng), gauss(rng));
        }
        v.normalize();
        r.random_vector_residual = std::max(r.random_vector_residual, std::abs((w.op.matrix * v).norm() - 1.0));
      }
    }
    cross_ok = r.column_residual <= tol && r.random_vector_residual <= tol;
  }
  r.is_isometric = r.isometry_residual <= tol && r.e1_support_residual <= tol &&
                   r.gram_residual <= tol && cross_ok;
  return r;
}

NicaReport check_nica(const Symbol& l, double tol, ClassifyOptions opts) {
  const int d = l.coeff_dim();
  const int k = active_count(l, opts);
  if (!check_isometric(l, tol, opts).is_isometric) {
    throw PreconditionError("check_nica: the symbol is not isometric on its active columns");
  }
  const Symbol a = k < d ? restrict_columns(l, k) : l;
  const FockSpace& space = a.space();
  NicaReport r;
  r.nica_residual = a.above_vacuum_norm();
  r.is_nica = r.nica_residual <= tol;
  if (opts.cross_check) {
    const int want = opts.window >= 0 ? opts.window : std::max(0, space.max_level() - 1);
    r.window = capped_level(space.alphabet(), want);
    r.relation_residual = k < d ? nica_relation_direct(a, r.window, k)
                                : nica_relation_adjoint(a, r.window, k);
    r.relation_holds = r.relation_residual <= tol;
  }
  return r;
}

UnitaryReport check_unitary(const Symbol& l, double tol, ClassifyOptions opts) {
  const int d = l.coeff_dim();
  const int k = active_count(l, opts);
  if (!check_isometric(l, tol, opts).is_isometric) {
    throw PreconditionError("check_unitary: the symbol is not isometric on its active columns");
  }
  const Symbol a = k < d ? restrict_columns(l, k) : l;
  const FockSpace& space = a.space();
  UnitaryReport r;
  r.is_constant = a.above_vacuum_norm() <= tol;
  const Matrix b0 = a.block(Word::vacuum(space.alphabet()));
  Eigen::BDCSVD<Matrix> svd(b0);
  const auto& s = svd.singularValues();
  Index rank = 0;
  while (rank < s.size() && s(rank) > tol) ++rank;
  r.surjectivity_defect = static_cast<double>(d - rank);
  const Matrix id = Matrix::Identity(d, d);
  r.level0_residual = std::max((b0.adjoint() * b0 - id).norm(), (b0 * b0.adjoint() - id).norm());
  r.is_unitary = r.is_constant && r.level0_residual <= tol;
  if (opts.cross_check) {
    const int want = opts.window >= 0 ? opts.window : std::max(0, space.max_level() - a.support_degree());
    r.window = capped_level(space.alphabet(), want);
    r.block_residual = level_block_residual(a, r.window, k);
    r.blocks_unitary = r.block_residual <= tol && k == d;
  }
  return r;
}

ClassificationReport classify(const Symbol& l, double tol, ClassifyOptions opts) {
  ClassificationReport out;
  out.tol = tol;
  const int k = active_count(l, opts);
  const Symbol a = k < l.coeff_dim() ? restrict_columns(l, k) : l;
  const IsometryReport iso = check_isometric(l, tol, opts);
  out.is_isometric = iso.is_isometric;
  out.window = iso.window;
  out.residuals["isometry_residual"] = iso.isometry_residual;
  out.residuals["e1_support_residual"] = iso.e1_support_residual;
  out.residuals["gram_residual"] = iso.gram_residual;
  out.residuals["el_residual"] = iso.el_residual;
  if (iso.cross_checked) {
    out.residuals["column_residual"] = iso.column_residual;
    if (iso.random_checked) out.residuals["random_vector_residual"] = iso.random_vector_residual;
  }
  out.residuals["nica_residual"] = a.above_vacuum_norm();
  out.is_constant_symbol = a.above_vacuum_norm() <= tol;
  if (!iso.is_isometric) return out;

  const NicaReport nica = check_nica(l, tol, opts);
  const UnitaryReport unitary = check_unitary(l, tol, opts);
  out.is_nica = nica.is_nica;
  out.is_unitary = unitary.is_unitary;
  out.nica_relation = nica.relation_holds;
  out.blocks_unitary = unitary.blocks_unitary;
  out.residuals["surjectivity_defect"] = unitary.surjectivity_defect;
  out.residuals["level0_residual"] = unitary.level0_residual;
  if (opts.cross_check) {
    out.residuals["nica_relation_residual"] = nica.relation_residual;
    out.residuals["block_residual"] = unitary.block_residual;
  }
  return out;
}

}  // namespace odofock
