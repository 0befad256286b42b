#pragma once

// Odometer maps W_L built from a symbol L: E -> F(n,M) ⊗ E, the base-n carry
// action on basis words, the closed-form adjoint of isometric odometer maps and
// the norm sandwich ‖L‖ ≤ ‖W_L‖ ≤ 1 + ‖L‖.

#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "odofock/fock.hpp"

namespace odofock {

struct SymbolEntry {
  Index row;  // basis index word_index(μ)·d + s
  int col;    // q: the entry is the coefficient of e_μ ⊗ h_s in L h_q
  Complex value;

  friend bool operator==(const SymbolEntry&, const SymbolEntry&) = default;
};

/// L: C^d -> F(n, M) ⊗ C^d, stored as its nonzero coefficients in canonical
/// row-major order. Spaces too large for dense storage are still supported, as
/// long as only the coefficient-level operations are used.
class Symbol {
public:
  Symbol(FockSpace space, std::vector<SymbolEntry> entries);
  /// Entries with modulus ≤ chop are dropped.
  static Symbol from_dense(FockSpace space, const Matrix& columns, double chop = 0.0);
  static Symbol zero(FockSpace space) { return Symbol(std::move(space), {}); }

  const FockSpace& space() const noexcept { return space_; }
  int coeff_dim() const noexcept { return space_.coeff_dim(); }
  const std::vector<SymbolEntry>& entries() const noexcept { return entries_; }

  /// Largest level carrying a nonzero coefficient (0 for the zero symbol).
  int support_degree() const noexcept { return support_degree_; }

  /// D×d matrix whose column q is L h_q.
  Matrix dense() const;

  /// d×d block B with B(s, q) = coefficient of e_μ ⊗ h_s in L h_q.
  Matrix block(const Word& w) const;

  /// Blocks at e_1^{⊗r} for r = 0..levels (zero past the truncation).
  std::vector<Matrix> e1_blocks(int levels) const;

  /// Frobenius norm of the coefficients on words other than e_1^{⊗r}.
  double off_e1_norm() const;
  /// Frobenius norm of the coefficients above level 0.
  double above_vacuum_norm() const;

  /// Same coefficients on a larger truncation of the same alphabet and E.
  Symbol embed(int max_level) const;

private:
  FockSpace space_;
  std::vector<SymbolEntry> entries_;
  int support_degree_ = 0;
};

struct OdometerMap {
  Symbol symbol;
  Operator op;  // op.exact_below = M - support_degree + 1
  int exact_below() const noexcept { return op.exact_below; }
};

/// Marker returned by carry_successor for n^{⊗level}: the image is
/// e_1^{⊗level} ⊗ Lη.
struct Overflow {
  int level;
  friend bool operator==(const Overflow&, const Overflow&) = default;
};

using CarryResult = std::variant<Word, Overflow>;

/// Base-n carry on a nonempty word: strips leading n's into 1's and bumps the
/// first letter below n.
CarryResult carry_successor(const Word& w);

/// Inverse of the carry on words that are not powers of e_1; nullopt for the
/// empty word and for 1^{⊗m}, which have no non-overflow preimage.
std::optional<Word> carry_predecessor(const Word& w);

OdometerMap build_odometer(const Symbol& symbol);

/// Exact (untruncated) image W_L(e_μ ⊗ h_p), keyed by (word, coefficient).
using SparseImage = std::map<std::pair<Word, int>, Complex>;
SparseImage apply_odometer(const Symbol& symbol, const Word& w, int p);

struct RepresentationVerdict {
  bool pass = false;
  /// Frobenius residuals of W(S_k⊗I) - S_{k+1}⊗I (k < n) and
  /// W(S_n⊗I) - (S_1⊗I)W, on columns of level ≤ M-1.
  std::vector<double> relation_residuals;
  double max_residual = 0.0;
  /// L η = W(Ω ⊗ η); set when the relations hold.
  std::optional<Symbol> symbol;
  int checked_levels = 0;  // columns of level < checked_levels were tested
};

RepresentationVerdict verify_fock_representation(const Operator& w, double tol = kDefaultTol);

/// One column of the closed-form adjoint, W^*(e_f ⊗ h_l), with no truncation.
/// blocks[r] is the coefficient block of L at e_1^{⊗r}; missing blocks are zero.
SparseImage apply_adjoint_isometric(const std::vector<Matrix>& blocks, const Word& f, int l);

/// Closed-form adjoint of an isometric odometer map. Throws PreconditionError
/// when the symbol is not e_1-supported or W_L is not isometric: no formula is
/// known for the general adjoint.
Operator adjoint_isometric(const OdometerMap& w, double tol = kDefaultTol);

/// Conjugate transpose of the truncated matrix. Approximate for non-isometric
/// symbols in the sense that it is only the compression of W_L^*.
Operator truncated_adjoint(const OdometerMap& w);

struct NormBounds {
  double symbol_norm = 0.0;
  double map_norm = 0.0;  // of the truncated matrix
  bool lower_holds = false;
  bool upper_holds = false;
};

NormBounds norm_bounds(const OdometerMap& w);

/// e_1-support tolerance for the adjoint formula.
inline constexpr double kE1SupportTol = 1e-12;

}  // namespace odofock
