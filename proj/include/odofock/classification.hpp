#pragma once

// Isometric / Nica-covariant / unitary verdicts for odometer maps, decided
// from the symbol and cross-checked against the map itself.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "odofock/odometer.hpp"

namespace odofock {

struct ClassifyOptions {
  /// Only the first active_columns coefficient columns are classified
  /// (-1 = all). Used for finite shadows with a flagged boundary column.
  int active_columns = -1;
  /// Column level window for the map-side cross-checks (-1 = exact window).
  int window = -1;
  bool cross_check = true;
  std::uint64_t seed = 0;
};

/// E_L in e_1-diagonal coordinates: row r·d + s is the coefficient of
/// e_1^{⊗r} ⊗ h_s, r = 0..levels. The shifts p run over 1..levels-support_degree.
Matrix compute_E_L(const Symbol& l, int levels, double tol = kDefaultTol);
Matrix compute_E_L(const Symbol& l, double tol = kDefaultTol);

/// G_r = Σ_p B_p^* B_{p+r} for r = 1..support_degree, where B_p is the block at
/// e_1^{⊗p}; G_r(ζ, η) is the sum in the Gram condition.
std::vector<Matrix> gram_sums(const Symbol& l);

/// Exact Gram defect ‖G - I‖_F of the columns of W_L at levels ≤ window,
/// computed without truncation. Carry columns are a permutation of words, so
/// only the overflow columns n^{⊗m} ⊗ h_q contribute.
double column_gram_defect(const Symbol& l, int window, int active_columns = -1);

struct IsometryReport {
  bool is_isometric = false;
  double isometry_residual = 0.0;      // ‖L^*L - I‖_F
  double e1_support_residual = 0.0;    // coefficients off e_1^{⊗r} ⊗ E
  double gram_residual = 0.0;          // max_r max |G_r| entry
  double el_residual = 0.0;            // ‖(I - P_{E_L}) L‖ in e_1 coordinates
  double column_residual = 0.0;        // column_gram_defect on the window
  double random_vector_residual = 0.0; // max |‖Wv‖ - ‖v‖| over window vectors
  bool cross_checked = false;
  bool random_checked = false;  // needs a dense truncation
  int window = 0;
};

IsometryReport check_isometric(const Symbol& l, double tol = kDefaultTol, ClassifyOptions opts = {});

struct NicaReport {
  bool is_nica = false;
  double nica_residual = 0.0;      // coefficients above level 0
  double relation_residual = 0.0;  // W^*(S_1⊗I) - (S_n⊗I)W^* on the window
  bool relation_holds = false;
  int window = 0;
};

/// Throws PreconditionError unless the (active part of the) symbol is isometric.
NicaReport check_nica(const Symbol& l, double tol = kDefaultTol, ClassifyOptions opts = {});

struct UnitaryReport {
  bool is_unitary = false;
  bool is_constant = false;
  double surjectivity_defect = 0.0;  // d - rank of the level-0 block
  double level0_residual = 0.0;      // ‖B_0^* B_0 - I‖ and ‖B_0 B_0^* - I‖
  double block_residual = 0.0;       // W_L level blocks unitary, no off-level mass
  bool blocks_unitary = false;
  int window = 0;
};

UnitaryReport check_unitary(const Symbol& l, double tol = kDefaultTol, ClassifyOptions opts = {});

struct ClassificationReport {
  bool is_isometric = false;
  bool is_nica = false;
  bool is_unitary = false;
  bool is_constant_symbol = false;
  std::map<std::string, double> residuals;
  int window = 0;
  double tol = kDefaultTol;
  /// The three equivalent unitarity routes, when the symbol is isometric.
  bool nica_relation = false;
  bool blocks_unitary = false;
};

ClassificationReport classify(const Symbol& l, double tol = kDefaultTol, ClassifyOptions opts = {});

/// Symbol with only the first k coefficient columns kept, the others zeroed.
Symbol restrict_columns(const Symbol& l, int k);

}  // namespace odofock
