#pragma once

// Spectra of unitary odometer maps level by level, and the worked examples:
// the adding machine on ℓ², the weak bi-shift, the shift symbol and the
// golden-ratio isometry.

#include <string>
#include <vector>

#include "odofock/odometer.hpp"

namespace odofock {

struct SpectrumLevel {
  int level = 0;
  std::vector<Complex> eigenvalues;
  std::vector<Complex> predicted;  // λ with λ^{n^m} ∈ σ(level-0 block)
  double hausdorff = 0.0;
  double unit_modulus_residual = 0.0;  // max ||λ| - 1|
  double block_unitary_residual = 0.0; // ‖W_m^* W_m - I‖
  double power_residual = 0.0;         // ‖W_m^{n^m} - I ⊗ B_0‖
};

struct SpectrumReport {
  std::vector<SpectrumLevel> per_level;
  double max_gap = 0.0;  // largest angular gap among all eigenvalues
};

/// Needs a unitary (constant, unitary level-0 block) symbol.
SpectrumReport spectrum_per_level(const Symbol& l, int max_level, double tol = kDefaultTol);

/// Plain-text histogram of eigenvalue angles over [0, 2π).
std::string angle_histogram(const SpectrumReport& report, int bins = 16);

struct Expected {
  bool isometric = false;
  bool nica = false;
  bool unitary = false;
};

struct AddingMachine {
  Complex q;
  int size = 0;
  int window = 0;  // relations checked on e_k, k ≤ window
  Matrix v1, v2, w;
  double relation_v1 = 0.0;    // W V_1 - V_2
  double relation_v2 = 0.0;    // W V_2 - q V_1 W
  double twisted_nica = 0.0;   // W^* V_1 - q̄ V_2 W^*
  double nica_relation = 0.0;  // W^* V_1 - V_2 W^*
  bool nica = false;
  bool expected_nica = false;
};

/// V_1 e_k = q̄^{2k} e_{2k}, V_2 e_k = q̄^{2k+1} e_{2k+1}, W e_k = q̄ e_{k+1} on
/// span{e_0..e_{N-1}}.
AddingMachine gallery_adding_machine(Complex q, int size, double tol = kDefaultTol);

struct WeakBishift {
  Symbol symbol;
  double witness_residual = 0.0;  // (S_1⊗I)^* W(Ω⊗h_m) - e_1^{⊗(m-1)}⊗h_m, m ≥ 1
  Expected expected{true, false, false};
};

/// L h_m = e_1^{⊗m} ⊗ h_m on C^d, over F(n, M).
WeakBishift gallery_weak_bishift(int d, int max_level, int n = 2);

struct ShiftSymbol {
  Symbol symbol;
  int interior = 0;  // columns h_0..h_{d-2}; the last column is the flagged boundary
  Index reachable_rank = 0;  // orbit of Ω⊗h_0 under S_i and W_L
  Expected expected{true, true, false};
};

/// L h_p = Ω ⊗ h_{p+1}, last column zero.
ShiftSymbol gallery_shift_symbol(int d, int max_level = 2, int n = 2);

struct GoldenRatio {
  std::vector<double> c;  // c_0..c_P
  Symbol symbol;          // Σ c_p e_1^{⊗p} on F(2, max(P, M), 1)
  double norm_defect = 0.0;           // |Σ|c_p|² - 1|
  double norm_tail = 0.0;             // c_0² ω^{2P} / (1 - ω²)
  std::vector<double> cross_sums;     // |Σ_{p ≤ P-r} c_{p+r} c_p|, r = 1..4
  std::vector<double> cross_tails;    // c_0² |ω|^{2P-r} / (1 - ω²)
  Expected expected{true, false, false};
};

GoldenRatio gallery_golden_ratio(int terms, int max_level = 0);

/// ξ = cΩ over F(n, M).
Symbol scalar_vacuum_symbol(Complex c, int n, int max_level);

}  // namespace odofock
