// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>

#include <unistd.h>

#include "odofock/classification.hpp"
#include "odofock/cli.hpp"
#include "odofock/dilation.hpp"
#include "odofock/factorization.hpp"
#include "odofock/gallery.hpp"
#include "odofock/io.hpp"
#include "oracles.hpp"

using namespace odofock;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

struct CliRun {
  int code;
  Json report;
  double seconds;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const auto t0 = std::chrono::steady_clock::now();
  const int code = run_cli(args, out, err);
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {code, Json::parse(out.str()), s};
}

double check_residual(const Json& report, const std::string& name) {
  for (const auto& c : report.at("checks")) {
    if (c.at("name") == name) return c.at("residual").get<double>();
  }
  return INFINITY;
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / ("odofock_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  return dir;
}

Outcome golden_isometry() {
  Outcome o;
  const fs::path dir = scratch();
  const std::string file = (dir / "golden.json").string();
  const CliRun gen = cli({"gen-example", "golden-ratio", "--terms", "60", "--out", file});
  const CliRun chk = cli({"check", "isometry", "--symbol", file, "--window", "24"});
  fs::remove_all(dir);
  o.require(gen.code == 0 && chk.code == 0, "exit codes " + std::to_string(gen.code) + "/" + std::to_string(chk.code));

  const auto c = oracle::golden_coefficients(60);
  long double norm = 0.0L;
  for (auto x : c) norm += x * x;
  const double oracle_norm = static_cast<double>(std::fabs(norm - 1.0L));
  const double lib_norm = check_residual(gen.report, "norm_sum");
  o.require(lib_norm <= 1e-12 && oracle_norm <= 1e-12, "norm sum " + fmt(lib_norm));
  double worst_cross = 0.0;
  for (int r = 1; r <= 4; ++r) {
    long double s = 0.0L;
    for (int p = 0; p + r <= 60; ++p) s += c[static_cast<std::size_t>(p + r)] * c[static_cast<std::size_t>(p)];
    const double lib = check_residual(gen.report, "cross_sum_r" + std::to_string(r));
    worst_cross = std::max({worst_cross, lib, static_cast<double>(std::fabs(s))});
  }
  o.require(worst_cross <= 1e-12, "cross sums " + fmt(worst_cross));

  // Overflow columns 2^{⊗a} ↦ 1^{⊗a} ⊗ ξ, a ≤ 24; carry columns are distinct
  // basis vectors off the e_1 diagonal, so only this Gram block can fail.
  const int window = 24;
  long double sq = 0.0L;
  for (int a = 0; a <= window; ++a) {
    for (int b = 0; b <= window; ++b) {
      long double g = 0.0L;
      for (int k = std::max(a, b); k <= 60 + std::min(a, b); ++k) {
        g += c[static_cast<std::size_t>(k - a)] * c[static_cast<std::size_t>(k - b)];
      }
      if (a == b) g -= 1.0L;
      sq += g * g;
    }
  }
  const double oracle_cols = static_cast<double>(std::sqrt(sq));
  const double lib_cols = check_residual(chk.report, "column_orthonormality");
  o.require(lib_cols <= 1e-10 && oracle_cols <= 1e-10, "column defect " + fmt(lib_cols));
  o.require(std::abs(lib_cols - oracle_cols) <= 1e-12, "column defect disagrees with oracle");
  const double secs = gen.seconds + chk.seconds;
  o.require(secs < 5.0, "runtime " + fmt(secs) + " s");
  if (o.pass) {
    o.detail = "norm " + fmt(lib_norm) + ", cross " + fmt(worst_cross) + ", columns " + fmt(lib_cols) + ", " +
               fmt(secs) + " s";
  }
  return o;
}

Outcome representation_round_trip() {
  Outcome o;
  oracle::Rng rng(2024);
  double worst_rel = 0.0;
  double worst_sym = 0.0;
  double worst_naive = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const FockSpace space(oracle::uniform_int(rng, 1, 3), oracle::uniform_int(rng, 0, 5), oracle::uniform_int(rng, 1, 3));
    const Symbol l = oracle::random_symbol(rng, space);
    const OdometerMap w = build_odometer(l);
    worst_naive = std::max(worst_naive, oracle::max_abs(w.op.matrix - oracle::naive_odometer(l)));
    const RepresentationVerdict v = verify_fock_representation(w.op);
    worst_rel = std::max(worst_rel, v.max_residual);
    if (!v.pass || !v.symbol) {
      o.require(false, "trial " + std::to_string(trial) + " rejected");
      continue;
    }
    worst_sym = std::max(worst_sym, oracle::max_abs(v.symbol->dense() - oracle::naive_symbol(l)));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(worst_rel <= 1e-13, "relation residual " + fmt(worst_rel));
  o.require(worst_sym <= 1e-14, "symbol recovery " + fmt(worst_sym));
  o.require(worst_naive == 0.0, "W differs from the definition oracle by " + fmt(worst_naive));
  o.require(secs < 30.0, "runtime " + fmt(secs) + " s");
  if (o.pass) o.detail = "100 symbols, relations " + fmt(worst_rel) + ", recovery " + fmt(worst_sym) + ", " + fmt(secs) + " s";
  return o;
}

Outcome adjoint_formula() {
  Outcome o;
  oracle::Rng rng(404);
  double worst_adj = 0.0;
  double worst_id = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = oracle::uniform_int(rng, 1, 3);
    const FockSpace space(n, n == 3 ? 3 : 4, oracle::uniform_int(rng, 1, 3));
    const Symbol l = trial % 2 ? oracle::constant_unitary_symbol(rng, space) : oracle::e1_diagonal_symbol(rng, space, 2);
    const OdometerMap w = build_odometer(l);
    const Matrix naive = oracle::naive_odometer(l);
    const Matrix adj = adjoint_isometric(w).matrix;
    const Index win = oracle::basis_below(n, w.exact_below(), space.coeff_dim());
    worst_adj = std::max(worst_adj, oracle::max_abs(adj.topRows(win) - naive.adjoint().topRows(win)));
    worst_id = std::max(worst_id, oracle::max_abs(adj * naive.leftCols(win) - Matrix::Identity(space.dim(), win)));
  }
  o.require(worst_adj <= 1e-12, "adjoint vs conjugate transpose " + fmt(worst_adj));
  o.require(worst_id <= 1e-12, "W*W - I " + fmt(worst_id));
  if (o.pass) o.detail = "20 symbols, formula " + fmt(worst_adj) + ", W*W-I " + fmt(worst_id);
  return o;
}

Outcome nica_classification() {
  Outcome o;
  oracle::Rng rng(77);
  double worst_const = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const FockSpace space(oracle::uniform_int(rng, 1, 3), 3, oracle::uniform_int(rng, 1, 3));
    const NicaReport r = check_nica(oracle::constant_unitary_symbol(rng, space));
    worst_const = std::max(worst_const, r.relation_residual);
    o.require(r.is_nica && r.relation_holds, "constant symbol rejected");
  }
  o.require(worst_const <= 1e-12, "constant relation residual " + fmt(worst_const));

  const GoldenRatio g = gallery_golden_ratio(60);
  ClassifyOptions opts;
  opts.window = 24;
  const NicaReport gr = check_nica(g.symbol, kDefaultTol, opts);
  const auto c = oracle::golden_coefficients(60);
  long double tail = 0.0L;
  for (std::size_t p = 1; p < c.size(); ++p) tail += c[p] * c[p];
  const double expected = static_cast<double>(std::sqrt(tail));
  o.require(!gr.is_nica, "golden ratio reported Nica");
  o.require(gr.nica_residual >= 1e-2 && std::abs(gr.nica_residual - expected) <= 1e-12,
            "golden residual " + fmt(gr.nica_residual) + " vs oracle " + fmt(expected));
  o.require(gr.relation_residual > 0.0 && !gr.relation_holds, "golden relation residual " + fmt(gr.relation_residual));

  for (double phase : {0.0, 1.0, -2.0}) {
    const ClassificationReport r = classify(scalar_vacuum_symbol(std::polar(1.0, phase), 2, 4));
    o.require(r.is_isometric && r.is_nica && r.is_unitary, "cΩ verdicts wrong at phase " + fmt(phase));
  }
  if (o.pass) {
    o.detail = "constant relation " + fmt(worst_const) + ", golden residual " + fmt(gr.nica_residual) +
               " (oracle " + fmt(expected) + "), cΩ all true";
  }
  return o;
}

Outcome finite_equivalence() {
  Outcome o;
  oracle::Rng rng(505);
  int agree = 0;
  int positive = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const FockSpace space(oracle::uniform_int(rng, 1, 3), 4, oracle::uniform_int(rng, 1, 4));
    Symbol l = Symbol::zero(space);
    switch (trial % 3) {
      case 0: l = oracle::constant_unitary_symbol(rng, space); break;
      case 1: l = oracle::e1_diagonal_symbol(rng, space, 2); break;
      default: l = gallery_weak_bishift(space.coeff_dim(), 4, space.alphabet()).symbol; break;
    }
    if (!check_isometric(l).is_isometric) {
      o.require(false, "generator produced a non-isometric symbol");
      continue;
    }
    const bool nica = check_nica(l).is_nica;
    const UnitaryReport u = check_unitary(l);
    const bool constant_unitary = u.is_constant && u.level0_residual <= kDefaultTol;
    const bool map_unitary = u.blocks_unitary;
    if (nica == constant_unitary && nica == map_unitary) ++agree;
    positive += nica;
  }
  o.require(agree == 50, std::to_string(50 - agree) + " disagreements");
  o.require(positive > 0 && positive < 50, "only one verdict class sampled");
  if (o.pass) o.detail = "50/50 agree (" + std::to_string(positive) + " unitary, " + std::to_string(50 - positive) + " not)";
  return o;
}

Outcome norm_facts() {
  Outcome o;
  FockSpace space(2, 6, 1);
  const double r = 1.0 / std::sqrt(2.0);
  const Symbol l(space, {{space.word_index(Word(2, {1})), 0, r}, {space.word_index(Word(2, {1, 1})), 0, r}});
  const NormBounds b = norm_bounds(build_odometer(l));
  o.require(std::abs(b.symbol_norm - 1.0) <= 1e-12, "‖L‖ = " + fmt(b.symbol_norm));
  o.require(b.map_norm >= std::sqrt(1.5) - 1e-9, "‖W_L‖ = " + fmt(b.map_norm));
  oracle::Rng rng(606);
  int upper_violations = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const FockSpace sp(oracle::uniform_int(rng, 1, 3), oracle::uniform_int(rng, 1, 3), oracle::uniform_int(rng, 1, 3));
    const Symbol x = oracle::random_symbol(rng, sp);
    const NormBounds nb = norm_bounds(build_odometer(x));
    const double ln = oracle::spectral_norm(oracle::naive_symbol(x));
    const double wn = oracle::spectral_norm(oracle::naive_odometer(x));
    o.require(std::abs(nb.symbol_norm - ln) <= 1e-12 * (1 + ln) && std::abs(nb.map_norm - wn) <= 1e-12 * (1 + wn),
              "norms disagree with oracle at trial " + std::to_string(trial));
    o.require(nb.lower_holds && ln <= wn + 1e-12, "lower bound fails at trial " + std::to_string(trial));
    upper_violations += !(nb.upper_holds && wn <= 1.0 + ln + 1e-12);
  }

  // L = (1/3) Σ_{k≤8} e_1^{⊗k}: ‖L‖ = 1, and the overflow columns act as a
  // Toeplitz matrix on the e_1 diagonal.
  const int wm = 8;
  const FockSpace ws(2, wm, 1);
  std::vector<SymbolEntry> we;
  for (int k = 0; k <= wm; ++k) we.push_back({ws.word_index(Word(2, std::vector<int>(static_cast<std::size_t>(k), 1))), 0, 1.0 / 3.0});
  const Symbol witness(ws, we);
  const double witness_w = oracle::spectral_norm(oracle::naive_odometer(witness));
  o.require(upper_violations == 0, "upper bound ‖W_L‖ ≤ 1+‖L‖ violated on " + std::to_string(upper_violations) +
                                       "/20 random symbols (oracle SVD agrees); witness n=2 M=8 ‖L‖=1 has ‖W_L‖ ≥ " +
                                       fmt(witness_w));
  if (o.pass) o.detail = "‖L‖ = " + fmt(b.symbol_norm) + ", ‖W_L‖ = " + fmt(b.map_norm) + ", sandwich on 20 symbols";
  return o;
}

Outcome dilation_round_trip() {
  Outcome o;
  oracle::Rng rng(707);
  const int k = 2;
  const int m = 6;
  double purity = 0.0;
  double iso = 0.0;
  double inter = 0.0;
  double lift = 0.0;
  double tele = 0.0;
  const auto t0 = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 20; ++trial) {
    const FockSpace ambient(2, 4, oracle::uniform_int(rng, 1, 2));
    const ContractivePair p = compress_pair(oracle::random_symbol(rng, ambient, 0.5, 2), k);
    const DilationData data = poisson_kernel(p.t, m);
    purity = std::max(purity, data.purity_residual);
    iso = std::max(iso, data.isometry_defect);
    inter = std::max(inter, intertwining_residual(p.t, data));
    const Matrix gram = data.poisson.adjoint() * data.poisson;
    const Matrix tail = oracle::cp_power(p.t.tuple(), m + 1);
    tele = std::max(tele, oracle::max_abs(gram + tail - Matrix::Identity(gram.rows(), gram.cols())));
    lift = std::max(lift, odometer_lift(p, m).residual);
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(purity == 0.0, "purity residual " + fmt(purity));
  o.require(iso <= 1e-12, "isometry defect " + fmt(iso));
  o.require(inter <= 1e-12, "intertwining " + fmt(inter));
  o.require(lift <= 1e-8, "lift residual " + fmt(lift));
  o.require(tele <= 1e-12, "telescoping " + fmt(tele));
  o.require(secs < 60.0, "runtime " + fmt(secs) + " s");
  if (o.pass) {
    o.detail = "20 pairs, purity 0, isometry " + fmt(iso) + ", intertwining " + fmt(inter) + ", lift " + fmt(lift) +
               ", telescoping " + fmt(tele) + ", " + fmt(secs) + " s";
  }
  return o;
}

Outcome beurling_lax() {
  Outcome o;
  oracle::Rng rng(808);
  double inner = 0.0;
  double analytic = 0.0;
  double inter = 0.0;
  double tau = 0.0;
  for (int d = 1; d <= 2; ++d) {
    const int n = 2;
    const int m = 5;
    const FockSpace space(n, m, d);
    const Symbol l = oracle::constant_unitary_symbol(rng, space);
    const InvariantSubspace s = InvariantSubspace::levels(space, 1, m);
    const BeurlingFactorization f = beurling_factorize(s);
    inner = std::max(inner, f.inner_residual);
    analytic = std::max(analytic, f.multi_analytic_residual);
    const InducedSymbol ind = induced_symbol(s, f, build_odometer(l));
    o.require(ind.invariant && ind.symbol.has_value(), "induced symbol missing");
    inter = std::max(inter, ind.intertwining_residual);

    // ⊕_{|μ| ≤ M-1} (S_μ⊗I) E_* with dim E_* = nd fills levels 1..M.
    const Index levels_dim = oracle::basis_below(n, m + 1, d) - d;
    const Index star_dim = oracle::basis_below(n, m, n * d);
    o.require(f.wandering_dim == n * d, "dim E_* = " + std::to_string(f.wandering_dim));
    o.require(s.rank() == levels_dim && f.star_space.dim() == star_dim && f.coverage_rank == levels_dim &&
                  star_dim == levels_dim,
              "dimension counts differ");

    const Matrix v = oracle::random_unitary(rng, f.wandering_dim);
    const FactorizationRelation rel = relate_factorizations(f, beurling_factorize(s, Matrix(f.wandering_basis * v)));
    tau = std::max({tau, rel.residual, rel.unitarity});
  }
  o.require(inner <= 1e-12, "inner " + fmt(inner));
  o.require(analytic <= 1e-12, "multi-analytic " + fmt(analytic));
  o.require(inter <= 1e-10, "W_L Φ - Φ W_L* " + fmt(inter));
  o.require(tau <= 1e-10, "τ residual " + fmt(tau));
  if (o.pass) {
    o.detail = "inner " + fmt(inner) + ", multi-analytic " + fmt(analytic) + ", intertwining " + fmt(inter) +
               ", τ " + fmt(tau) + ", dimensions exact";
  }
  return o;
}

Outcome spectrum() {
  Outcome o;
  double worst = 0.0;
  double gap_err = 0.0;
  for (double theta : {0.3, 1.7, -2.5}) {
    const Complex c = std::polar(1.0, theta);
    const SpectrumReport r = spectrum_per_level(scalar_vacuum_symbol(c, 2, 0), 6);
    std::vector<double> angles;
    for (const auto& lvl : r.per_level) {
      const long count = 1L << lvl.level;
      std::vector<Complex> roots;
      for (long k = 0; k < count; ++k) {
        roots.push_back(std::polar(1.0, (theta + kTwoPi * static_cast<double>(k)) / static_cast<double>(count)));
      }
      double h = 0.0;
      for (int pass = 0; pass < 2; ++pass) {
        const auto& x = pass ? roots : lvl.eigenvalues;
        const auto& y = pass ? lvl.eigenvalues : roots;
        for (Complex u : x) {
          double best = INFINITY;
          for (Complex v : y) best = std::min(best, std::abs(u - v));
          h = std::max(h, best);
        }
      }
      worst = std::max({worst, h, lvl.hausdorff});
      for (Complex z : lvl.eigenvalues) angles.push_back(std::fmod(std::arg(z) + kTwoPi, kTwoPi));
    }
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + kTwoPi - angles.back();
    for (std::size_t j = 0; j + 1 < angles.size(); ++j) gap = std::max(gap, angles[j + 1] - angles[j]);
    gap_err = std::max({gap_err, std::abs(r.max_gap - kTwoPi / 64.0), std::abs(gap - kTwoPi / 64.0)});
  }
  o.require(worst <= 1e-9, "Hausdorff " + fmt(worst));
  o.require(gap_err <= 1e-9, "max gap error " + fmt(gap_err));
  if (o.pass) o.detail = "3 phases, levels 0..6, Hausdorff " + fmt(worst) + ", gap error " + fmt(gap_err);
  return o;
}

Outcome gallery_fidelity() {
  Outcome o;
  const fs::path dir = scratch();
  std::vector<std::string> timings;
  auto timed = [&](const std::string& label, const std::vector<CliRun>& runs) {
    double s = 0.0;
    for (const auto& r : runs) s += r.seconds;
    o.require(s < 5.0, label + " took " + fmt(s) + " s");
    timings.push_back(label + " " + fmt(s) + " s");
  };

  // Adding machine: relations on the window and the q = 1 Nica flag.
  const CliRun q1 = cli({"gen-example", "adding-machine", "--q-re", "1", "--q-im", "0", "--size", "16"});
  const CliRun qi = cli({"gen-example", "adding-machine", "--q-re", "0", "--q-im", "1", "--size", "16"});
  o.require(q1.code == 0 && q1.report.at("values").at("nica") == true, "adding-machine q=1 not Nica");
  o.require(check_residual(q1.report, "relation_wv1_v2") == 0.0 && check_residual(q1.report, "relation_wv2_qv1w") == 0.0,
            "adding-machine relations nonzero");
  o.require(qi.code == 0 && qi.report.at("values").at("nica") == false, "adding-machine q=i flagged Nica");
  timed("adding-machine", {q1, qi});

  // Weak bi-shift is isometric but not Nica.
  const std::string wb = (dir / "wb.json").string();
  const CliRun wg = cli({"gen-example", "weak-bishift", "--dim", "3", "--level", "4", "--out", wb});
  const CliRun wi = cli({"check", "isometry", "--symbol", wb});
  const CliRun wn = cli({"check", "nica", "--symbol", wb});
  o.require(wg.code == 0 && wi.code == 0, "weak-bishift not isometric");
  o.require(wn.code == 1 && !wn.report.contains("error") && check_residual(wn.report, "nica_residual") > 0.0,
            "weak-bishift Nica verdict wrong");
  timed("weak-bishift", {wg, wi, wn});

  // Shift symbol is Nica on the interior, not unitary, defect 1.
  const std::string sh = (dir / "shift.json").string();
  const CliRun sg = cli({"gen-example", "shift-symbol", "--dim", "5", "--out", sh});
  const CliRun sn = cli({"check", "nica", "--symbol", sh, "--active-columns", "4"});
  const CliRun su = cli({"check", "unitary", "--symbol", sh, "--active-columns", "4"});
  o.require(sg.code == 0 && sn.code == 0, "shift-symbol not Nica on the interior");
  o.require(su.code == 1 && su.report.at("values").at("surjectivity_defect") == 1.0, "shift-symbol unitary verdict wrong");
  timed("shift-symbol", {sg, sn, su});

  // Golden-ratio symbol is isometric.
  const std::string gr = (dir / "golden.json").string();
  const CliRun gg = cli({"gen-example", "golden-ratio", "--terms", "60", "--out", gr});
  const CliRun gi = cli({"check", "isometry", "--symbol", gr, "--window", "24"});
  o.require(gg.code == 0 && gi.code == 0, "golden-ratio not isometric");
  timed("golden-ratio", {gg, gi});

  fs::remove_all(dir);
  if (o.pass) {
    for (const auto& t : timings) o.detail += (o.detail.empty() ? "" : ", ") + t;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"golden-ratio isometry", golden_isometry},
      {"odometer relations and symbol uniqueness", representation_round_trip},
      {"adjoint formula", adjoint_formula},
      {"Nica classification", nica_classification},
      {"finite-dimensional equivalence", finite_equivalence},
      {"norm facts", norm_facts},
      {"dilation and lift round trip", dilation_round_trip},
      {"Beurling-Lax and subrepresentation", beurling_lax},
      {"spectrum", spectrum},
      {"gallery fidelity", gallery_fidelity},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    failures += !o.pass;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failures;
}
