#include "odofock/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "odofock/classification.hpp"
#include "odofock/dilation.hpp"
#include "odofock/factorization.hpp"
#include "odofock/gallery.hpp"
#include "odofock/io.hpp"

namespace odofock {

namespace {

struct Globals {
  double tol = kDefaultTol;
  std::uint64_t seed = 0;
  std::string out_path;
};

/// Values shared by several subcommands; -1 means "example default".
struct Params {
  std::string name;
  std::string kind;
  std::string symbol_path;
  std::string operator_path;
  std::string pair_path;
  std::string subspace_path;
  std::string histogram_path;
  std::string word;
  int n = -1;
  int level = -1;
  int dim = -1;
  int size = 16;
  int terms = 60;
  int k = -1;
  int lo = 1;
  int hi = -1;
  int window = -1;
  int active = -1;
  int bins = 16;
  double q_re = 1.0;
  double q_im = 0.0;
  double c_re = 1.0;
  double c_im = 0.0;
  double theta = 0.0;
};

int or_default(int v, int fallback) { return v < 0 ? fallback : v; }

void emit(const Globals& g, const Json& artifact) {
  if (!g.out_path.empty()) write_json_file(g.out_path, artifact);
}

Symbol load_symbol(const Params& p) {
  if (p.symbol_path.empty()) throw InputError("--symbol is required");
  return symbol_from_json(read_json_file(p.symbol_path));
}

ContractivePair load_pair(const Params& p) {
  if (p.pair_path.empty()) throw InputError("--pair is required");
  return pair_from_json(read_json_file(p.pair_path));
}

double dense_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

Symbol rotation_symbol(double theta, int n, int max_level) {
  FockSpace space(n, max_level, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return Symbol(space, {{0, 0, c}, {0, 1, -s}, {1, 0, s}, {1, 1, c}});
}

void gen_example(const Params& p, const Globals& g, Report& r) {
  r.param("name", p.name);
  const double tol = g.tol;
  if (p.name == "adding-machine") {
    const Complex q(p.q_re, p.q_im);
    r.param("q", complex_to_json(q));
    r.param("size", p.size);
    const AddingMachine am = gallery_adding_machine(q, p.size, tol);
    r.window("relation_columns_max_k", am.window);
    r.check("relation_wv1_v2", am.relation_v1, tol);
    r.check("relation_wv2_qv1w", am.relation_v2, tol);
    r.check("twisted_nica_relation", am.twisted_nica, tol);
    r.check("nica_flag_matches_q", am.nica == am.expected_nica, am.nica_relation, tol);
    r.value("nica", am.nica);
    r.value("expected_nica", am.expected_nica);
    emit(g, pair_to_json(2, {am.v1, am.v2}, am.w));
  } else if (p.name == "weak-bishift") {
    const int d = or_default(p.dim, 3);
    const int m = or_default(p.level, 4);
    const int n = or_default(p.n, 2);
    r.param("dim", d);
    r.param("max_level", m);
    r.param("n", n);
    const WeakBishift wb = gallery_weak_bishift(d, m, n);
    r.check("non_nica_witness", wb.witness_residual, tol);
    r.value("expected", {{"isometric", true}, {"nica", false}, {"unitary", false}});
    emit(g, symbol_to_json(wb.symbol));
  } else if (p.name == "shift-symbol") {
    const int d = or_default(p.dim, 5);
    const int m = or_default(p.level, 2);
    const int n = or_default(p.n, 2);
    r.param("dim", d);
    r.param("max_level", m);
    r.param("n", n);
    const ShiftSymbol sh = gallery_shift_symbol(d, m, n);
    const auto full = static_cast<double>(sh.symbol.space().dim());
    r.check("reachable_rank", static_cast<double>(sh.reachable_rank) == full,
            full - static_cast<double>(sh.reachable_rank), 0.0);
    r.value("interior_columns", sh.interior);
    r.value("expected", {{"nica_on_interior", true}, {"unitary", false}, {"surjectivity_defect", 1}});
    emit(g, symbol_to_json(sh.symbol));
  } else if (p.name == "golden-ratio") {
    const int m = or_default(p.level, 0);
    r.param("terms", p.terms);
    r.param("max_level", std::max(m, p.terms));
    const GoldenRatio gr = gallery_golden_ratio(p.terms, m);
    r.check("norm_sum", gr.norm_defect, tol);
    for (std::size_t i = 0; i < gr.cross_sums.size(); ++i) {
      r.check("cross_sum_r" + std::to_string(i + 1), gr.cross_sums[i], tol);
    }
    r.value("norm_tail_bound", gr.norm_tail);
    r.value("cross_tail_bounds", gr.cross_tails);
    r.value("expected", {{"isometric", true}, {"nica", false}, {"unitary", false}});
    emit(g, symbol_to_json(gr.symbol));
  } else if (p.name == "vacuum") {
    const Complex c(p.c_re, p.c_im);
    const int n = or_default(p.n, 2);
    const int m = or_default(p.level, 2);
    r.param("c", complex_to_json(c));
    r.param("n", n);
    r.param("max_level", m);
    emit(g, symbol_to_json(scalar_vacuum_symbol(c, n, m)));
  } else if (p.name == "rotation") {
    const int n = or_default(p.n, 2);
    const int m = or_default(p.level, 3);
    r.param("theta", p.theta);
    r.param("n", n);
    r.param("max_level", m);
    emit(g, symbol_to_json(rotation_symbol(p.theta, n, m)));
  } else if (p.name == "levels-subspace") {
    const int n = or_default(p.n, 2);
    const int m = or_default(p.level, 5);
    const int d = or_default(p.dim, 1);
    const int hi = or_default(p.hi, m);
    r.param("n", n);
    r.param("max_level", m);
    r.param("coeff_dim", d);
    r.param("lo", p.lo);
    r.param("hi", hi);
    const InvariantSubspace s = InvariantSubspace::levels(FockSpace(n, m, d), p.lo, hi);
    for (std::size_t i = 0; i < s.invariance_residuals.size(); ++i) {
      r.check("creation_invariance_" + std::to_string(i + 1), s.invariance_residuals[i], tol);
    }
    emit(g, subspace_to_json(s));
  } else {
    throw InputError("unknown example \"" + p.name + "\"");
  }
}

void build_w(const Params& p, const Globals& g, Report& r) {
  const Symbol l = load_symbol(p);
  const OdometerMap w = build_odometer(l);
  r.window("exact_below", w.exact_below());
  const RepresentationVerdict v = verify_fock_representation(w.op, g.tol);
  r.check("odometer_relations", v.max_residual, g.tol);
  r.check("symbol_recovered", v.symbol ? dense_diff(v.symbol->dense(), l.dense()) : INFINITY, g.tol);
  emit(g, operator_to_json(w.op));
}

void adjoint(const Params& p, const Globals& g, Report& r) {
  const Symbol l = load_symbol(p);
  const OdometerMap w = build_odometer(l);
  const Operator adj = adjoint_isometric(w, g.tol);
  r.window("exact_below", w.exact_below());
  r.check("formula_equals_conjugate_transpose", dense_diff(adj.matrix, w.op.matrix.adjoint()), g.tol);
  const FockSpace& space = w.op.space;
  const Index cols = space.level_offset(std::min(std::max(w.exact_below(), 0), space.max_level() + 1)) *
                     space.coeff_dim();
  const Matrix prod = adj.matrix * w.op.matrix.leftCols(cols);
  r.check("adjoint_times_w_identity", dense_diff(prod, Matrix::Identity(space.dim(), cols)), g.tol);
  emit(g, operator_to_json(adj));
}

ClassifyOptions classify_options(const Params& p, const Globals& g) {
  ClassifyOptions o;
  o.active_columns = p.active;
  o.window = p.window;
  o.seed = g.seed;
  return o;
}

bool check_isometry_into(const Symbol& l, const Params& p, const Globals& g, Report& r) {
  const IsometryReport iso = check_isometric(l, g.tol, classify_options(p, g));
  r.window("column_window", iso.window);
  r.check("symbol_isometry", iso.isometry_residual, g.tol);
  r.check("e1_support", iso.e1_support_residual, g.tol);
  r.check("gram_condition", iso.gram_residual, g.tol);
  if (iso.cross_checked) {
    r.check("column_orthonormality", iso.column_residual, g.tol);
    if (iso.random_checked) r.check("random_vector_norms", iso.random_vector_residual, g.tol);
  }
  r.value("el_residual", iso.el_residual);
  r.value("is_isometric", iso.is_isometric);
  return iso.is_isometric;
}

void check(const Params& p, const Globals& g, Report& r) {
  r.param("kind", p.kind);
  if (p.window >= 0) r.param("window", p.window);
  if (p.active >= 0) r.param("active_columns", p.active);
  if (p.kind == "representation") {
    const Operator op = p.operator_path.empty() ? build_odometer(load_symbol(p)).op
                                                : operator_from_json(read_json_file(p.operator_path));
    const RepresentationVerdict v = verify_fock_representation(op, g.tol);
    for (std::size_t i = 0; i < v.relation_residuals.size(); ++i) {
      r.check("relation_" + std::to_string(i + 1), v.relation_residuals[i], g.tol);
    }
    r.window("checked_levels_below", v.checked_levels);
    if (v.symbol) emit(g, symbol_to_json(*v.symbol));
    return;
  }
  const Symbol l = load_symbol(p);
  const bool iso = check_isometry_into(l, p, g, r);
  if (p.kind == "isometry") return;
  if (!iso) {
    r.error("symbol is not isometric; " + p.kind + " is only defined for isometric representations");
    return;
  }
  ClassifyOptions o = classify_options(p, g);
  if (p.kind == "nica") {
    const NicaReport nica = check_nica(l, g.tol, o);
    r.window("relation_window", nica.window);
    r.check("nica_residual", nica.nica_residual, g.tol);
    r.value("relation_residual", nica.relation_residual);
    r.value("relation_holds", nica.relation_holds);
    r.check("relation_agrees_with_symbol_test", nica.relation_holds == nica.is_nica, nica.relation_residual,
            g.tol);
  } else if (p.kind == "unitary") {
    const UnitaryReport u = check_unitary(l, g.tol, o);
    r.window("block_window", u.window);
    r.check("constant_symbol", l.above_vacuum_norm() <= g.tol, l.above_vacuum_norm(), g.tol);
    r.check("level0_unitary", u.level0_residual, g.tol);
    r.value("surjectivity_defect", u.surjectivity_defect);
    r.value("block_residual", u.block_residual);
    r.check("level_blocks_agree_with_symbol_test", u.blocks_unitary == u.is_unitary, u.block_residual, g.tol);
  } else {
    throw InputError("unknown check \"" + p.kind + "\"");
  }
}

Json dilation_to_json(const DilationData& d) {
  Json j;
  j["kind"] = "dilation";
  j["n"] = d.space.alphabet();
  j["max_level"] = d.space.max_level();
  j["defect_dim"] = d.defect_dim;
  j["rows"] = d.poisson.rows();
  j["cols"] = d.poisson.cols();
  Json list = Json::array();
  for (Index a = 0; a < d.poisson.rows(); ++a) {
    for (Index b = 0; b < d.poisson.cols(); ++b) {
      const Complex z = d.poisson(a, b);
      if (z != Complex(0.0, 0.0)) list.push_back(Json::array({a, b, z.real(), z.imag()}));
    }
  }
  j["poisson"] = std::move(list);
  j["defect_basis"] = dense_to_json(d.defect_basis);
  return j;
}

void dilate(const Params& p, const Globals& g, Report& r) {
  const ContractivePair pair = load_pair(p);
  const int m = or_default(p.level, 6);
  r.param("max_level", m);
  const DilationData d = poisson_kernel(pair.t, m, g.tol);
  r.value("defect_dim", d.defect_dim);
  r.check("purity_tail", d.purity_residual, g.tol);
  r.check("poisson_isometry", d.isometry_defect, g.tol);
  r.check("intertwining", intertwining_residual(pair.t, d), g.tol);
  r.window("intertwining_rows_below", m);
  emit(g, dilation_to_json(d));
}

void lift(const Params& p, const Globals& g, Report& r) {
  const ContractivePair pair = load_pair(p);
  const int m = or_default(p.level, 6);
  r.param("max_level", m);
  const LiftResult lr = odometer_lift(pair, m, g.tol);
  r.window("lift_rows_below", lr.window);
  r.check("lift_intertwining", lr.residual, g.tol);
  r.check("round_trip_compression", lr.round_trip_residual, g.tol);
  r.check("model_space_invariance", lr.invariance_residual, g.tol);
  r.check("norm_lower", lr.pair_norm <= lr.lift_norm + g.tol, std::max(0.0, lr.pair_norm - lr.lift_norm), g.tol);
  r.check("norm_upper", lr.lift_norm <= 1.0 + lr.pair_norm + g.tol,
          std::max(0.0, lr.lift_norm - 1.0 - lr.pair_norm), g.tol);
  r.value("pair_norm", lr.pair_norm);
  r.value("lift_norm", lr.lift_norm);
  emit(g, symbol_to_json(lr.symbol));
}

void compress(const Params& p, const Globals& g, Report& r) {
  const Symbol l = load_symbol(p);
  const int k = or_default(p.k, 1);
  r.param("k", k);
  const ContractivePair pair = compress_pair(l, k);
  const PairVerdict v = verify_pair(pair, g.tol);
  for (std::size_t i = 0; i < v.relation_residuals.size(); ++i) {
    r.check("pair_relation_" + std::to_string(i + 1), v.relation_residuals[i], g.tol);
  }
  r.check("purity", v.purity.pure, v.purity.residuals.empty() ? 0.0 : v.purity.residuals.back(), g.tol);
  emit(g, pair_to_json(pair));
}

void factor(const Params& p, const Globals& g, Report& r) {
  if (p.subspace_path.empty()) throw InputError("--subspace is required");
  const InvariantSubspace s = subspace_from_json(read_json_file(p.subspace_path), g.tol);
  const Symbol l = load_symbol(p);
  if (!(l.space() == s.ambient)) throw InputError("symbol and subspace live in different spaces");
  for (std::size_t i = 0; i < s.invariance_residuals.size(); ++i) {
    r.check("creation_invariance_" + std::to_string(i + 1), s.invariance_residuals[i], g.tol);
  }
  if (!s.is_invariant(g.tol)) return;
  const BeurlingFactorization f = beurling_factorize(s, g.tol);
  r.value("wandering_dim", f.wandering_dim);
  r.window("word_budget", f.budget);
  r.check("inner", f.inner_residual, g.tol);
  r.check("multi_analytic", f.multi_analytic_residual, g.tol);
  r.check("phi_equals_inclusion_after_pi", f.factor_residual, g.tol);
  r.value("coverage_rank", f.coverage_rank);
  r.value("subspace_rank", s.rank());
  r.value("covers", f.covers);
  const InducedSymbol ind = induced_symbol(s, f, build_odometer(l), g.tol);
  r.check("odometer_invariance", ind.invariance_residual, g.tol);
  if (!ind.symbol) return;
  r.window("intertwining_star_levels_below", ind.window);
  r.check("intertwining", ind.intertwining_residual, g.tol);
  r.check("compression", ind.compression_residual, g.tol);
  emit(g, symbol_to_json(*ind.symbol));
}

void spectrum(const Params& p, const Globals& g, Report& r) {
  const Symbol l = load_symbol(p);
  const int m = or_default(p.level, 6);
  r.param("max_level", m);
  const SpectrumReport s = spectrum_per_level(l, m, g.tol);
  Json levels = Json::array();
  for (const auto& lvl : s.per_level) {
    const std::string tag = "_m" + std::to_string(lvl.level);
    r.check("hausdorff" + tag, lvl.hausdorff, g.tol);
    r.check("unit_modulus" + tag, lvl.unit_modulus_residual, g.tol);
    r.check("block_unitary" + tag, lvl.block_unitary_residual, g.tol);
    r.check("power_identity" + tag, lvl.power_residual, g.tol);
    Json eig = Json::array();
    for (Complex z : lvl.eigenvalues) eig.push_back(complex_to_json(z));
    levels.push_back({{"level", lvl.level}, {"eigenvalues", std::move(eig)}});
  }
  r.value("max_gap", s.max_gap);
  r.value("uniform_gap", 2.0 * std::numbers::pi / std::pow(static_cast<double>(l.space().alphabet()), m));
  if (!p.histogram_path.empty()) {
    std::ofstream h(p.histogram_path);
    if (!h) throw InputError("cannot write " + p.histogram_path);
    h << angle_histogram(s, p.bins);
  }
  emit(g, Json{{"kind", "spectrum"}, {"levels", std::move(levels)}, {"max_gap", s.max_gap}});
}

void word_index_cmd(const Params& p, const Globals&, Report& r) {
  const int n = or_default(p.n, 2);
  const int m = or_default(p.level, 3);
  std::vector<int> letters;
  std::stringstream ss(p.word);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      letters.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw InputError("bad letter \"" + tok + "\"");
    }
  }
  const Word w(n, letters);
  r.param("word", w.to_string());
  r.value("index", word_index(w, FockSpace(n, m, 1)));
}

}  // namespace

double default_tolerance() {
  if (const char* env = std::getenv("ODOFOCK_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && *end == '\0' && std::isfinite(v) && v > 0) return v;
  }
  return kDefaultTol;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Odometer semigroup representations on truncated Fock spaces", "odofock"};
  app.fallthrough();
  app.require_subcommand(1);
  Globals g;
  g.tol = default_tolerance();
  Params p;
  app.add_option("--tol", g.tol, "tolerance for every check")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for randomized cross-checks");
  app.add_option("--out", g.out_path, "write the command's artifact here");

  using Handler = std::function<void(const Params&, const Globals&, Report&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const std::string& name, const std::string& help, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };

  auto* gen = add("gen-example", "emit a gallery example", gen_example);
  gen->add_option("name", p.name, "adding-machine | weak-bishift | shift-symbol | golden-ratio | vacuum | "
                                  "rotation | levels-subspace")
      ->required();
  gen->add_option("--q-re", p.q_re);
  gen->add_option("--q-im", p.q_im);
  gen->add_option("--size", p.size);
  gen->add_option("--dim", p.dim);
  gen->add_option("--level", p.level);
  gen->add_option("--n", p.n);
  gen->add_option("--terms", p.terms);
  gen->add_option("--c-re", p.c_re);
  gen->add_option("--c-im", p.c_im);
  gen->add_option("--theta", p.theta);
  gen->add_option("--lo", p.lo);
  gen->add_option("--hi", p.hi);

  add("build-w", "build the odometer map of a symbol", build_w)->add_option("--symbol", p.symbol_path);
  add("adjoint", "closed-form adjoint of an isometric odometer map", adjoint)
      ->add_option("--symbol", p.symbol_path);

  auto* chk = add("check", "representation | isometry | nica | unitary", check);
  chk->add_option("kind", p.kind)
      ->required()
      ->check(CLI::IsMember({"representation", "isometry", "nica", "unitary"}));
  chk->add_option("--symbol", p.symbol_path);
  chk->add_option("--operator", p.operator_path);
  chk->add_option("--window", p.window, "column level window for cross-checks");
  chk->add_option("--active-columns", p.active, "classify only the first k coefficient columns");

  auto* dil = add("dilate", "Poisson kernel of a pure row contraction", dilate);
  dil->add_option("--pair", p.pair_path);
  dil->add_option("--level", p.level);
  auto* lft = add("lift", "odometer lift of a contractive pair", lift);
  lft->add_option("--pair", p.pair_path);
  lft->add_option("--level", p.level);
  auto* cmp = add("compress", "compress a Fock representation to levels <= k", compress);
  cmp->add_option("--symbol", p.symbol_path);
  cmp->add_option("--k", p.k);
  auto* fac = add("factor", "wandering-subspace factorization and induced symbol", factor);
  fac->add_option("--subspace", p.subspace_path);
  fac->add_option("--symbol", p.symbol_path);
  auto* spc = add("spectrum", "level-block spectra of a unitary odometer map", spectrum);
  spc->add_option("--symbol", p.symbol_path);
  spc->add_option("--level", p.level);
  spc->add_option("--histogram", p.histogram_path, "write an angle histogram here");
  spc->add_option("--bins", p.bins);
  auto* wix = add("word-index", "canonical index of a word", word_index_cmd);
  wix->add_option("--n", p.n);
  wix->add_option("--level", p.level);
  wix->add_option("--word", p.word, "comma-separated letters")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "odofock: " << e.what() << '\n';
    return 2;
  }

  for (auto& [sub, handler] : commands) {
    if (!sub->parsed()) continue;
    Report report(sub->get_name());
    const auto start = std::chrono::steady_clock::now();
    int code = 0;
    try {
      handler(p, g, report);
      code = report.passed() ? 0 : 1;
    } catch (const DilationInexactError& e) {
      report.check("dilation_exact", false, e.residual(), g.tol);
      report.error(e.what());
      code = 1;
    } catch (const PreconditionError& e) {
      report.error(e.what());
      code = 1;
    } catch (const Error& e) {
      report.error(e.what());
      err << "odofock: " << e.what() << '\n';
      code = 2;
    }
    report.param("tol", g.tol);
    report.param("seed", g.seed);
    report.wall_time(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    out << dump(report.to_json()) << '\n';
    return code;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"odofock"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace odofock
