#include "weierbox/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "weierbox/cover.hpp"
#include "weierbox/dims.hpp"
#include "weierbox/inclusion.hpp"
#include "weierbox/series.hpp"

namespace weierbox {

namespace {

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Options {
  CLI::Option* lambda{nullptr};
  CLI::Option* b{nullptr};
  CLI::Option* levels{nullptr};
};

struct Parsed {
  RunConfig cfg;
  std::string levels{"1..4"};
  std::uint64_t grid{1024};
  std::map<std::string, Options> opts;
};

void add_curve_options(CLI::App* app, Parsed& p) {
  app->add_option("--curve", p.cfg.curve, "circle | square | ellipse | polyline | counterexample | constant")
      ->check(CLI::IsMember({"circle", "square", "ellipse", "polyline", "counterexample", "constant"}));
  app->add_option("--side", p.cfg.side, "square side");
  app->add_option("--rx", p.cfg.rx, "ellipse x radius");
  app->add_option("--ry", p.cfg.ry, "ellipse y radius");
  app->add_option("--polyline", p.cfg.polyline, "file of `s x y` lines");
  app->add_option("--resolution", p.cfg.resolution, "complement raster size");
}

Options add_series_options(CLI::App* app, Parsed& p) {
  Options o;
  o.lambda = app->add_option("--lambda", p.cfg.lambda, "contraction lambda");
  o.b = app->add_option("--b", p.cfg.b, "integer base b");
  app->add_option("--tail-tol", p.cfg.tail_tol, "series truncation tolerance");
  return o;
}

void add_sampling_options(CLI::App* app, Parsed& p) {
  app->add_option("--rel-tol", p.cfg.sampling.rel_tol, "relative count increase that stops refinement");
  app->add_option("--initial-samples", p.cfg.sampling.initial_samples, "lattice size per interval");
  app->add_option("--max-samples", p.cfg.sampling.max_samples, "cap on lattice size per interval");
  app->add_flag("--fixed-grid", p.cfg.sampling.fixed_grid, "no refinement");
}

void add_output_option(CLI::App* app, Parsed& p) {
  app->add_option("--output", p.cfg.output, "write the report to this file");
}

PeriodicCurve make_curve(const RunConfig& c) {
  if (c.curve == "circle") return PeriodicCurve::unit_circle();
  if (c.curve == "square") return PeriodicCurve::square_loop(c.side);
  if (c.curve == "ellipse") return PeriodicCurve::ellipse(c.rx, c.ry);
  if (c.curve == "constant") return PeriodicCurve::constant({0.0, 0.0});
  if (c.curve == "counterexample") return make_counterexample_curve(c.b, c.lambda, 1);
  if (c.polyline.empty()) throw UsageError("--curve polyline needs --polyline FILE");
  return load_polyline_file(c.polyline);
}

// Recenters on the eps-disc without redoing the complement analysis.
void recenter_in_place(PeriodicCurve& curve, CurveConstants& constants) {
  if (constants.complement_connected) return;
  curve = recenter(curve, constants.center);
  constants.center = {0.0, 0.0};
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + cfg.output);
  f << text;
  if (!f) throw std::runtime_error("failed writing output file " + cfg.output);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<BoxCountResult> count_levels(const PeriodicCurve& curve, const WeierstrassParams& params,
                                         const RunConfig& cfg) {
  if (cfg.level_min < 1) throw UsageError("levels must start at 1 or later");
  std::vector<BoxCountResult> rows;
  for (int n = cfg.level_min; n <= cfg.level_max; ++n) rows.push_back(count_graph_cubes(curve, params, n, cfg.sampling));
  return rows;
}

int cmd_constants(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_curve(cfg);
  Json j = constants_report(compute_constants(curve, cfg.resolution));
  const TheoreticalDimension d = theoretical_dimension(cfg.b, cfg.lambda);
  j["theoretical_D"] = d.dimension;
  j["regime"] = to_string(d.regime);
  j["config"] = to_json(cfg);
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_eval(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_curve(cfg);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  const WValue w = w_eval(curve, params, cfg.x);
  Json j{{"x", cfg.x}, {"value", to_json(w.value)}, {"tail_bound", w.tail_bound}, {"config", to_json(cfg)}};
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_boxcount(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_curve(cfg);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  std::ostringstream csv;
  csv << kBoxCountCsvHeader << '\n';
  for (const auto& r : count_levels(curve, params, cfg)) csv << to_csv_row(r) << '\n';
  emit(cfg, csv.str(), out);
  return 0;
}

int cmd_dimension(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_curve(cfg);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  const auto rows = count_levels(curve, params, cfg);
  Json counts = Json::array();
  for (const auto& r : rows) counts.push_back(to_json(r));
  const auto lambda = cfg.b * cfg.lambda > 1.0 ? std::optional<double>(cfg.lambda) : std::nullopt;
  Json j = to_json(fit_box_dimension(rows, lambda));
  j["counts"] = counts;
  j["config"] = to_json(cfg);
  emit(cfg, dump(j), out);
  return 0;
}

int cmd_lemma21(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_curve(cfg);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  if (cfg.level_min < 1) throw UsageError("levels must start at 1 or later");
  std::mt19937_64 rng(cfg.sampling.seed);
  ResidualSummary first, second;
  for (int n = cfg.level_min; n <= cfg.level_max; ++n) {
    const std::uint64_t bn = ipow(static_cast<std::uint64_t>(cfg.b), n);
    std::vector<std::uint64_t> ks;
    if (bn <= cfg.count) {
      for (std::uint64_t k = 0; k < bn; ++k) ks.push_back(k);
    } else {
      std::uniform_int_distribution<std::uint64_t> pick(0, bn - 1);
      for (std::uint64_t i = 0; i < cfg.count; ++i) ks.push_back(pick(rng));
    }
    for (const auto k : ks)
      for (int j = 0; j < cfg.b; ++j) {
        first.add(residual_first_order(curve, params, n, static_cast<std::int64_t>(k), j));
        second.add(residual_second_order(curve, params, n, static_cast<std::int64_t>(k), j));
      }
  }
  const bool pass = first.pass && second.pass;
  Json j{{"first_order", to_json(first)}, {"second_order", to_json(second)}, {"pass", pass},
         {"config", to_json(cfg)}};
  emit(cfg, dump(j), out);
  return pass ? 0 : 1;
}

int cmd_covering(const RunConfig& cfg, std::uint64_t grid, std::ostream& out) {
  PeriodicCurve curve = make_curve(cfg);
  CurveConstants constants = compute_constants(curve, cfg.resolution);
  recenter_in_place(curve, constants);
  CoveringSampling sampling;
  sampling.rhs_s = sampling.rhs_t = grid;
  const CoveringMode mode = cfg.mode == "ell" ? CoveringMode::ell_mode(cfg.beta, cfg.b) : CoveringMode::plain();
  const InclusionReport rep = verify_covering_inclusion(curve, constants, cfg.lambda, mode, sampling);
  Json j = to_json(rep);
  j["config"] = to_json(cfg);
  emit(cfg, dump(j), out);
  return rep.passed ? 0 : 1;
}

int cmd_openset(const RunConfig& cfg, std::ostream& out) {
  if (cfg.level_min != cfg.level_max) throw UsageError("verify-openset takes a single level, e.g. --levels 1");
  PeriodicCurve curve = make_curve(cfg);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  CurveConstants constants = compute_constants(curve, cfg.resolution);
  recenter_in_place(curve, constants);
  DiscSampling sampling;
  sampling.image_samples = cfg.image_samples;
  sampling.seed = cfg.sampling.seed;
  const DiscVariant variant = cfg.mode == "ell" ? DiscVariant::kEll : DiscVariant::kPlain;
  bool all = true;
  Json reports = Json::array();
  for (const auto& rep : verify_disc_in_image(curve, constants, params, cfg.level_min, cfg.ks, variant, sampling)) {
    all = all && rep.passed;
    Json j = to_json(rep);
    j["config"] = to_json(cfg);
    reports.push_back(j);
  }
  emit(cfg, dump(reports.size() == 1 ? reports.front() : reports), out);
  return all ? 0 : 1;
}

int cmd_counterexample(const RunConfig& cfg, std::ostream& out) {
  const PeriodicCurve curve = make_counterexample_curve(cfg.b, cfg.lambda, 1);
  const WeierstrassParams params(cfg.lambda, cfg.b, cfg.tail_tol);
  const CurveConstants constants = compute_constants(curve, cfg.resolution);

  std::mt19937_64 rng(cfg.sampling.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double tol = 3.0 * cfg.tail_tol;
  double deviation = 0.0;
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    const double x = unit(rng);
    const Point2 w0{std::cos(kTwoPi * x), std::sin(kTwoPi * x)};
    deviation = std::max(deviation, distance(w_eval(curve, params, x).value, w0));
  }

  const auto rows = count_levels(curve, params, cfg);
  const DimensionEstimate est = fit_box_dimension(rows, cfg.lambda);
  Json counts = Json::array();
  for (const auto& r : rows) counts.push_back(to_json(r));

  const bool disconnected = !constants.complement_connected && constants.epsilon > 0.0;
  const bool matches = deviation <= tol;
  const bool smooth = std::abs(est.slope - 1.0) <= 0.1;
  Json j{{"complement", {{"connected", constants.complement_connected}, {"epsilon", constants.epsilon}}},
         {"max_deviation_from_w0", deviation},
         {"deviation_tolerance", tol},
         {"estimate", to_json(est)},
         {"counts", counts},
         {"checks", {{"complement_disconnected", disconnected}, {"w_equals_w0", matches}, {"slope_near_one", smooth}}},
         {"pass", disconnected && matches && smooth},
         {"config", to_json(cfg)}};
  emit(cfg, dump(j), out);
  return disconnected && matches && smooth ? 0 : 1;
}

void report_error(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

Json to_json(const RunConfig& c) {
  Json curve{{"name", c.curve}};
  if (c.curve == "square") curve["side"] = c.side;
  if (c.curve == "ellipse") {
    curve["rx"] = c.rx;
    curve["ry"] = c.ry;
  }
  if (c.curve == "polyline") curve["file"] = c.polyline;
  return Json{{"command", c.command},
              {"curve", curve},
              {"lambda", c.lambda},
              {"b", c.b},
              {"tail_tol", c.tail_tol},
              {"resolution", c.resolution},
              {"levels", {c.level_min, c.level_max}},
              {"sampling", to_json(c.sampling)},
              {"x", c.x},
              {"count", c.count},
              {"mode", c.mode},
              {"beta", c.beta},
              {"k", c.ks},
              {"image_samples", c.image_samples},
              {"output", c.output}};
}

void parse_levels(const std::string& text, int& lo, int& hi) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
    } else {
      const std::string a = text.substr(0, dots), b = text.substr(dots + 2);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(text);
      hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw UsageError("malformed level range '" + text + "', expected a..b");
  }
  if (lo > hi) throw UsageError("empty level range '" + text + "'");
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Parsed p;
  CLI::App app{"Weierstrass-type curves: evaluation, box counting and residual checks", "weierbox"};
  app.require_subcommand(1);

  auto* constants = app.add_subcommand("constants", "L, Delta, eps and the threshold constants");
  add_curve_options(constants, p);
  add_series_options(constants, p);
  add_output_option(constants, p);

  auto* eval = app.add_subcommand("eval", "W(x) with its tail bound");
  add_curve_options(eval, p);
  add_series_options(eval, p);
  eval->add_option("--x", p.cfg.x, "argument");
  add_output_option(eval, p);

  auto* boxcount = app.add_subcommand("boxcount", "occupied b-adic cubes per level, as CSV");
  auto* dimension = app.add_subcommand("dimension", "fitted box dimension against the level range");
  for (auto* sub : {boxcount, dimension}) {
    add_curve_options(sub, p);
    p.opts[sub->get_name()] = add_series_options(sub, p);
    add_sampling_options(sub, p);
    sub->add_option("--seed", p.cfg.sampling.seed, "lattice shift seed");
    sub->add_option("--levels", p.levels, "level range a..b");
    add_output_option(sub, p);
  }

  auto* lemma = app.add_subcommand("verify-lemma21", "first and second order residual bounds");
  add_curve_options(lemma, p);
  add_series_options(lemma, p);
  lemma->add_option("--levels", p.levels, "level range a..b");
  lemma->add_option("--count", p.cfg.count, "random k per level when b^n exceeds it");
  lemma->add_option("--seed", p.cfg.sampling.seed, "RNG seed");
  add_output_option(lemma, p);

  auto* covering = app.add_subcommand("verify-covering", "covering inclusion for phi or ell_beta");
  add_curve_options(covering, p);
  add_series_options(covering, p);
  covering->add_option("--mode", p.cfg.mode, "plain | ell")->check(CLI::IsMember({"plain", "ell"}));
  covering->add_option("--beta", p.cfg.beta, "beta for ell mode");
  covering->add_option("--grid", p.grid, "right-hand (s, t) grid size per axis")->check(CLI::Range(2, 8192));
  add_output_option(covering, p);

  auto* openset = app.add_subcommand("verify-openset", "disc-in-image inclusion on one b-adic interval");
  add_curve_options(openset, p);
  add_series_options(openset, p);
  openset->add_option("--mode", p.cfg.mode, "plain | ell")->check(CLI::IsMember({"plain", "ell"}));
  openset->add_option("--levels", p.levels, "level n");
  openset->add_option("--k", p.cfg.ks, "interval indices");
  openset->add_option("--image-samples", p.cfg.image_samples, "lattice points of W on the interval");
  openset->add_option("--seed", p.cfg.sampling.seed, "lattice shift seed");
  add_output_option(openset, p);

  auto* counter = app.add_subcommand("counterexample", "phi = W0 - lambda W0(b.) and its checks");
  counter->add_option("--resolution", p.cfg.resolution, "complement raster size");
  p.opts["counterexample"] = add_series_options(counter, p);
  add_sampling_options(counter, p);
  counter->add_option("--levels", p.levels, "level range a..b");
  counter->add_option("--count", p.cfg.count, "random x for the W = W0 check");
  counter->add_option("--seed", p.cfg.sampling.seed, "seed for x and the lattice shift");
  add_output_option(counter, p);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    report_error(err, "usage", e.what());
    return 2;
  }

  RunConfig& cfg = p.cfg;
  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "counterexample") {
      cfg.curve = "counterexample";
      const Options& o = p.opts["counterexample"];
      if (o.lambda->count() == 0) cfg.lambda = 0.8;
      if (cfg.b < 2) throw UsageError("b must be >= 2");
      if (counter->get_option("--levels")->count() == 0) p.levels = "4..10";
    }
    if (cfg.command == "verify-openset" && openset->get_option("--levels")->count() == 0) p.levels = "1";
    if (cfg.command == "dimension" && dimension->get_option("--levels")->count() == 0) p.levels = "3..6";
    parse_levels(p.levels, cfg.level_min, cfg.level_max);
    if (cfg.curve == "polyline" && cfg.polyline.empty()) throw UsageError("--curve polyline needs --polyline FILE");
    if (cfg.resolution < 64) throw UsageError("--resolution must be at least 64");

    if (cfg.command == "constants") return cmd_constants(cfg, out);
    if (cfg.command == "eval") return cmd_eval(cfg, out);
    if (cfg.command == "boxcount") return cmd_boxcount(cfg, out);
    if (cfg.command == "dimension") return cmd_dimension(cfg, out);
    if (cfg.command == "verify-lemma21") return cmd_lemma21(cfg, out);
    if (cfg.command == "verify-covering") return cmd_covering(cfg, p.grid, out);
    if (cfg.command == "verify-openset") return cmd_openset(cfg, out);
    return cmd_counterexample(cfg, out);
  } catch (const HypothesisError& e) {
    report_error(err, "hypothesis", e.what());
  } catch (const UsageError& e) {
    report_error(err, "usage", e.what());
  } catch (const std::invalid_argument& e) {
    report_error(err, "invalid", e.what());
  } catch (const std::out_of_range& e) {
    report_error(err, "invalid", e.what());
  } catch (const std::exception& e) {
    report_error(err, "failure", e.what());
  }
  return 2;
}

}  // namespace weierbox
