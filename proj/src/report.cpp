#include "weierbox/report.hpp"

namespace weierbox {

Json to_json(Point2 p) { return Json::array({p.x, p.y}); }

Json to_json(const CurveConstants& c) {
  return Json{{"L", c.L},
              {"delta", c.delta},
              {"epsilon", c.epsilon},
              {"z0", to_json(c.center)},
              {"connected", c.complement_connected},
              {"resolution_error", c.resolution_error}};
}

Json to_json(const ThresholdConstants& t) {
  return Json{{"c0", t.c0},
              {"c1", t.c1},
              {"c2", t.c2},
              {"c", t.c},
              {"c0_residual", t.c0_residual},
              {"c1_residual", t.c1_residual},
              {"c2_residual", t.c2_residual},
              {"c_residual", t.c_residual}};
}

Json constants_report(const CurveConstants& c) {
  Json j = to_json(c);
  if (c.complement_connected || !(c.epsilon > 0.0)) {
    for (const char* key : {"c0", "c1", "c2", "c"}) j[key] = nullptr;
    return j;
  }
  const Json t = to_json(solve_threshold_constants(c.L, c.delta, c.epsilon));
  for (const auto& [key, value] : t.items()) j[key] = value;
  return j;
}

Json to_json(const BoxCountResult& r) {
  Json j{{"n", r.n}, {"b", r.b}, {"count", r.count}, {"samples_used", r.samples_used}, {"converged", r.converged}};
  if (!r.per_interval_counts.empty()) j["per_interval_counts"] = r.per_interval_counts;
  return j;
}

Json to_json(const DimensionEstimate& d) {
  Json j{{"slope", d.slope},
         {"intercept", d.intercept},
         {"residual_rms", d.residual_rms},
         {"level_range", {d.n_min, d.n_max}}};
  if (d.theoretical) {
    j["theoretical"] = d.theoretical->dimension;
    j["regime"] = to_string(d.theoretical->regime);
  } else {
    j["theoretical"] = nullptr;
    j["regime"] = nullptr;
  }
  return j;
}

Json to_json(const InclusionReport& r) {
  Json j{{"variant", r.variant},
         {"points_checked", r.points_checked},
         {"max_defect", r.max_defect},
         {"tolerance", r.tolerance},
         {"passed", r.passed},
         {"gap_observed", r.gap_observed},
         {"margin", r.margin},
         {"hypothesis", r.hypothesis}};
  j["beta"] = r.beta ? Json(*r.beta) : Json(nullptr);
  j["n"] = r.n ? Json(*r.n) : Json(nullptr);
  j["k"] = r.k ? Json(*r.k) : Json(nullptr);
  return j;
}

Json to_json(const SamplingPolicy& p) {
  return Json{{"rel_tol", p.rel_tol},
              {"initial_samples", p.initial_samples},
              {"max_samples", p.max_samples},
              {"seed", p.seed},
              {"fixed_grid", p.fixed_grid}};
}

void ResidualSummary::add(const Residual& r) {
  const double norm = r.residual.norm();
  const double limit = r.bound + r.slack;
  ++checks;
  if (norm > limit) {
    ++violations;
    pass = false;
  }
  if (norm - limit > worst_excess) {
    worst_excess = norm - limit;
    bound = limit;
  }
  max_residual = std::max(max_residual, norm);
}

Json to_json(const ResidualSummary& s) {
  return Json{{"max_residual", s.max_residual},
              {"bound", s.bound},
              {"pass", s.pass},
              {"checks", s.checks},
              {"violations", s.violations},
              {"worst_excess", s.worst_excess}};
}

}  // namespace weierbox
