#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "weierbox/report.hpp"

namespace weierbox {

/// Fully resolved invocation; echoed into every JSON report.
struct RunConfig {
  std::string command;
  std::string curve{"circle"};
  double side{1.0};
  double rx{1.0};
  double ry{1.0};
  std::string polyline;
  double lambda{0.5};
  int b{2};
  double tail_tol{1e-12};
  int resolution{2048};
  int level_min{1};
  int level_max{4};
  SamplingPolicy sampling;
  double x{0.0};
  /// verify-lemma21: random k per level; counterexample: random x.
  std::uint64_t count{1000};
  /// verify-covering: plain | ell.  verify-openset: plain | ell.
  std::string mode{"plain"};
  double beta{0.0};
  std::vector<std::int64_t> ks{0};
  std::uint64_t image_samples{std::uint64_t{1} << 18};
  std::string output;
};

Json to_json(const RunConfig& c);

/// Parses "a..b" or "a" into an inclusive level range.
void parse_levels(const std::string& text, int& lo, int& hi);

/// Entry point behind the executable. args excludes the program name.
/// Returns 0 on success, 1 when a verification fails, 2 on usage or
/// hypothesis errors (with a one-line JSON error on `err`).
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace weierbox
