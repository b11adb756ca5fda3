#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "limit.hpp"
#include "model.hpp"
#include "simulation.hpp"
#include "vecm.hpp"

namespace cksvar {

using ParamMap = std::map<std::string, double>;

struct ExampleParam {
  std::string name;
  double def = 0.0;
  double lo = -1e300, hi = 1e300;
  bool lo_open = false, hi_open = false;
  std::string range;  // human-readable constraint
};

struct ExampleFixture {
  std::string name;
  std::string description;
  std::vector<ExampleParam> params;
  std::function<CksvarModel(const ParamMap&)> build;
};

const std::vector<ExampleFixture>& example_registry();
const ExampleFixture& find_example(const std::string& name);
// Unknown names, unknown parameters and out-of-range values throw DimensionError.
CksvarModel build_example(const std::string& name, const ParamMap& params = {});

enum class Functional { TerminalValue, PathSup, OccupationNegative, SupAbsYMinus };
const char* functional_name(Functional f);
Functional functional_from_name(const std::string& s);

// Every pass/fail tolerance used by run_mc and residual_check.
struct Thresholds {
  double ks_alpha = 0.01;
  double ks_slack = 1.5;           // times the two-sample critical value
  double y_minus_median = 0.05;    // case (i): median of n^{-1/2} max|y-|
  double occupation_case1 = 0.10;  // case (i): median fraction of time below zero
  double growth_minus_hi = 2.0;    // I*(0): median M_{4n}/M_n below this
  double growth_plus_lo = 1.5, growth_plus_hi = 2.8;
  double residual = 0.05;          // n^{-1/2} max|beta'z_t|
};
inline constexpr Thresholds kThresholds{};

struct McSpec {
  CksvarModel model;
  std::string label;
  std::optional<TableConfig> expect;
  std::vector<int> n_list{1000};
  int reps = 200;
  int limit_reps = 0;  // 0: same as reps
  std::vector<Functional> functionals;  // empty: defaults for the case
  std::vector<int> growth_n;            // n values for M_{4n}/M_n diagnostics
  std::uint64_t seed = 1;
  int grid = kDefaultGrid;
  int threads = 0;
  Vec z0;  // common-trend start, empty means zero
  void check() const;
};

struct FunctionalResult {
  Functional functional = Functional::TerminalValue;
  int n = 0;
  double ks = 0.0;
  double threshold = 0.0;
  double model_median = 0.0, limit_median = 0.0;
  std::string criterion;
  bool pass = false;
  std::vector<double> model_sample, limit_sample;
};

struct GrowthResult {
  std::string series;  // "y_minus" or "y_plus"
  int n = 0;
  double median_ratio = 0.0;
  double lo = 0.0, hi = 0.0;
  bool pass = false;
};

struct McReport {
  std::string label;
  CaseClassification classification;
  bool assumptions_ok = false;
  std::vector<std::string> warnings;
  std::vector<FunctionalResult> results;
  std::vector<GrowthResult> growth;
  double seconds_model = 0.0, seconds_limit = 0.0;
  bool pass() const;
};

McReport run_mc(const McSpec& spec);

// Functionals of the scaled path n^{-1/2} y_{[n lambda]}.
double functional_of_path(Functional f, const Path& path);
double functional_of_limit(Functional f, const LimitPath& lp);

// Replication-parallel map with results stored by index.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

struct ResidualEntry {
  std::string name;  // e.g. "beta+ on Z+"
  int regime = +1;   // regime of beta
  int region = +1;   // sign region of z_t it is evaluated on
  double scaled_max = 0.0;
  double growth_ratio = 0.0;  // max over t <= n vs t <= n/4
  int count = 0;              // observations in the region
  bool i0 = false;
};

struct ResidualReport {
  std::vector<ResidualEntry> entries;
};

ResidualReport residual_check(const Path& path, const VecmForm& vecm, const CaseClassification& cls,
                              double threshold = kThresholds.residual);

}  // namespace cksvar
