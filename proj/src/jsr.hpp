#pragma once

#include <string>
#include <vector>

#include "linalg.hpp"

namespace cksvar {

struct CompanionSet {
  std::vector<Mat> matrices;
  std::vector<std::string> labels;
  void check() const;
  int dim() const { return matrices.empty() ? 0 : static_cast<int>(matrices[0].rows()); }
};

struct JsrEstimate {
  double lower = 0.0;
  double upper = 0.0;
  int depth = 0;  // product length reached
  bool certified_lt_one = false;
  long long products = 0;
  bool budget_exhausted = false;
  bool exact = false;  // a single distinct matrix: both bounds are its spectral radius
  std::vector<double> lower_by_depth, upper_by_depth;
};

inline constexpr int kJsrDepth = 12;
inline constexpr long long kJsrBudget = 1000000;

// Breadth-first enumeration of products. At each length t the children of the
// surviving products are formed; a child is pruned once ||P||^{1/t} is no
// larger than the running lower bound. The level bound
//   U_t = max(L_t, max over unpruned children ||P||^{1/t})
// is valid because any long product splits into pruned prefixes and
// length-t blocks; upper = min_t U_t.
JsrEstimate jsr_bounds(const CompanionSet& set, int depth = kJsrDepth, long long budget = kJsrBudget,
                       int threads = 0);

}  // namespace cksvar
