#pragma once

#include <complex>
#include <string>
#include <vector>

#include "jsr.hpp"
#include "model.hpp"
#include "vecm.hpp"

namespace cksvar {

inline constexpr double kUnitRootWindow = 1e-6;

// Roots of det Phi+-(lambda), from the nonzero eigenvalues of the companion matrix.
std::vector<std::complex<double>> det_poly_roots(const CksvarModel& model, int regime);
Mat companion_matrix(const CksvarModel& model, int regime);

// Case (i): F_delta of dimension p(k-1)+r+k, affine in delta.
Mat build_F(const VecmForm& vecm, double delta, double tol = kRankTol);
CompanionSet build_F_set(const VecmForm& vecm, double tol = kRankTol);

// Case (ii): {I + bold_beta(+1)' bold_alpha, I + bold_beta(-1)' bold_alpha}.
CompanionSet build_case2_set(const VecmForm& vecm, double tol = kRankTol);

struct NamedCheck {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double lower = 0.0, upper = 0.0;  // JSR checks only
  std::string detail;
};

struct AssumptionReport {
  DgpReport dgp;
  CaseClassification classification;
  std::vector<std::complex<double>> roots_plus, roots_minus;
  int q_plus = 0, q_minus = 0;
  bool roots_ok = false;
  bool cvar_roots_ok = false;  // roots valid and q+- = p - r+-
  bool deterministic_ok = false;
  std::vector<NamedCheck> case_specific;
  std::vector<std::string> messages;
  bool all_ok() const;
};

AssumptionReport verify_assumptions(const CksvarModel& model, double tol = kRankTol, int depth = kJsrDepth,
                                    long long budget = kJsrBudget);

}  // namespace cksvar
