#pragma once

#include <string>
#include <vector>

#include "model.hpp"

namespace cksvar {

// Levels-and-differences form. Always carries k >= 2 (k = 1 is padded).
struct VecmForm {
  int p = 1;
  int k = 2;
  bool canonical = false;
  Vec pi_plus, pi_minus;
  Mat Pi_x;                                  // p x (p-1)
  std::vector<Mat> Gamma_plus, Gamma_minus;  // k-1 blocks, each p x p = [gamma_i+-, Gamma_i^x]
  Vec c;
  Mat Sigma;
  Mat Phi0_plus, Phi0_minus;  // p x p
  CksvarModel source;         // padded, b = 0

  Mat Pi(int regime) const;
  Mat Gamma1(int regime) const;            // Gamma+-(1) = Phi0+- - sum Gamma_i+-
  Mat Gamma_star(int i) const;             // p x (p+1): [gamma_i+, gamma_i-, Gamma_i^x]
  Vec phi_lag(int i, int regime) const;    // padded source lag column
};

VecmForm vecm_decompose(const CksvarModel& model);
VecmForm vecm_decompose(const CanonicalModel& model);

enum class CaseId { RegulatedCoint, KinkedCoint, LinearInNonlinearVecm, Linear, Unsupported };
enum class TableConfig { CaseI, CaseIMirrored, CaseII, CaseIII, None };

const char* case_name(CaseId id);
const char* config_name(TableConfig c);

struct CaseClassification {
  CaseId case_id = CaseId::Unsupported;
  TableConfig config = TableConfig::None;
  int r_plus = 0, r_minus = 0, rank_Pi_x = 0, r = 0;
  bool pi_plus_in_span = false, pi_minus_in_span = false;
  bool linear = false, stationary = false;
  double tolerance_used = 1e-8;
  double scale = 0.0;
  std::vector<std::string> diagnostics;
};

inline constexpr double kRankTol = 1e-8;

CaseClassification classify_case(const VecmForm& vecm, double tol = kRankTol);

struct Factorization {
  Mat alpha, beta, alpha_perp, beta_perp;
};

Factorization factorize_pi(const Mat& Pi, int r, double tol = kRankTol);

// Companion-level complementary projections. For k = 1 (Gamma(1) = I) these
// are p x p; in general their leading p x p block of P_beta_perp is the
// p x p object beta_perp [alpha_perp' Gamma(1) beta_perp]^{-1} alpha_perp'.
struct ProjectionPair {
  Mat P_beta_perp;
  Mat P_alpha;
  int sign_context = 0;  // +1, -1, or 0 for the case-(i) "+" regime
};

struct Case1Objects {
  Factorization fac;  // of Pi+
  Mat Gamma1_plus;
  Mat P;              // p x p: beta_perp [alpha_perp' Gamma+(1) beta_perp]^{-1} alpha_perp'
  Vec kappa;          // P pi-
  double kappa1 = 0.0;
  Mat bold_alpha, bold_beta;  // kp x (p(k-1)+r)
  ProjectionPair pair;        // empty matrices unless the form is canonical
};

Case1Objects projection_case1(const VecmForm& vecm, double tol = kRankTol);

struct KinkGeometry {
  int r = 0;
  Vec theta_plus, theta_minus;
  Mat alpha, alpha_perp, beta_x, beta_x_perp;
  Mat beta_plus, beta_minus;  // p x r
  Mat beta_perp_plus, beta_perp_minus;
  Mat Gamma1_plus, Gamma1_minus;
  double det_plus = 0.0, det_minus = 0.0;  // det alpha_perp' Gamma(1;+-) beta_perp(+-)
  Mat P_plus, P_minus;                     // P_beta_perp(+-1)
  Vec vartheta;
  double mu = 1.0;

  double h(double y) const { return y >= 0.0 ? 1.0 : mu; }
  const Mat& P(double y) const { return y >= 0.0 ? P_plus : P_minus; }
  const Mat& beta(double y) const { return y >= 0.0 ? beta_plus : beta_minus; }
  const Mat& Gamma1(double y) const { return y >= 0.0 ? Gamma1_plus : Gamma1_minus; }
};

KinkGeometry kink_geometry(const VecmForm& vecm, double tol = kRankTol);

// Case-(ii) companion blocks: bold alpha and bold beta(y) with the S(y) selector.
Mat case2_bold_alpha(const VecmForm& vecm, const KinkGeometry& g);
Mat case2_bold_beta(const VecmForm& vecm, const KinkGeometry& g, int sign);
ProjectionPair case2_projections(const VecmForm& vecm, const KinkGeometry& g, int sign);

// Ratio mu with d'(A'B1)^{-1} = mu d'(A'B2)^{-1} when B1 - B2 = c d'.
// Computed as det(A'B2) / det(A'B1).
double rank_one_ratio(const Mat& A, const Mat& B1, const Mat& B2);

// Shared builder: P_beta_perp = bb_perp (ba_perp' bb_perp)^{-1} ba_perp', P_alpha = ba (bb' ba)^{-1} bb'.
ProjectionPair complementary_projections(const Mat& bold_alpha, const Mat& bold_beta, const Mat& bold_alpha_perp,
                                         const Mat& bold_beta_perp, int sign_context);

}  // namespace cksvar
