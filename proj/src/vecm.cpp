#include "vecm.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace cksvar {

Mat VecmForm::Pi(int regime) const {
  Mat M(p, p);
  M.col(0) = regime > 0 ? pi_plus : pi_minus;
  M.rightCols(p - 1) = Pi_x;
  return M;
}

Mat VecmForm::Gamma1(int regime) const {
  Mat G = regime > 0 ? Phi0_plus : Phi0_minus;
  for (const Mat& g : (regime > 0 ? Gamma_plus : Gamma_minus)) G -= g;
  return G;
}

Mat VecmForm::Gamma_star(int i) const {
  Mat M(p, p + 1);
  M.col(0) = Gamma_plus[i - 1].col(0);
  M.col(1) = Gamma_minus[i - 1].col(0);
  M.rightCols(p - 1) = Gamma_plus[i - 1].rightCols(p - 1);
  return M;
}

Vec VecmForm::phi_lag(int i, int regime) const {
  return regime > 0 ? source.phi_plus[i - 1] : source.phi_minus[i - 1];
}

VecmForm vecm_decompose(const CksvarModel& input) {
  CksvarModel m = threshold_shift(input).padded();
  VecmForm v;
  v.p = m.p;
  v.k = m.k;
  v.source = m;
  v.canonical = m.is_canonical(0.0);
  v.c = m.c;
  v.Sigma = m.Sigma;
  v.Phi0_plus = m.Phi0(+1);
  v.Phi0_minus = m.Phi0(-1);
  v.pi_plus = -m.phi0_plus;
  v.pi_minus = -m.phi0_minus;
  v.Pi_x = -m.Phi0_x;
  for (int i = 0; i < m.k; ++i) {
    v.pi_plus += m.phi_plus[i];
    v.pi_minus += m.phi_minus[i];
    v.Pi_x += m.Phi_x[i];
  }
  for (int i = 1; i < m.k; ++i) {
    Mat gp = Mat::Zero(m.p, m.p), gm = Mat::Zero(m.p, m.p);
    for (int j = i + 1; j <= m.k; ++j) {
      gp -= m.Phi(j, +1);
      gm -= m.Phi(j, -1);
    }
    v.Gamma_plus.push_back(gp);
    v.Gamma_minus.push_back(gm);
  }
  return v;
}

VecmForm vecm_decompose(const CanonicalModel& model) { return vecm_decompose(model.model); }

const char* case_name(CaseId id) {
  switch (id) {
    case CaseId::RegulatedCoint: return "RegulatedCoint";
    case CaseId::KinkedCoint: return "KinkedCoint";
    case CaseId::LinearInNonlinearVecm: return "LinearInNonlinearVecm";
    case CaseId::Linear: return "Linear";
    case CaseId::Unsupported: return "Unsupported";
  }
  return "?";
}

const char* config_name(TableConfig c) {
  switch (c) {
    case TableConfig::CaseI: return "i";
    case TableConfig::CaseIMirrored: return "i-mirrored";
    case TableConfig::CaseII: return "ii";
    case TableConfig::CaseIII: return "iii";
    case TableConfig::None: return "none";
  }
  return "?";
}

CaseClassification classify_case(const VecmForm& v, double tol) {
  if (!(tol > 0.0)) throw DimensionError("classify_case: tolerance must be positive");
  CaseClassification cc;
  cc.tolerance_used = tol;
  const int p = v.p;
  Mat Pp = v.Pi(+1), Pm = v.Pi(-1);
  // One scale for all three matrices, so a numerically-zero pi is not promoted to rank 1.
  // Phi0 sets a floor: Pi = 0 up to rounding must not become its own yardstick.
  cc.scale = std::max({max_singular_value(Pp), max_singular_value(Pm), max_singular_value(v.Pi_x),
                       max_singular_value(v.Phi0_plus), max_singular_value(v.Phi0_minus)});
  cc.r_plus = numerical_rank(Pp, tol, cc.scale);
  cc.r_minus = numerical_rank(Pm, tol, cc.scale);
  cc.rank_Pi_x = numerical_rank(v.Pi_x, tol, cc.scale);
  auto in_span = [&](const Vec& pi) {
    if (pi.norm() <= tol * cc.scale) return true;
    return span_residual(v.Pi_x, pi, tol, cc.scale) < tol;
  };
  cc.pi_plus_in_span = in_span(v.pi_plus);
  cc.pi_minus_in_span = in_span(v.pi_minus);

  double coef_scale = 1.0;
  for (int i = 0; i < v.k; ++i)
    coef_scale = std::max({coef_scale, v.source.phi_plus[i].cwiseAbs().maxCoeff(),
                           v.source.phi_minus[i].cwiseAbs().maxCoeff()});
  bool lin = (v.source.phi0_plus - v.source.phi0_minus).cwiseAbs().maxCoeff() <= tol * coef_scale;
  for (int i = 0; i < v.k && lin; ++i)
    lin = (v.source.phi_plus[i] - v.source.phi_minus[i]).cwiseAbs().maxCoeff() <= tol * coef_scale;
  cc.linear = lin;

  const int rp = cc.r_plus, rm = cc.r_minus, rx = cc.rank_Pi_x;
  const bool sp = cc.pi_plus_in_span, sm = cc.pi_minus_in_span;
  if (rp == rx && rm == rx + 1 && sp && !sm) {
    cc.config = TableConfig::CaseI;
    cc.r = rp;
  } else if (rm == rx && rp == rx + 1 && sm && !sp) {
    cc.config = TableConfig::CaseIMirrored;
    cc.r = rm;
    cc.diagnostics.push_back("roles of pi+ and pi- reversed: case (i) after relabelling y -> -y");
  } else if (rp == rx && rm == rx && sp && sm) {
    cc.config = TableConfig::CaseII;
    cc.r = rx;
  } else if (rp == rx + 1 && rm == rx + 1 && !sp && !sm) {
    cc.config = TableConfig::CaseIII;
    cc.r = rp;
  } else {
    cc.config = TableConfig::None;
    cc.r = std::min(rp, rm);
    cc.diagnostics.push_back("rank configuration (r+=" + std::to_string(rp) + ", r-=" + std::to_string(rm) +
                             ", rank Pi_x=" + std::to_string(rx) + ", pi+ in span=" + (sp ? "yes" : "no") +
                             ", pi- in span=" + (sm ? "yes" : "no") + ") matches no row of the case table");
  }

  if (rp == p && rm == p) {
    cc.stationary = true;
    cc.case_id = CaseId::Unsupported;
    cc.diagnostics.push_back(std::string(lin ? "linear " : "") +
                             "stationary: Pi+ and Pi- have full rank, no unit roots to analyse");
  } else if (lin) {
    cc.case_id = CaseId::Linear;
  } else {
    switch (cc.config) {
      case TableConfig::CaseI:
      case TableConfig::CaseIMirrored: cc.case_id = CaseId::RegulatedCoint; break;
      case TableConfig::CaseII: cc.case_id = CaseId::KinkedCoint; break;
      case TableConfig::CaseIII: cc.case_id = CaseId::LinearInNonlinearVecm; break;
      case TableConfig::None: cc.case_id = CaseId::Unsupported; break;
    }
  }
  return cc;
}

Factorization factorize_pi(const Mat& Pi, int r, double tol) {
  const Eigen::Index m = Pi.rows(), n = Pi.cols();
  if (r < 0 || r > std::min(m, n)) throw DimensionError("factorize_pi: rank out of range");
  double smax = max_singular_value(Pi);
  int rank = numerical_rank(Pi, tol, smax);
  if (rank != r)
    throw NumericError("factorize_pi: numerical rank " + std::to_string(rank) + " differs from requested " +
                       std::to_string(r));
  Factorization f;
  if (r == 0) {
    f.alpha = Mat(m, 0);
    f.beta = Mat(n, 0);
    f.alpha_perp = Mat::Identity(m, m);
    f.beta_perp = Mat::Identity(n, n);
    return f;
  }
  Eigen::JacobiSVD<Mat> svd(Pi, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Mat b0 = svd.matrixV().leftCols(r);
  Mat a0 = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();

  // Pick r pivot rows of b0 by Gaussian elimination; ties go to the earlier row.
  Mat W = b0;
  std::vector<int> piv;
  std::vector<bool> used(n, false);
  for (int j = 0; j < r; ++j) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (!used[i]) best = std::max(best, std::abs(W(i, j)));
    int pick = -1;
    for (Eigen::Index i = 0; i < n && pick < 0; ++i)
      if (!used[i] && std::abs(W(i, j)) >= best * (1.0 - 1e-12)) pick = static_cast<int>(i);
    used[pick] = true;
    piv.push_back(pick);
    for (Eigen::Index i = 0; i < n; ++i)
      if (!used[i]) W.row(i) -= (W(i, j) / W(pick, j)) * W.row(pick);
  }
  Mat B(r, r);
  for (int j = 0; j < r; ++j) B.row(j) = b0.row(piv[j]);
  Eigen::FullPivLU<Mat> lu(B);
  f.beta = b0 * lu.inverse();
  for (int j = 0; j < r; ++j) {  // exact unit block at the pivots
    f.beta.row(piv[j]).setZero();
    f.beta(piv[j], j) = 1.0;
  }
  f.alpha = a0 * B.transpose();
  f.alpha_perp = orthocomplement(f.alpha);
  f.beta_perp = orthocomplement(f.beta);
  return f;
}

ProjectionPair complementary_projections(const Mat& ba, const Mat& bb, const Mat& bap, const Mat& bbp,
                                         int sign_context) {
  ProjectionPair pp;
  pp.sign_context = sign_context;
  Mat M1 = bap.transpose() * bbp;
  Mat M2 = bb.transpose() * ba;
  pp.P_beta_perp = bbp * solve_checked(M1, bap.transpose(), kCondLimit, "projection (alpha_perp' beta_perp)");
  pp.P_alpha = ba * solve_checked(M2, bb.transpose(), kCondLimit, "projection (beta' alpha)");
  return pp;
}

namespace {

void require_config(const CaseClassification& cc, TableConfig want, const char* op) {
  if (cc.config == want) return;
  if (cc.config == TableConfig::CaseIMirrored && want == TableConfig::CaseI)
    throw CaseError(std::string(op) + ": case (i) with the regimes mirrored; relabel y -> -y first");
  throw CaseError(std::string(op) + ": model is classified " + case_name(cc.case_id) + " (table row " +
                  config_name(cc.config) + "), not case (" + config_name(want) + ")");
}

}  // namespace

Case1Objects projection_case1(const VecmForm& v, double tol) {
  CaseClassification cc = classify_case(v, tol);
  require_config(cc, TableConfig::CaseI, "projection_case1");
  const int p = v.p, k = v.k, r = cc.r;
  Case1Objects o;
  o.fac = factorize_pi(v.Pi(+1), r, tol);
  o.Gamma1_plus = v.Gamma1(+1);
  const Mat& ap = o.fac.alpha_perp;
  const Mat& bp = o.fac.beta_perp;
  Mat M = ap.transpose() * o.Gamma1_plus * bp;
  if (!(condition_number(M) < kCondLimit))
    throw AssumptionError("projection_case1: alpha_perp' Gamma+(1) beta_perp is singular");
  o.P = bp * M.fullPivLu().solve(ap.transpose());
  o.kappa = o.P * v.pi_minus;
  o.kappa1 = o.kappa(0);

  const int cols = p * (k - 1) + r;
  o.bold_alpha = Mat::Zero(k * p, cols);
  o.bold_beta = Mat::Zero(k * p, cols);
  o.bold_alpha.block(0, 0, p, r) = o.fac.alpha;
  o.bold_beta.block(0, 0, p, r) = o.fac.beta;
  for (int m = 1; m < k; ++m) {
    o.bold_alpha.block(0, r + (m - 1) * p, p, p) = v.Gamma_plus[m - 1];
    o.bold_alpha.block(m * p, r + (m - 1) * p, p, p).setIdentity();
    // bold_beta' rows: [.. I (block m-1), -I (block m) ..]
    o.bold_beta.block((m - 1) * p, r + (m - 1) * p, p, p).setIdentity();
    o.bold_beta.block(m * p, r + (m - 1) * p, p, p) = -Mat::Identity(p, p);
  }
  if (v.canonical) {
    const int q = p - r;
    Mat bap(k * p, q), bbp(k * p, q);
    bap.topRows(p) = ap;
    bbp.topRows(p) = bp;
    for (int m = 1; m < k; ++m) {
      bap.block(m * p, 0, p, q) = -v.Gamma_plus[m - 1].transpose() * ap;
      bbp.block(m * p, 0, p, q) = bp;
    }
    o.pair = complementary_projections(o.bold_alpha, o.bold_beta, bap, bbp, 0);
  }
  return o;
}

double rank_one_ratio(const Mat& A, const Mat& B1, const Mat& B2) {
  double d1 = (A.transpose() * B1).determinant();
  double d2 = (A.transpose() * B2).determinant();
  if (d1 == 0.0) throw NumericError("rank_one_ratio: A'B1 is singular");
  return d2 / d1;
}

KinkGeometry kink_geometry(const VecmForm& v, double tol) {
  CaseClassification cc = classify_case(v, tol);
  require_config(cc, TableConfig::CaseII, "kink_geometry");
  const int p = v.p, r = cc.r;
  KinkGeometry g;
  g.r = r;
  Factorization fx = factorize_pi(v.Pi_x, r, tol);
  g.alpha = fx.alpha;
  g.alpha_perp = fx.alpha_perp;
  g.beta_x = fx.beta;
  g.beta_x_perp = fx.beta_perp;

  Mat Px_pinv = pinv(v.Pi_x, tol);
  g.theta_plus = Px_pinv * v.pi_plus;
  g.theta_minus = Px_pinv * v.pi_minus;

  auto beta_of = [&](const Vec& pi) {
    Mat B(p, r);
    if (r > 0) {
      B.row(0) = (g.alpha.transpose() * g.alpha).ldlt().solve(g.alpha.transpose() * pi).transpose();
      B.bottomRows(p - 1) = g.beta_x;
    }
    return B;
  };
  g.beta_plus = beta_of(v.pi_plus);
  g.beta_minus = beta_of(v.pi_minus);

  auto beta_perp_of = [&](const Vec& theta) {
    Mat B = Mat::Zero(p, p - r);
    B(0, 0) = 1.0;
    if (p > 1) {
      B.block(1, 0, p - 1, 1) = -theta;
      B.block(1, 1, p - 1, p - 1 - r) = g.beta_x_perp;
    }
    return B;
  };
  g.beta_perp_plus = beta_perp_of(g.theta_plus);
  g.beta_perp_minus = beta_perp_of(g.theta_minus);

  g.Gamma1_plus = v.Gamma1(+1);
  g.Gamma1_minus = v.Gamma1(-1);
  Mat Ap = g.alpha_perp.transpose() * g.Gamma1_plus * g.beta_perp_plus;
  Mat Am = g.alpha_perp.transpose() * g.Gamma1_minus * g.beta_perp_minus;
  g.det_plus = Ap.determinant();
  g.det_minus = Am.determinant();
  bool sing = !(condition_number(Ap) < kCondLimit) || !(condition_number(Am) < kCondLimit);
  if (sing || g.det_plus * g.det_minus <= 0.0)
    throw AssumptionError("kink_geometry: CO(ii).3 violated, det alpha_perp' Gamma(1;+1) beta_perp(+1) = " +
                          std::to_string(g.det_plus) + " and det alpha_perp' Gamma(1;-1) beta_perp(-1) = " +
                          std::to_string(g.det_minus) + " must share a nonzero sign");
  g.P_plus = g.beta_perp_plus * Ap.fullPivLu().solve(g.alpha_perp.transpose());
  g.P_minus = g.beta_perp_minus * Am.fullPivLu().solve(g.alpha_perp.transpose());
  g.vartheta = g.P_plus.row(0).transpose();
  g.mu = rank_one_ratio(g.alpha_perp, g.Gamma1_minus * g.beta_perp_minus, g.Gamma1_plus * g.beta_perp_plus);

  Vec lhs = g.P_minus.row(0).transpose();
  double err = (lhs - g.mu * g.vartheta).cwiseAbs().maxCoeff();
  if (err > 1e-8 * (1.0 + lhs.cwiseAbs().maxCoeff()))
    throw NumericError("kink_geometry: e1' P(-1) = mu vartheta' fails by " + std::to_string(err));
  return g;
}

namespace {

Mat selector(int p, int sign) {
  Mat S = Mat::Zero(p + 1, p);
  S(sign > 0 ? 0 : 1, 0) = 1.0;
  S.bottomRightCorner(p - 1, p - 1).setIdentity();
  return S;
}

}  // namespace

Mat case2_bold_alpha(const VecmForm& v, const KinkGeometry& g) {
  const int p = v.p, k = v.k, r = g.r, s = p + 1;
  Mat A = Mat::Zero(p + (k - 1) * s, r + (k - 1) * s);
  A.block(0, 0, p, r) = g.alpha;
  for (int j = 1; j < k; ++j) {
    A.block(0, r + (j - 1) * s, p, s) = v.Gamma_star(j);
    A.block(p + (j - 1) * s, r + (j - 1) * s, s, s).setIdentity();
  }
  return A;
}

Mat case2_bold_beta(const VecmForm& v, const KinkGeometry& g, int sign) {
  const int p = v.p, k = v.k, r = g.r, s = p + 1;
  Mat BT = Mat::Zero(r + (k - 1) * s, p + (k - 1) * s);
  BT.block(0, 0, r, p) = g.beta(sign > 0 ? 1.0 : -1.0).transpose();
  BT.block(r, 0, s, p) = selector(p, sign);
  BT.block(r, p, s, s) = -Mat::Identity(s, s);
  for (int j = 2; j < k; ++j) {
    BT.block(r + (j - 1) * s, p + (j - 2) * s, s, s).setIdentity();
    BT.block(r + (j - 1) * s, p + (j - 1) * s, s, s) = -Mat::Identity(s, s);
  }
  return BT.transpose();
}

ProjectionPair case2_projections(const VecmForm& v, const KinkGeometry& g, int sign) {
  if (!v.canonical) throw CaseError("case2_projections: requires the canonical form");
  const int p = v.p, k = v.k, s = p + 1, q = p - g.r;
  const Mat& bp = sign > 0 ? g.beta_perp_plus : g.beta_perp_minus;
  Mat S = selector(p, sign);
  Mat bap(p + (k - 1) * s, q), bbp(p + (k - 1) * s, q);
  bap.topRows(p) = g.alpha_perp;
  bbp.topRows(p) = bp;
  for (int j = 1; j < k; ++j) {
    bap.block(p + (j - 1) * s, 0, s, q) = -v.Gamma_star(j).transpose() * g.alpha_perp;
    bbp.block(p + (j - 1) * s, 0, s, q) = S * bp;
  }
  return complementary_projections(case2_bold_alpha(v, g), case2_bold_beta(v, g, sign), bap, bbp, sign);
}

}  // namespace cksvar
