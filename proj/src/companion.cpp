#include "companion.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace cksvar {

Mat companion_matrix(const CksvarModel& model, int regime) {
  const int p = model.p, k = model.k;
  Mat P0 = model.Phi0(regime);
  Eigen::FullPivLU<Mat> lu(P0);
  if (!lu.isInvertible()) throw DgpError("companion_matrix: Phi0 is singular in this regime");
  Mat C = Mat::Zero(k * p, k * p);
  for (int i = 1; i <= k; ++i) C.block(0, (i - 1) * p, p, p) = lu.solve(model.Phi(i, regime));
  if (k > 1) C.block(p, 0, (k - 1) * p, (k - 1) * p).setIdentity();
  return C;
}

std::vector<std::complex<double>> det_poly_roots(const CksvarModel& model, int regime) {
  Mat C = companion_matrix(model, regime);
  CVec ev = eigenvalues(C);
  double cut = 1e-12 * std::max(1.0, max_abs(C));
  std::vector<std::complex<double>> roots;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cut) roots.push_back(1.0 / ev(i));
  return roots;
}

Mat build_F(const VecmForm& v, double delta, double tol) {
  if (!v.canonical) throw CaseError("build_F: requires the canonical form");
  if (!(delta >= 0.0 && delta <= 1.0)) throw DimensionError("build_F: delta must lie in [0, 1]");
  Case1Objects o = projection_case1(v, tol);
  const int p = v.p, k = v.k, r = static_cast<int>(o.fac.alpha.cols());
  const int n1 = p * (k - 1) + r, N = n1 + k;
  Mat BT = o.bold_beta.transpose();
  Mat A = Mat::Identity(n1, n1) + BT * o.bold_alpha;
  Mat Bp = BT.leftCols(p);
  Vec d1 = v.phi_lag(1, -1) - v.phi_lag(1, +1);
  Mat Dl(p, k - 1);
  for (int i = 2; i <= k; ++i) Dl.col(i - 2) = v.phi_lag(i, -1) - v.phi_lag(i, +1);

  Mat F = Mat::Zero(N, N);
  F.block(0, 0, n1, n1) = A;
  F.block(0, n1, n1, 1) = Bp * d1 * delta;
  F.block(0, n1 + 1, n1, k - 1) = Bp * Dl;
  F.block(n1, 0, 1, n1) = o.bold_alpha.row(0);
  F(n1, n1) = (1.0 + d1(0)) * delta;
  F.block(n1, n1 + 1, 1, k - 1) = Dl.row(0);
  F(n1 + 1, n1) = delta;
  for (int j = 0; j < k - 2; ++j) F(n1 + 2 + j, n1 + 1 + j) = 1.0;
  return F;
}

CompanionSet build_F_set(const VecmForm& v, double tol) {
  CompanionSet s;
  s.matrices = {build_F(v, 0.0, tol), build_F(v, 1.0, tol)};
  s.labels = {"F0", "F1"};
  return s;
}

CompanionSet build_case2_set(const VecmForm& v, double tol) {
  if (!v.canonical) throw CaseError("build_case2_set: requires the canonical form");
  KinkGeometry g = kink_geometry(v, tol);
  Mat A = case2_bold_alpha(v, g);
  const Eigen::Index n = A.cols();
  CompanionSet s;
  for (int sign : {+1, -1}) {
    Mat B = case2_bold_beta(v, g, sign);
    s.matrices.push_back(Mat::Identity(n, n) + B.transpose() * A);
  }
  s.labels = {"I+beta(+1)'alpha", "I+beta(-1)'alpha"};
  return s;
}

bool AssumptionReport::all_ok() const {
  if (!dgp.ok() || !cvar_roots_ok || !deterministic_ok) return false;
  if (case_specific.empty()) return false;
  for (const auto& c : case_specific)
    if (!c.pass) return false;
  return true;
}

namespace {

NamedCheck jsr_check(const std::string& name, const CompanionSet& set, int depth, long long budget) {
  JsrEstimate e = jsr_bounds(set, depth, budget);
  NamedCheck c;
  c.name = name;
  c.pass = e.certified_lt_one;
  c.value = e.upper;
  c.lower = e.lower;
  c.upper = e.upper;
  std::ostringstream os;
  os << "JSR in [" << e.lower << ", " << e.upper << "] at depth " << e.depth;
  if (e.budget_exhausted) os << " (product budget exhausted)";
  c.detail = os.str();
  return c;
}

NamedCheck failed(const std::string& name, const std::string& why) {
  NamedCheck c;
  c.name = name;
  c.pass = false;
  c.detail = why;
  return c;
}

}  // namespace

AssumptionReport verify_assumptions(const CksvarModel& input, double tol, int depth, long long budget) {
  AssumptionReport rep;
  CksvarModel model = threshold_shift(input);
  rep.dgp = validate_dgp(model);
  if (!rep.dgp.ok()) {
    rep.messages = rep.dgp.messages;
    return rep;
  }
  CanonicalModel cm = to_canonical(model);
  VecmForm vs = vecm_decompose(model);
  VecmForm vc = vecm_decompose(cm);
  const int p = model.p;

  rep.classification = classify_case(vs, tol);
  const auto& cls = rep.classification;

  rep.roots_ok = true;
  auto scan = [&](const std::vector<std::complex<double>>& roots, int& q, const char* tag) {
    for (const auto& z : roots) {
      if (std::abs(z - 1.0) < kUnitRootWindow) {
        ++q;
      } else if (std::abs(z) <= 1.0 + kUnitRootWindow) {
        rep.roots_ok = false;
        std::ostringstream os;
        os << "CVAR.1 violated (" << tag << " regime): root " << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag()
           << "i is not outside the unit circle";
        rep.messages.push_back(os.str());
      }
    }
  };
  rep.roots_plus = det_poly_roots(cm.model, +1);
  rep.roots_minus = det_poly_roots(cm.model, -1);
  scan(rep.roots_plus, rep.q_plus, "+");
  scan(rep.roots_minus, rep.q_minus, "-");
  bool ranks = rep.q_plus == p - cls.r_plus && rep.q_minus == p - cls.r_minus;
  if (!ranks)
    rep.messages.push_back("CVAR.2 violated: unit-root counts (q+=" + std::to_string(rep.q_plus) +
                           ", q-=" + std::to_string(rep.q_minus) + ") do not equal p - rank Pi+- (" +
                           std::to_string(p - cls.r_plus) + ", " + std::to_string(p - cls.r_minus) + ")");
  rep.cvar_roots_ok = rep.roots_ok && ranks;

  auto c_in = [&](int regime) {
    Mat Pi = vc.Pi(regime);
    return span_residual(Pi, vc.c, tol, max_singular_value(Pi)) < tol;
  };
  rep.deterministic_ok = c_in(+1) && c_in(-1);
  if (!rep.deterministic_ok) rep.messages.push_back("CVAR.3 violated: c is not in span Pi+ and span Pi-");

  if (cls.stationary) {
    rep.messages.push_back("stationary configuration: no cointegration assumptions apply");
    return rep;
  }
  switch (cls.config) {
    case TableConfig::CaseI: {
      try {
        rep.case_specific.push_back(jsr_check("CO(i).2 JSR", build_F_set(vc, tol), depth, budget));
      } catch (const Error& e) {
        rep.case_specific.push_back(failed("CO(i).2 JSR", e.what()));
      }
      try {
        Case1Objects o = projection_case1(vc, tol);
        NamedCheck c;
        c.name = "CO(i).3 kappa1<0";
        c.value = o.kappa1;
        c.pass = o.kappa1 < 0.0;
        c.detail = "kappa1 = " + std::to_string(o.kappa1);
        rep.case_specific.push_back(c);
      } catch (const Error& e) {
        rep.case_specific.push_back(failed("CO(i).3 kappa1<0", e.what()));
      }
      break;
    }
    case TableConfig::CaseII: {
      try {
        KinkGeometry g = kink_geometry(vc, tol);
        NamedCheck c;
        c.name = "CO(ii).3 det-sign";
        c.pass = true;
        c.value = g.det_plus * g.det_minus;
        c.detail = "det(+) = " + std::to_string(g.det_plus) + ", det(-) = " + std::to_string(g.det_minus);
        rep.case_specific.push_back(c);
        rep.case_specific.push_back(jsr_check("CO(ii).2 JSR", build_case2_set(vc, tol), depth, budget));
      } catch (const AssumptionError& e) {
        rep.case_specific.push_back(failed("CO(ii).3 det-sign", e.what()));
      } catch (const Error& e) {
        rep.case_specific.push_back(failed("CO(ii).2 JSR", e.what()));
      }
      break;
    }
    case TableConfig::CaseIMirrored:
      rep.messages.push_back("case (i) with mirrored regimes: relabel y -> -y to run the case-(i) checks");
      break;
    case TableConfig::CaseIII:
      rep.messages.push_back("case (iii): classified only, no representation checks");
      break;
    case TableConfig::None:
      rep.messages.push_back("configuration outside the case table");
      break;
  }
  return rep;
}

}  // namespace cksvar
