#include "model.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace cksvar {

namespace {

void need(bool ok, const std::string& msg) {
  if (!ok) throw DimensionError(msg);
}

int sgn_checked(double det, const Mat& A) {
  if (det == 0.0 || !(condition_number(A) < kCondLimit)) return 0;
  return det > 0 ? 1 : -1;
}

}  // namespace

void CksvarModel::check() const {
  need(p >= 1, "model: p must be >= 1");
  need(k >= 1, "model: k must be >= 1");
  need(c.size() == p, "model: c must have length p");
  need(phi0_plus.size() == p && phi0_minus.size() == p, "model: phi0_plus/phi0_minus must have length p");
  need(Phi0_x.rows() == p && Phi0_x.cols() == p - 1, "model: Phi0_x must be p x (p-1)");
  need(static_cast<int>(phi_plus.size()) == k && static_cast<int>(phi_minus.size()) == k &&
           static_cast<int>(Phi_x.size()) == k,
       "model: need exactly k lag blocks");
  for (int i = 0; i < k; ++i) {
    need(phi_plus[i].size() == p && phi_minus[i].size() == p, "model: lag columns must have length p");
    need(Phi_x[i].rows() == p && Phi_x[i].cols() == p - 1, "model: Phi_x lags must be p x (p-1)");
  }
  need(Sigma.rows() == p && Sigma.cols() == p, "model: Sigma must be p x p");
  need(is_spd(Sigma), "model: Sigma must be symmetric positive definite");
  need(std::isfinite(b), "model: threshold must be finite");
}

Mat CksvarModel::Phi0_full() const {
  Mat M(p, p + 1);
  M.col(0) = phi0_plus;
  M.col(1) = phi0_minus;
  M.rightCols(p - 1) = Phi0_x;
  return M;
}

Mat CksvarModel::lag_full(int i) const {
  Mat M(p, p + 1);
  M.col(0) = phi_plus[i - 1];
  M.col(1) = phi_minus[i - 1];
  M.rightCols(p - 1) = Phi_x[i - 1];
  return M;
}

Mat CksvarModel::Phi0(int regime) const {
  Mat M(p, p);
  M.col(0) = regime > 0 ? phi0_plus : phi0_minus;
  M.rightCols(p - 1) = Phi0_x;
  return M;
}

Mat CksvarModel::Phi(int i, int regime) const {
  Mat M(p, p);
  M.col(0) = regime > 0 ? phi_plus[i - 1] : phi_minus[i - 1];
  M.rightCols(p - 1) = Phi_x[i - 1];
  return M;
}

CksvarModel CksvarModel::padded() const {
  CksvarModel m = *this;
  while (m.k < 2) {
    m.phi_plus.push_back(Vec::Zero(p));
    m.phi_minus.push_back(Vec::Zero(p));
    m.Phi_x.push_back(Mat::Zero(p, p - 1));
    ++m.k;
  }
  return m;
}

Mat canonical_phi0(int p) {
  Mat I = Mat::Zero(p, p + 1);
  I(0, 0) = 1.0;
  I(0, 1) = 1.0;
  I.bottomRightCorner(p - 1, p - 1).setIdentity();
  return I;
}

bool CksvarModel::is_canonical(double tol) const {
  return (Phi0_full() - canonical_phi0(p)).cwiseAbs().maxCoeff() <= tol;
}

CksvarModel CksvarModel::zeros(int p, int k) {
  CksvarModel m;
  m.p = p;
  m.k = k;
  m.c = Vec::Zero(p);
  Mat I = canonical_phi0(p);
  m.phi0_plus = I.col(0);
  m.phi0_minus = I.col(1);
  m.Phi0_x = I.rightCols(p - 1);
  for (int i = 0; i < k; ++i) {
    m.phi_plus.push_back(Vec::Zero(p));
    m.phi_minus.push_back(Vec::Zero(p));
    m.Phi_x.push_back(Mat::Zero(p, p - 1));
  }
  m.Sigma = Mat::Identity(p, p);
  return m;
}

DgpReport validate_dgp(const CksvarModel& model) {
  model.check();
  DgpReport rep;
  const int p = model.p;
  Mat Pp = model.Phi0(+1), Pm = model.Phi0(-1);
  rep.det_plus = Pp.determinant();
  rep.det_minus = Pm.determinant();
  int sp = sgn_checked(rep.det_plus, Pp), sm = sgn_checked(rep.det_minus, Pm);
  rep.coherent = sp != 0 && sp == sm;
  if (!rep.coherent) {
    std::ostringstream os;
    os << "DGP.2 violated: sgn det Phi0+ (" << rep.det_plus << ") and sgn det Phi0- (" << rep.det_minus
       << ") must agree and be nonzero";
    rep.messages.push_back(os.str());
  }

  const Mat Pxx = model.Phi0_x.bottomRows(p - 1);
  const Vec pyx = model.Phi0_x.topRows(1).transpose();
  Vec w = Vec::Zero(p - 1);  // Pxx^{-1} phi0_yx
  if (p > 1) {
    if (!(condition_number(Pxx) < kCondLimit)) {
      rep.messages.push_back("DGP.3 cannot be checked: Phi0_xx is singular or ill-conditioned");
      return rep;
    }
    w = Pxx.transpose().fullPivLu().solve(pyx);
  }
  auto tilde = [&](const Vec& col) {
    double v = col(0);
    if (p > 1) v -= w.dot(col.tail(p - 1));
    return v;
  };
  rep.phi_tilde_plus = tilde(model.phi0_plus);
  rep.phi_tilde_minus = tilde(model.phi0_minus);
  rep.wlog_signs_ok = rep.phi_tilde_plus > 0.0 && rep.phi_tilde_minus > 0.0;
  if (!rep.wlog_signs_ok) {
    std::ostringstream os;
    os << "DGP.3 violated: Schur complements phi~0,yy+ = " << rep.phi_tilde_plus
       << " and phi~0,yy- = " << rep.phi_tilde_minus << " must both be positive";
    rep.messages.push_back(os.str());
  }
  return rep;
}

CksvarModel threshold_shift(const CksvarModel& model) {
  model.check();
  if (model.b == 0.0) return model;
  CksvarModel m = model;
  Vec s = model.phi0_plus + model.phi0_minus;
  for (int i = 0; i < model.k; ++i) s -= model.phi_plus[i] + model.phi_minus[i];
  m.c = model.c - s * model.b;
  m.b = 0.0;
  return m;
}

CanonicalModel to_canonical(const CksvarModel& input) {
  CksvarModel model = threshold_shift(input);
  DgpReport rep = validate_dgp(model);
  if (!rep.ok()) {
    std::string msg = "to_canonical: ";
    for (auto& s : rep.messages) msg += s + "; ";
    throw DgpError(msg);
  }
  const int p = model.p;
  const Mat Pxx = model.Phi0_x.bottomRows(p - 1);
  const Vec pyx = model.Phi0_x.topRows(1).transpose();

  CanonicalModel cm;
  cm.phi_tilde_plus = rep.phi_tilde_plus;
  cm.phi_tilde_minus = rep.phi_tilde_minus;

  cm.Q = Mat::Identity(p, p);
  if (p > 1) cm.Q.block(0, 1, 1, p - 1) = -Pxx.transpose().fullPivLu().solve(pyx).transpose();

  cm.P_inv = Mat::Zero(p + 1, p + 1);
  cm.P_inv(0, 0) = rep.phi_tilde_plus;
  cm.P_inv(1, 1) = rep.phi_tilde_minus;
  if (p > 1) {
    cm.P_inv.block(2, 0, p - 1, 1) = model.phi0_plus.tail(p - 1);
    cm.P_inv.block(2, 1, p - 1, 1) = model.phi0_minus.tail(p - 1);
    cm.P_inv.bottomRightCorner(p - 1, p - 1) = Pxx;
  }
  cm.P = cm.P_inv.fullPivLu().inverse();

  auto regime_inv = [&](double tilde, const Vec& col) {
    Mat R = Mat::Zero(p, p);
    R(0, 0) = tilde;
    if (p > 1) {
      R.block(1, 0, p - 1, 1) = col.tail(p - 1);
      R.bottomRightCorner(p - 1, p - 1) = Pxx;
    }
    return R;
  };
  cm.P_plus_inv = regime_inv(rep.phi_tilde_plus, model.phi0_plus);
  cm.P_minus_inv = regime_inv(rep.phi_tilde_minus, model.phi0_minus);

  CksvarModel out = model;
  Mat I = canonical_phi0(p);
  out.phi0_plus = I.col(0);
  out.phi0_minus = I.col(1);
  out.Phi0_x = I.rightCols(p - 1);
  for (int i = 1; i <= model.k; ++i) {
    Mat L = cm.Q * model.lag_full(i) * cm.P;
    out.phi_plus[i - 1] = L.col(0);
    out.phi_minus[i - 1] = L.col(1);
    out.Phi_x[i - 1] = L.rightCols(p - 1);
  }
  out.c = cm.Q * model.c;
  Mat S = cm.Q * model.Sigma * cm.Q.transpose();
  out.Sigma = 0.5 * (S + S.transpose());
  cm.model = out;
  return cm;
}

CksvarModel from_canonical(const CanonicalModel& cm) {
  const CksvarModel& m = cm.model;
  const int p = m.p;
  Mat Qi = cm.Q.inverse();
  CksvarModel out = m;
  Mat F0 = Qi * canonical_phi0(p) * cm.P_inv;
  out.phi0_plus = F0.col(0);
  out.phi0_minus = F0.col(1);
  out.Phi0_x = F0.rightCols(p - 1);
  for (int i = 1; i <= m.k; ++i) {
    Mat L = Qi * m.lag_full(i) * cm.P_inv;
    out.phi_plus[i - 1] = L.col(0);
    out.phi_minus[i - 1] = L.col(1);
    out.Phi_x[i - 1] = L.rightCols(p - 1);
  }
  out.c = Qi * m.c;
  out.Sigma = Qi * m.Sigma * Qi.transpose();
  return out;
}

std::pair<double, double> split(double y) { return {y > 0.0 ? y : 0.0, y < 0.0 ? y : 0.0}; }

}  // namespace cksvar
