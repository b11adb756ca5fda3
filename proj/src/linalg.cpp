#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace cksvar {

Vec singular_values(const Mat& A) {
  if (A.size() == 0) return Vec(0);
  Eigen::JacobiSVD<Mat> svd(A);
  return svd.singularValues();
}

double max_singular_value(const Mat& A) {
  Vec s = singular_values(A);
  return s.size() ? s(0) : 0.0;
}

int numerical_rank(const Mat& A, double tol, double scale) {
  if (A.size() == 0 || scale <= 0.0) return 0;
  Vec s = singular_values(A);
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * scale) ++r;
  return r;
}

Mat range_basis(const Mat& A, double tol, double scale) {
  if (A.size() == 0 || scale <= 0.0) return Mat(A.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU);
  int r = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * scale) ++r;
  return svd.matrixU().leftCols(r);
}

double span_residual(const Mat& A, const Vec& v, double tol, double scale) {
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  Mat U = range_basis(A, tol, scale);
  Vec res = v - U * (U.transpose() * v);
  return res.norm() / nv;
}

Mat orthocomplement(const Mat& A, double tol) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (n == 0) return Mat::Identity(m, m);
  if (n > m) throw DimensionError("orthocomplement: more columns than rows");
  double smax = max_singular_value(A);
  if (numerical_rank(A, tol, smax) != n)
    throw NumericError("orthocomplement: input is not of full column rank");
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ() * Mat::Identity(m, m);
  return Q.rightCols(m - n);
}

CVec eigenvalues(const Mat& A) {
  if (A.size() == 0) return CVec(0);
  Eigen::EigenSolver<Mat> es(A, false);
  return es.eigenvalues();
}

double spectral_radius(const Mat& A) {
  if (A.size() == 0) return 0.0;
  if (A.rows() == 1) return std::abs(A(0, 0));
  return eigenvalues(A).cwiseAbs().maxCoeff();
}

double spectral_norm(const Mat& A) {
  if (A.size() == 0) return 0.0;
  if (A.rows() == 1 && A.cols() == 1) return std::abs(A(0, 0));
  Mat G = A.transpose() * A;
  Eigen::SelfAdjointEigenSolver<Mat> es(G, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool is_spd(const Mat& S) {
  if (S.rows() != S.cols() || S.rows() == 0) return false;
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + S.cwiseAbs().maxCoeff())) return false;
  Eigen::LLT<Mat> llt(S);
  if (llt.info() != Eigen::Success) return false;
  Vec d = Mat(llt.matrixL()).diagonal();
  return d.minCoeff() > 0.0;
}

Mat chol_lower(const Mat& S, const char* what) {
  if (!is_spd(S)) throw DimensionError(std::string(what) + ": variance must be symmetric positive definite");
  Eigen::LLT<Mat> llt(S);
  return llt.matrixL();
}

double condition_number(const Mat& A) {
  Vec s = singular_values(A);
  if (s.size() == 0) return 1.0;
  double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

Mat solve_checked(const Mat& A, const Mat& b, double cond_limit, const char* what) {
  if (A.rows() == 0) return Mat(0, b.cols());
  if (!(condition_number(A) < cond_limit)) throw NumericError(std::string(what) + ": matrix is singular or ill-conditioned");
  return A.fullPivLu().solve(b);
}

Mat pinv(const Mat& A, double tol) {
  if (A.size() == 0) return Mat(A.cols(), A.rows());
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec s = svd.singularValues();
  double cut = tol * (s.size() ? s(0) : 0.0);
  Vec inv(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) inv(i) = s(i) > cut ? 1.0 / s(i) : 0.0;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double max_abs(const Mat& A) { return A.size() ? A.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace cksvar
