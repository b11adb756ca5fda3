#pragma once

// Random model generators shared by the unit and acceptance tests.

#include <random>

#include "companion.hpp"
#include "model.hpp"
#include "vecm.hpp"

namespace fx {

using cksvar::CksvarModel;
using cksvar::Mat;
using cksvar::Vec;

inline Mat randn(std::mt19937_64& rng, int r, int c, double s = 1.0) {
  std::normal_distribution<double> N(0.0, s);
  Mat A(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) A(i, j) = N(rng);
  return A;
}

inline double unif(std::mt19937_64& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline Mat random_spd(std::mt19937_64& rng, int p) {
  Mat A = randn(rng, p, p, 0.5);
  return A * A.transpose() + Mat::Identity(p, p);
}

// Coherent structural model with modest, mostly stable lags.
inline CksvarModel random_coherent(std::mt19937_64& rng, int p, int k) {
  for (;;) {
    CksvarModel m = CksvarModel::zeros(p, k);
    Mat P0 = Mat::Identity(p, p) + randn(rng, p, p, 0.3);
    m.phi0_plus = P0.col(0);
    m.Phi0_x = P0.rightCols(p - 1);
    m.phi0_minus = m.phi0_plus + randn(rng, p, 1, 0.2);
    const double s = 0.4 / (k * std::sqrt(static_cast<double>(p)));
    for (int i = 0; i < k; ++i) {
      m.phi_plus[i] = randn(rng, p, 1, s);
      m.phi_minus[i] = randn(rng, p, 1, s);
      m.Phi_x[i] = randn(rng, p, p - 1, s);
    }
    m.c = randn(rng, p, 1, 0.1);
    m.Sigma = random_spd(rng, p);
    if (cksvar::validate_dgp(m).ok()) return m;
  }
}

// Canonical model from VECM pieces: Delta z_t = c + Pi+ y+ + Pi- y- + Pi_x x + sum Gamma*_i Delta z*_{t-i} + u_t,
// with Gamma*_i = [gamma_i+, gamma_i-, Gamma_i^x].
inline CksvarModel from_vecm(const Vec& pi_p, const Vec& pi_m, const Mat& Pi_x, const std::vector<Mat>& Gs) {
  const int p = static_cast<int>(pi_p.size()), k = static_cast<int>(Gs.size()) + 1;
  CksvarModel m = CksvarModel::zeros(p, k);
  m.phi0_plus = Vec::Unit(p, 0);
  m.phi0_minus = Vec::Unit(p, 0);
  m.Phi0_x = Mat::Identity(p, p).rightCols(p - 1);
  // Phi_1 = I* + Pi* + G1, Phi_i = G_i - G_{i-1}, Phi_k = -G_{k-1}
  auto G = [&](int i) -> Mat { return (i >= 1 && i <= k - 1) ? Gs[i - 1] : Mat::Zero(p, p + 1); };
  Mat Istar(p, p + 1);
  Istar << Vec::Unit(p, 0), Vec::Unit(p, 0), Mat::Identity(p, p).rightCols(p - 1);
  Mat Pistar(p, p + 1);
  Pistar << pi_p, pi_m, Pi_x;
  for (int i = 1; i <= k; ++i) {
    Mat L = G(i) - G(i - 1);
    if (i == 1) L += Istar + Pistar;
    m.phi_plus[i - 1] = L.col(0);
    m.phi_minus[i - 1] = L.col(1);
    m.Phi_x[i - 1] = L.rightCols(p - 1);
  }
  return m;
}

// Case (i): Pi+ = alpha beta' of rank r, pi- = Pi+ e1-part plus a component outside span alpha.
// Returned models pass verify_assumptions.
inline CksvarModel random_case1(std::mt19937_64& rng, int p, int k, int max_tries = 2000) {
  for (int tries = 0; tries < max_tries; ++tries) {
    const int r = std::uniform_int_distribution<int>(0, p - 1)(rng);
    Mat beta = randn(rng, p, r);
    Mat alpha(p, r);
    if (r > 0) alpha = -beta * (beta.transpose() * beta).inverse() * unif(rng, 0.2, 0.8) + randn(rng, p, r, 0.05);
    Mat Pi = alpha * beta.transpose();
    Vec extra = randn(rng, p, 1, 0.3);
    extra(0) = -std::abs(extra(0)) - 0.2;
    Vec pi_m = Pi.col(0) + extra;
    std::vector<Mat> Gs;
    for (int i = 1; i < k; ++i) Gs.push_back(randn(rng, p, p + 1, 0.15 / std::sqrt(static_cast<double>(p))));
    CksvarModel m = from_vecm(Pi.col(0), pi_m, Pi.rightCols(p - 1), Gs);
    m.Sigma = random_spd(rng, p);
    auto v = cksvar::vecm_decompose(m);
    if (cksvar::classify_case(v).config != cksvar::TableConfig::CaseI) continue;
    if (cksvar::verify_assumptions(m).all_ok()) return m;
  }
  throw std::runtime_error("random_case1: no admissible draw");
}

// Case (ii): Pi_x = alpha beta_x' of rank r, pi+- = alpha b+- so both lie in span Pi_x.
inline CksvarModel random_case2(std::mt19937_64& rng, int p, int k, int max_tries = 2000) {
  for (int tries = 0; tries < max_tries; ++tries) {
    const int r = p == 1 ? 0 : std::uniform_int_distribution<int>(1, p - 1)(rng);
    Mat bx = randn(rng, p - 1, r);
    Mat bp(p, r), bm(p, r);
    if (r > 0) {
      bp << randn(rng, 1, r), bx;
      bm << randn(rng, 1, r), bx;
    }
    Mat alpha(p, r);
    if (r > 0) alpha = -bp * (bp.transpose() * bp).inverse() * unif(rng, 0.2, 0.8) + randn(rng, p, r, 0.05);
    Mat Pp = alpha * bp.transpose(), Pm = alpha * bm.transpose();
    std::vector<Mat> Gs;
    for (int i = 1; i < k; ++i) Gs.push_back(randn(rng, p, p + 1, 0.2 / std::sqrt(static_cast<double>(p))));
    CksvarModel m = from_vecm(Pp.col(0), Pm.col(0), Pp.rightCols(p - 1), Gs);
    m.Sigma = random_spd(rng, p);
    auto v = cksvar::vecm_decompose(m);
    auto cls = cksvar::classify_case(v);
    if (cls.config != cksvar::TableConfig::CaseII || cls.linear) continue;
    if (cksvar::verify_assumptions(m).all_ok()) return m;
  }
  throw std::runtime_error("random_case2: no admissible draw");
}

// Structural model whose canonical form is m: premultiply by a random Q^{-1} style mixing that keeps coherence.
inline CksvarModel structuralize(std::mt19937_64& rng, const CksvarModel& m) {
  const int p = m.p;
  for (;;) {
    Mat A = Mat::Identity(p, p) + randn(rng, p, p, 0.3);
    if (std::abs(A.determinant()) < 0.2) continue;
    CksvarModel s = m;
    s.phi0_plus = A * m.phi0_plus;
    s.phi0_minus = A * m.phi0_minus;
    s.Phi0_x = A * m.Phi0_x;
    for (int i = 0; i < m.k; ++i) {
      s.phi_plus[i] = A * m.phi_plus[i];
      s.phi_minus[i] = A * m.phi_minus[i];
      s.Phi_x[i] = A * m.Phi_x[i];
    }
    s.c = A * m.c;
    s.Sigma = A * m.Sigma * A.transpose();
    if (cksvar::validate_dgp(s).ok()) return s;
  }
}

}  // namespace fx
