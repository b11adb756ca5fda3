#pragma once

#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace cksvar {

// Structural CKSVAR. y enters through y+ = max(y, b) and y- = min(y, b);
// x is the (p-1)-vector of linear variables. Lags are 1-based in the
// equations but stored 0-based here: phi_plus[0] is the lag-1 column.
struct CksvarModel {
  int p = 1;
  int k = 1;
  double b = 0.0;
  Vec c;
  Vec phi0_plus, phi0_minus;
  Mat Phi0_x;  // p x (p-1)
  std::vector<Vec> phi_plus, phi_minus;
  std::vector<Mat> Phi_x;  // each p x (p-1)
  Mat Sigma;

  // Throws DimensionError on inconsistent shapes or non-PD Sigma.
  void check() const;

  Mat Phi0_full() const;             // p x (p+1): [phi0+, phi0-, Phi0x]
  Mat lag_full(int i) const;         // p x (p+1), i = 1..k
  Mat Phi0(int regime) const;        // p x p: [phi0+-, Phi0x]
  Mat Phi(int i, int regime) const;  // p x p lag-i block for regime +1 / -1

  CksvarModel padded() const;  // k >= 2 with zero extra lags
  bool is_canonical(double tol = 0.0) const;

  static CksvarModel zeros(int p, int k);
};

Mat canonical_phi0(int p);  // I*_p

struct DgpReport {
  bool coherent = false;
  bool wlog_signs_ok = false;
  double det_plus = 0.0, det_minus = 0.0;
  double phi_tilde_plus = 0.0, phi_tilde_minus = 0.0;
  std::vector<std::string> messages;
  bool ok() const { return coherent && wlog_signs_ok; }
};

inline constexpr double kCondLimit = 1e10;

DgpReport validate_dgp(const CksvarModel& model);
CksvarModel threshold_shift(const CksvarModel& model);

struct CanonicalModel {
  CksvarModel model;  // Phi0 = I*_p, b = 0
  Mat P_inv;          // (p+1) x (p+1), acts on (y+, y-, x)
  Mat P;
  Mat Q;              // p x p
  Mat P_plus_inv, P_minus_inv;  // p x p regime transforms
  double phi_tilde_plus = 1.0, phi_tilde_minus = 1.0;
};

CanonicalModel to_canonical(const CksvarModel& model);

// Undo the transform: recovers the structural coefficient polynomials.
CksvarModel from_canonical(const CanonicalModel& cm);

std::pair<double, double> split(double y);

}  // namespace cksvar
