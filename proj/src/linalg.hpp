#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace cksvar {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;

Vec singular_values(const Mat& A);
double max_singular_value(const Mat& A);

// Number of singular values above tol * scale.
int numerical_rank(const Mat& A, double tol, double scale);

// Orthonormal basis for the column space, truncated at tol * scale.
Mat range_basis(const Mat& A, double tol, double scale);

// ||v - proj_{span A} v|| / ||v||; zero vector gives 0.
double span_residual(const Mat& A, const Vec& v, double tol, double scale);

// Orthonormal basis of the orthogonal complement of span(A); A must have full column rank.
Mat orthocomplement(const Mat& A, double tol = 1e-10);

double spectral_radius(const Mat& A);
double spectral_norm(const Mat& A);
CVec eigenvalues(const Mat& A);

// Cholesky factor L (lower, L L' = S); throws if S is not symmetric positive definite.
Mat chol_lower(const Mat& S, const char* what);
bool is_spd(const Mat& S);

// Solve A x = b with a conditioning guard (reciprocal condition estimated from SVD).
Mat solve_checked(const Mat& A, const Mat& b, double cond_limit, const char* what);
double condition_number(const Mat& A);

Mat pinv(const Mat& A, double tol = 1e-12);

double max_abs(const Mat& A);

}  // namespace cksvar
