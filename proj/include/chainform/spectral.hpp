#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "chainform/configuration.hpp"
#include "chainform/matrix_spec.hpp"

namespace chainform {

// n x n: first row e_1 (absorbing), rows 2..n-1 average their neighbours with
// row 2 reaching back into column 1, last row (1/2, 0, ..., 1/2, 0).
MatrixSpec build_a1(std::size_t n);
// n x n symmetric tridiagonal random walk with self-loops 1/2 at both ends.
MatrixSpec build_a2(std::size_t n);
// (n-1) x (n-1): like A2 but the first row loses its self-loop (sums to 1/2).
MatrixSpec build_a3(std::size_t n);
// Jacobian of the Max-GtM edge map at the given chain. Variables are ordered
// x_2..x_n, y_2..y_n.
MatrixSpec build_jacobian_at(const Configuration& c);
// The same evaluated at the marching chain laid along the y axis.
MatrixSpec build_jacobian_marching(std::size_t n);
MatrixSpec build(MatrixKind kind, std::size_t n);

struct SpectrumResult {
  std::vector<double> eigenvalues;  // real parts, descending
  std::vector<double> imag;         // matching imaginary parts (0 on the symmetric path)
  std::vector<double> residuals;    // |A x - lambda x| / |x|
  std::string method;
  bool accepted = true;             // every residual within tolerance
};

// Symmetric input goes through a self-adjoint solver, anything else through a
// general real Schur based one. Throws NonConvergence if the solver fails.
SpectrumResult eigenvalues(const MatrixSpec& m, double tol = 1e-8);

double verify_eigenpair(const MatrixSpec& m, double lambda, const std::vector<double>& x);

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 0.0);

// u^T A u / u^T u for u = (1, ..., 1). Symmetric input only.
double rayleigh_bound(const MatrixSpec& m);
double spectral_radius(const MatrixSpec& m);

struct MixingBounds {
  double lambda2 = 0.0;  // second largest absolute eigenvalue
  double pi_min = 0.0;
  double lower = 0.0;    // (1/(1-lambda2) - 1) * log(1/(2 eps)); 0 at eps = 1/2
  double upper = 0.0;    // (1/(1-lambda2) - 1) * ln(1/(eps pi_min)); +inf when pi_min = 0
};

// A1 or A2 only.
MixingBounds mixing_time_bounds(const MatrixSpec& m, double eps);

// Closed forms used as independent oracles.
std::vector<double> a1_eigenvalues_closed(std::size_t n);  // cos(j pi / n), j = 0..n-1
std::vector<double> a3_eigenvalues_closed(std::size_t n);  // cos((2j-1) pi / (2n-1)), j = 1..n-1
// Eigenvector j of A3, entries i = 1..n-1: cos((2j-1)(2(n-i)-1) pi / (2(2n-1))).
std::vector<double> a3_eigenvector_closed(std::size_t n, std::size_t j);
// The same cosine read with i counted from the first row,
// cos((2j-1)(2i-1) pi / (2(2n-1))). It is not an eigenvector; kept as a control.
std::vector<double> a3_eigenvector_unreversed(std::size_t n, std::size_t j);

}  // namespace chainform
