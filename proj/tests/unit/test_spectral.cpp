#include <cmath>
#include <numbers>

#include "doctest.h"

#include "chainform/analysis.hpp"
#include "chainform/discrete.hpp"
#include "chainform/errors.hpp"
#include "chainform/generators.hpp"
#include "chainform/spectral.hpp"

using namespace chainform;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// The Max-GtM edge map in the x_2..x_n, y_2..y_n ordering.
Eigen::VectorXd edge_map(const Eigen::VectorXd& s) {
  const Eigen::Index m = s.size() / 2;
  std::vector<Vec2> p{{0, 0}};
  for (Eigen::Index k = 0; k < m; ++k) p.push_back(p.back() + Vec2{s(k), s(m + k)});
  const auto q = step_positions(p, 1.0, 1.0);
  Eigen::VectorXd out(2 * m);
  for (Eigen::Index k = 0; k < m; ++k) {
    out(k) = q[k + 1].x - q[k].x;
    out(m + k) = q[k + 1].y - q[k].y;
  }
  return out;
}

}  // namespace

TEST_CASE("A1, A2, A3 structure") {
  const MatrixSpec a1 = build_a1(3);
  Eigen::Matrix3d want;
  want << 1, 0, 0, 0.5, 0, 0.5, 0.5, 0.5, 0;
  CHECK(a1.m.isApprox(want));
  for (std::size_t n : {3u, 4u, 8u, 16u}) {
    const MatrixSpec a = build_a1(n), b = build_a2(n), c = build_a3(n);
    CHECK((a.m.rowwise().sum().array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK((b.m.rowwise().sum().array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK((b.m.colwise().sum().array() - 1.0).abs().maxCoeff() == 0.0);
    CHECK(is_symmetric(b.m));
    CHECK(is_symmetric(c.m));
    CHECK(c.dim() == static_cast<Eigen::Index>(n - 1));
    CHECK(c.m.row(0).sum() == 0.5);
    for (Eigen::Index r = 1; r < c.dim(); ++r) CHECK(c.m.row(r).sum() == 1.0);
  }
  Eigen::Matrix2d a3;
  a3 << 0, 0.5, 0.5, 0.5;
  CHECK(build_a3(3).m.isApprox(a3));
  CHECK_THROWS(build_a1(2));
}

TEST_CASE("closed-form spectra") {
  SpectrumResult s = eigenvalues(build_a1(4));
  const double want[] = {1, std::sqrt(0.5), 0, -std::sqrt(0.5)};
  REQUIRE(s.eigenvalues.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(s.eigenvalues[k] == Approx(want[k]).scale(1.0));
  CHECK(s.accepted);
  s = eigenvalues(build_a3(3));
  CHECK(s.eigenvalues[0] == Approx(std::cos(kPi / 5)));
  CHECK(s.eigenvalues[1] == Approx(std::cos(3 * kPi / 5)));
  MatrixSpec id{MatrixKind::Custom, 5, Eigen::MatrixXd::Identity(5, 5)};
  for (double l : eigenvalues(id).eigenvalues) CHECK(l == 1.0);
  for (std::size_t n : {5u, 12u, 24u}) {
    const auto a2 = eigenvalues(build_a2(n)).eigenvalues;
    for (std::size_t j = 0; j < n; ++j) CHECK(a2[j] == Approx(std::cos(j * kPi / n)).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("A3 eigenvectors: the reversed index form is the eigenvector") {
  for (std::size_t n : {4u, 8u, 16u}) {
    const MatrixSpec a3 = build_a3(n);
    const auto lam = a3_eigenvalues_closed(n);
    for (std::size_t j = 1; j < n; ++j) {
      CHECK(verify_eigenpair(a3, lam[j - 1], a3_eigenvector_closed(n, j)) <= 1e-9);
      CHECK(verify_eigenpair(a3, lam[j - 1], a3_eigenvector_unreversed(n, j)) > 1e-3);
    }
  }
}

TEST_CASE("eigenpair residuals") {
  const Configuration m = gen_marching_chain(10);
  const auto wm = marching_vector(10);
  CHECK(verify_eigenpair(strategy_matrix(m), 1.0, wm) <= 1e-12);
  const MatrixSpec a = build_a2(6);
  CHECK(verify_eigenpair(a, 0.123, {0.3, -1.2, 0.8, 0.1, 0.9, -0.4}) > 0.1);
  CHECK_THROWS(verify_eigenpair(a, 1.0, {1.0, 1.0}));
}

TEST_CASE("Rayleigh bound") {
  MatrixSpec id{MatrixKind::Custom, 4, Eigen::MatrixXd::Identity(4, 4)};
  CHECK(rayleigh_bound(id) == 1.0);
  CHECK(rayleigh_bound(build_a2(9)) == Approx(1.0));
  // All-ones quotient of the marching Jacobian: the two corner columns sum
  // to 1/2 + n/(2(n-2)) but the first row of each block loses the 1/2 carried
  // by the virtual neighbour, giving (2n - 3 + 2/(n-2)) / (2(n-1)).
  for (std::size_t n : {6u, 10u, 20u}) {
    const double nn = static_cast<double>(n);
    CHECK(rayleigh_bound(build_jacobian_marching(n)) ==
          Approx((2 * nn - 3 + 2 / (nn - 2)) / (2 * (nn - 1))).epsilon(1e-14));
  }
  CHECK(build_jacobian_marching(10).m(0, 0) == Approx(0.625));
  CHECK_THROWS(rayleigh_bound(build_a1(4)));
}

TEST_CASE("spectral radius") {
  for (std::size_t n : {6u, 10u, 20u}) {
    const double nn = static_cast<double>(n);
    const double rho = spectral_radius(build_jacobian_marching(n));
    CHECK(rho > 1.0);
    CHECK(rho >= 1 + 1 / ((nn - 1) * (nn - 2)) - 1e-10);
  }
  for (std::size_t n : {4u, 8u, 16u}) CHECK(spectral_radius(build_a3(n)) == Approx(std::cos(kPi / (2 * n - 1))));
  MatrixSpec z{MatrixKind::Custom, 3, Eigen::MatrixXd::Zero(3, 3)};
  CHECK(spectral_radius(z) == 0.0);
}

TEST_CASE("substochastic decay of A3 powers") {
  for (std::size_t n : {4u, 8u, 16u}) {
    const MatrixSpec a3 = build_a3(n);
    const double beta = spectral_radius(a3);
    // max entry of A^k <= n * alpha * beta^k with alpha = 1 (symmetric A, unit
    // spectral projector entries).
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(a3.dim(), a3.dim());
    bool ok = true;
    for (int k = 1; k <= 200; ++k) {
      p = p * a3.m;
      ok = ok && p.maxCoeff() <= static_cast<double>(n) * std::pow(beta, k) + 1e-15;
    }
    CHECK(ok);
  }
}

TEST_CASE("Jacobian at the marching chain and finite differences") {
  for (std::size_t n : {4u, 6u, 10u}) {
    std::vector<Vec2> p;
    for (const Vec2& v : gen_marching_chain(n).positions()) p.push_back({0.0, v.x});
    const MatrixSpec at = build_jacobian_at(Configuration(p));
    CHECK((at.m - build_jacobian_marching(n).m).cwiseAbs().maxCoeff() <= 1e-12);
  }
  for (std::size_t n : {4u, 6u, 8u}) {
    for (std::uint64_t s = 1; s <= 5; ++s) {
      const Configuration c = gen_random(Family::Random2D, n, s);
      const VectorChain w = chain_vectors(c);
      const Eigen::Index m = static_cast<Eigen::Index>(n - 1);
      Eigen::VectorXd x(2 * m);
      for (Eigen::Index k = 0; k < m; ++k) {
        x(k) = w[k].x;
        x(m + k) = w[k].y;
      }
      const double h = 1e-6;
      Eigen::MatrixXd fd(2 * m, 2 * m);
      for (Eigen::Index j = 0; j < 2 * m; ++j) {
        Eigen::VectorXd a = x, b = x;
        a(j) += h;
        b(j) -= h;
        fd.col(j) = (edge_map(a) - edge_map(b)) / (2 * h);
      }
      CHECK((build_jacobian_at(c).m - fd).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
  CHECK_THROWS_AS(build_jacobian_at(Configuration({{0, 0}, {0, 0}, {1, 0}})), ZeroOuterEdge);
}

TEST_CASE("mixing-time bounds") {
  const MixingBounds b = mixing_time_bounds(build_a2(16), 1e-3);
  CHECK(b.lambda2 == Approx(std::cos(kPi / 16)));
  CHECK(b.pi_min == Approx(1.0 / 16));
  CHECK(b.lower > 0.0);
  CHECK(b.upper > b.lower);
  CHECK(mixing_time_bounds(build_a2(16), 0.5).lower == 0.0);
  const MixingBounds a1 = mixing_time_bounds(build_a1(16), 1e-3);
  CHECK(a1.lower > 0.0);
  CHECK(std::isinf(a1.upper));
  CHECK_THROWS(mixing_time_bounds(build_a3(8), 1e-3));

  // Lower bound grows like n^2 in log-log.
  std::vector<double> lx, ly;
  for (std::size_t n : {8u, 16u, 32u, 64u}) {
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(mixing_time_bounds(build_a2(n), 1e-3).lower));
  }
  const double slope = (ly.back() - ly.front()) / (lx.back() - lx.front());
  CHECK(slope == Approx(2.0).epsilon(0.075));
}

TEST_CASE("Jacobian at a configuration is symmetric") {
  for (std::uint64_t s = 1; s <= 10; ++s)
    CHECK(is_symmetric(build_jacobian_at(gen_random(Family::Random2D, 4 + s, s)).m, 1e-15));
}

TEST_CASE("general path on a non-symmetric matrix") {
  const SpectrumResult s = eigenvalues(build_a1(6));
  CHECK(s.method == "general");
  CHECK(s.accepted);
  CHECK(s.eigenvalues.size() == 6);
  CHECK(s.eigenvalues.front() == Approx(1.0));
  CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
}
