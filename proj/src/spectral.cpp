#include "chainform/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

#include "chainform/analysis.hpp"
#include "chainform/errors.hpp"

namespace chainform {

std::string to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Strategy: return "S";
    case MatrixKind::A1: return "A1";
    case MatrixKind::A2: return "A2";
    case MatrixKind::A3: return "A3";
    case MatrixKind::JacobianAt: return "jacobian";
    case MatrixKind::JacobianMarching: return "jacobian-marching";
    case MatrixKind::Custom: return "custom";
  }
  return "?";
}

namespace {

using Eigen::Index;

void require_n(std::size_t n, const char* what) {
  if (n < 3) throw std::invalid_argument(fmt::format("{} needs n >= 3, got {}", what, n));
}

void check_row_sums(const Eigen::MatrixXd& m, const std::vector<double>& want, const char* what) {
  for (Index i = 0; i < m.rows(); ++i) {
    if (std::abs(m.row(i).sum() - want[static_cast<std::size_t>(i)]) > 1e-15)
      throw std::logic_error(fmt::format("{}: row {} sums to {}", what, i + 1, m.row(i).sum()));
  }
}

void fill_tridiagonal_half(Eigen::MatrixXd& m) {
  for (Index k = 0; k + 1 < m.rows(); ++k) m(k, k + 1) = m(k + 1, k) = 0.5;
}

}  // namespace

MatrixSpec build_a1(std::size_t n) {
  require_n(n, "A1");
  const auto d = static_cast<Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  m(0, 0) = 1.0;
  for (Index i = 1; i + 1 < d; ++i) m(i, i - 1) = m(i, i + 1) = 0.5;
  m(d - 1, 0) = 0.5;
  m(d - 1, d - 2) = 0.5;
  check_row_sums(m, std::vector<double>(n, 1.0), "A1");
  return {MatrixKind::A1, n, std::move(m)};
}

MatrixSpec build_a2(std::size_t n) {
  require_n(n, "A2");
  const auto d = static_cast<Index>(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  fill_tridiagonal_half(m);
  m(0, 0) = m(d - 1, d - 1) = 0.5;
  check_row_sums(m, std::vector<double>(n, 1.0), "A2");
  return {MatrixKind::A2, n, std::move(m)};
}

MatrixSpec build_a3(std::size_t n) {
  require_n(n, "A3");
  const auto d = static_cast<Index>(n - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
  fill_tridiagonal_half(m);
  m(d - 1, d - 1) = 0.5;
  std::vector<double> want(n - 1, 1.0);
  want[0] = 0.5;
  check_row_sums(m, want, "A3");
  return {MatrixKind::A3, n, std::move(m)};
}

MatrixSpec build_jacobian_at(const Configuration& c) {
  const std::size_t n = c.n();
  require_n(n, "Jacobian");
  VectorChain w = chain_vectors(c);
  const Vec2 w2 = w[0], wn = w[n - 2];
  const double r2 = norm(w2), rn = norm(wn);
  if (r2 <= kEtaZero || rn <= kEtaZero) throw ZeroOuterEdge("Jacobian needs non-zero outer edges");
  const auto d = static_cast<Index>(n - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (Index k = 0; k + 1 < d; ++k) {
    m(k, k + 1) = m(k + 1, k) = 0.5;
    m(d + k, d + k + 1) = m(d + k + 1, d + k) = 0.5;
  }
  auto corner = [&](Index k, const Vec2& v, double r) {
    const double c3 = 2.0 * r * r * r;
    m(k, k) = v.y * v.y / c3;
    m(d + k, d + k) = v.x * v.x / c3;
    m(k, d + k) = m(d + k, k) = -v.x * v.y / c3;
  };
  corner(0, w2, r2);
  corner(d - 1, wn, rn);
  return {MatrixKind::JacobianAt, n, std::move(m)};
}

MatrixSpec build_jacobian_marching(std::size_t n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument(fmt::format("marching Jacobian needs even n >= 4, got {}", n));
  const auto d = static_cast<Index>(n - 1);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * d, 2 * d);
  for (Index k = 0; k + 1 < d; ++k) {
    m(k, k + 1) = m(k + 1, k) = 0.5;
    m(d + k, d + k + 1) = m(d + k + 1, d + k) = 0.5;
  }
  const double nd = static_cast<double>(n);
  m(0, 0) = m(d - 1, d - 1) = nd / (2.0 * (nd - 2.0));
  return {MatrixKind::JacobianMarching, n, std::move(m)};
}

MatrixSpec build(MatrixKind kind, std::size_t n) {
  switch (kind) {
    case MatrixKind::A1: return build_a1(n);
    case MatrixKind::A2: return build_a2(n);
    case MatrixKind::A3: return build_a3(n);
    case MatrixKind::JacobianMarching: return build_jacobian_marching(n);
    default: throw std::invalid_argument("build: kind " + to_string(kind) + " needs a configuration");
  }
}

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol;
}

SpectrumResult eigenvalues(const MatrixSpec& ms, double tol) {
  const Eigen::MatrixXd& a = ms.m;
  if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: matrix not square");
  if (a.rows() > 512) throw std::invalid_argument("eigenvalues: dimension above 512");
  SpectrumResult r;
  const Index d = a.rows();
  if (d == 0) return r;
  struct Pair {
    double re, im, res;
  };
  std::vector<Pair> pairs;
  if (is_symmetric(a)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NonConvergence("self-adjoint eigensolver did not converge");
    r.method = "symmetric";
    for (Index k = 0; k < d; ++k) {
      Eigen::VectorXd x = es.eigenvectors().col(k);
      double lam = es.eigenvalues()(k);
      pairs.push_back({lam, 0.0, (a * x - lam * x).norm() / x.norm()});
    }
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw NonConvergence("general eigensolver did not converge");
    r.method = "general";
    Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    for (Index k = 0; k < d; ++k) {
      Eigen::VectorXcd x = es.eigenvectors().col(k);
      std::complex<double> lam = es.eigenvalues()(k);
      pairs.push_back({lam.real(), lam.imag(), (ac * x - lam * x).norm() / x.norm()});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& p, const Pair& q) { return p.re > q.re; });
  for (const Pair& p : pairs) {
    r.eigenvalues.push_back(p.re);
    r.imag.push_back(p.im);
    r.residuals.push_back(p.res);
    if (!(p.res <= tol)) r.accepted = false;
  }
  return r;
}

double verify_eigenpair(const MatrixSpec& m, double lambda, const std::vector<double>& x) {
  if (static_cast<Index>(x.size()) != m.m.cols()) throw std::invalid_argument("verify_eigenpair: dimension mismatch");
  Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Index>(x.size()));
  return (m.m * v - lambda * v).norm() / v.norm();
}

double rayleigh_bound(const MatrixSpec& m) {
  if (!is_symmetric(m.m)) throw std::invalid_argument("rayleigh_bound: matrix is not symmetric");
  const Index d = m.m.rows();
  Eigen::VectorXd u = Eigen::VectorXd::Ones(d);
  return u.dot(m.m * u) / static_cast<double>(d);
}

double spectral_radius(const MatrixSpec& m) {
  SpectrumResult s = eigenvalues(m, std::numeric_limits<double>::infinity());
  double rho = 0.0;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) rho = std::max(rho, std::hypot(s.eigenvalues[k], s.imag[k]));
  return rho;
}

MixingBounds mixing_time_bounds(const MatrixSpec& m, double eps) {
  if (m.kind != MatrixKind::A1 && m.kind != MatrixKind::A2)
    throw std::invalid_argument("mixing_time_bounds: only A1 and A2 are supported");
  if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("mixing_time_bounds: eps must lie in (0, 1/2]");
  SpectrumResult s = eigenvalues(m, std::numeric_limits<double>::infinity());
  std::vector<double> mod;
  for (std::size_t k = 0; k < s.eigenvalues.size(); ++k) mod.push_back(std::hypot(s.eigenvalues[k], s.imag[k]));
  std::sort(mod.begin(), mod.end(), std::greater<>());
  MixingBounds b;
  b.lambda2 = mod.size() > 1 ? mod[1] : 0.0;
  b.pi_min = m.kind == MatrixKind::A2 ? 1.0 / static_cast<double>(m.n) : 0.0;
  const double relax = 1.0 / (1.0 - b.lambda2) - 1.0;
  b.lower = eps == 0.5 ? 0.0 : relax * std::log(1.0 / (2.0 * eps));
  b.upper = b.pi_min > 0.0 ? relax * std::log(1.0 / (eps * b.pi_min)) : std::numeric_limits<double>::infinity();
  return b;
}

std::vector<double> a1_eigenvalues_closed(std::size_t n) {
  std::vector<double> v;
  for (std::size_t j = 0; j < n; ++j) v.push_back(std::cos(static_cast<double>(j) * std::numbers::pi / static_cast<double>(n)));
  return v;
}

std::vector<double> a3_eigenvalues_closed(std::size_t n) {
  std::vector<double> v;
  const double den = 2.0 * static_cast<double>(n) - 1.0;
  for (std::size_t j = 1; j < n; ++j) v.push_back(std::cos((2.0 * static_cast<double>(j) - 1.0) * std::numbers::pi / den));
  return v;
}

std::vector<double> a3_eigenvector_closed(std::size_t n, std::size_t j) {
  std::vector<double> x;
  const double den = 2.0 * (2.0 * static_cast<double>(n) - 1.0);
  const double a = 2.0 * static_cast<double>(j) - 1.0;
  for (std::size_t i = 1; i < n; ++i)
    x.push_back(std::cos(a * (2.0 * static_cast<double>(n - i) - 1.0) * std::numbers::pi / den));
  return x;
}

std::vector<double> a3_eigenvector_unreversed(std::size_t n, std::size_t j) {
  std::vector<double> x;
  const double den = 2.0 * (2.0 * static_cast<double>(n) - 1.0);
  const double a = 2.0 * static_cast<double>(j) - 1.0;
  for (std::size_t i = 1; i < n; ++i)
    x.push_back(std::cos(a * (2.0 * static_cast<double>(i) - 1.0) * std::numbers::pi / den));
  return x;
}

}  // namespace chainform
