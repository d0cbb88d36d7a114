#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "chainform/vec2.hpp"

namespace chainform {

// Numeric slacks shared by every module.
inline constexpr double kEtaConn = 1e-9;  // connectivity
inline constexpr double kEtaCol = 1e-7;   // collinearity, absolute distance
inline constexpr double kEtaAng = 1e-7;   // direction equality, radians
inline constexpr double kEtaZero = 1e-9;  // zero-vector test

// Robots are stored 0-based: robot r_i lives at index i-1. Edge w_i = p_i - p_{i-1}
// (i = 2..n) lives at index i-2 of a VectorChain.
struct VectorChain {
  std::vector<Vec2> w;

  std::size_t size() const { return w.size(); }
  const Vec2& operator[](std::size_t k) const { return w[k]; }
  // Positions obtained by summing the edges from an anchor.
  std::vector<Vec2> positions_from(const Vec2& anchor) const;
};

class Configuration {
 public:
  // Throws std::invalid_argument for n < 2 and ConnectivityError for an edge
  // longer than 1 + eta_conn.
  explicit Configuration(std::vector<Vec2> positions, double eta_conn = kEtaConn);

  static Configuration from_vectors(const Vec2& anchor, const VectorChain& w);

  std::size_t n() const { return p_.size(); }
  const Vec2& operator[](std::size_t i) const { return p_[i]; }
  std::span<const Vec2> positions() const { return p_; }

 private:
  std::vector<Vec2> p_;
};

VectorChain chain_vectors(const Configuration& c);
VectorChain chain_vectors(std::span<const Vec2> p);

// Returns the 1-based index of the first edge exceeding 1 + eta, or 0.
std::size_t first_long_edge(std::span<const Vec2> p, double eta = kEtaConn);

// CSV with header `i,x,y`, 17 significant digits, robots in chain order.
void write_config_csv(std::ostream& out, const Configuration& c);
void write_config_csv(const std::string& path, const Configuration& c);
Configuration read_config_csv(std::istream& in);
Configuration read_config_csv(const std::string& path);

}  // namespace chainform
