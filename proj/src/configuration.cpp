#include "chainform/configuration.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "chainform/errors.hpp"

namespace chainform {

std::vector<Vec2> VectorChain::positions_from(const Vec2& anchor) const {
  std::vector<Vec2> p;
  p.reserve(w.size() + 1);
  p.push_back(anchor);
  for (const Vec2& e : w) p.push_back(p.back() + e);
  return p;
}

Configuration::Configuration(std::vector<Vec2> positions, double eta_conn) : p_(std::move(positions)) {
  if (p_.size() < 2) throw std::invalid_argument("configuration needs at least two robots");
  if (std::size_t i = first_long_edge(p_, eta_conn)) {
    throw ConnectivityError(fmt::format("edge w_{} has length {:.17g} > 1", i, norm(p_[i - 1] - p_[i - 2])),
                            static_cast<int>(i));
  }
}

Configuration Configuration::from_vectors(const Vec2& anchor, const VectorChain& w) {
  return Configuration(w.positions_from(anchor));
}

VectorChain chain_vectors(std::span<const Vec2> p) {
  VectorChain vc;
  vc.w.reserve(p.size() ? p.size() - 1 : 0);
  for (std::size_t i = 1; i < p.size(); ++i) vc.w.push_back(p[i] - p[i - 1]);
  return vc;
}

VectorChain chain_vectors(const Configuration& c) { return chain_vectors(c.positions()); }

std::size_t first_long_edge(std::span<const Vec2> p, double eta) {
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (norm(p[i] - p[i - 1]) > 1.0 + eta) return i + 1;
  }
  return 0;
}

void write_config_csv(std::ostream& out, const Configuration& c) {
  out << "i,x,y\n";
  for (std::size_t i = 0; i < c.n(); ++i) out << fmt::format("{},{:.17g},{:.17g}\n", i + 1, c[i].x, c[i].y);
}

void write_config_csv(const std::string& path, const Configuration& c) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  write_config_csv(f, c);
}

Configuration read_config_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty configuration file");
  if (line.rfind("i,x,y", 0) != 0) throw std::invalid_argument("configuration header must be i,x,y");
  std::vector<Vec2> p;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw std::invalid_argument(fmt::format("line {}: expected i,x,y", lineno));
    std::size_t idx = std::stoul(a);
    if (idx != p.size() + 1) throw std::invalid_argument(fmt::format("line {}: robots out of order", lineno));
    p.push_back({std::stod(b), std::stod(c)});
  }
  return Configuration(std::move(p));
}

Configuration read_config_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  return read_config_csv(f);
}

}  // namespace chainform
