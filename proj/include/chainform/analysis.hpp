#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "chainform/configuration.hpp"

namespace chainform {

enum class ChainTag { Opposed, Marching, CollinearDegenerate, TwoDimensional };

struct ChainClass {
  ChainTag tag = ChainTag::TwoDimensional;
  bool collinear = false;
};

std::string to_string(ChainTag t);

// Total-least-squares line through a point set.
struct LineFit {
  Vec2 centroid;
  Vec2 direction;  // unit
  double max_distance = 0.0;
};
LineFit fit_line(std::span<const Vec2> p);

ChainClass classify(const Configuration& c, double eta_ang = kEtaAng, double eta_col = kEtaCol);

bool is_eps_maxchain(const Configuration& c, double eps);
bool is_eps_maxchain(std::span<const Vec2> p, double eps);

// Signed marching-chain edge values 1 - 2(i-1)/n for i = 2..n.
std::vector<double> marching_vector(std::size_t n);
bool is_eps_marching(const Configuration& c, double eps, double eta_col = kEtaCol);
bool is_eps_marching(std::span<const Vec2> p, double eps, double eta_col = kEtaCol);

// Maximal block of inner robots around k linked by edges no longer than
// radius. Outer robots never join a cluster.
struct InnerCluster {
  std::size_t first = 0;
  std::size_t last = 0;
  Vec2 centroid;
};
InnerCluster inner_cluster(std::span<const Vec2> p, std::size_t k, double radius);

// Interior angle at robot k (0-based), measured at the centroid of its
// cluster (radius eta_zero) between the rays to the robots just outside it;
// pi means locally straight. Returns pi when either of those robots sits on
// the centroid. Outer robots have no angle (pi).
double interior_angle(std::span<const Vec2> p, std::size_t k, double eta_zero = kEtaZero);

// Indices are 1-based robot indices as in the model. When defined is false the
// chain is one straight run (ell = r = 0); ell_plus/r_plus are then unset.
// When ell == r, ell_plus = n and r_plus = 1 so that the heights measure the
// bend robot against the segment joining the outer robots.
struct SegmentIndices {
  std::size_t ell = 0;
  std::size_t ell_plus = 0;
  std::size_t r = 0;
  std::size_t r_plus = 0;
  bool defined = false;
};

SegmentIndices segment_indices(const Configuration& c, double eta_col = kEtaCol, double eta_zero = kEtaZero,
                               double eta_ang = kEtaAng);
SegmentIndices segment_indices(std::span<const Vec2> p, double eta_col = kEtaCol, double eta_zero = kEtaZero,
                               double eta_ang = kEtaAng);

// For an undefined SegmentIndices the whole chain is treated as both outer
// segments: O_ell = O_r = L, gamma = n-1, I = 0, heights 0, angles pi.
struct ChainMetrics {
  double L = 0.0;
  double delta_1n = 0.0;
  double O_ell = 0.0;
  double O_r = 0.0;
  double I = 0.0;
  double gamma_ell = 0.0;
  double gamma_r = 0.0;
  double H_ell = 0.0;
  double H_r = 0.0;
  double alpha_ell = 0.0;
  double alpha_r = 0.0;
};

// eta_zero is the coincidence radius used for the angles at the bends.
ChainMetrics metrics(const Configuration& c, const SegmentIndices& seg, double eta_zero = kEtaZero);
ChainMetrics metrics(std::span<const Vec2> p, const SegmentIndices& seg, double eta_zero = kEtaZero);

}  // namespace chainform
