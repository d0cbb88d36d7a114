#pragma once

#include <stdexcept>
#include <string>

namespace chainform {

class ChainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when an edge is longer than 1 + eta_conn.
class ConnectivityError : public ChainError {
 public:
  ConnectivityError(const std::string& what, int edge) : ChainError(what), edge_(edge) {}
  int edge() const { return edge_; }

 private:
  int edge_;
};

// An outer edge of (numerically) zero length leaves w-hat undefined.
class ZeroOuterEdge : public ChainError {
 public:
  ZeroOuterEdge(const std::string& what, long round = -1) : ChainError(what), round_(round) {}
  long round() const { return round_; }

 private:
  long round_;
};

class NonConvergence : public ChainError {
 public:
  using ChainError::ChainError;
};

}  // namespace chainform
