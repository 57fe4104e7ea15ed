#pragma once

#include <stdexcept>
#include <string>

namespace hypdc {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A coordinate pair on or outside the unit circle where a disk point is required.
class OutsideDiskError : public Error {
 public:
  using Error::Error;
};

// Collinear, coincident or otherwise degenerate geometric input.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

// Side lengths violating a strict triangle inequality. `face` is -1 for a free triangle.
class TriangleInequalityError : public Error {
 public:
  TriangleInequalityError(const std::string& what, int face, int side)
      : Error(what), face_(face), side_(side) {}

  int face() const { return face_; }
  // 0, 1, 2 for sides a, b, c.
  int side() const { return side_; }

 private:
  int face_;
  int side_;
};

// Malformed combinatorics (non-simplicial faces, non-manifold edges, unknown ids).
class TopologyError : public Error {
 public:
  using Error::Error;
};

// Newton iteration hit its iteration cap.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double residual, int iterations)
      : Error(what), residual_(residual), iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

// Line search could not find a step that keeps every face realizable.
class InfeasibleStepError : public Error {
 public:
  InfeasibleStepError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// An audit instance that does not satisfy the hypotheses of the chain it audits.
class HypothesisError : public Error {
 public:
  HypothesisError(const std::string& hypothesis, const std::string& what)
      : Error(what), hypothesis_(hypothesis) {}

  const std::string& hypothesis() const { return hypothesis_; }

 private:
  std::string hypothesis_;
};

// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hypdc
