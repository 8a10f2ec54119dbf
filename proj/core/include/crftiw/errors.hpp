#pragma once

#include <stdexcept>
#include <string>

namespace crftiw {

/// Base class for all crftiw failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// wavelet
class NonDyadicLength : public Error {
 public:
  using Error::Error;
};
class NonFiniteInput : public Error {
 public:
  using Error::Error;
};
class InconsistentPyramid : public Error {
 public:
  using Error::Error;
};
class DegenerateScale : public Error {
 public:
  DegenerateScale(int scale, const std::string& msg) : Error(msg), scale_(scale) {}
  int scale() const { return scale_; }

 private:
  int scale_;
};
class ZeroNormCurve : public Error {
 public:
  using Error::Error;
};

// sindex
class EmptyInput : public Error {
 public:
  using Error::Error;
};
class EmptyNeighborhood : public Error {
 public:
  using Error::Error;
};
class DegenerateCovariates : public Error {
 public:
  using Error::Error;
};
class OptimizerFailure : public Error {
 public:
  using Error::Error;
};
class NonPositiveEffect : public Error {
 public:
  using Error::Error;
};

// npmix
class GridMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyComponent : public Error {
 public:
  using Error::Error;
};
class InvalidL : public Error {
 public:
  using Error::Error;
};
class NumericalUnderflow : public Error {
 public:
  using Error::Error;
};
class TooFewValues : public Error {
 public:
  using Error::Error;
};

// simulate / evaluate
class InvalidScenario : public Error {
 public:
  using Error::Error;
};
class LengthMismatch : public Error {
 public:
  using Error::Error;
};
class EmptyCluster : public Error {
 public:
  using Error::Error;
};

// cli / pipeline
class EmptySeries : public Error {
 public:
  using Error::Error;
};
class NonPositivePopulation : public Error {
 public:
  using Error::Error;
};
class IoError : public Error {
 public:
  using Error::Error;
};

/// Pipeline failures carry the stage that produced them so the CLI can
/// report a stage-tagged message and exit nonzero.
class PipelineError : public Error {
 public:
  PipelineError(const std::string& stage, const std::string& msg)
      : Error("[" + stage + "] " + msg), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace crftiw
