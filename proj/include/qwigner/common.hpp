#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qwigner {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using MultiIndex = std::vector<int>;

inline constexpr double kPi = std::numbers::pi;

// Points (and chirp frequencies) closer than this are identified.
inline constexpr double kDefaultMergeTol = 1e-9;
// Relative Frobenius tolerance for matrix identities.
inline constexpr double kMatrixTol = 1e-9;
// Absolute determinant threshold is kDetTolFactor * scale^n for an n x n matrix.
inline constexpr double kDetTolFactor = 1e-10;
// Condition numbers at or above this make a determinant count as zero.
inline constexpr double kSingularCond = 1e12;
// Condition numbers at or above this (and below kSingularCond) are marginal.
inline constexpr double kMarginalCond = 1e8;
// Minimal-gap threshold of the accumulation heuristic.
inline constexpr double kAccumulationEps = 1e-3;
inline constexpr std::size_t kDefaultAtomCap = 1'000'000;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad input: dimension mismatch, malformed file, wrong matrix shape.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Singular matrix, unresolvable grid, or any other numerical failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularMatrixError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

// An identity that must hold exactly failed beyond tolerance.
class PropertyViolation : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace qwigner
