#pragma once

#include <stdexcept>
#include <string>

namespace frac {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidParams : public Error {
public:
    using Error::Error;
};

// Real output requested from a field without Hermitian symmetry.
class NonHermitian : public Error {
public:
    using Error::Error;
};

// lq_norm with q < 1.
class InvalidExponent : public Error {
public:
    using Error::Error;
};

// Profile order outside (0,1).
class OrderOutOfRange : public Error {
public:
    using Error::Error;
};

// m = 0 extension of a field with a nonzero mean: the constant-mode profile
// has infinite weighted energy.
class MasslessExtension : public Error {
public:
    using Error::Error;
};

// Conormal-limit extrapolation residual above the requested tolerance.
class ProbeTooCoarse : public Error {
public:
    using Error::Error;
};

// Tridiagonal solve broke down.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class UnknownLabel : public Error {
public:
    using Error::Error;
};

// No sphere radius with a positive functional lower bound.
class GeometryInfeasible : public Error {
public:
    using Error::Error;
};

// Lattice exponent too small for the Hausdorff-Young sum to converge.
class DivergentSum : public Error {
public:
    using Error::Error;
};

// Config file problems; carries "file:line: field" context where known.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Continuation level left [K1, K2].
class LevelOutOfBounds : public Error {
public:
    using Error::Error;
};

// Continuation limit field below the nontriviality floor.
class TrivialLimit : public Error {
public:
    using Error::Error;
};

}  // namespace frac
