#pragma once

#include <stdexcept>
#include <string>

namespace vaceuler {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// J = det(D eta) dropped to or below the singular threshold at some node;
// signals mesh tangling or blow-up.
class SingularJacobian : public Error {
public:
    SingularJacobian(std::size_t node, double jvalue)
        : Error("singular Jacobian at node " + std::to_string(node) +
                ": J = " + std::to_string(jvalue)),
          node(node), jvalue(jvalue) {}
    std::size_t node;
    double jvalue;
};

// Operation not defined for the slab dimension (e.g. curl in 1D).
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

class CflViolation : public Error {
public:
    CflViolation(double dt, double dt_max)
        : Error("CFLViolation: dt = " + std::to_string(dt) +
                " exceeds limit " + std::to_string(dt_max)),
          dt(dt), dt_max(dt_max) {}
    double dt;
    double dt_max;
};

// Initial-data validation failures.
class NotPhysicalVacuum : public Error {
public:
    explicit NotPhysicalVacuum(const std::string& what) : Error(what) {}
};
class InteriorVacuum : public Error {
public:
    explicit InteriorVacuum(const std::string& what) : Error(what) {}
};
class BottomBCViolation : public Error {
public:
    explicit BottomBCViolation(const std::string& what) : Error(what) {}
};

// Requested time-derivative stack deeper than the supported maximum (8).
class StackOverflowOrder : public Error {
public:
    explicit StackOverflowOrder(int k)
        : Error("StackOverflowOrder: requested stack depth " +
                std::to_string(k) + " exceeds maximum 8") {}
};

// A field contained NaN or Inf.
class FieldNotFinite : public Error {
public:
    explicit FieldNotFinite(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace vaceuler
