#pragma once
#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace heis {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed user input (scene files, CLI arguments, option ranges).
class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected,
               std::string annotated)
        : InputError(std::move(message)),
          offset_(offset),
          expected_(std::move(expected)),
          annotated_(std::move(annotated)) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }
    /// Source line with a caret under the offending byte.
    const std::string& annotated() const noexcept { return annotated_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
    std::string annotated_;
};

class UnknownIdentifierError : public ParseError {
public:
    using ParseError::ParseError;
};

/// Evaluation outside an expression's domain (log of nonpositive, division by zero, ...).
class DomainError : public Error {
public:
    DomainError(std::string message, std::string subexpression, std::array<double, 3> point)
        : Error(std::move(message)), subexpression_(std::move(subexpression)), point_(point) {}

    const std::string& subexpression() const noexcept { return subexpression_; }
    const std::array<double, 3>& point() const noexcept { return point_; }

private:
    std::string subexpression_;
    std::array<double, 3> point_;
};

/// Horizontal gradient of u vanishes (to tolerance) at the requested point.
class CharacteristicPointError : public Error {
public:
    CharacteristicPointError(std::string message, double l, std::array<double, 3> point)
        : Error(std::move(message)), l_(l), point_(point) {}
    double l() const noexcept { return l_; }
    const std::array<double, 3>& point() const noexcept { return point_; }

private:
    double l_;
    std::array<double, 3> point_;
};

/// A point or curve that should lie on {u = 0} does not, or a curve leaves the tangent plane.
class SceneError : public InputError {
public:
    using InputError::InputError;
};

class NonRegularCurveError : public Error {
public:
    using Error::Error;
};

/// Degenerate denominator in a horizontal-branch limit formula.
class DegenerateDenominatorError : public Error {
public:
    using Error::Error;
};

class UnsupportedKindError : public InputError {
public:
    using InputError::InputError;
};

/// An internal numeric contract broke (e.g. a curvature radicand far below zero).
class NumericContractError : public Error {
public:
    using Error::Error;
};

/// The excision sequence of interior integrals does not settle.
class NonIntegrableError : public Error {
public:
    using Error::Error;
};

/// Neither orientation makes the classical Gauss-Bonnet check close.
class OrientationError : public Error {
public:
    using Error::Error;
};

}  // namespace heis
