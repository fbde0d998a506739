#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace mburqr {

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Correlation of a constant sequence.
class UndefinedCorrelationError : public DomainError {
public:
    using DomainError::DomainError;
};

// Failures of a numerical procedure on otherwise valid input.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularMatrixError : public NumericalError {
public:
    explicit SingularMatrixError(std::size_t column)
        : NumericalError("matrix is singular: pivot tolerance not met in column " +
                         std::to_string(column)),
          column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

// A function evaluated to a non-finite value at a probe point.
class EvaluationError : public NumericalError {
public:
    EvaluationError(const std::string& what, std::vector<double> point)
        : NumericalError(what), point_(std::move(point)) {}

    const std::vector<double>& point() const noexcept { return point_; }

private:
    std::vector<double> point_;
};

// Objective not finite at the optimizer's start point.
class StartError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// exp(phi) overflowed, or the resulting shape underflowed to zero.
class OverflowError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Input data problems: parsing, missing names, too few rows.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t column)
        : DataError(what + " (row " + std::to_string(row) + ", column " +
                    std::to_string(column) + ")"),
          row_(row),
          column_(column) {}

    std::size_t row() const noexcept { return row_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t row_;
    std::size_t column_;
};

class NameError : public DataError {
public:
    using DataError::DataError;
};

class InsufficientDataError : public DataError {
public:
    using DataError::DataError;
};

}  // namespace mburqr
