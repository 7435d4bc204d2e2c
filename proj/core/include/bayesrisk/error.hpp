#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bayesrisk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state space or posterior that breaks its structural invariants.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NonFinite : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class MissingEmbedding : public Error {
public:
    MissingEmbedding() : Error("state space has no real-line embedding") {}
};

class NotNormalized : public Error {
public:
    NotNormalized() : Error("cost matrix must be normalized (zero diagonal, max entry 1)") {}
};

class NegativeCost : public Error {
public:
    using Error::Error;
};

class DerivativeUnavailable : public Error {
public:
    DerivativeUnavailable() : Error("distance cost has no derivative") {}
};

/// Some reported estimate costs strictly less than truth in column `column`:
/// entry[row][column] < entry[column][column].
class DiagonalNotMinimal : public Error {
public:
    DiagonalNotMinimal(std::size_t column, std::size_t row)
        : Error("cost column " + std::to_string(column) + " has entry at row " +
                std::to_string(row) + " below the diagonal"),
          column_(column), row_(row) {}

    std::size_t column() const noexcept { return column_; }
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t column_;
    std::size_t row_;
};

}  // namespace bayesrisk
