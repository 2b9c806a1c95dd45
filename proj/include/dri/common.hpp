#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dri {

/// Artifact version embedded in every emitted run manifest.
inline constexpr const char* kVersion = "0.1.0";

/// Input data failed a structural or range check (bad CSV, non-permutation
/// ranking row, out-of-range rating, inconsistent waves). Maps to exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A computation could not produce a result from valid inputs (e.g. a grid
/// with zero usable correlation pairs). Maps to exit code 4.
class ComputationError : public std::runtime_error {
public:
    explicit ComputationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Usage errors (bad arguments, bad flag values, precondition violations that a
// caller controls) are reported as std::invalid_argument and map to exit code 2.

/// Dense row-major integer matrix; the storage type for ratings and rankings.
struct IntMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<int> data;  // rows*cols entries, row-major

    IntMatrix() = default;
    IntMatrix(std::size_t r, std::size_t c, int fill = 0) : rows(r), cols(c), data(r * c, fill) {}

    int& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    int at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    bool operator==(const IntMatrix& other) const = default;
};

}  // namespace dri
