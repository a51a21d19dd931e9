#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dynsamp {

// Shape or index disagreement between operands.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A value outside its admissible range (alpha, sigma, slab index, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Imaginary residue too large to drop from a tensor expected to be real.
class RealnessError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed serialized data. `line` is 1-based; 0 means "not line-bound".
class ParseError : public std::runtime_error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what),
          source_(std::move(source)), line_(line) {}

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One or more column systems are identically zero: the mask leaves those
// columns completely unobserved and they cannot be recovered.
// Column indices are 0-based.
class UnrecoverableColumn : public std::runtime_error {
public:
    explicit UnrecoverableColumn(std::vector<std::size_t> columns)
        : std::runtime_error(describe(columns)), columns_(std::move(columns)) {}

    const std::vector<std::size_t>& columns() const noexcept { return columns_; }

private:
    static std::string describe(const std::vector<std::size_t>& columns)
    {
        std::string s = "unrecoverable column(s):";
        for (auto j : columns)
            s += " " + std::to_string(j + 1);
        s += " (1-based); the sampling set never observes them";
        return s;
    }

    std::vector<std::size_t> columns_;
};

} // namespace dynsamp
