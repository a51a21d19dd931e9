#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynsamp/tensor3.hpp"

namespace dynsamp {

// Modes are 1-based as in tensor notation: 1 = rows (i), 2 = columns (j),
// 3 = tubes (k).
struct SlabExclusion {
    int mode = 2;
    std::size_t index = 0; // 0-based coordinate along `mode`
    bool operator==(const SlabExclusion&) const = default;
};

struct MaskProvenance {
    enum class Kind : std::uint8_t { bernoulli, lattice, explicit_set };

    Kind kind = Kind::explicit_set;
    double alpha = 0.0;              // bernoulli only
    std::uint64_t seed = 0;          // bernoulli only
    std::vector<std::size_t> rows;   // lattice only, 0-based
    std::vector<std::size_t> cols;   // lattice only, 0-based
    std::vector<SlabExclusion> exclusions;

    bool operator==(const MaskProvenance&) const = default;
};

// Sampling set Omega as an indicator over m x p x n, fixed across time.
class SampleMask {
public:
    SampleMask() = default;
    // `indicator` uses the Tensor3 storage order, entries 0 or 1.
    SampleMask(Shape shape, std::vector<std::uint8_t> indicator, MaskProvenance provenance = {});

    const Shape& shape() const noexcept { return shape_; }
    const MaskProvenance& provenance() const noexcept { return provenance_; }
    std::span<const std::uint8_t> indicator() const noexcept { return indicator_; }

    bool contains(std::size_t i, std::size_t j, std::size_t k) const;
    std::size_t sample_count() const noexcept { return count_; }
    double rate() const noexcept;

    // Sorted 0-based column indices j with at least one sample.
    std::vector<std::size_t> column_coverage() const;
    bool column_empty(std::size_t j) const;

    // 0/1 real tensor equal to 1 exactly on Omega.
    Tensor3 as_tensor() const;

    bool operator==(const SampleMask&) const = default;

private:
    Shape shape_{};
    std::vector<std::uint8_t> indicator_;
    MaskProvenance provenance_{};
    std::size_t count_ = 0;
};

// Each entry sampled independently with probability alpha; draws run over
// (i, j, k) lexicographically (i slowest) from a stream fixed by `seed`.
SampleMask bernoulli_mask(Shape shape, double alpha, std::uint64_t seed);
// Omega = rows x cols x [n]; indices 0-based.
SampleMask lattice_mask(Shape shape, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols);
SampleMask full_mask(Shape shape);
// Clears every entry whose `mode` coordinate equals `index` (0-based).
SampleMask exclude_slab(const SampleMask& mask, int mode, std::size_t index);

// Keeps entries of t on Omega, zeros elsewhere.
Tensor3 project(const SampleMask& mask, const Tensor3& t);

} // namespace dynsamp
