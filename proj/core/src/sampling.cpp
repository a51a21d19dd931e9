#include "dynsamp/sampling.hpp"

#include <algorithm>
#include <numeric>

#include "dynsamp/error.hpp"
#include "dynsamp/random.hpp"

namespace dynsamp {

SampleMask::SampleMask(Shape shape, std::vector<std::uint8_t> indicator, MaskProvenance provenance)
    : shape_(shape), indicator_(std::move(indicator)), provenance_(std::move(provenance))
{
    if (shape.m == 0 || shape.p == 0 || shape.n == 0)
        throw DimensionError("mask dimensions must be positive, got " + to_string(shape));
    if (indicator_.size() != shape.size())
        throw DimensionError("mask indicator length " + std::to_string(indicator_.size()) +
                             " does not match shape " + to_string(shape));
    for (auto v : indicator_) {
        if (v > 1)
            throw DomainError("mask indicator entries must be 0 or 1");
        count_ += v;
    }
}

bool SampleMask::contains(std::size_t i, std::size_t j, std::size_t k) const
{
    if (i >= shape_.m || j >= shape_.p || k >= shape_.n)
        throw DimensionError("mask index out of range for " + to_string(shape_));
    return indicator_[i + shape_.m * (j + shape_.p * k)] != 0;
}

double SampleMask::rate() const noexcept
{
    return static_cast<double>(count_) / static_cast<double>(shape_.size());
}

bool SampleMask::column_empty(std::size_t j) const
{
    if (j >= shape_.p)
        throw DimensionError("column " + std::to_string(j) + " out of range for " +
                             to_string(shape_));
    for (std::size_t k = 0; k < shape_.n; ++k)
        for (std::size_t i = 0; i < shape_.m; ++i)
            if (indicator_[i + shape_.m * (j + shape_.p * k)])
                return false;
    return true;
}

std::vector<std::size_t> SampleMask::column_coverage() const
{
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < shape_.p; ++j)
        if (!column_empty(j))
            cols.push_back(j);
    return cols;
}

Tensor3 SampleMask::as_tensor() const
{
    std::vector<cplx> data(indicator_.size());
    std::transform(indicator_.begin(), indicator_.end(), data.begin(),
                   [](std::uint8_t v) { return cplx(v ? 1.0 : 0.0); });
    return Tensor3(shape_, std::move(data), Realness::real);
}

SampleMask bernoulli_mask(Shape shape, double alpha, std::uint64_t seed)
{
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw DomainError("bernoulli_mask: alpha must lie in [0, 1], got " + std::to_string(alpha));
    RandomStream rng(derive_seed(seed, {0x6d61736bULL}));
    std::vector<std::uint8_t> ind(shape.size(), 0);
    for (std::size_t i = 0; i < shape.m; ++i)
        for (std::size_t j = 0; j < shape.p; ++j)
            for (std::size_t k = 0; k < shape.n; ++k)
                ind[i + shape.m * (j + shape.p * k)] = rng.uniform() < alpha ? 1 : 0;

    MaskProvenance prov;
    prov.kind = MaskProvenance::Kind::bernoulli;
    prov.alpha = alpha;
    prov.seed = seed;
    return SampleMask(shape, std::move(ind), std::move(prov));
}

SampleMask lattice_mask(Shape shape, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols)
{
    if (rows.empty() || cols.empty())
        throw DomainError("lattice_mask: row and column sets must be nonempty");
    std::vector<std::uint8_t> in_rows(shape.m, 0), in_cols(shape.p, 0);
    for (auto i : rows) {
        if (i >= shape.m)
            throw DimensionError("lattice_mask: row " + std::to_string(i) + " out of range");
        in_rows[i] = 1;
    }
    for (auto j : cols) {
        if (j >= shape.p)
            throw DimensionError("lattice_mask: column " + std::to_string(j) + " out of range");
        in_cols[j] = 1;
    }

    std::vector<std::uint8_t> ind(shape.size(), 0);
    for (std::size_t k = 0; k < shape.n; ++k)
        for (std::size_t j = 0; j < shape.p; ++j)
            for (std::size_t i = 0; i < shape.m; ++i)
                ind[i + shape.m * (j + shape.p * k)] = in_rows[i] & in_cols[j];

    MaskProvenance prov;
    prov.kind = MaskProvenance::Kind::lattice;
    prov.rows = rows;
    prov.cols = cols;
    std::sort(prov.rows.begin(), prov.rows.end());
    prov.rows.erase(std::unique(prov.rows.begin(), prov.rows.end()), prov.rows.end());
    std::sort(prov.cols.begin(), prov.cols.end());
    prov.cols.erase(std::unique(prov.cols.begin(), prov.cols.end()), prov.cols.end());
    return SampleMask(shape, std::move(ind), std::move(prov));
}

SampleMask full_mask(Shape shape)
{
    std::vector<std::size_t> rows(shape.m), cols(shape.p);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return lattice_mask(shape, rows, cols);
}

SampleMask exclude_slab(const SampleMask& mask, int mode, std::size_t index)
{
    const Shape& s = mask.shape();
    std::size_t extent = 0;
    switch (mode) {
    case 1: extent = s.m; break;
    case 2: extent = s.p; break;
    case 3: extent = s.n; break;
    default: throw DomainError("exclude_slab: mode must be 1, 2 or 3, got " + std::to_string(mode));
    }
    if (index >= extent)
        throw DimensionError("exclude_slab: index " + std::to_string(index) +
                             " out of range for mode " + std::to_string(mode));

    std::vector<std::uint8_t> ind(mask.indicator().begin(), mask.indicator().end());
    for (std::size_t k = 0; k < s.n; ++k)
        for (std::size_t j = 0; j < s.p; ++j)
            for (std::size_t i = 0; i < s.m; ++i) {
                const std::size_t coord = mode == 1 ? i : mode == 2 ? j : k;
                if (coord == index)
                    ind[i + s.m * (j + s.p * k)] = 0;
            }

    MaskProvenance prov = mask.provenance();
    prov.exclusions.push_back({mode, index});
    return SampleMask(s, std::move(ind), std::move(prov));
}

Tensor3 project(const SampleMask& mask, const Tensor3& t)
{
    if (mask.shape() != t.shape())
        throw DimensionError("project: mask shape " + to_string(mask.shape()) +
                             " does not match tensor shape " + to_string(t.shape()));
    std::vector<cplx> out(t.data().begin(), t.data().end());
    const auto ind = mask.indicator();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        if (!ind[idx])
            out[idx] = 0.0;
    return Tensor3(t.shape(), std::move(out), t.realness());
}

} // namespace dynsamp
