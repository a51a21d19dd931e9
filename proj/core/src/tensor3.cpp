#include "dynsamp/tensor3.hpp"

#include <algorithm>
#include <cmath>

#include "dynsamp/error.hpp"
#include "dynsamp/random.hpp"
#include "fft.hpp"

namespace dynsamp {

std::string to_string(const Shape& s)
{
    return std::to_string(s.m) + "x" + std::to_string(s.p) + "x" + std::to_string(s.n);
}

namespace {

void require_positive(const Shape& s)
{
    if (s.m == 0 || s.p == 0 || s.n == 0)
        throw DimensionError("tensor dimensions must be positive, got " + to_string(s));
}

void require_same_shape(const Tensor3& a, const Tensor3& b, const char* op)
{
    if (a.shape() != b.shape())
        throw DimensionError(std::string(op) + ": shape mismatch " + to_string(a.shape()) +
                             " vs " + to_string(b.shape()));
}

void require_product_shapes(const Tensor3& a, const Tensor3& b, const char* op)
{
    if (a.depth() != b.depth() || a.cols() != b.rows())
        throw DimensionError(std::string(op) + ": incompatible shapes " + to_string(a.shape()) +
                             " and " + to_string(b.shape()));
}

Realness both_real(const Tensor3& a, const Tensor3& b)
{
    return a.is_real() && b.is_real() ? Realness::real : Realness::complex;
}

// Slice-wise products of already transformed operands.
std::vector<cplx> slice_products(const Tensor3& a, const Tensor3& b)
{
    const std::size_t m = a.rows(), q = b.cols(), n = a.depth();
    std::vector<cplx> out(m * q * n);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::Map<Eigen::MatrixXcd> dst(out.data() + k * m * q, static_cast<Eigen::Index>(m),
                                         static_cast<Eigen::Index>(q));
        dst.noalias() = a.slice(k) * b.slice(k);
    }
    return out;
}

} // namespace

// --- Tensor3 ----------------------------------------------------------------

Tensor3::Tensor3(Shape shape, Realness realness)
    : shape_(shape), data_(shape.size()), realness_(realness)
{
    require_positive(shape);
}

Tensor3::Tensor3(Shape shape, std::vector<cplx> data, Realness realness)
    : shape_(shape), data_(std::move(data)), realness_(realness)
{
    require_positive(shape);
    if (data_.size() != shape.size())
        throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + to_string(shape));
    if (realness == Realness::real) {
        for (const auto& v : data_)
            if (v.imag() != 0.0)
                throw RealnessError("tensor flagged real has a nonzero imaginary part");
    }
}

const cplx& Tensor3::at(std::size_t i, std::size_t j, std::size_t k) const
{
    if (i >= shape_.m || j >= shape_.p || k >= shape_.n)
        throw DimensionError("index (" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + ") out of range for " + to_string(shape_));
    return data_[index(i, j, k)];
}

Tensor3::SliceView Tensor3::slice(std::size_t k) const
{
    if (k >= shape_.n)
        throw DimensionError("slice " + std::to_string(k) + " out of range for " +
                             to_string(shape_));
    return SliceView(data_.data() + k * shape_.m * shape_.p, static_cast<Eigen::Index>(shape_.m),
                     static_cast<Eigen::Index>(shape_.p));
}

TubeVector Tensor3::tube(std::size_t i, std::size_t j) const
{
    if (i >= shape_.m || j >= shape_.p)
        throw DimensionError("tube (" + std::to_string(i) + "," + std::to_string(j) +
                             ") out of range for " + to_string(shape_));
    TubeVector v(static_cast<Eigen::Index>(shape_.n));
    for (std::size_t k = 0; k < shape_.n; ++k)
        v[static_cast<Eigen::Index>(k)] = data_[index(i, j, k)];
    return v;
}

// --- construction -------------------------------------------------------------

Tensor3 zeros(Shape shape)
{
    return Tensor3(shape, Realness::real);
}

Tensor3 ones(Shape shape)
{
    return Tensor3(shape, std::vector<cplx>(shape.size(), cplx(1.0)), Realness::real);
}

Tensor3 identity_tensor(std::size_t m, std::size_t n)
{
    return Tensor3::generate({m, m, n}, Realness::real,
                             [](std::size_t i, std::size_t j, std::size_t k) {
                                 return cplx(i == j && k == 0 ? 1.0 : 0.0);
                             });
}

Tensor3 random_tensor(Shape shape, std::uint64_t seed)
{
    require_positive(shape);
    RandomStream rng(seed);
    std::vector<cplx> data(shape.size());
    for (auto& v : data)
        v = rng.normal();
    return Tensor3(shape, std::move(data), Realness::real);
}

Tensor3 from_slices(std::span<const Eigen::MatrixXcd> slices, Realness realness)
{
    if (slices.empty())
        throw DimensionError("from_slices: no slices");
    const auto m = static_cast<std::size_t>(slices.front().rows());
    const auto p = static_cast<std::size_t>(slices.front().cols());
    std::vector<cplx> data(m * p * slices.size());
    for (std::size_t k = 0; k < slices.size(); ++k) {
        if (static_cast<std::size_t>(slices[k].rows()) != m ||
            static_cast<std::size_t>(slices[k].cols()) != p)
            throw DimensionError("from_slices: slice " + std::to_string(k) + " has wrong size");
        std::copy(slices[k].data(), slices[k].data() + m * p, data.begin() + k * m * p);
    }
    return Tensor3({m, p, slices.size()}, std::move(data), realness);
}

// --- transforms -----------------------------------------------------------------

Tensor3 dft3(const Tensor3& t)
{
    std::vector<cplx> out(t.size());
    detail::tube_dft(t.data(), out, t.rows() * t.cols(), t.depth(), -1);
    return Tensor3(t.shape(), std::move(out), t.depth() == 1 ? t.realness() : Realness::complex);
}

Tensor3 idft3(const Tensor3& t)
{
    std::vector<cplx> out(t.size());
    detail::tube_dft(t.data(), out, t.rows() * t.cols(), t.depth(), +1);
    const double inv = 1.0 / static_cast<double>(t.depth());
    for (auto& v : out)
        v *= inv;
    return Tensor3(t.shape(), std::move(out), t.depth() == 1 ? t.realness() : Realness::complex);
}

Tensor3 purge_imag(const Tensor3& t)
{
    if (t.is_real())
        return t;
    const double limit = kRealnessTolerance * (1.0 + fro_norm(t));
    std::vector<cplx> out(t.size());
    const auto src = t.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx) {
        if (std::abs(src[idx].imag()) >= limit)
            throw RealnessError("imaginary residue " + std::to_string(std::abs(src[idx].imag())) +
                                " exceeds realness tolerance " + std::to_string(limit));
        out[idx] = cplx(src[idx].real(), 0.0);
    }
    return Tensor3(t.shape(), std::move(out), Realness::real);
}

// --- products -----------------------------------------------------------------------

Tensor3 tprod(const Tensor3& a, const Tensor3& b)
{
    require_product_shapes(a, b, "tprod");
    const Tensor3 ah = dft3(a);
    const Tensor3 bh = dft3(b);
    Tensor3 prod({a.rows(), b.cols(), a.depth()}, slice_products(ah, bh), Realness::complex);
    Tensor3 result = idft3(prod);
    return both_real(a, b) == Realness::real ? purge_imag(result) : result;
}

Tensor3 tpow(const Tensor3& a, unsigned t)
{
    if (a.rows() != a.cols())
        throw DimensionError("tpow: first two modes must match, got " + to_string(a.shape()));
    if (t == 0)
        return identity_tensor(a.rows(), a.depth());
    if (t == 1)
        return a;

    const Tensor3 ah = dft3(a);
    std::vector<Eigen::MatrixXcd> slices(a.depth());
    for (std::size_t k = 0; k < a.depth(); ++k) {
        Eigen::MatrixXcd base = ah.slice(k);
        Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(base.rows(), base.cols());
        for (unsigned e = t;;) {
            if (e & 1u)
                acc = acc * base;
            e >>= 1;
            if (e == 0)
                break;
            base = base * base;
        }
        slices[k] = std::move(acc);
    }
    Tensor3 result = idft3(from_slices(slices, Realness::complex));
    return a.is_real() ? purge_imag(result) : result;
}

Tensor3 hadamard(const Tensor3& a, const Tensor3& b)
{
    require_same_shape(a, b, "hadamard");
    std::vector<cplx> out(a.size());
    const auto x = a.data(), y = b.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] = x[idx] * y[idx];
    return Tensor3(a.shape(), std::move(out), both_real(a, b));
}

Tensor3 tube_conv(const Tensor3& a, const Tensor3& b)
{
    require_same_shape(a, b, "tube_conv");
    const std::size_t n = a.depth();
    return Tensor3::generate(a.shape(), both_real(a, b),
                             [&](std::size_t i, std::size_t j, std::size_t k) {
                                 cplx s = 0.0;
                                 for (std::size_t l = 0; l < n; ++l)
                                     s += a(i, j, l) * b(i, j, (k + n - l) % n);
                                 return s;
                             });
}

Tensor3 facewise(const Tensor3& a, const Tensor3& b)
{
    require_product_shapes(a, b, "facewise");
    return Tensor3({a.rows(), b.cols(), a.depth()}, slice_products(a, b), both_real(a, b));
}

Eigen::MatrixXcd circ(const TubeVector& v)
{
    const Eigen::Index n = v.size();
    Eigen::MatrixXcd c(n, n);
    for (Eigen::Index col = 0; col < n; ++col)
        for (Eigen::Index row = 0; row < n; ++row)
            c(row, col) = v[(row - col + n) % n];
    return c;
}

Eigen::MatrixXcd bcirc(const Tensor3& a)
{
    const auto m = static_cast<Eigen::Index>(a.rows());
    const auto p = static_cast<Eigen::Index>(a.cols());
    const auto n = static_cast<Eigen::Index>(a.depth());
    Eigen::MatrixXcd big(m * n, p * n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            big.block(r * m, c * p, m, p) = a.slice(static_cast<std::size_t>((r - c + n) % n));
    return big;
}

Tensor3 bcirc_oracle(const Tensor3& a, const Tensor3& b)
{
    require_product_shapes(a, b, "bcirc_oracle");
    const std::size_t m = a.rows(), p = a.cols(), q = b.cols(), n = a.depth();
    const Eigen::MatrixXcd big = bcirc(a);

    // unfold(b): the pn x q matrix stacking the frontal slices of b.
    Eigen::MatrixXcd unfolded(static_cast<Eigen::Index>(p * n), static_cast<Eigen::Index>(q));
    for (std::size_t k = 0; k < n; ++k)
        unfolded.middleRows(static_cast<Eigen::Index>(k * p), static_cast<Eigen::Index>(p)) =
            b.slice(k);

    // Plain triple loop: no BLAS-style kernel, no transform.
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(big.rows(), unfolded.cols());
    for (Eigen::Index r = 0; r < big.rows(); ++r)
        for (Eigen::Index c = 0; c < unfolded.cols(); ++c) {
            cplx s = 0.0;
            for (Eigen::Index l = 0; l < big.cols(); ++l)
                s += big(r, l) * unfolded(l, c);
            prod(r, c) = s;
        }

    return Tensor3::generate({m, q, n}, both_real(a, b),
                             [&](std::size_t i, std::size_t j, std::size_t k) {
                                 const cplx v = prod(static_cast<Eigen::Index>(k * m + i),
                                                     static_cast<Eigen::Index>(j));
                                 return both_real(a, b) == Realness::real ? cplx(v.real()) : v;
                             });
}

// --- arithmetic & norms -----------------------------------------------------------

Tensor3 add(const Tensor3& a, const Tensor3& b)
{
    require_same_shape(a, b, "add");
    std::vector<cplx> out(a.size());
    const auto x = a.data(), y = b.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] = x[idx] + y[idx];
    return Tensor3(a.shape(), std::move(out), both_real(a, b));
}

Tensor3 subtract(const Tensor3& a, const Tensor3& b)
{
    require_same_shape(a, b, "subtract");
    std::vector<cplx> out(a.size());
    const auto x = a.data(), y = b.data();
    for (std::size_t idx = 0; idx < out.size(); ++idx)
        out[idx] = x[idx] - y[idx];
    return Tensor3(a.shape(), std::move(out), both_real(a, b));
}

Tensor3 scale(const Tensor3& a, cplx factor)
{
    std::vector<cplx> out(a.data().begin(), a.data().end());
    for (auto& v : out)
        v *= factor;
    const bool real = a.is_real() && factor.imag() == 0.0;
    return Tensor3(a.shape(), std::move(out), real ? Realness::real : Realness::complex);
}

double fro_norm(const Tensor3& t)
{
    double s = 0.0;
    for (const auto& v : t.data())
        s += std::norm(v);
    return std::sqrt(s);
}

double rel_error(const Tensor3& x, const Tensor3& f)
{
    require_same_shape(x, f, "rel_error");
    const double denom = fro_norm(f);
    if (denom == 0.0)
        throw DomainError("rel_error: ground truth has zero Frobenius norm");
    return fro_norm(subtract(x, f)) / denom;
}

double max_abs_diff(const Tensor3& x, const Tensor3& f)
{
    require_same_shape(x, f, "max_abs_diff");
    double worst = 0.0;
    const auto a = x.data(), b = f.data();
    for (std::size_t idx = 0; idx < a.size(); ++idx)
        worst = std::max(worst, std::abs(a[idx] - b[idx]));
    return worst;
}

} // namespace dynsamp
