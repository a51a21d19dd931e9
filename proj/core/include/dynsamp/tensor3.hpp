#pragma once
//
// Dense complex third-order tensors and the mode-3 transform algebra:
// DFT along tubes, the t-product, element-wise and tube-wise products,
// frontal-slice products, and circulant matrices of tubes.
//
// Storage is column-major over (i, j, k): element (i, j, k) lives at
// i + m * (j + p * k). A frontal slice [:, :, k] is therefore a contiguous
// m x p column-major block and can be viewed as an Eigen matrix in place.
//

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dynsamp {

using cplx = std::complex<double>;
using TubeVector = Eigen::VectorXcd;

struct Shape {
    std::size_t m = 0;
    std::size_t p = 0;
    std::size_t n = 0;

    std::size_t size() const noexcept { return m * p * n; }
    bool operator==(const Shape&) const = default;
};

std::string to_string(const Shape& s);

enum class Realness : std::uint8_t { complex, real };

class Tensor3 {
public:
    using SliceView = Eigen::Map<const Eigen::MatrixXcd>;

    Tensor3() = default;
    // Zero tensor.
    explicit Tensor3(Shape shape, Realness realness = Realness::real);
    // Takes ownership of `data` laid out as described above. With
    // Realness::real every imaginary part must be exactly zero.
    Tensor3(Shape shape, std::vector<cplx> data, Realness realness);

    template <class Fn>
    static Tensor3 generate(Shape shape, Realness realness, Fn&& fn)
    {
        std::vector<cplx> data(shape.size());
        std::size_t idx = 0;
        for (std::size_t k = 0; k < shape.n; ++k)
            for (std::size_t j = 0; j < shape.p; ++j)
                for (std::size_t i = 0; i < shape.m; ++i)
                    data[idx++] = fn(i, j, k);
        return Tensor3(shape, std::move(data), realness);
    }

    const Shape& shape() const noexcept { return shape_; }
    std::size_t rows() const noexcept { return shape_.m; }
    std::size_t cols() const noexcept { return shape_.p; }
    std::size_t depth() const noexcept { return shape_.n; }
    std::size_t size() const noexcept { return data_.size(); }
    bool is_real() const noexcept { return realness_ == Realness::real; }
    Realness realness() const noexcept { return realness_; }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return i + shape_.m * (j + shape_.p * k);
    }

    // Unchecked access.
    const cplx& operator()(std::size_t i, std::size_t j, std::size_t k) const noexcept
    {
        return data_[index(i, j, k)];
    }
    // Bounds-checked access; throws DimensionError.
    const cplx& at(std::size_t i, std::size_t j, std::size_t k) const;

    std::span<const cplx> data() const noexcept { return data_; }

    SliceView slice(std::size_t k) const;
    TubeVector tube(std::size_t i, std::size_t j) const;

    bool operator==(const Tensor3& other) const = default;

private:
    Shape shape_{};
    std::vector<cplx> data_;
    Realness realness_ = Realness::real;
};

// --- construction -------------------------------------------------------

Tensor3 zeros(Shape shape);
Tensor3 ones(Shape shape);
// m x m x n tensor whose first frontal slice is the identity matrix.
Tensor3 identity_tensor(std::size_t m, std::size_t n);
// I.i.d. standard normal real entries, drawn in storage order.
Tensor3 random_tensor(Shape shape, std::uint64_t seed);
// Builds a tensor from frontal slices (all of equal size).
Tensor3 from_slices(std::span<const Eigen::MatrixXcd> slices, Realness realness);

// --- transforms ----------------------------------------------------------

// Unnormalised forward DFT of every tube, kernel exp(-2*pi*i*a*b/n).
Tensor3 dft3(const Tensor3& t);
// Inverse of dft3 (includes the 1/n). Result is flagged complex; use
// purge_imag when the result is known to be real.
Tensor3 idft3(const Tensor3& t);

// Drops imaginary parts of magnitude below 1e-9 * (1 + ||t||_F) and flags the
// result real. Throws RealnessError if any imaginary part is larger.
Tensor3 purge_imag(const Tensor3& t);
inline constexpr double kRealnessTolerance = 1e-9;

// --- products ------------------------------------------------------------

// t-product of a (m x p x n) and b (p x q x n).
Tensor3 tprod(const Tensor3& a, const Tensor3& b);
// t-th t-product power of a square (m x m x n) tensor; t = 0 gives the identity.
Tensor3 tpow(const Tensor3& a, unsigned t);
// Element-wise product.
Tensor3 hadamard(const Tensor3& a, const Tensor3& b);
// Tube-wise n-point circular convolution (direct sum).
Tensor3 tube_conv(const Tensor3& a, const Tensor3& b);
// Frontal-slice-wise matrix product: result[:,:,k] = a[:,:,k] * b[:,:,k].
Tensor3 facewise(const Tensor3& a, const Tensor3& b);
// Circulant matrix with first column v: entry (r, c) = v[(r - c) mod n].
Eigen::MatrixXcd circ(const TubeVector& v);

// Brute-force t-product through the explicit mn x pn block-circulant matrix
// of a applied to the slice-stacked unfolding of b. No FFT. Test oracle.
Tensor3 bcirc_oracle(const Tensor3& a, const Tensor3& b);
// The mn x pn block-circulant matrix: block (r, c) = a[:, :, (r - c) mod n].
Eigen::MatrixXcd bcirc(const Tensor3& a);

// --- arithmetic & norms --------------------------------------------------

Tensor3 add(const Tensor3& a, const Tensor3& b);
Tensor3 subtract(const Tensor3& a, const Tensor3& b);
Tensor3 scale(const Tensor3& a, cplx factor);

double fro_norm(const Tensor3& t);
// ||x - f||_F / ||f||_F. Throws DomainError if ||f||_F == 0.
double rel_error(const Tensor3& x, const Tensor3& f);
// max_{ijk} |x - f|.
double max_abs_diff(const Tensor3& x, const Tensor3& f);

} // namespace dynsamp
