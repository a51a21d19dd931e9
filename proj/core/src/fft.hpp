#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace dynsamp::detail {

// DFT of `howmany` tubes of length n; tube t starts at offset t and has
// stride `howmany` (the Tensor3 layout with howmany = m * p).
// sign = -1 forward, +1 backward (unnormalised either way).
void tube_dft(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
              std::size_t howmany, std::size_t n, int sign);

} // namespace dynsamp::detail
