#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dynsamp/sampling.hpp"
#include "dynsamp/tensor3.hpp"

namespace dynsamp {

// Psi: the masked observations P_Omega(F_t) (+ noise on Omega) for
// t = 0 .. T-1 under one fixed mask.
class SampleData {
public:
    SampleData(SampleMask mask, std::vector<Tensor3> observations,
               double noise_sigma = 0.0, std::uint64_t seed = 0);

    const SampleMask& mask() const noexcept { return mask_; }
    std::size_t horizon() const noexcept { return observations_.size(); }
    const std::vector<Tensor3>& observations() const noexcept { return observations_; }
    const Tensor3& observation(std::size_t t) const { return observations_.at(t); }
    double noise_sigma() const noexcept { return sigma_; }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    SampleMask mask_;
    std::vector<Tensor3> observations_;
    double sigma_ = 0.0;
    std::uint64_t seed_ = 0;
};

// F_t = A^t * F for t = 0 .. T-1, stepped in the frequency domain.
std::vector<Tensor3> evolve(const Tensor3& a, const Tensor3& f, std::size_t horizon);

// obs_t = P_Omega(F_t + eps_t), eps_t i.i.d. N(0, sigma^2) real, one stream
// per time step derived from (seed, t).
SampleData observe(const std::vector<Tensor3>& trajectory, const SampleMask& mask,
                   double sigma, std::uint64_t seed);

} // namespace dynsamp
