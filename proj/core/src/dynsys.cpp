#include "dynsamp/dynsys.hpp"

#include <cmath>

#include "dynsamp/error.hpp"
#include "dynsamp/random.hpp"

namespace dynsamp {

SampleData::SampleData(SampleMask mask, std::vector<Tensor3> observations, double noise_sigma,
                       std::uint64_t seed)
    : mask_(std::move(mask)), observations_(std::move(observations)), sigma_(noise_sigma),
      seed_(seed)
{
    if (observations_.empty())
        throw DomainError("sample data needs at least one time step");
    if (!(noise_sigma >= 0.0))
        throw DomainError("noise sigma must be nonnegative");
    const auto ind = mask_.indicator();
    for (std::size_t t = 0; t < observations_.size(); ++t) {
        const Tensor3& obs = observations_[t];
        if (obs.shape() != mask_.shape())
            throw DimensionError("observation " + std::to_string(t) + " has shape " +
                                 to_string(obs.shape()) + ", mask is " +
                                 to_string(mask_.shape()));
        const auto d = obs.data();
        for (std::size_t idx = 0; idx < d.size(); ++idx)
            if (!ind[idx] && d[idx] != cplx(0.0))
                throw DomainError("observation " + std::to_string(t) +
                                  " is nonzero outside the sampling set");
    }
}

std::vector<Tensor3> evolve(const Tensor3& a, const Tensor3& f, std::size_t horizon)
{
    if (horizon == 0)
        throw DomainError("evolve: horizon must be at least 1");
    if (a.rows() != a.cols() || a.cols() != f.rows() || a.depth() != f.depth())
        throw DimensionError("evolve: operator " + to_string(a.shape()) +
                             " incompatible with signal " + to_string(f.shape()));

    std::vector<Tensor3> traj;
    traj.reserve(horizon);
    traj.push_back(f);
    if (horizon == 1)
        return traj;

    const Tensor3 ah = dft3(a);
    const std::size_t n = f.depth();
    std::vector<Eigen::MatrixXcd> current(n);
    {
        const Tensor3 fh = dft3(f);
        for (std::size_t k = 0; k < n; ++k)
            current[k] = fh.slice(k);
    }
    const bool real = a.is_real() && f.is_real();
    for (std::size_t t = 1; t < horizon; ++t) {
        for (std::size_t k = 0; k < n; ++k)
            current[k] = ah.slice(k) * current[k];
        Tensor3 step = idft3(from_slices(current, Realness::complex));
        traj.push_back(real ? purge_imag(step) : std::move(step));
    }
    return traj;
}

SampleData observe(const std::vector<Tensor3>& trajectory, const SampleMask& mask, double sigma,
                   std::uint64_t seed)
{
    if (!(sigma >= 0.0))
        throw DomainError("observe: sigma must be nonnegative, got " + std::to_string(sigma));
    std::vector<Tensor3> obs;
    obs.reserve(trajectory.size());
    for (std::size_t t = 0; t < trajectory.size(); ++t) {
        const Tensor3& ft = trajectory[t];
        if (sigma == 0.0) {
            obs.push_back(project(mask, ft));
            continue;
        }
        RandomStream rng(derive_seed(seed, {0x6e6f697365ULL, t}));
        std::vector<cplx> noisy(ft.data().begin(), ft.data().end());
        for (auto& v : noisy)
            v += sigma * rng.normal();
        obs.push_back(project(mask, Tensor3(ft.shape(), std::move(noisy), ft.realness())));
    }
    return SampleData(mask, std::move(obs), sigma, seed);
}

} // namespace dynsamp
