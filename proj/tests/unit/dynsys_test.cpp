#include <gtest/gtest.h>

#include <algorithm>

#include "dynsamp/dynsys.hpp"
#include "dynsamp/error.hpp"
#include "oracles.hpp"

namespace dynsamp {
namespace {

using testing::max_rel_diff;
using testing::oracle_evolve;

TEST(Evolve, IdentityOperatorIsStationary)
{
    const Tensor3 f = random_tensor({4, 3, 5}, 1);
    for (const auto& ft : evolve(identity_tensor(4, 5), f, 6))
        EXPECT_LE(max_abs_diff(ft, f), 1e-12);
}

TEST(Evolve, HorizonOneIsTheSignal)
{
    const Tensor3 f = random_tensor({4, 3, 5}, 2);
    const auto traj = evolve(random_tensor({4, 4, 5}, 3), f, 1);
    ASSERT_EQ(traj.size(), 1u);
    EXPECT_EQ(traj[0], f);
}

TEST(Evolve, MatchesBruteForceEvolution)
{
    const Tensor3 a = random_tensor({4, 4, 2}, 4);
    const Tensor3 f = random_tensor({4, 3, 2}, 5);
    const auto fast = evolve(a, f, 4);
    const auto slow = oracle_evolve(a, f, 4);
    ASSERT_EQ(fast.size(), 4u);
    EXPECT_EQ(fast[0], f);
    for (std::size_t t = 0; t < 4; ++t) {
        EXPECT_LE(max_rel_diff(fast[t], slow[t]), 1e-9) << "t=" << t;
        EXPECT_LE(max_rel_diff(fast[t], tprod(tpow(a, static_cast<unsigned>(t)), f)), 1e-9);
        EXPECT_TRUE(fast[t].is_real());
    }
}

TEST(Evolve, SemigroupProperty)
{
    const Tensor3 a = random_tensor({5, 5, 3}, 6);
    const Tensor3 f = random_tensor({5, 2, 3}, 7);
    const auto traj = evolve(a, f, 6);
    const auto longer = evolve(a, f, 7);
    for (std::size_t t = 0; t < 6; ++t)
        EXPECT_EQ(traj[t], longer[t]);
    EXPECT_LE(max_rel_diff(longer[6], tprod(a, traj[5])), 1e-9);
}

TEST(Evolve, LinearInSignal)
{
    const Tensor3 a = random_tensor({3, 3, 4}, 8);
    const Tensor3 f = random_tensor({3, 2, 4}, 9), g = random_tensor({3, 2, 4}, 10);
    const auto sum = evolve(a, add(f, g), 5);
    const auto ef = evolve(a, f, 5), eg = evolve(a, g, 5);
    for (std::size_t t = 0; t < 5; ++t)
        EXPECT_LE(max_rel_diff(sum[t], add(ef[t], eg[t])), 1e-9);
}

TEST(Evolve, Errors)
{
    EXPECT_THROW(evolve(zeros({3, 3, 4}), zeros({2, 2, 4}), 2), DimensionError);
    EXPECT_THROW(evolve(zeros({3, 3, 4}), zeros({3, 2, 5}), 2), DimensionError);
    EXPECT_THROW(evolve(zeros({3, 3, 4}), zeros({3, 2, 4}), 0), DomainError);
}

TEST(Observe, NoiselessFullMask)
{
    const Shape s{4, 3, 2};
    const auto traj = evolve(random_tensor({4, 4, 2}, 1), random_tensor(s, 2), 3);
    const SampleData d = observe(traj, full_mask(s), 0.0, 0);
    ASSERT_EQ(d.horizon(), 3u);
    for (std::size_t t = 0; t < 3; ++t)
        EXPECT_EQ(d.observation(t), traj[t]);
}

TEST(Observe, EmptyMaskGivesZeros)
{
    const Shape s{4, 3, 2};
    const auto traj = evolve(random_tensor({4, 4, 2}, 1), random_tensor(s, 2), 3);
    const SampleData d = observe(traj, bernoulli_mask(s, 0.0, 1), 0.1, 5);
    for (const auto& obs : d.observations())
        EXPECT_EQ(fro_norm(obs), 0.0);
}

TEST(Observe, NoiseVarianceAndSupport)
{
    const Shape s{20, 15, 5};
    const double sigma = 1e-3;
    const SampleMask mask = bernoulli_mask(s, 0.4, 3);
    const auto traj = evolve(random_tensor({20, 20, 5}, 1), random_tensor(s, 2), 3);
    const SampleData d = observe(traj, mask, sigma, 77);

    const double var = std::pow(fro_norm(subtract(d.observation(0), project(mask, traj[0]))), 2) /
                       static_cast<double>(mask.sample_count());
    EXPECT_GE(var, 0.5 * sigma * sigma);
    EXPECT_LE(var, 2.0 * sigma * sigma);

    for (const auto& obs : d.observations())
        EXPECT_EQ(project(mask, obs), obs);

    // per-step streams differ, reruns agree
    const std::size_t on = static_cast<std::size_t>(
        std::ranges::find(mask.indicator(), std::uint8_t{1}) - mask.indicator().begin());
    EXPECT_NE(subtract(d.observation(1), project(mask, traj[1])).data()[on],
              subtract(d.observation(0), project(mask, traj[0])).data()[on]);
    const SampleData again = observe(traj, mask, sigma, 77);
    for (std::size_t t = 0; t < 3; ++t)
        EXPECT_EQ(again.observation(t), d.observation(t));
}

TEST(Observe, Errors)
{
    const Shape s{2, 2, 2};
    const auto traj = evolve(identity_tensor(2, 2), random_tensor(s, 1), 2);
    EXPECT_THROW(observe(traj, full_mask(s), -1.0, 0), DomainError);
}

TEST(SampleData, RejectsOffSupportData)
{
    const Shape s{2, 2, 2};
    const SampleMask mask = lattice_mask(s, {0}, {0});
    EXPECT_THROW(SampleData(mask, {ones(s)}), DomainError);
    EXPECT_THROW(SampleData(mask, {}), DomainError);
    EXPECT_THROW(SampleData(mask, {zeros({2, 2, 3})}), DimensionError);
}

} // namespace
} // namespace dynsamp
