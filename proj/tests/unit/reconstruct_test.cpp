#include <gtest/gtest.h>

#include <cstdlib>

#include "dynsamp/error.hpp"
#include "dynsamp/random.hpp"
#include "dynsamp/reconstruct.hpp"
#include "oracles.hpp"

namespace dynsamp {
namespace {

using testing::brute_force_reconstruct;
using testing::max_rel_diff;

struct Problem {
    Tensor3 op;
    Tensor3 signal;
    SampleMask mask;
    SampleData data;
};

Problem make_problem(Shape s, double alpha, std::size_t horizon, std::uint64_t seed, double sigma = 0.0)
{
    Tensor3 op = random_tensor({s.m, s.m, s.n}, seed);
    Tensor3 signal = random_tensor(s, seed + 1000);
    SampleMask mask = bernoulli_mask(s, alpha, seed + 2000);
    SampleData data = observe(evolve(op, signal, horizon), mask, sigma, seed + 3000);
    return {std::move(op), std::move(signal), std::move(mask), std::move(data)};
}

// vec of Fhat(:, j, :) with index i + m k.
Eigen::VectorXcd column_spectrum(const Tensor3& f, std::size_t j)
{
    const Tensor3 fh = dft3(f);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(f.rows() * f.depth()));
    for (std::size_t k = 0; k < f.depth(); ++k)
        for (std::size_t i = 0; i < f.rows(); ++i)
            v[static_cast<Eigen::Index>(k * f.rows() + i)] = fh(i, j, k);
    return v;
}

TEST(ColumnSystem, FullMaskIdentityOperatorIsIdentity)
{
    const Shape s{3, 2, 4};
    const SampleMask mask = full_mask(s);
    const Tensor3 a = identity_tensor(3, 4);
    const SampleData data = observe(evolve(a, random_tensor(s, 1), 1), mask, 0.0, 0);
    for (std::size_t j = 0; j < 2; ++j) {
        const ColumnSystem sys = assemble_column_system(a, mask, data, j);
        EXPECT_TRUE(sys.matrix.isApprox(Eigen::MatrixXcd::Identity(12, 12), 1e-14));
    }
}

TEST(ColumnSystem, UnsampledColumnIsExactlyZero)
{
    const Shape s{4, 3, 2};
    const SampleMask mask = lattice_mask(s, {0, 1, 2, 3}, {0, 2});
    const Problem pr{random_tensor({4, 4, 2}, 1), random_tensor(s, 2), mask,
                     observe(evolve(random_tensor({4, 4, 2}, 1), random_tensor(s, 2), 2), mask, 0.0, 0)};
    const ColumnSystem sys = assemble_column_system(pr.op, mask, pr.data, 1);
    EXPECT_EQ(sys.matrix.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(mask_convolution_matrix(mask, 1).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_GT(mask_convolution_matrix(mask, 0).cwiseAbs().maxCoeff(), 0.0);
}

TEST(ColumnSystem, MatchesDenseProductDefinition)
{
    const Problem pr = make_problem({4, 3, 3}, 0.5, 3, 5);
    const std::size_t mn = 12;
    for (std::size_t j = 0; j < 3; ++j) {
        const ColumnSystem sys = assemble_column_system(pr.op, pr.mask, pr.data, j);
        ASSERT_EQ(static_cast<std::size_t>(sys.matrix.rows()), 3 * mn);
        const Eigen::MatrixXcd a3 = mask_convolution_matrix(pr.mask, j);
        for (unsigned t = 0; t < 3; ++t) {
            const Eigen::MatrixXcd block = a3 * operator_power_matrix(pr.op, t) / 3.0;
            EXPECT_TRUE(sys.matrix.middleRows(t * mn, mn).isApprox(block, 1e-12)) << "t=" << t;
        }
    }
}

TEST(ColumnSystem, ConvolutionMatrixActsRowWise)
{
    // A3(j) y == row-wise circular convolution of mask tubes with rows of Y.
    const Shape s{3, 2, 5};
    const SampleMask mask = bernoulli_mask(s, 0.5, 8);
    const Tensor3 ph = dft3(mask.as_tensor());
    const Tensor3 y = testing::random_complex({3, 1, 5}, 9);
    Eigen::VectorXcd vy(15);
    for (std::size_t k = 0; k < 5; ++k)
        for (std::size_t i = 0; i < 3; ++i)
            vy[static_cast<Eigen::Index>(k * 3 + i)] = y(i, 0, k);
    for (std::size_t j = 0; j < 2; ++j) {
        const Eigen::VectorXcd got = mask_convolution_matrix(mask, j) * vy;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t k = 0; k < 5; ++k) {
                cplx acc = 0.0;
                for (std::size_t l = 0; l < 5; ++l)
                    acc += ph(i, j, l) * y(i, 0, (k + 5 - l) % 5);
                EXPECT_NEAR(std::abs(got[static_cast<Eigen::Index>(k * 3 + i)] - acc), 0.0, 1e-12);
            }
    }
}

TEST(ColumnSystem, ForwardConsistency)
{
    // ground truth solves every column system (spatial-domain oracle: the
    // rhs is built from P_Omega(A^t * F) then dft3)
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const Problem pr = make_problem({4, 3, 2}, 0.6, 2, seed);
        for (std::size_t j = 0; j < 3; ++j) {
            const ColumnSystem sys = assemble_column_system(pr.op, pr.mask, pr.data, j);
            const Eigen::VectorXcd lhs = sys.matrix * column_spectrum(pr.signal, j);
            EXPECT_LE((lhs - sys.rhs).norm(), 1e-9 * std::max(1.0, sys.rhs.norm()));
        }
    }
    const Problem big = make_problem({20, 15, 5}, 0.4, 5, 9);
    for (std::size_t j = 0; j < 15; ++j) {
        const ColumnSystem sys = assemble_column_system(big.op, big.mask, big.data, j);
        EXPECT_LE((sys.matrix * column_spectrum(big.signal, j) - sys.rhs).norm(),
                  1e-9 * sys.rhs.norm());
    }
}

TEST(ColumnSystem, Errors)
{
    const Problem pr = make_problem({4, 3, 2}, 0.6, 2, 1);
    EXPECT_THROW(assemble_column_system(pr.op, pr.mask, pr.data, 3), DimensionError);
    EXPECT_THROW(assemble_column_system(random_tensor({3, 3, 2}, 1), pr.mask, pr.data, 0),
                 DimensionError);
    EXPECT_THROW(assemble_column_system(pr.op, bernoulli_mask({4, 3, 2}, 0.6, 99), pr.data, 0),
                 DimensionError);
}

TEST(SolveColumn, IdentitySystem)
{
    ColumnSystem sys{0, Eigen::MatrixXcd::Identity(6, 6), Eigen::VectorXcd::Random(6)};
    const ColumnSolution sol = solve_column(sys);
    EXPECT_LE((sol.x - sys.rhs).norm(), 1e-14);
    EXPECT_DOUBLE_EQ(sol.kappa, 1.0);
    EXPECT_EQ(sol.rank, 6u);
    EXPECT_LE(sol.residual, 1e-14);
    EXPECT_FALSE(sol.rank_deficient);
}

TEST(SolveColumn, ZeroSystemIsUnrecoverable)
{
    ColumnSystem sys{4, Eigen::MatrixXcd::Zero(8, 4), Eigen::VectorXcd::Zero(8)};
    try {
        (void)solve_column(sys);
        FAIL();
    } catch (const UnrecoverableColumn& e) {
        EXPECT_EQ(e.columns(), std::vector<std::size_t>{4});
    }
}

TEST(SolveColumn, MinimumNormOnRankDeficiency)
{
    // x1 + x2 = 2 has minimum-norm solution (1, 1).
    ColumnSystem sys{0, Eigen::MatrixXcd::Ones(1, 2), Eigen::VectorXcd::Constant(1, 2.0)};
    const ColumnSolution sol = solve_column(sys);
    EXPECT_EQ(sol.rank, 1u);
    EXPECT_TRUE(sol.rank_deficient);
    EXPECT_NEAR(std::abs(sol.x[0] - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(sol.x[1] - 1.0), 0.0, 1e-14);
}

TEST(SolveColumn, KappaAndToleranceOverride)
{
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(3, 3);
    d(0, 0) = 1.0;
    d(1, 1) = 1e-3;
    d(2, 2) = 1e-12;
    ColumnSystem sys{0, d, Eigen::VectorXcd::Ones(3)};
    EXPECT_NEAR(solve_column(sys).kappa, 1e12, 1e3);
    const ColumnSolution cut = solve_column(sys, 1e-6);
    EXPECT_EQ(cut.rank, 2u);
    EXPECT_NEAR(cut.kappa, 1e3, 1e-9);
}

TEST(SolveColumn, FullMaskIdentityRecoversSpectrum)
{
    const Shape s{3, 2, 4};
    const Tensor3 f = random_tensor(s, 4);
    const SampleMask mask = full_mask(s);
    const Tensor3 a = identity_tensor(3, 4);
    const SampleData data = observe(evolve(a, f, 1), mask, 0.0, 0);
    for (std::size_t j = 0; j < 2; ++j) {
        const ColumnSolution sol = solve_column(assemble_column_system(a, mask, data, j));
        EXPECT_LE((sol.x - column_spectrum(f, j)).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(SolveColumn, MatchesMaterialisedPseudoinverse)
{
    const Problem pr = make_problem({4, 3, 2}, 0.6, 4, 11);
    const auto brute = brute_force_reconstruct(pr.op, pr.data);
    ASSERT_TRUE(brute.full_column_rank);
    for (std::size_t j = 0; j < 3; ++j) {
        const ColumnSolution sol = solve_column(assemble_column_system(pr.op, pr.mask, pr.data, j));
        const Eigen::VectorXcd expect = column_spectrum(brute.estimate, j);
        EXPECT_LE((sol.x - expect).norm(), 1e-8 * expect.norm());
    }
}

TEST(Reconstruct, FullMaskSingleStep)
{
    for (std::uint64_t seed : {1u, 2u}) {
        const Problem pr = make_problem({5, 4, 3}, 1.0, 1, seed);
        ReconstructOptions opt;
        opt.ground_truth = &pr.signal;
        const auto rep = reconstruct(pr.op, pr.mask, pr.data, opt);
        EXPECT_LE(max_abs_diff(rep.estimate, pr.signal), 1e-10);
        EXPECT_LE(*rep.rel_error, 1e-10);
        EXPECT_TRUE(rep.estimate.is_real());
    }
}

TEST(Reconstruct, DefaultRegimeExactRecovery)
{
    const Problem pr = make_problem({20, 15, 5}, 0.4, 5, 1);
    ReconstructOptions opt;
    opt.ground_truth = &pr.signal;
    const auto rep = reconstruct(pr.op, pr.mask, pr.data, opt);
    EXPECT_LE(*rep.rel_error, 1e-9);
    EXPECT_TRUE(rep.failed_columns.empty());
    EXPECT_TRUE(rep.rank_deficient_columns.empty());
    double kmax = 0.0;
    for (std::size_t j = 0; j < 15; ++j) {
        ASSERT_TRUE(rep.kappa[j]);
        EXPECT_GE(*rep.kappa[j], 1.0);
        EXPECT_EQ(rep.ranks[j], 100u);
        kmax = std::max(kmax, *rep.kappa[j]);
    }
    EXPECT_EQ(rep.K, kmax);
}

TEST(Reconstruct, LatticeMissingColumnsAreUnrecoverable)
{
    const Shape s{6, 5, 3};
    const SampleMask mask = lattice_mask(s, {0, 2, 3, 5}, {0, 2, 4});
    const Tensor3 a = random_tensor({6, 6, 3}, 1);
    const Tensor3 f = random_tensor(s, 2);
    const SampleData data = observe(evolve(a, f, 4), mask, 0.0, 0);
    try {
        (void)reconstruct(a, mask, data);
        FAIL() << "expected UnrecoverableColumn";
    } catch (const UnrecoverableColumn& e) {
        EXPECT_EQ(e.columns(), (std::vector<std::size_t>{1, 3}));
    }

    ReconstructOptions opt;
    opt.allow_partial = true;
    const auto rep = reconstruct(a, mask, data, opt);
    EXPECT_EQ(rep.failed_columns, (std::vector<std::size_t>{1, 3}));
    EXPECT_FALSE(rep.kappa[1]);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_EQ(rep.estimate(i, 1, k), cplx(0.0));
            EXPECT_EQ(rep.estimate(i, 3, k), cplx(0.0));
        }
}

TEST(Reconstruct, EmptyColumnPropertyOnRandomMasks)
{
    // mask column empty <=> A3(j) == 0 <=> column reported as failed
    RandomStream rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const Shape s{3, 4, 2};
        const SampleMask mask = bernoulli_mask(s, 0.1 + 0.2 * rng.uniform(), 100 + trial);
        const Tensor3 a = random_tensor({3, 3, 2}, trial);
        const SampleData data = observe(evolve(a, random_tensor(s, trial + 50), 3), mask, 0.0, 0);
        ReconstructOptions opt;
        opt.allow_partial = true;
        const auto rep = reconstruct(a, mask, data, opt);
        for (std::size_t j = 0; j < 4; ++j) {
            const bool empty = mask.column_empty(j);
            EXPECT_EQ(empty, mask_convolution_matrix(mask, j).cwiseAbs().maxCoeff() == 0.0);
            EXPECT_EQ(empty, std::ranges::find(rep.failed_columns, j) != rep.failed_columns.end());
        }
    }
}

TEST(Reconstruct, ColumnsAreIndependent)
{
    const Problem pr = make_problem({6, 4, 3}, 0.5, 3, 21);
    const auto base = reconstruct(pr.op, pr.mask, pr.data);
    const Tensor3 base_hat = dft3(base.estimate);

    // perturb observation columns other than j = 2 (on the mask only)
    std::vector<Tensor3> obs;
    for (std::size_t t = 0; t < pr.data.horizon(); ++t) {
        const Tensor3& o = pr.data.observation(t);
        obs.push_back(Tensor3::generate(o.shape(), Realness::real,
                                        [&](std::size_t i, std::size_t j, std::size_t k) {
                                            const bool on = pr.mask.contains(i, j, k);
                                            return j == 2 || !on ? o(i, j, k) : o(i, j, k) + 0.37;
                                        }));
    }
    const SampleData perturbed(pr.mask, std::move(obs));
    for (std::size_t j = 0; j < 4; ++j) {
        const ColumnSolution a = solve_column(assemble_column_system(pr.op, pr.mask, pr.data, j));
        const ColumnSolution b = solve_column(assemble_column_system(pr.op, pr.mask, perturbed, j));
        if (j == 2)
            EXPECT_TRUE(a.x == b.x);
        else
            EXPECT_FALSE(a.x == b.x);
    }
    (void)base_hat;
}

TEST(Reconstruct, DeterministicAcrossThreadCounts)
{
    const Problem pr = make_problem({8, 6, 4}, 0.5, 3, 31);
    ReconstructOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = reconstruct(pr.op, pr.mask, pr.data, one);
    const auto b = reconstruct(pr.op, pr.mask, pr.data, many);
    EXPECT_EQ(a.estimate, b.estimate);
    EXPECT_EQ(a.ranks, b.ranks);
    EXPECT_EQ(a.kappa, b.kappa);
    for (std::size_t j = 0; j < a.residuals.size(); ++j)
        EXPECT_EQ(a.residuals[j], b.residuals[j]);
}

TEST(Reconstruct, MatchesBruteForceOnSmallInstances)
{
    int checked = 0;
    for (std::uint64_t seed = 0; checked < 8 && seed < 40; ++seed) {
        const Problem pr = make_problem({4, 3, 3}, 0.5, 4, 500 + seed);
        const auto brute = brute_force_reconstruct(pr.op, pr.data);
        if (!brute.full_column_rank)
            continue;
        ReconstructOptions opt;
        opt.ground_truth = &pr.signal;
        const auto rep = reconstruct(pr.op, pr.mask, pr.data, opt);
        EXPECT_LE(rel_error(rep.estimate, brute.estimate), 1e-8) << "seed " << seed;
        EXPECT_LE(*rep.rel_error, 1e-8);
        ++checked;
    }
    EXPECT_EQ(checked, 8);
}

TEST(Reconstruct, RealnessGuardOnIllConditionedNoisyData)
{
    // Long horizons amplify noise far past the realness tolerance.
    const Problem pr = make_problem({20, 15, 5}, 0.4, 15, 1, 1e-3);
    EXPECT_THROW(reconstruct(pr.op, pr.mask, pr.data), RealnessError);

    ReconstructOptions opt;
    opt.strict_realness = false;
    opt.ground_truth = &pr.signal;
    const auto rep = reconstruct(pr.op, pr.mask, pr.data, opt);
    EXPECT_TRUE(rep.realness_violation);
    EXPECT_FALSE(rep.estimate.is_real());
    EXPECT_GE(*rep.rel_error, rel_error(Tensor3::generate(pr.signal.shape(), Realness::real,
                                                          [&](std::size_t i, std::size_t j,
                                                              std::size_t k) {
                                                              return cplx(rep.estimate(i, j, k).real());
                                                          }),
                                        pr.signal));

    const Problem ok = make_problem({5, 4, 3}, 0.8, 3, 2);
    opt.ground_truth = &ok.signal;
    const auto clean = reconstruct(ok.op, ok.mask, ok.data, opt);
    EXPECT_FALSE(clean.realness_violation);
    EXPECT_TRUE(clean.estimate.is_real());
}

TEST(SystemCondition, FullMaskIdentityIsPerfectlyConditioned)
{
    const Shape s{3, 2, 4};
    for (std::size_t T : {1u, 3u, 6u}) {
        const ConditionReport rep = system_condition(identity_tensor(3, 4), full_mask(s), T);
        EXPECT_NEAR(rep.K, 1.0, 1e-12);
        EXPECT_NEAR(rep.K_effective, 1.0, 1e-12);
    }
}

TEST(SystemCondition, EmptyColumnIsAnError)
{
    const Shape s{3, 2, 4};
    const SampleMask mask = lattice_mask(s, {0, 1, 2}, {0});
    EXPECT_THROW(system_condition(identity_tensor(3, 4), mask, 2), UnrecoverableColumn);
    ReconstructOptions opt;
    opt.allow_partial = true;
    const ConditionReport rep = system_condition(identity_tensor(3, 4), mask, 2, opt);
    EXPECT_EQ(rep.failed_columns, std::vector<std::size_t>{1});
    EXPECT_TRUE(std::isfinite(rep.K));
}

TEST(SystemCondition, AgreesWithSolverKappa)
{
    const Problem pr = make_problem({20, 15, 5}, 0.4, 5, 1);
    const auto rep = reconstruct(pr.op, pr.mask, pr.data);
    const ConditionReport cond = system_condition(pr.op, pr.mask, 5);
    EXPECT_NEAR(cond.K_effective / rep.K, 1.0, 1e-6);
    EXPECT_NEAR(cond.K / rep.K, 1.0, 1e-6);
}

} // namespace
} // namespace dynsamp
