#include "dynsamp/reconstruct.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "dynsamp/error.hpp"
#include "dynsamp/parallel.hpp"

namespace dynsamp {

namespace {

using Eigen::Index;

// Everything the column systems share: powers of the transformed operator
// per slice, the transformed mask and the transformed observations.
struct FrequencyContext {
    Shape shape;
    std::size_t horizon = 0;
    std::vector<std::vector<Eigen::MatrixXcd>> operator_powers; // [t][k]
    Tensor3 mask_hat;
    std::vector<Tensor3> observations_hat; // empty when only conditioning is needed
};

void check_operator(const Tensor3& a, const Shape& signal)
{
    if (a.rows() != a.cols() || a.rows() != signal.m || a.depth() != signal.n)
        throw DimensionError("operator shape " + to_string(a.shape()) +
                             " incompatible with signal shape " + to_string(signal));
}

FrequencyContext make_context(const Tensor3& a, const SampleMask& mask, std::size_t horizon,
                              const SampleData* samples)
{
    if (horizon == 0)
        throw DomainError("horizon must be at least 1");
    check_operator(a, mask.shape());

    FrequencyContext ctx;
    ctx.shape = mask.shape();
    ctx.horizon = horizon;

    const Tensor3 ah = dft3(a);
    const std::size_t n = ctx.shape.n;
    ctx.operator_powers.resize(horizon);
    for (std::size_t k = 0; k < n; ++k) {
        Eigen::MatrixXcd power =
            Eigen::MatrixXcd::Identity(static_cast<Index>(ctx.shape.m), static_cast<Index>(ctx.shape.m));
        for (std::size_t t = 0; t < horizon; ++t) {
            ctx.operator_powers[t].push_back(power);
            if (t + 1 < horizon)
                power = ah.slice(k) * power;
        }
    }

    ctx.mask_hat = dft3(mask.as_tensor());

    if (samples != nullptr) {
        if (samples->mask().shape() != mask.shape() ||
            !std::ranges::equal(samples->mask().indicator(), mask.indicator()))
            throw DimensionError("sample data was taken with a different mask");
        ctx.observations_hat.reserve(horizon);
        for (const auto& obs : samples->observations())
            ctx.observations_hat.push_back(dft3(obs));
    }
    return ctx;
}

void check_column(const Shape& shape, std::size_t j)
{
    if (j >= shape.p)
        throw DimensionError("column " + std::to_string(j) + " out of range for " +
                             to_string(shape));
}

// Row block t of M_j is (1/n) A3(j) A1(t). A3(j) has diagonal m x m blocks,
// so grid block (a, b) reduces to (1/n) diag_i(Phat(i, j, a - b mod n)) * Ahat_b^t.
Eigen::MatrixXcd column_matrix(const FrequencyContext& ctx, std::size_t j)
{
    const auto m = static_cast<Index>(ctx.shape.m);
    const auto n = static_cast<Index>(ctx.shape.n);
    const Index mn = m * n;
    const double inv_n = 1.0 / static_cast<double>(n);

    Eigen::MatrixXcd mat = Eigen::MatrixXcd::Zero(mn * static_cast<Index>(ctx.horizon), mn);
    Eigen::VectorXcd weights(m);
    for (std::size_t t = 0; t < ctx.horizon; ++t) {
        const Index row0 = static_cast<Index>(t) * mn;
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b) {
                const auto lag = static_cast<std::size_t>((a - b + n) % n);
                for (Index i = 0; i < m; ++i)
                    weights[i] = ctx.mask_hat(static_cast<std::size_t>(i), j, lag) * inv_n;
                mat.block(row0 + a * m, b * m, m, m) =
                    weights.asDiagonal() * ctx.operator_powers[t][static_cast<std::size_t>(b)];
            }
    }
    return mat;
}

Eigen::VectorXcd column_rhs(const FrequencyContext& ctx, std::size_t j)
{
    const std::size_t m = ctx.shape.m, n = ctx.shape.n;
    Eigen::VectorXcd rhs(static_cast<Index>(ctx.horizon * m * n));
    Index idx = 0;
    for (std::size_t t = 0; t < ctx.horizon; ++t)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < m; ++i)
                rhs[idx++] = ctx.observations_hat[t](i, j, k);
    return rhs;
}

bool is_zero(const Eigen::MatrixXcd& mat)
{
    return mat.size() == 0 || mat.cwiseAbs().maxCoeff() == 0.0;
}

double condition_from_singular_values(const Eigen::VectorXd& s, double rel_tol, std::size_t& rank)
{
    const double cutoff = rel_tol * s[0];
    rank = 0;
    while (rank < static_cast<std::size_t>(s.size()) && s[static_cast<Index>(rank)] > cutoff)
        ++rank;
    return s[0] / s[static_cast<Index>(rank) - 1];
}

} // namespace

Eigen::MatrixXcd mask_convolution_matrix(const SampleMask& mask, std::size_t j)
{
    check_column(mask.shape(), j);
    const auto m = static_cast<Index>(mask.shape().m);
    const auto n = static_cast<Index>(mask.shape().n);
    const Tensor3 mask_hat = dft3(mask.as_tensor());

    Eigen::MatrixXcd a3 = Eigen::MatrixXcd::Zero(m * n, m * n);
    for (Index i = 0; i < m; ++i) {
        const Eigen::MatrixXcd c = circ(mask_hat.tube(static_cast<std::size_t>(i), j));
        for (Index a = 0; a < n; ++a)
            for (Index b = 0; b < n; ++b)
                a3(a * m + i, b * m + i) = c(a, b);
    }
    return a3;
}

Eigen::MatrixXcd operator_power_matrix(const Tensor3& a, unsigned t)
{
    if (a.rows() != a.cols())
        throw DimensionError("operator must be square in its first two modes, got " +
                             to_string(a.shape()));
    const auto m = static_cast<Index>(a.rows());
    const auto n = static_cast<Index>(a.depth());
    const Tensor3 ah = dft3(a);
    Eigen::MatrixXcd a1 = Eigen::MatrixXcd::Zero(m * n, m * n);
    for (Index k = 0; k < n; ++k) {
        Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(m, m);
        for (unsigned e = 0; e < t; ++e)
            power = ah.slice(static_cast<std::size_t>(k)) * power;
        a1.block(k * m, k * m, m, m) = power;
    }
    return a1;
}

ColumnSystem assemble_column_system(const Tensor3& a, const SampleMask& mask,
                                    const SampleData& samples, std::size_t j)
{
    check_column(mask.shape(), j);
    const FrequencyContext ctx = make_context(a, mask, samples.horizon(), &samples);
    return {j, column_matrix(ctx, j), column_rhs(ctx, j)};
}

double default_tolerance(std::size_t rows, std::size_t cols)
{
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon();
}

ColumnSolution solve_column(const ColumnSystem& sys, std::optional<double> tol)
{
    const Eigen::MatrixXcd& mat = sys.matrix;
    if (mat.rows() != sys.rhs.size())
        throw DimensionError("column system: matrix has " + std::to_string(mat.rows()) +
                             " rows but rhs has " + std::to_string(sys.rhs.size()));
    if (is_zero(mat))
        throw UnrecoverableColumn({sys.column});

    const double rel_tol = tol.value_or(default_tolerance(static_cast<std::size_t>(mat.rows()),
                                                          static_cast<std::size_t>(mat.cols())));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();

    ColumnSolution sol;
    sol.kappa = condition_from_singular_values(s, rel_tol, sol.rank);
    const auto r = static_cast<Index>(sol.rank);
    const Eigen::VectorXcd coeffs =
        (svd.matrixU().leftCols(r).adjoint() * sys.rhs).cwiseQuotient(s.head(r).cast<cplx>());
    sol.x = svd.matrixV().leftCols(r) * coeffs;
    sol.residual = (mat * sol.x - sys.rhs).norm();
    sol.rank_deficient = sol.rank < static_cast<std::size_t>(mat.cols());
    return sol;
}

ReconstructionReport reconstruct(const Tensor3& a, const SampleMask& mask,
                                 const SampleData& samples, const ReconstructOptions& options)
{
    const auto start = std::chrono::steady_clock::now();
    const FrequencyContext ctx = make_context(a, mask, samples.horizon(), &samples);
    const Shape shape = mask.shape();
    const std::size_t m = shape.m, p = shape.p, n = shape.n;

    struct Slot {
        std::optional<ColumnSolution> solution;
        bool failed = false;
    };
    std::vector<Slot> slots(p);
    parallel_for(p, resolve_threads(options.threads), [&](std::size_t j) {
        ColumnSystem sys{j, column_matrix(ctx, j), column_rhs(ctx, j)};
        try {
            slots[j].solution = solve_column(sys, options.tol);
        } catch (const UnrecoverableColumn&) {
            slots[j].failed = true;
        }
    });

    ReconstructionReport report;
    for (std::size_t j = 0; j < p; ++j)
        if (slots[j].failed)
            report.failed_columns.push_back(j);
    if (!report.failed_columns.empty() && !options.allow_partial)
        throw UnrecoverableColumn(report.failed_columns);

    std::vector<cplx> xhat(shape.size(), cplx(0.0));
    report.residuals.assign(p, std::numeric_limits<double>::quiet_NaN());
    report.kappa.assign(p, std::nullopt);
    report.ranks.assign(p, 0);
    report.K = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        if (!slots[j].solution)
            continue;
        const ColumnSolution& sol = *slots[j].solution;
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < m; ++i)
                xhat[i + m * (j + p * k)] = sol.x[static_cast<Index>(k * m + i)];
        report.residuals[j] = sol.residual;
        report.kappa[j] = sol.kappa;
        report.ranks[j] = sol.rank;
        report.K = std::max(report.K, sol.kappa);
        if (sol.rank_deficient)
            report.rank_deficient_columns.push_back(j);
    }
    if (report.failed_columns.size() == p)
        report.K = std::numeric_limits<double>::quiet_NaN();

    Tensor3 estimate = idft3(Tensor3(shape, std::move(xhat), Realness::complex));
    const bool real_inputs =
        a.is_real() && std::ranges::all_of(samples.observations(),
                                           [](const Tensor3& t) { return t.is_real(); });
    if (!real_inputs) {
        report.estimate = std::move(estimate);
    } else if (options.strict_realness) {
        report.estimate = purge_imag(estimate);
    } else {
        try {
            report.estimate = purge_imag(estimate);
        } catch (const RealnessError&) {
            report.realness_violation = true;
            report.estimate = std::move(estimate);
        }
    }

    if (options.ground_truth != nullptr)
        report.rel_error = rel_error(report.estimate, *options.ground_truth);

    report.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ConditionReport system_condition(const Tensor3& a, const SampleMask& mask, std::size_t horizon,
                                 const ReconstructOptions& options)
{
    const FrequencyContext ctx = make_context(a, mask, horizon, nullptr);
    const std::size_t p = mask.shape().p;

    ConditionReport report;
    report.kappa.assign(p, std::nullopt);
    report.kappa_effective.assign(p, std::nullopt);
    report.ranks.assign(p, 0);
    parallel_for(p, resolve_threads(options.threads), [&](std::size_t j) {
        const Eigen::MatrixXcd mat = column_matrix(ctx, j);
        if (is_zero(mat))
            return;
        const double rel_tol = options.tol.value_or(default_tolerance(
            static_cast<std::size_t>(mat.rows()), static_cast<std::size_t>(mat.cols())));
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(mat);
        const Eigen::VectorXd& s = svd.singularValues();
        const double smin = s[s.size() - 1];
        report.kappa[j] = smin > 0.0 ? s[0] / smin : std::numeric_limits<double>::infinity();
        report.kappa_effective[j] = condition_from_singular_values(s, rel_tol, report.ranks[j]);
    });

    report.K = 0.0;
    report.K_effective = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        if (!report.kappa[j]) {
            report.failed_columns.push_back(j);
            continue;
        }
        report.K = std::max(report.K, *report.kappa[j]);
        report.K_effective = std::max(report.K_effective, *report.kappa_effective[j]);
    }
    if (!report.failed_columns.empty() && !options.allow_partial)
        throw UnrecoverableColumn(report.failed_columns);
    if (report.failed_columns.size() == p)
        report.K = report.K_effective = std::numeric_limits<double>::quiet_NaN();
    return report;
}

} // namespace dynsamp
