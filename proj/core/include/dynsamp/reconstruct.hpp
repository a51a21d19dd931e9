#pragma once
//
// Frequency-domain reconstruction of the initial signal.
//
// After a DFT along mode 3 the least-squares problem splits into p
// independent column problems. For column j the unknown is
//     x(j) = [Xhat(:, j, 1); ...; Xhat(:, j, n)]            (length m n)
// and each time step contributes the block row (1/n) A3(j) A1(t), where
//     A1(t) = blkdiag(Ahat(:, :, k)^t)
//     A3(j) = n x n grid of m x m diagonal blocks,
//             block (a, b) = diag_i circ(Phat(i, j, :))[a, b]
// with Phat the DFT of the 0/1 mask. A3(j) acts on x as row-wise circular
// convolution with the mask tubes of column j, so an unsampled column gives
// A3(j) = 0 exactly.
//

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dynsamp/dynsys.hpp"
#include "dynsamp/sampling.hpp"
#include "dynsamp/tensor3.hpp"

namespace dynsamp {

struct ColumnSystem {
    std::size_t column = 0;
    Eigen::MatrixXcd matrix; // (T m n) x (m n)
    Eigen::VectorXcd rhs;    // T m n
};

struct ColumnSolution {
    Eigen::VectorXcd x;
    std::size_t rank = 0;
    double kappa = 1.0;
    double residual = 0.0;
    bool rank_deficient = false;
};

struct ReconstructOptions {
    // Relative singular-value cutoff; unset means max(rows, cols) * eps.
    std::optional<double> tol;
    // Zero-fill unrecoverable columns and flag them instead of throwing.
    bool allow_partial = false;
    // 0: resolve_threads() default.
    std::size_t threads = 0;
    // When set, the report carries rel_error against it.
    const Tensor3* ground_truth = nullptr;
    // With real inputs, an imaginary residue above the realness tolerance
    // throws RealnessError. When false the estimate is kept complex instead
    // and the report flags it; rel_error then counts the imaginary part.
    bool strict_realness = true;
};

struct ReconstructionReport {
    Tensor3 estimate;
    std::vector<double> residuals;              // NaN for failed columns
    std::vector<std::optional<double>> kappa;   // empty for failed columns
    double K = 1.0;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> failed_columns;          // 0-based
    std::vector<std::size_t> rank_deficient_columns;  // 0-based
    std::optional<double> rel_error;
    // Real inputs, but the estimate's imaginary residue exceeded the
    // tolerance (only possible with strict_realness off).
    bool realness_violation = false;
    double wall_ms = 0.0;
};

struct ConditionReport {
    // sigma_max / sigma_min over the full spectrum of M_j (+inf when
    // sigma_min is exactly zero); K is their maximum.
    std::vector<std::optional<double>> kappa;
    double K = 1.0;
    // Same ratio restricted to singular values above the solver cutoff,
    // i.e. what solve_column reports, with the matching numerical ranks.
    std::vector<std::optional<double>> kappa_effective;
    double K_effective = 1.0;
    std::vector<std::size_t> ranks;
    std::vector<std::size_t> failed_columns;
};

// A3(j) for a mask, dense (mn x mn).
Eigen::MatrixXcd mask_convolution_matrix(const SampleMask& mask, std::size_t j);
// A1(t) for an operator, dense block diagonal (mn x mn).
Eigen::MatrixXcd operator_power_matrix(const Tensor3& a, unsigned t);

ColumnSystem assemble_column_system(const Tensor3& a, const SampleMask& mask,
                                    const SampleData& samples, std::size_t j);

// Default relative singular-value cutoff for a rows x cols system.
double default_tolerance(std::size_t rows, std::size_t cols);

// Minimum-norm least squares through a thin SVD. Throws UnrecoverableColumn
// if the matrix is identically zero.
ColumnSolution solve_column(const ColumnSystem& sys, std::optional<double> tol = {});

ReconstructionReport reconstruct(const Tensor3& a, const SampleMask& mask,
                                 const SampleData& samples,
                                 const ReconstructOptions& options = {});

// Conditioning of the stacked column systems for horizon T. Observations
// play no role. Throws UnrecoverableColumn for empty columns unless
// allow_partial.
ConditionReport system_condition(const Tensor3& a, const SampleMask& mask, std::size_t horizon,
                                 const ReconstructOptions& options = {});

} // namespace dynsamp
