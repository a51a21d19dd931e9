#pragma once
//
// Reproducible experiment drivers. Every random quantity is drawn from a
// stream derived from the base seed and the (trial, grid point) it belongs
// to, so any CSV row can be recomputed on its own and results do not depend
// on scheduling.
//

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "dynsamp/dynsys.hpp"
#include "dynsamp/sampling.hpp"
#include "dynsamp/tensor3.hpp"

namespace dynsamp::cli {

// Stream ids mixed into the base seed.
enum class Stream : std::uint64_t { op = 1, signal = 2, mask = 3, noise = 4 };

std::uint64_t stream_seed(std::uint64_t base, Stream s, std::size_t trial, std::size_t point = 0);

struct Instance {
    Tensor3 op;     // m x m x n
    Tensor3 signal; // m x p x n
};

// Random operator and signal for a trial.
Instance make_instance(const ExperimentConfig& cfg, std::size_t trial);

// Mask used by `simulate`: lattice if configured, else Bernoulli.
SampleMask make_mask(const ExperimentConfig& cfg, std::size_t trial, std::size_t point = 0);

struct ExperimentResult {
    std::string csv;
    std::string svg;
    nlohmann::json manifest;
};

// Parallelism: `threads` jobs over (grid point, trial) pairs; each
// reconstruction inside runs single-threaded.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads);

// Column layout of each kind's CSV.
std::vector<std::string> csv_columns(ExperimentKind kind);

} // namespace dynsamp::cli
