#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dynsamp/tensor3.hpp"

namespace dynsamp::cli {

enum class ExperimentKind {
    recovery_vs_alpha,
    pointwise_gap,
    optimal_t,
    condition_vs_t,
    conjecture_dim2,
    slab_dim1_dim3,
};

std::string to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_kind(const std::string& name);

// Invalid configuration; `field` names the offending key.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : "config field '" + field + "': " + what),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

std::vector<double> default_alpha_grid();
std::vector<double> default_sigmas();

struct ExperimentConfig {
    std::optional<ExperimentKind> kind;
    Shape dims{20, 15, 5};
    std::size_t horizon = 5;
    std::size_t horizon_min = 1;
    std::size_t horizon_max = 15;
    std::optional<double> alpha;       // per-kind default when unset
    std::vector<double> alpha_grid = default_alpha_grid(); // recovery-vs-alpha
    double sigma = 0.0;
    std::vector<double> sigmas = default_sigmas();          // optimal-T
    std::size_t trials = 10;
    std::uint64_t seed = 1;
    std::string out = "out";
    std::optional<double> tol;
    std::vector<std::size_t> lattice_rows; // 1-based, simulate only
    std::vector<std::size_t> lattice_cols; // 1-based, simulate only

    double effective_alpha() const;
    // Throws ConfigError.
    void validate() const;
    nlohmann::json to_json() const;
};

// Parses a config document. Unknown keys and wrongly typed values are
// ConfigErrors; range checks are left to validate() so flag overrides can
// be applied first. `source` prefixes diagnostics (usually the file name).
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

} // namespace dynsamp::cli
