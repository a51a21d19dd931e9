#include "config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "dynsamp/io.hpp"

namespace dynsamp::cli {

using nlohmann::json;

namespace {

constexpr std::array kKinds = {
    std::pair{ExperimentKind::recovery_vs_alpha, "recovery-vs-alpha"},
    std::pair{ExperimentKind::pointwise_gap, "pointwise-gap"},
    std::pair{ExperimentKind::optimal_t, "optimal-T"},
    std::pair{ExperimentKind::condition_vs_t, "condition-vs-T"},
    std::pair{ExperimentKind::conjecture_dim2, "conjecture-dim2"},
    std::pair{ExperimentKind::slab_dim1_dim3, "slab-dim1-dim3"},
};

std::size_t get_positive(const json& v, const std::string& key)
{
    if (!v.is_number_unsigned() || v.get<std::size_t>() == 0)
        throw ConfigError(key, "expected a positive integer");
    return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& key)
{
    if (!v.is_number())
        throw ConfigError(key, "expected a number");
    return v.get<double>();
}

std::vector<double> get_number_list(const json& v, const std::string& key)
{
    if (!v.is_array())
        throw ConfigError(key, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v)
        out.push_back(get_number(e, key));
    return out;
}

std::vector<std::size_t> get_index_list(const json& v, const std::string& key)
{
    if (!v.is_array())
        throw ConfigError(key, "expected an array of 1-based indices");
    std::vector<std::size_t> out;
    for (const auto& e : v)
        out.push_back(get_positive(e, key));
    return out;
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    for (const auto& [k, name] : kKinds)
        if (k == kind)
            return name;
    return "unknown";
}

std::optional<ExperimentKind> parse_kind(const std::string& name)
{
    for (const auto& [k, label] : kKinds)
        if (name == label)
            return k;
    return std::nullopt;
}

std::vector<double> default_alpha_grid()
{
    std::vector<double> grid;
    for (int step = 1; step <= 20; ++step)
        grid.push_back(step / 20.0);
    return grid;
}

std::vector<double> default_sigmas()
{
    return {0.0, 1e-4, 1e-3, 1e-2};
}

double ExperimentConfig::effective_alpha() const
{
    if (alpha)
        return *alpha;
    if (kind == ExperimentKind::conjecture_dim2)
        return 1.0;
    if (kind == ExperimentKind::slab_dim1_dim3)
        return 0.5;
    return 0.4;
}

void ExperimentConfig::validate() const
{
    if (dims.m == 0 || dims.p == 0 || dims.n == 0)
        throw ConfigError("dims", "m, p and n must be positive");
    if (horizon == 0)
        throw ConfigError("T", "must be at least 1");
    if (horizon_min == 0 || horizon_min > horizon_max)
        throw ConfigError("T_range", "expected 1 <= lo <= hi");
    auto check_alpha = [](double a, const char* key) {
        if (!(a >= 0.0 && a <= 1.0))
            throw ConfigError(key, "sampling rate must lie in [0, 1]");
    };
    check_alpha(effective_alpha(), "alpha");
    if (alpha_grid.empty())
        throw ConfigError("alpha_grid", "grid must be nonempty");
    for (double a : alpha_grid)
        check_alpha(a, "alpha_grid");
    if (!(sigma >= 0.0))
        throw ConfigError("sigma", "must be nonnegative");
    if (sigmas.empty())
        throw ConfigError("sigmas", "list must be nonempty");
    for (double s : sigmas)
        if (!(s >= 0.0))
            throw ConfigError("sigmas", "entries must be nonnegative");
    if (trials == 0)
        throw ConfigError("trials", "must be at least 1");
    if (tol && !(*tol > 0.0 && *tol < 1.0))
        throw ConfigError("tol", "must lie in (0, 1)");
    if (lattice_rows.empty() != lattice_cols.empty())
        throw ConfigError("lattice_rows", "lattice_rows and lattice_cols must be given together");
    for (auto i : lattice_rows)
        if (i == 0 || i > dims.m)
            throw ConfigError("lattice_rows", "index " + std::to_string(i) + " outside [1, m]");
    for (auto j : lattice_cols)
        if (j == 0 || j > dims.p)
            throw ConfigError("lattice_cols", "index " + std::to_string(j) + " outside [1, p]");
    if (out.empty())
        throw ConfigError("out", "output directory must be nonempty");
}

json ExperimentConfig::to_json() const
{
    json j;
    j["kind"] = kind ? json(to_string(*kind)) : json(nullptr);
    j["m"] = dims.m;
    j["p"] = dims.p;
    j["n"] = dims.n;
    j["T"] = horizon;
    j["T_range"] = {horizon_min, horizon_max};
    j["alpha"] = effective_alpha();
    j["alpha_grid"] = alpha_grid;
    j["sigma"] = sigma;
    j["sigmas"] = sigmas;
    j["trials"] = trials;
    j["seed"] = seed;
    j["out"] = out;
    j["tol"] = tol ? json(*tol) : json(nullptr);
    j["lattice_rows"] = lattice_rows;
    j["lattice_cols"] = lattice_cols;
    return j;
}

ExperimentConfig parse_config(const std::string& text, const std::string& source)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("", source + ": " + e.what());
    }
    if (!doc.is_object())
        throw ConfigError("", source + ": top level must be a JSON object");

    ExperimentConfig cfg;

    for (const auto& [key, v] : doc.items()) {
        if (key == "kind") {
            if (!v.is_string() || !parse_kind(v.get<std::string>()))
                throw ConfigError(key, "unknown experiment kind " + v.dump());
            cfg.kind = parse_kind(v.get<std::string>());
        } else if (key == "m") {
            cfg.dims.m = get_positive(v, key);
        } else if (key == "p") {
            cfg.dims.p = get_positive(v, key);
        } else if (key == "n") {
            cfg.dims.n = get_positive(v, key);
        } else if (key == "T") {
            cfg.horizon = get_positive(v, key);
        } else if (key == "T_range") {
            if (!v.is_array() || v.size() != 2)
                throw ConfigError(key, "expected [lo, hi]");
            cfg.horizon_min = get_positive(v[0], key);
            cfg.horizon_max = get_positive(v[1], key);
        } else if (key == "alpha") {
            cfg.alpha = get_number(v, key);
        } else if (key == "alpha_grid") {
            cfg.alpha_grid = get_number_list(v, key);
        } else if (key == "sigma") {
            cfg.sigma = get_number(v, key);
        } else if (key == "sigmas") {
            cfg.sigmas = get_number_list(v, key);
        } else if (key == "trials") {
            cfg.trials = get_positive(v, key);
        } else if (key == "seed") {
            if (!v.is_number_unsigned())
                throw ConfigError(key, "expected a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "out") {
            if (!v.is_string())
                throw ConfigError(key, "expected a string");
            cfg.out = v.get<std::string>();
        } else if (key == "tol") {
            cfg.tol = get_number(v, key);
        } else if (key == "lattice_rows") {
            cfg.lattice_rows = get_index_list(v, key);
        } else if (key == "lattice_cols") {
            cfg.lattice_cols = get_index_list(v, key);
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    return parse_config(io::read_file(path), path);
}

} // namespace dynsamp::cli
