#include "experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "dynsamp/parallel.hpp"
#include "dynsamp/random.hpp"
#include "dynsamp/reconstruct.hpp"
#include "svg.hpp"

namespace dynsamp::cli {

using nlohmann::json;

namespace {

std::string fmt_param(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_value(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string header_line(ExperimentKind kind)
{
    std::string line;
    for (const auto& c : csv_columns(kind))
        line += (line.empty() ? "" : ",") + c;
    return line + "\n";
}

double mean(const std::vector<double>& v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// Sample standard deviation; 0 for a single value.
double stddev(const std::vector<double>& v)
{
    if (v.size() < 2)
        return 0.0;
    const double mu = mean(v);
    double s = 0.0;
    for (double x : v)
        s += (x - mu) * (x - mu);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

ReconstructOptions partial_options(const ExperimentConfig& cfg, const Tensor3& truth)
{
    ReconstructOptions opt;
    opt.tol = cfg.tol;
    opt.allow_partial = true;
    opt.threads = 1;
    opt.ground_truth = &truth;
    opt.strict_realness = false;
    return opt;
}

double recover(const ExperimentConfig& cfg, const Instance& inst, const SampleMask& mask,
               const std::vector<Tensor3>& trajectory, std::uint64_t noise_seed)
{
    const SampleData data = observe(trajectory, mask, cfg.sigma, noise_seed);
    return *reconstruct(inst.op, mask, data, partial_options(cfg, inst.signal)).rel_error;
}

std::string recovery_vs_alpha(const ExperimentConfig& cfg, std::size_t threads)
{
    const auto& grid = cfg.alpha_grid;
    const std::size_t trials = cfg.trials;
    std::vector<double> errs(grid.size() * trials);
    parallel_for(errs.size(), threads, [&](std::size_t job) {
        const std::size_t point = job / trials, trial = job % trials;
        const Instance inst = make_instance(cfg, trial);
        const SampleMask mask = bernoulli_mask(cfg.dims, grid[point],
                                               stream_seed(cfg.seed, Stream::mask, trial, point));
        const auto traj = evolve(inst.op, inst.signal, cfg.horizon);
        errs[job] = recover(cfg, inst, mask, traj, stream_seed(cfg.seed, Stream::noise, trial, point));
    });

    std::string csv = header_line(ExperimentKind::recovery_vs_alpha);
    for (std::size_t point = 0; point < grid.size(); ++point) {
        const std::vector<double> v(errs.begin() + static_cast<std::ptrdiff_t>(point * trials),
                                    errs.begin() + static_cast<std::ptrdiff_t>((point + 1) * trials));
        csv += fmt_param(grid[point]) + "," + fmt_value(mean(v)) + "," + fmt_value(stddev(v)) + "\n";
    }
    return csv;
}

std::string pointwise_gap(const ExperimentConfig& cfg)
{
    const Instance inst = make_instance(cfg, 0);
    const SampleMask mask = make_mask(cfg, 0);
    const auto traj = evolve(inst.op, inst.signal, cfg.horizon);
    const SampleData data = observe(traj, mask, cfg.sigma, stream_seed(cfg.seed, Stream::noise, 0));
    ReconstructOptions opt = partial_options(cfg, inst.signal);
    opt.threads = 0;
    const auto report = reconstruct(inst.op, mask, data, opt);

    std::string csv = header_line(ExperimentKind::pointwise_gap);
    const Shape& s = cfg.dims;
    std::size_t linear = 0;
    for (std::size_t k = 0; k < s.n; ++k)
        for (std::size_t j = 0; j < s.p; ++j)
            for (std::size_t i = 0; i < s.m; ++i) {
                const double gap = std::abs(report.estimate(i, j, k) - inst.signal(i, j, k));
                csv += std::to_string(++linear) + "," + std::to_string(i + 1) + "," +
                       std::to_string(j + 1) + "," + std::to_string(k + 1) + "," +
                       fmt_value(gap) + "\n";
            }
    return csv;
}

std::string optimal_t(const ExperimentConfig& cfg, std::size_t threads)
{
    const std::size_t trials = cfg.trials;
    const std::size_t t_lo = cfg.horizon_min, t_hi = cfg.horizon_max;
    const std::size_t t_count = t_hi - t_lo + 1;
    const double alpha = cfg.effective_alpha();

    // errs[(sigma * trials + trial) * t_count + (T - t_lo)]
    std::vector<double> errs(cfg.sigmas.size() * trials * t_count);
    parallel_for(cfg.sigmas.size() * trials, threads, [&](std::size_t job) {
        const std::size_t sigma_idx = job / trials, trial = job % trials;
        const Instance inst = make_instance(cfg, trial);
        const SampleMask mask =
            bernoulli_mask(cfg.dims, alpha, stream_seed(cfg.seed, Stream::mask, trial));
        const auto traj = evolve(inst.op, inst.signal, t_hi);
        // Noise streams are per time step, so shorter horizons see a prefix
        // of the same observations.
        const SampleData full = observe(traj, mask, cfg.sigmas[sigma_idx],
                                        stream_seed(cfg.seed, Stream::noise, trial, sigma_idx));
        for (std::size_t T = t_lo; T <= t_hi; ++T) {
            std::vector<Tensor3> prefix(full.observations().begin(),
                                        full.observations().begin() + static_cast<std::ptrdiff_t>(T));
            const SampleData data(mask, std::move(prefix), full.noise_sigma(), full.seed());
            errs[job * t_count + (T - t_lo)] =
                *reconstruct(inst.op, mask, data, partial_options(cfg, inst.signal)).rel_error;
        }
    });

    std::string csv = header_line(ExperimentKind::optimal_t);
    for (std::size_t sigma_idx = 0; sigma_idx < cfg.sigmas.size(); ++sigma_idx)
        for (std::size_t T = t_lo; T <= t_hi; ++T) {
            std::vector<double> v;
            for (std::size_t trial = 0; trial < trials; ++trial)
                v.push_back(errs[(sigma_idx * trials + trial) * t_count + (T - t_lo)]);
            csv += std::to_string(T) + "," + fmt_param(cfg.sigmas[sigma_idx]) + "," +
                   fmt_value(mean(v)) + "\n";
        }
    return csv;
}

std::string condition_vs_t(const ExperimentConfig& cfg, std::size_t threads)
{
    const Instance inst = make_instance(cfg, 0);
    const SampleMask mask =
        bernoulli_mask(cfg.dims, cfg.effective_alpha(), stream_seed(cfg.seed, Stream::mask, 0));
    const std::size_t t_lo = cfg.horizon_min, t_count = cfg.horizon_max - cfg.horizon_min + 1;
    std::vector<double> ks(t_count), ks_eff(t_count);
    parallel_for(t_count, threads, [&](std::size_t idx) {
        ReconstructOptions opt;
        opt.tol = cfg.tol;
        opt.allow_partial = true;
        opt.threads = 1;
        const ConditionReport rep = system_condition(inst.op, mask, t_lo + idx, opt);
        ks[idx] = rep.K;
        ks_eff[idx] = rep.K_effective;
    });

    std::string csv = header_line(ExperimentKind::condition_vs_t);
    for (std::size_t idx = 0; idx < t_count; ++idx)
        csv += std::to_string(t_lo + idx) + "," + fmt_value(ks[idx]) + "," + fmt_value(ks_eff[idx]) + "\n";
    return csv;
}

std::string conjecture_dim2(const ExperimentConfig& cfg, std::size_t threads)
{
    const Instance inst = make_instance(cfg, 0);
    const SampleMask base =
        bernoulli_mask(cfg.dims, cfg.effective_alpha(), stream_seed(cfg.seed, Stream::mask, 0));
    const auto traj = evolve(inst.op, inst.signal, cfg.horizon);
    const std::size_t p = cfg.dims.p;
    std::vector<double> errs(p), rates(p);
    parallel_for(p, threads, [&](std::size_t j) {
        const SampleMask mask = exclude_slab(base, 2, j);
        rates[j] = mask.rate();
        errs[j] = recover(cfg, inst, mask, traj, stream_seed(cfg.seed, Stream::noise, 0, j));
    });

    std::string csv = header_line(ExperimentKind::conjecture_dim2);
    for (std::size_t j = 0; j < p; ++j)
        csv += std::to_string(j + 1) + "," + fmt_value(rates[j]) + "," + fmt_value(errs[j]) + "\n";
    return csv;
}

std::string slab_dim1_dim3(const ExperimentConfig& cfg, std::size_t threads)
{
    const Instance inst = make_instance(cfg, 0);
    const SampleMask base =
        bernoulli_mask(cfg.dims, cfg.effective_alpha(), stream_seed(cfg.seed, Stream::mask, 0));
    const auto traj = evolve(inst.op, inst.signal, cfg.horizon);
    const std::size_t m = cfg.dims.m, n = cfg.dims.n;
    std::vector<double> errs(m + n), rates(m + n);
    parallel_for(m + n, threads, [&](std::size_t job) {
        const int mode = job < m ? 1 : 3;
        const std::size_t index = job < m ? job : job - m;
        const SampleMask mask = exclude_slab(base, mode, index);
        rates[job] = mask.rate();
        errs[job] = recover(cfg, inst, mask, traj, stream_seed(cfg.seed, Stream::noise, 0, job));
    });

    std::string csv = header_line(ExperimentKind::slab_dim1_dim3);
    for (std::size_t job = 0; job < m + n; ++job) {
        const int mode = job < m ? 1 : 3;
        const std::size_t index = job < m ? job : job - m;
        csv += std::to_string(mode) + "," + std::to_string(index + 1) + "," +
               fmt_value(rates[job]) + "," + fmt_value(errs[job]) + "\n";
    }
    return csv;
}

} // namespace

std::uint64_t stream_seed(std::uint64_t base, Stream s, std::size_t trial, std::size_t point)
{
    return derive_seed(base, {static_cast<std::uint64_t>(s), trial, point});
}

Instance make_instance(const ExperimentConfig& cfg, std::size_t trial)
{
    const Shape& d = cfg.dims;
    return {random_tensor({d.m, d.m, d.n}, stream_seed(cfg.seed, Stream::op, trial)),
            random_tensor(d, stream_seed(cfg.seed, Stream::signal, trial))};
}

SampleMask make_mask(const ExperimentConfig& cfg, std::size_t trial, std::size_t point)
{
    if (!cfg.lattice_rows.empty()) {
        std::vector<std::size_t> rows, cols;
        for (auto i : cfg.lattice_rows)
            rows.push_back(i - 1);
        for (auto j : cfg.lattice_cols)
            cols.push_back(j - 1);
        return lattice_mask(cfg.dims, rows, cols);
    }
    return bernoulli_mask(cfg.dims, cfg.effective_alpha(),
                          stream_seed(cfg.seed, Stream::mask, trial, point));
}

std::vector<std::string> csv_columns(ExperimentKind kind)
{
    switch (kind) {
    case ExperimentKind::recovery_vs_alpha: return {"alpha", "mean_rel_err", "std_rel_err"};
    case ExperimentKind::pointwise_gap: return {"index", "i", "j", "k", "abs_gap"};
    case ExperimentKind::optimal_t: return {"T", "sigma", "mean_rel_err"};
    case ExperimentKind::condition_vs_t: return {"T", "K", "K_effective"};
    case ExperimentKind::conjecture_dim2: return {"excluded_j", "sampling_rate", "rel_err"};
    case ExperimentKind::slab_dim1_dim3: return {"mode", "excluded_index", "sampling_rate", "rel_err"};
    }
    return {};
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, std::size_t threads)
{
    if (!cfg.kind)
        throw ConfigError("kind", "experiment kind is required");
    cfg.validate();
    const ExperimentKind kind = *cfg.kind;

    ExperimentResult result;
    switch (kind) {
    case ExperimentKind::recovery_vs_alpha: result.csv = recovery_vs_alpha(cfg, threads); break;
    case ExperimentKind::pointwise_gap: result.csv = pointwise_gap(cfg); break;
    case ExperimentKind::optimal_t: result.csv = optimal_t(cfg, threads); break;
    case ExperimentKind::condition_vs_t: result.csv = condition_vs_t(cfg, threads); break;
    case ExperimentKind::conjecture_dim2: result.csv = conjecture_dim2(cfg, threads); break;
    case ExperimentKind::slab_dim1_dim3: result.csv = slab_dim1_dim3(cfg, threads); break;
    }
    result.svg = render_svg(result.csv, plot_spec(kind));

    const std::string stem = to_string(kind);
    json seeds = json::array();
    const bool per_trial = kind == ExperimentKind::recovery_vs_alpha || kind == ExperimentKind::optimal_t;
    for (std::size_t trial = 0; trial < (per_trial ? cfg.trials : 1); ++trial)
        seeds.push_back({{"trial", trial},
                         {"op", stream_seed(cfg.seed, Stream::op, trial)},
                         {"signal", stream_seed(cfg.seed, Stream::signal, trial)}});
    result.manifest = {
        {"tool", "dynsamp"},
        {"command", "experiment"},
        {"config", cfg.to_json()},
        {"outputs", {stem + ".csv", stem + ".svg"}},
        {"csv_columns", csv_columns(kind)},
        {"seed_derivation",
         "stream_seed(seed, stream, trial, point) with stream op=1, signal=2, mask=3, noise=4; "
         "point is the grid index (alpha, sigma, or excluded slab) or 0"},
        {"instance_seeds", seeds},
    };
    return result;
}

} // namespace dynsamp::cli
