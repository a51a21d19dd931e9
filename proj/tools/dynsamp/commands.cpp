#include "commands.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "config.hpp"
#include "dynsamp/error.hpp"
#include "dynsamp/io.hpp"
#include "dynsamp/parallel.hpp"
#include "dynsamp/reconstruct.hpp"
#include "experiments.hpp"
#include "svg.hpp"

namespace dynsamp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
    std::string config_path;
    std::optional<std::size_t> m, p, n, T, trials;
    std::optional<double> alpha, sigma;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> kind;

    void attach(CLI::App& cmd)
    {
        cmd.add_option("--config", config_path, "JSON config file");
        cmd.add_option("--m", m, "rows of the signal (and operator)");
        cmd.add_option("--p", p, "columns of the signal");
        cmd.add_option("--n", n, "tube length");
        cmd.add_option("--T", T, "number of time samples");
        cmd.add_option("--alpha", alpha, "Bernoulli sampling rate");
        cmd.add_option("--sigma", sigma, "noise standard deviation");
        cmd.add_option("--seed", seed, "base seed");
        cmd.add_option("--trials", trials, "repeats per grid point");
        cmd.add_option("--out", out, "output directory");
    }

    ExperimentConfig resolve() const
    {
        ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        if (m) cfg.dims.m = *m;
        if (p) cfg.dims.p = *p;
        if (n) cfg.dims.n = *n;
        if (T) cfg.horizon = *T;
        if (trials) cfg.trials = *trials;
        if (alpha) cfg.alpha = *alpha;
        if (sigma) {
            cfg.sigma = *sigma;
            cfg.sigmas = {*sigma};
        }
        if (seed) cfg.seed = *seed;
        if (out) cfg.out = *out;
        if (kind) {
            const auto k = parse_kind(*kind);
            if (!k)
                throw ConfigError("kind", "unknown experiment kind '" + *kind + "'");
            cfg.kind = k;
        }
        cfg.validate();
        return cfg;
    }
};

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

int cmd_simulate(const ExperimentConfig& cfg)
{
    const fs::path dir = cfg.out;
    ensure_dir(dir);

    const Instance inst = make_instance(cfg, 0);
    const SampleMask mask = make_mask(cfg, 0);
    const auto traj = evolve(inst.op, inst.signal, cfg.horizon);
    const SampleData data =
        observe(traj, mask, cfg.sigma, stream_seed(cfg.seed, Stream::noise, 0));

    io::write_t3(dir / "A.t3", inst.op);
    io::write_t3(dir / "F.t3", inst.signal);
    io::write_sample_data(dir, data);

    const json manifest = {
        {"tool", "dynsamp"},
        {"command", "simulate"},
        {"config", cfg.to_json()},
        {"op_seed", stream_seed(cfg.seed, Stream::op, 0)},
        {"signal_seed", stream_seed(cfg.seed, Stream::signal, 0)},
        {"mask_seed", stream_seed(cfg.seed, Stream::mask, 0)},
        {"noise_seed", stream_seed(cfg.seed, Stream::noise, 0)},
    };
    io::write_file_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

    std::cout << "wrote dataset " << dir.string() << ": " << to_string(cfg.dims) << ", T="
              << cfg.horizon << ", samples/step=" << mask.sample_count() << "\n";
    return kSuccess;
}

struct ReconstructArgs {
    std::string dataset;
    std::optional<double> tol;
    bool allow_partial = false;
    bool timing = false;
};

int cmd_reconstruct(const ReconstructArgs& args, const Overrides& ov)
{
    std::optional<double> tol = args.tol;
    if (!ov.config_path.empty()) {
        const ExperimentConfig cfg = ov.resolve();
        if (!tol)
            tol = cfg.tol;
    }
    const fs::path dir = args.dataset;
    const fs::path out = ov.out ? fs::path(*ov.out) : dir;

    const Tensor3 op = io::read_t3(dir / "A.t3");
    const SampleData data = io::read_sample_data(dir);
    std::optional<Tensor3> truth;
    if (fs::exists(dir / "F.t3"))
        truth = io::read_t3(dir / "F.t3");

    ReconstructOptions opt;
    opt.tol = tol;
    opt.allow_partial = args.allow_partial;
    opt.ground_truth = truth ? &*truth : nullptr;

    ReconstructionReport report;
    try {
        report = reconstruct(op, data.mask(), data, opt);
    } catch (const UnrecoverableColumn& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kUnrecoverable;
    }

    ensure_dir(out);
    io::write_t3(out / "estimate.t3", report.estimate);
    io::write_file_atomic(out / "report.json", io::format_report(report, args.timing));

    std::cout << "K=" << report.K;
    if (report.rel_error)
        std::cout << " rel_error=" << *report.rel_error;
    std::cout << "\n";
    if (!report.failed_columns.empty()) {
        std::cerr << "dynsamp: " << UnrecoverableColumn(report.failed_columns).what()
                  << " (zero-filled)\n";
        return kUnrecoverable;
    }
    return kSuccess;
}

int cmd_experiment(const ExperimentConfig& cfg)
{
    const ExperimentResult result = run_experiment(cfg, resolve_threads());
    const fs::path dir = cfg.out;
    ensure_dir(dir);
    const std::string stem = to_string(*cfg.kind);
    io::write_file_atomic(dir / (stem + ".csv"), result.csv);
    io::write_file_atomic(dir / (stem + ".svg"), result.svg);
    io::write_file_atomic(dir / "manifest.json", result.manifest.dump(2) + "\n");
    std::cout << "wrote " << (dir / (stem + ".csv")).string() << "\n";
    return kSuccess;
}

int cmd_plot(const std::string& kind_name, const std::string& csv_path, const std::string& out)
{
    const auto kind = parse_kind(kind_name);
    if (!kind)
        throw ConfigError("kind", "unknown experiment kind '" + kind_name + "'");
    const std::string svg = render_svg(io::read_file(csv_path), plot_spec(*kind));
    io::write_file_atomic(out, svg);
    return kSuccess;
}

} // namespace

int run(const std::vector<std::string>& args)
{
    CLI::App app{"Three-dimensional dynamical sampling: simulate, reconstruct, reproduce experiments"};
    app.name(args.empty() ? "dynsamp" : args.front());
    app.require_subcommand(1);

    Overrides sim_ov, rec_ov, exp_ov;
    auto* sim = app.add_subcommand("simulate", "generate A, F, mask and observations");
    sim_ov.attach(*sim);

    ReconstructArgs rec_args;
    auto* rec = app.add_subcommand("reconstruct", "recover F from a dataset directory");
    rec->add_option("dataset", rec_args.dataset, "dataset directory")->required();
    rec->add_option("--tol", rec_args.tol, "relative singular-value cutoff");
    rec->add_flag("--allow-partial", rec_args.allow_partial, "zero-fill unrecoverable columns");
    rec->add_flag("--timing", rec_args.timing, "include wall_ms in report.json");
    rec->add_option("--config", rec_ov.config_path, "JSON config file (uses 'tol')");
    rec->add_option("--out", rec_ov.out, "output directory (default: dataset)");

    auto* exp = app.add_subcommand("experiment", "run an experiment family and emit CSV + SVG");
    exp_ov.attach(*exp);
    exp->add_option("--kind", exp_ov.kind,
                    "recovery-vs-alpha | pointwise-gap | optimal-T | condition-vs-T | "
                    "conjecture-dim2 | slab-dim1-dim3");

    std::string plot_kind, plot_csv, plot_out;
    auto* plot = app.add_subcommand("plot", "re-render an experiment SVG from its CSV");
    plot->add_option("--kind", plot_kind, "experiment kind")->required();
    plot->add_option("--csv", plot_csv, "CSV produced by `experiment`")->required();
    plot->add_option("--out", plot_out, "SVG path")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty())
        rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        if (*sim)
            return cmd_simulate(sim_ov.resolve());
        if (*rec)
            return cmd_reconstruct(rec_args, rec_ov);
        if (*exp)
            return cmd_experiment(exp_ov.resolve());
        if (*plot)
            return cmd_plot(plot_kind, plot_csv, plot_out);
    } catch (const UnrecoverableColumn& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kUnrecoverable;
    } catch (const ConfigError& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kConfigError;
    } catch (const DomainError& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kConfigError;
    } catch (const IoError& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kIoError;
    } catch (const ParseError& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kIoError;
    } catch (const std::exception& e) {
        std::cerr << "dynsamp: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

} // namespace dynsamp::cli
