// hardedge: disk counting statistics of the hard-wall Mittag-Leffler ensemble.
//
// Precedence: built-in defaults < --config file < HARDEDGE_* environment < flags.
// Exit codes: 0 ok, 1 numeric failure, 2 config error, 3 selftest failure.

#include "commands.hpp"
#include "config.hpp"
#include "output.hpp"

#include <hardedge/error.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <optional>
#include <string>

namespace {

enum Exit : int { ok = 0, numeric = 1, config = 2, selftest = 3 };

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> n_list;
    std::optional<unsigned> threads;
    std::optional<long> samples;
    std::optional<double> tolerance_scale;
    bool points = false;
};

void add_common(CLI::App* sub, Flags& f)
{
    sub->add_option("--config", f.config, "sectioned key = value config file")->envname("HARDEDGE_CONFIG");
    sub->add_option("--out", f.out, "output directory")->envname("HARDEDGE_OUT");
    sub->add_option("--seed", f.seed, "random seed")->envname("HARDEDGE_SEED");
    sub->add_option("--n-list", f.n_list, "comma-separated, strictly increasing n values")
        ->envname("HARDEDGE_N_LIST");
    sub->add_option("--threads", f.threads, "worker threads (0: all cores)")
        ->envname("HARDEDGE_THREADS")
        ->check(CLI::Range(0u, 4096u));
}

hecli::RunConfig resolve(const Flags& f)
{
    hecli::RunConfig cfg = f.config.empty() ? hecli::RunConfig{} : hecli::load_config_file(f.config);
    if (f.out)
        cfg.out = *f.out;
    if (f.seed)
        cfg.seed = *f.seed;
    if (f.n_list)
        cfg.n_list = hecli::parse_n_list(*f.n_list, "--n-list");
    if (f.threads)
        cfg.threads = *f.threads;
    if (f.samples)
        cfg.samples = *f.samples;
    if (f.tolerance_scale)
        cfg.tolerance_scale = *f.tolerance_scale;
    if (f.points)
        cfg.points = true;
    return cfg;
}

int run_command(const std::string& command, const hecli::RunConfig& cfg)
{
    if (command == "selftest") {
        hecli::validate(cfg, false);
        return hecli::cmd_selftest(cfg) == 0 ? Exit::ok : Exit::selftest;
    }
    hecli::validate(cfg, true);
    const std::filesystem::path out(cfg.out);
    hecli::prepare_output_dir(out);
    if (command == "mgf")
        hecli::cmd_mgf(cfg, out);
    else if (command == "moments")
        hecli::cmd_moments(cfg, out);
    else if (command == "dist")
        hecli::cmd_dist(cfg, out);
    else if (command == "sample")
        hecli::cmd_sample(cfg, out);
    else
        throw hecli::ConfigError("manifest", "command", "unknown command '" + command + "'");
    std::fprintf(stderr, "%s: wrote %s\n", command.c_str(), (out / (command + ".manifest.json")).c_str());
    return Exit::ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Counting statistics of the hard-wall Mittag-Leffler ensemble: exact finite-n values, "
                 "asymptotic expansions and samples."};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hardedge::version));

    Flags f;
    auto* mgf = app.add_subcommand("mgf", "exact vs asymptotic log moment generating function per n");
    auto* moments = app.add_subcommand("moments", "exact vs asymptotic means and covariances per n");
    auto* dist = app.add_subcommand("dist", "law of N(rho1) vs the discrete Gaussian, with total variation");
    auto* sample = app.add_subcommand("sample", "point clouds and count samples");
    auto* selftest = app.add_subcommand("selftest", "cross-module identity checks");
    for (CLI::App* sub : {mgf, moments, dist, sample, selftest})
        add_common(sub, f);
    sample->add_option("--samples", f.samples, "number of count samples per n")
        ->envname("HARDEDGE_SAMPLES")
        ->check(CLI::NonNegativeNumber);
    sample->add_flag("--points", f.points, "write a point cloud per n");
    selftest->add_option("--tolerance-scale", f.tolerance_scale, "multiply every tolerance (0 forces failures)")
        ->envname("HARDEDGE_TOLERANCE_SCALE")
        ->check(CLI::NonNegativeNumber);

    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "rerun a command from its manifest");
    replay->add_option("manifest", manifest_path, "a *.manifest.json file")->required();
    replay->add_option("--out", f.out, "output directory")->envname("HARDEDGE_OUT");
    replay->add_option("--threads", f.threads, "worker threads (0: all cores)")->envname("HARDEDGE_THREADS");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::config;
    }

    try {
        if (replay->parsed()) {
            auto [command, cfg] = hecli::load_manifest(manifest_path);
            if (f.out)
                cfg.out = *f.out;
            if (f.threads)
                cfg.threads = *f.threads;
            return run_command(command, cfg);
        }
        CLI::App* sub = app.get_subcommands().front();
        return run_command(sub->get_name(), resolve(f));
    } catch (const hecli::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return Exit::config;
    } catch (const hardedge::DomainError& e) {
        std::fprintf(stderr, "numeric failure (domain): %s\n", e.what());
        return Exit::numeric;
    } catch (const hardedge::PrecisionError& e) {
        std::fprintf(stderr, "numeric failure (precision): %s\n", e.what());
        return Exit::numeric;
    } catch (const hardedge::ConvergenceError& e) {
        std::fprintf(stderr, "numeric failure (convergence): %s\n", e.what());
        return Exit::numeric;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return Exit::numeric;
    }
}
