#pragma once

#include "config.hpp"
#include "output.hpp"

#include <hardedge/asymptotic.hpp>
#include <hardedge/exact.hpp>
#include <hardedge/model.hpp>
#include <hardedge/numerics/parallel.hpp>
#include <hardedge/sampler.hpp>
#include <hardedge/specialfn/erfc_integrals.hpp>
#include <hardedge/specialfn/incomplete_gamma.hpp>
#include <hardedge/specialfn/theta.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace hecli {

namespace fs = std::filesystem;
using hardedge::ModelParams;
using hardedge::ObservableGrid;

inline unsigned effective_threads(const RunConfig& cfg)
{
    return cfg.threads == 0 ? hardedge::numerics::default_threads() : cfg.threads;
}

/// Least-squares slope of ln err against ln n, over the positive errors.
inline double loglog_slope(const std::vector<long>& n, const std::vector<double>& err)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (!(err[i] > 0.0))
            continue;
        const double x = std::log(static_cast<double>(n[i]));
        const double y = std::log(err[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    if (k < 2)
        return NAN;
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

inline nlohmann::json json_number(double v)
{
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

// Schema mgf/1: n, ln_mgf_exact, ln_mgf_asymptotic, abs_err, abs_err_times_n_3_5
inline void cmd_mgf(const RunConfig& cfg, const fs::path& out)
{
    const unsigned threads = effective_threads(cfg);
    RunManifest man{"mgf", cfg};
    const hardedge::AsymptoticExpansion e = hardedge::constants(cfg.model, cfg.grid);
    CsvTable csv("mgf.csv", "mgf/1",
                 {"n", "ln_mgf_exact", "ln_mgf_asymptotic", "abs_err", "abs_err_times_n_3_5"});
    std::vector<double> errs;
    for (long n : cfg.n_list) {
        const double exact = hardedge::log_mgf_exact(cfg.model, cfg.grid, n, threads);
        const double asym = e.log_mgf(n);
        const double err = std::fabs(exact - asym);
        csv.row({n, exact, asym, err, err * std::pow(static_cast<double>(n), 0.6)});
        man.records.push_back({{"n", n}, {"F_n", e.F(n)}, {"smooth_part", e.smooth_part(n)}});
        errs.push_back(err);
    }
    man.extra = {{"C1", e.C1}, {"C2", e.C2}, {"C3", e.C3}, {"C4", e.C4}, {"lnQ", e.lnQ},
                 {"sigma_star", e.sigma_star}, {"loglog_slope", json_number(loglog_slope(cfg.n_list, errs))}};
    man.outputs.push_back(csv.save(out));
    man.save(out, threads);
}

// Schema moments/1: n, kind, l, k, exact, asymptotic, residual, smooth, oscillatory
// kind is "mean" (k = l) or "cov" (l <= k); indices are 1-based.
inline void cmd_moments(const RunConfig& cfg, const fs::path& out)
{
    const unsigned threads = effective_threads(cfg);
    RunManifest man{"moments", cfg};
    const int c = cfg.grid.size();
    CsvTable csv("moments.csv", "moments/1",
                 {"n", "kind", "l", "k", "exact", "asymptotic", "residual", "smooth", "oscillatory"});
    for (long n : cfg.n_list) {
        const auto mp = hardedge::mode_probabilities(cfg.model, cfg.grid, n, threads);
        const hardedge::ExactMoments ex = hardedge::exact_moments(mp);
        double worst = 0.0;
        auto emit = [&](const char* kind, int l, int k, double exact, const hardedge::ExpansionTerms& t) {
            const double a = t.value();
            worst = std::max(worst, std::fabs(exact - a));
            csv.row({n, std::string(kind), static_cast<long>(l + 1), static_cast<long>(k + 1), exact, a, exact - a,
                     a - t.f, t.f});
        };
        for (int l = 0; l < c; ++l)
            emit("mean", l, l, ex.mean[l], hardedge::expectation_asymptotics(cfg.model, cfg.grid, l, n));
        for (int l = 0; l < c; ++l)
            for (int k = l; k < c; ++k)
                emit("cov", l, k, ex.cov[l][k], hardedge::covariance_asymptotics(cfg.model, cfg.grid, l, k, n));
        man.records.push_back({{"n", n}, {"max_abs_residual", worst}});
    }
    man.extra = {{"limit_variance_wall", 1.0 / (2.0 * cfg.model.log_ratio())}};
    man.outputs.push_back(csv.save(out));
    man.save(out, threads);
}

// Schema dist/1: n, x, count, exact_pmf, gaussian_pmf, where count = floor(Lambda_n) + x
// Schema dist_summary/1: n, lambda, floor_lambda, frac, tv, exact_mass, gaussian_mass
// The count is N(rho1), whatever the configured grid.
inline void cmd_dist(const RunConfig& cfg, const fs::path& out)
{
    const unsigned threads = effective_threads(cfg);
    RunManifest man{"dist", cfg};
    const ObservableGrid wall{1, {0.0, 0.0}, {0.0, 0.0}};
    const hardedge::EquilibriumData eq = hardedge::equilibrium(cfg.model);
    CsvTable pmf("dist.csv", "dist/1", {"n", "x", "count", "exact_pmf", "gaussian_pmf"});
    CsvTable summary("dist_summary.csv", "dist_summary/1",
                     {"n", "lambda", "floor_lambda", "frac", "tv", "exact_mass", "gaussian_mass"});
    for (long n : cfg.n_list) {
        const auto mp = hardedge::mode_probabilities(cfg.model, wall, n, threads);
        const hardedge::CountingDistribution d = hardedge::counting_pmf(mp, 0);
        const hardedge::DiscreteGaussian g = hardedge::discrete_gaussian_pmf(cfg.model, eq, n);
        const long shift = g.lambda.floor;
        long lo = g.x_min, hi = g.x_max();
        for (long k = 0; k <= n; ++k)
            if (d.pmf[static_cast<std::size_t>(k)] >= 1e-300) {
                lo = std::min(lo, k - shift);
                hi = std::max(hi, k - shift);
            }
        hardedge::numerics::CompensatedSum me, mg;
        for (long x = lo; x <= hi; ++x) {
            const long k = x + shift;
            const double pe = (k >= 0 && k <= n) ? d.pmf[static_cast<std::size_t>(k)] : 0.0;
            const double pg = g.at(x);
            me.add(pe);
            mg.add(pg);
            pmf.row({n, x, k, pe, pg});
        }
        const double tv = hardedge::total_variation(d, g);
        summary.row({n, g.lambda.value, shift, g.lambda.frac, tv, me.value(), mg.value()});
        man.records.push_back({{"n", n}, {"tv", tv}});
    }
    man.outputs.push_back(pmf.save(out));
    man.outputs.push_back(summary.save(out));
    man.save(out, threads);
}

// Schema points/1: x, y (one file per n, points_n<N>.csv)
// Schema counts/1: sample, N1 .. N2m (one file per n, counts_n<N>.csv)
inline void cmd_sample(const RunConfig& cfg, const fs::path& out)
{
    const unsigned threads = effective_threads(cfg);
    RunManifest man{"sample", cfg};
    if (!cfg.points && cfg.samples == 0)
        throw ConfigError("config", "run.points/run.samples", "nothing to sample: set points = true or samples > 0");
    const int c = cfg.grid.size();
    for (long n : cfg.n_list) {
        nlohmann::json rec{{"n", n}, {"seed", cfg.seed}};
        if (cfg.points) {
            const auto pts = hardedge::export_point_cloud(cfg.model, n, cfg.seed, threads);
            CsvTable csv("points_n" + std::to_string(n) + ".csv", "points/1", {"x", "y"});
            long in_wall = 0;
            for (const auto& [x, y] : pts) {
                const double r = std::hypot(x, y);
                if (r > cfg.model.rho1 && r < cfg.model.rho2)
                    ++in_wall;
                csv.row({x, y});
            }
            rec["wall_annulus_points"] = in_wall;
            man.outputs.push_back(csv.save(out));
        }
        if (cfg.samples > 0) {
            const hardedge::SampleBatch batch =
                hardedge::sample_counts(cfg.model, cfg.grid, n, cfg.samples, cfg.seed, threads);
            std::vector<std::string> cols{"sample"};
            for (int l = 1; l <= c; ++l)
                cols.push_back("N" + std::to_string(l));
            CsvTable csv("counts_n" + std::to_string(n) + ".csv", "counts/1", cols);
            long nesting_violations = 0;
            std::vector<CsvTable::Cell> row(static_cast<std::size_t>(c) + 1);
            for (long s = 0; s < batch.num_samples; ++s) {
                row[0] = s;
                for (int l = 0; l < c; ++l) {
                    row[static_cast<std::size_t>(l) + 1] = static_cast<long>(batch.count(s, l));
                    if (l > 0 && batch.count(s, l) < batch.count(s, l - 1))
                        ++nesting_violations;
                }
                csv.row(row);
            }
            rec["nesting_violations"] = nesting_violations;
            man.outputs.push_back(csv.save(out));
        }
        man.records.push_back(rec);
    }
    man.save(out, threads);
}

struct SelftestCheck {
    std::string name;
    double residual;
    double tolerance;
    std::string note;
};

/// Cross-module identity suite. Tolerances are multiplied by tolerance_scale,
/// so a scale of 0 turns every nonzero residual into a failure.
inline std::vector<SelftestCheck> run_selftest(const RunConfig& cfg)
{
    using namespace hardedge;
    using namespace hardedge::specialfn;
    std::vector<SelftestCheck> out;
    auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); };

    const ErfcIntegralConstants ic = erfc_integral_constants();
    char note[64];
    std::snprintf(note, sizeof note, "I = %.10f", ic.I);
    out.push_back({"I constant vs -0.81367", std::fabs(ic.I + 0.81367), 5e-6, note});
    out.push_back({"I3 = I", std::fabs(ic.I3 - ic.I), 1e-8, ""});
    out.push_back({"I2 - I4 = I", std::fabs(ic.I2 - ic.I4 - ic.I), 1e-8, ""});

    double pq = 0.0;
    for (double a : {0.5, 3.0, 40.0, 700.0, 1e5})
        for (double f : {0.3, 0.9, 1.0, 1.1, 2.0}) {
            const IncGamma g = inc_gamma(a, f * a);
            pq = std::max(pq, std::fabs(g.p() + g.q() - 1.0));
        }
    out.push_back({"incomplete gamma P + Q = 1", pq, 1e-14, ""});

    double per = 0, sym = 0, modular = 0, triple = 0, wp = 0;
    for (double tau : {0.35, 0.9, 1.7, 4.0, 9.5})
        for (double z : {-1.3, -0.41, 0.07, 0.5, 2.2}) {
            const ThetaParams p(tau);
            const double th = jacobi_theta(z, p);
            per = std::max(per, rel(jacobi_theta(z + 1.0, p), th));
            sym = std::max(sym, rel(jacobi_theta(-z, p), th));
            const double s = std::exp(jacobi_theta_series(z, p).log_value);
            modular = std::max(modular, rel(std::exp(jacobi_theta_modular(z, p).log_value), s));
            triple = std::max(triple, rel(jacobi_theta_triple_product(z, p), s));
            const double lhs = -log_theta_d2(z, p);
            const double rhs = weierstrass_p({z - 0.5, -0.5 * p.tau_im}, p).real() - weierstrass_c(p);
            wp = std::max(wp, std::fabs(lhs - rhs) / std::max(1.0, std::fabs(lhs)));
        }
    out.push_back({"theta periodicity", per, 1e-10, ""});
    out.push_back({"theta symmetry", sym, 1e-10, ""});
    out.push_back({"theta series vs modular form", modular, 1e-10, ""});
    out.push_back({"theta series vs triple product", triple, 1e-10, ""});
    out.push_back({"-(ln theta)'' vs Weierstrass p", wp, 1e-9, ""});

    double bal = 0.0;
    for (double b : {0.5, 1.0, 2.0}) {
        const ModelParams p = figure_params(b);
        const EquilibriumData eq = equilibrium(p);
        const BalayageResult r = balayage_radial(p);
        bal = std::max({bal, std::fabs(r.sigma1 - eq.sigma1), std::fabs(r.sigma2 - eq.sigma2)});
    }
    out.push_back({"balayage quadrature vs closed form", bal, 1e-10, ""});

    const unsigned threads = effective_threads(cfg);
    double two_path = 0.0;
    for (long n : {16L, 256L, 2048L}) {
        const ModeProbabilities mp = mode_probabilities(cfg.model, cfg.grid, n, threads);
        const double a = log_mgf_exact(mp, cfg.grid);
        two_path = std::max(two_path, std::fabs(a - log_mgf_mixture(mp, cfg.grid)) / std::max(1.0, std::fabs(a)));
    }
    out.push_back({"log MGF: product vs mixture path", two_path, 1e-11, "config grid, n = 16, 256, 2048"});

    double deriv = 0.0;
    const long n = 1000;
    const int c = cfg.grid.size();
    auto compare = [&](const ExpansionDerivatives& d, const ExpansionTerms& t) {
        deriv = std::max({deriv, std::fabs(d.C1 - t.b), std::fabs(d.C2 - t.c), std::fabs(d.C3 - t.d),
                          std::fabs(d.C4 - t.e), std::fabs(d.F - t.f)});
    };
    for (int l = 0; l < c; ++l) {
        std::vector<int> o(static_cast<std::size_t>(c), 0);
        o[static_cast<std::size_t>(l)] = 1;
        compare(expansion_derivatives(cfg.model, cfg.grid, o, n), expectation_asymptotics(cfg.model, cfg.grid, l, n));
        for (int k = l; k < c; ++k) {
            std::vector<int> o2(static_cast<std::size_t>(c), 0);
            ++o2[static_cast<std::size_t>(l)];
            ++o2[static_cast<std::size_t>(k)];
            compare(expansion_derivatives(cfg.model, cfg.grid, o2, n),
                    covariance_asymptotics(cfg.model, cfg.grid, l, k, n));
        }
    }
    out.push_back({"expansion derivatives vs moment formulas", deriv, 1e-6, "config grid, n = 1000"});

    for (SelftestCheck& ch : out)
        ch.tolerance *= cfg.tolerance_scale;
    return out;
}

/// Prints the report; returns the number of failed checks.
inline int cmd_selftest(const RunConfig& cfg)
{
    int failed = 0;
    for (const SelftestCheck& ch : run_selftest(cfg)) {
        const bool ok = ch.residual <= ch.tolerance;
        failed += ok ? 0 : 1;
        std::printf("%s  %-42s residual %.3e  tol %.1e%s%s\n", ok ? "PASS" : "FAIL", ch.name.c_str(), ch.residual,
                    ch.tolerance, ch.note.empty() ? "" : "  ", ch.note.c_str());
    }
    std::printf("%s: %d check(s) failed\n", failed == 0 ? "selftest passed" : "selftest FAILED", failed);
    return failed;
}

}  // namespace hecli
