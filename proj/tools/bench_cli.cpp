#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdfest/baselines.hpp"
#include "pdfest/campaign.hpp"
#include "pdfest/distributions.hpp"
#include "pdfest/measurement.hpp"
#include "pdfest/subspace.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitEstimator = 3;

pdfest::ModelKind parse_model(const std::string& name) {
    if (name == "rayleigh") return pdfest::ModelKind::Rayleigh;
    if (name == "normal") return pdfest::ModelKind::NormalZeroMean;
    if (name == "lognormal") return pdfest::ModelKind::Lognormal;
    throw CLI::ValidationError("--model", "unknown model '" + name + "'");
}

std::vector<double> read_record(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<double> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            std::size_t used = 0;
            const double v = std::stod(line.substr(first), &used);
            const auto rest = line.find_first_not_of(" \t\r", first + used);
            if (rest != std::string::npos) throw std::invalid_argument("trailing junk");
            out.push_back(v);
        } catch (const std::exception&) {
            throw std::runtime_error("parse error at " + path + ":" + std::to_string(lineno));
        }
    }
    if (out.empty()) throw std::runtime_error("no samples in '" + path + "'");
    return out;
}

std::vector<pdfest::EstimatorId> parse_estimators(const std::string& csv) {
    std::vector<pdfest::EstimatorId> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto id = pdfest::parse_estimator(tok);
        if (!id) throw CLI::ValidationError("--estimators", "unknown estimator '" + tok + "'");
        out.push_back(*id);
    }
    if (out.empty()) throw CLI::ValidationError("--estimators", "empty estimator list");
    return out;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    for (const auto& l : lines) out << l << '\n';
}

void emit_stats(const std::vector<pdfest::TrialStats>& rows, const std::string& out_path) {
    std::printf("%-16s %6s %4s %7s %12s %12s %9s\n", "estimator", "K", "N", "trials", "mean",
                "variance", "failures");
    std::vector<std::string> lines{pdfest::kCsvHeader};
    for (const auto& r : rows) {
        std::string name = pdfest::estimator_name(r.estimator);
        if (r.n_params > 1) name += r.param_index == 0 ? "_sigma" : "_mu";
        std::printf("%-16s %6d %4d %7d %12.6g %12.6g %9d\n", name.c_str(), r.record_size, r.n_bins,
                    r.trials, r.mean, r.variance, r.failures);
        lines.push_back(pdfest::to_csv_row(r));
    }
    if (!out_path.empty()) write_lines(out_path, lines);
}

// Noise-free measurement: exact model values on a fixed grid spanning the
// bulk of the distribution's mass.
pdfest::MeasurementVector exact_measurement(pdfest::ModelKind model,
                                            const pdfest::ParamVector& truth, int n_bins) {
    double lo = 0.0, hi = 0.0;
    switch (model) {
        case pdfest::ModelKind::Rayleigh:
            hi = 4.0 * truth[0];
            break;
        case pdfest::ModelKind::NormalZeroMean:
            lo = -4.0 * truth[0];
            hi = 4.0 * truth[0];
            break;
        case pdfest::ModelKind::Lognormal:
            hi = std::exp(truth[1] + 3.0 * truth[0]);
            break;
    }
    const double width = (hi - lo) / n_bins;
    pdfest::SampleGrid grid;
    grid.widths.assign(n_bins, width);
    grid.points.resize(n_bins);
    for (int i = 0; i < n_bins; ++i) grid.points[i] = lo + (i + 0.5) * width;

    pdfest::MeasurementVector m;
    m.grid = grid;
    m.values = pdfest::model_vector(model, grid, truth);
    m.record_size = 0;
    return m;
}

struct EstimateArgs {
    std::string model = "rayleigh";
    std::string input;
    bool exact = false;
    double sigma0 = 0.0;
    double mu0 = 0.0;
    int k = 0;
    int n_bins = 15;
    std::uint64_t seed = 42;
    std::string estimator = "subspace";
    std::vector<double> xi0;
    std::string trace_path;
};

int run_estimate(const EstimateArgs& args) {
    const auto model = parse_model(args.model);

    // Assemble the measurement and (for closed forms) the raw record.
    std::vector<double> record;
    pdfest::MeasurementVector meas;
    try {
        if (args.exact) {
            if (!(args.sigma0 > 0.0))
                throw std::runtime_error("--exact requires --sigma0 (and --mu0 for lognormal)");
            pdfest::ParamVector truth{args.sigma0};
            if (model == pdfest::ModelKind::Lognormal) truth.push_back(args.mu0);
            meas = exact_measurement(model, truth, args.n_bins);
        } else {
            if (!args.input.empty()) {
                record = read_record(args.input);
            } else if (args.sigma0 > 0.0 && args.k > 0) {
                pdfest::ParamVector truth{args.sigma0};
                if (model == pdfest::ModelKind::Lognormal) truth.push_back(args.mu0);
                record = pdfest::sample(model, truth, static_cast<std::size_t>(args.k), args.seed);
            } else {
                throw std::runtime_error("need --input FILE, or --sigma0 with --k, or --exact");
            }
            pdfest::GridPolicy policy = pdfest::GridPolicy::data_min_max(args.n_bins);
            if (model == pdfest::ModelKind::Lognormal) {
                auto sorted = record;
                std::sort(sorted.begin(), sorted.end());
                policy = pdfest::GridPolicy::fixed(
                    args.n_bins, 0.0, sorted[(sorted.size() * 9 + 9) / 10 - 1]);
            }
            meas = pdfest::histogram_density(record, pdfest::build_grid(record, policy, model));
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }

    // Invocation-shape problems are usage errors, not estimator failures.
    if (args.estimator == "subspace" && args.xi0.empty() && record.empty()) {
        std::cerr << "error: --exact runs need an explicit --xi0\n";
        return kExitUsage;
    }
    if (args.estimator != "subspace" && record.empty()) {
        std::cerr << "error: estimator '" << args.estimator << "' needs a sample record\n";
        return kExitUsage;
    }

    try {
        if (args.estimator == "subspace") {
            const pdfest::ParamVector xi0 =
                !args.xi0.empty() ? args.xi0 : pdfest::moment_init(model, record);
            const auto r = pdfest::estimate(meas, model, xi0);
            std::printf("sigma = %.10g\n", r.xi_final[0]);
            if (r.xi_final.size() > 1) std::printf("mu = %.10g\n", r.xi_final[1]);
            std::printf("iterations = %d\nterminated = %s\n", r.iterations,
                        pdfest::termination_name(r.termination));
            if (!args.trace_path.empty()) {
                std::vector<std::string> lines{r.xi_final.size() > 1 ? "iter,sigma,mu,V"
                                                                     : "iter,sigma,V"};
                for (const auto& t : r.trace) {
                    char buf[128];
                    if (t.xi.size() > 1)
                        std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g,%.10g", t.iteration,
                                      t.xi[0], t.xi[1], t.v);
                    else
                        std::snprintf(buf, sizeof(buf), "%d,%.10g,%.10g", t.iteration, t.xi[0],
                                      t.v);
                    lines.push_back(buf);
                }
                write_lines(args.trace_path, lines);
            }
            if (r.termination == pdfest::Termination::MaxIters) {
                std::cerr << "error: estimator did not converge\n";
                return kExitEstimator;
            }
            return kExitOk;
        }

        double est = 0.0;
        if (args.estimator == "l2") {
            const double m = pdfest::moment_rayleigh(record);
            pdfest::L2FitConfig fit;
            fit.search_lo = 0.05 * m;
            fit.search_hi = 5.0 * m;
            est = pdfest::l2_fit(meas, fit);
        } else if (args.estimator == "mle") {
            est = pdfest::mle_rayleigh(record);
        } else if (args.estimator == "bayes") {
            est = pdfest::bayes_rayleigh(record);
        } else if (args.estimator == "moment") {
            est = pdfest::moment_rayleigh(record);
        } else {
            std::cerr << "error: unknown estimator '" << args.estimator << "'\n";
            return kExitUsage;
        }
        std::printf("sigma = %.10g\n", est);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitEstimator;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parametric PDF estimation benchmarks (subspace gradient flow + classical "
                 "Rayleigh estimators)"};
    app.require_subcommand(1);

    // --- estimate ---
    EstimateArgs est;
    auto* cmd_est = app.add_subcommand("estimate", "Estimate parameters from one record");
    cmd_est->add_option("--model", est.model, "rayleigh|normal|lognormal")
        ->capture_default_str();
    cmd_est->add_option("--input", est.input, "sample file (one value per line, # comments)");
    cmd_est->add_flag("--exact", est.exact, "noise-free model vector instead of a histogram");
    cmd_est->add_option("--sigma0", est.sigma0, "true sigma for --exact or synthetic sampling");
    cmd_est->add_option("--mu0", est.mu0, "true mu (lognormal)");
    cmd_est->add_option("--k", est.k, "record size for synthetic sampling");
    cmd_est->add_option("--n-bins", est.n_bins, "histogram bins")->capture_default_str();
    cmd_est->add_option("--seed", est.seed, "sampling seed")->capture_default_str();
    cmd_est->add_option("--estimator", est.estimator, "subspace|l2|mle|bayes|moment")
        ->capture_default_str();
    cmd_est->add_option("--xi0", est.xi0,
                        "start parameters for the subspace flow (sigma [mu])");
    cmd_est->add_option("--trace", est.trace_path, "write per-iteration CSV trace here");

    // --- bench ---
    struct {
        std::string model = "rayleigh";
        double sigma0 = 1.0;
        double mu0 = 0.0;
        std::vector<int> k{30};
        int n_bins = 15;
        int trials = 10000;
        std::uint64_t seed = 42;
        std::string estimators;
        std::vector<double> xi0;
        std::string out;
    } bench;
    auto* cmd_bench = app.add_subcommand("bench", "Monte-Carlo estimator comparison campaign");
    cmd_bench->add_option("--model", bench.model, "rayleigh|normal|lognormal")
        ->capture_default_str();
    cmd_bench->add_option("--sigma0", bench.sigma0, "true sigma")->capture_default_str();
    cmd_bench->add_option("--mu0", bench.mu0, "true mu (lognormal)");
    cmd_bench->add_option("--k", bench.k, "record sizes (repeatable)")->capture_default_str();
    cmd_bench->add_option("--n-bins", bench.n_bins, "histogram bins")->capture_default_str();
    cmd_bench->add_option("--trials", bench.trials, "trials per cell")->capture_default_str();
    cmd_bench->add_option("--seed", bench.seed, "master seed")->capture_default_str();
    cmd_bench->add_option("--estimators", bench.estimators,
                          "comma list: subspace,l2,mle,bayes,moment (default: all for rayleigh, "
                          "subspace otherwise)");
    cmd_bench->add_option("--xi0", bench.xi0, "fixed subspace start (default: moment init)");
    cmd_bench->add_option("--out", bench.out, "CSV output path");

    // --- sweep-k ---
    struct {
        double sigma0 = 4.0;
        std::vector<int> k{25, 50, 100, 200, 400};
        int n_bins = 15;
        int trials = 2000;
        std::uint64_t seed = 42;
        std::string out;
    } sweepk;
    auto* cmd_sweepk =
        app.add_subcommand("sweep-k", "Subspace accuracy vs record size (Rayleigh)");
    cmd_sweepk->add_option("--sigma0", sweepk.sigma0)->capture_default_str();
    cmd_sweepk->add_option("--k", sweepk.k, "record sizes")->capture_default_str();
    cmd_sweepk->add_option("--n-bins", sweepk.n_bins)->capture_default_str();
    cmd_sweepk->add_option("--trials", sweepk.trials)->capture_default_str();
    cmd_sweepk->add_option("--seed", sweepk.seed)->capture_default_str();
    cmd_sweepk->add_option("--out", sweepk.out, "CSV output path");

    // --- sweep-n ---
    struct {
        double sigma0 = 4.0;
        std::vector<int> k{50, 500};
        std::vector<int> n{10, 15, 25, 40, 60};
        int trials = 2000;
        std::uint64_t seed = 42;
        std::string out;
    } sweepn;
    auto* cmd_sweepn =
        app.add_subcommand("sweep-n", "Subspace accuracy vs bin count at fixed K (Rayleigh)");
    cmd_sweepn->add_option("--sigma0", sweepn.sigma0)->capture_default_str();
    cmd_sweepn->add_option("--k", sweepn.k, "record sizes")->capture_default_str();
    cmd_sweepn->add_option("--n", sweepn.n, "bin counts")->capture_default_str();
    cmd_sweepn->add_option("--trials", sweepn.trials)->capture_default_str();
    cmd_sweepn->add_option("--seed", sweepn.seed)->capture_default_str();
    cmd_sweepn->add_option("--out", sweepn.out, "CSV output path");

    // --- residual ---
    struct {
        double sigma0 = 1.0;
        double lo = 0.2;
        double hi = 3.0;
        double step = 0.01;
        std::string out;
    } resid;
    auto* cmd_resid =
        app.add_subcommand("residual", "Equilibrium residual curve for the Rayleigh flow");
    cmd_resid->add_option("--sigma0", resid.sigma0)->capture_default_str();
    cmd_resid->add_option("--lo", resid.lo)->capture_default_str();
    cmd_resid->add_option("--hi", resid.hi)->capture_default_str();
    cmd_resid->add_option("--step", resid.step)->capture_default_str();
    cmd_resid->add_option("--out", resid.out, "CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_est->parsed()) return run_estimate(est);

        if (cmd_bench->parsed()) {
            pdfest::CampaignConfig cfg;
            cfg.model = parse_model(bench.model);
            cfg.true_params = {bench.sigma0};
            if (cfg.model == pdfest::ModelKind::Lognormal) cfg.true_params.push_back(bench.mu0);
            cfg.record_sizes = bench.k;
            cfg.n_bins = bench.n_bins;
            cfg.trials = bench.trials;
            cfg.master_seed = bench.seed;
            if (!bench.xi0.empty()) cfg.xi0 = bench.xi0;
            if (!bench.estimators.empty()) {
                cfg.estimators = parse_estimators(bench.estimators);
            } else if (cfg.model == pdfest::ModelKind::Rayleigh) {
                cfg.estimators = {pdfest::EstimatorId::Subspace, pdfest::EstimatorId::L2,
                                  pdfest::EstimatorId::Mle, pdfest::EstimatorId::Bayes,
                                  pdfest::EstimatorId::Moment};
            } else {
                cfg.estimators = {pdfest::EstimatorId::Subspace};
            }
            emit_stats(pdfest::run_campaign(cfg), bench.out);
            return kExitOk;
        }

        if (cmd_sweepk->parsed()) {
            pdfest::CampaignConfig cfg;
            cfg.true_params = {sweepk.sigma0};
            cfg.record_sizes = sweepk.k;
            cfg.n_bins = sweepk.n_bins;
            cfg.trials = sweepk.trials;
            cfg.master_seed = sweepk.seed;
            emit_stats(pdfest::sweep_record_size(cfg), sweepk.out);
            return kExitOk;
        }

        if (cmd_sweepn->parsed()) {
            pdfest::CampaignConfig cfg;
            cfg.true_params = {sweepn.sigma0};
            cfg.record_sizes = sweepn.k;
            cfg.trials = sweepn.trials;
            cfg.master_seed = sweepn.seed;
            emit_stats(pdfest::sweep_bins(cfg, sweepn.n), sweepn.out);
            return kExitOk;
        }

        if (cmd_resid->parsed()) {
            const auto curve = pdfest::residual_curve(resid.sigma0, resid.lo, resid.hi, resid.step);
            std::vector<std::string> lines{"xi,residual"};
            std::printf("%10s %14s\n", "xi", "residual");
            for (const auto& p : curve) {
                char buf[64];
                std::snprintf(buf, sizeof(buf), "%.6g,%.6g", p.xi, p.residual);
                lines.push_back(buf);
                std::printf("%10.4f %14.6g\n", p.xi, p.residual);
            }
            if (!resid.out.empty()) write_lines(resid.out, lines);
            return kExitOk;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}
