#include "pdfest/campaign.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "pdfest/baselines.hpp"

namespace pdfest {

namespace {

struct MeanVar {
    double mean = 0.0;
    double variance = 0.0;
};

// Two-pass, fixed-order moments; K-1 denominator.
MeanVar moments(const std::vector<double>& v) {
    MeanVar mv;
    if (v.empty()) return mv;
    double s = 0.0;
    for (double x : v) s += x;
    mv.mean = s / v.size();
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - mv.mean) * (x - mv.mean);
        mv.variance = ss / (v.size() - 1);
    }
    return mv;
}

// Nearest-rank upper quantile of a record (q in (0,1]).
double quantile(std::vector<double> v, double q) {
    const std::size_t idx =
        std::min(v.size() - 1,
                 static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size()))) -
                     (q > 0.0 ? 1 : 0));
    std::nth_element(v.begin(), v.begin() + idx, v.end());
    return v[idx];
}

GridPolicy default_grid(ModelKind model, int n_bins, const std::vector<double>& record) {
    switch (model) {
        case ModelKind::Rayleigh:
        case ModelKind::NormalZeroMean:
            return GridPolicy::data_min_max(n_bins);
        case ModelKind::Lognormal:
            return GridPolicy::fixed(n_bins, 0.0, quantile(record, 0.9));
    }
    return GridPolicy::data_min_max(n_bins);
}

}  // namespace

const char* estimator_name(EstimatorId id) {
    switch (id) {
        case EstimatorId::Subspace: return "subspace";
        case EstimatorId::L2: return "l2";
        case EstimatorId::Mle: return "mle";
        case EstimatorId::Bayes: return "bayes";
        case EstimatorId::Moment: return "moment";
    }
    return "?";
}

std::optional<EstimatorId> parse_estimator(const std::string& name) {
    if (name == "subspace") return EstimatorId::Subspace;
    if (name == "l2") return EstimatorId::L2;
    if (name == "mle") return EstimatorId::Mle;
    if (name == "bayes") return EstimatorId::Bayes;
    if (name == "moment") return EstimatorId::Moment;
    return std::nullopt;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t record_size, std::uint64_t trial) {
    return mix64(mix64(mix64(master) ^ record_size) ^ trial);
}

ParamVector moment_init(ModelKind model, const std::vector<double>& samples) {
    switch (model) {
        case ModelKind::Rayleigh:
            return {moment_rayleigh(samples)};
        case ModelKind::NormalZeroMean: {
            if (samples.empty()) throw std::invalid_argument("moment_init: empty record");
            double ss = 0.0;
            for (double x : samples) ss += x * x;
            const double s = std::sqrt(ss / samples.size());
            if (!(s > 0.0)) throw std::invalid_argument("moment_init: zero record");
            return {s};
        }
        case ModelKind::Lognormal: {
            if (samples.size() < 2) throw std::invalid_argument("moment_init: need K >= 2");
            double m = 0.0;
            for (double x : samples) {
                if (!(x > 0.0)) throw std::invalid_argument("moment_init: non-positive sample");
                m += std::log(x);
            }
            m /= samples.size();
            double ss = 0.0;
            for (double x : samples) {
                const double d = std::log(x) - m;
                ss += d * d;
            }
            const double sd = std::sqrt(ss / (samples.size() - 1));
            if (!(sd > 0.0)) throw std::invalid_argument("moment_init: degenerate record");
            return {sd, m};
        }
    }
    throw std::invalid_argument("moment_init: unknown model");
}

std::vector<TrialStats> run_campaign(const CampaignConfig& config) {
    validate_params(config.model, config.true_params);
    if (config.trials < 1) throw std::invalid_argument("run_campaign: trials must be >= 1");
    if (config.record_sizes.empty())
        throw std::invalid_argument("run_campaign: record_sizes must be nonempty");
    if (config.estimators.empty())
        throw std::invalid_argument("run_campaign: estimators must be nonempty");
    if (config.model != ModelKind::Rayleigh)
        for (EstimatorId e : config.estimators)
            if (e != EstimatorId::Subspace)
                throw std::invalid_argument(
                    "run_campaign: only the subspace estimator supports non-Rayleigh models");
    if (config.xi0) validate_params(config.model, *config.xi0);

    const std::size_t n_params = param_count(config.model);
    std::vector<TrialStats> out;

    for (int k : config.record_sizes) {
        if (k < 2) throw std::invalid_argument("run_campaign: record sizes must be >= 2");

        // estimates[e][p] collects per-trial values; fixed order keeps the
        // reduction deterministic.
        std::vector<std::vector<std::vector<double>>> estimates(
            config.estimators.size(),
            std::vector<std::vector<double>>(n_params));
        std::vector<int> failures(config.estimators.size(), 0);

        for (int t = 0; t < config.trials; ++t) {
            const auto record =
                sample(config.model, config.true_params, static_cast<std::size_t>(k),
                       trial_seed(config.master_seed, static_cast<std::uint64_t>(k),
                                  static_cast<std::uint64_t>(t)));

            MeasurementVector meas;
            bool meas_ok = true;
            try {
                const GridPolicy policy =
                    config.grid ? *config.grid : default_grid(config.model, config.n_bins, record);
                meas = histogram_density(record, build_grid(record, policy, config.model));
            } catch (const std::exception&) {
                meas_ok = false;  // degenerate record; every grid-based estimator fails
            }

            for (std::size_t e = 0; e < config.estimators.size(); ++e) {
                const EstimatorId id = config.estimators[e];
                try {
                    switch (id) {
                        case EstimatorId::Subspace: {
                            if (!meas_ok) throw std::runtime_error("degenerate measurement");
                            const ParamVector xi0 =
                                config.xi0 ? *config.xi0 : moment_init(config.model, record);
                            const auto r = estimate(meas, config.model, xi0, config.solver);
                            if (r.termination == Termination::MaxIters)
                                throw std::runtime_error("no convergence");
                            for (std::size_t p = 0; p < n_params; ++p)
                                estimates[e][p].push_back(r.xi_final[p]);
                            break;
                        }
                        case EstimatorId::L2: {
                            if (!meas_ok) throw std::runtime_error("degenerate measurement");
                            const double m = moment_rayleigh(record);
                            L2FitConfig fit;
                            fit.search_lo = 0.05 * m;
                            fit.search_hi = 5.0 * m;
                            estimates[e][0].push_back(l2_fit(meas, fit));
                            break;
                        }
                        case EstimatorId::Mle:
                            estimates[e][0].push_back(mle_rayleigh(record));
                            break;
                        case EstimatorId::Bayes:
                            estimates[e][0].push_back(bayes_rayleigh(record));
                            break;
                        case EstimatorId::Moment:
                            estimates[e][0].push_back(moment_rayleigh(record));
                            break;
                    }
                } catch (const std::exception&) {
                    ++failures[e];
                }
            }
        }

        for (std::size_t e = 0; e < config.estimators.size(); ++e) {
            for (std::size_t p = 0; p < n_params; ++p) {
                if (config.estimators[e] != EstimatorId::Subspace && p > 0) continue;
                const auto mv = moments(estimates[e][p]);
                TrialStats row;
                row.estimator = config.estimators[e];
                row.param_index = p;
                row.n_params = n_params;
                row.record_size = k;
                row.n_bins = config.n_bins;
                row.trials = config.trials;
                row.mean = mv.mean;
                row.variance = mv.variance;
                row.failures = failures[e];
                out.push_back(row);
            }
        }
    }
    return out;
}

std::vector<TrialStats> sweep_record_size(const CampaignConfig& config) {
    CampaignConfig c = config;
    c.estimators = {EstimatorId::Subspace};
    return run_campaign(c);
}

std::vector<TrialStats> sweep_bins(const CampaignConfig& config, const std::vector<int>& n_list) {
    if (n_list.empty()) throw std::invalid_argument("sweep_bins: empty bin list");
    std::vector<TrialStats> out;
    for (int n : n_list) {
        CampaignConfig c = config;
        c.estimators = {EstimatorId::Subspace};
        c.n_bins = n;
        const auto rows = run_campaign(c);
        out.insert(out.end(), rows.begin(), rows.end());
    }
    return out;
}

std::vector<ResidualPoint> residual_curve(double sigma0, double lo, double hi, double step) {
    if (!(sigma0 > 0.0) || !(lo > 0.0) || !(hi > lo) || !(step > 0.0))
        throw std::invalid_argument("residual_curve: invalid range");
    std::vector<ResidualPoint> out;
    // Half-step slack absorbs accumulated rounding at the top end.
    for (double xi = lo; xi <= hi + step / 2.0; xi += step)
        out.push_back({xi, equilibrium_residual(xi, sigma0)});
    return out;
}

std::string to_csv_row(const TrialStats& row) {
    std::string name = estimator_name(row.estimator);
    if (row.n_params > 1) name += row.param_index == 0 ? "_sigma" : "_mu";
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s,%d,%d,%d,%.6g,%.6g,%d", name.c_str(), row.record_size,
                  row.n_bins, row.trials, row.mean, row.variance, row.failures);
    return buf;
}

}  // namespace pdfest
