#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdfest/distributions.hpp"
#include "pdfest/measurement.hpp"
#include "pdfest/subspace.hpp"

namespace pdfest {

enum class EstimatorId { Subspace, L2, Mle, Bayes, Moment };

const char* estimator_name(EstimatorId id);
std::optional<EstimatorId> parse_estimator(const std::string& name);

struct CampaignConfig {
    ModelKind model = ModelKind::Rayleigh;
    ParamVector true_params;
    std::vector<int> record_sizes;
    int n_bins = 15;
    int trials = 10000;
    std::vector<EstimatorId> estimators;
    std::uint64_t master_seed = 42;
    // Subspace start: fixed vector if set, otherwise the moment-style init
    // derived from each record (see moment_init).
    std::optional<ParamVector> xi0;
    SolverConfig solver;
    // Histogram policy override. Default if unset: [min, max sample] bins for
    // Rayleigh and the normal; [0, 0.9-quantile of the record] for the
    // lognormal, whose extreme tail samples would otherwise stretch the bins
    // until the estimate degrades.
    std::optional<GridPolicy> grid;
};

// One row per (record size, estimator, parameter component). Moments are
// taken over successful trials only; failures (estimator exceptions or
// MaxIters terminations) are counted separately.
struct TrialStats {
    EstimatorId estimator;
    std::size_t param_index = 0;
    std::size_t n_params = 1;  // of the estimated model; 2 for the lognormal
    int record_size = 0;
    int n_bins = 0;
    int trials = 0;
    double mean = 0.0;
    double variance = 0.0;  // K-1 denominator
    int failures = 0;
};

// Deterministic per-trial seed: splitmix64-style finalizer mixing of the
// master seed, the record size, and the trial index.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t record_size, std::uint64_t trial);

// Data-driven start for the flow: the Rayleigh moment estimate, sqrt(mean
// x^2) for the zero-mean normal, and (sd, mean) of ln x for the lognormal.
ParamVector moment_init(ModelKind model, const std::vector<double>& samples);

// Runs `trials` seeded records per record size; every estimator in a cell
// sees the identical record per trial index, so comparisons are paired.
// Deterministic given master_seed.
std::vector<TrialStats> run_campaign(const CampaignConfig& config);

// Subspace-only sweep over the configured record sizes.
std::vector<TrialStats> sweep_record_size(const CampaignConfig& config);

// Subspace-only sweep over bin counts at the configured record sizes.
std::vector<TrialStats> sweep_bins(const CampaignConfig& config, const std::vector<int>& n_list);

struct ResidualPoint {
    double xi;
    double residual;
};

// Tabulates equilibrium_residual over a scan of candidate sigma values.
std::vector<ResidualPoint> residual_curve(double sigma0, double lo, double hi, double step);

// CSV row in the fixed schema `estimator,K,N,trials,mean,variance,failures`
// (6 significant digits; lognormal rows suffix the estimator name with
// `_sigma` / `_mu`).
std::string to_csv_row(const TrialStats& row);
inline constexpr const char* kCsvHeader = "estimator,K,N,trials,mean,variance,failures";

}  // namespace pdfest
