#pragma once

#include <numbers>
#include <vector>

#include "pdfest/measurement.hpp"

namespace pdfest {

// Denominator constant of the Rayleigh moment estimator: 1 - Gamma(1.5)^2
// = 1 - pi/4. Under the mode parameterization used throughout (density
// (x/sigma^2) exp(-x^2/(2 sigma^2))), Var(x) = 2 sigma^2 (1 - pi/4), so the
// estimator divides the sample variance by 2*(1 - pi/4).
inline constexpr double kMomentVarianceFactor = 1.0 - std::numbers::pi / 4.0;

struct L2FitConfig {
    double search_lo = 0.0;  // must be set > 0
    double search_hi = 0.0;  // must be set > search_lo
    int coarse_points = 200;
    int refine_iters = 60;  // golden-section refinement steps
};

// Rayleigh sigma minimizing the l2 distance between the measured values and
// the model vector on the measurement grid: coarse scan over
// [search_lo, search_hi], then golden-section refinement around the best
// coarse point. Throws std::invalid_argument on an all-zero measurement.
double l2_fit(const MeasurementVector& measurement, const L2FitConfig& config);

// The l2 objective itself (exposed for diagnostics and tests).
double l2_objective(const MeasurementVector& measurement, double sigma);

// Unbiasing coefficient c(K) of the Rayleigh MLE, evaluated via log-gamma:
// ln c(K) = K ln4 + lnG(K+1) + lnG(K) + 0.5 ln K - lnG(2K+1) - 0.5 ln pi.
double mle_coefficient(std::size_t k);

// Bayes shrink factor sqrt(K * Gamma(K+0.5) / Gamma(K+1.5)).
double bayes_factor(std::size_t k);

// c(K) * sqrt(sum(x^2) / (2K)). Requires K >= 1, all samples >= 0, not all 0.
double mle_rayleigh(const std::vector<double>& samples);

// bayes_factor(K) * sqrt(sum(x^2) / (2K)). Same preconditions as the MLE.
double bayes_rayleigh(const std::vector<double>& samples);

// sqrt(s^2 / (2 * (1 - pi/4))) with the K-1-denominator sample variance s^2.
// Requires K >= 2 and nonzero variance.
double moment_rayleigh(const std::vector<double>& samples);

}  // namespace pdfest
