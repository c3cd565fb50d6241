#include "pdfest/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pdfest {

namespace {

// Sum of x^2 with basic sanity checks shared by the MLE and Bayes forms.
double sum_sq_checked(const std::vector<double>& samples, const char* who) {
    if (samples.empty()) throw std::invalid_argument(std::string(who) + ": empty record");
    double s = 0.0;
    for (double x : samples) {
        if (x < 0.0) throw std::invalid_argument(std::string(who) + ": negative sample");
        s += x * x;
    }
    if (s == 0.0) throw std::invalid_argument(std::string(who) + ": all-zero record");
    return s;
}

}  // namespace

double l2_objective(const MeasurementVector& measurement, double sigma) {
    const auto mv = model_vector(ModelKind::Rayleigh, measurement.grid, ParamVector{sigma});
    double s = 0.0;
    for (std::size_t i = 0; i < mv.size(); ++i) {
        const double d = measurement.values[i] - mv[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double l2_fit(const MeasurementVector& measurement, const L2FitConfig& config) {
    validate_grid(measurement.grid);
    if (measurement.values.size() != measurement.grid.size())
        throw std::invalid_argument("l2_fit: measurement/grid size mismatch");
    if (std::all_of(measurement.values.begin(), measurement.values.end(),
                    [](double v) { return v == 0.0; }))
        throw std::invalid_argument("l2_fit: degenerate all-zero measurement");
    if (!(config.search_hi > config.search_lo) || !(config.search_lo > 0.0))
        throw std::invalid_argument("l2_fit: need search_hi > search_lo > 0");
    if (config.coarse_points < 2) throw std::invalid_argument("l2_fit: coarse_points must be >= 2");

    // Coarse scan.
    const int n = config.coarse_points;
    const double step = (config.search_hi - config.search_lo) / (n - 1);
    int best = 0;
    double best_f = l2_objective(measurement, config.search_lo);
    for (int i = 1; i < n; ++i) {
        const double f = l2_objective(measurement, config.search_lo + i * step);
        if (f < best_f) {
            best_f = f;
            best = i;
        }
    }

    // Golden-section refinement around the best coarse point.
    double a = config.search_lo + (best > 0 ? (best - 1) * step : 0.0);
    double b = config.search_lo + (best < n - 1 ? (best + 1) * step : (n - 1) * step);
    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    double f1 = l2_objective(measurement, x1);
    double f2 = l2_objective(measurement, x2);
    for (int i = 0; i < config.refine_iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = l2_objective(measurement, x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = l2_objective(measurement, x2);
        }
    }
    return 0.5 * (a + b);
}

double mle_coefficient(std::size_t k) {
    if (k == 0) throw std::invalid_argument("mle_coefficient: k must be >= 1");
    const double kk = static_cast<double>(k);
    const double ln_c = kk * std::log(4.0) + std::lgamma(kk + 1.0) + std::lgamma(kk) +
                        0.5 * std::log(kk) - std::lgamma(2.0 * kk + 1.0) -
                        0.5 * std::log(std::numbers::pi);
    return std::exp(ln_c);
}

double bayes_factor(std::size_t k) {
    if (k == 0) throw std::invalid_argument("bayes_factor: k must be >= 1");
    const double kk = static_cast<double>(k);
    return std::exp(0.5 * (std::log(kk) + std::lgamma(kk + 0.5) - std::lgamma(kk + 1.5)));
}

double mle_rayleigh(const std::vector<double>& samples) {
    const double ss = sum_sq_checked(samples, "mle_rayleigh");
    return mle_coefficient(samples.size()) * std::sqrt(ss / (2.0 * samples.size()));
}

double bayes_rayleigh(const std::vector<double>& samples) {
    const double ss = sum_sq_checked(samples, "bayes_rayleigh");
    return bayes_factor(samples.size()) * std::sqrt(ss / (2.0 * samples.size()));
}

double moment_rayleigh(const std::vector<double>& samples) {
    if (samples.size() < 2) throw std::invalid_argument("moment_rayleigh: need K >= 2");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= samples.size();
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double s2 = ss / (samples.size() - 1);
    if (s2 == 0.0) throw std::invalid_argument("moment_rayleigh: zero sample variance");
    return std::sqrt(s2 / (2.0 * kMomentVarianceFactor));
}

}  // namespace pdfest
