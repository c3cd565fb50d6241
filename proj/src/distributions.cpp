#include "pdfest/distributions.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace pdfest {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779;  // 1/sqrt(2*pi)

[[noreturn]] void throw_invalid(ModelKind model, const std::string& what) {
    throw std::invalid_argument(std::string(model_name(model)) + ": " + what);
}

}  // namespace

std::size_t param_count(ModelKind model) {
    return model == ModelKind::Lognormal ? 2 : 1;
}

const char* model_name(ModelKind model) {
    switch (model) {
        case ModelKind::Rayleigh: return "rayleigh";
        case ModelKind::NormalZeroMean: return "normal";
        case ModelKind::Lognormal: return "lognormal";
    }
    return "?";
}

void validate_params(ModelKind model, const ParamVector& xi) {
    if (xi.size() != param_count(model))
        throw_invalid(model, "expected " + std::to_string(param_count(model)) + " parameters, got " +
                                 std::to_string(xi.size()));
    if (!(xi[0] > 0.0) || !std::isfinite(xi[0]))
        throw_invalid(model, "sigma must be positive");
    if (model == ModelKind::Lognormal && !std::isfinite(xi[1]))
        throw_invalid(model, "mu must be finite");
}

void validate_grid(const SampleGrid& grid) {
    if (grid.points.empty() || grid.points.size() != grid.widths.size())
        throw std::invalid_argument("grid: empty or mismatched points/widths");
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
        if (!(grid.widths[i] > 0.0))
            throw std::invalid_argument("grid: widths must be positive");
        if (i > 0 && !(grid.points[i] > grid.points[i - 1]))
            throw std::invalid_argument("grid: points must be strictly increasing");
    }
}

double pdf_value(ModelKind model, double x, const ParamVector& xi) {
    validate_params(model, xi);
    const double s = xi[0];
    switch (model) {
        case ModelKind::Rayleigh: {
            if (x < 0.0) return 0.0;
            const double s2 = s * s;
            return x / s2 * std::exp(-x * x / (2.0 * s2));
        }
        case ModelKind::NormalZeroMean: {
            const double s2 = s * s;
            return kInvSqrt2Pi / s * std::exp(-x * x / (2.0 * s2));
        }
        case ModelKind::Lognormal: {
            if (x <= 0.0) return 0.0;
            const double t = std::log(x) - xi[1];
            return kInvSqrt2Pi / (x * s) * std::exp(-t * t / (2.0 * s * s));
        }
    }
    return 0.0;
}

std::vector<double> pdf_gradient(ModelKind model, double x, const ParamVector& xi) {
    validate_params(model, xi);
    const double s = xi[0];
    switch (model) {
        case ModelKind::Rayleigh: {
            if (x <= 0.0) return {0.0};
            const double s2 = s * s;
            return {x * std::exp(-x * x / (2.0 * s2)) * (x * x - 2.0 * s2) / (s2 * s2 * s)};
        }
        case ModelKind::NormalZeroMean: {
            const double p = pdf_value(model, x, xi);
            return {p * (x * x - s * s) / (s * s * s)};
        }
        case ModelKind::Lognormal: {
            if (x <= 0.0) return {0.0, 0.0};
            const double p = pdf_value(model, x, xi);
            const double t = std::log(x) - xi[1];
            return {p * (t * t - s * s) / (s * s * s), p * t / (s * s)};
        }
    }
    return {};
}

std::vector<double> model_vector(ModelKind model, const SampleGrid& grid, const ParamVector& xi) {
    validate_grid(grid);
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) out[i] = pdf_value(model, grid.points[i], xi);
    return out;
}

JacobianMatrix jacobian(ModelKind model, const SampleGrid& grid, const ParamVector& xi) {
    validate_grid(grid);
    const std::size_t n = grid.size();
    const std::size_t l = param_count(model);
    JacobianMatrix j;
    j.rows = n;
    j.cols = l;
    j.data.resize(n * l);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = pdf_gradient(model, grid.points[i], xi);
        for (std::size_t c = 0; c < l; ++c) j(i, c) = g[c];
    }
    return j;
}

double Rng::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

std::vector<double> sample(ModelKind model, const ParamVector& xi, std::size_t count,
                           std::uint64_t seed) {
    validate_params(model, xi);
    if (count == 0) throw std::invalid_argument("sample: count must be >= 1");
    Rng rng(seed);
    std::vector<double> out(count);
    switch (model) {
        case ModelKind::Rayleigh:
            for (auto& v : out) v = xi[0] * std::sqrt(-2.0 * std::log(rng.uniform()));
            break;
        case ModelKind::NormalZeroMean:
            for (auto& v : out) v = xi[0] * rng.normal();
            break;
        case ModelKind::Lognormal:
            for (auto& v : out) v = std::exp(xi[1] + xi[0] * rng.normal());
            break;
    }
    return out;
}

double composite_simpson(const std::function<double(double)>& f, double lo, double hi,
                         int intervals) {
    if (!(hi > lo)) throw std::invalid_argument("composite_simpson: hi must exceed lo");
    if (intervals < 2) intervals = 2;
    if (intervals % 2 != 0) ++intervals;
    const double h = (hi - lo) / intervals;
    double odd = 0.0, even = 0.0;
    for (int i = 1; i < intervals; i += 2) odd += f(lo + i * h);
    for (int i = 2; i < intervals; i += 2) even += f(lo + i * h);
    return h / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

}  // namespace pdfest
