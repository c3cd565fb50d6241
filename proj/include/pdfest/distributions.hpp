#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace pdfest {

// Supported parametric families. Rayleigh and the zero-mean normal have a
// single scale parameter [sigma]; the lognormal has [sigma, mu] in log-scale
// units.
enum class ModelKind { Rayleigh, NormalZeroMean, Lognormal };

using ParamVector = std::vector<double>;

std::size_t param_count(ModelKind model);
const char* model_name(ModelKind model);

// Throws std::invalid_argument unless xi has the right length and sigma > 0.
void validate_params(ModelKind model, const ParamVector& xi);

// Ordered abscissae with an associated bin width per point. Produced by
// measurement::build_grid; the widths make histogram density normalization
// and quadrature over the grid explicit.
struct SampleGrid {
    std::vector<double> points;  // strictly increasing
    std::vector<double> widths;  // all positive

    std::size_t size() const { return points.size(); }
};

void validate_grid(const SampleGrid& grid);

// Closed-form density. Returns 0 outside the support (x < 0 for Rayleigh,
// x <= 0 for lognormal).
double pdf_value(ModelKind model, double x, const ParamVector& xi);

// Analytic parameter gradient dP/dxi_l; all zeros outside the support.
std::vector<double> pdf_gradient(ModelKind model, double x, const ParamVector& xi);

// Element-wise pdf_value over the grid points.
std::vector<double> model_vector(ModelKind model, const SampleGrid& grid, const ParamVector& xi);

// Dense row-major N x L matrix of dP(x_i)/dxi_l.
struct JacobianMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;  // row-major

    double operator()(std::size_t i, std::size_t l) const { return data[i * cols + l]; }
    double& operator()(std::size_t i, std::size_t l) { return data[i * cols + l]; }
};

JacobianMatrix jacobian(ModelKind model, const SampleGrid& grid, const ParamVector& xi);

// Deterministic RNG used everywhere. std::mt19937_64 is seeded directly and
// mapped to doubles by fixed arithmetic (not std::*_distribution, whose
// output is implementation-defined), so results are identical across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Uniform on (0, 1]; never returns 0 so log(u) is always finite.
    double uniform() {
        return static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller; caches the second draw of each pair.
    double normal();

private:
    std::mt19937_64 eng_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// K i.i.d. draws. Rayleigh by inverse transform x = sigma*sqrt(-2 ln U);
// normal and lognormal through Box-Muller. Deterministic given the seed.
std::vector<double> sample(ModelKind model, const ParamVector& xi, std::size_t count,
                           std::uint64_t seed);

// Composite Simpson rule on [lo, hi]; intervals is rounded up to even.
double composite_simpson(const std::function<double(double)>& f, double lo, double hi,
                         int intervals);

}  // namespace pdfest
