#include "pdfest/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdfest {

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

std::vector<double> distance_impl(const MeasurementVector& measurement, ModelKind model,
                                  const ParamVector& xi) {
    const auto mv = model_vector(model, measurement.grid, xi);
    if (measurement.values.size() != mv.size())
        throw std::invalid_argument("distance: measurement/grid size mismatch");
    std::vector<double> d(mv.size());
    for (std::size_t i = 0; i < mv.size(); ++i) d[i] = measurement.values[i] - mv[i];
    return d;
}

double half_sq_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return 0.5 * s;
}

// J(xi)' * (psi - model(xi)) without materializing the Jacobian.
std::vector<double> force_at(const MeasurementVector& measurement, ModelKind model,
                             const ParamVector& xi) {
    const std::size_t l = param_count(model);
    std::vector<double> g(l, 0.0);
    for (std::size_t i = 0; i < measurement.grid.size(); ++i) {
        const double x = measurement.grid.points[i];
        const double di = measurement.values[i] - pdf_value(model, x, xi);
        const auto grad = pdf_gradient(model, x, xi);
        for (std::size_t c = 0; c < l; ++c) g[c] += grad[c] * di;
    }
    return g;
}

}  // namespace

const char* termination_name(Termination t) {
    switch (t) {
        case Termination::GradientTol: return "GradientTol";
        case Termination::MaxIters: return "MaxIters";
        case Termination::StepFloor: return "StepFloor";
    }
    return "?";
}

std::vector<double> distance(const MeasurementVector& measurement, ModelKind model,
                             const ParamVector& xi) {
    return distance_impl(measurement, model, xi);
}

std::vector<double> tangent_force(const MeasurementVector& measurement, ModelKind model,
                                  const ParamVector& xi) {
    validate_params(model, xi);
    validate_grid(measurement.grid);
    if (measurement.values.size() != measurement.grid.size())
        throw std::invalid_argument("tangent_force: measurement/grid size mismatch");
    return force_at(measurement, model, xi);
}

double lyapunov_value(const MeasurementVector& measurement, ModelKind model,
                      const ParamVector& xi) {
    return half_sq_norm(distance_impl(measurement, model, xi));
}

EstimateResult estimate(const MeasurementVector& measurement, ModelKind model,
                        const ParamVector& xi0, const SolverConfig& config) {
    validate_params(model, xi0);
    validate_grid(measurement.grid);
    if (measurement.values.empty() || measurement.values.size() != measurement.grid.size())
        throw std::invalid_argument("estimate: empty or mismatched measurement");

    ParamVector xi = xi0;
    double v = lyapunov_value(measurement, model, xi);

    EstimateResult res;
    res.trace.push_back({0, xi, v});

    for (int k = 0;; ++k) {
        const auto g = force_at(measurement, model, xi);
        const double gn = inf_norm(g);
        if (gn < config.grad_tol * std::max(1.0, inf_norm(xi))) {
            res.termination = Termination::GradientTol;
            res.iterations = k;
            break;
        }
        if (k == config.max_iters) {
            res.termination = Termination::MaxIters;
            res.iterations = k;
            break;
        }

        double eta = config.initial_step;
        const double cap = config.rel_step_cap * std::max(inf_norm(xi), config.param_floor);
        if (eta * gn > cap) eta = cap / gn;

        bool accepted = false;
        ParamVector cand(xi.size());
        for (int h = 0; h <= config.max_halvings; ++h, eta *= 0.5) {
            for (std::size_t c = 0; c < xi.size(); ++c) cand[c] = xi[c] + eta * g[c];
            if (!(cand[0] > config.param_floor)) continue;  // sigma must stay positive
            const double vc = lyapunov_value(measurement, model, cand);
            if (vc < v) {
                xi = cand;
                v = vc;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            res.termination = Termination::StepFloor;
            res.iterations = k;
            break;
        }
        res.trace.push_back({k + 1, xi, v});
    }

    res.xi_final = xi;
    return res;
}

ErrorDecomposition decompose_error(const std::vector<double>& error, ModelKind model,
                                   const SampleGrid& grid, const ParamVector& xi) {
    validate_params(model, xi);
    const auto j = jacobian(model, grid, xi);
    if (error.size() != j.rows) throw std::invalid_argument("decompose_error: size mismatch");
    const std::size_t l = j.cols;

    // Normal equations (J'J) c = J'e; L <= 2, so direct elimination is fine.
    std::vector<double> g(l * l, 0.0), b(l, 0.0);
    for (std::size_t r = 0; r < l; ++r) {
        for (std::size_t c = 0; c < l; ++c) {
            double s = 0.0;
            for (std::size_t i = 0; i < j.rows; ++i) s += j(i, r) * j(i, c);
            g[r * l + c] = s;
        }
        double s = 0.0;
        for (std::size_t i = 0; i < j.rows; ++i) s += j(i, r) * error[i];
        b[r] = s;
    }

    // Pivot tolerance: relative to the Gram matrix, but with a floor at the
    // natural gradient scale (pdf magnitude over sigma). Without the floor, a
    // column that is mathematically zero but rounds to ~1e-16 (e.g. Rayleigh
    // sensitivity sampled exactly at sqrt(2)*sigma) would pass as full rank.
    double gmax = 0.0;
    for (double x : g) gmax = std::max(gmax, std::abs(x));
    double pscale = 0.0;
    for (double x : grid.points) pscale = std::max(pscale, pdf_value(model, x, xi));
    const double grad_scale = pscale / std::max(std::abs(xi[0]), 1e-6);
    const double tol = 1e-12 * std::max(gmax, grad_scale * grad_scale);

    // Gaussian elimination with partial pivoting.
    std::vector<std::size_t> perm(l);
    for (std::size_t i = 0; i < l; ++i) perm[i] = i;
    for (std::size_t col = 0; col < l; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < l; ++r)
            if (std::abs(g[r * l + col]) > std::abs(g[piv * l + col])) piv = r;
        if (std::abs(g[piv * l + col]) < tol)
            throw std::runtime_error("decompose_error: rank-deficient jacobian");
        if (piv != col) {
            for (std::size_t c = 0; c < l; ++c) std::swap(g[piv * l + c], g[col * l + c]);
            std::swap(b[piv], b[col]);
        }
        for (std::size_t r = col + 1; r < l; ++r) {
            const double f = g[r * l + col] / g[col * l + col];
            for (std::size_t c = col; c < l; ++c) g[r * l + c] -= f * g[col * l + c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> coef(l, 0.0);
    for (std::size_t r = l; r-- > 0;) {
        double s = b[r];
        for (std::size_t c = r + 1; c < l; ++c) s -= g[r * l + c] * coef[c];
        coef[r] = s / g[r * l + r];
    }

    ErrorDecomposition d;
    d.tangent.assign(j.rows, 0.0);
    d.normal.resize(j.rows);
    for (std::size_t i = 0; i < j.rows; ++i) {
        for (std::size_t c = 0; c < l; ++c) d.tangent[i] += j(i, c) * coef[c];
        d.normal[i] = error[i] - d.tangent[i];
    }
    return d;
}

double equilibrium_residual(double xi, double sigma0, int quad_points) {
    if (!(xi > 0.0) || !(sigma0 > 0.0))
        throw std::invalid_argument("equilibrium_residual: parameters must be positive");
    if (quad_points < 100)
        throw std::invalid_argument("equilibrium_residual: quad_points must be >= 100");
    const ParamVector cand{xi}, truth{sigma0};
    const auto f = [&](double x) {
        return pdf_gradient(ModelKind::Rayleigh, x, cand)[0] *
               (pdf_value(ModelKind::Rayleigh, x, truth) - pdf_value(ModelKind::Rayleigh, x, cand));
    };
    return composite_simpson(f, 0.0, 8.0 * std::max(xi, sigma0), quad_points);
}

}  // namespace pdfest
