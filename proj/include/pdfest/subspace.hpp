#pragma once

#include <cstddef>
#include <vector>

#include "pdfest/distributions.hpp"
#include "pdfest/measurement.hpp"

namespace pdfest {

struct SolverConfig {
    double initial_step = 1.0;  // starting eta for each iteration's line search
    int max_halvings = 60;      // backtracking budget per iteration
    double grad_tol = 1e-8;     // stop when ||J'D||_inf < grad_tol * max(1, ||xi||_inf)
    int max_iters = 10000;
    double param_floor = 1e-6;  // keeps sigma strictly positive
    // The first trial step is additionally capped so that
    // ||eta*J'D||_inf <= rel_step_cap * max(||xi||_inf, param_floor).
    // Without the cap, a flat far-field V (it tends to a constant for large
    // sigma) lets an unlucky full Euler step tunnel across the valley onto
    // the plateau and strand the iterate there.
    double rel_step_cap = 0.5;
};

enum class Termination { GradientTol, MaxIters, StepFloor };

const char* termination_name(Termination t);

struct TracePoint {
    int iteration;
    ParamVector xi;
    double v;  // Lyapunov value 0.5*D'D at xi
};

struct EstimateResult {
    ParamVector xi_final;
    int iterations = 0;
    std::vector<TracePoint> trace;  // entry 0 is the start; V strictly decreases
    Termination termination = Termination::MaxIters;
};

struct ErrorDecomposition {
    std::vector<double> tangent;  // projection onto the column space of J
    std::vector<double> normal;   // residual orthogonal complement
};

// D = measured values - model vector at xi (element-wise).
std::vector<double> distance(const MeasurementVector& measurement, ModelKind model,
                             const ParamVector& xi);

// J'D: the flow's update direction and -grad of the Lyapunov value.
std::vector<double> tangent_force(const MeasurementVector& measurement, ModelKind model,
                                  const ParamVector& xi);

// 0.5 * D'D.
double lyapunov_value(const MeasurementVector& measurement, ModelKind model,
                      const ParamVector& xi);

// Discrete gradient flow xi <- xi + eta * J'D with backtracking on eta until
// the Lyapunov value strictly decreases and sigma stays above param_floor.
EstimateResult estimate(const MeasurementVector& measurement, ModelKind model,
                        const ParamVector& xi0, const SolverConfig& config = {});

// Orthogonal split of an error vector against the column space of J at xi.
// Throws std::runtime_error when J'J is rank-deficient (relative 1e-12).
ErrorDecomposition decompose_error(const std::vector<double>& error, ModelKind model,
                                   const SampleGrid& grid, const ParamVector& xi);

// Equilibrium residual for the Rayleigh flow at candidate xi against truth
// sigma0: integral over x of dP/dsigma(x; xi) * (P(x; sigma0) - P(x; xi)),
// by composite Simpson on [0, 8*max(xi, sigma0)]. Zero exactly at xi =
// sigma0; its sign drives xi toward sigma0.
double equilibrium_residual(double xi, double sigma0, int quad_points = 2000);

}  // namespace pdfest
