#include "pdfest/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pdfest {

SampleGrid build_grid(const std::vector<double>& samples, const GridPolicy& policy,
                      ModelKind model) {
    if (policy.n_bins < 2) throw std::invalid_argument("build_grid: n_bins must be >= 2");

    double lo = 0.0, hi = 0.0;
    switch (policy.rule) {
        case RangeRule::DataMax: {
            if (samples.size() < 2) throw std::invalid_argument("build_grid: need >= 2 samples");
            lo = 0.0;
            hi = *std::max_element(samples.begin(), samples.end());
            break;
        }
        case RangeRule::DataMinMax: {
            if (samples.size() < 2) throw std::invalid_argument("build_grid: need >= 2 samples");
            const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
            lo = *mn;
            hi = *mx;
            break;
        }
        case RangeRule::Fixed:
            lo = policy.lo;
            hi = policy.hi;
            break;
    }
    if (!(hi > lo)) throw std::invalid_argument("build_grid: degenerate range (hi <= lo)");
    if (model != ModelKind::NormalZeroMean && lo < 0.0)
        throw std::invalid_argument("build_grid: negative range for a one-sided model");

    const int n = policy.n_bins;
    const double width = (hi - lo) / n;
    SampleGrid grid;
    grid.points.resize(n);
    grid.widths.assign(n, width);
    for (int i = 0; i < n; ++i) grid.points[i] = lo + (i + 0.5) * width;
    return grid;
}

MeasurementVector histogram_density(const std::vector<double>& samples, const SampleGrid& grid) {
    validate_grid(grid);
    if (samples.empty()) throw std::invalid_argument("histogram_density: empty record");

    const std::size_t n = grid.size();
    // Reconstruct the edges; bins are [edge_i, edge_{i+1}), the last closed.
    std::vector<double> edges(n + 1);
    for (std::size_t i = 0; i < n; ++i) edges[i] = grid.points[i] - grid.widths[i] / 2.0;
    edges[n] = grid.points[n - 1] + grid.widths[n - 1] / 2.0;

    std::vector<std::size_t> counts(n, 0);
    std::size_t dropped = 0;
    for (double x : samples) {
        if (x < edges.front() || x > edges.back()) {
            ++dropped;
            continue;
        }
        if (x == edges.back()) {
            ++counts[n - 1];
            continue;
        }
        const auto it = std::upper_bound(edges.begin(), edges.end(), x);
        counts[static_cast<std::size_t>(it - edges.begin()) - 1]++;
    }

    MeasurementVector m;
    m.grid = grid;
    m.record_size = samples.size();
    m.dropped = dropped;
    m.values.resize(n);
    const double k = static_cast<double>(samples.size());
    for (std::size_t i = 0; i < n; ++i)
        m.values[i] = static_cast<double>(counts[i]) / (k * grid.widths[i]);
    return m;
}

}  // namespace pdfest
