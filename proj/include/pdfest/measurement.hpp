#pragma once

#include <cstddef>
#include <vector>

#include "pdfest/distributions.hpp"

namespace pdfest {

// Histogram-derived density estimate on a grid. values_i is the bin count
// divided by K * bin width, so the values integrate to kept/K over the grid.
struct MeasurementVector {
    SampleGrid grid;
    std::vector<double> values;
    std::size_t record_size = 0;  // K, the full record size
    std::size_t dropped = 0;      // samples outside the binned range
};

enum class RangeRule { DataMax, DataMinMax, Fixed };

struct GridPolicy {
    int n_bins = 15;
    RangeRule rule = RangeRule::DataMax;
    double lo = 0.0;  // Fixed only
    double hi = 0.0;  // Fixed only

    static GridPolicy data_max(int n) { return {n, RangeRule::DataMax, 0.0, 0.0}; }
    static GridPolicy data_min_max(int n) { return {n, RangeRule::DataMinMax, 0.0, 0.0}; }
    static GridPolicy fixed(int n, double lo, double hi) { return {n, RangeRule::Fixed, lo, hi}; }
};

// N equal-width bins over the policy range; grid points are the bin centers.
// DataMax covers [0, max sample] (one-sided), DataMinMax [min, max sample].
// Throws std::invalid_argument on a degenerate range (hi <= lo).
SampleGrid build_grid(const std::vector<double>& samples, const GridPolicy& policy,
                      ModelKind model);

// Bin edges are center +/- width/2, half-open except the last bin whose right
// edge is inclusive. Out-of-range samples are dropped and counted in
// `dropped`, never clamped.
MeasurementVector histogram_density(const std::vector<double>& samples, const SampleGrid& grid);

}  // namespace pdfest
