#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pdfest/distributions.hpp"
#include "pdfest/measurement.hpp"

using namespace pdfest;

TEST_CASE("build_grid data_max") {
    const std::vector<double> samples{0.4, 1.1, 3.0, 0.2};
    const auto g = build_grid(samples, GridPolicy::data_max(15), ModelKind::Rayleigh);
    REQUIRE(g.size() == 15);
    for (std::size_t k = 0; k < 15; ++k) {
        CHECK(g.points[k] == doctest::Approx((k + 0.5) * 0.2).epsilon(1e-12));
        CHECK(g.widths[k] == doctest::Approx(0.2).epsilon(1e-12));
    }
}

TEST_CASE("build_grid fixed") {
    const auto g = build_grid({}, GridPolicy::fixed(2, 0.0, 1.0), ModelKind::Rayleigh);
    REQUIRE(g.size() == 2);
    CHECK(g.points[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(g.points[1] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(g.widths[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("build_grid data_min_max") {
    const std::vector<double> samples{1.0, 2.0, 5.0};
    const auto g = build_grid(samples, GridPolicy::data_min_max(4), ModelKind::Rayleigh);
    REQUIRE(g.size() == 4);
    CHECK(g.points.front() == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(g.points.back() == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("build_grid rejects degenerate input") {
    // All-equal samples collapse the [min, max] window; all-zero samples
    // collapse the one-sided [0, max] window.
    CHECK_THROWS_AS(build_grid({2.0, 2.0, 2.0}, GridPolicy::data_min_max(15), ModelKind::Rayleigh),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid({0.0, 0.0}, GridPolicy::data_max(15), ModelKind::Rayleigh),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid({1.0}, GridPolicy::data_max(15), ModelKind::Rayleigh),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid({}, GridPolicy::fixed(15, 1.0, 1.0), ModelKind::Rayleigh),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_grid({1.0, 2.0}, GridPolicy::data_max(1), ModelKind::Rayleigh),
                    std::invalid_argument);
    // One-sided support models reject windows reaching below zero.
    CHECK_THROWS_AS(build_grid({}, GridPolicy::fixed(15, -1.0, 1.0), ModelKind::Rayleigh),
                    std::invalid_argument);
    CHECK_NOTHROW(build_grid({}, GridPolicy::fixed(15, -1.0, 1.0), ModelKind::NormalZeroMean));
}

TEST_CASE("histogram_density concentrated record") {
    const auto g = build_grid({}, GridPolicy::fixed(2, 0.0, 2.0), ModelKind::Rayleigh);
    const std::vector<double> samples{1.2, 1.3, 1.5, 2.0};
    const auto m = histogram_density(samples, g);
    REQUIRE(m.values.size() == 2);
    CHECK(m.values[0] == 0.0);
    CHECK(m.values[1] == doctest::Approx(1.0).epsilon(1e-12));  // 4/(4*1.0) = 1/width
    CHECK(m.record_size == 4);
    CHECK(m.dropped == 0);
}

TEST_CASE("histogram_density two bins worked example") {
    const auto g = build_grid({}, GridPolicy::fixed(2, 0.0, 1.0), ModelKind::Rayleigh);
    const auto m = histogram_density({0.1, 0.1, 0.6, 0.9}, g);
    REQUIRE(m.values.size() == 2);
    CHECK(m.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.values[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("histogram edge conventions") {
    const auto g = build_grid({}, GridPolicy::fixed(2, 0.0, 1.0), ModelKind::Rayleigh);
    // Right edge of the last bin is inclusive; outside points are dropped.
    const auto m = histogram_density({1.0, 0.5, 1.0000001, -0.1}, g);
    CHECK(m.values[1] == doctest::Approx(2.0 / (4 * 0.5)).epsilon(1e-12));
    CHECK(m.dropped == 2);
    CHECK(m.record_size == 4);
    // Interior boundary point goes to the upper bin (half-open convention).
    const auto mb = histogram_density({0.5}, g);
    CHECK(mb.values[0] == 0.0);
    CHECK(mb.values[1] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("histogram mass conservation") {
    const auto samples = sample(ModelKind::Rayleigh, {1.0}, 5000, 31);
    const auto g = build_grid(samples, GridPolicy::data_min_max(15), ModelKind::Rayleigh);
    const auto m = histogram_density(samples, g);
    double mass = 0.0;
    for (std::size_t i = 0; i < m.values.size(); ++i) mass += m.values[i] * m.grid.widths[i];
    const double kept = static_cast<double>(m.record_size - m.dropped);
    CHECK(mass == doctest::Approx(kept / m.record_size).epsilon(1e-12));

    const auto gf = build_grid({}, GridPolicy::fixed(15, 0.0, 2.0), ModelKind::Rayleigh);
    const auto mf = histogram_density(samples, gf);
    CHECK(mf.dropped > 0);  // Rayleigh(1) mass beyond 2.0 is ~13%
    double massf = 0.0;
    for (std::size_t i = 0; i < mf.values.size(); ++i) massf += mf.values[i] * mf.grid.widths[i];
    CHECK(massf ==
          doctest::Approx((mf.record_size - mf.dropped) / double(mf.record_size)).epsilon(1e-12));
}

TEST_CASE("histogram consistency at large K") {
    const auto samples = sample(ModelKind::Rayleigh, {1.0}, 1000000, 77);
    const auto g = build_grid(samples, GridPolicy::data_max(15), ModelKind::Rayleigh);
    const auto m = histogram_density(samples, g);
    const auto truth = model_vector(ModelKind::Rayleigh, g, {1.0});
    double worst = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        worst = std::max(worst, std::abs(m.values[i] - truth[i]));
    CHECK(worst < 0.02);
}

TEST_CASE("histogram noise shrinks with record size") {
    const auto g = build_grid({}, GridPolicy::fixed(15, 0.0, 4.0), ModelKind::Rayleigh);
    auto bin_variance = [&](int record_size) {
        std::vector<double> vals;
        for (int s = 0; s < 200; ++s) {
            const auto rec = sample(ModelKind::Rayleigh, {1.0}, record_size, 1000 + s);
            vals.push_back(histogram_density(rec, g).values[3]);
        }
        double mean = 0.0;
        for (double v : vals) mean += v;
        mean /= vals.size();
        double var = 0.0;
        for (double v : vals) var += (v - mean) * (v - mean);
        return var / (vals.size() - 1);
    };
    CHECK(bin_variance(50) > bin_variance(500));
}

TEST_CASE("histogram determinism") {
    const auto samples = sample(ModelKind::Rayleigh, {2.0}, 300, 5);
    const auto g = build_grid(samples, GridPolicy::data_min_max(15), ModelKind::Rayleigh);
    const auto a = histogram_density(samples, g);
    const auto b = histogram_density(samples, g);
    CHECK(a.values == b.values);
    CHECK(a.grid.points == b.grid.points);
    CHECK(a.dropped == b.dropped);
}
