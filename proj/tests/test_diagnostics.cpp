#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "msim/diagnostics.hpp"
#include "msim/rng.hpp"
#include "msim/scenario.hpp"

using namespace msim;

TEST_CASE("autocorrelation matches a hand computation") {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0};
    std::vector<double> r = acf(x, 3);
    REQUIRE(r.size() == 4);
    CHECK(r[0] == doctest::Approx(1.0));
    CHECK(r[1] == doctest::Approx(0.25));
    CHECK(r[2] == doctest::Approx(-0.3));
    CHECK(r[3] == doctest::Approx(-0.45));
}

TEST_CASE("autocorrelation basics hold on arbitrary series") {
    RngStream rng(2026, 501);
    std::vector<double> x;
    for (int i = 0; i < 2000; ++i) x.push_back(rng.normal(0.0, 1.0) + 0.3 * i);
    std::vector<double> r = acf(x, 30);
    CHECK(r[0] == 1.0);
    for (double v : r) {
        CHECK(v <= 1.0 + 1e-12);
        CHECK(v >= -1.0 - 1e-12);
    }
}

TEST_CASE("white noise shows no structure") {
    RngStream rng(2026, 502);
    std::vector<double> x;
    for (int i = 0; i < 10000; ++i) x.push_back(rng.normal(0.0, 1.0));
    std::vector<double> r = acf(x, 20);
    double bound = 3.0 / std::sqrt(10000.0);
    for (size_t k = 1; k < r.size(); ++k) {
        CAPTURE(k);
        CHECK(std::fabs(r[k]) < bound);
    }
}

TEST_CASE("degenerate series are flagged, not crashed") {
    std::vector<double> flat(200, 4.0);
    std::vector<double> r = acf(flat, 10);
    CHECK(r[0] == 1.0);
    for (size_t k = 1; k < r.size(); ++k) CHECK(r[k] == 0.0);

    ReturnSeries series{10.0, flat};
    ReturnHistogram h = return_histogram(series);
    CHECK(h.degenerate);
    CHECK(h.excess_kurtosis == 0.0);
    CHECK(h.fit_mean == doctest::Approx(4.0));
    long long total = 0;
    for (const auto& b : h.bins) total += b.count;
    CHECK(total == 200);
}

TEST_CASE("gaussian input fits its own moments with no excess kurtosis") {
    RngStream rng(2026, 503);
    ReturnSeries series;
    for (int i = 0; i < 100000; ++i) series.returns.push_back(rng.normal(0.0, 1.0));
    ReturnHistogram h = return_histogram(series);
    CHECK(!h.degenerate);
    CHECK(std::fabs(h.excess_kurtosis) < 0.1);
    CHECK(std::fabs(h.fit_mean) < 0.02);
    CHECK(h.fit_std == doctest::Approx(1.0).epsilon(0.02));
    CHECK(h.bins.size() == 100);
    long long total = 0;
    for (const auto& b : h.bins) total += b.count;
    CHECK(total == h.n);
    CHECK(h.bins.front().lo == doctest::Approx(h.fit_mean - 6.0 * h.fit_std));
    CHECK(h.bins.back().hi == doctest::Approx(h.fit_mean + 6.0 * h.fit_std));
}

TEST_CASE("heavy-tailed input shows positive excess kurtosis") {
    RngStream rng(2026, 504);
    ReturnSeries series;
    for (int i = 0; i < 100000; ++i) {
        double u = rng.uniform() - 0.5;  // Laplace via inverse CDF
        double s = u < 0.0 ? -1.0 : 1.0;
        series.returns.push_back(-s * std::log(1.0 - 2.0 * std::fabs(u)));
    }
    ReturnHistogram h = return_histogram(series);
    CHECK(h.excess_kurtosis > 1.5);  // Laplace target is 3
}

TEST_CASE("preconditions are enforced") {
    ReturnSeries tiny{10.0, std::vector<double>(99, 0.0)};
    CHECK_THROWS_AS(return_histogram(tiny), std::invalid_argument);
    std::vector<double> x(10, 1.0);
    CHECK_THROWS_AS(acf(x, 10), std::invalid_argument);
    CHECK_THROWS_AS(acf(x, -1), std::invalid_argument);
}

TEST_CASE("mid sampling differences the grid and drops leading gaps") {
    RunLog log;
    log.span = 40.0;
    SUBCASE("full coverage") {
        log.mids = {{0.0, 100.0}, {15.0, 102.0}, {25.0, 101.0}};
        ReturnSeries r = mid_returns(log, 10.0);
        REQUIRE(r.returns.size() == 4);
        CHECK(r.returns[0] == doctest::Approx(0.0));
        CHECK(r.returns[1] == doctest::Approx(2.0));
        CHECK(r.returns[2] == doctest::Approx(-1.0));
        CHECK(r.returns[3] == doctest::Approx(0.0));
    }
    SUBCASE("quotes start mid-session") {
        log.mids = {{12.0, 102.0}, {25.0, 101.0}};
        ReturnSeries r = mid_returns(log, 10.0);
        REQUIRE(r.returns.size() == 2);
        CHECK(r.returns[0] == doctest::Approx(-1.0));
        CHECK(r.returns[1] == doctest::Approx(0.0));
    }
}

TEST_CASE("activity summary counts only the measured session") {
    RunLog log;
    SUBCASE("empty log yields zero rates") {
        log.span = 36000.0;
        ActivitySummary s = activity_summary(log);
        CHECK(s.trades_per_hour == 0.0);
        CHECK(s.orders_per_hour == 0.0);
        CHECK(s.class_orders_per_hour.empty());
    }
    SUBCASE("hand-built hour of activity") {
        log.span = 36000.0;  // exactly one hour
        log.trades = {{-5.0, 10000, 1}, {10.0, 10000, 2}, {20.0, 10001, 1}};
        auto rec = [&](double t, int cls, Action a) {
            EventLogRecord r;
            r.time = t;
            r.class_id = cls;
            r.action = a;
            log.records.push_back(r);
        };
        rec(-3.0, 1, Action::SubmitLimit);   // warm-up: excluded
        rec(5.0, 1, Action::SubmitLimit);
        rec(6.0, 2, Action::SubmitMarket);
        rec(7.0, 2, Action::Cancel);         // not a submission
        rec(8.0, 2, Action::Expire);         // not a submission
        ActivitySummary s = activity_summary(log);
        CHECK(s.trades_per_hour == doctest::Approx(2.0));
        CHECK(s.orders_per_hour == doctest::Approx(2.0));
        CHECK(s.class_orders_per_hour.at(1) == doctest::Approx(1.0));
        CHECK(s.class_orders_per_hour.at(2) == doctest::Approx(1.0));
    }
}

TEST_CASE("simulated sessions keep stable per-hour rates as the span doubles") {
    RunLog base = run_one(canonical_scenario(144000.0), 7, 0);
    RunLog twice = run_one(canonical_scenario(288000.0), 7, 0);
    ActivitySummary a = activity_summary(base);
    ActivitySummary b = activity_summary(twice);
    CHECK(a.trades_per_hour > 0.0);
    CHECK(std::fabs(a.trades_per_hour - b.trades_per_hour) <
          0.10 * a.trades_per_hour);
    CHECK(std::fabs(a.orders_per_hour - b.orders_per_hour) <
          0.10 * a.orders_per_hour);
}

TEST_CASE("the bundled report is coherent on a simulated session") {
    RunLog log = run_one(canonical_scenario(144000.0), 11, 0);
    StylizedReport rep = stylized_report(log);
    CHECK(rep.acf_returns[0] == 1.0);
    CHECK(rep.acf_abs_returns[0] == 1.0);
    CHECK(rep.acf_returns.size() == 301);
    long long total_1s = 0;
    for (const auto& b : rep.hist_1s.bins) total_1s += b.count;
    CHECK(total_1s == rep.hist_1s.n);
    CHECK(rep.hist_1min.n >= 100);
    CHECK(rep.trades_per_hour > 999.0);
    CHECK(!rep.hist_1s.degenerate);
    CHECK(!rep.hist_1min.degenerate);
}
