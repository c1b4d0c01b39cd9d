#pragma once

#include <map>
#include <vector>

#include "msim/record.hpp"
#include "msim/scenario.hpp"

namespace msim {

// ---------------------------------------------------------------------------
// stylized-fact diagnostics
//
// Return series are simple differences of the mid price sampled on a fixed
// grid over the measured session.  Samples taken before the first quote are
// dropped, together with the returns that would touch them; nothing is
// imputed.  One time unit is 0.1 s, so one second is 10 units and one hour
// is 36000.

constexpr double kUnitsPerSecond = 10.0;
constexpr double kUnitsPerHour = 36000.0;

struct ReturnSeries {
    double resolution = 10.0;      // sampling step, time units
    std::vector<double> returns;   // differences of consecutive samples
};

// samples the mid at t = 0, res, 2*res, ... <= span and differences them
ReturnSeries mid_returns(const RunLog& log, double resolution);

struct HistogramBin {
    double lo = 0.0;
    double hi = 0.0;
    long long count = 0;
};

// fixed-width histogram over mean +- 6 std (100 bins); observations beyond
// the plotted range land in the edge bins so counts always sum to n
struct ReturnHistogram {
    std::vector<HistogramBin> bins;
    double fit_mean = 0.0;         // moment fit: sample mean
    double fit_std = 0.0;          // moment fit: sqrt of the mean squared deviation
    double excess_kurtosis = 0.0;  // bias-corrected; 0 when degenerate
    bool degenerate = false;       // zero variance: kurtosis undefined
    long long n = 0;
};

// requires at least 100 returns
ReturnHistogram return_histogram(const ReturnSeries& series);

// standard biased-normalization sample autocorrelation for lags 0..max_lag;
// requires series.size() > max_lag.  acf[0] == 1 (and stays 1 for a
// zero-variance series, with every later lag 0)
std::vector<double> acf(const std::vector<double>& series, int max_lag);

struct ActivitySummary {
    double trades_per_hour = 0.0;  // one entry per matched pair, t in [0, span]
    double orders_per_hour = 0.0;  // submissions only (limit + market)
    std::map<int, double> class_orders_per_hour;
};

ActivitySummary activity_summary(const RunLog& log);

// the bundled per-run report: distributions at one second and one minute,
// autocorrelations of raw and absolute one-second returns, activity rate
struct StylizedReport {
    ReturnHistogram hist_1s;
    ReturnHistogram hist_1min;
    std::vector<double> acf_returns;
    std::vector<double> acf_abs_returns;
    double mean_acf_raw = 0.0;   // lags 1..50
    double mean_acf_abs = 0.0;
    double trades_per_hour = 0.0;
};

// requires a session long enough for 100 one-minute returns
StylizedReport stylized_report(const RunLog& log, int max_lag = 300);

}  // namespace msim
