#include "msim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msim {

ReturnSeries mid_returns(const RunLog& log, double resolution) {
    if (resolution <= 0.0) throw std::invalid_argument("mid_returns: bad resolution");
    ReturnSeries out;
    out.resolution = resolution;
    std::optional<double> prev;
    for (double t = 0.0; t <= log.span + 1e-9; t += resolution) {
        std::optional<double> cur = log.mid_at(t);
        if (prev && cur) out.returns.push_back(*cur - *prev);
        prev = cur;
    }
    return out;
}

ReturnHistogram return_histogram(const ReturnSeries& series) {
    const std::vector<double>& r = series.returns;
    if (r.size() < 100)
        throw std::invalid_argument("return_histogram: need at least 100 returns");
    ReturnHistogram out;
    out.n = static_cast<long long>(r.size());
    double n = static_cast<double>(r.size());

    double mean = 0.0;
    for (double v : r) mean += v;
    mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double v : r) {
        double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    out.fit_mean = mean;
    out.fit_std = std::sqrt(m2);
    if (m2 <= 0.0) {
        out.degenerate = true;
    } else {
        // bias-corrected excess kurtosis
        double g2 = m4 / (m2 * m2) - 3.0;
        out.excess_kurtosis =
            (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0);
    }

    constexpr int kBins = 100;
    double half = out.degenerate ? 1.0 : 6.0 * out.fit_std;
    double lo = mean - half, hi = mean + half;
    double width = (hi - lo) / kBins;
    out.bins.resize(kBins);
    for (int b = 0; b < kBins; ++b) {
        out.bins[static_cast<size_t>(b)].lo = lo + b * width;
        out.bins[static_cast<size_t>(b)].hi = lo + (b + 1) * width;
    }
    for (double v : r) {
        int b = static_cast<int>(std::floor((v - lo) / width));
        b = std::clamp(b, 0, kBins - 1);  // tails fold into the edge bins
        ++out.bins[static_cast<size_t>(b)].count;
    }
    return out;
}

std::vector<double> acf(const std::vector<double>& series, int max_lag) {
    if (max_lag < 0) throw std::invalid_argument("acf: negative lag");
    if (series.size() <= static_cast<size_t>(max_lag))
        throw std::invalid_argument("acf: series shorter than the lag range");
    const size_t n = series.size();
    double mean = 0.0;
    for (double v : series) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : series) denom += (v - mean) * (v - mean);

    std::vector<double> out(static_cast<size_t>(max_lag) + 1, 0.0);
    out[0] = 1.0;
    if (denom <= 0.0) return out;  // constant series
    for (int k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (size_t t = 0; t + static_cast<size_t>(k) < n; ++t)
            num += (series[t] - mean) * (series[t + static_cast<size_t>(k)] - mean);
        out[static_cast<size_t>(k)] = num / denom;
    }
    return out;
}

ActivitySummary activity_summary(const RunLog& log) {
    ActivitySummary out;
    if (log.span <= 0.0) return out;
    double hours = log.span / kUnitsPerHour;

    long long trades = 0;
    for (const Trade& t : log.trades)
        if (t.time >= 0.0 && t.time <= log.span) ++trades;
    out.trades_per_hour = static_cast<double>(trades) / hours;

    std::map<int, long long> per_class;
    long long orders = 0;
    for (const EventLogRecord& rec : log.records) {
        if (rec.time < 0.0 || rec.time > log.span) continue;
        if (rec.action != Action::SubmitLimit && rec.action != Action::SubmitMarket)
            continue;
        ++orders;
        ++per_class[rec.class_id];
    }
    out.orders_per_hour = static_cast<double>(orders) / hours;
    for (const auto& [cls, cnt] : per_class)
        out.class_orders_per_hour[cls] = static_cast<double>(cnt) / hours;
    return out;
}

StylizedReport stylized_report(const RunLog& log, int max_lag) {
    StylizedReport out;
    ReturnSeries sec = mid_returns(log, kUnitsPerSecond);
    ReturnSeries min = mid_returns(log, 60.0 * kUnitsPerSecond);
    out.hist_1s = return_histogram(sec);
    out.hist_1min = return_histogram(min);

    out.acf_returns = acf(sec.returns, max_lag);
    std::vector<double> abs_r(sec.returns.size());
    for (size_t i = 0; i < abs_r.size(); ++i) abs_r[i] = std::fabs(sec.returns[i]);
    out.acf_abs_returns = acf(abs_r, max_lag);

    int hi = std::min(max_lag, 50);
    for (int k = 1; k <= hi; ++k) {
        out.mean_acf_raw += out.acf_returns[static_cast<size_t>(k)];
        out.mean_acf_abs += out.acf_abs_returns[static_cast<size_t>(k)];
    }
    out.mean_acf_raw /= static_cast<double>(hi);
    out.mean_acf_abs /= static_cast<double>(hi);

    out.trades_per_hour = activity_summary(log).trades_per_hour;
    return out;
}

}  // namespace msim
