#include "msim/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msim/rng.hpp"

namespace msim {

// ---------------------------------------------------------------------------
// names and modes

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "buy_ratio",          "cancel_ratio",     "n_trades",
        "market_ratio",       "creation_time_mean", "creation_time_std",
        "order_size_mean",    "order_size_std",   "total_volume",
        "trend_short",        "dtrend_short",     "trend_med",
        "dtrend_med",         "trend_long",       "dtrend_long",
        "fund_profit",        "fund_profit_long", "fund_profit_weighted",
    };
    return names;
}

const char* merge_mode_name(MergeMode m) {
    switch (m) {
        case MergeMode::None: return "none";
        case MergeMode::Half: return "half";
        case MergeMode::TwoThirds: return "two_thirds";
    }
    return "?";
}

std::optional<MergeMode> merge_mode_from(const std::string& name) {
    if (name == "none") return MergeMode::None;
    if (name == "half") return MergeMode::Half;
    if (name == "two_thirds") return MergeMode::TwoThirds;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// merge plan

MergePlan make_merge_plan(const Scenario& sc, MergeMode mode, uint64_t seed) {
    MergePlan plan;
    plan.mode = mode;
    plan.seed = seed;
    if (mode == MergeMode::None) return plan;

    std::vector<int> class_of = sc.class_of_agent();
    std::vector<int> strategic, noise;
    for (int a = 0; a < static_cast<int>(class_of.size()); ++a) {
        if (is_noise_class(class_of[a])) noise.push_back(a);
        else strategic.push_back(a);
    }
    size_t per = mode == MergeMode::Half ? 1 : 2;
    if (noise.size() < per * strategic.size())
        throw std::invalid_argument("not enough noise traders to merge");

    // Fisher-Yates with the project stream keeps the pairing identical
    // across library implementations
    RngStream rng(seed, 0xfeedu);
    for (size_t i = noise.size(); i > 1; --i) {
        size_t j = rng.uniform_index(i);
        std::swap(noise[i - 1], noise[j]);
    }
    size_t next = 0;
    for (int a : strategic) {
        MergeGroup g;
        g.primary = a;
        for (size_t k = 0; k < per; ++k) g.partners.push_back(noise[next++]);
        plan.groups.push_back(std::move(g));
    }
    return plan;
}

// ---------------------------------------------------------------------------
// mid lookup

std::optional<double> MidLookup::at(double t) const {
    const auto& v = *pts_;
    auto it = std::upper_bound(v.begin(), v.end(), t,
                               [](double x, const MidPoint& p) { return x < p.time; });
    if (it == v.begin()) return std::nullopt;
    return std::prev(it)->mid_ticks;
}

// ---------------------------------------------------------------------------
// extraction

namespace {

struct Accum {
    // submissions
    long long orders = 0, buys = 0, markets = 0;
    double size_sum = 0, size_sq = 0;
    // consecutive submission gaps over the (merged) stream
    double last_submit = 0;
    bool has_submit = false;
    long long gaps = 0;
    double gap_sum = 0, gap_sq = 0;
    // terminations and executions
    long long canceled_orders = 0;
    long long fills = 0;
    double volume = 0;
    // trend horizons
    std::array<double, 3> trend_sum{}, dtrend_sum{};
    std::array<long long, 3> trend_n{};
    // profit around regime changes
    double p_sum = 0, pl_sum = 0, pw_sum = 0, w_sum = 0;
    long long p_n = 0, pl_n = 0;
    bool any = false;
};

double pop_std(double sum, double sq, double n) {
    if (n <= 0) return 0.0;
    double m = sum / n;
    double v = sq / n - m * m;
    return v > 0 ? std::sqrt(v) : 0.0;
}

}  // namespace

std::vector<FeatureRow> extract_run_features(const RunLog& log,
                                             const Scenario& sc,
                                             const MergePlan& plan) {
    const std::vector<int> class_of = sc.class_of_agent();
    const int n_agents = static_cast<int>(class_of.size());

    // sample slots: owner[agent] = slot index, or -1 for agents that are
    // folded into no sample (cannot happen in practice: merges consume
    // partners, everyone else owns a slot)
    std::vector<int> owner(n_agents, -1);
    std::vector<FeatureRow> rows;
    if (plan.mode == MergeMode::None) {
        rows.resize(static_cast<size_t>(n_agents));
        for (int a = 0; a < n_agents; ++a) {
            owner[a] = a;
            rows[static_cast<size_t>(a)].agent = a;
            rows[static_cast<size_t>(a)].label = class_of[a];
        }
    } else {
        std::vector<bool> taken(n_agents, false);
        for (const auto& g : plan.groups) {
            int slot = static_cast<int>(rows.size());
            FeatureRow r;
            r.agent = g.primary;
            r.label = class_of[g.primary];
            rows.push_back(r);
            owner[g.primary] = slot;
            taken[static_cast<size_t>(g.primary)] = true;
            for (int p : g.partners) {
                owner[p] = slot;
                taken[static_cast<size_t>(p)] = true;
            }
        }
        if (plan.mode == MergeMode::Half) {
            // unmerged noise traders stay standalone samples
            for (int a = 0; a < n_agents; ++a) {
                if (taken[static_cast<size_t>(a)] || !is_noise_class(class_of[a]))
                    continue;
                int slot = static_cast<int>(rows.size());
                FeatureRow r;
                r.agent = a;
                r.label = class_of[a];
                rows.push_back(r);
                owner[a] = slot;
            }
        }
    }
    for (auto& r : rows) r.run = log.run_id;

    std::vector<Accum> acc(rows.size());
    MidLookup mids(log.mids);

    const std::array<double, 3> horizon = {10000.0, 20000.0, 40000.0};
    const double window_after = 20000.0;   // eligibility after a regime change
    const double fwd_short = 80000.0;
    const double fwd_long = 160000.0;

    for (const auto& rec : log.records) {
        if (rec.agent < 0 || rec.agent >= n_agents) continue;
        int slot = owner[rec.agent];
        if (slot < 0) continue;
        Accum& a = acc[static_cast<size_t>(slot)];
        a.any = true;

        if (rec.action == Action::Cancel || rec.action == Action::Expire) {
            // a termination row exists only for orders still open, so each
            // one is an order removed before full execution
            a.canceled_orders += 1;
            continue;
        }

        // submission row
        a.orders += 1;
        if (rec.side == Side::Bid) a.buys += 1;
        if (rec.action == Action::SubmitMarket) a.markets += 1;
        a.size_sum += static_cast<double>(rec.size);
        a.size_sq += static_cast<double>(rec.size) * static_cast<double>(rec.size);
        if (a.has_submit) {
            double gap = rec.time - a.last_submit;
            a.gaps += 1;
            a.gap_sum += gap;
            a.gap_sq += gap * gap;
        }
        a.has_submit = true;
        a.last_submit = rec.time;
        for (const auto& f : rec.fills) {
            a.fills += 1;
            a.volume += static_cast<double>(f.size);
        }

        // the mid the agent acted on; absent when the book had no two-sided
        // quote, in which case the trend and profit terms are skipped
        if (!rec.mid_ticks) continue;
        double p_now = *rec.mid_ticks;
        double dir = rec.side == Side::Bid ? 1.0 : -1.0;

        for (int h = 0; h < 3; ++h) {
            auto back = mids.at(rec.time - horizon[static_cast<size_t>(h)]);
            if (!back) continue;  // lookback precedes recorded data
            double d = p_now - *back;
            a.trend_sum[static_cast<size_t>(h)] += std::fabs(d);
            a.dtrend_sum[static_cast<size_t>(h)] += d * dir;
            a.trend_n[static_cast<size_t>(h)] += 1;
        }

        bool eligible = false;
        for (double bp : log.fundamental_breakpoints)
            if (rec.time > bp && rec.time <= bp + window_after) { eligible = true; break; }
        if (!eligible) continue;
        if (rec.time + fwd_short <= log.span) {
            auto fwd = mids.at(rec.time + fwd_short);
            if (fwd && p_now != 0.0) {
                double profit = (*fwd - p_now) / p_now * dir;
                a.p_sum += profit;
                a.p_n += 1;
                a.pw_sum += profit * static_cast<double>(rec.size);
                a.w_sum += static_cast<double>(rec.size);
            }
        }
        if (rec.time + fwd_long <= log.span) {
            auto fwd = mids.at(rec.time + fwd_long);
            if (fwd && p_now != 0.0) {
                a.pl_sum += (*fwd - p_now) / p_now * dir;
                a.pl_n += 1;
            }
        }
    }

    for (size_t i = 0; i < rows.size(); ++i) {
        const Accum& a = acc[i];
        FeatureRow& r = rows[i];
        if (!a.any) {
            r.empty_activity = true;
            continue;
        }
        double n = static_cast<double>(a.orders);
        auto& x = r.x;
        x[0] = a.orders ? static_cast<double>(a.buys) / n : 0.0;
        x[1] = a.orders ? static_cast<double>(a.canceled_orders) / n : 0.0;
        x[2] = static_cast<double>(a.fills);
        x[3] = a.orders ? static_cast<double>(a.markets) / n : 0.0;
        x[4] = a.gaps ? a.gap_sum / static_cast<double>(a.gaps) : 0.0;
        x[5] = pop_std(a.gap_sum, a.gap_sq, static_cast<double>(a.gaps));
        x[6] = a.orders ? a.size_sum / n : 0.0;
        x[7] = pop_std(a.size_sum, a.size_sq, n);
        x[8] = a.volume;
        for (int h = 0; h < 3; ++h) {
            double tn = static_cast<double>(a.trend_n[static_cast<size_t>(h)]);
            x[9 + 2 * h] = tn > 0 ? a.trend_sum[static_cast<size_t>(h)] / tn : 0.0;
            x[10 + 2 * h] = tn > 0 ? a.dtrend_sum[static_cast<size_t>(h)] / tn : 0.0;
        }
        x[15] = a.p_n ? a.p_sum / static_cast<double>(a.p_n) : 0.0;
        x[16] = a.pl_n ? a.pl_sum / static_cast<double>(a.pl_n) : 0.0;
        x[17] = a.w_sum > 0 ? a.pw_sum / a.w_sum : 0.0;
    }
    return rows;
}

// ---------------------------------------------------------------------------
// splitting

SplitIndices stratified_split(const Dataset& ds, double f_train, double f_val,
                              double f_test, uint64_t seed) {
    if (std::fabs(f_train + f_val + f_test - 1.0) > 1e-9)
        throw std::invalid_argument("split fractions must sum to 1");

    // group rows by label, keeping label order deterministic
    std::vector<int> labels;
    std::vector<std::vector<size_t>> by_class;
    for (size_t i = 0; i < ds.rows.size(); ++i) {
        int lb = ds.rows[i].label;
        auto it = std::find(labels.begin(), labels.end(), lb);
        size_t k;
        if (it == labels.end()) {
            labels.push_back(lb);
            by_class.emplace_back();
            k = labels.size() - 1;
        } else {
            k = static_cast<size_t>(it - labels.begin());
        }
        by_class[k].push_back(i);
    }
    // shuffle within class in ascending label order
    std::vector<size_t> order(labels.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return labels[a] < labels[b]; });

    SplitIndices out;
    RngStream rng(seed, 0x5917u);
    for (size_t k : order) {
        auto& rows = by_class[k];
        if (rows.size() < 3)
            throw std::invalid_argument("class too small to split");
        for (size_t i = rows.size(); i > 1; --i) {
            size_t j = rng.uniform_index(i);
            std::swap(rows[i - 1], rows[j]);
        }
        size_t n = rows.size();
        size_t n_tr = static_cast<size_t>(std::llround(f_train * static_cast<double>(n)));
        size_t n_va = static_cast<size_t>(std::llround(f_val * static_cast<double>(n)));
        if (n_tr + n_va > n) n_va = n - n_tr;
        for (size_t i = 0; i < n; ++i) {
            if (i < n_tr) out.train.push_back(rows[i]);
            else if (i < n_tr + n_va) out.val.push_back(rows[i]);
            else out.test.push_back(rows[i]);
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

// ---------------------------------------------------------------------------
// scaling

void Scaler::fit(const Dataset& ds, const std::vector<size_t>& rows, int n_features) {
    if (rows.empty()) throw std::invalid_argument("cannot fit scaler on empty set");
    n_ = n_features;
    mean_.assign(static_cast<size_t>(n_), 0.0);
    std_.assign(static_cast<size_t>(n_), 0.0);
    double n = static_cast<double>(rows.size());
    for (size_t r : rows)
        for (int f = 0; f < n_; ++f)
            mean_[static_cast<size_t>(f)] += ds.rows[r].x[static_cast<size_t>(f)];
    for (int f = 0; f < n_; ++f) mean_[static_cast<size_t>(f)] /= n;
    for (size_t r : rows)
        for (int f = 0; f < n_; ++f) {
            double d = ds.rows[r].x[static_cast<size_t>(f)] - mean_[static_cast<size_t>(f)];
            std_[static_cast<size_t>(f)] += d * d;
        }
    for (int f = 0; f < n_; ++f) {
        double v = std_[static_cast<size_t>(f)] / n;
        std_[static_cast<size_t>(f)] = v > 0 ? std::sqrt(v) : 0.0;
    }
}

void Scaler::transform(std::array<double, kFeatureCount>& x) const {
    for (int f = 0; f < n_; ++f) {
        size_t i = static_cast<size_t>(f);
        x[i] = (x[i] - mean_[i]) / (std_[i] > 0 ? std_[i] : 1.0);
    }
}

void Scaler::inverse(std::array<double, kFeatureCount>& x) const {
    for (int f = 0; f < n_; ++f) {
        size_t i = static_cast<size_t>(f);
        x[i] = x[i] * (std_[i] > 0 ? std_[i] : 1.0) + mean_[i];
    }
}

void Scaler::apply(Dataset& ds) const {
    for (auto& r : ds.rows) transform(r.x);
}

void Scaler::set(std::vector<double> mean, std::vector<double> std) {
    n_ = static_cast<int>(mean.size());
    mean_ = std::move(mean);
    std_ = std::move(std);
}

}  // namespace msim
