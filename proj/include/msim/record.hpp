#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "msim/book.hpp"

namespace msim {

enum class Action : unsigned char { SubmitLimit, SubmitMarket, Cancel, Expire };

inline const char* action_name(Action a) {
    switch (a) {
        case Action::SubmitLimit: return "limit";
        case Action::SubmitMarket: return "market";
        case Action::Cancel: return "cancel";
        case Action::Expire: return "expire";
    }
    return "?";
}

struct RecFill {
    Ticks price = 0;
    long long size = 0;
};

// One row of the activity log.  Submission rows accumulate every execution
// of their order over its lifetime (immediate fills and later passive ones);
// cancel/expire rows carry the size that was still open when removed.
struct EventLogRecord {
    double time = 0.0;
    AgentId agent = 0;
    int class_id = 0;
    Action action = Action::SubmitLimit;
    Side side = Side::Bid;
    std::optional<Ticks> price;      // empty for market orders
    long long size = 0;
    std::vector<RecFill> fills;
    std::optional<double> mid_ticks; // mid quote observed just before acting
    OrderId order_id = 0;
};

struct Trade {
    double time = 0.0;
    Ticks price = 0;
    long long size = 0;
};

struct QuotePoint {
    double time = 0.0;
    std::optional<Ticks> bid;
    std::optional<Ticks> ask;
};

struct MidPoint {
    double time = 0.0;
    double mid_ticks = 0.0;
};

// Full trace of one simulated run.  Times are negative during the warm-up
// phase; the measured session spans [0, span].
class RunLog {
public:
    int run_id = 0;
    uint64_t seed = 0;
    double span = 0.0;
    double burn_in = 0.0;
    std::vector<double> fundamental_breakpoints;  // regime-change times

    std::vector<EventLogRecord> records;
    std::vector<QuotePoint> quotes;   // one point per top-of-book change
    std::vector<MidPoint> mids;       // last-known mid, recorded when it moves
    std::vector<Trade> trades;        // one entry per match

    long long skipped_actions = 0;    // wakeups that could not act (thin book)
    long long discarded_volume = 0;   // market-order volume with no liquidity

    size_t add_record(EventLogRecord rec) {
        size_t idx = records.size();
        by_order_[rec.order_id] = idx;
        records.push_back(std::move(rec));
        return idx;
    }

    void attach_fills(const std::vector<Fill>& fills, size_t taker_idx) {
        for (const Fill& f : fills) {
            records[taker_idx].fills.push_back(RecFill{f.price, f.size});
            auto it = by_order_.find(f.maker_id);
            if (it != by_order_.end())
                records[it->second].fills.push_back(RecFill{f.price, f.size});
            trades.push_back(Trade{f.time, f.price, f.size});
        }
    }

    void note_quotes(const BookSnapshot& top) {
        if (!quotes.empty() && quotes.back().bid == top.bid && quotes.back().ask == top.ask)
            return;
        quotes.push_back(QuotePoint{top.time, top.bid, top.ask});
        if (auto mid = top.mid_ticks()) {
            if (mids.empty() || mids.back().mid_ticks != *mid)
                mids.push_back(MidPoint{top.time, *mid});
        }
    }

    // last known mid at or before t
    std::optional<double> mid_at(double t) const {
        if (mids.empty() || mids.front().time > t) return std::nullopt;
        size_t lo = 0, hi = mids.size();
        while (hi - lo > 1) {
            size_t m = (lo + hi) / 2;
            if (mids[m].time <= t) lo = m; else hi = m;
        }
        return mids[lo].mid_ticks;
    }

    std::optional<double> earliest_mid() const {
        if (mids.empty()) return std::nullopt;
        return mids.front().mid_ticks;
    }

    // mid sampled at k * resolution for k = ceil(from/res) .. floor(to/res);
    // sample times before the first quote are omitted
    std::vector<MidPoint> mid_series(double resolution, double from, double to) const;

private:
    std::unordered_map<OrderId, size_t> by_order_;
};

}  // namespace msim
