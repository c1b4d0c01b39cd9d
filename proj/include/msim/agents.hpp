#pragma once

#include <deque>
#include <vector>

#include "msim/kernel.hpp"

namespace msim {

// All waiting-time parameters are mean inter-event times (drawn
// exponentially); all price offsets are kept in ticks so that boundary
// comparisons against integer quotes stay exact.

struct MakerParams {
    double update_mean = 3000.0;   // mean time between ladder refreshes
    int ladder_rungs = 5;          // K: rungs beyond the touch, per side
    Ticks rung_step = 25;          // tick distance between rungs
    long long order_size = 5;
};

struct TakerParams {
    double arrival_mean = 30000.0;  // mean wait between large orders
    double exit_mean = 2000.0;      // target time to work one large order
    double exit_std = 200.0;
    long long large_size = 100;
    double chunk_mean = 5.0;
    double chunk_std = 1.5;
};

struct TrendParams {
    double weight = 1.0;           // >0 follows its signal, <0 fades it
    double limit_mean = 20000.0;   // mean wait between limit-order looks
    double market_mean = 10000.0;  // mean wait between market-order looks
    double noise_std_ticks = 10.0; // expectation noise, in ticks
    double horizon = 10000.0;      // lookback / order lifetime
    double size_mean = 5.0;
    double size_std = 1.5;
};

struct NoiseParams {
    double limit_mean = 20000.0;
    double market_mean = 10000.0;
    double cancel_mean = 60000.0;
    double price_std_ticks = 100.0;  // limit-price scatter around the mid
    double size_mean = 5.0;
    double size_std = 1.5;
    // warm-up quoting pace.  A live session rests on a thick layer of stale
    // noise quotes that would otherwise take hours to accumulate, so during
    // warm-up the limit channel runs at this faster clock (around the
    // reference price) while the market/cancel channels stay idle.  0 turns
    // the warm-up channel off.
    double warmup_limit_mean = 150.0;
    // scatter of the warm-up quotes.  Much wider than the in-session scatter
    // on purpose: it lays a thin floor of standing depth across the whole
    // range the price may visit instead of a dense wall that would pin it.
    double warmup_price_std_ticks = 550.0;
};

// Step function the fundamentalists trade toward.  Right-continuous: the
// value at a breakpoint is the new regime's value.
struct FundamentalSchedule {
    double initial_value = 100.0;       // currency, before the first breakpoint
    std::vector<double> times;          // ascending
    std::vector<double> values;         // value from times[i] (inclusive) on
    double span = 720000.0;

    double value_at(double t) const;    // pre: 0 < t <= span
    double ticks_at(double t) const { return value_at(t) * 100.0; }
};

// --------------------------------------------------------------------------

// Quotes a symmetric ladder around the touch: cancels everything it has,
// reads the (possibly changed) best quotes, then posts rungs at a, a+q, ...,
// a+Kq and b, b-q, ..., b-Kq.  A side with no quote left is skipped.
class MarketMaker : public Trader {
public:
    MarketMaker(AgentId id, int class_id, uint64_t run_seed, const MakerParams& p)
        : Trader(id, class_id, run_seed), p_(p) {}
    void start(Simulation& sim) override;
    void on_wakeup(Simulation& sim, int tag) override;

private:
    MakerParams p_;
};

// Executes large orders in market-order chunks spread over a drawn exit
// window, then goes quiet until the next large order arrives.
class MarketTaker : public Trader {
public:
    MarketTaker(AgentId id, int class_id, uint64_t run_seed, const TakerParams& p)
        : Trader(id, class_id, run_seed), p_(p) {}
    void start(Simulation& sim) override;
    void on_wakeup(Simulation& sim, int tag) override;

    // chunk plan for one large order; exposed for direct testing
    struct ChunkPlan {
        Side side;
        std::vector<double> delays;      // per-chunk wait, each >= 1
        std::vector<long long> sizes;    // sums exactly to large_size
    };
    ChunkPlan plan_cycle();

private:
    TakerParams p_;
    std::deque<std::pair<double, long long>> pending_;  // (delay, size)
    Side cycle_side_ = Side::Bid;
};

// Shared machinery for chartists and fundamentalists: two independent wakeup
// channels (market looks and limit looks), expectation p_hat = p + r_hat,
// action only away from the touch / the mid.
class TrendTrader : public Trader {
public:
    TrendTrader(AgentId id, int class_id, uint64_t run_seed, const TrendParams& p)
        : Trader(id, class_id, run_seed), p_(p) {}
    void start(Simulation& sim) override;
    void on_wakeup(Simulation& sim, int tag) override;

    static constexpr int kMarketTag = 0;
    static constexpr int kLimitTag = 1;

protected:
    TrendParams p_;

    // signed expected move in ticks, excluding the noise term
    virtual double signal_ticks(Simulation& sim, double mid_ticks) = 0;

    void market_look(Simulation& sim);
    void limit_look(Simulation& sim);
    void cancel_inconsistent(Simulation& sim, Ticks target);
    long long draw_size();
};

class Chartist : public TrendTrader {
public:
    using TrendTrader::TrendTrader;

protected:
    double signal_ticks(Simulation& sim, double mid_ticks) override;
};

class Fundamentalist : public TrendTrader {
public:
    Fundamentalist(AgentId id, int class_id, uint64_t run_seed, const TrendParams& p,
                   const FundamentalSchedule* schedule)
        : TrendTrader(id, class_id, run_seed, p), schedule_(schedule) {}

protected:
    double signal_ticks(Simulation& sim, double mid_ticks) override;

private:
    // only fundamentalists hold a handle to the schedule
    const FundamentalSchedule* schedule_;
};

// Uninformed flow: random market orders, random limit orders scattered
// around the mid, and occasional cancellation of one of its resting orders.
class NoiseTrader : public Trader {
public:
    NoiseTrader(AgentId id, int class_id, uint64_t run_seed, const NoiseParams& p)
        : Trader(id, class_id, run_seed), p_(p) {}
    void start(Simulation& sim) override;
    void on_wakeup(Simulation& sim, int tag) override;

    static constexpr int kMarketTag = 0;
    static constexpr int kLimitTag = 1;
    static constexpr int kCancelTag = 2;

private:
    NoiseParams p_;
};

}  // namespace msim
