#include "msim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace msim {

namespace {

long long clamped_size(RngStream& rng, double mean, double std) {
    long long s = std::llround(rng.normal(mean, std));
    return s < 1 ? 1 : s;
}

// drop ids that no longer sit on the book, preserving submission order
void prune(Simulation& sim, std::vector<OrderId>& ids) {
    size_t w = 0;
    for (size_t r = 0; r < ids.size(); ++r)
        if (sim.book().lookup(ids[r]) != nullptr) ids[w++] = ids[r];
    ids.resize(w);
}

}  // namespace

// ---------------------------------------------------------------------------
// fundamental schedule

double FundamentalSchedule::value_at(double t) const {
    if (t <= 0.0 || t > span)
        throw std::invalid_argument("fundamental value queried outside (0, span]");
    double v = initial_value;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] <= t) v = values[i];  // breakpoint takes the new value
        else break;
    }
    return v;
}

// ---------------------------------------------------------------------------
// market maker

void MarketMaker::start(Simulation& sim) {
    // active from the first warm-up instant on
    sim.schedule_wakeup(id_, rng_.exponential(p_.update_mean), 0);
}

void MarketMaker::on_wakeup(Simulation& sim, int) {
    // quotes are read before the cancellations: if our own rung holds the
    // touch, the fresh ladder re-joins it instead of receding a step each
    // refresh (which would widen the spread a little on every cycle)
    BookSnapshot top = sim.top_now();
    for (OrderId id : own_) sim.cancel_order(*this, id);
    own_.clear();
    std::optional<Ticks> ask = top.ask;
    std::optional<Ticks> bid = top.bid;
    if (sim.in_warmup()) {
        // the bootstrap phase assembles the book around the fixed reference
        // quotes; anchoring on whatever stray orders exist instead would let
        // the warm-up book drift arbitrarily far before the session starts
        ask = sim.warmup_ask();
        bid = sim.warmup_bid();
    }
    if (ask) {
        for (int i = 0; i <= p_.ladder_rungs; ++i) {
            Ticks px = *ask + static_cast<Ticks>(i) * p_.rung_step;
            sim.submit_limit(*this, Side::Ask, px, p_.order_size);
        }
    } else {
        sim.note_skip();
    }
    if (bid) {
        for (int i = 0; i <= p_.ladder_rungs; ++i) {
            Ticks px = *bid - static_cast<Ticks>(i) * p_.rung_step;
            if (px < 1) break;
            sim.submit_limit(*this, Side::Bid, px, p_.order_size);
        }
    } else {
        sim.note_skip();
    }
    sim.schedule_wakeup(id_, rng_.exponential(p_.update_mean), 0);
}

// ---------------------------------------------------------------------------
// market taker

void MarketTaker::start(Simulation& sim) {
    // quiet through the warm-up; first large order arrives from t = 0
    sim.schedule_wakeup_at(id_, rng_.exponential(p_.arrival_mean), 0);
}

MarketTaker::ChunkPlan MarketTaker::plan_cycle() {
    ChunkPlan plan;
    plan.side = rng_.coin() ? Side::Bid : Side::Ask;
    long long n = static_cast<long long>(
        std::ceil(static_cast<double>(p_.large_size) / p_.chunk_mean));
    if (n < 1) n = 1;
    // the exit window must leave room for n unit-length gaps
    double T = rng_.normal(p_.exit_mean, p_.exit_std);
    if (T < static_cast<double>(n)) T = static_cast<double>(n);
    double gap_mean = T / static_cast<double>(n);
    double gap_std = T / (5.0 * static_cast<double>(n));
    long long remaining = p_.large_size;
    for (long long k = 0; k < n && remaining > 0; ++k) {
        double d = rng_.normal(gap_mean, gap_std);
        if (d < 1.0) d = 1.0;
        long long s = clamped_size(rng_, p_.chunk_mean, p_.chunk_std);
        if (k == n - 1 || s > remaining) s = remaining;  // never overshoot, end exact
        plan.delays.push_back(d);
        plan.sizes.push_back(s);
        remaining -= s;
    }
    return plan;
}

void MarketTaker::on_wakeup(Simulation& sim, int tag) {
    if (tag == 0) {
        // a new large order arrives; lay out its chunk schedule
        ChunkPlan plan = plan_cycle();
        cycle_side_ = plan.side;
        pending_.clear();
        for (size_t i = 0; i < plan.sizes.size(); ++i)
            pending_.push_back({plan.delays[i], plan.sizes[i]});
        sim.schedule_wakeup(id_, pending_.front().first, 1);
        return;
    }
    // execute the next chunk
    long long size = pending_.front().second;
    pending_.pop_front();
    sim.submit_market(*this, cycle_side_, size);
    if (!pending_.empty())
        sim.schedule_wakeup(id_, pending_.front().first, 1);
    else
        sim.schedule_wakeup(id_, rng_.exponential(p_.arrival_mean), 0);
}

// ---------------------------------------------------------------------------
// trend traders (chartists and fundamentalists)

void TrendTrader::start(Simulation& sim) {
    // quiet through the warm-up
    sim.schedule_wakeup_at(id_, rng_.exponential(p_.market_mean), kMarketTag);
    sim.schedule_wakeup_at(id_, rng_.exponential(p_.limit_mean), kLimitTag);
}

void TrendTrader::on_wakeup(Simulation& sim, int tag) {
    if (tag == kMarketTag) {
        market_look(sim);
        sim.schedule_wakeup(id_, rng_.exponential(p_.market_mean), kMarketTag);
    } else {
        limit_look(sim);
        sim.schedule_wakeup(id_, rng_.exponential(p_.limit_mean), kLimitTag);
    }
}

long long TrendTrader::draw_size() {
    return clamped_size(rng_, p_.size_mean, p_.size_std);
}

void TrendTrader::cancel_inconsistent(Simulation& sim, Ticks target) {
    // inconsistent: own buys above the expected price, own sells below it
    prune(sim, own_);
    std::vector<OrderId> keep;
    keep.reserve(own_.size());
    for (OrderId id : own_) {
        const RestingOrder* o = sim.book().lookup(id);
        bool drop = (o->side == Side::Bid && o->price > target) ||
                    (o->side == Side::Ask && o->price < target);
        if (drop)
            sim.cancel_order(*this, id);
        else
            keep.push_back(id);
    }
    own_.swap(keep);
}

void TrendTrader::market_look(Simulation& sim) {
    BookSnapshot top = sim.top_now();
    if (!top.two_sided()) {
        sim.note_skip();
        return;
    }
    double mid = *top.mid_ticks();
    double phat = mid + signal_ticks(sim, mid) + rng_.normal(0.0, p_.noise_std_ticks);
    // act only strictly beyond the touch; anything inside the spread
    // (boundaries included) is not worth crossing for
    if (phat > static_cast<double>(*top.ask)) {
        prune(sim, own_);
        std::vector<OrderId> keep;
        for (OrderId id : own_) {
            const RestingOrder* o = sim.book().lookup(id);
            if (o->side == Side::Ask)
                sim.cancel_order(*this, id);
            else
                keep.push_back(id);
        }
        own_.swap(keep);
        sim.submit_market(*this, Side::Bid, draw_size());
    } else if (phat < static_cast<double>(*top.bid)) {
        prune(sim, own_);
        std::vector<OrderId> keep;
        for (OrderId id : own_) {
            const RestingOrder* o = sim.book().lookup(id);
            if (o->side == Side::Bid)
                sim.cancel_order(*this, id);
            else
                keep.push_back(id);
        }
        own_.swap(keep);
        sim.submit_market(*this, Side::Ask, draw_size());
    }
}

void TrendTrader::limit_look(Simulation& sim) {
    auto mid_opt = sim.mid_ticks_now();
    if (!mid_opt) {
        sim.note_skip();
        return;
    }
    double mid = *mid_opt;
    double phat = mid + signal_ticks(sim, mid) + rng_.normal(0.0, p_.noise_std_ticks);
    if (phat == mid) return;  // no edge, nothing to do
    Ticks target = static_cast<Ticks>(std::llround(phat));
    if (target < 1) target = 1;
    cancel_inconsistent(sim, target);
    Side side = phat > mid ? Side::Bid : Side::Ask;
    auto res = sim.submit_limit(*this, side, target, draw_size());
    if (res.rested)
        sim.schedule_expiry(id_, res.id, sim.now() + p_.horizon);
}

double Chartist::signal_ticks(Simulation& sim, double mid_ticks) {
    auto past = sim.log().mid_at(sim.now() - p_.horizon);
    if (!past) past = sim.log().earliest_mid();  // flat extrapolation at the edge
    if (!past) return 0.0;
    return p_.weight * (mid_ticks - *past);
}

double Fundamentalist::signal_ticks(Simulation& sim, double mid_ticks) {
    // the schedule is defined on (0, span]; a wakeup drawn exactly at 0 (or a
    // direct call during warm-up) reads the initial value instead
    double value = sim.now() > 0.0 ? schedule_->value_at(sim.now())
                                   : schedule_->initial_value;
    return p_.weight * (value * 100.0 - mid_ticks);
}

// ---------------------------------------------------------------------------
// noise trader

void NoiseTrader::start(Simulation& sim) {
    // the limit channel helps assemble the warm-up book; taking (market) and
    // cancelling wait for the session proper
    if (sim.in_warmup() && p_.warmup_limit_mean > 0.0)
        sim.schedule_wakeup(id_, rng_.exponential(p_.warmup_limit_mean), kLimitTag);
    else
        sim.schedule_wakeup_at(id_, rng_.exponential(p_.limit_mean), kLimitTag);
    sim.schedule_wakeup_at(id_, rng_.exponential(p_.market_mean), kMarketTag);
    sim.schedule_wakeup_at(id_, rng_.exponential(p_.cancel_mean), kCancelTag);
}

void NoiseTrader::on_wakeup(Simulation& sim, int tag) {
    switch (tag) {
        case kMarketTag: {
            Side side = rng_.coin() ? Side::Bid : Side::Ask;
            long long size = clamped_size(rng_, p_.size_mean, p_.size_std);
            sim.submit_market(*this, side, size);
            sim.schedule_wakeup(id_, rng_.exponential(p_.market_mean), kMarketTag);
            break;
        }
        case kLimitTag: {
            // before t = 0 quoting centers on the fixed reference price, so
            // the warm-up book assembles around it
            auto mid = sim.in_warmup()
                           ? std::optional<double>(
                                 (static_cast<double>(sim.warmup_bid()) +
                                  static_cast<double>(sim.warmup_ask())) / 2.0)
                           : sim.mid_ticks_now();
            if (mid) {
                Side side = rng_.coin() ? Side::Bid : Side::Ask;
                double scatter = sim.in_warmup() ? p_.warmup_price_std_ticks
                                                 : p_.price_std_ticks;
                Ticks px = static_cast<Ticks>(
                    std::llround(rng_.normal(*mid, scatter)));
                if (px < 1) px = 1;
                bool marketable = false;
                if (sim.in_warmup()) {
                    // bootstrap quotes only add depth: a marketable draw would
                    // eat the book being assembled (and snapping it to the
                    // touch would stack an artificial wall there), so drop it
                    auto top = sim.top_now();
                    marketable = (side == Side::Bid && top.ask && px >= *top.ask) ||
                                 (side == Side::Ask && top.bid && px <= *top.bid);
                }
                long long size = clamped_size(rng_, p_.size_mean, p_.size_std);
                if (marketable) sim.note_skip();
                else sim.submit_limit(*this, side, px, size);
            } else {
                sim.note_skip();
            }
            double mean = (sim.in_warmup() && p_.warmup_limit_mean > 0.0)
                              ? p_.warmup_limit_mean
                              : p_.limit_mean;
            sim.schedule_wakeup(id_, rng_.exponential(mean), kLimitTag);
            break;
        }
        case kCancelTag: {
            prune(sim, own_);
            if (!own_.empty()) {
                size_t pick = rng_.uniform_index(own_.size());
                sim.cancel_order(*this, own_[pick]);
                own_.erase(own_.begin() + static_cast<long>(pick));
            }
            sim.schedule_wakeup(id_, rng_.exponential(p_.cancel_mean), kCancelTag);
            break;
        }
        default:
            break;
    }
}

}  // namespace msim
