#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "msim/book.hpp"
#include "msim/record.hpp"
#include "msim/rng.hpp"

namespace msim {

enum class EventKind : unsigned char { AgentWakeup, OrderExpiry, FundamentalStep };

struct SimEvent {
    double time = 0.0;
    uint64_t seq = 0;      // insertion order; breaks simultaneous-event ties
    EventKind kind = EventKind::AgentWakeup;
    AgentId agent = 0;
    int tag = 0;           // policy-defined wakeup channel
    OrderId order = 0;     // for expiries
};

// min-heap on (time, seq): earlier first, earlier-scheduled first on ties
class EventQueue {
public:
    uint64_t schedule(SimEvent ev) {
        ev.seq = next_seq_++;
        heap_.push(ev);
        return ev.seq;
    }
    bool empty() const { return heap_.empty(); }
    size_t size() const { return heap_.size(); }
    const SimEvent& top() const { return heap_.top(); }
    SimEvent pop() {
        SimEvent ev = heap_.top();
        heap_.pop();
        return ev;
    }

private:
    struct Later {
        bool operator()(const SimEvent& a, const SimEvent& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<SimEvent, std::vector<SimEvent>, Later> heap_;
    uint64_t next_seq_ = 0;
};

class Simulation;

// A trading policy.  Each agent owns a random stream seeded from the run
// seed and its id, so its draws are unaffected by every other agent.
class Trader {
public:
    Trader(AgentId id, int class_id, uint64_t run_seed)
        : id_(id), class_id_(class_id), rng_(run_seed, static_cast<uint64_t>(id) + 1) {}
    virtual ~Trader() = default;

    AgentId id() const { return id_; }
    int class_id() const { return class_id_; }
    RngStream& rng() { return rng_; }

    // schedule the first wakeup(s); called once when the run starts
    virtual void start(Simulation& sim) = 0;
    virtual void on_wakeup(Simulation& sim, int tag) = 0;

    // live-order bookkeeping: ids are pruned lazily against the book
    std::vector<OrderId>& own_orders() { return own_; }

protected:
    AgentId id_;
    int class_id_;
    RngStream rng_;
    std::vector<OrderId> own_;
};

// Event-driven run harness: owns the clock, the event heap, the book and the
// activity log, and hands agents a narrow action interface.
class Simulation {
public:
    Simulation(double burn_in, double span) {
        start_time_ = -burn_in;
        now_ = start_time_;
        log_.burn_in = burn_in;
        log_.span = span;
    }

    double now() const { return now_; }
    double span() const { return log_.span; }
    OrderBook& book() { return book_; }
    RunLog& log() { return log_; }
    const RunLog& log() const { return log_; }

    void add_agent(std::unique_ptr<Trader> agent) {
        by_id_[agent->id()] = agent.get();
        agents_.push_back(std::move(agent));
    }
    Trader* agent(AgentId id) {
        auto it = by_id_.find(id);
        return it == by_id_.end() ? nullptr : it->second;
    }
    size_t agent_count() const { return agents_.size(); }

    void schedule_wakeup(AgentId agent, double delay, int tag) {
        schedule_at(EventKind::AgentWakeup, now_ + delay, agent, tag, 0);
    }
    void schedule_wakeup_at(AgentId agent, double at, int tag) {
        schedule_at(EventKind::AgentWakeup, at, agent, tag, 0);
    }
    void schedule_expiry(AgentId agent, OrderId order, double at) {
        schedule_at(EventKind::OrderExpiry, at, agent, 0, order);
    }
    void schedule_fundamental_step(double at) {
        schedule_at(EventKind::FundamentalStep, at, -1, 0, 0);
    }

    std::optional<double> mid_ticks_now() const {
        return book_.top_of_book(now_).mid_ticks();
    }
    BookSnapshot top_now() const { return book_.top_of_book(now_); }

    // --- warm-up bootstrap ------------------------------------------------
    // Before t = 0 a missing quote falls back to these anchors (the initial
    // reference price): without that, early market orders can drain the thin
    // seed book before the first maker ever wakes, and a book with no quotes
    // never recovers.  From t = 0 on, missing references mean skipped looks.
    void set_warmup_anchors(Ticks bid, Ticks ask) {
        warmup_bid_ = bid;
        warmup_ask_ = ask;
    }
    bool in_warmup() const { return now_ < 0.0; }
    Ticks warmup_bid() const { return warmup_bid_; }
    Ticks warmup_ask() const { return warmup_ask_; }

    // --- actions taken by agents; every one lands in the log -------------
    SubmitResult submit_limit(Trader& who, Side side, Ticks price, long long size);
    SubmitResult submit_market(Trader& who, Side side, long long size);
    bool cancel_order(Trader& who, OrderId id);

    void note_skip() { ++log_.skipped_actions; }

    // place book-seeding orders outside any agent (warm-up anchor)
    OrderId seed_order(Side side, Ticks price, long long size);

    // run until the given absolute time; events beyond it stay queued
    void run_until(double horizon);

private:
    OrderBook book_;
    EventQueue queue_;
    RunLog log_;
    std::vector<std::unique_ptr<Trader>> agents_;
    std::unordered_map<AgentId, Trader*> by_id_;
    double start_time_ = 0.0;
    double now_ = 0.0;
    bool started_ = false;
    OrderId next_order_id_ = 1;
    Ticks warmup_bid_ = 9995;
    Ticks warmup_ask_ = 10005;

    void schedule_at(EventKind kind, double at, AgentId agent, int tag, OrderId order) {
        if (at < now_)
            throw std::logic_error("event scheduled in the past");
        SimEvent ev;
        ev.time = at;
        ev.kind = kind;
        ev.agent = agent;
        ev.tag = tag;
        ev.order = order;
        queue_.schedule(ev);
    }

    void expire_order(AgentId agent, OrderId id);
};

}  // namespace msim
