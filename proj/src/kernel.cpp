#include "msim/kernel.hpp"

#include <algorithm>

namespace msim {

SubmitResult Simulation::submit_limit(Trader& who, Side side, Ticks price, long long size) {
    EventLogRecord rec;
    rec.time = now_;
    rec.agent = who.id();
    rec.class_id = who.class_id();
    rec.action = Action::SubmitLimit;
    rec.side = side;
    rec.price = price;
    rec.size = size;
    rec.mid_ticks = mid_ticks_now();  // the state the agent acted on
    OrderId id = next_order_id_++;
    rec.order_id = id;
    size_t idx = log_.add_record(std::move(rec));

    SubmitResult res = book_.submit_limit(id, who.id(), side, price, size, now_);
    log_.attach_fills(res.fills, idx);
    log_.note_quotes(book_.top_of_book(now_));
    if (res.rested) who.own_orders().push_back(id);
    return res;
}

SubmitResult Simulation::submit_market(Trader& who, Side side, long long size) {
    EventLogRecord rec;
    rec.time = now_;
    rec.agent = who.id();
    rec.class_id = who.class_id();
    rec.action = Action::SubmitMarket;
    rec.side = side;
    rec.size = size;
    rec.mid_ticks = mid_ticks_now();
    OrderId id = next_order_id_++;
    rec.order_id = id;
    size_t idx = log_.add_record(std::move(rec));

    SubmitResult res = book_.submit_market(id, who.id(), side, size, now_);
    log_.attach_fills(res.fills, idx);
    log_.note_quotes(book_.top_of_book(now_));
    log_.discarded_volume += res.discarded;
    return res;
}

bool Simulation::cancel_order(Trader& who, OrderId id) {
    CancelResult c = book_.cancel(id);
    if (!c.found) return false;
    EventLogRecord rec;
    rec.time = now_;
    rec.agent = who.id();
    rec.class_id = who.class_id();
    rec.action = Action::Cancel;
    rec.side = c.side;
    rec.price = c.price;
    rec.size = c.remaining;
    rec.mid_ticks = mid_ticks_now();
    rec.order_id = id;
    log_.add_record(std::move(rec));
    log_.note_quotes(book_.top_of_book(now_));
    return true;
}

void Simulation::expire_order(AgentId agent_id, OrderId id) {
    const RestingOrder* o = book_.lookup(id);
    if (o == nullptr) return;  // filled or canceled first
    Trader* who = agent(agent_id);
    CancelResult c = book_.cancel(id);
    EventLogRecord rec;
    rec.time = now_;
    rec.agent = agent_id;
    rec.class_id = who ? who->class_id() : 0;
    rec.action = Action::Expire;
    rec.side = c.side;
    rec.price = c.price;
    rec.size = c.remaining;
    rec.mid_ticks = mid_ticks_now();
    rec.order_id = id;
    log_.add_record(std::move(rec));
    log_.note_quotes(book_.top_of_book(now_));
}

OrderId Simulation::seed_order(Side side, Ticks price, long long size) {
    OrderId id = next_order_id_++;
    book_.submit_limit(id, -1, side, price, size, now_);
    log_.note_quotes(book_.top_of_book(now_));
    return id;
}

void Simulation::run_until(double horizon) {
    if (!started_) {
        started_ = true;
        for (auto& a : agents_) a->start(*this);
    }
    while (!queue_.empty() && queue_.top().time <= horizon) {
        SimEvent ev = queue_.pop();
        now_ = ev.time;
        switch (ev.kind) {
            case EventKind::AgentWakeup: {
                Trader* who = agent(ev.agent);
                if (who) who->on_wakeup(*this, ev.tag);
                break;
            }
            case EventKind::OrderExpiry:
                expire_order(ev.agent, ev.order);
                break;
            case EventKind::FundamentalStep:
                break;  // regime changes are a function of time, nothing to do
        }
    }
    now_ = horizon;
}

}  // namespace msim
