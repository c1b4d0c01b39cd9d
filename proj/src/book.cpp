#include "msim/book.hpp"

#include <cmath>

namespace msim {

template <class Map>
long long OrderBook::match_against(Map& levels, Side taker_side, OrderId taker_id,
                                   AgentId taker_agent, long long remaining,
                                   std::optional<Ticks> limit, double time,
                                   std::vector<Fill>& fills) {
    while (remaining > 0 && !levels.empty()) {
        auto level_it = levels.begin();
        Ticks level_price = level_it->first;
        if (limit) {
            bool crosses = taker_side == Side::Bid ? level_price <= *limit
                                                   : level_price >= *limit;
            if (!crosses) break;
        }
        Level& queue = level_it->second;
        while (remaining > 0 && !queue.empty()) {
            RestingOrder& maker = queue.front();
            long long traded = std::min(remaining, maker.remaining);
            fills.push_back(Fill{time, taker_id, maker.id, taker_agent,
                                 maker.agent, maker.price, traded});
            maker.remaining -= traded;
            remaining -= traded;
            if (maker.remaining == 0) {
                index_.erase(maker.id);
                queue.pop_front();
            }
        }
        if (queue.empty()) levels.erase(level_it);
    }
    return remaining;
}

void OrderBook::rest_order(OrderId id, AgentId agent, Side side, Ticks price,
                           long long size, long long remaining, double time) {
    Level& queue = side == Side::Bid ? bids_[price] : asks_[price];
    queue.push_back(RestingOrder{id, agent, side, price, size, remaining,
                                 next_priority_++, time});
    index_[id] = Handle{side, price, std::prev(queue.end())};
}

SubmitResult OrderBook::submit_limit(OrderId id, AgentId agent, Side side,
                                     Ticks price, long long size, double time) {
    SubmitResult res;
    res.id = id;
    if (size <= 0) {
        res.reject = "non-positive size";
        return res;
    }
    if (price <= 0) {
        res.reject = "non-positive price";
        return res;
    }
    if (index_.count(id)) {
        res.reject = "duplicate order id";
        return res;
    }
    res.accepted = true;
    long long remaining = size;
    if (side == Side::Bid)
        remaining = match_against(asks_, side, id, agent, remaining, price, time, res.fills);
    else
        remaining = match_against(bids_, side, id, agent, remaining, price, time, res.fills);
    if (remaining > 0) {
        rest_order(id, agent, side, price, size, remaining, time);
        res.rested = true;
    }
    return res;
}

SubmitResult OrderBook::submit_market(OrderId id, AgentId agent, Side side,
                                      long long size, double time) {
    SubmitResult res;
    res.id = id;
    if (size <= 0) {
        res.reject = "non-positive size";
        return res;
    }
    if (index_.count(id)) {
        res.reject = "duplicate order id";
        return res;
    }
    res.accepted = true;
    long long remaining = size;
    if (side == Side::Bid)
        remaining = match_against(asks_, side, id, agent, remaining, std::nullopt, time, res.fills);
    else
        remaining = match_against(bids_, side, id, agent, remaining, std::nullopt, time, res.fills);
    res.discarded = remaining;  // nothing left to trade against
    return res;
}

CancelResult OrderBook::cancel(OrderId id) {
    CancelResult res;
    auto it = index_.find(id);
    if (it == index_.end()) return res;  // unknown or already gone: no-op
    const Handle& h = it->second;
    res.found = true;
    res.side = h.side;
    res.price = h.price;
    res.remaining = h.it->remaining;
    if (h.side == Side::Bid) {
        auto level = bids_.find(h.price);
        level->second.erase(h.it);
        if (level->second.empty()) bids_.erase(level);
    } else {
        auto level = asks_.find(h.price);
        level->second.erase(h.it);
        if (level->second.empty()) asks_.erase(level);
    }
    index_.erase(it);
    return res;
}

ModifyResult OrderBook::modify_volume(OrderId id, long long new_remaining) {
    ModifyResult res;
    auto it = index_.find(id);
    if (it == index_.end()) return res;
    if (new_remaining <= 0) {
        res.status = ModifyStatus::Rejected;
        res.remaining = it->second.it->remaining;
        return res;
    }
    RestingOrder& ord = *it->second.it;
    res.remaining = new_remaining;
    if (new_remaining == ord.remaining) {
        res.status = ModifyStatus::Unchanged;
    } else if (new_remaining < ord.remaining) {
        // shrinking keeps time priority
        ord.remaining = new_remaining;
        res.status = ModifyStatus::Reduced;
    } else {
        // growing forfeits it: requeue at the back of the level
        RestingOrder copy = ord;
        copy.remaining = new_remaining;
        if (copy.size < new_remaining) copy.size = new_remaining;
        Side side = it->second.side;
        Ticks price = it->second.price;
        Level& queue = side == Side::Bid ? bids_.find(price)->second
                                         : asks_.find(price)->second;
        queue.erase(it->second.it);
        copy.priority_seq = next_priority_++;
        queue.push_back(copy);
        it->second.it = std::prev(queue.end());
        res.status = ModifyStatus::Increased;
    }
    return res;
}

BookSnapshot OrderBook::top_of_book(double time) const {
    BookSnapshot s;
    s.time = time;
    if (!bids_.empty()) s.bid = bids_.begin()->first;
    if (!asks_.empty()) s.ask = asks_.begin()->first;
    return s;
}

const RestingOrder* OrderBook::lookup(OrderId id) const {
    auto it = index_.find(id);
    if (it == index_.end()) return nullptr;
    return &*it->second.it;
}

std::vector<RestingOrder> OrderBook::dump() const {
    std::vector<RestingOrder> out;
    out.reserve(index_.size());
    for (const auto& [price, queue] : bids_)
        for (const auto& o : queue) out.push_back(o);
    for (const auto& [price, queue] : asks_)
        for (const auto& o : queue) out.push_back(o);
    return out;
}

}  // namespace msim
