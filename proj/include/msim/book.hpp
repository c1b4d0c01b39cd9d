#pragma once

#include <cmath>
#include <cstdint>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace msim {

// Prices live on an integer tick grid (1 tick = 0.01 currency units).  All
// matching arithmetic is integral; doubles only appear at the boundary.
using Ticks = long long;
using OrderId = unsigned long long;
using AgentId = int;

constexpr double kTickValue = 0.01;

inline Ticks to_ticks(double price) {
    // round half away from zero
    return static_cast<Ticks>(std::llround(price * 100.0));
}
inline double to_price(Ticks t) { return static_cast<double>(t) * kTickValue; }
inline double to_price(double ticks) { return ticks * kTickValue; }

enum class Side : unsigned char { Bid, Ask };
inline Side other_side(Side s) { return s == Side::Bid ? Side::Ask : Side::Bid; }
inline const char* side_name(Side s) { return s == Side::Bid ? "bid" : "ask"; }

enum class OrderKind : unsigned char { Limit, Market };

struct Fill {
    double time = 0.0;
    OrderId taker_id = 0;
    OrderId maker_id = 0;
    AgentId taker_agent = 0;
    AgentId maker_agent = 0;
    Ticks price = 0;      // always the resting order's price
    long long size = 0;
};

struct RestingOrder {
    OrderId id = 0;
    AgentId agent = 0;
    Side side = Side::Bid;
    Ticks price = 0;
    long long size = 0;          // size at submission
    long long remaining = 0;
    unsigned long long priority_seq = 0;  // engine-assigned, lower trades first
    double submitted_at = 0.0;
};

struct BookSnapshot {
    double time = 0.0;
    std::optional<Ticks> bid;
    std::optional<Ticks> ask;

    bool two_sided() const { return bid && ask; }
    // mid and half-spread in tick units; exact for integral best quotes
    std::optional<double> mid_ticks() const {
        if (!two_sided()) return std::nullopt;
        return (static_cast<double>(*ask) + static_cast<double>(*bid)) / 2.0;
    }
    std::optional<double> spread_ticks() const {
        if (!two_sided()) return std::nullopt;
        return (static_cast<double>(*ask) - static_cast<double>(*bid)) / 2.0;
    }
};

struct SubmitResult {
    bool accepted = false;
    std::string reject;          // empty when accepted
    OrderId id = 0;
    std::vector<Fill> fills;
    long long discarded = 0;     // market-order remainder with no liquidity left
    bool rested = false;         // limit remainder sits on the book
};

struct CancelResult {
    bool found = false;
    Side side = Side::Bid;
    Ticks price = 0;
    long long remaining = 0;     // size removed from the book
};

enum class ModifyStatus { NotFound, Unchanged, Reduced, Increased, Rejected };

struct ModifyResult {
    ModifyStatus status = ModifyStatus::NotFound;
    long long remaining = 0;
};

// Central limit order book with price-time priority.  Marketable limit
// orders fill on entry; the remainder (if any) is queued at its price level.
// Market-order volume that exhausts the opposite side is discarded.
class OrderBook {
public:
    SubmitResult submit_limit(OrderId id, AgentId agent, Side side, Ticks price,
                              long long size, double time);
    SubmitResult submit_market(OrderId id, AgentId agent, Side side,
                               long long size, double time);
    CancelResult cancel(OrderId id);
    ModifyResult modify_volume(OrderId id, long long new_remaining);

    BookSnapshot top_of_book(double time) const;
    const RestingOrder* lookup(OrderId id) const;

    size_t order_count() const { return index_.size(); }
    // resting orders in canonical order: bids best-to-worst then asks
    // best-to-worst, FIFO within a level (used by tests and state dumps)
    std::vector<RestingOrder> dump() const;

private:
    using Level = std::list<RestingOrder>;
    // bids keyed descending so begin() is the best level on both maps
    std::map<Ticks, Level, std::greater<Ticks>> bids_;
    std::map<Ticks, Level, std::less<Ticks>> asks_;
    struct Handle {
        Side side;
        Ticks price;
        Level::iterator it;
    };
    std::unordered_map<OrderId, Handle> index_;
    unsigned long long next_priority_ = 1;

    template <class Map>
    long long match_against(Map& levels, Side taker_side, OrderId taker_id,
                            AgentId taker_agent, long long remaining,
                            std::optional<Ticks> limit, double time,
                            std::vector<Fill>& fills);
    void rest_order(OrderId id, AgentId agent, Side side, Ticks price,
                    long long size, long long remaining, double time);
};

}  // namespace msim
