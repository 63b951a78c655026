#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nftaudit/model.hpp"

namespace nftaudit {

// One auction's event indices, reassembled by auction_id. Event indices are
// in stream order, so every per-auction list is already time sorted.
struct Auction {
    std::string id;
    std::optional<EventIndex> start;
    std::vector<EventIndex> bids;
    std::vector<EventIndex> cancels;
    std::optional<EventIndex> win; // first win, extras ignored
    std::optional<EventIndex> end; // first auction_end

    std::optional<AccountId> seller(const EventStream& s) const {
        if (!start) return std::nullopt;
        return std::get<AuctionStart>(s.events[*start]).seller;
    }
    std::optional<Usd> reserve(const EventStream& s) const {
        if (!start) return std::nullopt;
        return std::get<AuctionStart>(s.events[*start]).reserve_usd;
    }
    // close time: explicit end if present, else the win
    std::optional<Timestamp> close_time(const EventStream& s) const {
        if (end) return std::get<AuctionEnd>(s.events[*end]).time;
        if (win) return std::get<Win>(s.events[*win]).time;
        return std::nullopt;
    }
};

// Ordered by auction id for deterministic iteration.
inline std::map<std::string, Auction> reconstruct_auctions(const EventStream& s) {
    std::map<std::string, Auction> out;
    auto at = [&](const std::string& id) -> Auction& {
        auto [it, fresh] = out.try_emplace(id);
        if (fresh) it->second.id = id;
        return it->second;
    };
    for (EventIndex i = 0; i < s.events.size(); ++i) {
        const Event& e = s.events[i];
        if (auto* a = std::get_if<AuctionStart>(&e)) {
            Auction& au = at(a->auction_id);
            if (!au.start) au.start = i;
        } else if (auto* b = std::get_if<Bid>(&e)) {
            at(b->auction_id).bids.push_back(i);
        } else if (auto* c = std::get_if<CancelBid>(&e)) {
            at(c->auction_id).cancels.push_back(i);
        } else if (auto* w = std::get_if<Win>(&e)) {
            Auction& au = at(w->auction_id);
            if (!au.win) au.win = i;
        } else if (auto* n = std::get_if<AuctionEnd>(&e)) {
            Auction& au = at(n->auction_id);
            if (!au.end) au.end = i;
        }
    }
    return out;
}

} // namespace nftaudit
