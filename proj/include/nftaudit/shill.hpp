#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nftaudit/auctions.hpp"
#include "nftaudit/components.hpp"
#include "nftaudit/config.hpp"
#include "nftaudit/graph.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// A bidder repeatedly escalating one seller's auction without intending to
// win. All five conditions must hold:
//   1. at least min_bids bids on the auction, strictly increasing in both
//      time and amount,
//   2. the bidder never wins it,
//   3. the bidder appears in fewer than sigma sales overall (shill accounts
//      do not trade much themselves),
//   4. the bidder is weakly connected to the seller through transfers or
//      payments,
//   5. more than mu of the auctions the bidder ever bid on belong to this
//      seller.
struct ShillFinding {
    AccountId bidder;
    AccountId seller;
    std::string auction_id;
    uint32_t bid_count = 0;         // bidder's bids on this auction
    int64_t score_num = 0;          // seller's auctions the bidder bid in
    int64_t score_den = 0;          // all auctions the bidder bid in
    bool linked_by_transfer = false;
    bool linked_by_payment = false;
    std::optional<Usd> profit;      // seller's gain over the last honest bid, when sold
    Timestamp first_bid_time = 0;
};

inline std::vector<ShillFinding> detect_shill_bids(const EventStream& stream,
                                                   const RelationGraphs& graphs,
                                                   const std::map<std::string, Auction>& auctions,
                                                   const DetectorConfig& cfg) {
    // sale participation per account: distinct sale events as buyer or seller
    std::unordered_map<AccountId, uint32_t, AccountIdHash> participation;
    for (const Event& e : stream.events)
        if (auto* s = std::get_if<Sale>(&e)) {
            ++participation[s->seller];
            if (!(s->buyer == s->seller)) ++participation[s->buyer];
        }

    // distinct auctions per bidder, overall and per seller
    std::unordered_map<AccountId, int64_t, AccountIdHash> auctions_bid_in;
    std::map<std::pair<AccountId, AccountId>, int64_t> auctions_bid_in_of_seller;
    for (const auto& [id, au] : auctions) {
        if (au.bids.empty()) continue;
        std::set<AccountId> bidders;
        for (EventIndex i : au.bids) bidders.insert(std::get<Bid>(stream.events[i]).bidder);
        auto seller = au.seller(stream);
        for (const AccountId& b : bidders) {
            ++auctions_bid_in[b];
            if (seller) ++auctions_bid_in_of_seller[{b, *seller}];
        }
    }

    ComponentIndex wcc_t = wcc(graphs.transfer.digraph());
    HubExclusionResult wcc_p =
        wcc_excluding_hubs(graphs.payment.digraph(), uint32_t(cfg.hub_degree_cutoff));

    auto connected = [&](const AccountId& a, const AccountId& b, bool& via_t, bool& via_p) {
        auto ta = graphs.transfer.users.find(a);
        auto tb = graphs.transfer.users.find(b);
        via_t = ta && tb && wcc_t.same_component(*ta, *tb);
        auto pa = graphs.payment.users.find(a);
        auto pb = graphs.payment.users.find(b);
        via_p = pa && pb && wcc_p.components.same_component(*pa, *pb);
        return via_t || via_p;
    };

    std::vector<ShillFinding> out;
    for (const auto& [id, au] : auctions) {
        auto seller = au.seller(stream);
        if (!seller || au.bids.empty()) continue;

        std::optional<AccountId> winner;
        if (au.win) winner = std::get<Win>(stream.events[*au.win]).winner;

        std::map<AccountId, std::vector<const Bid*>> by_bidder;
        for (EventIndex i : au.bids) {
            const Bid& b = std::get<Bid>(stream.events[i]);
            by_bidder[b.bidder].push_back(&b);
        }

        for (const auto& [bidder, bids] : by_bidder) {
            if (bids.size() < size_t(cfg.min_bids)) continue;

            // rule 1: strict escalation across the bidder's whole sequence
            bool escalating = true;
            for (size_t i = 1; i < bids.size(); ++i)
                if (bids[i]->time <= bids[i - 1]->time ||
                    bids[i]->amount_usd.cents <= bids[i - 1]->amount_usd.cents) {
                    escalating = false;
                    break;
                }
            if (!escalating) continue;

            // rule 2: never converts the auction
            if (winner && *winner == bidder) continue;

            // rule 3: thin sale history
            auto part = participation.find(bidder);
            if (part != participation.end() && part->second >= uint32_t(cfg.sigma)) continue;

            // rule 4: off-auction relation to the seller
            bool via_t = false, via_p = false;
            if (!connected(bidder, *seller, via_t, via_p)) continue;

            // rule 5: bid activity concentrated on this seller
            int64_t den = auctions_bid_in[bidder];
            int64_t num = auctions_bid_in_of_seller[{bidder, *seller}];
            if (int128(num) * 1000000 <= int128(cfg.mu_micro) * den) continue;

            ShillFinding f;
            f.bidder = bidder;
            f.seller = *seller;
            f.auction_id = id;
            f.bid_count = uint32_t(bids.size());
            f.score_num = num;
            f.score_den = den;
            f.linked_by_transfer = via_t;
            f.linked_by_payment = via_p;
            f.first_bid_time = bids.front()->time;
            out.push_back(std::move(f));
        }
    }

    // profit: winning price minus the best bid placed before the shill moved
    // in by anyone not flagged on that auction; the reserve when there is no
    // such bid. Unsold auctions have no realized profit.
    std::map<std::string, std::set<AccountId>> flagged_on;
    for (const auto& f : out) flagged_on[f.auction_id].insert(f.bidder);
    for (auto& f : out) {
        const Auction& au = auctions.at(f.auction_id);
        if (!au.win) continue;
        const Win& w = std::get<Win>(stream.events[*au.win]);
        const auto& flagged = flagged_on[f.auction_id];
        std::optional<Usd> best_honest;
        for (EventIndex i : au.bids) {
            const Bid& b = std::get<Bid>(stream.events[i]);
            if (b.time >= f.first_bid_time || flagged.count(b.bidder)) continue;
            if (!best_honest || b.amount_usd.cents > best_honest->cents) best_honest = b.amount_usd;
        }
        int64_t floor_cents = best_honest ? best_honest->cents : au.reserve(stream)->cents;
        f.profit = Usd{std::max<int64_t>(w.amount_usd.cents - floor_cents, 0)};
    }

    std::sort(out.begin(), out.end(), [](const ShillFinding& a, const ShillFinding& b) {
        if (a.first_bid_time != b.first_bid_time) return a.first_bid_time < b.first_bid_time;
        if (!(a.bidder == b.bidder)) return a.bidder < b.bidder;
        if (!(a.seller == b.seller)) return a.seller < b.seller;
        return a.auction_id < b.auction_id;
    });
    return out;
}

} // namespace nftaudit
