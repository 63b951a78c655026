#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nftaudit/auctions.hpp"
#include "nftaudit/config.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// A high bid parked over the real action and withdrawn at the last moment so
// an accomplice wins cheap: the cancel lands after every bid, the winner is
// someone else, and the winning price sits below the cancelled amount.
struct ShieldFinding {
    AccountId winner;    // u1, takes the asset at the low price
    AccountId canceller; // u2, held the shield bid
    std::string auction_id;
    Usd winning_amount;   // p1
    Usd cancelled_amount; // p2
    Usd difference;       // p2 - p1, the headroom the shield protected
    Timestamp cancel_time = 0;
};

inline std::vector<ShieldFinding> detect_bid_shielding(const EventStream& stream,
                                                       const std::map<std::string, Auction>& auctions,
                                                       const DetectorConfig& cfg) {
    std::vector<ShieldFinding> out;
    for (const auto& [id, au] : auctions) {
        if (!au.win || au.cancels.empty()) continue;
        const Win& w = std::get<Win>(stream.events[*au.win]);

        Timestamp last_bid_time = INT64_MIN;
        for (EventIndex i : au.bids)
            last_bid_time = std::max(last_bid_time, std::get<Bid>(stream.events[i]).time);

        for (EventIndex ci : au.cancels) {
            const CancelBid& c = std::get<CancelBid>(stream.events[ci]);
            if (c.time <= last_bid_time) continue;               // a later bid followed the pull
            if (c.bidder == w.winner) continue;                  // canceller took it themselves
            if (c.amount_usd.cents <= w.amount_usd.cents) continue; // shield must sit on top

            if (cfg.shield_cancel_window_seconds > 0) {
                auto close = au.close_time(stream);
                if (!close || c.time > *close ||
                    *close - c.time > cfg.shield_cancel_window_seconds)
                    continue;
            }
            if (cfg.shield_skip_rivals) {
                // interleaved bidding between the two reads as genuine rivalry
                std::vector<std::pair<Timestamp, bool>> seq; // (time, is_winner)
                for (EventIndex i : au.bids) {
                    const Bid& b = std::get<Bid>(stream.events[i]);
                    if (b.bidder == w.winner) seq.emplace_back(b.time, true);
                    else if (b.bidder == c.bidder) seq.emplace_back(b.time, false);
                }
                std::sort(seq.begin(), seq.end());
                int switches = 0;
                for (size_t i = 1; i < seq.size(); ++i)
                    if (seq[i].second != seq[i - 1].second) ++switches;
                if (switches >= 2) continue;
            }

            ShieldFinding f;
            f.winner = w.winner;
            f.canceller = c.bidder;
            f.auction_id = id;
            f.winning_amount = w.amount_usd;
            f.cancelled_amount = c.amount_usd;
            f.difference = Usd{c.amount_usd.cents - w.amount_usd.cents};
            f.cancel_time = c.time;
            out.push_back(std::move(f));
        }
    }
    std::sort(out.begin(), out.end(), [](const ShieldFinding& a, const ShieldFinding& b) {
        if (a.cancel_time != b.cancel_time) return a.cancel_time < b.cancel_time;
        if (!(a.winner == b.winner)) return a.winner < b.winner;
        if (!(a.canceller == b.canceller)) return a.canceller < b.canceller;
        return a.auction_id < b.auction_id;
    });
    return out;
}

// Auctions that closed on someone other than their top bidder. A tie with
// the winner is not an instance; the reported bidder is the earliest one at
// the top amount.
struct FailedHighestBid {
    std::string auction_id;
    AccountId highest_bidder;
    Usd highest_amount;
    AccountId winner;
    Usd winning_amount;
};

inline std::vector<FailedHighestBid> detect_failed_highest_bid(
    const EventStream& stream, const std::map<std::string, Auction>& auctions) {
    std::vector<FailedHighestBid> out;
    for (const auto& [id, au] : auctions) {
        if (!au.win || au.bids.empty()) continue;
        const Win& w = std::get<Win>(stream.events[*au.win]);

        int64_t top = INT64_MIN;
        for (EventIndex i : au.bids)
            top = std::max(top, std::get<Bid>(stream.events[i]).amount_usd.cents);

        bool winner_at_top = false;
        const Bid* first_top = nullptr;
        for (EventIndex i : au.bids) {
            const Bid& b = std::get<Bid>(stream.events[i]);
            if (b.amount_usd.cents != top) continue;
            if (b.bidder == w.winner) winner_at_top = true;
            if (!first_top || b.time < first_top->time) first_top = &b;
        }
        if (winner_at_top) continue;
        out.push_back({id, first_top->bidder, first_top->amount_usd, w.winner, w.amount_usd});
    }
    return out; // map iteration order: already sorted by auction id
}

} // namespace nftaudit
