#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nftaudit/config.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// An asset moving hand to hand while the money runs the other way outside any
// sale: Transfer seller -> buyer with a Paid buyer -> seller nearby in time.
// Fees and royalties ride on sales, so this pairing is how both get skipped.
struct EvasionInstance {
    AccountId seller;   // transfer source, payment destination
    AccountId buyer;    // transfer destination, payment source
    AssetId asset;
    Wei amount_wei;
    Timestamp transfer_time = 0;
    Timestamp payment_time = 0;
    int64_t gap_seconds = 0; // payment_time - transfer_time, signed
};

inline std::vector<EvasionInstance> detect_offplatform_trades(const EventStream& stream,
                                                              const DetectorConfig& cfg) {
    struct Pay {
        Timestamp time;
        EventIndex idx;
    };
    std::map<std::pair<AccountId, AccountId>, std::vector<Pay>> payments;
    for (EventIndex i = 0; i < stream.events.size(); ++i)
        if (auto* p = std::get_if<Paid>(&stream.events[i]))
            payments[{p->from, p->to}].push_back({p->time, i}); // stream order: time sorted

    std::vector<EvasionInstance> out;
    for (EventIndex i = 0; i < stream.events.size(); ++i) {
        auto* t = std::get_if<Transfer>(&stream.events[i]);
        if (!t) continue;
        auto it = payments.find({t->to, t->from}); // money flows buyer -> seller
        if (it == payments.end()) continue;
        const auto& list = it->second;

        // nearest payment in absolute gap; earlier payment wins a tie
        auto cmp = [](const Pay& p, Timestamp when) { return p.time < when; };
        size_t at = size_t(std::lower_bound(list.begin(), list.end(), t->time, cmp) -
                           list.begin());
        const Pay* best = nullptr;
        auto consider = [&](size_t k) {
            if (k >= list.size()) return;
            if (!best) {
                best = &list[k];
                return;
            }
            int64_t g_new = std::llabs(list[k].time - t->time);
            int64_t g_old = std::llabs(best->time - t->time);
            if (g_new < g_old || (g_new == g_old && list[k].time < best->time)) best = &list[k];
        };
        if (at > 0) consider(at - 1);
        consider(at);
        if (!best) continue;
        int64_t gap = best->time - t->time;
        if (std::llabs(gap) > cfg.evasion_window_seconds) continue;

        const Paid& p = std::get<Paid>(stream.events[best->idx]);
        out.push_back({t->from, t->to, t->asset, p.amount_wei, t->time, p.time, gap});
    }
    return out; // transfers visited in stream order: already time sorted
}

// Per asset, how many times the creator raised the royalty between sales.
// The comparison runs over consecutive sales that carry a royalty; sales
// without one neither count nor break the chain.
struct RoyaltyIncreaseRow {
    std::optional<std::string> collection_slug;
    AssetId asset;
    uint32_t increases = 0;
};

inline std::vector<RoyaltyIncreaseRow> count_royalty_increases(const EventStream& stream) {
    struct State {
        std::optional<int64_t> last_nano;
        uint32_t increases = 0;
        bool any = false;
    };
    std::map<AssetId, State> per_asset;
    for (const Event& e : stream.events) {
        auto* s = std::get_if<Sale>(&e);
        if (!s || !s->royalty_fraction) continue;
        State& st = per_asset[s->asset];
        st.any = true;
        int64_t r = s->royalty_fraction->nano;
        if (st.last_nano && r > *st.last_nano) ++st.increases;
        st.last_nano = r;
    }

    std::unordered_map<AssetId, const std::string*, AssetIdHash> slug_of;
    for (const auto& a : stream.assets) slug_of.emplace(a.id, &a.collection_slug);

    std::vector<RoyaltyIncreaseRow> out;
    for (const auto& [asset, st] : per_asset) {
        if (!st.any) continue;
        RoyaltyIncreaseRow row;
        row.asset = asset;
        row.increases = st.increases;
        if (auto it = slug_of.find(asset); it != slug_of.end())
            row.collection_slug = *it->second;
        out.push_back(std::move(row));
    }
    return out; // map order: sorted by asset id
}

} // namespace nftaudit
