#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nftaudit/components.hpp"
#include "nftaudit/config.hpp"
#include "nftaudit/graph.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// A group of accounts whose mutual sales look like volume laundering, plus
// the sales attributed to it. A sale is flagged when its two parties are
//   (a) in one strongly connected sale component carrying heavy two-way
//       traffic (the epsilon filter), or
//   (b) weakly connected in the transfer graph, or
//   (c) weakly connected in the payment graph (hubs excluded),
// with the component capped so organic dense markets stay out of scope.
struct WashFinding {
    std::vector<AccountId> members; // sorted
    std::vector<EventIndex> sales;  // stream order
    bool via_sale_cycle = false;
    bool via_transfer_link = false;
    bool via_payment_link = false;
    int128 volume_usd_cents = 0;
    Timestamp first_time = 0;
};

struct WashAnalysis {
    std::vector<WashFinding> findings;
    std::vector<AccountId> excluded_payment_hubs;
    std::vector<EventIndex> flagged_sales; // union over findings, ascending
};

inline WashAnalysis detect_wash_trades(const EventStream& stream, const RelationGraphs& graphs,
                                       const DetectorConfig& cfg) {
    WashAnalysis out;
    const SaleGraph& gs = graphs.sale;
    if (gs.edges.empty()) return out;

    ComponentIndex scc_s = scc(gs.digraph());
    ComponentIndex wcc_t = wcc(graphs.transfer.digraph());
    HubExclusionResult wcc_p =
        wcc_excluding_hubs(graphs.payment.digraph(), uint32_t(cfg.hub_degree_cutoff));
    for (uint32_t hub : wcc_p.excluded)
        out.excluded_payment_hubs.push_back(graphs.payment.users.nodes[hub]);
    std::sort(out.excluded_payment_hubs.begin(), out.excluded_payment_hubs.end());

    const size_t cap = size_t(cfg.max_component_users);
    const uint32_t eps = uint32_t(cfg.epsilon);
    const bool pair_scope = cfg.epsilon_scope == DetectorConfig::EpsilonScope::pair;

    // Component-scope epsilon: a strongly connected component qualifies only
    // if every internally connected pair carries at least epsilon sales both
    // directions combined. Self loops are judged per account, not per pair.
    std::vector<uint8_t> comp_ok(scc_s.members.size(), 1);
    for (size_t c = 0; c < scc_s.members.size(); ++c)
        if (scc_s.members[c].size() > cap) comp_ok[c] = 0;
    if (!pair_scope) {
        for (const auto& [key, mult] : gs.pair_mult) {
            uint32_t a = uint32_t(key >> 32), b = uint32_t(key & 0xffffffffu);
            if (a == b || !scc_s.same_component(a, b)) continue;
            uint32_t c = scc_s.comp_of_node[a];
            if (comp_ok[c] && gs.bidirectional_multiplicity(a, b) < eps) comp_ok[c] = 0;
        }
    }

    struct Group {
        WashFinding finding;
        std::unordered_set<EventIndex> seen;
    };
    std::map<std::pair<char, uint32_t>, Group> groups;

    auto member_addresses = [](const std::vector<uint32_t>& ids,
                               const std::vector<AccountId>& nodes) {
        std::vector<AccountId> out;
        out.reserve(ids.size());
        for (uint32_t v : ids) out.push_back(nodes[v]);
        std::sort(out.begin(), out.end());
        return out;
    };

    for (const UserEdge& e : gs.edges) {
        const auto& sale = std::get<Sale>(stream.events[e.event]);

        bool sale_route = false;
        if (scc_s.same_component(e.src, e.dst)) {
            uint32_t c = scc_s.comp_of_node[e.src];
            if (scc_s.members[c].size() <= cap) {
                if (e.src == e.dst)
                    sale_route = gs.multiplicity(e.src, e.src) >= eps;
                else if (pair_scope)
                    sale_route = gs.bidirectional_multiplicity(e.src, e.dst) >= eps;
                else
                    sale_route = comp_ok[c] != 0;
            }
        }

        bool transfer_route = false;
        auto ts = graphs.transfer.users.find(sale.seller);
        auto td = graphs.transfer.users.find(sale.buyer);
        if (ts && td && wcc_t.same_component(*ts, *td) && wcc_t.size_of(*ts) <= cap)
            transfer_route = true;

        bool payment_route = false;
        auto ps = graphs.payment.users.find(sale.seller);
        auto pd = graphs.payment.users.find(sale.buyer);
        if (ps && pd && wcc_p.components.same_component(*ps, *pd) &&
            wcc_p.components.size_of(*ps) <= cap)
            payment_route = true;

        if (!sale_route && !transfer_route && !payment_route) continue;

        std::pair<char, uint32_t> key;
        if (sale_route)
            key = {'s', scc_s.comp_of_node[e.src]};
        else if (transfer_route)
            key = {'t', wcc_t.comp_of_node[*ts]};
        else
            key = {'p', wcc_p.components.comp_of_node[*ps]};

        auto [it, fresh] = groups.try_emplace(key);
        Group& g = it->second;
        if (fresh) {
            if (key.first == 's')
                g.finding.members = member_addresses(scc_s.members[key.second], gs.users.nodes);
            else if (key.first == 't')
                g.finding.members =
                    member_addresses(wcc_t.members[key.second], graphs.transfer.users.nodes);
            else
                g.finding.members = member_addresses(wcc_p.components.members[key.second],
                                                     graphs.payment.users.nodes);
            g.finding.first_time = sale.time;
        }
        if (g.seen.insert(e.event).second) {
            g.finding.sales.push_back(e.event);
            g.finding.volume_usd_cents += sale.price_usd.cents;
            g.finding.first_time = std::min(g.finding.first_time, sale.time);
        }
        g.finding.via_sale_cycle |= sale_route;
        g.finding.via_transfer_link |= transfer_route;
        g.finding.via_payment_link |= payment_route;
    }

    for (auto& [key, g] : groups) {
        std::sort(g.finding.sales.begin(), g.finding.sales.end());
        out.findings.push_back(std::move(g.finding));
    }
    std::sort(out.findings.begin(), out.findings.end(),
              [](const WashFinding& a, const WashFinding& b) {
                  if (a.first_time != b.first_time) return a.first_time < b.first_time;
                  if (a.members != b.members) return a.members < b.members;
                  return a.sales < b.sales;
              });
    for (const auto& f : out.findings)
        out.flagged_sales.insert(out.flagged_sales.end(), f.sales.begin(), f.sales.end());
    std::sort(out.flagged_sales.begin(), out.flagged_sales.end());
    out.flagged_sales.erase(std::unique(out.flagged_sales.begin(), out.flagged_sales.end()),
                            out.flagged_sales.end());
    return out;
}

// Share of a collection's sale volume sitting in flagged sales.
struct CollectionVolume {
    int128 flagged_usd_cents = 0;
    int128 total_usd_cents = 0;

    std::optional<double> factor() const {
        if (total_usd_cents == 0) return std::nullopt;
        return double(flagged_usd_cents) / double(total_usd_cents);
    }
};

inline std::map<std::string, CollectionVolume> wash_volume_by_collection(
    const EventStream& stream, const WashAnalysis& analysis) {
    std::unordered_map<AssetId, const std::string*, AssetIdHash> slug_of;
    for (const auto& a : stream.assets) slug_of.emplace(a.id, &a.collection_slug);

    std::unordered_set<EventIndex> flagged(analysis.flagged_sales.begin(),
                                           analysis.flagged_sales.end());
    std::map<std::string, CollectionVolume> out;
    for (EventIndex i = 0; i < stream.events.size(); ++i) {
        auto* s = std::get_if<Sale>(&stream.events[i]);
        if (!s) continue;
        auto it = slug_of.find(s->asset);
        if (it == slug_of.end()) continue; // asset without a record: no collection to credit
        CollectionVolume& v = out[*it->second];
        v.total_usd_cents += s->price_usd.cents;
        if (flagged.count(i)) v.flagged_usd_cents += s->price_usd.cents;
    }
    return out;
}

// nullopt when the collection has no sale volume at all.
inline std::optional<double> wash_trade_factor(const std::string& collection_slug,
                                               const EventStream& stream,
                                               const WashAnalysis& analysis) {
    auto vols = wash_volume_by_collection(stream, analysis);
    auto it = vols.find(collection_slug);
    if (it == vols.end()) return std::nullopt;
    return it->second.factor();
}

} // namespace nftaudit
