#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "nftaudit/model.hpp"

namespace nftaudit {

// Plain directed multigraph over dense node ids. Parallel edges and self
// loops are allowed; annotations live with the owning typed graph.
struct Digraph {
    uint32_t node_count = 0;
    std::vector<std::pair<uint32_t, uint32_t>> edges;
};

// CSR adjacency over a Digraph.
struct Adjacency {
    std::vector<uint32_t> offsets;
    std::vector<uint32_t> targets;

    static Adjacency build(const Digraph& g, bool undirected) {
        Adjacency a;
        a.offsets.assign(g.node_count + 1, 0);
        for (auto [s, d] : g.edges) {
            ++a.offsets[s + 1];
            if (undirected && s != d) ++a.offsets[d + 1];
        }
        for (size_t i = 1; i < a.offsets.size(); ++i) a.offsets[i] += a.offsets[i - 1];
        a.targets.resize(a.offsets.back());
        std::vector<uint32_t> cursor(a.offsets.begin(), a.offsets.end() - 1);
        for (auto [s, d] : g.edges) {
            a.targets[cursor[s]++] = d;
            if (undirected && s != d) a.targets[cursor[d]++] = s;
        }
        return a;
    }

    uint32_t degree(uint32_t v) const { return offsets[v + 1] - offsets[v]; }
    uint32_t target(uint32_t v, uint32_t i) const { return targets[offsets[v] + i]; }
};

struct AccountInterner {
    std::vector<AccountId> nodes;
    std::unordered_map<AccountId, uint32_t, AccountIdHash> index;

    uint32_t intern(const AccountId& a) {
        auto [it, fresh] = index.emplace(a, uint32_t(nodes.size()));
        if (fresh) nodes.push_back(a);
        return it->second;
    }
    std::optional<uint32_t> find(const AccountId& a) const {
        auto it = index.find(a);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
    uint32_t size() const { return uint32_t(nodes.size()); }
};

struct AssetInterner {
    std::vector<AssetId> nodes;
    std::unordered_map<AssetId, uint32_t, AssetIdHash> index;

    uint32_t intern(const AssetId& a) {
        auto [it, fresh] = index.emplace(a, uint32_t(nodes.size()));
        if (fresh) nodes.push_back(a);
        return it->second;
    }
    std::optional<uint32_t> find(const AssetId& a) const {
        auto it = index.find(a);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }
    uint32_t size() const { return uint32_t(nodes.size()); }
};

struct UserEdge {
    uint32_t src = 0, dst = 0;
    EventIndex event = 0;
};

namespace detail {
inline uint64_t pair_key(uint32_t a, uint32_t b) { return uint64_t(a) << 32 | b; }
}

// Sale relation: one edge per sale, seller to buyer.
struct SaleGraph {
    AccountInterner users;
    std::vector<UserEdge> edges;
    std::unordered_map<uint64_t, uint32_t> pair_mult; // directed (src,dst) sale count

    void add(uint32_t s, uint32_t d, EventIndex e) {
        edges.push_back({s, d, e});
        ++pair_mult[detail::pair_key(s, d)];
    }
    uint32_t multiplicity(uint32_t s, uint32_t d) const {
        auto it = pair_mult.find(detail::pair_key(s, d));
        return it == pair_mult.end() ? 0 : it->second;
    }
    uint32_t bidirectional_multiplicity(uint32_t a, uint32_t b) const {
        return multiplicity(a, b) + (a == b ? 0 : multiplicity(b, a));
    }
    Digraph digraph() const {
        Digraph g{users.size(), {}};
        g.edges.reserve(edges.size());
        for (auto& e : edges) g.edges.emplace_back(e.src, e.dst);
        return g;
    }
};

// Payment relation: one edge per eth transfer, payer to payee.
struct PaymentGraph {
    AccountInterner users;
    std::vector<UserEdge> edges;

    void add(uint32_t s, uint32_t d, EventIndex e) { edges.push_back({s, d, e}); }
    Digraph digraph() const {
        Digraph g{users.size(), {}};
        g.edges.reserve(edges.size());
        for (auto& e : edges) g.edges.emplace_back(e.src, e.dst);
        return g;
    }
};

// Asset transfer relation: one edge per transfer, sender to receiver.
using TransferGraph = PaymentGraph;

enum class BidEdgeKind { auction, bid, cancel_bid, win };

inline const char* to_string(BidEdgeKind k) {
    switch (k) {
        case BidEdgeKind::auction: return "auction";
        case BidEdgeKind::bid: return "bid";
        case BidEdgeKind::cancel_bid: return "cancel_bid";
        case BidEdgeKind::win: return "win";
    }
    return "bid";
}

// Bid relation: bipartite, user to asset, labelled by interaction kind.
struct BidGraph {
    AccountInterner users;
    AssetInterner assets;
    struct Edge {
        uint32_t user = 0, asset = 0;
        BidEdgeKind kind = BidEdgeKind::bid;
        EventIndex event = 0;
    };
    std::vector<Edge> edges;
};

struct RelationGraphs {
    SaleGraph sale;
    BidGraph bid;
    PaymentGraph payment;
    TransferGraph transfer;
};

// One edge per event that expresses a relation; mints and auction closes
// carry no edge.
inline RelationGraphs build_graphs(const EventStream& stream) {
    RelationGraphs g;
    for (EventIndex i = 0; i < stream.events.size(); ++i) {
        const Event& e = stream.events[i];
        if (auto* s = std::get_if<Sale>(&e)) {
            g.sale.add(g.sale.users.intern(s->seller), g.sale.users.intern(s->buyer), i);
        } else if (auto* a = std::get_if<AuctionStart>(&e)) {
            g.bid.edges.push_back(
                {g.bid.users.intern(a->seller), g.bid.assets.intern(a->asset), BidEdgeKind::auction, i});
        } else if (auto* b = std::get_if<Bid>(&e)) {
            g.bid.edges.push_back(
                {g.bid.users.intern(b->bidder), g.bid.assets.intern(b->asset), BidEdgeKind::bid, i});
        } else if (auto* c = std::get_if<CancelBid>(&e)) {
            g.bid.edges.push_back({g.bid.users.intern(c->bidder), g.bid.assets.intern(c->asset),
                                   BidEdgeKind::cancel_bid, i});
        } else if (auto* w = std::get_if<Win>(&e)) {
            g.bid.edges.push_back(
                {g.bid.users.intern(w->winner), g.bid.assets.intern(w->asset), BidEdgeKind::win, i});
        } else if (auto* p = std::get_if<Paid>(&e)) {
            g.payment.add(g.payment.users.intern(p->from), g.payment.users.intern(p->to), i);
        } else if (auto* t = std::get_if<Transfer>(&e)) {
            g.transfer.add(g.transfer.users.intern(t->from), g.transfer.users.intern(t->to), i);
        }
    }
    return g;
}

// ---- debug emission ------------------------------------------------------

inline std::string edge_list_tsv(const SaleGraph& g, const EventStream& stream) {
    std::string out = "seller\tbuyer\tasset\tprice_usd\ttime\n";
    for (auto& e : g.edges) {
        const auto& s = std::get<Sale>(stream.events[e.event]);
        out += g.users.nodes[e.src].str() + "\t" + g.users.nodes[e.dst].str() + "\t" +
               s.asset.str() + "\t" + s.price_usd.str() + "\t" + std::to_string(s.time) + "\n";
    }
    return out;
}

inline std::string edge_list_tsv(const PaymentGraph& g, const EventStream& stream,
                                 bool transfers) {
    std::string out = transfers ? std::string("from\tto\tasset\ttime\n")
                                : std::string("from\tto\tamount_wei\ttime\n");
    for (auto& e : g.edges) {
        out += g.users.nodes[e.src].str() + "\t" + g.users.nodes[e.dst].str() + "\t";
        if (transfers) {
            const auto& t = std::get<Transfer>(stream.events[e.event]);
            out += t.asset.str() + "\t" + std::to_string(t.time) + "\n";
        } else {
            const auto& p = std::get<Paid>(stream.events[e.event]);
            out += p.amount_wei.str() + "\t" + std::to_string(p.time) + "\n";
        }
    }
    return out;
}

inline std::string edge_list_tsv(const BidGraph& g) {
    std::string out = "user\tasset\tkind\n";
    for (auto& e : g.edges)
        out += g.users.nodes[e.user].str() + "\t" + g.assets.nodes[e.asset].str() + "\t" +
               to_string(e.kind) + "\n";
    return out;
}

} // namespace nftaudit
