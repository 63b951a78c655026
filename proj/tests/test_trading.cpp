#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>

#include "nftaudit/auctions.hpp"
#include "nftaudit/shield.hpp"
#include "nftaudit/shill.hpp"
#include "nftaudit/wash.hpp"
#include "builders.hpp"
#include "oracles.hpp"

using namespace nftaudit;
using fixture::acct;
using fixture::asset;
using fixture::StreamBuilder;

namespace {

struct Run {
    EventStream s;
    RelationGraphs g;
    std::map<std::string, Auction> au;

    explicit Run(EventStream stream) : s(std::move(stream)), g(build_graphs(s)),
                                       au(reconstruct_auctions(s)) {}

    WashAnalysis wash(const DetectorConfig& cfg = {}) const {
        return detect_wash_trades(s, g, cfg);
    }
    std::vector<ShillFinding> shill(const DetectorConfig& cfg = {}) const {
        return detect_shill_bids(s, g, au, cfg);
    }
    std::vector<ShieldFinding> shield(const DetectorConfig& cfg = {}) const {
        return detect_bid_shielding(s, au, cfg);
    }
};

// ring of `k` users, `m` sales per adjacent pair, split forward/backward;
// a 2-ring has a single adjacent pair
void add_ring(StreamBuilder& b, uint32_t first_user, uint32_t k, uint32_t m, AssetId a) {
    uint32_t pairs = k == 2 ? 1 : k;
    for (uint32_t p = 0; p < pairs; ++p) {
        uint32_t u = first_user + p, v = first_user + (p + 1) % k;
        for (uint32_t i = 0; i < (m + 1) / 2; ++i) b.sale(u, v, a, "10.00");
        for (uint32_t i = 0; i < m / 2; ++i) b.sale(v, u, a, "10.00");
    }
}

} // namespace

// ---- wash trading: brute-force oracle --------------------------------------
// Definitional re-implementation over address strings and adjacency maps:
// reachability closure for strong components, flood fill for weak ones,
// direct rule evaluation per sale. Shares no code with the detector.

namespace washoracle {

using Key = std::string;

struct Parts {
    std::vector<std::tuple<size_t, Key, Key, int64_t>> sales; // event idx, seller, buyer, cents
    std::set<Key> sale_users;
    std::map<std::pair<Key, Key>, int> mult;
    std::map<Key, std::set<Key>> transfer_adj, payment_adj; // undirected
    std::set<Key> transfer_users, payment_users;
};

inline Parts split(const EventStream& s) {
    Parts p;
    for (size_t i = 0; i < s.events.size(); ++i) {
        if (auto* sale = std::get_if<Sale>(&s.events[i])) {
            Key a = sale->seller.str(), b = sale->buyer.str();
            p.sales.emplace_back(i, a, b, sale->price_usd.cents);
            p.sale_users.insert(a);
            p.sale_users.insert(b);
            ++p.mult[{a, b}];
        } else if (auto* t = std::get_if<Transfer>(&s.events[i])) {
            Key a = t->from.str(), b = t->to.str();
            p.transfer_users.insert(a);
            p.transfer_users.insert(b);
            p.transfer_adj[a].insert(b);
            p.transfer_adj[b].insert(a);
        } else if (auto* pay = std::get_if<Paid>(&s.events[i])) {
            Key a = pay->from.str(), b = pay->to.str();
            p.payment_users.insert(a);
            p.payment_users.insert(b);
            p.payment_adj[a].insert(b);
            p.payment_adj[b].insert(a);
        }
    }
    return p;
}

inline std::map<Key, std::set<Key>> flood_components(const std::set<Key>& users,
                                                     const std::map<Key, std::set<Key>>& adj) {
    std::map<Key, std::set<Key>> comp_of;
    std::set<Key> done;
    for (const Key& start : users) {
        if (done.count(start)) continue;
        std::set<Key> comp{start};
        std::vector<Key> frontier{start};
        while (!frontier.empty()) {
            Key v = frontier.back();
            frontier.pop_back();
            auto it = adj.find(v);
            if (it == adj.end()) continue;
            for (const Key& w : it->second)
                if (users.count(w) && comp.insert(w).second) frontier.push_back(w);
        }
        for (const Key& v : comp) {
            comp_of[v] = comp;
            done.insert(v);
        }
    }
    return comp_of;
}

inline std::set<size_t> flagged(const EventStream& s, const DetectorConfig& cfg) {
    Parts p = split(s);
    const size_t cap = size_t(cfg.max_component_users);
    const int eps = cfg.epsilon;
    const bool pair_scope = cfg.epsilon_scope == DetectorConfig::EpsilonScope::pair;

    // strong components of the sale relation by mutual reachability
    std::map<Key, std::set<Key>> reach;
    for (const Key& u : p.sale_users) reach[u].insert(u);
    for (auto& [pr, n] : p.mult) reach[pr.first].insert(pr.second);
    for (const Key& k : p.sale_users)
        for (const Key& i : p.sale_users)
            if (reach[i].count(k))
                for (const Key& j : reach[k]) reach[i].insert(j);
    auto scc_of = [&](const Key& u) {
        std::set<Key> c;
        for (const Key& v : p.sale_users)
            if (reach[u].count(v) && reach[v].count(u)) c.insert(v);
        return c;
    };
    auto bidir = [&](const Key& a, const Key& b) {
        int n = 0;
        if (auto it = p.mult.find({a, b}); it != p.mult.end()) n += it->second;
        if (a != b)
            if (auto it = p.mult.find({b, a}); it != p.mult.end()) n += it->second;
        return n;
    };

    auto t_comp = flood_components(p.transfer_users, p.transfer_adj);

    // payment hubs: distinct neighbors (self excluded) above the cutoff
    std::set<Key> kept_pay = p.payment_users;
    for (const Key& u : p.payment_users) {
        std::set<Key> n = p.payment_adj[u];
        n.erase(u);
        if (int64_t(n.size()) > cfg.hub_degree_cutoff) kept_pay.erase(u);
    }
    std::map<Key, std::set<Key>> pay_adj_kept;
    for (const Key& u : kept_pay)
        for (const Key& v : p.payment_adj[u])
            if (kept_pay.count(v)) pay_adj_kept[u].insert(v);
    auto p_comp = flood_components(kept_pay, pay_adj_kept);

    std::set<size_t> out;
    for (auto& [idx, seller, buyer, cents] : p.sales) {
        bool hit = false;

        std::set<Key> comp = scc_of(seller);
        if (comp.count(buyer) && comp.size() <= cap) {
            if (seller == buyer) {
                hit = bidir(seller, seller) >= eps;
            } else if (pair_scope) {
                hit = bidir(seller, buyer) >= eps;
            } else {
                bool all_heavy = true;
                for (const Key& x : comp)
                    for (const Key& y : comp) {
                        if (x >= y) continue;
                        int n = bidir(x, y);
                        if (n >= 1 && n < eps) all_heavy = false;
                    }
                hit = all_heavy;
            }
        }
        if (!hit && t_comp.count(seller) && t_comp.count(buyer)) {
            const auto& c = t_comp[seller];
            if (c.count(buyer) && c.size() <= cap) hit = true;
        }
        if (!hit && p_comp.count(seller) && p_comp.count(buyer)) {
            const auto& c = p_comp[seller];
            if (c.count(buyer) && c.size() <= cap) hit = true;
        }
        if (hit) out.insert(idx);
    }
    return out;
}

} // namespace washoracle

TEST_CASE("wash detector agrees with the brute-force rules on random streams", "[trading]") {
    oracle::TestRng rng(20260818);
    for (int trial = 0; trial < 250; ++trial) {
        StreamBuilder b;
        uint32_t users = 2 + uint32_t(rng.below(7));
        AssetId a = asset(1, 1);
        uint32_t n_sales = uint32_t(rng.below(26));
        for (uint32_t i = 0; i < n_sales; ++i) {
            uint32_t s = 1 + uint32_t(rng.below(users));
            uint32_t d = rng.below(6) == 0 ? s : 1 + uint32_t(rng.below(users));
            b.sale(s, d, a, "10.00");
        }
        uint32_t n_tr = uint32_t(rng.below(9));
        for (uint32_t i = 0; i < n_tr; ++i)
            b.transfer(1 + uint32_t(rng.below(users)), 1 + uint32_t(rng.below(users)), a);
        uint32_t n_pay = uint32_t(rng.below(9));
        for (uint32_t i = 0; i < n_pay; ++i)
            b.paid(1 + uint32_t(rng.below(users)), 1 + uint32_t(rng.below(users)), 100);

        DetectorConfig cfg;
        const int eps_choices[] = {1, 2, 3, 10};
        const int cap_choices[] = {2, 3, 5, 50};
        const int hub_choices[] = {0, 1, 2, 1000};
        cfg.epsilon = eps_choices[rng.below(4)];
        cfg.max_component_users = cap_choices[rng.below(4)];
        cfg.hub_degree_cutoff = hub_choices[rng.below(4)];
        cfg.epsilon_scope = rng.below(2) == 0 ? DetectorConfig::EpsilonScope::component
                                              : DetectorConfig::EpsilonScope::pair;

        Run r(b.done());
        WashAnalysis got = r.wash(cfg);
        std::set<size_t> expect = washoracle::flagged(r.s, cfg);
        std::set<size_t> actual(got.flagged_sales.begin(), got.flagged_sales.end());
        REQUIRE(actual == expect);
    }
}

TEST_CASE("a heavy three-party sale ring is one wash finding", "[trading]") {
    StreamBuilder b;
    AssetId a = asset(1, 1);
    add_ring(b, 1, 3, 12, a);
    Run r(b.done());
    WashAnalysis w = r.wash();

    REQUIRE(w.findings.size() == 1);
    const WashFinding& f = w.findings[0];
    CHECK(f.sales.size() == 36);
    CHECK(f.members.size() == 3);
    CHECK(f.via_sale_cycle);
    CHECK_FALSE(f.via_transfer_link);
    CHECK_FALSE(f.via_payment_link);
    CHECK(f.volume_usd_cents == 36 * 1000);
    CHECK(w.flagged_sales.size() == 36);
}

TEST_CASE("light rings and boundary multiplicities", "[trading]") {
    SECTION("four trades per pair stay under the default threshold") {
        StreamBuilder b;
        add_ring(b, 1, 3, 4, asset(1, 1));
        Run r(b.done());
        CHECK(r.wash().findings.empty());
    }
    SECTION("exactly epsilon trades qualify, one less does not") {
        StreamBuilder b10;
        add_ring(b10, 1, 2, 10, asset(1, 1));
        Run r10(b10.done());
        CHECK(r10.wash().flagged_sales.size() == 10);

        StreamBuilder b9;
        add_ring(b9, 1, 2, 9, asset(1, 1));
        Run r9(b9.done());
        CHECK(r9.wash().findings.empty());
    }
    SECTION("component user cap is inclusive") {
        StreamBuilder b50;
        add_ring(b50, 1, 50, 10, asset(1, 1));
        Run r50(b50.done());
        REQUIRE(r50.wash().findings.size() == 1);
        CHECK(r50.wash().findings[0].members.size() == 50);

        StreamBuilder b51;
        add_ring(b51, 1, 51, 10, asset(1, 1));
        Run r51(b51.done());
        CHECK(r51.wash().findings.empty());
    }
}

TEST_CASE("self-sales are wash trades once they repeat enough", "[trading]") {
    StreamBuilder b;
    for (int i = 0; i < 10; ++i) b.sale(7, 7, asset(1, 1), "5.00");
    Run r(b.done());
    REQUIRE(r.wash().findings.size() == 1);
    CHECK(r.wash().findings[0].sales.size() == 10);
    CHECK(r.wash().findings[0].members == std::vector<AccountId>{acct(7)});

    StreamBuilder b9;
    for (int i = 0; i < 9; ++i) b9.sale(7, 7, asset(1, 1), "5.00");
    Run r9(b9.done());
    CHECK(r9.wash().findings.empty());
}

TEST_CASE("funding and transfer trails flag sales the cycle filter misses", "[trading]") {
    SECTION("payment link, including the common-funder pattern") {
        StreamBuilder b;
        b.paid(3, 1, 1000).paid(3, 2, 1000); // one wallet funds both sides
        b.sale(1, 2, asset(1, 1), "100.00");
        Run r(b.done());
        WashAnalysis w = r.wash();
        REQUIRE(w.findings.size() == 1);
        CHECK(w.findings[0].via_payment_link);
        CHECK_FALSE(w.findings[0].via_sale_cycle);
        CHECK(w.findings[0].members.size() == 3); // funder rides along in the component
    }
    SECTION("transfer link") {
        StreamBuilder b;
        b.transfer(1, 2, asset(1, 1));
        b.sale(2, 1, asset(1, 1), "100.00");
        Run r(b.done());
        REQUIRE(r.wash().findings.size() == 1);
        CHECK(r.wash().findings[0].via_transfer_link);
    }
    SECTION("both weak links fold into one finding with both triggers") {
        StreamBuilder b;
        b.transfer(1, 2, asset(1, 1)).paid(1, 2, 5);
        b.sale(1, 2, asset(1, 1), "10.00").sale(2, 1, asset(1, 1), "10.00");
        Run r(b.done());
        WashAnalysis w = r.wash();
        REQUIRE(w.findings.size() == 1);
        CHECK(w.findings[0].via_transfer_link);
        CHECK(w.findings[0].via_payment_link);
        CHECK(w.findings[0].sales.size() == 2);
    }
    SECTION("weak component cap applies") {
        StreamBuilder b;
        // transfer chain of 51 users, then a sale across it
        for (uint32_t u = 1; u <= 50; ++u) b.transfer(u, u + 1, asset(1, 1));
        b.sale(1, 51, asset(1, 1), "10.00");
        Run r(b.done());
        CHECK(r.wash().findings.empty());
    }
}

TEST_CASE("payment hubs are excluded before the weak-component route", "[trading]") {
    StreamBuilder b;
    DetectorConfig cfg;
    cfg.hub_degree_cutoff = 2;
    // exchange wallet 9 funds users 1..3 (three distinct neighbors > 2)
    b.paid(9, 1, 10).paid(9, 2, 10).paid(9, 3, 10);
    b.sale(1, 2, asset(1, 1), "50.00");
    Run r(b.done());

    WashAnalysis w = r.wash(cfg);
    CHECK(w.findings.empty());
    CHECK(w.excluded_payment_hubs == std::vector<AccountId>{acct(9)});

    // with the default cutoff the same wallet is just a mutual funder
    WashAnalysis loose = r.wash();
    CHECK(loose.findings.size() == 1);
    CHECK(loose.excluded_payment_hubs.empty());
}

TEST_CASE("epsilon scope switches the pair filter quantifier", "[trading]") {
    StreamBuilder b;
    AssetId a = asset(1, 1);
    // a<->b heavy (12), b<->c and c<->a light; one strong component of 3
    for (int i = 0; i < 6; ++i) b.sale(1, 2, a, "10.00");
    for (int i = 0; i < 6; ++i) b.sale(2, 1, a, "10.00");
    b.sale(2, 3, a, "10.00").sale(3, 2, a, "10.00");
    b.sale(3, 1, a, "10.00").sale(1, 3, a, "10.00");
    Run r(b.done());

    DetectorConfig component_scope;
    CHECK(r.wash(component_scope).findings.empty());

    DetectorConfig pair_scope;
    pair_scope.epsilon_scope = DetectorConfig::EpsilonScope::pair;
    WashAnalysis w = r.wash(pair_scope);
    REQUIRE(w.findings.size() == 1);
    CHECK(w.findings[0].sales.size() == 12); // only the heavy pair's sales
}

TEST_CASE("wash trade factor is flagged volume over collection volume", "[trading]") {
    StreamBuilder b;
    AssetId kitten = asset(1, 1), honest_kitten = asset(1, 2), other = asset(2, 1);
    b.record(kitten, "kittens").record(honest_kitten, "kittens").record(other, "other");
    b.transfer(1, 2, kitten);
    b.sale(1, 2, kitten, "60.00").sale(2, 1, kitten, "40.00"); // flagged: transfer-linked
    b.sale(3, 4, honest_kitten, "300.00");
    b.sale(5, 6, other, "10.00");
    Run r(b.done());
    WashAnalysis w = r.wash();
    REQUIRE(w.flagged_sales.size() == 2);

    auto factor = wash_trade_factor("kittens", r.s, w);
    REQUIRE(factor);
    CHECK(*factor == 0.25); // 100 of 400, exact in cents

    CHECK(*wash_trade_factor("other", r.s, w) == 0.0);
    CHECK_FALSE(wash_trade_factor("absent", r.s, w)); // no volume, no factor

    auto vols = wash_volume_by_collection(r.s, w);
    CHECK(vols["kittens"].flagged_usd_cents == 10000);
    CHECK(vols["kittens"].total_usd_cents == 40000);
}

// ---- shill bidding ----------------------------------------------------------

namespace {

// the worked escalation: reserve 2, shill pushes 3.30 -> 8.14, outsider
// takes it at 9; expected profit over the reserve is exactly 7
StreamBuilder shill_base() {
    StreamBuilder b;
    AssetId a = asset(3, 1);
    b.paid(10, 20, 1000); // seller 10 funds bidder 20
    b.auction_start(10, "2.00", "au-1", a);
    b.bid(20, "3.30", "au-1", a);
    b.bid(20, "4.40", "au-1", a);
    b.bid(20, "5.50", "au-1", a);
    b.bid(20, "6.71", "au-1", a);
    b.bid(20, "8.14", "au-1", a);
    b.bid(30, "9.00", "au-1", a);
    b.win(30, "9.00", "au-1", a);
    b.auction_end("au-1", a);
    return b;
}

} // namespace

TEST_CASE("the escalating linked bidder is flagged with exact profit", "[trading]") {
    Run r(shill_base().done());
    auto f = r.shill();
    REQUIRE(f.size() == 1);
    CHECK(f[0].bidder == acct(20));
    CHECK(f[0].seller == acct(10));
    CHECK(f[0].auction_id == "au-1");
    CHECK(f[0].bid_count == 5);
    CHECK(f[0].score_num == 1);
    CHECK(f[0].score_den == 1);
    CHECK(f[0].linked_by_payment);
    CHECK_FALSE(f[0].linked_by_transfer);
    REQUIRE(f[0].profit);
    CHECK(f[0].profit->cents == 700); // 9.00 - 2.00, exact
}

TEST_CASE("each shill condition is necessary", "[trading]") {
    SECTION("escalation must be strict in amount") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "4.40", "au-1", a);
        Run r(b.done());
        CHECK(r.shill().empty());
    }
    SECTION("escalation must be strict in time") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a, 5000);
        b.bid(20, "4.40", "au-1", a, 5000); // same second
        b.bid(20, "5.50", "au-1", a, 5001);
        Run r(b.done());
        CHECK(r.shill().empty());
    }
    SECTION("a winning bidder is not a shill") {
        StreamBuilder b = shill_base();
        AssetId a = asset(3, 1);
        b.bid(20, "9.50", "au-1", a).win(20, "9.50", "au-1", a);
        // the earlier win by 30 is still first in stream order; rebuild without it
        StreamBuilder c;
        c.paid(10, 20, 1000);
        c.auction_start(10, "2.00", "au-1", a);
        c.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "5.50", "au-1", a);
        c.win(20, "5.50", "au-1", a);
        Run r(c.done());
        CHECK(r.shill().empty());
    }
    SECTION("sale-active accounts are screened out by sigma") {
        StreamBuilder b = shill_base();
        for (uint32_t i = 0; i < 10; ++i) b.sale(40 + i, 20, asset(9, i), "1.00");
        Run r(b.done());
        CHECK(r.shill().empty());

        StreamBuilder b9 = shill_base();
        for (uint32_t i = 0; i < 9; ++i) b9.sale(40 + i, 20, asset(9, i), "1.00");
        Run r9(b9.done());
        CHECK(r9.shill().size() == 1);
    }
    SECTION("self-sales count once toward participation") {
        StreamBuilder b = shill_base();
        b.sale(20, 20, asset(9, 0), "1.00");
        for (uint32_t i = 1; i < 9; ++i) b.sale(40 + i, 20, asset(9, i), "1.00");
        Run r(b.done());
        CHECK(r.shill().size() == 1); // 9 participations, still under sigma
    }
    SECTION("no relation to the seller, no finding") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "5.50", "au-1", a);
        b.bid(30, "9.00", "au-1", a).win(30, "9.00", "au-1", a);
        Run r(b.done());
        CHECK(r.shill().empty());
    }
    SECTION("transfer connectivity works as well as payment") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.transfer(10, 20, asset(8, 1));
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "5.50", "au-1", a);
        Run r(b.done());
        REQUIRE(r.shill().size() == 1);
        CHECK(r.shill()[0].linked_by_transfer);
        CHECK_FALSE(r.shill()[0].linked_by_payment);
    }
    SECTION("fewer than min_bids never qualifies") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a);
        Run r(b.done());
        CHECK(r.shill().empty());
    }
}

TEST_CASE("the concentration ratio is exact at the boundary", "[trading]") {
    auto build = [](int seller_auctions, int other_auctions) {
        StreamBuilder b;
        b.paid(10, 20, 1000);
        for (int k = 0; k < seller_auctions; ++k) {
            AssetId a = asset(3, uint32_t(k));
            std::string id = "au-s" + std::to_string(k);
            b.auction_start(10, "2.00", id, a);
            b.bid(20, "3.00", id, a).bid(20, "4.00", id, a).bid(20, "5.00", id, a);
        }
        for (int k = 0; k < other_auctions; ++k) {
            AssetId a = asset(4, uint32_t(k));
            std::string id = "au-x" + std::to_string(k);
            b.auction_start(90, "2.00", id, a);
            b.bid(20, "3.00", id, a).bid(20, "4.00", id, a).bid(20, "5.00", id, a);
        }
        return Run(b.done());
    };
    // 4 of 5 is exactly mu = 0.8: not strictly greater, no findings
    CHECK(build(4, 1).shill().empty());
    // 5 of 6 clears it; one finding per seller auction
    CHECK(build(5, 1).shill().size() == 5);
}

TEST_CASE("shill profit falls back to reserve only without earlier honest bids", "[trading]") {
    SECTION("an honest bid before the shill moves the floor") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(50, "4.00", "au-1", a); // honest, before the shill
        b.bid(20, "4.50", "au-1", a).bid(20, "5.50", "au-1", a).bid(20, "6.50", "au-1", a);
        b.bid(30, "9.00", "au-1", a).win(30, "9.00", "au-1", a);
        Run r(b.done());
        auto f = r.shill();
        REQUIRE(f.size() == 1);
        REQUIRE(f[0].profit);
        CHECK(f[0].profit->cents == 500); // 9.00 - 4.00
    }
    SECTION("honest bids after the first shill bid do not count") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "5.50", "au-1", a);
        b.bid(50, "6.00", "au-1", a); // late outsider
        b.bid(30, "9.00", "au-1", a).win(30, "9.00", "au-1", a);
        Run r(b.done());
        auto f = r.shill();
        REQUIRE(f.size() == 1);
        CHECK(f[0].profit->cents == 700);
    }
    SECTION("unsold auctions have no realized profit") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(20, "3.30", "au-1", a).bid(20, "4.40", "au-1", a).bid(20, "5.50", "au-1", a);
        Run r(b.done());
        auto f = r.shill();
        REQUIRE(f.size() == 1);
        CHECK_FALSE(f[0].profit);
    }
    SECTION("profit never goes negative") {
        StreamBuilder b;
        AssetId a = asset(3, 1);
        b.paid(10, 20, 1000);
        b.auction_start(10, "2.00", "au-1", a);
        b.bid(50, "8.00", "au-1", a); // honest bid above the eventual sale
        b.bid(20, "8.10", "au-1", a).bid(20, "8.20", "au-1", a).bid(20, "8.30", "au-1", a);
        b.bid(30, "8.40", "au-1", a).win(30, "7.00", "au-1", a); // sold under the floor
        Run r(b.done());
        auto f = r.shill();
        REQUIRE(f.size() == 1);
        CHECK(f[0].profit->cents == 0);
    }
}

// ---- bid shielding ----------------------------------------------------------

TEST_CASE("the shield pattern yields one finding with the exact difference", "[trading]") {
    StreamBuilder b;
    AssetId a = asset(5, 1);
    b.auction_start(9, "50.00", "au-1", a);
    b.bid(1, "100.00", "au-1", a);
    b.bid(2, "500.00", "au-1", a);
    b.cancel_bid(2, "500.00", "au-1", a);
    b.win(1, "100.00", "au-1", a);
    Run r(b.done());

    auto f = r.shield();
    REQUIRE(f.size() == 1);
    CHECK(f[0].winner == acct(1));
    CHECK(f[0].canceller == acct(2));
    CHECK(f[0].winning_amount.cents == 10000);
    CHECK(f[0].cancelled_amount.cents == 50000);
    CHECK(f[0].difference.cents == 40000); // exactly 400.00
}

TEST_CASE("shield negatives", "[trading]") {
    AssetId a = asset(5, 1);
    SECTION("a bid after the cancel clears the pattern") {
        StreamBuilder b;
        b.auction_start(9, "50.00", "au-1", a);
        b.bid(1, "100.00", "au-1", a).bid(2, "500.00", "au-1", a);
        b.cancel_bid(2, "500.00", "au-1", a);
        b.bid(3, "120.00", "au-1", a);
        b.win(1, "100.00", "au-1", a);
        Run r(b.done());
        CHECK(r.shield().empty());
    }
    SECTION("the canceller winning is not shielding") {
        StreamBuilder b;
        b.auction_start(9, "50.00", "au-1", a);
        b.bid(1, "100.00", "au-1", a).bid(2, "500.00", "au-1", a);
        b.cancel_bid(2, "500.00", "au-1", a);
        b.win(2, "500.00", "au-1", a);
        Run r(b.done());
        CHECK(r.shield().empty());
    }
    SECTION("the cancelled amount must exceed the winning price") {
        StreamBuilder b;
        b.auction_start(9, "50.00", "au-1", a);
        b.bid(1, "100.00", "au-1", a).bid(2, "100.00", "au-1", a);
        b.cancel_bid(2, "100.00", "au-1", a);
        b.win(1, "100.00", "au-1", a);
        Run r(b.done());
        CHECK(r.shield().empty());
    }
    SECTION("two independent shields are two findings") {
        StreamBuilder b;
        b.auction_start(9, "50.00", "au-1", a);
        b.bid(1, "100.00", "au-1", a).bid(2, "500.00", "au-1", a).bid(3, "600.00", "au-1", a);
        b.cancel_bid(2, "500.00", "au-1", a);
        b.cancel_bid(3, "600.00", "au-1", a);
        b.win(1, "100.00", "au-1", a);
        Run r(b.done());
        auto f = r.shield();
        REQUIRE(f.size() == 2);
        CHECK(f[0].canceller == acct(2));
        CHECK(f[1].canceller == acct(3));
        CHECK(f[0].cancel_time <= f[1].cancel_time);
    }
}

TEST_CASE("optional shield strictness screens", "[trading]") {
    AssetId a = asset(5, 1);
    SECTION("cancel must sit close to the close when the window is on") {
        auto build = [&](Timestamp cancel_at, Timestamp end_at) {
            StreamBuilder b;
            b.auction_start(9, "50.00", "au-1", a, 1000);
            b.bid(1, "100.00", "au-1", a, 1100);
            b.bid(2, "500.00", "au-1", a, 1200);
            b.cancel_bid(2, "500.00", "au-1", a, cancel_at);
            b.win(1, "100.00", "au-1", a, end_at);
            b.auction_end("au-1", a, end_at);
            return Run(b.done());
        };
        DetectorConfig strict;
        strict.shield_cancel_window_seconds = 7200;
        CHECK(build(20000, 30000).shield(strict).empty());      // 10000s early
        CHECK(build(26000, 30000).shield(strict).size() == 1);  // 4000s early
        CHECK(build(26000, 30000).shield().size() == 1);        // off by default
    }
    SECTION("interleaved rivalry suppresses the pair when enabled") {
        StreamBuilder b;
        b.auction_start(9, "50.00", "au-1", a);
        b.bid(1, "100.00", "au-1", a);
        b.bid(2, "200.00", "au-1", a);
        b.bid(1, "300.00", "au-1", a); // 1 answers 2: two lead changes
        b.bid(2, "500.00", "au-1", a);
        b.cancel_bid(2, "500.00", "au-1", a);
        b.win(1, "300.00", "au-1", a);
        Run r(b.done());
        CHECK(r.shield().size() == 1);
        DetectorConfig strict;
        strict.shield_skip_rivals = true;
        CHECK(r.shield(strict).empty());
    }
}

// ---- auctions lost by the top bid --------------------------------------------

TEST_CASE("auctions that close under the top bid are reported", "[trading]") {
    AssetId a = asset(6, 1);
    SECTION("winner below the maximum") {
        StreamBuilder b;
        b.auction_start(9, "1.00", "au-1", a);
        b.bid(1, "5.00", "au-1", a).bid(2, "7.00", "au-1", a);
        b.win(1, "5.00", "au-1", a);
        Run r(b.done());
        auto f = detect_failed_highest_bid(r.s, r.au);
        REQUIRE(f.size() == 1);
        CHECK(f[0].highest_bidder == acct(2));
        CHECK(f[0].highest_amount.cents == 700);
        CHECK(f[0].winner == acct(1));
    }
    SECTION("winner at the maximum is clean") {
        StreamBuilder b;
        b.auction_start(9, "1.00", "au-1", a);
        b.bid(1, "5.00", "au-1", a).bid(2, "7.00", "au-1", a);
        b.win(2, "7.00", "au-1", a);
        Run r(b.done());
        CHECK(detect_failed_highest_bid(r.s, r.au).empty());
    }
    SECTION("a tie including the winner is not an instance") {
        StreamBuilder b;
        b.auction_start(9, "1.00", "au-1", a);
        b.bid(1, "7.00", "au-1", a).bid(2, "7.00", "au-1", a);
        b.win(2, "7.00", "au-1", a);
        Run r(b.done());
        CHECK(detect_failed_highest_bid(r.s, r.au).empty());
    }
    SECTION("a tie excluding the winner reports the earliest top bidder") {
        StreamBuilder b;
        b.auction_start(9, "1.00", "au-1", a);
        b.bid(1, "7.00", "au-1", a).bid(2, "7.00", "au-1", a);
        b.win(3, "7.00", "au-1", a);
        Run r(b.done());
        auto f = detect_failed_highest_bid(r.s, r.au);
        REQUIRE(f.size() == 1);
        CHECK(f[0].highest_bidder == acct(1));
    }
    SECTION("no bids, no instance") {
        StreamBuilder b;
        b.auction_start(9, "1.00", "au-1", a);
        b.win(3, "7.00", "au-1", a);
        Run r(b.done());
        CHECK(detect_failed_highest_bid(r.s, r.au).empty());
    }
}
