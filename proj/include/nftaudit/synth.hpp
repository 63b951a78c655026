#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nftaudit/address.hpp"
#include "nftaudit/decimal.hpp"
#include "nftaudit/ingest.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// Deterministic marketplace simulation: a clean baseline with known-bad
// patterns spliced in on demand, every planted event labeled. The baseline is
// clean by construction, not by luck: sales run strictly from lower to higher
// user index (no cycles), each buyer is funded by a private faucet (no payment
// path between counterparties), nothing ever transfers off-platform, and no
// auction bidder places more than two bids.

struct SynthError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SynthOptions {
    uint64_t seed = 42;
    uint32_t users = 200;
    uint32_t sales = 2000;
    uint32_t collections = 4;
    uint32_t assets_per_collection = 50;
    uint32_t benign_auctions = 10;
};

struct RingSpec {
    uint32_t k = 3;  // accounts in the ring
    uint32_t m = 12; // sales per adjacent pair, split across both directions
};

struct InjectionPlan {
    std::vector<RingSpec> wash_rings;
    uint32_t shill_auctions = 0;
    uint32_t shield_auctions = 0;
};

struct InjectionLabel {
    std::string kind; // "wash_ring", "shill_auction", "bid_shield"
    std::vector<AccountId> accounts;
    std::vector<uint32_t> events; // indices into the final sorted stream
};

struct SynthResult {
    EventStream stream;
    std::vector<InjectionLabel> labels;
};

namespace detail {

// mt19937_64 raw output is pinned by the standard; the bound mapping here is
// ours so streams replay identically on any platform.
struct SynthRng {
    std::mt19937_64 eng;

    explicit SynthRng(uint64_t seed) : eng(seed) {}

    uint64_t below(uint64_t n) { // n > 0
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = eng();
        } while (v >= limit);
        return v % n;
    }
};

// Address space carved up by tag byte so planted accounts can never collide
// with baseline ones: 0x01 traders, 0x02 faucets, 0xee injected.
inline AccountId synth_account(uint8_t tag, uint32_t index) {
    AccountId a{};
    a.bytes[0] = tag;
    a.bytes[16] = uint8_t(index >> 24);
    a.bytes[17] = uint8_t(index >> 16);
    a.bytes[18] = uint8_t(index >> 8);
    a.bytes[19] = uint8_t(index);
    return a;
}

inline AssetId synth_asset(uint8_t tag, uint32_t contract, uint32_t token) {
    AccountId c{};
    c.bytes[0] = tag;
    c.bytes[18] = uint8_t(contract >> 8);
    c.bytes[19] = uint8_t(contract);
    return AssetId{c, std::to_string(token)};
}

// Counter rendered as a well-formed content id: "Qm" plus 44 base58 digits.
inline std::string synth_cid(uint64_t counter) {
    static const char* alphabet =
        "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";
    std::string digits(44, '1');
    for (size_t at = 43; counter != 0 && at < 44; --at) {
        digits[at] = alphabet[counter % 58];
        counter /= 58;
    }
    return "Qm" + digits;
}

} // namespace detail

inline SynthResult synthesize(const SynthOptions& opt, const InjectionPlan& plan) {
    if (opt.users < 2) throw SynthError("synthesis needs at least two users");
    uint64_t capacity = uint64_t(opt.users) * (opt.users - 1) / 2;
    if (opt.sales > capacity)
        throw SynthError("sale count exceeds the " + std::to_string(capacity) +
                         " distinct low-to-high user pairs");
    if (opt.benign_auctions > 0 && opt.users < 3)
        throw SynthError("auctions need a seller and two bidders");
    if (opt.collections == 0 || opt.assets_per_collection == 0)
        throw SynthError("synthesis needs at least one asset");
    for (const auto& ring : plan.wash_rings) {
        if (ring.k < 2) throw SynthError("a wash ring needs at least two accounts");
        if (ring.k == 2 && ring.m < 2)
            throw SynthError("a two-account wash ring needs at least two sales to cycle");
    }

    detail::SynthRng rng(opt.seed);
    Timestamp clock = 1'600'000'000;
    auto next_time = [&] { return clock += 60; };

    EventStream stream;

    // asset pool with records and unique hosting urls
    std::vector<AssetId> pool;
    uint64_t cid_counter = 1;
    for (uint32_t c = 0; c < opt.collections; ++c) {
        for (uint32_t t = 1; t <= opt.assets_per_collection; ++t) {
            AssetId id = detail::synth_asset(0xc0, c, t);
            pool.push_back(id);
            AssetRecord r;
            r.id = id;
            r.collection_slug = "synthetic-" + std::to_string(c);
            r.collection_name = "Synthetic Collection " + std::to_string(c);
            r.image_url = "ipfs://" + detail::synth_cid(cid_counter++);
            r.metadata_url = "https://meta.invalid/" + std::to_string(c) + "/" +
                             std::to_string(t);
            stream.assets.push_back(std::move(r));
        }
    }

    auto user = [&](uint32_t i) { return detail::synth_account(0x01, i); };
    auto pick_asset = [&] { return pool[size_t(rng.below(pool.size()))]; };
    auto price = [&] {
        return Usd::from_cents(int64_t(500 + rng.below(49600)));
    };

    // mints: every asset enters the record with a creator
    for (size_t i = 0; i < pool.size(); ++i)
        stream.events.emplace_back(
            Mint{user(uint32_t(i % opt.users)), pool[i], next_time()});

    // baseline sales: a shuffled draw of distinct low-to-high pairs
    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    pairs.reserve(size_t(capacity));
    for (uint32_t i = 0; i < opt.users; ++i)
        for (uint32_t j = i + 1; j < opt.users; ++j) pairs.emplace_back(i, j);
    for (size_t i = pairs.size(); i > 1; --i)
        std::swap(pairs[i - 1], pairs[size_t(rng.below(i))]);

    const Royalty baseline_royalty{50'000'000}; // 0.05
    std::unordered_map<uint32_t, Timestamp> first_purchase;
    for (uint32_t n = 0; n < opt.sales; ++n) {
        auto [se, bu] = pairs[n];
        Timestamp t = next_time();
        stream.events.emplace_back(Sale{user(se), user(bu), pick_asset(), price(), Eth{0},
                                        baseline_royalty, t, std::nullopt});
        first_purchase.try_emplace(bu, t);
    }

    // faucet funding, placed inside the idle half-minute before the first buy
    for (uint32_t i = 0; i < opt.users; ++i) {
        auto it = first_purchase.find(i);
        if (it == first_purchase.end()) continue;
        stream.events.emplace_back(Paid{detail::synth_account(0x02, i), user(i),
                                        Wei{uint128(1) << 60}, it->second - 30,
                                        std::nullopt});
    }

    // benign auctions: two bidders, one bid each, best bid last and winning
    for (uint32_t n = 0; n < opt.benign_auctions; ++n) {
        uint32_t se = uint32_t(rng.below(opt.users));
        uint32_t b1 = (se + 1 + uint32_t(rng.below(opt.users - 1))) % opt.users;
        uint32_t b2 = b1;
        while (b2 == b1 || b2 == se) b2 = uint32_t(rng.below(opt.users));
        std::string id = "syn-a" + std::to_string(n);
        AssetId a = pick_asset();
        int64_t reserve = int64_t(100 + rng.below(900));
        stream.events.emplace_back(
            AuctionStart{user(se), Usd::from_cents(reserve), next_time(), id, a});
        stream.events.emplace_back(
            Bid{user(b1), Usd::from_cents(reserve + 100), next_time(), id, a});
        int64_t top = reserve + 200;
        stream.events.emplace_back(Bid{user(b2), Usd::from_cents(top), next_time(), id, a});
        stream.events.emplace_back(Win{user(b2), Usd::from_cents(top), next_time(), id, a});
        stream.events.emplace_back(AuctionEnd{id, a, next_time()});
    }

    // ---- injections, all strictly later than the baseline ----

    struct Planted {
        std::string kind;
        std::vector<AccountId> accounts;
        std::vector<Timestamp> times;
    };
    std::vector<Planted> planted;
    uint32_t next_injected = 0;
    auto injected_account = [&] { return detail::synth_account(0xee, next_injected++); };
    uint32_t injected_assets = 0;
    auto injected_asset = [&](const std::string& kind) {
        AssetId id = detail::synth_asset(0xdd, 0, ++injected_assets);
        AssetRecord r;
        r.id = id;
        r.collection_slug = "injected-" + kind;
        r.collection_name = "Injected " + kind;
        stream.assets.push_back(std::move(r));
        return id;
    };

    auto plant = [&](Planted& p, Event e) {
        p.times.push_back(event_time(e));
        stream.events.push_back(std::move(e));
    };

    for (const auto& ring : plan.wash_rings) {
        Planted p{"wash_ring", {}, {}};
        std::vector<AccountId> members;
        for (uint32_t i = 0; i < ring.k; ++i) members.push_back(injected_account());
        p.accounts = members;
        AssetId a = injected_asset("wash");
        uint32_t arcs = ring.k == 2 ? 1 : ring.k;
        for (uint32_t arc = 0; arc < arcs; ++arc) {
            const AccountId& u = members[arc];
            const AccountId& v = members[(arc + 1) % ring.k];
            for (uint32_t i = 0; i < (ring.m + 1) / 2; ++i)
                plant(p, Sale{u, v, a, Usd::from_cents(1000), Eth{0}, std::nullopt,
                              next_time(), std::nullopt});
            for (uint32_t i = 0; i < ring.m / 2; ++i)
                plant(p, Sale{v, u, a, Usd::from_cents(1000), Eth{0}, std::nullopt,
                              next_time(), std::nullopt});
        }
        planted.push_back(std::move(p));
    }

    for (uint32_t n = 0; n < plan.shill_auctions; ++n) {
        Planted p{"shill_auction", {}, {}};
        AccountId seller = injected_account();
        AccountId shill = injected_account();
        AccountId honest = injected_account();
        p.accounts = {seller, shill};
        AssetId a = injected_asset("shill");
        std::string id = "inj-shill" + std::to_string(n);
        plant(p, AuctionStart{seller, Usd::from_cents(200), next_time(), id, a});
        for (int64_t cents : {330, 440, 550, 671, 814})
            plant(p, Bid{shill, Usd::from_cents(cents), next_time(), id, a});
        plant(p, Bid{honest, Usd::from_cents(900), next_time(), id, a});
        plant(p, Win{honest, Usd::from_cents(900), next_time(), id, a});
        // the money trail the detector needs: seller funds the shill
        plant(p, Paid{seller, shill, Wei{uint128(1) << 50}, next_time(), std::nullopt});
        planted.push_back(std::move(p));
    }

    for (uint32_t n = 0; n < plan.shield_auctions; ++n) {
        Planted p{"bid_shield", {}, {}};
        AccountId winner = injected_account();
        AccountId shield = injected_account();
        p.accounts = {winner, shield};
        AssetId a = injected_asset("shield");
        std::string id = "inj-shield" + std::to_string(n);
        plant(p, AuctionStart{winner, Usd::from_cents(50), next_time(), id, a});
        plant(p, Bid{winner, Usd::from_cents(100), next_time(), id, a});
        plant(p, Bid{shield, Usd::from_cents(500), next_time(), id, a});
        plant(p, CancelBid{shield, Usd::from_cents(500), next_time(), id, a});
        plant(p, Win{winner, Usd::from_cents(100), next_time(), id, a});
        planted.push_back(std::move(p));
    }

    canonical_sort(stream.events);

    // every event carries a unique timestamp, so times index the sorted stream
    std::unordered_map<Timestamp, uint32_t> index_of;
    index_of.reserve(stream.events.size());
    for (uint32_t i = 0; i < stream.events.size(); ++i)
        index_of.emplace(event_time(stream.events[i]), i);

    SynthResult result;
    result.stream = std::move(stream);
    for (auto& p : planted) {
        InjectionLabel label{std::move(p.kind), std::move(p.accounts), {}};
        for (Timestamp t : p.times) label.events.push_back(index_of.at(t));
        std::sort(label.events.begin(), label.events.end());
        result.labels.push_back(std::move(label));
    }
    return result;
}

} // namespace nftaudit
