#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "nftaudit/decimal.hpp"
#include "nftaudit/fetcher.hpp"
#include "nftaudit/ipfs.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// ---- accessibility ----------------------------------------------------------

enum class Accessibility { alive, inaccessible, insufficient_data };

inline const char* to_string(Accessibility a) {
    switch (a) {
        case Accessibility::alive: return "alive";
        case Accessibility::inaccessible: return "inaccessible";
        default: return "insufficient_data";
    }
}

// One 200 anywhere proves the resource is alive. Declaring it dead takes the
// full three-attempt protocol with nothing to show; fewer failed attempts
// leave the question open.
inline Accessibility classify_accessibility(std::span<const FetchAttempt> attempts) {
    for (const auto& a : attempts)
        if (attempt_succeeded(a)) return Accessibility::alive;
    if (attempts.size() >= 3) return Accessibility::inaccessible;
    return Accessibility::insufficient_data;
}

// Probe results keyed by content identity, so one gateway answering for a cid
// settles every url that points at the same object.
inline std::map<std::string, Accessibility> classify_probes(std::span<const UrlProbe> probes) {
    std::map<std::string, std::vector<FetchAttempt>> merged;
    for (const auto& p : probes) {
        auto& dst = merged[url_content_key(p.url)];
        dst.insert(dst.end(), p.attempts.begin(), p.attempts.end());
    }
    std::map<std::string, Accessibility> out;
    for (const auto& [key, attempts] : merged) out.emplace(key, classify_accessibility(attempts));
    return out;
}

// ---- audit matrix -----------------------------------------------------------

// Per url slot: how many assets resolve to a living resource, a dead one, an
// unprobed or inconclusive one, or carry no url at all, split by hosting kind.
struct SlotAudit {
    uint32_t alive[2] = {0, 0};        // indexed by UrlKind
    uint32_t inaccessible[2] = {0, 0};
    uint32_t unclassified = 0; // url present, nothing conclusive known
    uint32_t missing = 0;      // record has no url

    uint32_t total() const {
        return alive[0] + alive[1] + inaccessible[0] + inaccessible[1] + unclassified +
               missing;
    }
};

struct LinkAuditMatrix {
    SlotAudit image;
    SlotAudit metadata;
    uint32_t assets = 0; // == image.total() == metadata.total()
};

inline LinkAuditMatrix build_link_audit(std::span<const AssetRecord> assets,
                                        const std::map<std::string, Accessibility>& classified) {
    LinkAuditMatrix m;
    m.assets = uint32_t(assets.size());
    auto tally = [&](const std::optional<std::string>& url, SlotAudit& slot) {
        if (!url || url->empty()) {
            ++slot.missing;
            return;
        }
        size_t kind = size_t(classify_url(*url));
        auto it = classified.find(url_content_key(*url));
        if (it == classified.end() || it->second == Accessibility::insufficient_data) {
            ++slot.unclassified;
        } else if (it->second == Accessibility::alive) {
            ++slot.alive[kind];
        } else {
            ++slot.inaccessible[kind];
        }
    };
    for (const auto& a : assets) {
        tally(a.image_url, m.image);
        tally(a.metadata_url, m.metadata);
    }
    return m;
}

// Every url an audit would need to probe, deduplicated by content identity.
inline std::vector<std::string> collect_audit_urls(std::span<const AssetRecord> assets) {
    std::set<std::string> seen;
    std::vector<std::string> out;
    auto add = [&](const std::optional<std::string>& url) {
        if (!url || url->empty()) return;
        if (seen.insert(url_content_key(*url)).second) out.push_back(*url);
    };
    for (const auto& a : assets) {
        add(a.image_url);
        add(a.metadata_url);
    }
    return out;
}

// ---- metadata url drift -----------------------------------------------------

// Compare two snapshots of the asset set by where their metadata points.
// Urls compare by content identity, so a gateway swap around one cid is not a
// change. An empty string counts as no url.
struct MetadataUrlDiff {
    std::vector<AssetId> changed;
    std::vector<AssetId> unchanged;
    std::vector<AssetId> added;   // url appears in the later snapshot only
    std::vector<AssetId> removed; // url present before, gone now
};

inline MetadataUrlDiff diff_metadata_urls(std::span<const AssetRecord> before,
                                          std::span<const AssetRecord> after) {
    auto url_of = [](const AssetRecord& r) -> std::optional<std::string> {
        if (!r.metadata_url || r.metadata_url->empty()) return std::nullopt;
        return url_content_key(*r.metadata_url);
    };
    std::map<AssetId, std::optional<std::string>> old_keys, new_keys;
    for (const auto& r : before) old_keys.emplace(r.id, url_of(r));
    for (const auto& r : after) new_keys.emplace(r.id, url_of(r));

    MetadataUrlDiff d;
    std::set<AssetId> ids;
    for (const auto& [id, k] : old_keys) ids.insert(id);
    for (const auto& [id, k] : new_keys) ids.insert(id);
    for (const auto& id : ids) {
        std::optional<std::string> o, n;
        if (auto it = old_keys.find(id); it != old_keys.end()) o = it->second;
        if (auto it = new_keys.find(id); it != new_keys.end()) n = it->second;
        if (o && n)
            (*o == *n ? d.unchanged : d.changed).push_back(id);
        else if (n)
            d.added.push_back(id);
        else if (o)
            d.removed.push_back(id);
    }
    return d; // each bucket sorted: ids iterate in order
}

// ---- custody counting -------------------------------------------------------

// How many assets a custodian account holds, judged purely by the transfer
// record: an asset is in custody when its latest transfer moved it in.
struct EscrowPoint {
    Timestamp time = 0;
    uint32_t count = 0;
};

inline std::vector<EscrowPoint> escrow_time_series(const EventStream& stream,
                                                   const AccountId& custodian) {
    std::vector<EscrowPoint> out;
    std::set<AssetId> held;
    for (const Event& e : stream.events) {
        auto* t = std::get_if<Transfer>(&e);
        if (!t) continue;
        size_t before = held.size();
        if (t->to == custodian)
            held.insert(t->asset);
        else if (t->from == custodian)
            held.erase(t->asset);
        if (held.size() == before) continue;
        if (!out.empty() && out.back().time == t->time)
            out.back().count = uint32_t(held.size());
        else
            out.push_back({t->time, uint32_t(held.size())});
    }
    return out;
}

inline uint32_t count_escrowed(const EventStream& stream, const AccountId& custodian,
                               Timestamp at_time) {
    uint32_t count = 0;
    for (const auto& p : escrow_time_series(stream, custodian)) {
        if (p.time > at_time) break;
        count = p.count;
    }
    return count;
}

// ---- verification aggregates --------------------------------------------------

// Sales bucketed by whether the seller carried a verification badge on the
// asset's record. Sales whose asset has no record, or whose record does not
// state it, stay out of both buckets.
struct SellerVerificationRow {
    bool seller_verified = false;
    uint32_t sellers = 0; // distinct accounts
    uint32_t sales = 0;
    int64_t volume_cents = 0;
    std::optional<int64_t> average_cents; // volume / sales, rounded half up
};

namespace detail {

inline std::optional<int64_t> average_cents(int64_t volume, uint32_t sales) {
    if (sales == 0) return std::nullopt;
    return (volume + int64_t(sales) / 2) / int64_t(sales);
}

} // namespace detail

inline std::vector<SellerVerificationRow> seller_verification_rows(const EventStream& stream) {
    std::unordered_map<AssetId, std::optional<bool>, AssetIdHash> badge;
    for (const auto& a : stream.assets) badge.emplace(a.id, a.seller_verified);

    SellerVerificationRow rows[2];
    rows[0].seller_verified = false;
    rows[1].seller_verified = true;
    std::set<AccountId> sellers[2];
    for (const Event& e : stream.events) {
        auto* s = std::get_if<Sale>(&e);
        if (!s) continue;
        auto it = badge.find(s->asset);
        if (it == badge.end() || !it->second) continue;
        size_t b = *it->second ? 1 : 0;
        sellers[b].insert(s->seller);
        ++rows[b].sales;
        rows[b].volume_cents += s->price_usd.cents;
    }
    for (size_t b = 0; b < 2; ++b) {
        rows[b].sellers = uint32_t(sellers[b].size());
        rows[b].average_cents = detail::average_cents(rows[b].volume_cents, rows[b].sales);
    }
    return {rows[0], rows[1]};
}

// Per collection: badge state, takedown state, sale volume. One flagged asset
// marks the whole collection on both counts.
struct CollectionVerificationRow {
    std::string slug;
    bool verified = false;
    bool taken_down = false;
    uint32_t assets = 0;
    uint32_t sales = 0;
    int64_t volume_cents = 0;
    std::optional<int64_t> average_cents;
};

inline std::vector<CollectionVerificationRow> collection_verification_rows(
    const EventStream& stream) {
    std::map<std::string, CollectionVerificationRow> by_slug;
    std::unordered_map<AssetId, const std::string*, AssetIdHash> slug_of;
    for (const auto& a : stream.assets) {
        auto [it, fresh] = by_slug.try_emplace(a.collection_slug);
        if (fresh) it->second.slug = a.collection_slug;
        it->second.verified |= a.collection_verified;
        it->second.taken_down |= a.taken_down;
        ++it->second.assets;
        slug_of.emplace(a.id, &a.collection_slug);
    }
    for (const Event& e : stream.events) {
        auto* s = std::get_if<Sale>(&e);
        if (!s) continue;
        auto it = slug_of.find(s->asset);
        if (it == slug_of.end()) continue;
        auto& row = by_slug[*it->second];
        ++row.sales;
        row.volume_cents += s->price_usd.cents;
    }
    std::vector<CollectionVerificationRow> out;
    out.reserve(by_slug.size());
    for (auto& [slug, row] : by_slug) {
        row.average_cents = detail::average_cents(row.volume_cents, row.sales);
        out.push_back(std::move(row));
    }
    return out; // map order: sorted by slug
}

// ---- source availability ------------------------------------------------------

// Whether the creator-hosted original still exists, against whether the
// marketplace pulled the listing.
struct SourceAvailabilitySummary {
    uint32_t available_live = 0;
    uint32_t available_taken_down = 0;
    uint32_t unavailable_live = 0;
    uint32_t unavailable_taken_down = 0;
    uint32_t unknown = 0; // record does not state availability

    uint32_t total() const {
        return available_live + available_taken_down + unavailable_live +
               unavailable_taken_down + unknown;
    }
};

inline SourceAvailabilitySummary source_availability_summary(
    std::span<const AssetRecord> assets) {
    SourceAvailabilitySummary s;
    for (const auto& a : assets) {
        if (!a.source_available) {
            ++s.unknown;
        } else if (*a.source_available) {
            ++(a.taken_down ? s.available_taken_down : s.available_live);
        } else {
            ++(a.taken_down ? s.unavailable_taken_down : s.unavailable_live);
        }
    }
    return s;
}

} // namespace nftaudit
