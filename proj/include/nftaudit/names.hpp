#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nftaudit/config.hpp"
#include "nftaudit/levenshtein.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

struct CollectionInfo {
    std::string slug;
    std::string name;
    bool verified = false;
    size_t asset_count = 0;
};

// Collections as seen through the asset set: the first record names the
// collection, any verified asset marks it verified.
inline std::vector<CollectionInfo> collect_collections(std::span<const AssetRecord> assets) {
    std::map<std::string, CollectionInfo> by_slug;
    for (const auto& a : assets) {
        auto [it, fresh] = by_slug.try_emplace(a.collection_slug);
        if (fresh) {
            it->second.slug = a.collection_slug;
            it->second.name = a.collection_name;
        }
        it->second.verified |= a.collection_verified;
        ++it->second.asset_count;
    }
    std::vector<CollectionInfo> out;
    out.reserve(by_slug.size());
    for (auto& [slug, info] : by_slug) out.push_back(std::move(info));
    return out;
}

// A collection squatting on a verified collection's name: nearly identical
// names (case matters, so "Cryptospells" sits one edit from "CryptoSpells"),
// both sides sizeable enough to rule out noise, and exactly one side carrying
// the verified badge. Distance zero is an exact-name clone under another slug.
struct NameMatch {
    std::string verified_slug;
    std::string verified_name;
    std::string replica_slug;
    std::string replica_name;
    size_t distance = 0;
};

inline std::vector<NameMatch> find_similar_collection_names(
    std::span<const CollectionInfo> collections, const DetectorConfig& cfg) {
    struct Entry {
        const CollectionInfo* info;
        std::vector<uint32_t> cps;
    };
    std::vector<Entry> eligible;
    for (const auto& c : collections) {
        if (c.asset_count < size_t(cfg.name_min_assets)) continue;
        std::vector<uint32_t> cps = utf8_codepoints(c.name);
        if (cps.size() < size_t(cfg.name_min_length)) continue;
        eligible.push_back({&c, std::move(cps)});
    }

    std::vector<NameMatch> out;
    for (size_t i = 0; i < eligible.size(); ++i) {
        for (size_t j = i + 1; j < eligible.size(); ++j) {
            const Entry& a = eligible[i];
            const Entry& b = eligible[j];
            if (a.info->verified == b.info->verified) continue;
            if (std::llabs(int64_t(a.cps.size()) - int64_t(b.cps.size())) >
                int64_t(cfg.name_max_distance))
                continue;
            size_t d = levenshtein(a.cps, b.cps);
            if (d > size_t(cfg.name_max_distance)) continue;
            const CollectionInfo* ver = a.info->verified ? a.info : b.info;
            const CollectionInfo* rep = a.info->verified ? b.info : a.info;
            out.push_back({ver->slug, ver->name, rep->slug, rep->name, d});
        }
    }
    std::sort(out.begin(), out.end(), [](const NameMatch& x, const NameMatch& y) {
        if (x.verified_slug != y.verified_slug) return x.verified_slug < y.verified_slug;
        return x.replica_slug < y.replica_slug;
    });
    return out;
}

} // namespace nftaudit
