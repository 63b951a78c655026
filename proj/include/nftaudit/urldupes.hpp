#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nftaudit/ipfs.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

// Assets sharing one image: same content id for ipfs-hosted files regardless
// of gateway, byte-identical URL otherwise.
struct UrlDuplicateGroup {
    std::string key; // cid or raw url
    UrlKind kind = UrlKind::non_ipfs;
    std::vector<AssetId> assets;             // sorted
    std::vector<std::string> collections;    // distinct slugs, sorted
};

struct UrlDuplicates {
    std::vector<UrlDuplicateGroup> cross_collection; // counterfeit candidates
    std::vector<UrlDuplicateGroup> same_collection;  // editions within one collection
};

inline UrlDuplicates find_duplicate_asset_urls(std::span<const AssetRecord> assets) {
    struct Acc {
        UrlKind kind;
        std::vector<AssetId> ids;
        std::set<std::string> slugs;
    };
    std::map<std::string, Acc> by_key;
    for (const auto& a : assets) {
        if (!a.image_url || a.image_url->empty()) continue;
        auto cid = extract_ipfs_cid(*a.image_url);
        std::string key = cid ? *cid : *a.image_url;
        auto [it, fresh] = by_key.try_emplace(key);
        if (fresh) it->second.kind = cid ? UrlKind::ipfs : UrlKind::non_ipfs;
        it->second.ids.push_back(a.id);
        it->second.slugs.insert(a.collection_slug);
    }

    UrlDuplicates out;
    for (auto& [key, acc] : by_key) {
        if (acc.ids.size() < 2) continue;
        UrlDuplicateGroup g;
        g.key = key;
        g.kind = acc.kind;
        g.assets = std::move(acc.ids);
        std::sort(g.assets.begin(), g.assets.end());
        g.collections.assign(acc.slugs.begin(), acc.slugs.end());
        (g.collections.size() >= 2 ? out.cross_collection : out.same_collection)
            .push_back(std::move(g));
    }
    return out; // map order: groups sorted by key
}

} // namespace nftaudit
