#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nftaudit/image.hpp"
#include "nftaudit/model.hpp"

namespace nftaudit {

namespace detail {

inline const std::vector<double>& dct32_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(32 * 32);
        constexpr double pi = 3.141592653589793238462643383279502884;
        for (int k = 0; k < 32; ++k)
            for (int n = 0; n < 32; ++n) t[size_t(k) * 32 + n] = std::cos(pi * (2 * n + 1) * k / 64.0);
        return t;
    }();
    return table;
}

// 32x32 type-II DCT, rows then columns. Uniform scaling is dropped: the hash
// only ever compares coefficients with their median.
inline void dct32x32(std::vector<double>& v) {
    const auto& t = dct32_table();
    std::vector<double> tmp(32 * 32);
    for (int y = 0; y < 32; ++y)
        for (int k = 0; k < 32; ++k) {
            double acc = 0;
            for (int n = 0; n < 32; ++n) acc += v[size_t(y) * 32 + n] * t[size_t(k) * 32 + n];
            tmp[size_t(y) * 32 + k] = acc;
        }
    for (int x = 0; x < 32; ++x)
        for (int k = 0; k < 32; ++k) {
            double acc = 0;
            for (int n = 0; n < 32; ++n) acc += tmp[size_t(n) * 32 + x] * t[size_t(k) * 32 + n];
            v[size_t(k) * 32 + x] = acc;
        }
}

} // namespace detail

// Frequency-domain 64-bit fingerprint: box-resize to 32x32, 2-D DCT, keep the
// 8x8 low-frequency block, threshold every coefficient at the median of the
// 63 non-DC ones. Brightness scaling leaves it untouched (the DCT is linear);
// inverting the image flips nearly every bit. Images without two full rows
// and columns carry no usable structure and are rejected.
inline std::optional<uint64_t> perceptual_hash(const GrayImage& img) {
    if (img.width < 2 || img.height < 2) return std::nullopt;
    std::vector<double> v = resize_area(img, 32, 32);
    detail::dct32x32(v);

    double block[64];
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) block[r * 8 + c] = v[size_t(r) * 32 + c];

    double ac[63];
    std::copy(block + 1, block + 64, ac);
    std::nth_element(ac, ac + 31, ac + 63);
    const double median = ac[31];

    uint64_t hash = 0;
    for (int i = 0; i < 64; ++i)
        if (block[i] > median) hash |= uint64_t(1) << (63 - i);
    return hash;
}

inline int hamming_distance(uint64_t a, uint64_t b) { return std::popcount(a ^ b); }

struct ImageHashEntry {
    AssetId asset;
    std::string collection_slug;
    uint64_t hash = 0;
};

struct SimilarImagePair {
    AssetId a, b; // a < b
    std::string slug_a, slug_b;
    int distance = 0;
};

struct HashCollisionGroup {
    uint64_t hash = 0;
    std::vector<AssetId> assets;          // sorted
    std::vector<std::string> collections; // distinct, sorted
};

struct SimilarImages {
    std::vector<SimilarImagePair> pairs;     // cross-collection only
    std::vector<HashCollisionGroup> groups;  // exact-collision view, threshold 0
};

inline SimilarImages find_similar_images(std::span<const ImageHashEntry> entries,
                                         int threshold) {
    SimilarImages out;
    auto add_pair = [&](const ImageHashEntry& x, const ImageHashEntry& y, int d) {
        const ImageHashEntry* lo = &x;
        const ImageHashEntry* hi = &y;
        if (hi->asset < lo->asset) std::swap(lo, hi);
        out.pairs.push_back({lo->asset, hi->asset, lo->collection_slug, hi->collection_slug, d});
    };

    if (threshold == 0) {
        std::map<uint64_t, std::vector<const ImageHashEntry*>> buckets;
        for (const auto& e : entries) buckets[e.hash].push_back(&e);
        for (auto& [hash, refs] : buckets) {
            if (refs.size() < 2) continue;
            std::vector<std::string> slugs;
            for (auto* r : refs) slugs.push_back(r->collection_slug);
            std::sort(slugs.begin(), slugs.end());
            slugs.erase(std::unique(slugs.begin(), slugs.end()), slugs.end());
            if (slugs.size() < 2) continue; // editions inside one collection

            HashCollisionGroup g;
            g.hash = hash;
            for (auto* r : refs) g.assets.push_back(r->asset);
            std::sort(g.assets.begin(), g.assets.end());
            g.collections = std::move(slugs);
            out.groups.push_back(std::move(g));

            for (size_t i = 0; i < refs.size(); ++i)
                for (size_t j = i + 1; j < refs.size(); ++j)
                    if (refs[i]->collection_slug != refs[j]->collection_slug)
                        add_pair(*refs[i], *refs[j], 0);
        }
    } else {
        for (size_t i = 0; i < entries.size(); ++i)
            for (size_t j = i + 1; j < entries.size(); ++j) {
                if (entries[i].collection_slug == entries[j].collection_slug) continue;
                int d = hamming_distance(entries[i].hash, entries[j].hash);
                if (d <= threshold) add_pair(entries[i], entries[j], d);
            }
    }
    std::sort(out.pairs.begin(), out.pairs.end(),
              [](const SimilarImagePair& x, const SimilarImagePair& y) {
                  if (!(x.a == y.a)) return x.a < y.a;
                  return x.b < y.b;
              });
    return out;
}

} // namespace nftaudit
