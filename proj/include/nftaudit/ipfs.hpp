#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace nftaudit {

namespace detail {

inline bool is_base58(char c) {
    if (c >= '1' && c <= '9') return true;
    if (c >= 'A' && c <= 'Z') return c != 'I' && c != 'O';
    if (c >= 'a' && c <= 'z') return c != 'l';
    return false;
}

inline bool is_base32(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '2' && c <= '7');
}

} // namespace detail

// Validates a path segment as a content id and returns its canonical form.
// v0: "Qm" + 44 base58 chars, case significant.
// v1: "b" prefix, base32 payload, lowercased; length bound rejects ordinary words.
inline std::optional<std::string> canonical_cid(std::string_view seg) {
    if (seg.size() == 46 && seg[0] == 'Q' && seg[1] == 'm') {
        if (std::all_of(seg.begin() + 2, seg.end(), detail::is_base58))
            return std::string(seg);
        return std::nullopt;
    }
    if (seg.size() >= 50 && (seg[0] == 'b' || seg[0] == 'B')) {
        std::string out;
        out.reserve(seg.size());
        for (char c : seg) {
            if (!detail::is_base32(c)) return std::nullopt;
            out += char(std::tolower(static_cast<unsigned char>(c)));
        }
        return out;
    }
    return std::nullopt;
}

// Pulls the content id out of an asset URL, if it points at ipfs content.
// Understood forms: ipfs://<cid>[/...], any gateway path containing /ipfs/<cid>,
// a bare <cid> path segment, or a bare cid string. Query and fragment ignored.
inline std::optional<std::string> extract_ipfs_cid(std::string_view url) {
    if (auto h = url.find('#'); h != std::string_view::npos) url = url.substr(0, h);
    if (auto q = url.find('?'); q != std::string_view::npos) url = url.substr(0, q);
    if (url.empty()) return std::nullopt;

    std::string_view rest = url;
    if (auto p = rest.find("://"); p != std::string_view::npos) rest = rest.substr(p + 3);

    std::vector<std::string_view> segs;
    size_t start = 0;
    while (start <= rest.size()) {
        size_t end = rest.find('/', start);
        if (end == std::string_view::npos) end = rest.size();
        if (end > start) segs.push_back(rest.substr(start, end - start));
        start = end + 1;
    }

    for (size_t i = 0; i + 1 < segs.size(); ++i)
        if (segs[i] == "ipfs")
            if (auto cid = canonical_cid(segs[i + 1])) return cid;
    for (auto seg : segs)
        if (auto cid = canonical_cid(seg)) return cid;
    return std::nullopt;
}

enum class UrlKind { ipfs, non_ipfs };

inline UrlKind classify_url(std::string_view url) {
    return extract_ipfs_cid(url) ? UrlKind::ipfs : UrlKind::non_ipfs;
}

// Gateway-invariant identity for a URL: the cid when there is one, the raw
// string otherwise.
inline std::string url_content_key(const std::string& url) {
    if (auto cid = extract_ipfs_cid(url)) return *cid;
    return url;
}

} // namespace nftaudit
