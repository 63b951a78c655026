#pragma once

#include <algorithm>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nftaudit {

// UTF-8 to codepoints; malformed bytes decode to U+FFFD one at a time so the
// result is total and deterministic for any byte string.
inline std::vector<uint32_t> utf8_codepoints(std::string_view s) {
    std::vector<uint32_t> out;
    out.reserve(s.size());
    size_t i = 0;
    while (i < s.size()) {
        uint8_t b0 = uint8_t(s[i]);
        uint32_t cp = 0xFFFD;
        size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 >> 5) == 0x6 && i + 1 < s.size() && (uint8_t(s[i + 1]) >> 6) == 0x2) {
            cp = (uint32_t(b0 & 0x1F) << 6) | (uint8_t(s[i + 1]) & 0x3F);
            len = cp >= 0x80 ? 2 : 1;
            if (len == 1) cp = 0xFFFD; // overlong
        } else if ((b0 >> 4) == 0xE && i + 2 < s.size() && (uint8_t(s[i + 1]) >> 6) == 0x2 &&
                   (uint8_t(s[i + 2]) >> 6) == 0x2) {
            cp = (uint32_t(b0 & 0x0F) << 12) | (uint32_t(uint8_t(s[i + 1]) & 0x3F) << 6) |
                 (uint8_t(s[i + 2]) & 0x3F);
            bool ok = cp >= 0x800 && !(cp >= 0xD800 && cp <= 0xDFFF);
            len = ok ? 3 : 1;
            if (!ok) cp = 0xFFFD;
        } else if ((b0 >> 3) == 0x1E && i + 3 < s.size() && (uint8_t(s[i + 1]) >> 6) == 0x2 &&
                   (uint8_t(s[i + 2]) >> 6) == 0x2 && (uint8_t(s[i + 3]) >> 6) == 0x2) {
            cp = (uint32_t(b0 & 0x07) << 18) | (uint32_t(uint8_t(s[i + 1]) & 0x3F) << 12) |
                 (uint32_t(uint8_t(s[i + 2]) & 0x3F) << 6) | (uint8_t(s[i + 3]) & 0x3F);
            bool ok = cp >= 0x10000 && cp <= 0x10FFFF;
            len = ok ? 4 : 1;
            if (!ok) cp = 0xFFFD;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

// Classic two-row edit distance over codepoint sequences.
inline size_t levenshtein(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b) {
    const size_t n = a.size(), m = b.size();
    if (n == 0) return m;
    if (m == 0) return n;
    std::vector<size_t> prev(m + 1), cur(m + 1);
    for (size_t j = 0; j <= m; ++j) prev[j] = j;
    for (size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= m; ++j) {
            size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

inline size_t levenshtein(std::string_view a, std::string_view b) {
    return levenshtein(utf8_codepoints(a), utf8_codepoints(b));
}

} // namespace nftaudit
