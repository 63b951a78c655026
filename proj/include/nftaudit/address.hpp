#pragma once

#include <array>
#include <cstdint>
#include <cstring>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace nftaudit {

namespace detail {

inline int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

inline char hex_digit(unsigned v) { return v < 10 ? char('0' + v) : char('a' + v - 10); }

template <size_t N>
std::optional<std::array<uint8_t, N>> parse_hex_bytes(std::string_view s) {
    if (s.size() != 2 + 2 * N || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
        return std::nullopt;
    std::array<uint8_t, N> out{};
    for (size_t i = 0; i < N; ++i) {
        int hi = hex_val(s[2 + 2 * i]);
        int lo = hex_val(s[3 + 2 * i]);
        if (hi < 0 || lo < 0) return std::nullopt;
        out[i] = uint8_t(hi << 4 | lo);
    }
    return out;
}

template <size_t N>
std::string format_hex_bytes(const std::array<uint8_t, N>& b) {
    std::string s;
    s.reserve(2 + 2 * N);
    s += "0x";
    for (uint8_t v : b) {
        s += hex_digit(v >> 4);
        s += hex_digit(v & 0xf);
    }
    return s;
}

// FNV-1a.
inline size_t hash_bytes(const uint8_t* p, size_t n) {
    uint64_t h = 1469598103934665603ull;
    for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return size_t(h);
}

} // namespace detail

// 20-byte account address, canonical form lowercase "0x" + 40 hex digits.
struct AccountId {
    std::array<uint8_t, 20> bytes{};

    static std::optional<AccountId> parse(std::string_view s) {
        auto b = detail::parse_hex_bytes<20>(s);
        if (!b) return std::nullopt;
        return AccountId{*b};
    }

    std::string str() const { return detail::format_hex_bytes(bytes); }

    auto operator<=>(const AccountId&) const = default;
};

// 32-byte transaction hash.
struct TxHash {
    std::array<uint8_t, 32> bytes{};

    static std::optional<TxHash> parse(std::string_view s) {
        auto b = detail::parse_hex_bytes<32>(s);
        if (!b) return std::nullopt;
        return TxHash{*b};
    }

    std::string str() const { return detail::format_hex_bytes(bytes); }

    auto operator<=>(const TxHash&) const = default;
};

// Canonical token id: decimal digits without leading zeros ("0" stays "0").
inline std::optional<std::string> canonical_token_id(std::string_view s) {
    if (s.empty()) return std::nullopt;
    for (char c : s)
        if (c < '0' || c > '9') return std::nullopt;
    size_t i = 0;
    while (i + 1 < s.size() && s[i] == '0') ++i;
    return std::string(s.substr(i));
}

struct AssetId {
    AccountId contract;
    std::string token_id; // canonical decimal string

    std::string str() const { return contract.str() + ":" + token_id; }

    auto operator<=>(const AssetId&) const = default;
};

struct AccountIdHash {
    size_t operator()(const AccountId& a) const {
        return detail::hash_bytes(a.bytes.data(), a.bytes.size());
    }
};

struct AssetIdHash {
    size_t operator()(const AssetId& a) const {
        size_t h = detail::hash_bytes(a.contract.bytes.data(), a.contract.bytes.size());
        return h ^ (std::hash<std::string>()(a.token_id) + 0x9e3779b97f4a7c15ull + (h << 6));
    }
};

} // namespace nftaudit
