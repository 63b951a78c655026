#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace nftaudit {

using int128 = __int128;
using uint128 = unsigned __int128;

namespace detail {

inline std::string u128_to_string(uint128 v) {
    if (v == 0) return "0";
    char buf[40];
    int n = 0;
    while (v > 0) {
        buf[n++] = char('0' + int(v % 10));
        v /= 10;
    }
    std::string s(size_t(n), '0');
    for (int i = 0; i < n; ++i) s[size_t(i)] = buf[n - 1 - i];
    return s;
}

inline std::string i128_to_string(int128 v) {
    if (v < 0) return "-" + u128_to_string(uint128(-v));
    return u128_to_string(uint128(v));
}

} // namespace detail

// Parses a non-negative decimal string into units of 10^-scale.
// Rejects: empty, signs, exponents, more than `scale` fractional digits, overflow.
inline std::optional<int128> parse_scaled(std::string_view s, int scale) {
    if (s.empty()) return std::nullopt;
    static const uint128 kMax = (uint128(1) << 126); // generous overflow bound
    uint128 ipart = 0;
    size_t i = 0;
    bool any_digit = false;
    for (; i < s.size() && s[i] != '.'; ++i) {
        char c = s[i];
        if (c < '0' || c > '9') return std::nullopt;
        ipart = ipart * 10 + uint128(c - '0');
        if (ipart > kMax) return std::nullopt;
        any_digit = true;
    }
    uint128 fpart = 0;
    int fdigits = 0;
    if (i < s.size()) { // at '.'
        ++i;
        if (i == s.size()) return std::nullopt; // trailing dot
        for (; i < s.size(); ++i) {
            char c = s[i];
            if (c < '0' || c > '9') return std::nullopt;
            if (++fdigits > scale) return std::nullopt;
            fpart = fpart * 10 + uint128(c - '0');
            any_digit = true;
        }
    }
    if (!any_digit) return std::nullopt;
    uint128 pow = 1;
    for (int k = 0; k < scale; ++k) pow *= 10;
    uint128 fscale = 1;
    for (int k = 0; k < scale - fdigits; ++k) fscale *= 10;
    uint128 v = ipart * pow + fpart * fscale;
    if (v > kMax) return std::nullopt;
    return int128(v);
}

// Formats units of 10^-scale back to a decimal string.
// trim=true drops trailing fractional zeros (and the dot if the fraction is empty).
inline std::string format_scaled(int128 value, int scale, bool trim) {
    bool neg = value < 0;
    uint128 v = neg ? uint128(-value) : uint128(value);
    uint128 pow = 1;
    for (int k = 0; k < scale; ++k) pow *= 10;
    std::string ip = detail::u128_to_string(v / pow);
    std::string fp;
    if (scale > 0) {
        fp = detail::u128_to_string(v % pow);
        if (fp.size() < size_t(scale)) fp.insert(0, size_t(scale) - fp.size(), '0');
    }
    if (trim) {
        while (!fp.empty() && fp.back() == '0') fp.pop_back();
    }
    std::string out = neg ? "-" + ip : ip;
    if (!fp.empty()) out += "." + fp;
    return out;
}

// USD amount in cents.
struct Usd {
    int64_t cents = 0;

    static std::optional<Usd> parse(std::string_view s) {
        auto v = parse_scaled(s, 2);
        if (!v || *v > int128(INT64_MAX)) return std::nullopt;
        return Usd{int64_t(*v)};
    }
    static Usd from_cents(int64_t c) { return Usd{c}; }
    std::string str() const { return format_scaled(cents, 2, /*trim=*/false); }
    auto operator<=>(const Usd&) const = default;
};

// ETH amount in attoeth (10^-18).
struct Eth {
    int128 atto = 0;

    static std::optional<Eth> parse(std::string_view s) {
        auto v = parse_scaled(s, 18);
        if (!v) return std::nullopt;
        return Eth{*v};
    }
    std::string str() const { return format_scaled(atto, 18, /*trim=*/true); }
    auto operator<=>(const Eth&) const = default;
};

// Wei amount (integer).
struct Wei {
    uint128 value = 0;

    static std::optional<Wei> parse(std::string_view s) {
        auto v = parse_scaled(s, 0);
        if (!v) return std::nullopt;
        return Wei{uint128(*v)};
    }
    std::string str() const { return detail::u128_to_string(value); }
    auto operator<=>(const Wei&) const = default;
};

// Royalty fraction in nano units (10^-9); valid range [0, 1].
struct Royalty {
    int64_t nano = 0;

    static std::optional<Royalty> parse(std::string_view s) {
        auto v = parse_scaled(s, 9);
        if (!v || *v > 1000000000) return std::nullopt;
        return Royalty{int64_t(*v)};
    }
    std::string str() const { return format_scaled(nano, 9, /*trim=*/true); }
    auto operator<=>(const Royalty&) const = default;
};

} // namespace nftaudit
