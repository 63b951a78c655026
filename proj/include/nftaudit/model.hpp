#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nftaudit/address.hpp"
#include "nftaudit/decimal.hpp"

namespace nftaudit {

using Timestamp = int64_t; // unix seconds

enum class Marketplace {
    OpenSea,
    Axie,
    CryptoPunks,
    Rarible,
    SuperRare,
    Sorare,
    Foundation,
};

inline const char* to_string(Marketplace m) {
    switch (m) {
        case Marketplace::OpenSea: return "OpenSea";
        case Marketplace::Axie: return "Axie";
        case Marketplace::CryptoPunks: return "CryptoPunks";
        case Marketplace::Rarible: return "Rarible";
        case Marketplace::SuperRare: return "SuperRare";
        case Marketplace::Sorare: return "Sorare";
        case Marketplace::Foundation: return "Foundation";
    }
    return "OpenSea";
}

inline std::optional<Marketplace> parse_marketplace(std::string_view s) {
    static const std::pair<std::string_view, Marketplace> table[] = {
        {"OpenSea", Marketplace::OpenSea},       {"Axie", Marketplace::Axie},
        {"CryptoPunks", Marketplace::CryptoPunks}, {"Rarible", Marketplace::Rarible},
        {"SuperRare", Marketplace::SuperRare},   {"Sorare", Marketplace::Sorare},
        {"Foundation", Marketplace::Foundation},
    };
    for (auto& [name, v] : table)
        if (name == s) return v;
    return std::nullopt;
}

struct AssetRecord {
    AssetId id;
    std::string collection_slug;
    std::string collection_name;
    std::optional<std::string> image_url;
    std::optional<std::string> metadata_url;
    Marketplace marketplace = Marketplace::OpenSea;
    std::optional<bool> source_available; // creator-hosted source still reachable
    bool collection_verified = false;
    std::optional<bool> seller_verified;
    bool taken_down = false;

    auto operator<=>(const AssetRecord&) const = default;
};

// ---- event kinds --------------------------------------------------------

struct Mint {
    AccountId creator;
    AssetId asset;
    Timestamp time = 0;
    auto operator<=>(const Mint&) const = default;
};

struct Sale {
    AccountId seller;
    AccountId buyer;
    AssetId asset;
    Usd price_usd;
    Eth price_eth;
    std::optional<Royalty> royalty_fraction;
    Timestamp time = 0;
    std::optional<TxHash> tx;
    auto operator<=>(const Sale&) const = default;
};

struct AuctionStart {
    AccountId seller;
    Usd reserve_usd;
    Timestamp time = 0;
    std::string auction_id;
    AssetId asset;
    auto operator<=>(const AuctionStart&) const = default;
};

struct Bid {
    AccountId bidder;
    Usd amount_usd;
    Timestamp time = 0;
    std::string auction_id;
    AssetId asset;
    auto operator<=>(const Bid&) const = default;
};

struct CancelBid {
    AccountId bidder;
    Usd amount_usd;
    Timestamp time = 0;
    std::string auction_id;
    AssetId asset;
    auto operator<=>(const CancelBid&) const = default;
};

struct Win {
    AccountId winner;
    Usd amount_usd;
    Timestamp time = 0;
    std::string auction_id;
    AssetId asset;
    auto operator<=>(const Win&) const = default;
};

struct AuctionEnd {
    std::string auction_id;
    AssetId asset;
    Timestamp time = 0;
    auto operator<=>(const AuctionEnd&) const = default;
};

struct Paid {
    AccountId from;
    AccountId to;
    Wei amount_wei;
    Timestamp time = 0;
    std::optional<TxHash> tx;
    auto operator<=>(const Paid&) const = default;
};

struct Transfer {
    AccountId from;
    AccountId to;
    AssetId asset;
    Timestamp time = 0;
    std::optional<TxHash> tx;
    auto operator<=>(const Transfer&) const = default;
};

using Event = std::variant<Mint, Sale, AuctionStart, Bid, CancelBid, Win, AuctionEnd, Paid, Transfer>;

inline Timestamp event_time(const Event& e) {
    return std::visit([](const auto& v) { return v.time; }, e);
}

// ---- diagnostics ---------------------------------------------------------

enum class DiagnosticKind {
    malformed_line,
    unknown_event_kind,
    duplicate_event,
    dangling_auction_ref,
    duplicate_asset,
    conflicting_asset,
};

inline const char* to_string(DiagnosticKind k) {
    switch (k) {
        case DiagnosticKind::malformed_line: return "malformed_line";
        case DiagnosticKind::unknown_event_kind: return "unknown_event_kind";
        case DiagnosticKind::duplicate_event: return "duplicate_event";
        case DiagnosticKind::dangling_auction_ref: return "dangling_auction_ref";
        case DiagnosticKind::duplicate_asset: return "duplicate_asset";
        case DiagnosticKind::conflicting_asset: return "conflicting_asset";
    }
    return "malformed_line";
}

struct Diagnostic {
    DiagnosticKind kind;
    size_t line = 0; // 1-based input line, 0 when not line-bound
    std::string message;
};

struct EventStream {
    std::vector<Event> events;       // sorted by (time, canonical form)
    std::vector<AssetRecord> assets; // first-seen order, deduplicated by id
    std::vector<Diagnostic> diagnostics;
};

using EventIndex = uint32_t;

} // namespace nftaudit
