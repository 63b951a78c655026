#pragma once

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "nftaudit/model.hpp"

namespace nftaudit {

using json = nlohmann::json;

struct IngestError : std::runtime_error {
    explicit IngestError(const std::string& what) : std::runtime_error(what) {}
};

// ---- serialization -------------------------------------------------------
// Canonical form: compact JSON, keys in byte order (nlohmann's default map),
// amounts as decimal strings, one record per line.

namespace detail {

inline json asset_id_json(const AssetId& a) {
    return json{{"contract", a.contract.str()}, {"token_id", a.token_id}};
}

} // namespace detail

inline json to_json(const Event& e) {
    using detail::asset_id_json;
    json j;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Mint>) {
                j["type"] = "mint";
                j["creator"] = v.creator.str();
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, Sale>) {
                j["type"] = "sale";
                j["seller"] = v.seller.str();
                j["buyer"] = v.buyer.str();
                j["asset"] = asset_id_json(v.asset);
                j["price_usd"] = v.price_usd.str();
                j["price_eth"] = v.price_eth.str();
                if (v.royalty_fraction) j["royalty_fraction"] = v.royalty_fraction->str();
                if (v.tx) j["tx"] = v.tx->str();
            } else if constexpr (std::is_same_v<T, AuctionStart>) {
                j["type"] = "auction_start";
                j["seller"] = v.seller.str();
                j["reserve_usd"] = v.reserve_usd.str();
                j["auction_id"] = v.auction_id;
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, Bid>) {
                j["type"] = "bid";
                j["bidder"] = v.bidder.str();
                j["amount_usd"] = v.amount_usd.str();
                j["auction_id"] = v.auction_id;
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, CancelBid>) {
                j["type"] = "cancel_bid";
                j["bidder"] = v.bidder.str();
                j["amount_usd"] = v.amount_usd.str();
                j["auction_id"] = v.auction_id;
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, Win>) {
                j["type"] = "win";
                j["winner"] = v.winner.str();
                j["amount_usd"] = v.amount_usd.str();
                j["auction_id"] = v.auction_id;
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, AuctionEnd>) {
                j["type"] = "auction_end";
                j["auction_id"] = v.auction_id;
                j["asset"] = asset_id_json(v.asset);
            } else if constexpr (std::is_same_v<T, Paid>) {
                j["type"] = "paid";
                j["from"] = v.from.str();
                j["to"] = v.to.str();
                j["amount_wei"] = v.amount_wei.str();
                if (v.tx) j["tx"] = v.tx->str();
            } else if constexpr (std::is_same_v<T, Transfer>) {
                j["type"] = "transfer";
                j["from"] = v.from.str();
                j["to"] = v.to.str();
                j["asset"] = asset_id_json(v.asset);
                if (v.tx) j["tx"] = v.tx->str();
            }
            j["time"] = v.time;
        },
        e);
    return j;
}

inline json to_json(const AssetRecord& a) {
    json j;
    j["type"] = "asset";
    j["id"] = detail::asset_id_json(a.id);
    j["collection_slug"] = a.collection_slug;
    j["collection_name"] = a.collection_name;
    if (a.image_url) j["image_url"] = *a.image_url;
    if (a.metadata_url) j["metadata_url"] = *a.metadata_url;
    j["marketplace"] = to_string(a.marketplace);
    if (a.source_available) j["source_available"] = *a.source_available;
    j["collection_verified"] = a.collection_verified;
    if (a.seller_verified) j["seller_verified"] = *a.seller_verified;
    j["taken_down"] = a.taken_down;
    return j;
}

inline std::string serialize(const EventStream& s) {
    std::string out;
    for (const auto& a : s.assets) {
        out += to_json(a).dump();
        out += '\n';
    }
    for (const auto& e : s.events) {
        out += to_json(e).dump();
        out += '\n';
    }
    return out;
}

// ---- parsing -------------------------------------------------------------

namespace detail {

struct FieldError : std::runtime_error {
    explicit FieldError(const std::string& m) : std::runtime_error(m) {}
};

inline const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) throw FieldError(std::string("missing field ") + key);
    return *it;
}

inline std::string amount_text(const json& v, const char* key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return v.dump();
    throw FieldError(std::string("field ") + key + " must be a decimal string");
}

inline AccountId get_account(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) throw FieldError(std::string("field ") + key + " must be an address string");
    auto a = AccountId::parse(v.get<std::string>());
    if (!a) throw FieldError(std::string("field ") + key + " is not a valid address");
    return *a;
}

inline AssetId get_asset(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_object()) throw FieldError(std::string("field ") + key + " must be an object");
    AccountId contract = get_account(v, "contract");
    const json& tok = require(v, "token_id");
    std::string raw;
    if (tok.is_string())
        raw = tok.get<std::string>();
    else if (tok.is_number_unsigned() || tok.is_number_integer())
        raw = tok.dump();
    else
        throw FieldError("token_id must be an unsigned integer or digit string");
    auto canon = canonical_token_id(raw);
    if (!canon) throw FieldError("token_id is not a valid unsigned integer");
    return AssetId{contract, *canon};
}

inline Timestamp get_time(const json& j) {
    const json& v = require(j, "time");
    if (!v.is_number_integer() && !v.is_number_unsigned())
        throw FieldError("time must be an integer");
    auto t = v.get<int64_t>();
    if (t < 0) throw FieldError("time must be non-negative");
    return t;
}

inline Usd get_usd(const json& j, const char* key) {
    auto v = Usd::parse(amount_text(require(j, key), key));
    if (!v) throw FieldError(std::string("field ") + key + " is not a valid usd amount");
    return *v;
}

inline Eth get_eth(const json& j, const char* key) {
    auto v = Eth::parse(amount_text(require(j, key), key));
    if (!v) throw FieldError(std::string("field ") + key + " is not a valid eth amount");
    return *v;
}

inline Wei get_wei(const json& j, const char* key) {
    auto v = Wei::parse(amount_text(require(j, key), key));
    if (!v) throw FieldError(std::string("field ") + key + " is not a valid wei amount");
    return *v;
}

inline std::optional<Royalty> get_royalty_opt(const json& j) {
    auto it = j.find("royalty_fraction");
    if (it == j.end() || it->is_null()) return std::nullopt;
    auto v = Royalty::parse(amount_text(*it, "royalty_fraction"));
    if (!v) throw FieldError("royalty_fraction must be a decimal in [0, 1]");
    return v;
}

inline std::optional<TxHash> get_tx_opt(const json& j) {
    auto it = j.find("tx");
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw FieldError("tx must be a hash string");
    auto v = TxHash::parse(it->get<std::string>());
    if (!v) throw FieldError("tx is not a valid 32-byte hash");
    return v;
}

inline std::string get_string(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_string()) throw FieldError(std::string("field ") + key + " must be a string");
    return v.get<std::string>();
}

inline std::optional<std::string> get_string_opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw FieldError(std::string("field ") + key + " must be a string");
    return it->get<std::string>();
}

inline bool get_bool(const json& j, const char* key) {
    const json& v = require(j, key);
    if (!v.is_boolean()) throw FieldError(std::string("field ") + key + " must be a boolean");
    return v.get<bool>();
}

inline std::optional<bool> get_bool_opt(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_boolean()) throw FieldError(std::string("field ") + key + " must be a boolean");
    return it->get<bool>();
}

inline std::string get_auction_id(const json& j) {
    std::string id = get_string(j, "auction_id");
    if (id.empty()) throw FieldError("auction_id must be non-empty");
    return id;
}

inline Event parse_known_event(const std::string& kind, const json& j) {
    if (kind == "mint")
        return Mint{get_account(j, "creator"), get_asset(j, "asset"), get_time(j)};
    if (kind == "sale")
        return Sale{get_account(j, "seller"), get_account(j, "buyer"), get_asset(j, "asset"),
                    get_usd(j, "price_usd"),  get_eth(j, "price_eth"),  get_royalty_opt(j),
                    get_time(j),              get_tx_opt(j)};
    if (kind == "auction_start")
        return AuctionStart{get_account(j, "seller"), get_usd(j, "reserve_usd"), get_time(j),
                            get_auction_id(j), get_asset(j, "asset")};
    if (kind == "bid")
        return Bid{get_account(j, "bidder"), get_usd(j, "amount_usd"), get_time(j),
                   get_auction_id(j), get_asset(j, "asset")};
    if (kind == "cancel_bid")
        return CancelBid{get_account(j, "bidder"), get_usd(j, "amount_usd"), get_time(j),
                         get_auction_id(j), get_asset(j, "asset")};
    if (kind == "win")
        return Win{get_account(j, "winner"), get_usd(j, "amount_usd"), get_time(j),
                   get_auction_id(j), get_asset(j, "asset")};
    if (kind == "auction_end")
        return AuctionEnd{get_auction_id(j), get_asset(j, "asset"), get_time(j)};
    if (kind == "paid")
        return Paid{get_account(j, "from"), get_account(j, "to"), get_wei(j, "amount_wei"),
                    get_time(j), get_tx_opt(j)};
    if (kind == "transfer")
        return Transfer{get_account(j, "from"), get_account(j, "to"), get_asset(j, "asset"),
                        get_time(j), get_tx_opt(j)};
    throw FieldError("unreachable kind");
}

inline AssetRecord parse_asset_record(const json& j) {
    AssetRecord a;
    a.id = get_asset(j, "id");
    a.collection_slug = get_string(j, "collection_slug");
    a.collection_name = get_string(j, "collection_name");
    a.image_url = get_string_opt(j, "image_url");
    a.metadata_url = get_string_opt(j, "metadata_url");
    auto mp = parse_marketplace(get_string(j, "marketplace"));
    if (!mp) throw FieldError("marketplace is not a known marketplace name");
    a.marketplace = *mp;
    a.source_available = get_bool_opt(j, "source_available");
    a.collection_verified = get_bool(j, "collection_verified");
    a.seller_verified = get_bool_opt(j, "seller_verified");
    a.taken_down = get_bool(j, "taken_down");
    return a;
}

inline bool known_event_kind(const std::string& k) {
    static const char* kinds[] = {"mint", "sale",        "auction_start", "bid", "cancel_bid",
                                  "win",  "auction_end", "paid",          "transfer"};
    for (auto* s : kinds)
        if (k == s) return true;
    return false;
}

} // namespace detail

// Event order used everywhere: time first, canonical serialized form as the
// tiebreak. Input order never leaks into the result.
inline void canonical_sort(std::vector<Event>& events) {
    std::vector<std::pair<std::string, Event>> rows;
    rows.reserve(events.size());
    for (auto& e : events) rows.emplace_back(to_json(e).dump(), std::move(e));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        Timestamp ta = event_time(a.second), tb = event_time(b.second);
        if (ta != tb) return ta < tb;
        return a.first < b.first;
    });
    events.clear();
    for (auto& r : rows) events.push_back(std::move(r.second));
}

// Ingests newline-delimited records. Events are sorted by time with the
// canonical serialized form as tiebreak, so any permutation of the same line
// set yields the same stream. Exact duplicate records are dropped with a
// diagnostic. Throws IngestError when more than half of the non-blank lines
// are malformed.
inline EventStream ingest(std::string_view content) {
    EventStream out;

    struct Row {
        Event ev;
        std::string key; // canonical serialized form
        size_t line;
    };
    std::vector<Row> rows;

    size_t considered = 0, malformed = 0;
    size_t line_no = 0;
    size_t start = 0;
    while (start <= content.size()) {
        size_t end = content.find('\n', start);
        if (end == std::string_view::npos) end = content.size();
        std::string_view line = content.substr(start, end - start);
        start = end + 1;
        if (start > content.size() && line.empty()) break;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
        if (blank) continue;
        ++considered;

        json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object()) {
            ++malformed;
            out.diagnostics.push_back({DiagnosticKind::malformed_line, line_no, "invalid json"});
            continue;
        }
        auto type_it = j.find("type");
        if (type_it == j.end() || !type_it->is_string()) {
            ++malformed;
            out.diagnostics.push_back(
                {DiagnosticKind::malformed_line, line_no, "missing type discriminator"});
            continue;
        }
        std::string kind = type_it->get<std::string>();
        try {
            if (kind == "asset") {
                out.assets.push_back(detail::parse_asset_record(j));
            } else if (detail::known_event_kind(kind)) {
                Event ev = detail::parse_known_event(kind, j);
                rows.push_back({std::move(ev), std::string(), line_no});
            } else {
                out.diagnostics.push_back(
                    {DiagnosticKind::unknown_event_kind, line_no, "unknown kind: " + kind});
            }
        } catch (const detail::FieldError& fe) {
            ++malformed;
            out.diagnostics.push_back({DiagnosticKind::malformed_line, line_no,
                                       kind + ": " + fe.what()});
        }
    }

    if (considered > 0 && malformed * 2 > considered) {
        std::ostringstream os;
        os << "refusing stream: " << malformed << " of " << considered << " lines malformed";
        throw IngestError(os.str());
    }

    for (auto& r : rows) r.key = to_json(r.ev).dump();
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        Timestamp ta = event_time(a.ev), tb = event_time(b.ev);
        if (ta != tb) return ta < tb;
        return a.key < b.key;
    });
    out.events.reserve(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].key == rows[i - 1].key) {
            out.diagnostics.push_back(
                {DiagnosticKind::duplicate_event, rows[i].line, "duplicate of an earlier record"});
            continue;
        }
        out.events.push_back(std::move(rows[i].ev));
    }

    // Asset records: first record per id wins; repeats are diagnosed.
    {
        std::vector<AssetRecord> unique;
        std::unordered_map<AssetId, size_t, AssetIdHash> seen;
        for (auto& a : out.assets) {
            auto [it, fresh] = seen.emplace(a.id, unique.size());
            if (fresh) {
                unique.push_back(std::move(a));
            } else if (unique[it->second] == a) {
                out.diagnostics.push_back(
                    {DiagnosticKind::duplicate_asset, 0, "duplicate asset record " + a.id.str()});
            } else {
                out.diagnostics.push_back({DiagnosticKind::conflicting_asset, 0,
                                           "conflicting asset record " + a.id.str()});
            }
        }
        out.assets = std::move(unique);
    }

    // Auction references without a start are kept but flagged.
    {
        std::unordered_set<std::string> started;
        for (const auto& e : out.events)
            if (auto* s = std::get_if<AuctionStart>(&e)) started.insert(s->auction_id);
        for (const auto& e : out.events) {
            const std::string* id = nullptr;
            if (auto* b = std::get_if<Bid>(&e)) id = &b->auction_id;
            else if (auto* c = std::get_if<CancelBid>(&e)) id = &c->auction_id;
            else if (auto* w = std::get_if<Win>(&e)) id = &w->auction_id;
            if (id && !started.count(*id))
                out.diagnostics.push_back({DiagnosticKind::dangling_auction_ref, 0,
                                           "auction " + *id + " has no start event"});
        }
    }

    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    if (in.bad()) throw IngestError("cannot read " + path);
    return os.str();
}

inline EventStream ingest_files(const std::string& events_path,
                                const std::optional<std::string>& assets_path = std::nullopt) {
    std::string content = read_file(events_path);
    if (assets_path) {
        if (!content.empty() && content.back() != '\n') content += '\n';
        content += read_file(*assets_path);
    }
    return ingest(content);
}

} // namespace nftaudit
