#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nftaudit/auctions.hpp"
#include "nftaudit/config.hpp"
#include "nftaudit/decimal.hpp"
#include "nftaudit/evasion.hpp"
#include "nftaudit/graph.hpp"
#include "nftaudit/ingest.hpp"
#include "nftaudit/linkaudit.hpp"
#include "nftaudit/model.hpp"
#include "nftaudit/names.hpp"
#include "nftaudit/shield.hpp"
#include "nftaudit/shill.hpp"
#include "nftaudit/urldupes.hpp"
#include "nftaudit/version.hpp"
#include "nftaudit/wash.hpp"

namespace nftaudit {

// Line-oriented report document: ordered key-value entries with brace-nested
// sections. The writer is deterministic and the parser reads its output back
// losslessly, so downstream tooling can diff two reports byte by byte or walk
// them structurally, whichever is cheaper.

struct ReportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ReportNode {
    std::string key;
    std::optional<std::string> value; // set: entry; unset: section
    std::vector<ReportNode> children;

    bool operator==(const ReportNode&) const = default;

    ReportNode& section(std::string name) {
        children.push_back(ReportNode{std::move(name), std::nullopt, {}});
        return children.back();
    }
    ReportNode& set(std::string name, std::string v) {
        children.push_back(ReportNode{std::move(name), std::move(v), {}});
        return children.back();
    }
    ReportNode& set(std::string name, int64_t v) {
        return set(std::move(name), std::to_string(v));
    }
    ReportNode& set(std::string name, uint64_t v) {
        return set(std::move(name), std::to_string(v));
    }
    ReportNode& set(std::string name, uint32_t v) {
        return set(std::move(name), std::to_string(uint64_t(v)));
    }
    ReportNode& set(std::string name, bool v) {
        return set(std::move(name), std::string(v ? "true" : "false"));
    }
};

namespace detail {

inline bool valid_report_key(std::string_view key) {
    if (key.empty()) return false;
    for (char c : key) {
        bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                  (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
        if (!ok) return false;
    }
    return true;
}

inline std::string escape_report_value(std::string_view v) {
    std::string out;
    out.reserve(v.size());
    for (char c : v) {
        if (c == '\\')
            out += "\\\\";
        else if (c == '\n')
            out += "\\n";
        else if (c == '\r')
            out += "\\r";
        else
            out += c;
    }
    return out;
}

inline std::string unescape_report_value(std::string_view v) {
    std::string out;
    out.reserve(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        if (v[i] != '\\') {
            out += v[i];
            continue;
        }
        if (i + 1 >= v.size()) throw ReportError("dangling escape in value");
        char c = v[++i];
        if (c == '\\')
            out += '\\';
        else if (c == 'n')
            out += '\n';
        else if (c == 'r')
            out += '\r';
        else
            throw ReportError("unknown escape in value");
    }
    return out;
}

inline void render_node(const ReportNode& n, int depth, std::string& out) {
    if (!valid_report_key(n.key)) throw ReportError("invalid report key: " + n.key);
    out.append(size_t(depth) * 2, ' ');
    out += n.key;
    if (n.value) {
        out += " = ";
        out += escape_report_value(*n.value);
        out += '\n';
        if (!n.children.empty()) throw ReportError("entry with children: " + n.key);
    } else {
        out += " {\n";
        for (const auto& c : n.children) render_node(c, depth + 1, out);
        out.append(size_t(depth) * 2, ' ');
        out += "}\n";
    }
}

} // namespace detail

inline std::string render_report(const std::vector<ReportNode>& nodes) {
    std::string out;
    for (const auto& n : nodes) detail::render_node(n, 0, out);
    return out;
}

inline std::vector<ReportNode> parse_report(std::string_view text) {
    std::vector<ReportNode> root;
    std::vector<ReportNode*> stack; // open sections

    size_t pos = 0;
    size_t line_no = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) throw ReportError("missing final newline");
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        size_t indent = 0;
        while (indent < line.size() && line[indent] == ' ') ++indent;
        std::string_view body = line.substr(indent);
        auto fail = [&](const std::string& why) {
            throw ReportError("line " + std::to_string(line_no) + ": " + why);
        };
        if (body.empty()) fail("blank line");

        auto append = [&](ReportNode n) -> ReportNode* {
            auto& list = stack.empty() ? root : stack.back()->children;
            list.push_back(std::move(n));
            return &list.back();
        };

        // Entry detection runs before the section suffix: keys cannot contain
        // spaces, so the first " = " always belongs to the entry separator,
        // while a *value* may legitimately end in " {".
        if (body == "}") {
            if (stack.empty()) fail("unmatched closing brace");
            stack.pop_back();
        } else if (size_t sep = body.find(" = "); sep != std::string_view::npos) {
            std::string key(body.substr(0, sep));
            if (!detail::valid_report_key(key)) fail("bad entry key");
            append(ReportNode{std::move(key),
                              detail::unescape_report_value(body.substr(sep + 3)),
                              {}});
        } else if (body.size() > 2 && body.substr(body.size() - 2) == " {") {
            std::string key(body.substr(0, body.size() - 2));
            if (!detail::valid_report_key(key)) fail("bad section name");
            stack.push_back(append(ReportNode{std::move(key), std::nullopt, {}}));
        } else {
            fail("neither entry, section, nor closing brace");
        }
    }
    if (!stack.empty()) throw ReportError("unclosed section at end of input");
    return root;
}

// Structural lookup helpers for consumers and tests.
inline const ReportNode* find_child(const ReportNode& n, std::string_view key) {
    for (const auto& c : n.children)
        if (c.key == key) return &c;
    return nullptr;
}

inline const ReportNode* find_node(const std::vector<ReportNode>& nodes,
                                   std::string_view key) {
    for (const auto& n : nodes)
        if (n.key == key) return &n;
    return nullptr;
}

// ---- section builders ---------------------------------------------------------

namespace detail {

// Exact micro-unit ratio, rounding half up; avoids floating point so reports
// never drift across platforms.
inline std::string ratio_micro(int128 num, int128 den) {
    if (den == 0) return "0";
    int128 micro = (num * 1'000'000 + den / 2) / den;
    return format_scaled(micro, 6, /*trim=*/true);
}

inline std::string cents_str(int64_t cents) { return Usd::from_cents(cents).str(); }

} // namespace detail

inline ReportNode report_header() {
    ReportNode n{"tool", std::nullopt, {}};
    n.set("name", std::string("nftaudit"));
    n.set("version", std::string(kToolVersion));
    n.set("report_format", std::string("1"));
    return n;
}

inline ReportNode config_report(const DetectorConfig& cfg) {
    ReportNode n{"config", std::nullopt, {}};
    for (const auto& [key, value] : config_entries(cfg)) n.set(key, value);
    return n;
}

inline ReportNode ingest_report(const EventStream& stream) {
    ReportNode n{"ingest", std::nullopt, {}};
    n.set("events", uint64_t(stream.events.size()));
    n.set("assets", uint64_t(stream.assets.size()));
    uint64_t by_kind[9] = {};
    for (const auto& e : stream.events) by_kind[e.index()] += 1;
    ReportNode& kinds = n.section("events_by_kind");
    const char* names[9] = {"mint",        "sale", "auction_start", "bid",  "cancel_bid",
                            "win",         "auction_end",           "paid", "transfer"};
    for (size_t i = 0; i < 9; ++i) kinds.set(names[i], by_kind[i]);
    ReportNode& diag = n.section("diagnostics");
    uint64_t counts[6] = {};
    for (const auto& d : stream.diagnostics) counts[size_t(d.kind)] += 1;
    diag.set("malformed_line", counts[size_t(DiagnosticKind::malformed_line)]);
    diag.set("unknown_event_kind", counts[size_t(DiagnosticKind::unknown_event_kind)]);
    diag.set("duplicate_event", counts[size_t(DiagnosticKind::duplicate_event)]);
    diag.set("dangling_auction_ref", counts[size_t(DiagnosticKind::dangling_auction_ref)]);
    diag.set("duplicate_asset", counts[size_t(DiagnosticKind::duplicate_asset)]);
    diag.set("conflicting_asset", counts[size_t(DiagnosticKind::conflicting_asset)]);
    return n;
}

inline ReportNode graph_report(const RelationGraphs& graphs) {
    ReportNode n{"graphs", std::nullopt, {}};
    ReportNode& s = n.section("sale");
    s.set("users", uint64_t(graphs.sale.users.size()));
    s.set("edges", uint64_t(graphs.sale.edges.size()));
    ReportNode& b = n.section("bid");
    b.set("users", uint64_t(graphs.bid.users.size()));
    b.set("assets", uint64_t(graphs.bid.assets.size()));
    b.set("edges", uint64_t(graphs.bid.edges.size()));
    ReportNode& p = n.section("payment");
    p.set("users", uint64_t(graphs.payment.users.size()));
    p.set("edges", uint64_t(graphs.payment.edges.size()));
    ReportNode& t = n.section("transfer");
    t.set("users", uint64_t(graphs.transfer.users.size()));
    t.set("edges", uint64_t(graphs.transfer.edges.size()));
    return n;
}

inline ReportNode wash_report(const WashAnalysis& analysis, const EventStream& stream) {
    ReportNode n{"wash_trading", std::nullopt, {}};
    n.set("findings", uint64_t(analysis.findings.size()));
    n.set("flagged_sales", uint64_t(analysis.flagged_sales.size()));
    n.set("excluded_payment_hubs", uint64_t(analysis.excluded_payment_hubs.size()));
    for (const auto& f : analysis.findings) {
        ReportNode& fn = n.section("finding");
        ReportNode& members = fn.section("members");
        for (const auto& m : f.members) members.set("member", m.str());
        fn.set("sales", uint64_t(f.sales.size()));
        fn.set("volume_usd", detail::cents_str(int64_t(f.volume_usd_cents)));
        fn.set("first_time", f.first_time);
        fn.set("via_sale_cycle", f.via_sale_cycle);
        fn.set("via_transfer_link", f.via_transfer_link);
        fn.set("via_payment_link", f.via_payment_link);
    }
    auto volumes = wash_volume_by_collection(stream, analysis);
    if (!volumes.empty()) {
        ReportNode& factors = n.section("collections");
        for (const auto& [slug, vol] : volumes) {
            ReportNode& c = factors.section("collection");
            c.set("slug", slug);
            c.set("flagged_usd", detail::cents_str(int64_t(vol.flagged_usd_cents)));
            c.set("total_usd", detail::cents_str(int64_t(vol.total_usd_cents)));
            if (vol.total_usd_cents > 0)
                c.set("wash_trade_factor",
                      detail::ratio_micro(vol.flagged_usd_cents, vol.total_usd_cents));
        }
    }
    return n;
}

inline ReportNode shill_report(const std::vector<ShillFinding>& findings) {
    ReportNode n{"shill_bidding", std::nullopt, {}};
    n.set("findings", uint64_t(findings.size()));
    for (const auto& f : findings) {
        ReportNode& fn = n.section("finding");
        fn.set("bidder", f.bidder.str());
        fn.set("seller", f.seller.str());
        fn.set("auction_id", f.auction_id);
        fn.set("bids", uint64_t(f.bid_count));
        fn.set("concentration", std::to_string(f.score_num) + "/" + std::to_string(f.score_den));
        fn.set("linked_by_transfer", f.linked_by_transfer);
        fn.set("linked_by_payment", f.linked_by_payment);
        if (f.profit) fn.set("profit_usd", f.profit->str());
        fn.set("first_bid_time", f.first_bid_time);
    }
    return n;
}

inline ReportNode shield_report(const std::vector<ShieldFinding>& findings) {
    ReportNode n{"bid_shielding", std::nullopt, {}};
    n.set("findings", uint64_t(findings.size()));
    for (const auto& f : findings) {
        ReportNode& fn = n.section("finding");
        fn.set("winner", f.winner.str());
        fn.set("canceller", f.canceller.str());
        fn.set("auction_id", f.auction_id);
        fn.set("winning_usd", f.winning_amount.str());
        fn.set("cancelled_usd", f.cancelled_amount.str());
        fn.set("difference_usd", f.difference.str());
        fn.set("cancel_time", f.cancel_time);
    }
    return n;
}

inline ReportNode failed_highest_report(const std::vector<FailedHighestBid>& findings) {
    ReportNode n{"failed_highest_bid", std::nullopt, {}};
    n.set("findings", uint64_t(findings.size()));
    for (const auto& f : findings) {
        ReportNode& fn = n.section("finding");
        fn.set("auction_id", f.auction_id);
        fn.set("highest_bidder", f.highest_bidder.str());
        fn.set("highest_usd", f.highest_amount.str());
        fn.set("winner", f.winner.str());
        fn.set("winning_usd", f.winning_amount.str());
    }
    return n;
}

inline ReportNode names_report(const std::vector<NameMatch>& matches) {
    ReportNode n{"name_squatting", std::nullopt, {}};
    n.set("findings", uint64_t(matches.size()));
    for (const auto& m : matches) {
        ReportNode& fn = n.section("finding");
        fn.set("verified_slug", m.verified_slug);
        fn.set("verified_name", m.verified_name);
        fn.set("replica_slug", m.replica_slug);
        fn.set("replica_name", m.replica_name);
        fn.set("distance", uint64_t(m.distance));
    }
    return n;
}

inline ReportNode urldupes_report(const UrlDuplicates& dupes) {
    ReportNode n{"duplicate_image_urls", std::nullopt, {}};
    n.set("cross_collection_groups", uint64_t(dupes.cross_collection.size()));
    n.set("same_collection_groups", uint64_t(dupes.same_collection.size()));
    for (const auto& g : dupes.cross_collection) {
        ReportNode& gn = n.section("group");
        gn.set("key", g.key);
        gn.set("kind", std::string(g.kind == UrlKind::ipfs ? "ipfs" : "url"));
        gn.set("assets", uint64_t(g.assets.size()));
        ReportNode& cols = gn.section("collections");
        for (const auto& slug : g.collections) cols.set("slug", slug);
    }
    return n;
}

inline ReportNode royalty_report(const std::vector<RoyaltyIncreaseRow>& rows) {
    ReportNode n{"royalty_increases", std::nullopt, {}};
    uint64_t raised = 0;
    for (const auto& r : rows) raised += r.increases > 0 ? 1 : 0;
    n.set("assets_with_royalty_sales", uint64_t(rows.size()));
    n.set("assets_with_increases", raised);
    for (const auto& r : rows) {
        if (r.increases == 0) continue;
        ReportNode& rn = n.section("asset");
        rn.set("id", r.asset.str());
        if (r.collection_slug) rn.set("collection", *r.collection_slug);
        rn.set("increases", uint64_t(r.increases));
    }
    return n;
}

inline ReportNode evasion_report(const std::vector<EvasionInstance>& instances) {
    ReportNode n{"offplatform_settlement", std::nullopt, {}};
    n.set("findings", uint64_t(instances.size()));
    for (const auto& e : instances) {
        ReportNode& en = n.section("finding");
        en.set("seller", e.seller.str());
        en.set("buyer", e.buyer.str());
        en.set("asset", e.asset.str());
        en.set("amount_wei", e.amount_wei.str());
        en.set("transfer_time", e.transfer_time);
        en.set("payment_time", e.payment_time);
        en.set("gap_seconds", e.gap_seconds);
    }
    return n;
}

inline ReportNode linkaudit_report(const LinkAuditMatrix& matrix) {
    ReportNode n{"link_audit", std::nullopt, {}};
    n.set("assets", uint64_t(matrix.assets));
    auto slot = [&](const char* name, const SlotAudit& s) {
        ReportNode& sn = n.section(name);
        sn.set("ipfs_alive", s.alive[size_t(UrlKind::ipfs)]);
        sn.set("ipfs_inaccessible", s.inaccessible[size_t(UrlKind::ipfs)]);
        sn.set("url_alive", s.alive[size_t(UrlKind::non_ipfs)]);
        sn.set("url_inaccessible", s.inaccessible[size_t(UrlKind::non_ipfs)]);
        sn.set("unclassified", s.unclassified);
        sn.set("missing", s.missing);
    };
    slot("image", matrix.image);
    slot("metadata", matrix.metadata);
    return n;
}

inline ReportNode source_availability_report(const SourceAvailabilitySummary& s) {
    ReportNode n{"source_availability", std::nullopt, {}};
    n.set("available_live", s.available_live);
    n.set("available_taken_down", s.available_taken_down);
    n.set("unavailable_live", s.unavailable_live);
    n.set("unavailable_taken_down", s.unavailable_taken_down);
    n.set("unknown", s.unknown);
    return n;
}

inline ReportNode escrow_report(const AccountId& custodian,
                                const std::vector<EscrowPoint>& series) {
    ReportNode n{"custody", std::nullopt, {}};
    n.set("custodian", custodian.str());
    n.set("points", uint64_t(series.size()));
    n.set("held_now", uint64_t(series.empty() ? 0 : series.back().count));
    for (const auto& p : series) {
        ReportNode& pn = n.section("point");
        pn.set("time", p.time);
        pn.set("held", p.count);
    }
    return n;
}

inline ReportNode verification_report(const std::vector<SellerVerificationRow>& sellers,
                                      const std::vector<CollectionVerificationRow>& cols) {
    ReportNode n{"verification", std::nullopt, {}};
    for (const auto& r : sellers) {
        ReportNode& rn = n.section(r.seller_verified ? "verified_sellers"
                                                     : "unverified_sellers");
        rn.set("sellers", r.sellers);
        rn.set("sales", r.sales);
        rn.set("volume_usd", detail::cents_str(r.volume_cents));
        if (r.average_cents) rn.set("average_usd", detail::cents_str(*r.average_cents));
    }
    ReportNode& cn = n.section("collections");
    cn.set("count", uint64_t(cols.size()));
    for (const auto& c : cols) {
        ReportNode& rn = cn.section("collection");
        rn.set("slug", c.slug);
        rn.set("verified", c.verified);
        rn.set("taken_down", c.taken_down);
        rn.set("assets", c.assets);
        rn.set("sales", c.sales);
        rn.set("volume_usd", detail::cents_str(c.volume_cents));
        if (c.average_cents) rn.set("average_usd", detail::cents_str(*c.average_cents));
    }
    return n;
}

} // namespace nftaudit
