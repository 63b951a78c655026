#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "nftaudit/decimal.hpp"

namespace nftaudit {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Detection thresholds. Defaults are the operating points the detectors were
// calibrated at; every one can be overridden by config file or CLI flag.
struct DetectorConfig {
    // wash trading
    int epsilon = 10;             // trades per connected pair before a cycle counts as heavy
    int max_component_users = 50; // larger components are treated as organic markets
    enum class EpsilonScope { component, pair };
    EpsilonScope epsilon_scope = EpsilonScope::component; // quantifier for the pair filter
    int hub_degree_cutoff = 1000; // distinct payment neighbors before a node is a hub

    // shill bidding
    int min_bids = 3;          // escalating bids required on one auction
    int sigma = 10;            // sale participations that disqualify a busy account
    int64_t mu_micro = 800000; // bid-concentration ratio bound, millionths

    // bid shielding
    int64_t shield_cancel_window_seconds = 0; // 0 = off; else cancel must sit this close to close
    bool shield_skip_rivals = false;          // drop pairs that keep outbidding each other

    // counterfeit collections
    int name_max_distance = 2;
    int name_min_length = 8;
    int name_min_assets = 10;
    int image_hamming_threshold = 0;

    // off-platform settlement
    int64_t evasion_window_seconds = 900;
};

inline void validate(const DetectorConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (c.epsilon < 1) fail("epsilon must be >= 1");
    if (c.max_component_users < 2) fail("max_component_users must be >= 2");
    if (c.hub_degree_cutoff < 0) fail("hub_degree_cutoff must be >= 0");
    if (c.min_bids < 2) fail("min_bids must be >= 2");
    if (c.sigma < 1) fail("sigma must be >= 1");
    if (c.mu_micro <= 0 || c.mu_micro > 1000000) fail("mu must be in (0, 1]");
    if (c.shield_cancel_window_seconds < 0) fail("shield_cancel_window_seconds must be >= 0");
    if (c.name_max_distance < 0) fail("name_max_distance must be >= 0");
    if (c.name_min_length < 1) fail("name_min_length must be >= 1");
    if (c.name_min_assets < 1) fail("name_min_assets must be >= 1");
    if (c.image_hamming_threshold < 0 || c.image_hamming_threshold > 64)
        fail("image_hamming_threshold must be in [0, 64]");
    if (c.evasion_window_seconds < 0) fail("evasion_window_seconds must be >= 0");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

inline int64_t config_int(std::string_view key, std::string_view v) {
    auto parsed = parse_scaled(v, 0);
    if (!parsed || *parsed > int128(INT64_MAX))
        throw ConfigError(std::string(key) + " must be a non-negative integer");
    return int64_t(*parsed);
}

inline bool config_bool(std::string_view key, std::string_view v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError(std::string(key) + " must be true or false");
}

} // namespace detail

// "key = value" lines; '#' starts a comment; unknown keys are errors so typos
// cannot silently revert a threshold to its default.
inline DetectorConfig parse_config_text(std::string_view text, DetectorConfig base = {}) {
    DetectorConfig c = base;
    size_t start = 0;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = detail::trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("config line is not key = value: " + std::string(line));
        std::string key(detail::trim(line.substr(0, eq)));
        std::string val(detail::trim(line.substr(eq + 1)));
        if (val.empty()) throw ConfigError(key + " has no value");

        if (key == "epsilon") c.epsilon = int(detail::config_int(key, val));
        else if (key == "max_component_users") c.max_component_users = int(detail::config_int(key, val));
        else if (key == "epsilon_scope") {
            if (val == "component") c.epsilon_scope = DetectorConfig::EpsilonScope::component;
            else if (val == "pair") c.epsilon_scope = DetectorConfig::EpsilonScope::pair;
            else throw ConfigError("epsilon_scope must be component or pair");
        } else if (key == "hub_degree_cutoff") c.hub_degree_cutoff = int(detail::config_int(key, val));
        else if (key == "min_bids") c.min_bids = int(detail::config_int(key, val));
        else if (key == "sigma") c.sigma = int(detail::config_int(key, val));
        else if (key == "mu") {
            auto micro = parse_scaled(val, 6);
            if (!micro) throw ConfigError("mu must be a decimal with up to six places");
            c.mu_micro = int64_t(*micro);
        } else if (key == "shield_cancel_window_seconds")
            c.shield_cancel_window_seconds = detail::config_int(key, val);
        else if (key == "shield_skip_rivals") c.shield_skip_rivals = detail::config_bool(key, val);
        else if (key == "name_max_distance") c.name_max_distance = int(detail::config_int(key, val));
        else if (key == "name_min_length") c.name_min_length = int(detail::config_int(key, val));
        else if (key == "name_min_assets") c.name_min_assets = int(detail::config_int(key, val));
        else if (key == "image_hamming_threshold")
            c.image_hamming_threshold = int(detail::config_int(key, val));
        else if (key == "evasion_window_seconds")
            c.evasion_window_seconds = detail::config_int(key, val);
        else
            throw ConfigError("unknown config key: " + key);
    }
    return c;
}

// Ordered echo of the effective thresholds, for reports.
inline std::vector<std::pair<std::string, std::string>> config_entries(const DetectorConfig& c) {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("epsilon", std::to_string(c.epsilon));
    out.emplace_back("max_component_users", std::to_string(c.max_component_users));
    out.emplace_back("epsilon_scope",
                     c.epsilon_scope == DetectorConfig::EpsilonScope::component ? "component"
                                                                                : "pair");
    out.emplace_back("hub_degree_cutoff", std::to_string(c.hub_degree_cutoff));
    out.emplace_back("min_bids", std::to_string(c.min_bids));
    out.emplace_back("sigma", std::to_string(c.sigma));
    std::string mu = format_scaled(c.mu_micro, 6, /*trim=*/true);
    out.emplace_back("mu", mu);
    out.emplace_back("shield_cancel_window_seconds",
                     std::to_string(c.shield_cancel_window_seconds));
    out.emplace_back("shield_skip_rivals", c.shield_skip_rivals ? "true" : "false");
    out.emplace_back("name_max_distance", std::to_string(c.name_max_distance));
    out.emplace_back("name_min_length", std::to_string(c.name_min_length));
    out.emplace_back("name_min_assets", std::to_string(c.name_min_assets));
    out.emplace_back("image_hamming_threshold", std::to_string(c.image_hamming_threshold));
    out.emplace_back("evasion_window_seconds", std::to_string(c.evasion_window_seconds));
    return out;
}

} // namespace nftaudit
