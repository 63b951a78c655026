// Command line front end: ingest normalization, detector runs, link audits,
// synthetic stream generation, and full reports over marketplace event files.
//
// Exit codes: 0 success, 1 unreadable or unparseable input, 2 bad
// configuration or usage.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nftaudit/auctions.hpp"
#include "nftaudit/config.hpp"
#include "nftaudit/evasion.hpp"
#include "nftaudit/fetcher.hpp"
#include "nftaudit/graph.hpp"
#include "nftaudit/httpfetch.hpp"
#include "nftaudit/ingest.hpp"
#include "nftaudit/linkaudit.hpp"
#include "nftaudit/model.hpp"
#include "nftaudit/names.hpp"
#include "nftaudit/report.hpp"
#include "nftaudit/shield.hpp"
#include "nftaudit/shill.hpp"
#include "nftaudit/synth.hpp"
#include "nftaudit/urldupes.hpp"
#include "nftaudit/version.hpp"
#include "nftaudit/wash.hpp"

#include <nlohmann/json.hpp>

namespace {

using namespace nftaudit;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitConfig = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_output(const std::optional<std::string>& path, const std::string& content) {
    if (!path) {
        std::cout << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw IngestError("cannot open " + *path + " for writing");
    out << content;
    if (!out) throw IngestError("cannot write " + *path);
}

void print_diagnostics(const EventStream& stream) {
    for (const auto& d : stream.diagnostics)
        std::cerr << "line " << d.line << ": " << d.message << "\n";
}

// Flag values are funneled through the same parser as config files, so both
// paths share one validation.
DetectorConfig load_config(const std::optional<std::string>& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
    DetectorConfig cfg;
    if (path) cfg = parse_config_text(read_file(*path));
    if (!overrides.empty()) {
        std::string text;
        for (const auto& [key, value] : overrides) text += key + " = " + value + "\n";
        cfg = parse_config_text(text, cfg);
    }
    return cfg;
}

struct ConfigFlags {
    std::optional<std::string> file;
    std::vector<std::pair<std::string, std::string>> overrides;

    void add(CLI::App* cmd) {
        cmd->add_option("--config", file, "detector configuration file");
        auto track = [this](const std::string& key) {
            return [this, key](const std::string& value) {
                overrides.emplace_back(key, value);
            };
        };
        cmd->add_option_function<std::string>("--epsilon", track("epsilon"),
                                              "wash repetition threshold");
        cmd->add_option_function<std::string>("--max-component-users",
                                              track("max_component_users"),
                                              "largest component treated as collusion");
        cmd->add_option_function<std::string>("--epsilon-scope", track("epsilon_scope"),
                                              "repetition scope: component or pair");
        cmd->add_option_function<std::string>("--hub-degree-cutoff",
                                              track("hub_degree_cutoff"),
                                              "payment hub exclusion degree");
        cmd->add_option_function<std::string>("--min-bids", track("min_bids"),
                                              "escalating bids needed for shill flag");
        cmd->add_option_function<std::string>("--sigma", track("sigma"),
                                              "sale participation ceiling for shills");
        cmd->add_option_function<std::string>("--mu", track("mu"),
                                              "bid concentration threshold");
        cmd->add_option_function<std::string>("--shield-cancel-window",
                                              track("shield_cancel_window_seconds"),
                                              "seconds before close a shield cancel must fall in");
        cmd->add_option_function<std::string>("--shield-skip-rivals",
                                              track("shield_skip_rivals"),
                                              "drop shield findings with real bid rivalry");
        cmd->add_option_function<std::string>("--name-max-distance",
                                              track("name_max_distance"),
                                              "edit distance treated as squatting");
        cmd->add_option_function<std::string>("--name-min-length", track("name_min_length"),
                                              "shortest name eligible for matching");
        cmd->add_option_function<std::string>("--name-min-assets", track("name_min_assets"),
                                              "smallest collection eligible for matching");
        cmd->add_option_function<std::string>("--image-hamming-threshold",
                                              track("image_hamming_threshold"),
                                              "hash distance treated as image similarity");
        cmd->add_option_function<std::string>("--evasion-window",
                                              track("evasion_window_seconds"),
                                              "settlement window around a transfer");
    }
};

const std::set<std::string> kDetectorNames{"wash",   "shill",    "shield", "failed_highest",
                                           "names",  "urldupes", "royalty", "evasion"};

std::set<std::string> parse_which(const std::string& which) {
    if (which.empty()) return kDetectorNames;
    std::set<std::string> out;
    size_t pos = 0;
    while (pos <= which.size()) {
        size_t comma = which.find(',', pos);
        std::string token = which.substr(
            pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!kDetectorNames.count(token))
            throw UsageError("unknown detector '" + token + "' in --which");
        out.insert(token);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

// ---- subcommand bodies ------------------------------------------------------

int run_ingest(const std::string& events_path, const std::optional<std::string>& assets_path,
               const std::optional<std::string>& out_path) {
    EventStream stream = ingest_files(events_path, assets_path);
    print_diagnostics(stream);
    write_output(out_path, serialize(stream));
    return kExitOk;
}

int run_detect(const std::string& events_path, const std::optional<std::string>& assets_path,
               const DetectorConfig& cfg, const std::set<std::string>& which,
               const std::optional<std::string>& out_path) {
    EventStream stream = ingest_files(events_path, assets_path);
    print_diagnostics(stream);

    RelationGraphs graphs = build_graphs(stream);
    auto auctions = reconstruct_auctions(stream);

    std::vector<ReportNode> doc;
    doc.push_back(report_header());
    doc.push_back(config_report(cfg));
    doc.push_back(ingest_report(stream));
    if (which.count("wash"))
        doc.push_back(wash_report(detect_wash_trades(stream, graphs, cfg), stream));
    if (which.count("shill"))
        doc.push_back(shill_report(detect_shill_bids(stream, graphs, auctions, cfg)));
    if (which.count("shield"))
        doc.push_back(shield_report(detect_bid_shielding(stream, auctions, cfg)));
    if (which.count("failed_highest"))
        doc.push_back(failed_highest_report(detect_failed_highest_bid(stream, auctions)));
    if (which.count("names")) {
        auto cols = collect_collections(stream.assets);
        doc.push_back(names_report(find_similar_collection_names(cols, cfg)));
    }
    if (which.count("urldupes"))
        doc.push_back(urldupes_report(find_duplicate_asset_urls(stream.assets)));
    if (which.count("royalty"))
        doc.push_back(royalty_report(count_royalty_increases(stream)));
    if (which.count("evasion"))
        doc.push_back(evasion_report(detect_offplatform_trades(stream, cfg)));

    write_output(out_path, render_report(doc));
    return kExitOk;
}

int run_audit(const std::string& events_path, const std::optional<std::string>& assets_path,
              const DetectorConfig& cfg, bool live, const std::vector<std::string>& allow,
              long timeout_seconds, const std::optional<std::string>& custodian,
              const std::optional<std::string>& out_path) {
    if (live && allow.empty())
        throw UsageError("--live needs at least one --allow host");
    std::optional<AccountId> vault;
    if (custodian) {
        vault = AccountId::parse(*custodian);
        if (!vault) throw UsageError("--custodian is not a valid address");
    }

    EventStream stream = ingest_files(events_path, assets_path);
    print_diagnostics(stream);

    std::map<std::string, Accessibility> classified;
    if (live) {
        std::vector<std::string> urls = collect_audit_urls(stream.assets);
        std::vector<std::string> reachable;
        for (const auto& u : urls) {
            auto target = parse_http_url(u);
            if (target && host_allowed(target->host, allow)) reachable.push_back(u);
        }
        HttpFetcher fetcher(allow, timeout_seconds);
        classified = classify_probes(probe_urls(reachable, fetcher));
    }

    std::vector<ReportNode> doc;
    doc.push_back(report_header());
    doc.push_back(config_report(cfg));
    doc.push_back(ingest_report(stream));
    doc.push_back(linkaudit_report(build_link_audit(stream.assets, classified)));
    doc.push_back(source_availability_report(source_availability_summary(stream.assets)));
    doc.push_back(verification_report(seller_verification_rows(stream),
                                      collection_verification_rows(stream)));
    if (vault) doc.push_back(escrow_report(*vault, escrow_time_series(stream, *vault)));

    write_output(out_path, render_report(doc));
    return kExitOk;
}

int run_report(const std::string& events_path, const std::optional<std::string>& assets_path,
               const DetectorConfig& cfg, const std::optional<std::string>& out_path) {
    EventStream stream = ingest_files(events_path, assets_path);
    print_diagnostics(stream);

    RelationGraphs graphs = build_graphs(stream);
    auto auctions = reconstruct_auctions(stream);

    std::vector<ReportNode> doc;
    doc.push_back(report_header());
    doc.push_back(config_report(cfg));
    doc.push_back(ingest_report(stream));
    doc.push_back(graph_report(graphs));
    doc.push_back(wash_report(detect_wash_trades(stream, graphs, cfg), stream));
    doc.push_back(shill_report(detect_shill_bids(stream, graphs, auctions, cfg)));
    doc.push_back(shield_report(detect_bid_shielding(stream, auctions, cfg)));
    doc.push_back(failed_highest_report(detect_failed_highest_bid(stream, auctions)));
    doc.push_back(
        names_report(find_similar_collection_names(collect_collections(stream.assets), cfg)));
    doc.push_back(urldupes_report(find_duplicate_asset_urls(stream.assets)));
    doc.push_back(royalty_report(count_royalty_increases(stream)));
    doc.push_back(evasion_report(detect_offplatform_trades(stream, cfg)));
    doc.push_back(linkaudit_report(build_link_audit(stream.assets, {})));
    doc.push_back(source_availability_report(source_availability_summary(stream.assets)));
    doc.push_back(verification_report(seller_verification_rows(stream),
                                      collection_verification_rows(stream)));

    write_output(out_path, render_report(doc));
    return kExitOk;
}

RingSpec parse_ring_spec(const std::string& text) {
    size_t x = text.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= text.size())
        throw UsageError("--wash-ring expects KxM, e.g. 3x12");
    try {
        RingSpec spec;
        spec.k = uint32_t(std::stoul(text.substr(0, x)));
        spec.m = uint32_t(std::stoul(text.substr(x + 1)));
        return spec;
    } catch (const std::exception&) {
        throw UsageError("--wash-ring expects KxM, e.g. 3x12");
    }
}

int run_synth(const SynthOptions& opt, const std::vector<std::string>& ring_specs,
              uint32_t shill, uint32_t shield, const std::optional<std::string>& out_path,
              const std::optional<std::string>& labels_path) {
    InjectionPlan plan;
    for (const auto& spec : ring_specs) plan.wash_rings.push_back(parse_ring_spec(spec));
    plan.shill_auctions = shill;
    plan.shield_auctions = shield;

    SynthResult result = synthesize(opt, plan);
    write_output(out_path, serialize(result.stream));

    if (labels_path) {
        nlohmann::json labels = nlohmann::json::array();
        for (const auto& label : result.labels) {
            nlohmann::json accounts = nlohmann::json::array();
            for (const auto& a : label.accounts) accounts.push_back(a.str());
            labels.push_back({{"kind", label.kind},
                              {"accounts", std::move(accounts)},
                              {"events", label.events}});
        }
        write_output(labels_path, labels.dump(2) + "\n");
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"forensic analysis of marketplace event streams"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    std::string events_path;
    std::optional<std::string> assets_path, out_path;

    auto add_io = [&](CLI::App* cmd, bool events_required = true) {
        auto* ev = cmd->add_option("--events", events_path, "event stream, one json object per line");
        if (events_required) ev->required();
        cmd->add_option("--assets", assets_path, "asset records, one json object per line");
        cmd->add_option("--out", out_path, "output file (default stdout)");
    };

    auto* ingest_cmd = app.add_subcommand("ingest", "normalize an event stream");
    add_io(ingest_cmd);

    auto* detect_cmd = app.add_subcommand("detect", "run fraud detectors");
    add_io(detect_cmd);
    ConfigFlags detect_cfg;
    detect_cfg.add(detect_cmd);
    std::string which_arg;
    detect_cmd->add_option("--which", which_arg,
                           "comma separated detectors: wash,shill,shield,failed_highest,"
                           "names,urldupes,royalty,evasion");

    auto* audit_cmd = app.add_subcommand("audit", "audit asset links and records");
    add_io(audit_cmd);
    ConfigFlags audit_cfg;
    audit_cfg.add(audit_cmd);
    bool live = false;
    audit_cmd->add_flag("--live", live, "probe urls over http (default: offline)");
    std::vector<std::string> allow;
    audit_cmd->add_option("--allow", allow, "host the live prober may contact (repeatable)");
    long timeout_seconds = 10;
    audit_cmd->add_option("--timeout", timeout_seconds, "per-request timeout in seconds");
    std::optional<std::string> custodian;
    audit_cmd->add_option("--custodian", custodian, "escrow account to trace custody for");

    auto* report_cmd = app.add_subcommand("report", "full analysis document");
    add_io(report_cmd);
    ConfigFlags report_cfg;
    report_cfg.add(report_cmd);

    auto* synth_cmd = app.add_subcommand("synth", "generate a labeled synthetic stream");
    SynthOptions synth_opt;
    synth_cmd->add_option("--seed", synth_opt.seed, "generator seed");
    synth_cmd->add_option("--users", synth_opt.users, "trader count");
    synth_cmd->add_option("--sales", synth_opt.sales, "baseline sale count");
    synth_cmd->add_option("--collections", synth_opt.collections, "collection count");
    synth_cmd->add_option("--assets-per-collection", synth_opt.assets_per_collection,
                          "assets per collection");
    synth_cmd->add_option("--auctions", synth_opt.benign_auctions, "benign auction count");
    std::vector<std::string> ring_specs;
    synth_cmd->add_option("--wash-ring", ring_specs, "planted ring as KxM (repeatable)");
    uint32_t shill = 0, shield = 0;
    synth_cmd->add_option("--shill", shill, "planted shill auctions");
    synth_cmd->add_option("--shield", shield, "planted bid shields");
    std::optional<std::string> labels_path;
    synth_cmd->add_option("--labels", labels_path, "write injection labels as json");
    synth_cmd->add_option("--out", out_path, "output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (ingest_cmd->parsed()) return run_ingest(events_path, assets_path, out_path);
        if (detect_cmd->parsed())
            return run_detect(events_path, assets_path,
                              load_config(detect_cfg.file, detect_cfg.overrides),
                              parse_which(which_arg), out_path);
        if (audit_cmd->parsed())
            return run_audit(events_path, assets_path,
                             load_config(audit_cfg.file, audit_cfg.overrides), live, allow,
                             timeout_seconds, custodian, out_path);
        if (report_cmd->parsed())
            return run_report(events_path, assets_path,
                              load_config(report_cfg.file, report_cfg.overrides), out_path);
        if (synth_cmd->parsed())
            return run_synth(synth_opt, ring_specs, shill, shield, out_path, labels_path);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SynthError& e) {
        std::cerr << "synthesis error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IngestError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitOk;
}
