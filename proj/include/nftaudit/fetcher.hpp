#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nftaudit {

enum class FetchMethod { head, get };

inline const char* to_string(FetchMethod m) { return m == FetchMethod::head ? "HEAD" : "GET"; }

// One request outcome. Status 0 stands for any transport-level failure:
// refused connection, DNS miss, timeout.
struct FetchRecord {
    FetchMethod method = FetchMethod::head;
    int status = 0;
};

// One attempt against a url: HEAD first, GET only when HEAD did not answer 200.
using FetchAttempt = std::vector<FetchRecord>;

struct UrlProbe {
    std::string url;
    std::vector<FetchAttempt> attempts;
};

// Transport interface so analyses and tests run against scripted responses.
class Fetcher {
  public:
    virtual ~Fetcher() = default;
    virtual int fetch(FetchMethod method, const std::string& url) = 0;
};

// Scripted transport: per url and method, a queue of statuses; the last entry
// repeats once the queue runs dry. Untouched urls answer with status 0.
class FixtureFetcher : public Fetcher {
  public:
    void script(const std::string& url, FetchMethod method, std::vector<int> statuses) {
        scripts_[{url, method}] = {std::move(statuses), 0};
    }
    int fetch(FetchMethod method, const std::string& url) override {
        ++calls_;
        auto it = scripts_.find({url, method});
        if (it == scripts_.end() || it->second.statuses.empty()) return 0;
        auto& [statuses, next] = it->second;
        int s = statuses[std::min(next, statuses.size() - 1)];
        ++next;
        return s;
    }
    size_t calls() const { return calls_; }

  private:
    struct Queue {
        std::vector<int> statuses;
        size_t next = 0;
    };
    std::map<std::pair<std::string, FetchMethod>, Queue> scripts_;
    size_t calls_ = 0;
};

inline bool attempt_succeeded(const FetchAttempt& a) {
    for (const auto& r : a) {
        if (r.status == 200) return true;
    }
    return false;
}

inline FetchAttempt run_attempt(Fetcher& f, const std::string& url) {
    FetchAttempt a;
    int head = f.fetch(FetchMethod::head, url);
    a.push_back({FetchMethod::head, head});
    if (head != 200) a.push_back({FetchMethod::get, f.fetch(FetchMethod::get, url)});
    return a;
}

// Probe each url up to max_attempts times, in rounds across the whole set so a
// live transport never hammers one host. A url leaves the rotation as soon as
// one attempt sees a 200.
inline std::vector<UrlProbe> probe_urls(std::span<const std::string> urls, Fetcher& f,
                                        int max_attempts = 3) {
    std::vector<UrlProbe> probes;
    probes.reserve(urls.size());
    for (const auto& u : urls) probes.push_back({u, {}});

    for (int round = 0; round < max_attempts; ++round) {
        for (auto& p : probes) {
            bool done = false;
            for (const auto& a : p.attempts) done |= attempt_succeeded(a);
            if (done) continue;
            p.attempts.push_back(run_attempt(f, p.url));
        }
    }
    return probes;
}

} // namespace nftaudit
