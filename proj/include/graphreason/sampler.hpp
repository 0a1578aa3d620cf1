#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace graphreason {

struct SampleRequest {
    std::string prompt;
    std::size_t n = 1;
    double temperature = 0.0;
    std::size_t max_tokens = 1024;
    std::vector<std::string> stop;
};

/// Sampling settings per pipeline stage.
enum class Profile {
    initial,       // n=3, T=0.9
    augmentation,  // n=30, T=0.9
    dpo,           // n=20, T=0.9
    eval,          // n=1, T=0, 1024 tokens
};

std::string_view profile_name(Profile p);
/// Throws Error(invalid_spec) on an unknown name.
Profile parse_profile(std::string_view name);
SampleRequest make_request(Profile p, std::string prompt);

class Backend {
public:
    virtual ~Backend() = default;
    /// Exactly req.n completions. Implementations must be safe to call from several threads.
    virtual std::vector<std::string> complete(const SampleRequest& req) = 0;
    virtual std::string name() const = 0;
};

struct StubOptions {
    std::uint64_t seed = 0;
    // probability that a completion reaches a wrong conclusion
    double error_rate = 0.0;
    // parse the problem out of the prompt and answer it; otherwise emit placeholder text
    bool problems_aware = true;
};

/// Offline backend. Completion i depends only on (seed, prompt, i).
class StubBackend : public Backend {
public:
    explicit StubBackend(StubOptions options = {});
    std::vector<std::string> complete(const SampleRequest& req) override;
    std::string name() const override { return "stub"; }

private:
    StubOptions options_;
};

struct HttpOptions {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-4";
    std::string api_key_env = "OPENAI_API_KEY";
    int max_retries = 5;
    int initial_backoff_ms = 500;
    int max_backoff_ms = 30'000;
    int max_in_flight = 8;
    // 0 means unlimited
    std::size_t max_requests = 0;
    int timeout_seconds = 120;
};

namespace detail {
class JsonClient;
}

/// OpenAI-compatible chat completions client.
///
/// 429, 5xx and transport failures are retried with exponential backoff;
/// 401/403 and other 4xx fail at once with BackendError(status). When the
/// endpoint returns fewer choices than requested the remainder is requested
/// again, and whatever is still missing after the retries is padded with
/// empty strings. Throws Error(budget_exceeded) once max_requests is reached.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpOptions options = {});
    ~HttpBackend() override;
    std::vector<std::string> complete(const SampleRequest& req) override;
    std::string name() const override { return "http"; }
    std::size_t requests_sent() const;

private:
    HttpOptions options_;
    std::unique_ptr<detail::JsonClient> client_;
};

/// Append-only JSONL cache of {prompt_sha, profile, completions}. The last
/// entry for a key wins. Appends are serialized.
class SampleCache {
public:
    /// Loads existing entries; throws LineError on a malformed line.
    explicit SampleCache(std::filesystem::path path);

    std::optional<std::vector<std::string>> lookup(const std::string& prompt_sha, std::string_view profile) const;
    void store(const std::string& prompt_sha, std::string_view profile, const std::vector<std::string>& completions);
    std::size_t size() const;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::map<std::pair<std::string, std::string>, std::vector<std::string>> entries_;
};

/// Validates the request and forwards it. Throws Error(invalid_input) when n == 0.
std::vector<std::string> sample(Backend& backend, const SampleRequest& req);

/// Cache-first sampling: a cached entry with at least req.n completions is
/// replayed, anything else goes to the backend and is recorded.
class Sampler {
public:
    Sampler(Backend& backend, SampleCache* cache = nullptr) : backend_(backend), cache_(cache) {}

    std::vector<std::string> sample(const SampleRequest& req, std::string_view profile);
    std::size_t cache_hits() const { return hits_.load(); }
    std::size_t backend_calls() const { return calls_.load(); }

private:
    Backend& backend_;
    SampleCache* cache_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> calls_{0};
};

} // namespace graphreason
