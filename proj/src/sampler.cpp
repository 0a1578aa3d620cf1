#include "graphreason/sampler.hpp"

#include "graphreason/digest.hpp"
#include "graphreason/error.hpp"
#include "graphreason/rng.hpp"
#include "graphreason/solvers.hpp"
#include "graphreason/textgen.hpp"
#include "graphreason/transcript.hpp"

#include "json_client.hpp"

#include <fstream>

namespace graphreason {

std::string_view profile_name(Profile p) {
    switch (p) {
    case Profile::initial: return "initial";
    case Profile::augmentation: return "augmentation";
    case Profile::dpo: return "dpo";
    case Profile::eval: return "eval";
    }
    return "";
}

Profile parse_profile(std::string_view name) {
    for (auto p : {Profile::initial, Profile::augmentation, Profile::dpo, Profile::eval}) {
        if (profile_name(p) == name) return p;
    }
    throw Error(ErrorKind::invalid_spec, "unknown sampling profile '" + std::string(name) + "'");
}

SampleRequest make_request(Profile p, std::string prompt) {
    SampleRequest r;
    r.prompt = std::move(prompt);
    switch (p) {
    case Profile::initial: r.n = 3; r.temperature = 0.9; r.max_tokens = 2048; break;
    case Profile::augmentation: r.n = 30; r.temperature = 0.9; r.max_tokens = 2048; break;
    case Profile::dpo: r.n = 20; r.temperature = 0.9; r.max_tokens = 2048; break;
    case Profile::eval: r.n = 1; r.temperature = 0.0; r.max_tokens = 1024; break;
    }
    return r;
}

// ---------------------------------------------------------------------------

StubBackend::StubBackend(StubOptions options) : options_(options) {}

std::vector<std::string> StubBackend::complete(const SampleRequest& req) {
    const std::string digest = sha256_hex(req.prompt);
    const std::uint64_t prompt_word = std::stoull(digest.substr(0, 16), nullptr, 16);

    std::optional<ParsedProblem> parsed;
    Answer truth;
    if (options_.problems_aware) {
        try {
            parsed = parse_problem(extract_question(req.prompt));
            truth = solve(parsed->task, parsed->graph, parsed->query);
            if (truth.kind == AnswerKind::unknown) parsed.reset();
        } catch (const Error&) {
            parsed.reset();
        }
    }

    std::vector<std::string> out;
    out.reserve(req.n);
    for (std::size_t i = 0; i < req.n; ++i) {
        const std::uint64_t seed = derive_seed(options_.seed, {prompt_word, i});
        if (!parsed) {
            out.push_back("Completion " + std::to_string(i) + " for prompt " + digest.substr(0, 8) +
                          ": this request does not contain a graph problem I can read.");
            continue;
        }
        Rng rng(seed);
        const bool correct = !rng.bernoulli(options_.error_rate);
        out.push_back(synthesize_transcript(parsed->task, parsed->graph, parsed->query, truth, correct, rng.next(), i));
    }
    return out;
}

// ---------------------------------------------------------------------------

HttpBackend::HttpBackend(HttpOptions options)
    : options_(std::move(options)), client_(std::make_unique<detail::JsonClient>(options_)) {}

HttpBackend::~HttpBackend() = default;

std::size_t HttpBackend::requests_sent() const { return client_->requests_sent(); }

std::vector<std::string> HttpBackend::complete(const SampleRequest& req) {
    std::vector<std::string> out;
    for (int round = 0; out.size() < req.n && round <= options_.max_retries; ++round) {
        nlohmann::json body = {
            {"model", options_.model},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", req.prompt}}})},
            {"n", req.n - out.size()},
            {"temperature", req.temperature},
            {"max_tokens", req.max_tokens},
        };
        if (!req.stop.empty()) body["stop"] = req.stop;
        const auto reply = client_->post(body);
        if (!reply.contains("choices") || !reply["choices"].is_array()) {
            throw BackendError(200, "response has no choices array");
        }
        for (const auto& choice : reply["choices"]) {
            if (out.size() == req.n) break;
            const auto* content = choice.contains("message") ? &choice["message"] : nullptr;
            if (content && content->contains("content") && (*content)["content"].is_string()) {
                out.push_back((*content)["content"].get<std::string>());
            } else {
                out.emplace_back();
            }
        }
    }
    out.resize(req.n);
    return out;
}

// ---------------------------------------------------------------------------

SampleCache::SampleCache(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            entries_[{j.at("prompt_sha").get<std::string>(), j.at("profile").get<std::string>()}] =
                j.at("completions").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw LineError(number, std::string("bad cache entry in ") + path_.string() + ": " + e.what());
        }
    }
}

std::optional<std::vector<std::string>> SampleCache::lookup(const std::string& prompt_sha,
                                                            std::string_view profile) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find({prompt_sha, std::string(profile)});
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void SampleCache::store(const std::string& prompt_sha, std::string_view profile,
                        const std::vector<std::string>& completions) {
    nlohmann::ordered_json j;
    j["prompt_sha"] = prompt_sha;
    j["profile"] = profile;
    j["completions"] = completions;
    std::lock_guard lock(mutex_);
    if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::app);
    if (!out) {
        throw Error(ErrorKind::io, "cannot append to " + path_.string());
    }
    out << j.dump() << '\n';
    entries_[{prompt_sha, std::string(profile)}] = completions;
}

std::size_t SampleCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::vector<std::string> sample(Backend& backend, const SampleRequest& req) {
    if (req.n == 0) {
        throw Error(ErrorKind::invalid_input, "sample request asks for zero completions");
    }
    if (req.temperature < 0.0) {
        throw Error(ErrorKind::invalid_input, "temperature must be non-negative");
    }
    auto out = backend.complete(req);
    out.resize(req.n);
    return out;
}

std::vector<std::string> Sampler::sample(const SampleRequest& req, std::string_view profile) {
    const std::string sha = sha256_hex(req.prompt);
    if (cache_) {
        if (auto hit = cache_->lookup(sha, profile); hit && hit->size() >= req.n) {
            ++hits_;
            hit->resize(req.n);
            return *hit;
        }
    }
    ++calls_;
    auto out = graphreason::sample(backend_, req);
    if (cache_) cache_->store(sha, profile, out);
    return out;
}

} // namespace graphreason
