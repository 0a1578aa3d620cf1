#include "doctest.h"

#include "graphreason/digest.hpp"
#include "graphreason/error.hpp"
#include "graphreason/generate.hpp"
#include "graphreason/grader.hpp"
#include "graphreason/sampler.hpp"
#include "graphreason/textgen.hpp"

#include "httplib.h"
#include "json.hpp"

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

using namespace graphreason;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "graphreason-unit";
    fs::create_directories(dir);
    const auto p = dir / name;
    fs::remove(p);
    return p;
}

// Chat endpoint on 127.0.0.1 whose handler the test supplies.
class FakeServer {
public:
    explicit FakeServer(httplib::Server::Handler handler) {
        server_.Post("/v1/chat/completions", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~FakeServer() {
        server_.stop();
        thread_.join();
    }
    HttpOptions options() const {
        HttpOptions o;
        o.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
        o.api_key_env = "GRAPHREASON_TEST_KEY";
        o.initial_backoff_ms = 1;
        o.max_backoff_ms = 5;
        o.timeout_seconds = 5;
        return o;
    }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

std::string choices(std::size_t n, const std::string& prefix) {
    nlohmann::json j;
    j["choices"] = nlohmann::json::array();
    for (std::size_t i = 0; i < n; ++i) {
        j["choices"].push_back({{"index", i}, {"message", {{"role", "assistant"}, {"content", prefix + std::to_string(i)}}}});
    }
    return j.dump();
}

} // namespace

TEST_CASE("profiles") {
    CHECK(make_request(Profile::initial, "x").n == 3);
    CHECK(make_request(Profile::augmentation, "x").n == 30);
    CHECK(make_request(Profile::dpo, "x").n == 20);
    const auto e = make_request(Profile::eval, "x");
    CHECK(e.n == 1);
    CHECK(e.temperature == 0.0);
    CHECK(e.max_tokens == 1024);
    CHECK(make_request(Profile::initial, "x").temperature == doctest::Approx(0.9));
    for (auto p : {Profile::initial, Profile::augmentation, Profile::dpo, Profile::eval}) {
        CHECK(parse_profile(profile_name(p)) == p);
    }
    CHECK_THROWS_AS(parse_profile("greedy"), Error);
}

TEST_CASE("stub completions are deterministic and track the error rate") {
    const auto problems = generate_problems(default_gen_spec(Task::connect, 20, 3)).problems;
    StubBackend clean({7, 0.0, true});
    StubBackend noisy({7, 1.0, true});
    for (const auto& p : problems) {
        const auto req = make_request(Profile::initial, wrap_instruction(render_problem(p)));
        const auto a = clean.complete(req);
        CHECK(a == clean.complete(req));
        REQUIRE(a.size() == 3);
        for (const auto& text : a) CHECK(grade(p, text).correct);
        for (const auto& text : noisy.complete(req)) CHECK_FALSE(grade(p, text).correct);
    }
    const auto req = make_request(Profile::augmentation, wrap_instruction(render_problem(problems[0])));

    // completion i does not depend on n
    auto small = req;
    small.n = 2;
    const auto all = clean.complete(req);
    const auto two = clean.complete(small);
    CHECK(two[0] == all[0]);
    CHECK(two[1] == all[1]);
}

TEST_CASE("sample rejects n = 0") {
    StubBackend stub;
    SampleRequest req;
    req.prompt = "x";
    req.n = 0;
    CHECK_THROWS_AS(sample(stub, req), Error);
}

TEST_CASE("cache replays and survives reload") {
    const auto path = temp_file("cache.jsonl");
    {
        SampleCache cache(path);
        CHECK(cache.size() == 0);
        cache.store("abc", "initial", {"a", "b"});
        cache.store("abc", "initial", {"c", "d", "e"});
        cache.store("abc", "dpo", {"z"});
    }
    SampleCache cache(path);
    CHECK(cache.size() == 2);
    CHECK(cache.lookup("abc", "initial") == std::vector<std::string>{"c", "d", "e"});
    CHECK(cache.lookup("abc", "dpo") == std::vector<std::string>{"z"});
    CHECK_FALSE(cache.lookup("abd", "initial"));

    StubBackend stub({1, 0.0, false});
    Sampler sampler(stub, &cache);
    SampleRequest req;
    req.prompt = "prompt";
    req.n = 2;
    const auto first = sampler.sample(req, "initial");
    const auto second = sampler.sample(req, "initial");
    CHECK(first == second);
    CHECK(sampler.backend_calls() == 1);
    CHECK(sampler.cache_hits() == 1);
    req.n = 4;
    CHECK(sampler.sample(req, "initial").size() == 4);
    CHECK(sampler.backend_calls() == 2);

    std::ofstream(path, std::ios::app) << "{not json\n";
    try {
        SampleCache broken(path);
        FAIL("expected LineError");
    } catch (const LineError& e) {
        CHECK(e.line() == 6);
    }
}

TEST_CASE("http backend retries 429 and sends the key") {
    ::setenv("GRAPHREASON_TEST_KEY", "sk-test", 1);
    std::atomic<int> hits{0};
    std::string auth;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        auth = req.get_header_value("Authorization");
        if (hits.fetch_add(1) < 2) {
            res.status = 429;
            res.set_content("slow down", "text/plain");
            return;
        }
        const auto body = nlohmann::json::parse(req.body);
        res.set_content(choices(body["n"].get<std::size_t>(), "ok"), "application/json");
    });
    HttpBackend backend(server.options());
    SampleRequest req;
    req.prompt = "hi";
    req.n = 3;
    const auto out = backend.complete(req);
    CHECK(out == std::vector<std::string>{"ok0", "ok1", "ok2"});
    CHECK(hits == 3);
    CHECK(auth == "Bearer sk-test");
    ::unsetenv("GRAPHREASON_TEST_KEY");
}

TEST_CASE("http backend fails at once on 401") {
    std::atomic<int> hits{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 401;
        res.set_content("bad key", "text/plain");
    });
    HttpBackend backend(server.options());
    SampleRequest req;
    req.prompt = "hi";
    try {
        backend.complete(req);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.status() == 401);
    }
    CHECK(hits == 1);
}

TEST_CASE("http backend gives up after persistent 5xx") {
    std::atomic<int> hits{0};
    FakeServer server([&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 503;
    });
    auto options = server.options();
    options.max_retries = 2;
    HttpBackend backend(options);
    SampleRequest req;
    req.prompt = "hi";
    try {
        backend.complete(req);
        FAIL("expected BackendError");
    } catch (const BackendError& e) {
        CHECK(e.status() == 503);
    }
    CHECK(hits == 3);
}

TEST_CASE("http backend re-requests and pads missing choices") {
    std::vector<std::size_t> asked;
    std::mutex m;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        const auto n = nlohmann::json::parse(req.body)["n"].get<std::size_t>();
        std::lock_guard lock(m);
        asked.push_back(n);
        // always one short, never more than two
        res.set_content(choices(std::min<std::size_t>(2, n - 1), "c"), "application/json");
    });
    auto options = server.options();
    options.max_retries = 2;
    HttpBackend backend(options);
    SampleRequest req;
    req.prompt = "hi";
    req.n = 5;
    const auto out = backend.complete(req);
    REQUIRE(out.size() == 5);
    CHECK(asked == std::vector<std::size_t>{5, 3, 1});
    CHECK(out[0] == "c0");
    CHECK(out[3] == "c1");
    CHECK(out[4].empty());
}

TEST_CASE("http request cap") {
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        const auto n = nlohmann::json::parse(req.body)["n"].get<std::size_t>();
        res.set_content(choices(n, "x"), "application/json");
    });
    auto options = server.options();
    options.max_requests = 2;
    HttpBackend backend(options);
    SampleRequest req;
    req.prompt = "hi";
    backend.complete(req);
    backend.complete(req);
    try {
        backend.complete(req);
        FAIL("expected budget error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget_exceeded);
    }
    CHECK(backend.requests_sent() == 2);
}

TEST_CASE("http endpoint must be a URL") {
    HttpOptions o;
    o.endpoint = "localhost:80";
    CHECK_THROWS_AS(HttpBackend{o}, Error);
}

TEST_CASE("request body shape") {
    nlohmann::json seen;
    FakeServer server([&](const httplib::Request& req, httplib::Response& res) {
        seen = nlohmann::json::parse(req.body);
        res.set_content(choices(1, "x"), "application/json");
    });
    auto options = server.options();
    options.model = "test-model";
    HttpBackend backend(options);
    auto req = make_request(Profile::eval, "question?");
    backend.complete(req);
    CHECK(seen["model"] == "test-model");
    CHECK(seen["messages"][0]["role"] == "user");
    CHECK(seen["messages"][0]["content"] == "question?");
    CHECK(seen["n"] == 1);
    CHECK(seen["temperature"] == 0.0);
    CHECK(seen["max_tokens"] == 1024);
}
