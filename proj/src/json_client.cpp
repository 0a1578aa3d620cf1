#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "json_client.hpp"

#include "graphreason/error.hpp"

#include "httplib.h"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <regex>
#include <thread>

namespace graphreason::detail {

namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

} // namespace

JsonClient::JsonClient(const HttpOptions& options) : options_(options) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(options.endpoint, m, url_re)) {
        throw Error(ErrorKind::invalid_spec, "endpoint '" + options.endpoint + "' is not an http(s) URL");
    }
    base_ = m[1];
    path_ = m[2].matched ? std::string(m[2]) : "/";
    if (const char* key = std::getenv(options.api_key_env.c_str())) {
        api_key_ = key;
    }
    slots_ = std::make_unique<std::counting_semaphore<1024>>(std::clamp(options.max_in_flight, 1, 1024));
}

nlohmann::json JsonClient::post(const nlohmann::json& body) {
    const std::string payload = body.dump();
    int last_status = 0;
    std::string last_error;
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = std::min<long long>(options_.max_backoff_ms,
                                                   static_cast<long long>(options_.initial_backoff_ms) << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        if (options_.max_requests > 0) {
            if (sent_.fetch_add(1) >= options_.max_requests) {
                sent_.fetch_sub(1);
                throw Error(ErrorKind::budget_exceeded,
                            "request cap of " + std::to_string(options_.max_requests) + " reached");
            }
        } else {
            sent_.fetch_add(1);
        }

        slots_->acquire();
        httplib::Result res = [&] {
            httplib::Client client(base_);
            client.set_connection_timeout(std::chrono::seconds(std::min(options_.timeout_seconds, 30)));
            client.set_read_timeout(std::chrono::seconds(options_.timeout_seconds));
            httplib::Headers headers;
            if (!api_key_.empty()) {
                headers.emplace("Authorization", "Bearer " + api_key_);
            }
            return client.Post(path_, headers, payload, "application/json");
        }();
        slots_->release();

        if (!res) {
            last_status = 0;
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        last_status = res->status;
        if (res->status == 200) {
            try {
                return nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::exception& e) {
                throw BackendError(res->status, std::string("malformed response body: ") + e.what());
            }
        }
        last_error = "HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200);
        if (!retryable(res->status)) {
            throw BackendError(res->status, last_error);
        }
    }
    throw BackendError(last_status, "giving up after " + std::to_string(options_.max_retries + 1) +
                                        " attempts; " + last_error);
}

} // namespace graphreason::detail
