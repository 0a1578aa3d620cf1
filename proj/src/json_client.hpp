#pragma once

#include "graphreason/sampler.hpp"

#include "json.hpp"

#include <atomic>
#include <memory>
#include <semaphore>
#include <string>

namespace graphreason::detail {

/// POSTs JSON to one endpoint with the retry, concurrency and budget rules
/// shared by the chat and embedding backends.
class JsonClient {
public:
    explicit JsonClient(const HttpOptions& options);

    nlohmann::json post(const nlohmann::json& body);
    std::size_t requests_sent() const { return sent_.load(); }

private:
    HttpOptions options_;
    std::string base_;   // scheme://host[:port]
    std::string path_;
    std::string api_key_;
    std::unique_ptr<std::counting_semaphore<1024>> slots_;
    std::atomic<std::size_t> sent_{0};
};

} // namespace graphreason::detail
