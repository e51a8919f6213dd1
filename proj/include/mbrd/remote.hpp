#pragma once

// HTTP client for a sampling-capable model endpoint that returns
// per-sequence log-probabilities.

#include <string>
#include <vector>

#include "mbrd/harness.hpp"

namespace mbrd {

struct RemoteEndpointConfig {
    std::string base_url;            // e.g. http://localhost:8080
    std::string auth_env_var;        // env var holding a bearer token; empty = no auth
    int timeout_seconds = 30;
    int max_retries = 3;
    int backoff_initial_ms = 200;    // doubles per retry
};

struct RemoteFetchResult {
    std::vector<SampleRecord> records;
    std::vector<std::string> skipped_prompts;  // failed after retries
};

// Requests K samples per prompt via POST /sample with body
// {"prompt": str, "num_samples": int, "temperature": float}; the response
// must be {"samples": [{"target": str, "logprob": float}]}. Prompts that
// fail after retries are recorded as skipped, never fabricated.
RemoteFetchResult fetch_remote_samples(const RemoteEndpointConfig& endpoint,
                                       std::span<const std::string> prompts,
                                       std::size_t k, double temperature);

}  // namespace mbrd
