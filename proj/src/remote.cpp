#include "mbrd/remote.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace mbrd {

using nlohmann::json;

namespace {

// Parses one endpoint response into a record; throws on protocol errors.
SampleRecord record_from_response(const std::string& prompt, std::size_t index,
                                  const std::string& body) {
    json j = json::parse(body);
    if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty()) {
        throw std::runtime_error("response missing \"samples\" array");
    }
    SampleRecord rec;
    rec.id = "remote-" + std::to_string(index);
    rec.input_text = prompt;
    rec.label = Target{"?", std::nullopt};  // labels are not served; caller attaches them
    for (const auto& s : j["samples"]) {
        if (!s.contains("target") || !s.contains("logprob")) {
            throw std::runtime_error("sample missing \"target\" or \"logprob\"");
        }
        rec.samples.push_back(SampledResponse::from_log_prob(
            parse_target(s["target"].get<std::string>()), s["logprob"].get<double>()));
    }
    return rec;
}

}  // namespace

RemoteFetchResult fetch_remote_samples(const RemoteEndpointConfig& endpoint,
                                       std::span<const std::string> prompts,
                                       std::size_t k, double temperature) {
    httplib::Client client(endpoint.base_url);
    client.set_connection_timeout(endpoint.timeout_seconds);
    client.set_read_timeout(endpoint.timeout_seconds);

    httplib::Headers headers;
    if (!endpoint.auth_env_var.empty()) {
        const char* token = std::getenv(endpoint.auth_env_var.c_str());
        if (!token) {
            throw std::runtime_error("auth token env var not set: " + endpoint.auth_env_var);
        }
        headers.emplace("Authorization", std::string("Bearer ") + token);
    }

    RemoteFetchResult result;
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        json body = {{"prompt", prompts[i]},
                     {"num_samples", k},
                     {"temperature", temperature}};
        std::string payload = body.dump();

        bool done = false;
        int backoff_ms = endpoint.backoff_initial_ms;
        for (int attempt = 0; attempt <= endpoint.max_retries && !done; ++attempt) {
            if (attempt > 0) {
                std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
                backoff_ms *= 2;
            }
            auto res = client.Post("/sample", headers, payload, "application/json");
            if (!res || res->status != 200) continue;
            try {
                result.records.push_back(record_from_response(prompts[i], i, res->body));
                done = true;
            } catch (const std::exception& e) {
                // A malformed 200 response is a protocol error, not transient.
                throw std::runtime_error("protocol error for prompt \"" + prompts[i] +
                                         "\": " + e.what());
            }
        }
        if (!done) result.skipped_prompts.push_back(prompts[i]);
    }
    return result;
}

}  // namespace mbrd
