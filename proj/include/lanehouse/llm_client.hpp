#pragma once

#include <memory>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lanehouse/metrics.hpp"
#include "lanehouse/prompt.hpp"
#include "lanehouse/schema.hpp"
#include "lanehouse/types.hpp"

namespace lanehouse {

struct LlmConfig {
  std::string endpoint_url;  // chat-completions-style endpoint
  std::string model_name;
  double temperature = 0.0;
  int max_retries = 3;
  int timeout_seconds = 30;
  int request_interval_ms = 0;  // floor between live requests
  bool mock_mode = true;
  int workers = 1;
  double price_window_lo = 100.0;
  double price_window_hi = 1e6;
  std::string api_key_env = "LANEHOUSE_LLM_API_KEY";

  void validate() const;
};

class LlmClient {
 public:
  virtual ~LlmClient() = default;
  // Returns the raw model reply; throws on transport failure.
  virtual std::string complete(const std::string& prompt, const PromptSpec& spec) = 0;
};

// Deterministic offline stand-in: replies with the median rent of the
// supplied shots (the statistics median at k=0) as one natural-language
// sentence, ignoring the phrasing entirely.
class MedianMockClient final : public LlmClient {
 public:
  std::string complete(const std::string& prompt, const PromptSpec& spec) override;
};

// POST {model, messages, temperature} with a bearer token from the
// configured environment variable; reads the first choice's content.
class ChatCompletionsClient final : public LlmClient {
 public:
  explicit ChatCompletionsClient(const LlmConfig& cfg);
  std::string complete(const std::string& prompt, const PromptSpec& spec) override;

 private:
  LlmConfig cfg_;
  std::string api_key_;
  long long last_request_ms_ = 0;
};

// First numeric token (thousands separators tolerated) inside the
// plausibility window; throws carrying the raw response otherwise.
double parse_price(const std::string& response, double lo = 100.0, double hi = 1e6);

struct PredictionOutcome {
  std::optional<double> value;
  std::string error;  // non-empty when retries were exhausted
  int retries = 0;
  std::string raw_response;
  std::string prompt_hash;
  double latency_ms = 0;
};

struct LlmRun {
  std::vector<PredictionOutcome> outcomes;
  int k = 0;
  std::string template_id;
};

// Shot selection, statistics, prompting and client calls per query
// record; outputs occupy pre-assigned slots so worker count never
// changes the result order.
LlmRun predict_llm(const std::vector<RawRecord>& queries, const std::vector<RawRecord>& train_records,
                   const Eigen::Ref<const Vector>& train_rents, const FeatureSchema& schema, int k,
                   const LlmConfig& cfg, const std::string& template_id, LlmClient* client = nullptr);

// JSON-lines, one record per prediction.
void append_run_log(const LlmRun& run, const std::string& path);

struct LlmEvaluation {
  MetricsReport metrics;  // over successfully parsed predictions only
  double coverage = 0;    // successes / attempts
  int successes = 0;
  int attempts = 0;

  nlohmann::json to_json() const;
};

LlmEvaluation evaluate_llm_run(const LlmRun& run, const Eigen::Ref<const Vector>& truths);

std::string fnv1a_hex(const std::string& text);

}  // namespace lanehouse
