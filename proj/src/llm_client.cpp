#include "lanehouse/llm_client.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <stdexcept>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

namespace lanehouse {

using nlohmann::json;

void LlmConfig::validate() const {
  if (temperature < 0) throw std::invalid_argument("temperature must be >= 0");
  if (max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (!mock_mode && endpoint_url.empty())
    throw std::invalid_argument("live mode requires endpoint_url");
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string MedianMockClient::complete(const std::string& /*prompt*/, const PromptSpec& spec) {
  double price;
  if (spec.shots.exemplars.empty()) {
    price = spec.statistics.median_price;
  } else {
    std::vector<double> rents;
    rents.reserve(spec.shots.exemplars.size());
    for (const auto& ex : spec.shots.exemplars) rents.push_back(ex.rent);
    std::sort(rents.begin(), rents.end());
    price = rents[(rents.size() - 1) / 2];  // lower-middle, matching compute_statistics
  }
  return "The estimated rent is " + format_prompt_number(price) + " RMB per month.";
}

ChatCompletionsClient::ChatCompletionsClient(const LlmConfig& cfg) : cfg_(cfg) {
  const char* key = std::getenv(cfg.api_key_env.c_str());
  if (!key || !*key)
    throw std::runtime_error("missing API key: set " + cfg.api_key_env);
  api_key_ = key;
}

std::string ChatCompletionsClient::complete(const std::string& prompt, const PromptSpec&) {
  // Honor the configured minimum interval between live requests.
  if (cfg_.request_interval_ms > 0) {
    auto now_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now().time_since_epoch())
                      .count();
    long long wait = last_request_ms_ + cfg_.request_interval_ms - now_ms;
    if (wait > 0) std::this_thread::sleep_for(std::chrono::milliseconds(wait));
    last_request_ms_ = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now().time_since_epoch())
                           .count();
  }

  // Split endpoint_url into host and path.
  std::string url = cfg_.endpoint_url;
  auto scheme_end = url.find("://");
  std::string rest = scheme_end == std::string::npos ? url : url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string host = slash == std::string::npos ? rest : rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  bool https = url.rfind("https://", 0) == 0;

  json body = {{"model", cfg_.model_name},
               {"messages",
                {{{"role", "system"},
                  {"content", "You are a precise real-estate pricing assistant. Reply with a "
                              "single monthly rent estimate in RMB."}},
                 {{"role", "user"}, {"content", prompt}}}},
               {"temperature", cfg_.temperature}};

  httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
  auto do_post = [&](auto& client) {
    client.set_connection_timeout(cfg_.timeout_seconds);
    client.set_read_timeout(cfg_.timeout_seconds);
    return client.Post(path, headers, body.dump(), "application/json");
  };

  httplib::Result res = [&] {
    if (https) {
      httplib::SSLClient client(host);
      return do_post(client);
    }
    httplib::Client client(host);
    return do_post(client);
  }();

  if (!res) throw std::runtime_error("transport failure: " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw std::runtime_error("HTTP " + std::to_string(res->status) + ": " + res->body);
  json reply = json::parse(res->body);
  return reply.at("choices").at(0).at("message").at("content").get<std::string>();
}

double parse_price(const std::string& response, double lo, double hi) {
  // Scan numeric tokens by hand; commas inside a token are thousands
  // separators.
  std::size_t i = 0;
  while (i < response.size()) {
    if (std::isdigit(static_cast<unsigned char>(response[i]))) {
      std::string token;
      std::size_t j = i;
      bool seen_dot = false;
      while (j < response.size()) {
        char c = response[j];
        if (std::isdigit(static_cast<unsigned char>(c))) {
          token += c;
        } else if (c == ',' && j + 1 < response.size() &&
                   std::isdigit(static_cast<unsigned char>(response[j + 1]))) {
          // separator, skip
        } else if (c == '.' && !seen_dot && j + 1 < response.size() &&
                   std::isdigit(static_cast<unsigned char>(response[j + 1]))) {
          token += c;
          seen_dot = true;
        } else {
          break;
        }
        ++j;
      }
      double v = std::strtod(token.c_str(), nullptr);
      if (v >= lo && v <= hi) return v;
      i = j;
    } else {
      ++i;
    }
  }
  throw std::runtime_error("no parseable price in window [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "]; response was: " + response);
}

LlmRun predict_llm(const std::vector<RawRecord>& queries, const std::vector<RawRecord>& train_records,
                   const Eigen::Ref<const Vector>& train_rents, const FeatureSchema& schema, int k,
                   const LlmConfig& cfg, const std::string& template_id, LlmClient* client) {
  cfg.validate();
  std::unique_ptr<LlmClient> owned;
  if (!client) {
    if (cfg.mock_mode)
      owned = std::make_unique<MedianMockClient>();
    else
      owned = std::make_unique<ChatCompletionsClient>(cfg);
    client = owned.get();
  }

  const StatsBlock stats = compute_statistics(train_rents);
  LlmRun run;
  run.k = k;
  run.template_id = template_id;
  run.outcomes.resize(queries.size());

  // Live clients keep connection state; serialize access to them.
  std::mutex client_mutex;
  const bool lock_client = !cfg.mock_mode;

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t idx = next.fetch_add(1);
      if (idx >= queries.size()) break;
      PredictionOutcome& out = run.outcomes[idx];

      auto started = std::chrono::steady_clock::now();
      try {
        ShotSet shots = select_shots(queries[idx], train_records, train_rents, schema, k);
        PromptSpec spec = make_prompt_spec(queries[idx], shots, stats, schema, template_id);
        std::string prompt = build_prompt(spec);
        out.prompt_hash = fnv1a_hex(prompt);

        std::string last_error;
        for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
          out.retries = attempt;
          try {
            std::string reply;
            if (lock_client) {
              std::lock_guard<std::mutex> lock(client_mutex);
              reply = client->complete(prompt, spec);
            } else {
              reply = client->complete(prompt, spec);
            }
            out.raw_response = reply;
            out.value = parse_price(reply, cfg.price_window_lo, cfg.price_window_hi);
            last_error.clear();
            break;
          } catch (const std::exception& e) {
            last_error = e.what();
          }
        }
        if (!out.value) out.error = "retries exhausted: " + last_error;
      } catch (const std::exception& e) {
        out.error = e.what();
      }
      auto elapsed = std::chrono::steady_clock::now() - started;
      out.latency_ms = cfg.mock_mode
                           ? 0.0  // keep mock run logs byte-stable
                           : std::chrono::duration<double, std::milli>(elapsed).count();
    }
  };

  if (cfg.workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < cfg.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return run;
}

void append_run_log(const LlmRun& run, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw std::runtime_error("cannot write run log: " + path);
  for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
    const auto& o = run.outcomes[i];
    json line = {{"index", i},
                 {"k", run.k},
                 {"template", run.template_id},
                 {"prompt_hash", o.prompt_hash},
                 {"raw_response", o.raw_response},
                 {"parsed", o.value ? json(*o.value) : json(nullptr)},
                 {"error", o.error},
                 {"retries", o.retries},
                 {"latency_ms", o.latency_ms}};
    out << line.dump() << '\n';
  }
}

LlmEvaluation evaluate_llm_run(const LlmRun& run, const Eigen::Ref<const Vector>& truths) {
  if (static_cast<Eigen::Index>(run.outcomes.size()) != truths.size())
    throw std::invalid_argument("predictions and truths disagree in length");
  std::vector<double> yhat, y;
  for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
    if (run.outcomes[i].value) {
      yhat.push_back(*run.outcomes[i].value);
      y.push_back(truths(static_cast<Eigen::Index>(i)));
    }
  }
  if (yhat.empty()) throw std::runtime_error("no successful predictions to evaluate");

  LlmEvaluation eval;
  eval.attempts = static_cast<int>(run.outcomes.size());
  eval.successes = static_cast<int>(yhat.size());
  eval.coverage = static_cast<double>(eval.successes) / static_cast<double>(eval.attempts);
  Vector yv = Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size()));
  Vector yhatv = Eigen::Map<const Vector>(yhat.data(), static_cast<Eigen::Index>(yhat.size()));
  eval.metrics = evaluate_predictions(yv, yhatv);
  return eval;
}

json LlmEvaluation::to_json() const {
  json j = metrics.to_json();
  j["coverage"] = coverage;
  j["successes"] = successes;
  j["attempts"] = attempts;
  return j;
}

}  // namespace lanehouse
