#include "jsa/llm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <semaphore>
#include <sstream>

#include <httplib.h>

#include "http_internal.hpp"

namespace fs = std::filesystem;

namespace jsa {

namespace {

std::string truncated(const std::string& text, std::size_t limit,
                      bool* flagged) {
  if (text.size() <= limit) return text;
  if (flagged != nullptr) *flagged = true;
  return text.substr(0, limit);
}

std::string trim(const std::string& text) {
  auto begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  auto end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

PromptRequest build_description_prompt(const std::string& fragment,
                                       const PromptOptions& opts) {
  if (fragment.empty()) {
    throw BackendError("refusing to build a description prompt for an empty fragment");
  }
  if (fragment.size() > kFragmentLimit) {
    throw BackendError("description fragment exceeds " +
                       std::to_string(kFragmentLimit) + " characters");
  }
  PromptRequest request;
  request.instruction = opts.templates.description;
  request.input = fragment;
  request.maxOutputTokens = opts.maxOutputTokens;
  request.temperature = opts.temperature;
  return request;
}

PromptRequest build_definition_prompt(const SchemaNode& definitionSchema,
                                      const PromptOptions& opts) {
  PromptRequest request;
  request.instruction = opts.templates.definition;
  request.input = truncated(serialize_canonical(definitionSchema),
                            opts.inputLimit, &request.inputTruncated);
  request.maxOutputTokens = opts.maxOutputTokens;
  request.temperature = opts.temperature;
  return request;
}

PromptRequest build_selection_prompt(const PropertySelectionExample& example,
                                     const PromptOptions& opts) {
  PromptRequest request;
  request.instruction = opts.templates.selection;
  request.input = truncated(example.contextSnippet, opts.inputLimit,
                            &request.inputTruncated);
  request.maxOutputTokens = opts.maxOutputTokens;
  request.temperature = opts.temperature;
  return request;
}

std::string generate(GenerationBackend& backend, const PromptRequest& request) {
  return trim(backend.generate(request));
}

std::optional<bool> parse_verdict(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size() && !std::isalpha(static_cast<unsigned char>(text[i]))) {
    ++i;
  }
  std::string token;
  while (i < text.size() && std::isalpha(static_cast<unsigned char>(text[i]))) {
    token += static_cast<char>(std::tolower(static_cast<unsigned char>(text[i])));
    ++i;
  }
  if (token == "yes" || token == "true" || token == "include") return true;
  if (token == "no" || token == "false" || token == "exclude") return false;
  return std::nullopt;
}

std::optional<bool> classify(GenerationBackend& backend,
                             const PromptRequest& request) {
  if (!backend.supports(Capability::kClassify)) {
    throw BackendError("backend '" + backend.identity() +
                       "' does not support classification");
  }
  return parse_verdict(generate(backend, request));
}

std::string StubBackend::generate(const PromptRequest& request) {
  std::uint64_t h = stable_hash64(request.input,
                                  stable_hash64(request.instruction));
  if (request.instruction == templates_.selection) {
    return (h & 1) ? "yes" : "no";
  }
  char buffer[20];
  std::snprintf(buffer, sizeof buffer, "stub-%012llx",
                static_cast<unsigned long long>(h & 0xFFFFFFFFFFFFull));
  return buffer;
}

std::string ReplayBackend::generate(const PromptRequest& request) {
  auto it = outputs_.find(request.input);
  return it == outputs_.end() ? "" : it->second;
}

struct HttpBackend::Impl {
  HttpBackendConfig config;
  internal::ParsedUrl url;
  std::string token;
  std::counting_semaphore<256> slots;

  explicit Impl(HttpBackendConfig cfg, internal::ParsedUrl parsed)
      : config(std::move(cfg)), url(std::move(parsed)),
        slots(std::max(1, config.concurrency)) {}
};

HttpBackend::HttpBackend(HttpBackendConfig config) {
  auto url = internal::parse_url(config.url);
  if (!url) throw BackendError("malformed backend url: " + config.url);
  if (url->scheme != "http" && url->scheme != "https") {
    throw BackendError("unsupported backend url scheme: " + url->scheme);
  }
  std::string token;
  if (!config.authEnvVar.empty()) {
    const char* value = std::getenv(config.authEnvVar.c_str());
    if (value == nullptr || *value == '\0') {
      throw BackendError("auth token environment variable '" +
                         config.authEnvVar + "' is not set");
    }
    token = value;
  }
  impl_ = std::make_unique<Impl>(std::move(config), std::move(*url));
  impl_->token = std::move(token);
}

HttpBackend::~HttpBackend() = default;

std::string HttpBackend::identity() const {
  return "http:" + impl_->config.model;
}

std::string HttpBackend::generate(const PromptRequest& request) {
  impl_->slots.acquire();
  struct Release {
    std::counting_semaphore<256>* s;
    ~Release() { s->release(); }
  } release{&impl_->slots};

  CanonicalJson body = CanonicalJson::object();
  body["model"] = impl_->config.model;
  body["messages"] = CanonicalJson::array(
      {CanonicalJson{{"role", "user"},
                     {"content", request.instruction + "\n\n" + request.input}}});
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.maxOutputTokens;
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (!impl_->token.empty()) {
    headers.emplace("Authorization", "Bearer " + impl_->token);
  }

  std::string lastError;
  for (int attempt = 0; attempt < impl_->config.maxAttempts; ++attempt) {
    if (attempt > 0) {
      internal::backoff_sleep(attempt - 1, impl_->config.backoffBaseMs);
    }
    httplib::Client client(impl_->url.scheme + "://" + impl_->url.hostport);
    client.set_connection_timeout(impl_->config.timeoutSeconds);
    client.set_read_timeout(impl_->config.timeoutSeconds);
    auto res = client.Post(impl_->url.path, headers, payload, "application/json");
    if (!res) {
      lastError = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw BackendError("authentication rejected (status " +
                         std::to_string(res->status) + ")");
    }
    if (res->status == 429 || res->status >= 500) {
      lastError = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw BackendError("backend request failed with status " +
                         std::to_string(res->status));
    }
    Json parsed;
    try {
      parsed = parse_json(res->body);
    } catch (const JsonError& e) {
      throw BackendError(std::string("malformed backend response: ") + e.what());
    }
    if (!parsed.is_object() || !parsed.contains("choices") ||
        !parsed["choices"].is_array() || parsed["choices"].empty()) {
      throw BackendError("malformed backend response: missing choices");
    }
    const auto& first = parsed["choices"].front();
    if (!first.contains("message") || !first["message"].contains("content") ||
        !first["message"]["content"].is_string()) {
      throw BackendError("malformed backend response: missing message content");
    }
    return first["message"]["content"].get<std::string>();
  }
  throw BackendError("backend exhausted retries: " + lastError);
}

CanonicalJson manifest_to_json(const TrainingManifest& m) {
  CanonicalJson out = CanonicalJson::object();
  out["batchSize"] = m.batchSize;
  out["learningRateMax"] = m.learningRateMax;
  out["learningRateMin"] = m.learningRateMin;
  out["schedule"] = m.schedule;
  out["optimizer"] = m.optimizer;
  out["beta1"] = m.beta1;
  out["beta2"] = m.beta2;
  out["weightDecay"] = m.weightDecay;
  out["loraDropout"] = m.loraDropout;
  out["loraRank"] = m.loraRank;
  out["loraAlpha"] = m.loraAlpha;
  out["epochs"] = m.epochs;
  return out;
}

TrainingManifest manifest_with_overrides(const TrainingManifest& base,
                                         const Json& overrides) {
  TrainingManifest out = base;
  if (overrides.is_null()) return out;
  if (!overrides.is_object()) {
    throw std::invalid_argument("manifest overrides must be a JSON object");
  }
  for (const auto& [key, value] : overrides.items()) {
    if (key == "batchSize") {
      out.batchSize = value.get<int>();
    } else if (key == "learningRateMax") {
      out.learningRateMax = value.get<double>();
    } else if (key == "learningRateMin") {
      out.learningRateMin = value.get<double>();
    } else if (key == "schedule") {
      out.schedule = value.get<std::string>();
    } else if (key == "optimizer") {
      out.optimizer = value.get<std::string>();
    } else if (key == "beta1") {
      out.beta1 = value.get<double>();
    } else if (key == "beta2") {
      out.beta2 = value.get<double>();
    } else if (key == "weightDecay") {
      out.weightDecay = value.get<double>();
    } else if (key == "loraDropout") {
      out.loraDropout = value.get<double>();
    } else if (key == "loraRank") {
      out.loraRank = value.get<int>();
    } else if (key == "loraAlpha") {
      out.loraAlpha = value.get<int>();
    } else if (key == "epochs") {
      out.epochs = value.get<int>();
    } else {
      throw std::invalid_argument("unknown manifest key: " + key);
    }
  }
  return out;
}

std::vector<std::string> export_training(const std::vector<TrainingExample>& examples,
                                         const TrainingManifest& manifest,
                                         const std::string& destinationDir,
                                         const PromptOptions& opts) {
  if (examples.empty()) {
    throw std::invalid_argument("cannot export an empty example set");
  }
  std::error_code ec;
  fs::create_directories(destinationDir, ec);

  std::ostringstream description, definition, selection;
  for (const auto& example : examples) {
    CanonicalJson record = CanonicalJson::object();
    if (const auto* d = std::get_if<DescriptionExample>(&example)) {
      record["task"] = "description";
      record["schemaId"] = d->schemaId;
      record["location"] = d->location.to_string();
      record["instruction"] = opts.templates.description;
      record["input"] = d->fragment;
      record["output"] = d->description;
      description << record.dump(-1, ' ', true) << "\n";
    } else if (const auto* d = std::get_if<DefinitionExample>(&example)) {
      record["task"] = "definition";
      record["schemaId"] = d->schemaId;
      record["name"] = d->name;
      record["instruction"] = opts.templates.definition;
      bool truncatedFlag = false;
      record["input"] = truncated(serialize_canonical(d->definitionSchema),
                                  opts.inputLimit, &truncatedFlag);
      record["output"] = d->name;
      definition << record.dump(-1, ' ', true) << "\n";
    } else if (const auto* s = std::get_if<PropertySelectionExample>(&example)) {
      record["task"] = "selection";
      record["schemaId"] = s->schemaId;
      record["location"] = s->location.to_string();
      record["keyword"] = s->keyword;
      record["label"] = s->label;
      record["instruction"] = opts.templates.selection;
      record["input"] = s->contextSnippet;
      record["output"] = s->label ? "yes" : "no";
      selection << record.dump(-1, ' ', true) << "\n";
    }
  }

  auto write_file = [&](const std::string& name,
                        const std::string& content) -> std::string {
    fs::path path = fs::path(destinationDir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
    return path.string();
  };

  std::vector<std::string> written;
  written.push_back(write_file("description.jsonl", description.str()));
  written.push_back(write_file("definition.jsonl", definition.str()));
  written.push_back(write_file("selection.jsonl", selection.str()));
  written.push_back(
      write_file("manifest.json", manifest_to_json(manifest).dump(2) + "\n"));
  return written;
}

}  // namespace jsa
