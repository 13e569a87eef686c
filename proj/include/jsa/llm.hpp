#ifndef JSA_LLM_HPP_
#define JSA_LLM_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsa/json.hpp"
#include "jsa/mining.hpp"
#include "jsa/schema.hpp"

namespace jsa {

class BackendError : public std::runtime_error {
 public:
  explicit BackendError(const std::string& what) : std::runtime_error(what) {}
};

// Registered instruction templates. The description and definition prompts
// are fixed task wordings; the selection wording is configuration.
struct PromptTemplates {
  std::string description =
      "Generate a short description for the given JSON Schema";
  std::string definition =
      "Generate a name for the given JSON Schema definition consisting of a "
      "single programming language identifier";
  std::string selection =
      "Decide whether the given JSON Schema keyword should be included at "
      "this location. Answer yes or no.";
};

struct PromptOptions {
  PromptTemplates templates;
  std::size_t inputLimit = 2048;
  int maxOutputTokens = 256;
  double temperature = 0.0;
};

struct PromptRequest {
  std::string instruction;
  std::string input;
  int maxOutputTokens = 256;
  double temperature = 0.0;
  bool inputTruncated = false;

  bool operator==(const PromptRequest&) const = default;
};

PromptRequest build_description_prompt(const std::string& fragment,
                                       const PromptOptions& opts = {});
PromptRequest build_definition_prompt(const SchemaNode& definitionSchema,
                                      const PromptOptions& opts = {});
PromptRequest build_selection_prompt(const PropertySelectionExample& example,
                                     const PromptOptions& opts = {});

enum class Capability { kGenerate, kClassify };

class GenerationBackend {
 public:
  virtual ~GenerationBackend() = default;
  virtual std::string generate(const PromptRequest& request) = 0;
  virtual std::string identity() const = 0;
  virtual bool supports(Capability) const { return true; }
};

// Whitespace-trimmed backend output.
std::string generate(GenerationBackend& backend, const PromptRequest& request);

// First-token verdict: {yes,true,include} / {no,false,exclude}, case
// insensitive. nullopt = abstention (unparseable verdict).
std::optional<bool> parse_verdict(const std::string& text);
std::optional<bool> classify(GenerationBackend& backend,
                             const PromptRequest& request);

// Referentially transparent placeholder backend: output is a stable hash of
// the request. Selection prompts get a deterministic yes/no.
class StubBackend : public GenerationBackend {
 public:
  explicit StubBackend(PromptTemplates templates = {})
      : templates_(std::move(templates)) {}
  std::string generate(const PromptRequest& request) override;
  std::string identity() const override { return "stub"; }

 private:
  PromptTemplates templates_;
};

// Replays recorded outputs keyed on prompt input text; unknown inputs yield
// an empty string.
class ReplayBackend : public GenerationBackend {
 public:
  explicit ReplayBackend(std::map<std::string, std::string> outputs)
      : outputs_(std::move(outputs)) {}
  std::string generate(const PromptRequest& request) override;
  std::string identity() const override { return "replay"; }

 private:
  std::map<std::string, std::string> outputs_;
};

struct HttpBackendConfig {
  std::string url;    // e.g. http://host:port/v1/chat/completions
  std::string model = "local-model";
  std::string authEnvVar;  // bearer token env var name; empty = no auth
  int maxAttempts = 3;
  int backoffBaseMs = 100;
  int concurrency = 4;
  int timeoutSeconds = 60;
};

// Chat-completion client: POST {model, messages, temperature, max_tokens},
// bearer auth from the environment, retry with exponential backoff on 429,
// 5xx, and transport failures. Safe under concurrent calls up to the cap.
class HttpBackend : public GenerationBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);
  ~HttpBackend() override;
  std::string generate(const PromptRequest& request) override;
  std::string identity() const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Table of fine-tuning hyperparameters exported alongside training data.
struct TrainingManifest {
  int batchSize = 8;
  double learningRateMax = 2e-4;
  double learningRateMin = 8e-6;
  std::string schedule = "cosine";
  std::string optimizer = "AdamW";
  double beta1 = 0.9;
  double beta2 = 0.95;
  double weightDecay = 0.016;
  double loraDropout = 0.008;
  int loraRank = 32;
  int loraAlpha = 16;
  int epochs = 1;
};

CanonicalJson manifest_to_json(const TrainingManifest& manifest);

// Applies overrides from a JSON object; unknown keys are rejected.
TrainingManifest manifest_with_overrides(const TrainingManifest& base,
                                         const Json& overrides);

// Writes description.jsonl / definition.jsonl / selection.jsonl (instruction
// records {task, instruction, input, output, ...}) plus manifest.json.
// Byte-deterministic given input order. Returns the file paths written.
std::vector<std::string> export_training(const std::vector<TrainingExample>& examples,
                                         const TrainingManifest& manifest,
                                         const std::string& destinationDir,
                                         const PromptOptions& opts = {});

}  // namespace jsa

#endif  // JSA_LLM_HPP_
