#ifndef JSA_MINING_HPP_
#define JSA_MINING_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "jsa/discovery.hpp"
#include "jsa/json.hpp"
#include "jsa/pointer.hpp"
#include "jsa/schema.hpp"

namespace jsa {

inline constexpr std::size_t kFragmentLimit = 100;

// Constraint keywords the selection task decides on. `required` is a
// per-property membership test.
inline const std::array<std::string, 10> kSelectionVocabulary = {
    "minLength", "maxLength", "minItems", "maxItems", "minimum",
    "maximum",   "uniqueItems", "format",  "enum",    "required"};

struct DescriptionExample {
  std::string schemaId;
  Pointer location;
  std::string fragment;  // canonical, annotation-free, <= 100 chars
  std::string description;

  bool operator==(const DescriptionExample&) const = default;
};

struct DefinitionExample {
  std::string schemaId;
  std::string name;
  SchemaNode definitionSchema;  // annotation-stripped

  bool operator==(const DefinitionExample&) const = default;
};

struct PropertySelectionExample {
  std::string schemaId;
  Pointer location;
  std::string keyword;
  std::string contextSnippet;  // {"properties":{<name>:{<keyword>:<value>}}}
  bool label = false;

  bool operator==(const PropertySelectionExample&) const = default;
};

using TrainingExample =
    std::variant<DescriptionExample, DefinitionExample, PropertySelectionExample>;

std::vector<DescriptionExample> extract_descriptions(const std::string& schemaId,
                                                     const SchemaNode& schema);

std::vector<DefinitionExample> extract_definitions(const std::string& schemaId,
                                                   const SchemaNode& schema);

struct PropertyExampleResult {
  std::vector<PropertySelectionExample> examples;
  std::size_t alignedLocations = 0;
};

// Walks manual and discovered schemas along shared property paths
// (dereferencing refs on both sides). Positives carry the manual value for
// a keyword present at the location; negatives carry the discovered value
// for a keyword used elsewhere in the manual schema but not here.
PropertyExampleResult generate_property_examples(const std::string& schemaId,
                                                 const SchemaNode& manual,
                                                 const DiscoveredSchema& discovered);

struct CorpusSplit {
  std::set<std::string> train;
  std::set<std::string> validation;
  std::set<std::string> test;
};

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

// Deterministic partition: ids ordered by seeded stable hash, sliced into
// largest-remainder bucket sizes. Whole schemas only, never examples.
CorpusSplit split_corpus(const std::vector<std::string>& ids,
                         SplitRatios ratios, std::uint64_t seed);

struct FetchedDocument {
  std::string name;
  std::string text;
};

class FetchError : public std::runtime_error {
 public:
  explicit FetchError(const std::string& what) : std::runtime_error(what) {}
};

// Source of candidate documents stored under a prescribed filename.
class DocumentFetcher {
 public:
  virtual ~DocumentFetcher() = default;
  virtual std::vector<FetchedDocument> fetch(const std::string& prescribedName) = 0;
};

// Recursively globs basenames under a root directory. Safe for concurrent
// calls.
class LocalDirectoryFetcher : public DocumentFetcher {
 public:
  explicit LocalDirectoryFetcher(std::string rootDir)
      : rootDir_(std::move(rootDir)) {}
  std::vector<FetchedDocument> fetch(const std::string& prescribedName) override;

 private:
  std::string rootDir_;
};

struct SearchFetcherConfig {
  std::string endpoint;       // e.g. http://host:port/search
  std::string queryTemplate = "filename:{name}";
  std::string authEnvVar;     // optional bearer token source
  int maxAttempts = 3;
  int backoffBaseMs = 100;
};

// Generic code-search client: GET <endpoint>?q=<templated>, expects
// {"items":[{"name":..., "content":...}]}.
class HttpSearchFetcher : public DocumentFetcher {
 public:
  explicit HttpSearchFetcher(SearchFetcherConfig config);
  std::vector<FetchedDocument> fetch(const std::string& prescribedName) override;

 private:
  SearchFetcherConfig config_;
  std::string token_;
};

struct ConformingDocuments {
  std::vector<Json> documents;
  std::size_t malformed = 0;   // JSON syntax errors, skipped with a warning
  std::size_t rejected = 0;    // fetched but failed validation
};

// Every returned document was fetched under a matching filename and
// validates with zero violations against `schema`.
ConformingDocuments fetch_conforming_documents(const SchemaNode& schema,
                                               const std::string& prescribedName,
                                               DocumentFetcher& fetcher);

// Simple glob over basenames: `*` and `?` wildcards.
bool glob_match(std::string_view pattern, std::string_view name);

// JSON Lines round-trip for mined examples (task-discriminated records).
std::string example_to_jsonl(const TrainingExample& example);
TrainingExample example_from_jsonl(const std::string& line);

}  // namespace jsa

#endif  // JSA_MINING_HPP_
