#include "jsa/mining.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <httplib.h>

#include "http_internal.hpp"
#include "jsa/validate.hpp"

namespace fs = std::filesystem;

namespace jsa {

namespace {

std::string fragment_of(const SchemaNode& node) {
  std::string text = serialize_canonical(strip_annotations(node));
  if (text.size() > kFragmentLimit) text.resize(kFragmentLimit);
  return text;
}

}  // namespace

std::vector<DescriptionExample> extract_descriptions(const std::string& schemaId,
                                                     const SchemaNode& schema) {
  std::vector<DescriptionExample> out;
  for (const auto& [ptr, node] : walk(schema)) {
    auto it = node->annotations.find("description");
    if (it == node->annotations.end() || it->second.empty()) continue;
    out.push_back(DescriptionExample{schemaId, ptr, fragment_of(*node),
                                     it->second});
  }
  return out;
}

std::vector<DefinitionExample> extract_definitions(const std::string& schemaId,
                                                   const SchemaNode& schema) {
  std::vector<DefinitionExample> out;
  for (const auto& [name, body] : schema.definitions) {
    out.push_back(DefinitionExample{schemaId, name, strip_annotations(body)});
  }
  return out;
}

namespace {

// Scalar selection keywords present on a node, with their JSON values.
std::optional<CanonicalJson> scalar_keyword_value(const SchemaNode& node,
                                                  const std::string& keyword) {
  if (keyword == "minLength" && node.minLength) return CanonicalJson(*node.minLength);
  if (keyword == "maxLength" && node.maxLength) return CanonicalJson(*node.maxLength);
  if (keyword == "minItems" && node.minItems) return CanonicalJson(*node.minItems);
  if (keyword == "maxItems" && node.maxItems) return CanonicalJson(*node.maxItems);
  if (keyword == "minimum" && node.minimum) return *node.minimum;
  if (keyword == "maximum" && node.maximum) return *node.maximum;
  if (keyword == "uniqueItems" && node.uniqueItems) return CanonicalJson(*node.uniqueItems);
  if (keyword == "format" && node.format) return CanonicalJson(*node.format);
  if (keyword == "enum" && node.enumValues) return *node.enumValues;
  return std::nullopt;
}

std::string selection_snippet(const std::string& propertyName,
                              const std::string& keyword,
                              const CanonicalJson& value) {
  CanonicalJson snippet = CanonicalJson::object();
  snippet["properties"][propertyName][keyword] = value;
  return canonical_dump(snippet);
}

struct AlignState {
  const SchemaNode* manualRoot;
  const SchemaNode* discoveredRoot;
  std::string schemaId;
  std::set<std::string> usedInManual;
  std::map<std::pair<std::string, std::string>, PropertySelectionExample> out;
  std::set<std::pair<const SchemaNode*, const SchemaNode*>> visited;
  std::size_t aligned = 0;
};

const SchemaNode* chase_refs(const SchemaNode* node, const SchemaNode& root) {
  int hops = 0;
  while (node->ref) {
    if (++hops > 64) throw SchemaError("$ref chain too deep during alignment");
    node = &resolve_ref(root, *node->ref);
  }
  return node;
}

void emit(AlignState& state, const Pointer& ptr, const std::string& keyword,
          const std::string& snippet, bool label) {
  state.out.emplace(std::make_pair(ptr.to_string(), keyword),
                    PropertySelectionExample{state.schemaId, ptr, keyword,
                                             snippet, label});
}

void align(const SchemaNode* manual, const SchemaNode* discovered,
           const Pointer& ptr, const std::string& parentProperty,
           AlignState& state) {
  manual = chase_refs(manual, *state.manualRoot);
  discovered = chase_refs(discovered, *state.discoveredRoot);
  if (!state.visited.insert({manual, discovered}).second) return;
  ++state.aligned;

  if (!parentProperty.empty()) {
    for (const auto& keyword : kSelectionVocabulary) {
      if (keyword == "required") continue;  // handled as membership below
      auto manualValue = scalar_keyword_value(*manual, keyword);
      if (manualValue) {
        emit(state, ptr, keyword,
             selection_snippet(parentProperty, keyword, *manualValue), true);
        continue;
      }
      auto discoveredValue = scalar_keyword_value(*discovered, keyword);
      if (discoveredValue && state.usedInManual.count(keyword)) {
        emit(state, ptr, keyword,
             selection_snippet(parentProperty, keyword, *discoveredValue),
             false);
      }
    }
  }

  for (const auto& [name, manualChild] : manual->properties) {
    auto it = discovered->properties.find(name);
    if (it == discovered->properties.end()) continue;
    Pointer childPtr = ptr.child("properties").child(name);
    if (manual->required.count(name)) {
      emit(state, childPtr, "required",
           selection_snippet(name, "required", CanonicalJson(true)), true);
    } else if (discovered->required.count(name) &&
               state.usedInManual.count("required")) {
      emit(state, childPtr, "required",
           selection_snippet(name, "required", CanonicalJson(true)), false);
    }
    align(&manualChild, &it->second, childPtr, name, state);
  }

  if (manual->items && discovered->items) {
    align(&**manual->items, &**discovered->items, ptr.child("items"),
          parentProperty, state);
  }
}

}  // namespace

PropertyExampleResult generate_property_examples(const std::string& schemaId,
                                                 const SchemaNode& manual,
                                                 const DiscoveredSchema& discovered) {
  AlignState state;
  state.manualRoot = &manual;
  state.discoveredRoot = &discovered.root;
  state.schemaId = schemaId;
  for (const auto& [ptr, node] : walk(manual)) {
    for (const auto& keyword : kSelectionVocabulary) {
      if (keyword == "required") continue;
      if (scalar_keyword_value(*node, keyword)) state.usedInManual.insert(keyword);
    }
    if (!node->required.empty()) state.usedInManual.insert("required");
  }

  align(&manual, &discovered.root, Pointer{}, "", state);

  PropertyExampleResult result;
  result.alignedLocations = state.aligned;
  result.examples.reserve(state.out.size());
  for (auto& [key, example] : state.out) {
    result.examples.push_back(std::move(example));
  }
  if (result.alignedLocations == 0) {
    std::cerr << "warning: no aligned locations between manual and discovered "
                 "schema for '" << schemaId << "'\n";
  }
  return result;
}

CorpusSplit split_corpus(const std::vector<std::string>& ids, SplitRatios ratios,
                         std::uint64_t seed) {
  const double sum = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must be non-negative and sum to 1");
  }

  std::set<std::string> unique(ids.begin(), ids.end());
  const std::size_t n = unique.size();

  const double quotas[3] = {ratios.train * n, ratios.validation * n,
                            ratios.test * n};
  std::size_t counts[3];
  double remainders[3];
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(std::floor(quotas[i] + 1e-9));
    remainders[i] = quotas[i] - static_cast<double>(counts[i]);
    assigned += counts[i];
  }
  while (assigned < n) {
    int best = 0;
    for (int i = 1; i < 3; ++i) {
      if (remainders[i] > remainders[best] + 1e-12) best = i;
    }
    counts[best] += 1;
    remainders[best] = -1.0;
    ++assigned;
  }

  std::vector<std::string> ordered(unique.begin(), unique.end());
  std::sort(ordered.begin(), ordered.end(),
            [seed](const std::string& a, const std::string& b) {
              auto ha = stable_hash64(a, seed);
              auto hb = stable_hash64(b, seed);
              return ha != hb ? ha < hb : a < b;
            });

  CorpusSplit split;
  for (std::size_t i = 0; i < ordered.size(); ++i) {
    if (i < counts[0]) {
      split.train.insert(ordered[i]);
    } else if (i < counts[0] + counts[1]) {
      split.validation.insert(ordered[i]);
    } else {
      split.test.insert(ordered[i]);
    }
  }
  return split;
}

bool glob_match(std::string_view pattern, std::string_view name) {
  std::size_t p = 0, n = 0;
  std::size_t star = std::string_view::npos, match = 0;
  while (n < name.size()) {
    if (p < pattern.size() &&
        (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      match = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++match;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') ++p;
  return p == pattern.size();
}

std::vector<FetchedDocument> LocalDirectoryFetcher::fetch(
    const std::string& prescribedName) {
  std::error_code ec;
  if (!fs::is_directory(rootDir_, ec)) {
    throw FetchError("document directory not found: " + rootDir_);
  }
  std::vector<fs::path> paths;
  for (const auto& entry : fs::recursive_directory_iterator(rootDir_)) {
    if (!entry.is_regular_file()) continue;
    if (glob_match(prescribedName, entry.path().filename().string())) {
      paths.push_back(entry.path());
    }
  }
  std::sort(paths.begin(), paths.end());

  std::vector<FetchedDocument> out;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FetchError("cannot read " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    out.push_back(FetchedDocument{path.filename().string(), buffer.str()});
  }
  return out;
}

HttpSearchFetcher::HttpSearchFetcher(SearchFetcherConfig config)
    : config_(std::move(config)) {
  if (!config_.authEnvVar.empty()) {
    const char* token = std::getenv(config_.authEnvVar.c_str());
    if (token != nullptr) token_ = token;
  }
}

std::vector<FetchedDocument> HttpSearchFetcher::fetch(
    const std::string& prescribedName) {
  auto url = internal::parse_url(config_.endpoint);
  if (!url) throw FetchError("malformed search endpoint: " + config_.endpoint);

  std::string query = config_.queryTemplate;
  if (auto pos = query.find("{name}"); pos != std::string::npos) {
    query.replace(pos, 6, prescribedName);
  }
  std::string path = url->path;
  path += path.find('?') == std::string::npos ? "?q=" : "&q=";
  path += internal::percent_encode(query);

  httplib::Headers headers;
  if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);

  std::string lastError;
  for (int attempt = 0; attempt < config_.maxAttempts; ++attempt) {
    if (attempt > 0) internal::backoff_sleep(attempt - 1, config_.backoffBaseMs);
    httplib::Client client(url->scheme + "://" + url->hostport);
    auto res = client.Get(path, headers);
    if (!res) {
      lastError = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      lastError = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw FetchError("search request failed with status " +
                       std::to_string(res->status));
    }
    Json body;
    try {
      body = parse_json(res->body);
    } catch (const JsonError& e) {
      throw FetchError(std::string("malformed search response: ") + e.what());
    }
    std::vector<FetchedDocument> out;
    if (body.contains("items") && body["items"].is_array()) {
      for (const auto& item : body["items"]) {
        FetchedDocument doc;
        if (item.contains("name") && item["name"].is_string()) {
          doc.name = item["name"].get<std::string>();
        }
        if (item.contains("content") && item["content"].is_string()) {
          doc.text = item["content"].get<std::string>();
        } else {
          doc.text = item.dump();
        }
        out.push_back(std::move(doc));
      }
    }
    return out;
  }
  throw FetchError("search exhausted retries: " + lastError);
}

ConformingDocuments fetch_conforming_documents(const SchemaNode& schema,
                                               const std::string& prescribedName,
                                               DocumentFetcher& fetcher) {
  if (prescribedName.empty()) {
    throw std::invalid_argument("prescribed filename must be non-empty");
  }
  ConformingDocuments out;
  for (const auto& candidate : fetcher.fetch(prescribedName)) {
    Json doc;
    try {
      doc = parse_json(candidate.text);
    } catch (const JsonError& e) {
      std::cerr << "warning: skipping malformed candidate '" << candidate.name
                << "': " << e.what() << "\n";
      ++out.malformed;
      continue;
    }
    if (validate(schema, doc).empty()) {
      out.documents.push_back(std::move(doc));
    } else {
      ++out.rejected;
    }
  }
  return out;
}

namespace {

std::string dump_record(const CanonicalJson& record) {
  return record.dump(-1, ' ', true);
}

}  // namespace

std::string example_to_jsonl(const TrainingExample& example) {
  CanonicalJson record = CanonicalJson::object();
  if (const auto* d = std::get_if<DescriptionExample>(&example)) {
    record["task"] = "description";
    record["schemaId"] = d->schemaId;
    record["location"] = d->location.to_string();
    record["fragment"] = d->fragment;
    record["description"] = d->description;
  } else if (const auto* d = std::get_if<DefinitionExample>(&example)) {
    record["task"] = "definition";
    record["schemaId"] = d->schemaId;
    record["name"] = d->name;
    record["schema"] = schema_to_json(d->definitionSchema);
  } else if (const auto* s = std::get_if<PropertySelectionExample>(&example)) {
    record["task"] = "selection";
    record["schemaId"] = s->schemaId;
    record["location"] = s->location.to_string();
    record["keyword"] = s->keyword;
    record["snippet"] = s->contextSnippet;
    record["label"] = s->label;
  }
  return dump_record(record);
}

TrainingExample example_from_jsonl(const std::string& line) {
  Json record = parse_json(line);
  if (!record.is_object() || !record.contains("task")) {
    throw JsonError("example record must be an object with a 'task' field");
  }
  const std::string task = record["task"].get<std::string>();
  if (task == "description") {
    return DescriptionExample{
        record.at("schemaId").get<std::string>(),
        Pointer::parse(record.at("location").get<std::string>()),
        record.at("fragment").get<std::string>(),
        record.at("description").get<std::string>()};
  }
  if (task == "definition") {
    return DefinitionExample{record.at("schemaId").get<std::string>(),
                             record.at("name").get<std::string>(),
                             schema_from_json(record.at("schema"))};
  }
  if (task == "selection") {
    return PropertySelectionExample{
        record.at("schemaId").get<std::string>(),
        Pointer::parse(record.at("location").get<std::string>()),
        record.at("keyword").get<std::string>(),
        record.at("snippet").get<std::string>(),
        record.at("label").get<bool>()};
  }
  throw JsonError("unknown example task: " + task);
}

}  // namespace jsa
