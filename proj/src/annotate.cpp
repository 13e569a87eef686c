#include "jsa/annotate.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace jsa {

CanonicalJson AnnotationReport::to_json() const {
  CanonicalJson out = CanonicalJson::object();
  CanonicalJson added = CanonicalJson::array();
  for (const auto& ptr : descriptionsAdded) added.push_back(ptr.to_string());
  out["descriptionsAdded"] = CanonicalJson{{"count", descriptionsAdded.size()},
                                           {"locations", added}};
  out["descriptionsSkipped"] = descriptionsSkipped;
  CanonicalJson renameMap = CanonicalJson::object();
  for (const auto& [oldName, newName] : renames) renameMap[oldName] = newName;
  out["renames"] = renameMap;
  CanonicalJson removed = CanonicalJson::array();
  for (const auto& [ptr, keyword] : keywordsRemoved) {
    removed.push_back(CanonicalJson{{"location", ptr.to_string()},
                                    {"keyword", keyword}});
  }
  out["keywordsRemoved"] = removed;
  out["abstentions"] = abstentions;
  return out;
}

std::string sanitize_identifier(const std::string& text,
                                const std::string& fallback) {
  std::vector<std::string> words;
  std::string current;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      current += c;
    } else if (!current.empty()) {
      words.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  if (words.empty()) return fallback;

  std::string out = words.front();
  for (std::size_t i = 1; i < words.size(); ++i) {
    std::string word = words[i];
    word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    out += word;
  }
  if (std::isdigit(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  return out;
}

namespace {

// Navigates a walk()-produced pointer in a mutable tree (no ref chasing).
SchemaNode* mutable_resolve(SchemaNode& root, const Pointer& ptr) {
  SchemaNode* node = &root;
  const auto& segments = ptr.segments();
  std::size_t i = 0;
  while (i < segments.size()) {
    if (segments[i] == "properties" && i + 1 < segments.size()) {
      auto it = node->properties.find(segments[i + 1]);
      if (it != node->properties.end()) {
        node = &it->second;
        i += 2;
        continue;
      }
    } else if (segments[i] == "items" && node->items) {
      node = &**node->items;
      ++i;
      continue;
    } else if (segments[i] == "definitions" && i + 1 < segments.size()) {
      auto it = node->definitions.find(segments[i + 1]);
      if (it != node->definitions.end()) {
        node = &it->second;
        i += 2;
        continue;
      }
    }
    throw SchemaError("internal: pointer '" + ptr.to_string() +
                      "' is not a tree location");
  }
  return node;
}

std::string nearest_property_name(const Pointer& ptr) {
  const auto& segments = ptr.segments();
  for (std::size_t i = segments.size(); i >= 2; --i) {
    if (segments[i - 2] == "properties") return segments[i - 1];
  }
  return "";
}

bool is_definition_body(const Pointer& ptr) {
  return ptr.size() == 2 && ptr.segments()[0] == "definitions";
}

std::string description_fragment(const SchemaNode& node) {
  std::string text = serialize_canonical(strip_annotations(node));
  if (text.size() > kFragmentLimit) text.resize(kFragmentLimit);
  return text;
}

}  // namespace

AnnotationOutcome annotate_descriptions(const DiscoveredSchema& schema,
                                        GenerationBackend& backend,
                                        const PromptOptions& opts) {
  AnnotationOutcome outcome;
  outcome.schema = schema;

  std::vector<Pointer> targets;
  for (const auto& [ptr, node] : walk(outcome.schema.root)) {
    bool isRoot = ptr.empty();
    bool isProperty =
        ptr.size() >= 2 && ptr.segments()[ptr.size() - 2] == "properties";
    if (isRoot || isProperty || is_definition_body(ptr)) targets.push_back(ptr);
  }

  for (const auto& ptr : targets) {
    SchemaNode* node = mutable_resolve(outcome.schema.root, ptr);
    std::string text;
    try {
      auto request = build_description_prompt(description_fragment(*node), opts);
      text = generate(backend, request);
    } catch (const BackendError& e) {
      outcome.error = e.what();
      return outcome;
    }
    if (text.empty()) {
      ++outcome.report.descriptionsSkipped;
      continue;
    }
    node->annotations["description"] = text;
    outcome.report.descriptionsAdded.push_back(ptr);
  }
  return outcome;
}

namespace {

void rewrite_refs(SchemaNode& node, const std::string& from,
                  const std::string& to) {
  if (node.ref && *node.ref == from) node.ref = to;
  for (auto& [name, sub] : node.properties) rewrite_refs(sub, from, to);
  if (node.items) rewrite_refs(**node.items, from, to);
  for (auto& [name, sub] : node.definitions) rewrite_refs(sub, from, to);
}

}  // namespace

AnnotationOutcome name_definitions(const DiscoveredSchema& schema,
                                   GenerationBackend& backend,
                                   const PromptOptions& opts) {
  AnnotationOutcome outcome;
  outcome.schema = schema;

  // Names still pending keep their slot reserved so a generated collision
  // with a later placeholder stays injective even if that rename fails.
  std::set<std::string> reserved;
  for (const auto& name : outcome.schema.order) reserved.insert(name);

  std::vector<std::string> newOrder;
  const std::vector<std::string> oldOrder = outcome.schema.order;
  for (std::size_t index = 0; index < oldOrder.size(); ++index) {
    const std::string& oldName = oldOrder[index];
    auto bodyIt = outcome.schema.root.definitions.find(oldName);
    if (bodyIt == outcome.schema.root.definitions.end()) continue;

    std::string text;
    try {
      auto request =
          build_definition_prompt(strip_annotations(bodyIt->second), opts);
      text = generate(backend, request);
    } catch (const BackendError& e) {
      outcome.error = e.what();
      newOrder.insert(newOrder.end(), oldOrder.begin() + index, oldOrder.end());
      outcome.schema.order = std::move(newOrder);
      return outcome;
    }

    reserved.erase(oldName);
    std::string base = sanitize_identifier(text, oldName);
    std::string candidate = base;
    int suffix = 2;
    while (reserved.count(candidate)) {
      candidate = base + std::to_string(suffix++);
    }
    reserved.insert(candidate);

    if (candidate != oldName) {
      SchemaNode body = std::move(bodyIt->second);
      outcome.schema.root.definitions.erase(bodyIt);
      outcome.schema.root.definitions.emplace(candidate, std::move(body));
      rewrite_refs(outcome.schema.root,
                   "#/definitions/" + escape_pointer_segment(oldName),
                   "#/definitions/" + escape_pointer_segment(candidate));
      outcome.report.renames[oldName] = candidate;
    }
    newOrder.push_back(candidate);
  }
  outcome.schema.order = std::move(newOrder);
  return outcome;
}

namespace {

struct FilterCandidate {
  Pointer location;       // node (scalar) or property slot (required)
  Pointer owner;          // node whose field is edited
  std::string keyword;
  std::string snippet;
  std::string member;     // required-membership property name
};

void drop_scalar_keyword(SchemaNode& node, const std::string& keyword) {
  if (keyword == "minLength") node.minLength.reset();
  else if (keyword == "maxLength") node.maxLength.reset();
  else if (keyword == "minItems") node.minItems.reset();
  else if (keyword == "maxItems") node.maxItems.reset();
  else if (keyword == "minimum") node.minimum.reset();
  else if (keyword == "maximum") node.maximum.reset();
  else if (keyword == "uniqueItems") node.uniqueItems.reset();
  else if (keyword == "format") node.format.reset();
  else if (keyword == "enum") node.enumValues.reset();
}

std::optional<CanonicalJson> filter_keyword_value(const SchemaNode& node,
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

std::string filter_snippet(const std::string& name, const std::string& keyword,
                           const CanonicalJson& value) {
  CanonicalJson snippet = CanonicalJson::object();
  snippet["properties"][name][keyword] = value;
  return canonical_dump(snippet);
}

}  // namespace

AnnotationOutcome filter_properties(const DiscoveredSchema& schema,
                                    GenerationBackend& backend,
                                    const PromptOptions& opts) {
  AnnotationOutcome outcome;
  outcome.schema = schema;

  std::vector<FilterCandidate> candidates;
  for (const auto& [ptr, node] : walk(outcome.schema.root)) {
    std::string nearest = nearest_property_name(ptr);
    if (!nearest.empty()) {
      for (const auto& keyword : kSelectionVocabulary) {
        if (keyword == "required") continue;
        auto value = filter_keyword_value(*node, keyword);
        if (!value) continue;
        candidates.push_back(FilterCandidate{
            ptr, ptr, keyword, filter_snippet(nearest, keyword, *value), ""});
      }
    }
    for (const auto& member : node->required) {
      candidates.push_back(FilterCandidate{
          ptr.child("properties").child(member), ptr, "required",
          filter_snippet(member, "required", CanonicalJson(true)), member});
    }
  }

  std::vector<FilterCandidate> rejected;
  for (const auto& candidate : candidates) {
    PropertySelectionExample example;
    example.contextSnippet = candidate.snippet;
    std::optional<bool> verdict;
    try {
      verdict = classify(backend, build_selection_prompt(example, opts));
    } catch (const BackendError& e) {
      outcome.error = e.what();
      break;
    }
    if (!verdict) {
      ++outcome.report.abstentions;  // fail open: keep the keyword
    } else if (!*verdict) {
      rejected.push_back(candidate);
    }
  }

  for (const auto& candidate : rejected) {
    SchemaNode* owner = mutable_resolve(outcome.schema.root, candidate.owner);
    if (candidate.keyword == "required") {
      owner->required.erase(candidate.member);
    } else {
      drop_scalar_keyword(*owner, candidate.keyword);
    }
    outcome.report.keywordsRemoved.emplace_back(candidate.location,
                                                candidate.keyword);
  }
  std::sort(outcome.report.keywordsRemoved.begin(),
            outcome.report.keywordsRemoved.end(),
            [](const auto& a, const auto& b) {
              return std::tie(a.first, a.second) < std::tie(b.first, b.second);
            });
  return outcome;
}

AnnotationOutcome annotate_all(const DiscoveredSchema& schema,
                               GenerationBackend& backend,
                               const PromptOptions& opts) {
  AnnotationOutcome filtered = filter_properties(schema, backend, opts);
  if (filtered.error) return filtered;

  AnnotationOutcome named = name_definitions(filtered.schema, backend, opts);
  named.report.keywordsRemoved = std::move(filtered.report.keywordsRemoved);
  named.report.abstentions += filtered.report.abstentions;
  if (named.error) return named;

  AnnotationOutcome described = annotate_descriptions(named.schema, backend, opts);
  described.report.keywordsRemoved = std::move(named.report.keywordsRemoved);
  described.report.abstentions += named.report.abstentions;
  described.report.renames = std::move(named.report.renames);
  return described;
}

}  // namespace jsa
