#ifndef JSA_ANNOTATE_HPP_
#define JSA_ANNOTATE_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jsa/discovery.hpp"
#include "jsa/llm.hpp"
#include "jsa/pointer.hpp"

namespace jsa {

struct AnnotationReport {
  std::vector<Pointer> descriptionsAdded;
  std::size_t descriptionsSkipped = 0;  // empty generations
  std::map<std::string, std::string> renames;
  std::vector<std::pair<Pointer, std::string>> keywordsRemoved;
  std::size_t abstentions = 0;

  CanonicalJson to_json() const;
};

// Result of an annotation pass; `error` is set when a backend failure
// aborted the pass, leaving a partial schema and report.
struct AnnotationOutcome {
  DiscoveredSchema schema;
  AnnotationReport report;
  std::optional<std::string> error;
};

// Collapses arbitrary text to [A-Za-z_][A-Za-z0-9_]* by dropping illegal
// characters and camel-casing word boundaries; empty results fall back.
std::string sanitize_identifier(const std::string& text,
                                const std::string& fallback);

// Attaches a generated description to the root, every named property
// subschema, and every definition body.
AnnotationOutcome annotate_descriptions(const DiscoveredSchema& schema,
                                        GenerationBackend& backend,
                                        const PromptOptions& opts = {});

// Renames defn<i> placeholders to sanitized generated identifiers,
// rewriting every ref; collisions get a numeric suffix.
AnnotationOutcome name_definitions(const DiscoveredSchema& schema,
                                   GenerationBackend& backend,
                                   const PromptOptions& opts = {});

// Classifies every selection-vocabulary keyword occurrence and deletes the
// rejected ones. Abstentions keep the keyword. Only ever deletes.
AnnotationOutcome filter_properties(const DiscoveredSchema& schema,
                                    GenerationBackend& backend,
                                    const PromptOptions& opts = {});

// The shipped pipeline: filter -> name -> describe.
AnnotationOutcome annotate_all(const DiscoveredSchema& schema,
                               GenerationBackend& backend,
                               const PromptOptions& opts = {});

}  // namespace jsa

#endif  // JSA_ANNOTATE_HPP_
