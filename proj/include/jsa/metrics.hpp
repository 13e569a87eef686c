#ifndef JSA_METRICS_HPP_
#define JSA_METRICS_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "jsa/json.hpp"
#include "jsa/llm.hpp"
#include "jsa/mining.hpp"

namespace jsa {

// Shared tokenizer for every text metric: lowercase, split on any run of
// non-alphanumeric characters (multi-byte UTF-8 sequences count as word
// characters), drop empties.
std::vector<std::string> tokenize(const std::string& text);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// LCS-based scores over the shared tokenizer; beta = 1.
PrecisionRecall rouge_l(const std::string& candidate, const std::string& reference);

// Sentence-level BLEU: clipped modified n-gram precision for n = 1..maxN
// (shrunk to the candidate length when shorter), floor smoothing
// 1/(2*count) for zero matches, uniform geometric mean, brevity penalty
// exp(1 - r/c). Empty candidates score 0.
double bleu(const std::string& candidate, const std::string& reference,
            int maxN = 4);

using Embedding = std::vector<double>;

// Cosine over zero-extended vectors.
double cosine_similarity(const Embedding& a, const Embedding& b);

class TokenEmbedder {
 public:
  virtual ~TokenEmbedder() = default;
  // One unit-norm vector per token, same order.
  virtual std::vector<Embedding> embed(const std::vector<std::string>& tokens) = 0;
  virtual std::size_t dimension() const = 0;
  virtual std::string identity() const = 0;
};

// Exact one-hot per distinct token: the registry grows as tokens appear, so
// equal tokens share an axis and distinct tokens are orthogonal. With this
// embedder greedy-match F1 reduces to token-overlap F1.
class OneHotEmbedder : public TokenEmbedder {
 public:
  std::vector<Embedding> embed(const std::vector<std::string>& tokens) override;
  std::size_t dimension() const override;
  std::string identity() const override { return "one-hot"; }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::size_t> registry_;
};

// Deterministic lexical default: hashed character-trigram counts in a fixed
// number of dimensions, L2-normalized.
class TrigramEmbedder : public TokenEmbedder {
 public:
  explicit TrigramEmbedder(std::size_t dims = 256) : dims_(dims) {}
  std::vector<Embedding> embed(const std::vector<std::string>& tokens) override;
  std::size_t dimension() const override { return dims_; }
  std::string identity() const override { return "trigram"; }

 private:
  std::size_t dims_;
};

// Greedy max-cosine matching (BERTScore-style, no IDF, no rescaling).
PrecisionRecall embedding_f1(const std::string& candidate,
                             const std::string& reference,
                             TokenEmbedder& embedder);

class IdentifierScorer {
 public:
  virtual ~IdentifierScorer() = default;
  // Symmetric, in [0,1], similarity(a, a) == 1.
  virtual double similarity(const std::string& a, const std::string& b) = 0;
  virtual std::string identity() const = 0;
};

// Splits identifiers into subtokens (camel-case boundaries and _-:. and
// whitespace separators), lowercases, and compares character-trigram
// multisets of the space-joined subtoken sequences by cosine.
class SubtokenTrigramScorer : public IdentifierScorer {
 public:
  double similarity(const std::string& a, const std::string& b) override;
  std::string identity() const override { return "subtoken-trigram"; }
};

std::vector<std::string> split_identifier(const std::string& identifier);

double identifier_similarity(const std::string& a, const std::string& b,
                             IdentifierScorer& scorer);

// Matches / total; abstentions (nullopt) count as mismatches. Throws on
// empty or mismatched inputs.
double selection_accuracy(const std::vector<std::optional<bool>>& predictions,
                          const std::vector<bool>& labels);

// One corpus entry under evaluation: the manually authored schema plus any
// conforming documents (needed for the selection task).
struct EvalSchema {
  std::string id;
  SchemaNode manual;
  std::vector<Json> documents;
};

struct MetricRow {
  std::string schemaId;
  std::string task;      // description | definition | selection
  std::string location;  // pointer or definition name
  std::string reference;
  std::string candidate;
  double embeddingF1 = 0.0;
  double rougeL = 0.0;
  double bleu = 0.0;
  double identifierSim = 0.0;
  std::optional<bool> predicted;  // selection only; nullopt = abstention
  std::optional<bool> label;
  std::string error;
};

struct MetricReport {
  double embeddingF1Mean = 0.0;
  double rougeLMean = 0.0;
  double bleuMean = 0.0;
  double identifierSimMean = 0.0;
  double selectionAccuracy = 0.0;
  std::size_t descriptionCount = 0;
  std::size_t definitionCount = 0;
  std::size_t selectionCount = 0;
  std::size_t abstentions = 0;
  std::size_t failures = 0;
  std::vector<MetricRow> rows;

  CanonicalJson to_json(bool includeRows = true) const;
  std::string to_csv() const;
};

struct EvaluateOptions {
  PromptOptions prompts;
  int hoistMinCount = 2;
  int jobs = 1;
};

// The held-out protocol: strip annotations from each test schema,
// regenerate descriptions, definition names, and selection verdicts with
// the backend, and score them against the originals. Backend failures are
// recorded per item; the report covers completed items.
MetricReport evaluate_run(const std::vector<EvalSchema>& testSchemas,
                          GenerationBackend& backend, TokenEmbedder& embedder,
                          IdentifierScorer& scorer,
                          const EvaluateOptions& opts = {});

// Ground-truth replay table for the upper-bound harness: maps every prompt
// input the evaluation will issue to the original annotation. `conflicts`
// counts inputs with more than one distinct truth (first wins).
std::map<std::string, std::string> build_replay_map(
    const std::vector<EvalSchema>& schemas, const EvaluateOptions& opts,
    std::size_t* conflicts = nullptr);

}  // namespace jsa

#endif  // JSA_METRICS_HPP_
