#pragma once

// Embedding tables, labelled corpora, tokenisation and the bridge from
// documents to composed representations.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "hypercomp/composition.hpp"

namespace hypercomp {

enum class EmbeddingFlavor { euclidean, poincare };

std::string_view to_string(EmbeddingFlavor f);
std::optional<EmbeddingFlavor> parse_flavor(std::string_view name);

/// Line accounting shared by both loaders: parsed + skipped == total_lines.
struct LoadReport {
  std::size_t total_lines = 0;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
  /// Poincare vectors pulled back inside the unit ball.
  std::size_t clamped = 0;
  /// Line numbers (1-based) of skipped lines, first 20 only.
  std::vector<std::size_t> skipped_lines;
};

/// Loaders abort when more than this fraction of lines is malformed, with a
/// floor of one tolerated line.
inline constexpr double kMaxMalformedFraction = 0.01;

class EmbeddingTable {
 public:
  EmbeddingTable(EmbeddingFlavor flavor, Eigen::Index dim) : flavor_(flavor), dim_(dim) {}

  EmbeddingFlavor flavor() const { return flavor_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const LoadReport& report() const { return report_; }

  /// Row index of a token, if present.
  std::optional<Eigen::Index> find(std::string_view token) const;
  Eigen::Map<const Eigen::VectorXd> vector(Eigen::Index row) const {
    return Eigen::Map<const Eigen::VectorXd>(flat_.data() + row * dim_, dim_);
  }
  const std::string& token(Eigen::Index row) const {
    return tokens_[static_cast<std::size_t>(row)];
  }
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  /// All vectors, one row per token in insertion order.
  Eigen::Map<const RowMatrix> vectors() const {
    return Eigen::Map<const RowMatrix>(flat_.data(), static_cast<Eigen::Index>(tokens_.size()),
                                       dim_);
  }

  /// Adds an entry, clamping poincare vectors into the unit ball. Returns
  /// false (and stores nothing) for duplicates or wrong dimension.
  bool insert(std::string token, const Eigen::VectorXd& v);

 private:
  friend EmbeddingTable load_embeddings(std::istream&, EmbeddingFlavor);

  EmbeddingFlavor flavor_;
  Eigen::Index dim_;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, Eigen::Index> index_;
  std::vector<double> flat_;
  LoadReport report_;
};

/// Word-vector text format: `token v1 ... vd` per line. The dimension is
/// taken from the first line (a leading `count dim` header is recognised and
/// skipped). Malformed lines and duplicate tokens are skipped and counted.
EmbeddingTable load_embeddings(std::istream& in, EmbeddingFlavor flavor);
EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFlavor flavor);

struct TokenizerConfig {
  bool lowercase = true;
};

/// Maximal runs of Unicode letter (L*) or decimal digit (Nd) code points.
/// Lowercasing uses the simple one-to-one Unicode case mapping.
std::vector<std::string> tokenize(std::string_view text, const TokenizerConfig& cfg = {});

struct LabeledRecord {
  std::string label;
  std::string text;
};

struct LabeledCorpus {
  std::vector<LabeledRecord> records;
  /// Sorted distinct labels; a record's class id is its label's index here.
  std::vector<std::string> labels;
  LoadReport report;

  std::vector<int> class_ids() const;
};

/// `label<TAB>text` per line. Lines without a tab are rejected and counted.
LabeledCorpus load_corpus(std::istream& in);
LabeledCorpus load_corpus(const std::filesystem::path& path);
LabeledCorpus make_corpus(std::vector<LabeledRecord> records);

struct DocPoints {
  std::vector<WeightedPoint<double>> points;
  std::size_t oov = 0;
  bool empty() const { return points.empty(); }
};

/// In-vocabulary tokens in order, each with unit weight; unknown tokens are
/// skipped and counted. Requires a poincare table.
DocPoints doc_to_points(const std::vector<std::string>& tokens, const EmbeddingTable& table);

struct RepresentationDiagnostics {
  std::vector<std::size_t> empty_documents;
  std::size_t total_tokens = 0;
  std::size_t oov_tokens = 0;
  double oov_rate() const {
    return total_tokens == 0 ? 0.0
                             : static_cast<double>(oov_tokens) / static_cast<double>(total_tokens);
  }
};

struct CorpusRepresentation {
  Eigen::MatrixXd points;  // one row per document
  std::vector<int> labels;
  RepresentationDiagnostics diagnostics;
};

/// Composes every document. Documents without in-vocabulary tokens map to the
/// origin and are listed in the diagnostics. Hyperbolic methods require a
/// poincare table; emean also runs on euclidean tables.
CorpusRepresentation represent_corpus(const LabeledCorpus& corpus, const EmbeddingTable& table,
                                      CompositionMethod method,
                                      const CompositionConfig<double>& cfg = {},
                                      const TokenizerConfig& tok = {});

}  // namespace hypercomp
