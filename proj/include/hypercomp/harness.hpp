#pragma once

// Experiment runner: stratified splits, scoring, grid execution and results
// tables.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hypercomp/classify.hpp"
#include "hypercomp/corpus.hpp"

namespace hypercomp {

// ---------------------------------------------------------------------------
// Splitting

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

struct HoldoutSplit {
  double train_ratio = 0.8;
};

struct KFoldSplit {
  int folds = 5;
};

struct SplitSpec {
  std::variant<HoldoutSplit, KFoldSplit> scheme = HoldoutSplit{};
  std::uint64_t seed = 42;
};

/// Stratified holdout: within every class round((1 - ratio) * n_c) members go
/// to the test side. Both sides come back sorted.
Split holdout_split(std::span<const int> labels, double train_ratio, std::uint64_t seed);

/// Stratified k-fold. Throws if a class has fewer members than folds.
std::vector<Split> kfold_split(std::span<const int> labels, int folds, std::uint64_t seed);

std::vector<Split> make_splits(std::span<const int> labels, const SplitSpec& spec);

// ---------------------------------------------------------------------------
// Scoring

struct EvalReport {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  std::size_t n_test = 0;
  /// Sorted class ids appearing in gold or predictions; confusion(g, p) counts
  /// gold class classes[g] predicted as classes[p].
  std::vector<int> classes;
  Eigen::MatrixXi confusion;
};

/// Accuracy from the confusion diagonal and micro-F1 from pooled
/// TP/FP/FN counts; the two are checked to agree.
EvalReport evaluate(std::span<const int> predictions, std::span<const int> gold);

// ---------------------------------------------------------------------------
// Grid

struct KnnCell {
  int k = 5;
  MetricKind metric = MetricKind::poincare;
};

struct SvmCell {
  KernelSpec kernel = KernelSpec::geodesic_laplacian();
  double C = 1.0;
};

struct LinearSvmCell {
  double C = 1.0;
  int epochs = 200;
};

using ClassifierCell = std::variant<KnnCell, SvmCell, LinearSvmCell>;

/// Short classifier family name: knn, svm or linear-svm.
std::string classifier_id(const ClassifierCell& cell);
/// Hyper-parameter string, e.g. "k=5;metric=poincare".
std::string classifier_params(const ClassifierCell& cell);

/// Cells that need Poincare-ball geometry (poincare k-NN, geodesic kernels).
bool needs_ball_geometry(const ClassifierCell& cell);

/// Parses "k=3,5,7" into one KnnCell per k.
std::vector<ClassifierCell> parse_knn_cells(const std::string& spec, MetricKind metric);
/// Parses "kernel=geodesic-laplacian,lambda=1.0,C=1.0". Kernels:
/// geodesic-laplacian, geodesic-gaussian, geodesic (with q=), rbf, linear.
ClassifierCell parse_svm_cell(const std::string& spec);
/// Parses "C=1.0[,epochs=200]".
ClassifierCell parse_linear_svm_cell(const std::string& spec);
/// Parses "holdout:0.8" or "kfold:5".
SplitSpec parse_split(const std::string& spec, std::uint64_t seed);

struct ExperimentConfig {
  std::filesystem::path corpus_path;
  std::filesystem::path embeddings_path;
  EmbeddingFlavor flavor = EmbeddingFlavor::poincare;
  std::vector<CompositionMethod> methods;
  std::vector<ClassifierCell> classifiers;
  SplitSpec split{};
  CompositionConfig<double> composition{};
  SmoOptions smo{};
  std::uint64_t seed = 42;

  void validate() const;
};

enum class CellStatus { ok, not_applicable, error };

struct ResultRow {
  EmbeddingFlavor flavor = EmbeddingFlavor::poincare;
  CompositionMethod method = CompositionMethod::emean;
  std::string classifier;
  std::string params;
  CellStatus status = CellStatus::ok;
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double runtime_s = 0.0;
  std::size_t n_test = 0;
  std::string message;  // error text or warning
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;

  std::size_t error_count() const;
};

/// Runs every (method x classifier) cell in declaration order. Hyperbolic
/// methods and ball-geometry classifiers on euclidean embeddings yield NA
/// rows. Failures are recorded per cell and do not stop the grid.
ResultsTable run_experiment(const ExperimentConfig& config);

/// Same grid over an already loaded corpus and table.
ResultsTable run_experiment(const ExperimentConfig& config, const LabeledCorpus& corpus,
                            const EmbeddingTable& table);

enum class TableFormat { csv, json };

std::optional<TableFormat> parse_format(std::string_view name);

/// Header: embedding,composition,classifier,params,accuracy,micro_f1,runtime_s.
/// Numbers are printed with six decimals; NA and error cells print "NA".
void emit_table(const ResultsTable& table, TableFormat format, std::ostream& out);
void emit_table(const ResultsTable& table, TableFormat format,
                const std::filesystem::path& destination);

// ---------------------------------------------------------------------------
// Kernel diagnostics

struct KernelDiagnostic {
  std::vector<std::string> tokens;  // sampled vocabulary entries
  PsdReport report;
};

/// Samples n distinct tokens (seeded) and checks the Gram matrix of their
/// vectors for positive semidefiniteness.
KernelDiagnostic check_kernel(const EmbeddingTable& table, std::size_t n, const KernelSpec& spec,
                              std::uint64_t seed, double tol = 1e-8);

}  // namespace hypercomp
