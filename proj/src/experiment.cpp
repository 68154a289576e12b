#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "hypercomp/harness.hpp"

namespace hypercomp {

namespace {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

double parse_number(std::string_view s, const std::string& context) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw std::invalid_argument("cannot parse number '" + std::string(s) + "' in " + context);
  }
  return v;
}

int parse_int(std::string_view s, const std::string& context) {
  const double v = parse_number(s, context);
  if (v != std::floor(v)) {
    throw std::invalid_argument("expected an integer, got '" + std::string(s) + "' in " + context);
  }
  return static_cast<int>(v);
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream is(s);
  while (std::getline(is, part, sep)) {
    if (!part.empty()) parts.push_back(part);
  }
  return parts;
}

// "a=1,b=2" -> {a: 1, b: 2}; a bare value continues the previous key's list.
std::vector<std::pair<std::string, std::string>> key_values(const std::string& spec) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& part : split_on(spec, ',')) {
    const auto eq = part.find('=');
    if (eq == std::string::npos) {
      out.emplace_back(out.empty() ? std::string() : out.back().first, part);
    } else {
      out.emplace_back(part.substr(0, eq), part.substr(eq + 1));
    }
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

std::vector<int> take(const std::vector<int>& v, const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(v[i]);
  return out;
}

struct CellOutcome {
  std::vector<int> predictions;
  bool non_psd = false;
};

CellOutcome run_cell(const ClassifierCell& cell, const ExperimentConfig& config,
                     const Eigen::MatrixXd& train_x, const std::vector<int>& train_y,
                     const Eigen::MatrixXd& test_x) {
  CellOutcome out;
  if (const auto* knn = std::get_if<KnnCell>(&cell)) {
    const auto model = knn_fit(train_x, train_y, knn->k, knn->metric);
    out.predictions = knn_predict_rows(model, test_x);
    return out;
  }
  BinaryTrainer trainer;
  if (const auto* svm = std::get_if<SvmCell>(&cell)) {
    KernelSvmTrainer ks;
    ks.kernel = svm->kernel;
    ks.smo = config.smo;
    ks.smo.C = svm->C;
    trainer = ks;
  } else {
    const auto& lin = std::get<LinearSvmCell>(cell);
    LinearSvmTrainer ls;
    ls.options.C = lin.C;
    ls.options.epochs = lin.epochs;
    ls.options.seed = config.seed;
    trainer = ls;
  }
  const auto model = ovr_train(train_x, train_y, trainer);
  out.non_psd = model.non_psd_warning();
  for (Eigen::Index i = 0; i < test_x.rows(); ++i) {
    out.predictions.push_back(ovr_predict(model, test_x.row(i).transpose()));
  }
  return out;
}

}  // namespace

std::string classifier_id(const ClassifierCell& cell) {
  if (std::holds_alternative<KnnCell>(cell)) return "knn";
  if (std::holds_alternative<SvmCell>(cell)) return "svm";
  return "linear-svm";
}

std::string classifier_params(const ClassifierCell& cell) {
  if (const auto* knn = std::get_if<KnnCell>(&cell)) {
    return "k=" + std::to_string(knn->k) + ";metric=" + std::string(to_string(knn->metric));
  }
  if (const auto* svm = std::get_if<SvmCell>(&cell)) {
    std::string s = "kernel=";
    switch (svm->kernel.kind) {
      case KernelKind::geodesic:
        s += "geodesic;lambda=" + format_number(svm->kernel.lambda) +
             ";q=" + format_number(svm->kernel.q);
        break;
      case KernelKind::euclidean_rbf:
        s += "rbf;lambda=" + format_number(svm->kernel.lambda);
        break;
      case KernelKind::linear:
        s += "linear";
        break;
    }
    return s + ";C=" + format_number(svm->C);
  }
  const auto& lin = std::get<LinearSvmCell>(cell);
  return "C=" + format_number(lin.C) + ";epochs=" + std::to_string(lin.epochs);
}

bool needs_ball_geometry(const ClassifierCell& cell) {
  if (const auto* knn = std::get_if<KnnCell>(&cell)) return knn->metric == MetricKind::poincare;
  if (const auto* svm = std::get_if<SvmCell>(&cell)) {
    return svm->kernel.kind == KernelKind::geodesic;
  }
  return false;
}

std::vector<ClassifierCell> parse_knn_cells(const std::string& spec, MetricKind metric) {
  std::vector<ClassifierCell> cells;
  for (const auto& [key, value] : key_values(spec)) {
    if (key != "k" && !key.empty()) {
      throw std::invalid_argument("unknown knn option '" + key + "'");
    }
    const int k = parse_int(value, "--knn");
    if (k < 1) throw std::invalid_argument("--knn: k must be >= 1");
    cells.emplace_back(KnnCell{k, metric});
  }
  if (cells.empty()) throw std::invalid_argument("--knn: no k values given");
  return cells;
}

ClassifierCell parse_svm_cell(const std::string& spec) {
  SvmCell cell;
  std::string kernel = "geodesic-laplacian";
  std::optional<double> lambda;
  std::optional<double> q;
  for (const auto& [key, value] : key_values(spec)) {
    if (key == "kernel") {
      kernel = value;
    } else if (key == "lambda") {
      lambda = parse_number(value, "--svm");
    } else if (key == "q") {
      q = parse_number(value, "--svm");
    } else if (key == "C" || key == "c") {
      cell.C = parse_number(value, "--svm");
    } else {
      throw std::invalid_argument("unknown svm option '" + key + "'");
    }
  }
  if (kernel == "geodesic-laplacian") {
    cell.kernel = KernelSpec::geodesic_laplacian();
  } else if (kernel == "geodesic-gaussian") {
    cell.kernel = KernelSpec::geodesic_gaussian();
  } else if (kernel == "geodesic") {
    cell.kernel = KernelSpec::geodesic_laplacian();
  } else if (kernel == "rbf") {
    cell.kernel = KernelSpec::rbf();
  } else if (kernel == "linear") {
    cell.kernel = KernelSpec::linear();
  } else {
    throw std::invalid_argument("unknown kernel '" + kernel + "'");
  }
  if (lambda) cell.kernel.lambda = *lambda;
  if (q) {
    if (kernel != "geodesic") {
      throw std::invalid_argument("q= only applies to kernel=geodesic");
    }
    cell.kernel.q = *q;
  }
  cell.kernel.validate();
  if (!(cell.C > 0)) throw std::invalid_argument("--svm: C must be positive");
  return cell;
}

ClassifierCell parse_linear_svm_cell(const std::string& spec) {
  LinearSvmCell cell;
  for (const auto& [key, value] : key_values(spec)) {
    if (key == "C" || key == "c") {
      cell.C = parse_number(value, "--linear-svm");
    } else if (key == "epochs") {
      cell.epochs = parse_int(value, "--linear-svm");
    } else {
      throw std::invalid_argument("unknown linear-svm option '" + key + "'");
    }
  }
  if (!(cell.C > 0) || cell.epochs < 1) {
    throw std::invalid_argument("--linear-svm: C must be positive and epochs >= 1");
  }
  return cell;
}

SplitSpec parse_split(const std::string& spec, std::uint64_t seed) {
  SplitSpec out;
  out.seed = seed;
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "holdout") {
    HoldoutSplit h;
    if (!arg.empty()) h.train_ratio = parse_number(arg, "--split");
    if (!(h.train_ratio > 0 && h.train_ratio < 1)) {
      throw std::invalid_argument("--split: holdout ratio must lie in (0, 1)");
    }
    out.scheme = h;
  } else if (kind == "kfold") {
    KFoldSplit k;
    if (!arg.empty()) k.folds = parse_int(arg, "--split");
    if (k.folds < 2) throw std::invalid_argument("--split: kfold needs at least 2 folds");
    out.scheme = k;
  } else {
    throw std::invalid_argument("--split must be holdout:RATIO or kfold:K");
  }
  return out;
}

void ExperimentConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("experiment needs at least one method");
  if (classifiers.empty()) throw std::invalid_argument("experiment needs at least one classifier");
  if (const auto* h = std::get_if<HoldoutSplit>(&split.scheme)) {
    if (!(h->train_ratio > 0 && h->train_ratio < 1)) {
      throw std::invalid_argument("holdout ratio must lie in (0, 1)");
    }
  } else if (std::get<KFoldSplit>(split.scheme).folds < 2) {
    throw std::invalid_argument("k-fold needs at least 2 folds");
  }
  composition.validate();
}

std::size_t ResultsTable::error_count() const {
  return static_cast<std::size_t>(std::count_if(
      rows.begin(), rows.end(), [](const ResultRow& r) { return r.status == CellStatus::error; }));
}

ResultsTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto corpus = load_corpus(config.corpus_path);
  const auto table = load_embeddings(config.embeddings_path, config.flavor);
  return run_experiment(config, corpus, table);
}

ResultsTable run_experiment(const ExperimentConfig& config, const LabeledCorpus& corpus,
                            const EmbeddingTable& table) {
  config.validate();
  ResultsTable results;
  const auto labels = corpus.class_ids();
  const auto splits = make_splits(labels, config.split);

  for (auto method : config.methods) {
    auto na_row = [&](const ClassifierCell& cell, std::string why) {
      ResultRow row;
      row.flavor = table.flavor();
      row.method = method;
      row.classifier = classifier_id(cell);
      row.params = classifier_params(cell);
      row.status = CellStatus::not_applicable;
      row.message = std::move(why);
      return row;
    };

    if (is_hyperbolic(method) && table.flavor() != EmbeddingFlavor::poincare) {
      for (const auto& cell : config.classifiers) {
        results.rows.push_back(na_row(cell, "hyperbolic composition on euclidean embeddings"));
      }
      continue;
    }

    const auto rep_start = std::chrono::steady_clock::now();
    std::optional<CorpusRepresentation> rep;
    std::string rep_error;
    try {
      rep = represent_corpus(corpus, table, method, config.composition);
    } catch (const std::exception& e) {
      rep_error = e.what();
    }
    const double rep_seconds = seconds_since(rep_start);
    if (rep && !rep->diagnostics.empty_documents.empty()) {
      results.warnings.push_back(std::string(to_string(method)) + ": " +
                                 std::to_string(rep->diagnostics.empty_documents.size()) +
                                 " document(s) without known tokens represented by the origin");
    }

    for (const auto& cell : config.classifiers) {
      if (table.flavor() != EmbeddingFlavor::poincare && needs_ball_geometry(cell)) {
        results.rows.push_back(na_row(cell, "ball-geometry classifier on euclidean embeddings"));
        continue;
      }
      ResultRow row;
      row.flavor = table.flavor();
      row.method = method;
      row.classifier = classifier_id(cell);
      row.params = classifier_params(cell);
      if (!rep) {
        row.status = CellStatus::error;
        row.message = rep_error;
        results.rows.push_back(std::move(row));
        continue;
      }
      const auto start = std::chrono::steady_clock::now();
      try {
        std::vector<int> predictions;
        std::vector<int> gold;
        bool non_psd = false;
        for (const auto& split : splits) {
          auto outcome = run_cell(cell, config, take_rows(rep->points, split.train),
                                  take(labels, split.train), take_rows(rep->points, split.test));
          non_psd = non_psd || outcome.non_psd;
          predictions.insert(predictions.end(), outcome.predictions.begin(),
                             outcome.predictions.end());
          const auto g = take(labels, split.test);
          gold.insert(gold.end(), g.begin(), g.end());
        }
        const auto report = evaluate(predictions, gold);
        row.accuracy = report.accuracy;
        row.micro_f1 = report.micro_f1;
        row.n_test = report.n_test;
        if (non_psd) row.message = "kernel matrix failed the PSD check";
      } catch (const std::exception& e) {
        row.status = CellStatus::error;
        row.message = e.what();
      }
      row.runtime_s = rep_seconds + seconds_since(start);
      results.rows.push_back(std::move(row));
    }
  }
  return results;
}

}  // namespace hypercomp
