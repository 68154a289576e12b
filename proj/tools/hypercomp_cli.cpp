// hypercomp: compose Poincare word embeddings into document points and run
// classification grids over them.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hypercomp/harness.hpp"

namespace hc = hypercomp;

namespace {

std::vector<hc::CompositionMethod> parse_methods(const std::string& list) {
  std::vector<hc::CompositionMethod> methods;
  std::istringstream is(list);
  std::string name;
  while (std::getline(is, name, ',')) {
    if (name.empty()) continue;
    auto m = hc::parse_method(name);
    if (!m) throw std::invalid_argument("unknown composition method '" + name + "'");
    methods.push_back(*m);
  }
  return methods;
}

hc::EmbeddingFlavor flavor_or_throw(const std::string& name) {
  auto f = hc::parse_flavor(name);
  if (!f) throw std::invalid_argument("--flavor must be euclidean or poincare");
  return *f;
}

struct RunArgs {
  std::string corpus;
  std::string embeddings;
  std::string flavor = "poincare";
  std::string methods = "emean,lcf,lcb,lca,fnw,bnw";
  std::string knn;
  std::string knn_metric = "poincare";
  std::vector<std::string> svm;
  std::vector<std::string> linear_svm;
  std::string split = "holdout:0.8";
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
};

int run(const RunArgs& args) {
  hc::ExperimentConfig config;
  config.corpus_path = args.corpus;
  config.embeddings_path = args.embeddings;
  config.flavor = flavor_or_throw(args.flavor);
  config.methods = parse_methods(args.methods);
  config.seed = args.seed;
  config.split = hc::parse_split(args.split, args.seed);
  if (!args.knn.empty()) {
    auto metric = hc::parse_metric(args.knn_metric);
    if (!metric) throw std::invalid_argument("--knn-metric must be poincare or euclidean");
    for (auto& cell : hc::parse_knn_cells(args.knn, *metric)) config.classifiers.push_back(cell);
  }
  for (const auto& s : args.svm) config.classifiers.push_back(hc::parse_svm_cell(s));
  for (const auto& s : args.linear_svm) config.classifiers.push_back(hc::parse_linear_svm_cell(s));
  auto format = hc::parse_format(args.format);
  if (!format) throw std::invalid_argument("--format must be csv or json");

  const auto table = hc::run_experiment(config);
  if (args.out.empty() || args.out == "-") {
    hc::emit_table(table, *format, std::cout);
  } else {
    hc::emit_table(table, *format, std::filesystem::path(args.out));
  }
  for (const auto& w : table.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& row : table.rows) {
    if (row.status == hc::CellStatus::ok && !row.message.empty()) {
      std::cerr << "warning: " << hc::to_string(row.method) << " " << row.classifier << " "
                << row.params << ": " << row.message << '\n';
    }
  }
  if (const auto errors = table.error_count(); errors > 0) {
    std::cerr << errors << " cell(s) failed:\n";
    for (const auto& row : table.rows) {
      if (row.status == hc::CellStatus::error) {
        std::cerr << "  " << hc::to_string(row.method) << " " << row.classifier << " "
                  << row.params << ": " << row.message << '\n';
      }
    }
    return 1;
  }
  return 0;
}

int check_kernel(const std::string& embeddings, const std::string& flavor, std::size_t n,
                 double q, double lambda, std::uint64_t seed, double tol) {
  const auto table = hc::load_embeddings(std::filesystem::path(embeddings), flavor_or_throw(flavor));
  hc::KernelSpec spec{hc::KernelKind::geodesic, lambda, q};
  spec.validate();
  const auto diag = hc::check_kernel(table, n, spec, seed, tol);
  std::printf("kernel %s\n", hc::describe(spec).c_str());
  std::printf("points %zu\n", diag.tokens.size());
  std::printf("min_eigenvalue %.12g\n", diag.report.min_eigenvalue);
  std::printf("threshold %.12g\n", diag.report.threshold);
  std::printf("psd %s\n", diag.report.psd ? "yes" : "no");
  return 0;
}

int compose(const std::string& embeddings, const std::string& flavor, const std::string& method,
            const std::string& text) {
  const auto table = hc::load_embeddings(std::filesystem::path(embeddings), flavor_or_throw(flavor));
  auto m = hc::parse_method(method);
  if (!m) throw std::invalid_argument("unknown composition method '" + method + "'");
  const auto corpus = hc::make_corpus({{"_", text}});
  const auto rep = hc::represent_corpus(corpus, table, *m);
  const auto& diag = rep.diagnostics;
  std::printf("method %s\n", method.c_str());
  std::printf("tokens %zu oov %zu\n", diag.total_tokens, diag.oov_tokens);
  if (!diag.empty_documents.empty()) {
    std::fprintf(stderr, "warning: no known tokens, representing the document by the origin\n");
  }
  const Eigen::VectorXd point = rep.points.row(0).transpose();
  std::printf("norm %.17g\n", point.norm());
  std::printf("coords");
  for (Eigen::Index i = 0; i < point.size(); ++i) std::printf(" %.17g", point[i]);
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperbolic document composition and classification"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Run a composition x classifier grid");
  run_cmd->add_option("--corpus", run_args.corpus, "label<TAB>text corpus file")->required();
  run_cmd->add_option("--embeddings", run_args.embeddings, "word-vector text file")->required();
  run_cmd->add_option("--flavor", run_args.flavor, "euclidean or poincare");
  run_cmd->add_option("--methods", run_args.methods, "comma-separated composition methods");
  run_cmd->add_option("--knn", run_args.knn, "k-NN cells, e.g. k=3,5,7,9,11");
  run_cmd->add_option("--knn-metric", run_args.knn_metric, "poincare or euclidean");
  run_cmd->add_option("--svm", run_args.svm,
                      "kernel SVM cell, e.g. kernel=geodesic-laplacian,lambda=1.0,C=1.0");
  run_cmd->add_option("--linear-svm", run_args.linear_svm, "primal linear SVM cell, e.g. C=1.0");
  run_cmd->add_option("--split", run_args.split, "holdout:RATIO or kfold:K");
  run_cmd->add_option("--seed", run_args.seed, "split and trainer seed");
  run_cmd->add_option("--out", run_args.out, "output file (stdout if omitted)");
  run_cmd->add_option("--format", run_args.format, "csv or json");

  std::string ck_embeddings;
  std::string ck_flavor = "poincare";
  std::size_t ck_n = 30;
  double ck_q = 1.0;
  double ck_lambda = 1.0;
  std::uint64_t ck_seed = 42;
  double ck_tol = 1e-8;
  auto* ck_cmd = app.add_subcommand("check-kernel", "PSD diagnostic of the geodesic kernel");
  ck_cmd->add_option("--embeddings", ck_embeddings, "word-vector text file")->required();
  ck_cmd->add_option("--flavor", ck_flavor, "euclidean or poincare");
  ck_cmd->add_option("--n", ck_n, "number of sampled tokens");
  ck_cmd->add_option("--q", ck_q, "geodesic exponent (1 Laplacian, 2 Gaussian)");
  ck_cmd->add_option("--lambda", ck_lambda, "kernel rate");
  ck_cmd->add_option("--seed", ck_seed, "sampling seed");
  ck_cmd->add_option("--tol", ck_tol, "PSD tolerance");

  std::string cp_embeddings;
  std::string cp_flavor = "poincare";
  std::string cp_method = "lca";
  std::string cp_text;
  auto* cp_cmd = app.add_subcommand("compose", "Compose a single document");
  cp_cmd->add_option("--embeddings", cp_embeddings, "word-vector text file")->required();
  cp_cmd->add_option("--flavor", cp_flavor, "euclidean or poincare");
  cp_cmd->add_option("--method", cp_method, "composition method");
  cp_cmd->add_option("--text", cp_text, "document text")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return run(run_args);
    if (ck_cmd->parsed()) {
      return check_kernel(ck_embeddings, ck_flavor, ck_n, ck_q, ck_lambda, ck_seed, ck_tol);
    }
    if (cp_cmd->parsed()) return compose(cp_embeddings, cp_flavor, cp_method, cp_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
