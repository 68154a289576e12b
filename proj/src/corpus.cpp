#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>

#include "hypercomp/corpus.hpp"

namespace hypercomp {

namespace {

constexpr double kPoincareMaxNorm = 1.0 - 1e-7;
constexpr std::size_t kMaxRecordedSkips = 20;

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

bool is_integer(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

void record_skip(LoadReport& report, std::size_t line_no) {
  ++report.skipped;
  if (report.skipped_lines.size() < kMaxRecordedSkips) report.skipped_lines.push_back(line_no);
}

void enforce_malformed_limit(std::size_t malformed, std::size_t total, const char* what) {
  const double allowed = std::max(1.0, kMaxMalformedFraction * static_cast<double>(total));
  if (static_cast<double>(malformed) > allowed) {
    throw std::runtime_error(std::string(what) + ": " + std::to_string(malformed) + " of " +
                             std::to_string(total) + " lines malformed");
  }
}

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

}  // namespace

std::string_view to_string(EmbeddingFlavor f) {
  return f == EmbeddingFlavor::poincare ? "poincare" : "euclidean";
}

std::optional<EmbeddingFlavor> parse_flavor(std::string_view name) {
  if (name == "poincare") return EmbeddingFlavor::poincare;
  if (name == "euclidean") return EmbeddingFlavor::euclidean;
  return std::nullopt;
}

std::optional<Eigen::Index> EmbeddingTable::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool EmbeddingTable::insert(std::string token, const Eigen::VectorXd& v) {
  if (v.size() != dim_ || index_.contains(token)) return false;
  Eigen::VectorXd stored = v;
  if (flavor_ == EmbeddingFlavor::poincare) {
    const double n = stored.norm();
    if (n >= 1.0) {
      stored *= kPoincareMaxNorm / n;
      ++report_.clamped;
    }
  }
  index_.emplace(token, static_cast<Eigen::Index>(tokens_.size()));
  tokens_.push_back(std::move(token));
  flat_.insert(flat_.end(), stored.data(), stored.data() + stored.size());
  return true;
}

EmbeddingTable load_embeddings(std::istream& in, EmbeddingFlavor flavor) {
  LoadReport report;
  std::size_t malformed = 0;
  std::size_t header_lines = 0;
  Eigen::Index dim = -1;
  std::optional<EmbeddingTable> table;
  std::string line;
  std::size_t line_no = 0;
  Eigen::VectorXd values;

  while (std::getline(in, line)) {
    ++line_no;
    ++report.total_lines;
    strip_cr(line);
    const auto fields = split_ws(line);
    if (dim < 0) {
      if (line_no == 1 && fields.size() == 2 && is_integer(fields[0]) && is_integer(fields[1])) {
        ++header_lines;
        record_skip(report, line_no);
        continue;
      }
      if (fields.size() < 2) {
        ++malformed;
        record_skip(report, line_no);
        continue;
      }
      dim = static_cast<Eigen::Index>(fields.size() - 1);
      table.emplace(flavor, dim);
      values.resize(dim);
    }
    bool ok = static_cast<Eigen::Index>(fields.size()) == dim + 1;
    for (Eigen::Index k = 0; ok && k < dim; ++k) {
      ok = parse_double(fields[static_cast<std::size_t>(k + 1)], values[k]);
    }
    if (!ok || !table->insert(std::string(fields[0]), values)) {
      ++malformed;
      record_skip(report, line_no);
      continue;
    }
    ++report.parsed;
  }
  if (in.bad()) throw std::runtime_error("error while reading embeddings");
  enforce_malformed_limit(malformed, report.total_lines - header_lines, "load_embeddings");
  if (!table || table->size() == 0) {
    throw std::runtime_error("load_embeddings: no embedding lines found");
  }
  report.clamped = table->report_.clamped;
  table->report_ = report;
  return std::move(*table);
}

EmbeddingTable load_embeddings(const std::filesystem::path& path, EmbeddingFlavor flavor) {
  auto in = open_or_throw(path);
  return load_embeddings(in, flavor);
}

std::vector<int> LabeledCorpus::class_ids() const {
  std::vector<int> ids;
  ids.reserve(records.size());
  for (const auto& r : records) {
    auto it = std::lower_bound(labels.begin(), labels.end(), r.label);
    ids.push_back(static_cast<int>(it - labels.begin()));
  }
  return ids;
}

LabeledCorpus make_corpus(std::vector<LabeledRecord> records) {
  LabeledCorpus corpus;
  std::set<std::string> labels;
  for (const auto& r : records) labels.insert(r.label);
  corpus.records = std::move(records);
  corpus.labels.assign(labels.begin(), labels.end());
  return corpus;
}

LabeledCorpus load_corpus(std::istream& in) {
  std::vector<LabeledRecord> records;
  LoadReport report;
  std::string line;
  while (std::getline(in, line)) {
    ++report.total_lines;
    strip_cr(line);
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      record_skip(report, report.total_lines);
      continue;
    }
    records.push_back({line.substr(0, tab), line.substr(tab + 1)});
    ++report.parsed;
  }
  if (in.bad()) throw std::runtime_error("error while reading corpus");
  enforce_malformed_limit(report.skipped, report.total_lines, "load_corpus");
  if (records.empty()) throw std::runtime_error("load_corpus: no records");
  auto corpus = make_corpus(std::move(records));
  corpus.report = report;
  return corpus;
}

LabeledCorpus load_corpus(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return load_corpus(in);
}

DocPoints doc_to_points(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  if (table.flavor() != EmbeddingFlavor::poincare) {
    throw std::invalid_argument("doc_to_points: ball points need a poincare embedding table");
  }
  DocPoints doc;
  for (const auto& t : tokens) {
    if (auto row = table.find(t)) {
      doc.points.emplace_back(BallPoint<double>(Eigen::VectorXd(table.vector(*row))), 1.0);
    } else {
      ++doc.oov;
    }
  }
  return doc;
}

CorpusRepresentation represent_corpus(const LabeledCorpus& corpus, const EmbeddingTable& table,
                                      CompositionMethod method,
                                      const CompositionConfig<double>& cfg,
                                      const TokenizerConfig& tok) {
  if (corpus.records.empty()) {
    throw std::invalid_argument("represent_corpus: empty corpus");
  }
  const bool poincare = table.flavor() == EmbeddingFlavor::poincare;
  if (is_hyperbolic(method) && !poincare) {
    throw std::invalid_argument("represent_corpus: " + std::string(to_string(method)) +
                                " needs poincare embeddings");
  }
  cfg.validate();

  CorpusRepresentation out;
  out.points = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(corpus.records.size()), table.dim());
  out.labels = corpus.class_ids();
  auto& diag = out.diagnostics;

  for (std::size_t d = 0; d < corpus.records.size(); ++d) {
    const auto tokens = tokenize(corpus.records[d].text, tok);
    diag.total_tokens += tokens.size();
    const auto row = static_cast<Eigen::Index>(d);
    if (poincare) {
      auto doc = doc_to_points(tokens, table);
      diag.oov_tokens += doc.oov;
      if (doc.empty()) {
        diag.empty_documents.push_back(d);
        continue;
      }
      out.points.row(row) = compose(method, PointSequence<double>(std::move(doc.points)), cfg)
                                .coords()
                                .transpose();
    } else {
      Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim());
      std::size_t found = 0;
      for (const auto& t : tokens) {
        if (auto r = table.find(t)) {
          sum += table.vector(*r);
          ++found;
        } else {
          ++diag.oov_tokens;
        }
      }
      if (found == 0) {
        diag.empty_documents.push_back(d);
        continue;
      }
      out.points.row(row) = (sum / static_cast<double>(found)).transpose();
    }
  }
  return out;
}

}  // namespace hypercomp
