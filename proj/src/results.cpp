#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "hypercomp/harness.hpp"

namespace hypercomp {

namespace {

constexpr const char* kColumns[] = {"embedding", "composition", "classifier", "params",
                                    "accuracy",  "micro_f1",    "runtime_s"};

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

struct Cells {
  std::string accuracy;
  std::string micro_f1;
  std::string runtime;
};

Cells numeric_cells(const ResultRow& row) {
  if (row.status != CellStatus::ok) return {"NA", "NA", "NA"};
  return {fixed6(row.accuracy), fixed6(row.micro_f1), fixed6(row.runtime_s)};
}

}  // namespace

std::optional<TableFormat> parse_format(std::string_view name) {
  if (name == "csv") return TableFormat::csv;
  if (name == "json") return TableFormat::json;
  return std::nullopt;
}

void emit_table(const ResultsTable& table, TableFormat format, std::ostream& out) {
  if (format == TableFormat::csv) {
    for (std::size_t c = 0; c < std::size(kColumns); ++c) {
      out << (c ? "," : "") << kColumns[c];
    }
    out << '\n';
    for (const auto& row : table.rows) {
      const auto cells = numeric_cells(row);
      out << to_string(row.flavor) << ',' << to_string(row.method) << ',' << row.classifier << ','
          << row.params << ',' << cells.accuracy << ',' << cells.micro_f1 << ',' << cells.runtime
          << '\n';
    }
  } else {
    // Numbers go through the same six-decimal rounding as the CSV.
    auto value = [](const std::string& cell) -> nlohmann::ordered_json {
      if (cell == "NA") return "NA";
      return std::stod(cell);
    };
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      const auto cells = numeric_cells(row);
      rows.push_back({{"embedding", std::string(to_string(row.flavor))},
                      {"composition", std::string(to_string(row.method))},
                      {"classifier", row.classifier},
                      {"params", row.params},
                      {"accuracy", value(cells.accuracy)},
                      {"micro_f1", value(cells.micro_f1)},
                      {"runtime_s", value(cells.runtime)}});
    }
    out << rows.dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("emit_table: write failed");
}

void emit_table(const ResultsTable& table, TableFormat format,
                const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + destination.string());
  emit_table(table, format, out);
}

}  // namespace hypercomp
