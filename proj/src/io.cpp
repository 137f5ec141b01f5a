#include "fstest/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fstest/error.hpp"

namespace fstest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_cells(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  };
  if (!table.header.empty()) emit(table.header);
  for (const auto& row : table.rows) emit(row);
  return out;
}

std::optional<double> parse_real(std::string_view cell) {
  cell = trim(cell);
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v))
    return std::nullopt;
  return v;
}

CsvTable parse_csv(std::string_view text, HeaderMode mode) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_cells(line);
    if (first) {
      first = false;
      width = cells.size();
      bool header = mode == HeaderMode::present;
      if (mode == HeaderMode::auto_detect)
        for (const auto& c : cells) header = header || !parse_real(c).has_value();
      if (header) {
        table.header = std::move(cells);
        continue;
      }
    }
    if (cells.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no, std::min(cells.size(), width) + 1);
    table.rows.push_back(std::move(cells));
  }
  return table;
}

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t col = 0;
  for (const auto& cell : split_cells(text)) {
    ++col;
    const auto v = parse_real(cell);
    if (!v) throw ParseError("not a finite number: '" + cell + "'", 1, col);
    out.push_back(*v);
  }
  return out;
}

Dataset parse_dataset(std::string_view text) {
  std::size_t line_no = 0;
  std::size_t width = 0;
  bool first = true;
  Dataset out{Observations(), {}};
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_cells(line);
    if (first) {
      first = false;
      width = cells.size();
      bool header = false;
      for (const auto& c : cells) header = header || !parse_real(c).has_value();
      if (header) {
        out.column_names = std::move(cells);
        continue;
      }
    }
    if (cells.size() != width)
      throw ParseError("expected " + std::to_string(width) + " columns, found " +
                           std::to_string(cells.size()),
                       line_no, std::min(cells.size(), width) + 1);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const auto v = parse_real(cells[c]);
      if (!v) throw ParseError("not a finite number: '" + cells[c] + "'", line_no, c + 1);
      values.push_back(*v);
    }
    ++rows;
  }
  if (rows == 0) throw EmptyDataError("dataset has no data rows");
  out.data = Observations(rows, width, std::move(values));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Dataset read_dataset(const std::filesystem::path& path) {
  return parse_dataset(read_text_file(path));
}

SpdMatrix read_sigma(std::string_view spec, std::size_t d) {
  if (spec == "identity") return SpdMatrix::identity(d);
  const Dataset m = parse_dataset(read_text_file(std::filesystem::path(spec)));
  if (m.data.size() != d || m.data.dim() != d)
    throw DimensionMismatchError("sigma file is " + std::to_string(m.data.size()) + "x" +
                                 std::to_string(m.data.dim()) + ", expected " +
                                 std::to_string(d) + "x" + std::to_string(d));
  Matrix sigma(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) sigma(i, j) = m.data(i, j);
  return SpdMatrix(std::move(sigma));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw ConfigError("write failed for '" + path.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw ConfigError("cannot rename into '" + path.string() + "': " + ec.message());
  }
}

nlohmann::json report_to_json(const TestReport& report) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["statistic"] = statistic_name(report.kind);
  j["value"] = report.value;
  j["critical_value"] = report.critical_value;
  j["alpha"] = report.alpha;
  j["decision"] = report.reject ? "reject" : "retain";
  j["p_value"] = report.p_value ? nlohmann::json(*report.p_value) : nlohmann::json(nullptr);
  j["mc_samples"] = report.mc_samples;
  j["seed"] = report.seed;
  j["calibration"] = calibration_name(report.calibration);
  return j;
}

nlohmann::json table_to_json(const CsvTable& table) {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["columns"] = table.header;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& cell : row) {
      if (auto v = parse_real(cell)) {
        r.push_back(*v);
      } else {
        r.push_back(cell);
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j;
}

}  // namespace fstest
