#pragma once

// CSV and JSON plumbing for the command-line front end.
//
// CSV dialect: comma separated, '.' decimal point, no quoting, no thousands
// separators, optional single header row.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fstest/linalg.hpp"
#include "fstest/observations.hpp"
#include "fstest/test_engine.hpp"

namespace fstest {

inline constexpr std::string_view kSchema = "fstest/1";

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  friend bool operator==(const CsvTable&, const CsvTable&) = default;
};

/// "%.10g"; "nan", "inf", "-inf" for the non-finite values.
std::string format_number(double v);

std::string to_csv(const CsvTable& table);

enum class HeaderMode { auto_detect, present, absent };

/// Splits `text` into cells. With auto_detect the first row is a header when
/// any of its cells is not a number. Ragged rows raise ParseError with the
/// 1-based line and column.
CsvTable parse_csv(std::string_view text, HeaderMode mode = HeaderMode::auto_detect);

/// Strict finite-real parse (surrounding blanks allowed).
std::optional<double> parse_real(std::string_view cell);

/// Comma-separated reals, e.g. "0,0.1,0.5".
std::vector<double> parse_number_list(std::string_view text);

struct Dataset {
  Observations data;
  std::vector<std::string> column_names;  ///< empty without a header row
};

/// Every data cell must be a finite real; ParseError carries the 1-based
/// line and column of the first offender.
Dataset parse_dataset(std::string_view text);
Dataset read_dataset(const std::filesystem::path& path);

/// "identity" or a path to a d x d CSV matrix, validated SPD.
SpdMatrix read_sigma(std::string_view spec, std::size_t d);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

nlohmann::json report_to_json(const TestReport& report);

/// {"schema", "columns", "rows"}; numeric-looking cells become numbers.
nlohmann::json table_to_json(const CsvTable& table);

}  // namespace fstest
