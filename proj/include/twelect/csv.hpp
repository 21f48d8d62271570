#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace twelect {

// RFC-4180 style: fields containing comma, quote or newline are quoted,
// quotes doubled. Tweet text embeds all three.
std::string csv_escape(std::string_view field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

// Incremental reader handling quoted fields with embedded newlines.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads one logical row into `fields`; returns false at end of input.
  bool next(std::vector<std::string>& fields);

  // 1-based line number of the first physical line of the last row read.
  long line() const { return row_start_line_; }

 private:
  std::istream& in_;
  long physical_line_ = 0;
  long row_start_line_ = 0;
};

}  // namespace twelect
