#pragma once

// RFC-4180-style CSV output with "\n" line ends; fields are quoted only
// when they contain a comma, quote or line break. Doubles use the
// shortest representation that round-trips.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace rydgate {

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& empty();
  /// Terminates the row; throws std::logic_error on a column-count mismatch.
  void end_row();

  std::size_t columns() const { return columns_; }

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

std::string csv_escape(std::string_view text);

}  // namespace rydgate
