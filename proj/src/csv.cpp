#include "rydgate/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "rydgate/format.hpp"

namespace rydgate {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

std::string csv_escape(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CSV header must not be empty");
  for (const std::string& name : header) field(name);
  end_row();
}

void CsvWriter::separator() {
  if (in_row_ >= columns_) throw std::logic_error("CSV row has more fields than the header");
  if (in_row_ > 0) out_ << ',';
  ++in_row_;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  out_ << csv_escape(text);
  return *this;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_double(value);
  return *this;
}

CsvWriter& CsvWriter::field(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_) throw std::logic_error("CSV row has fewer fields than the header");
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace rydgate
