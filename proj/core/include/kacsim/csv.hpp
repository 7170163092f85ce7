#ifndef KACSIM_CSV_HPP
#define KACSIM_CSV_HPP

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace kacsim {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Exact inverse of format_double; throws std::invalid_argument on junk.
double parse_double(std::string_view text);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);

/// Minimal CSV writer: '.' decimals, '\n' line endings, header first.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header);

  CsvWriter& cell(double x);
  CsvWriter& cell(long long x);
  CsvWriter& cell(unsigned long long x);
  CsvWriter& cell(std::size_t x) { return cell(static_cast<unsigned long long>(x)); }
  CsvWriter& cell(int x) { return cell(static_cast<long long>(x)); }
  CsvWriter& cell(std::string_view text);
  void end_row();

private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

} // namespace kacsim

#endif // KACSIM_CSV_HPP
