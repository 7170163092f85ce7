#include "kacsim/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace kacsim {

std::string format_double(double x)
{
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc{}) {
    throw std::runtime_error("format_double: conversion failed");
  }
  return std::string(buf.data(), end);
}

double parse_double(std::string_view text)
{
  text = trim(text);
  if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw std::invalid_argument("not a real number: '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split(std::string_view text, char sep)
{
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(text.substr(start));
      break;
    }
    parts.emplace_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

std::string_view trim(std::string_view text)
{
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) {
    return {};
  }
  const auto last = text.find_last_not_of(" \t\r\n");
  return text.substr(first, last - first + 1);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> header)
  : out_(out), columns_(header.size())
{
  for (const auto& name : header) {
    cell(name);
  }
  end_row();
}

void CsvWriter::separator()
{
  if (in_row_ > 0) {
    out_ << ',';
  }
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double x)
{
  separator();
  out_ << format_double(x);
  return *this;
}

CsvWriter& CsvWriter::cell(long long x)
{
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(unsigned long long x)
{
  separator();
  out_ << x;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text)
{
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end_row()
{
  if (in_row_ != columns_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(in_row_) + " cells, header has " +
                           std::to_string(columns_));
  }
  out_ << '\n';
  in_row_ = 0;
}

} // namespace kacsim
