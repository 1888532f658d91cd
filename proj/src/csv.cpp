#include "rconf/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace rconf {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_cell(std::string_view cell, double& out) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  const auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

[[noreturn]] void parse_fail(std::size_t row, std::size_t col, const std::string& what) {
  throw std::invalid_argument("csv: row " + std::to_string(row) + " col " + std::to_string(col) +
                              ": " + what);
}

}  // namespace

Dataset parse_csv_text(const std::string& text) {
  std::vector<std::string_view> lines;
  {
    std::string_view rest(text);
    while (!rest.empty()) {
      std::size_t pos = rest.find('\n');
      std::string_view line = pos == std::string_view::npos ? rest : rest.substr(0, pos);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.push_back(line);
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  }
  if (lines.empty()) throw std::invalid_argument("csv: empty input");

  // The first row is a header only if none of its cells is numeric; a mixed
  // row like "1,a" is malformed data, not a header. Row numbers in errors
  // are 1-based over the raw lines so they match what an editor shows.
  std::size_t first_data = 0;
  {
    bool any_numeric = false;
    for (std::string_view cell : split_fields(lines[0])) {
      double v;
      if (parse_cell(cell, v)) any_numeric = true;
    }
    if (!any_numeric) first_data = 1;
  }
  if (first_data >= lines.size()) throw std::invalid_argument("csv: no data rows");

  const std::size_t dim = split_fields(lines[first_data]).size();
  Dataset data(dim);
  std::vector<double> row(dim);
  for (std::size_t r = first_data; r < lines.size(); ++r) {
    const auto fields = split_fields(lines[r]);
    if (trim(lines[r]).empty()) parse_fail(r + 1, 1, "blank row");
    if (fields.size() != dim) {
      throw std::invalid_argument("csv: row " + std::to_string(r + 1) + ": expected " +
                                  std::to_string(dim) + " columns, got " +
                                  std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < dim; ++c) {
      double v;
      if (!parse_cell(fields[c], v)) parse_fail(r + 1, c + 1, "not a number");
      if (!std::isfinite(v)) parse_fail(r + 1, c + 1, "non-finite value");
      row[c] = v;
    }
    data.add(std::span<const double>(row));
  }
  return data;
}

Dataset ingest_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("csv: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_csv_text(buf.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string dataset_to_csv(const Dataset& data) {
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = data[i];
    for (std::size_t c = 0; c < data.dim(); ++c) {
      if (c) out += ',';
      out += format_double(p[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_dataset_csv(const Dataset& data, const std::string& path) {
  write_text_file(path, dataset_to_csv(data));
}

std::string mask_to_csv(const GridMask& mask) {
  std::string out;
  const std::size_t d = mask.spec.dim();
  for (std::size_t c = 0; c < d; ++c) {
    if (c) out += ',';
    out += "coord_" + std::to_string(c + 1);
  }
  out += ",member\n";
  for (std::size_t j = 0; j < mask.values.size(); ++j) {
    const Point p = mask.spec.node(j);
    for (std::size_t c = 0; c < d; ++c) {
      out += format_double(p[c]);
      out += ',';
    }
    out += mask.values[j] ? '1' : '0';
    out += '\n';
  }
  return out;
}

void write_mask_csv(const GridMask& mask, const std::string& path) {
  write_text_file(path, mask_to_csv(mask));
}

}  // namespace rconf
