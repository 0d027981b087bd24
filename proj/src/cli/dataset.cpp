#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "gemdpde/cli.hpp"

namespace gemdpde::cli {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  std::string out(s.substr(b, e - b));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) out.push_back(trim(cell));
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

bool is_missing(const std::string& s) { return s.empty() || s == "NA" || s == "na" || s == "NaN"; }

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

DataError::DataError(const std::string& message, std::size_t line)
    : std::runtime_error(line > 0 ? fmt::format("line {}: {}", line, message) : message),
      line_(line) {}

Dataset parse_dataset(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  std::ptrdiff_t time_col = -1;
  std::ptrdiff_t value_col = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto header = split(line, ',');
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string h = lower(header[i]);
      if (h == "time" || h == "year") time_col = static_cast<std::ptrdiff_t>(i);
      if (h == "value") value_col = static_cast<std::ptrdiff_t>(i);
    }
    break;
  }
  if (value_col < 0 || time_col < 0) {
    throw DataError(name + ": expected a header with 'time' and 'value' columns", lineno);
  }

  Dataset data;
  data.sample.label = name;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    const auto need = static_cast<std::size_t>(std::max(time_col, value_col));
    if (cells.size() <= need) throw DataError(name + ": too few columns", lineno);
    const std::string& tcell = cells[static_cast<std::size_t>(time_col)];
    const std::string& vcell = cells[static_cast<std::size_t>(value_col)];
    if (is_missing(vcell)) {
      ++data.dropped;
      continue;
    }
    const auto t = to_double(tcell);
    if (!t) throw DataError(name + ": bad time '" + tcell + "'", lineno);
    const auto v = to_double(vcell);
    if (!v || !std::isfinite(*v)) throw DataError(name + ": bad value '" + vcell + "'", lineno);
    if (!(*v > 0.0)) throw DataError(name + ": value must be positive, got " + vcell, lineno);
    data.times.push_back(*t);
    data.sample.values.push_back(*v);
  }
  if (data.sample.size() < 3) {
    throw DataError(fmt::format("{}: need at least 3 usable rows, found {}", name,
                                data.sample.size()));
  }
  if (!data.times.empty()) {
    data.sample.period = fmt::format("{:g}-{:g}", data.times.front(), data.times.back());
  }
  return data;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  return parse_dataset(in, path);
}

void write_dataset(std::ostream& out, const std::vector<double>& times,
                   const std::vector<double>& values) {
  out << "time,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << fmt::format("{:g},{:.17g}\n", times[i], values[i]);
  }
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw std::invalid_argument("grid range must be start:stop:step");
    const auto a = to_double(parts[0]);
    const auto b = to_double(parts[1]);
    const auto h = to_double(parts[2]);
    if (!a || !b || !h || !(*h > 0.0) || *b < *a) {
      throw std::invalid_argument("bad grid range '" + text + "'");
    }
    const auto steps = static_cast<long>(std::floor((*b - *a) / *h + 1e-9));
    for (long i = 0; i <= steps; ++i) grid.push_back(*a + static_cast<double>(i) * *h);
    return grid;
  }
  for (const auto& cell : split(text, ',')) {
    const auto v = to_double(cell);
    if (!v) throw std::invalid_argument("bad grid value '" + cell + "'");
    grid.push_back(*v);
  }
  if (grid.empty()) throw std::invalid_argument("empty grid");
  return grid;
}

}  // namespace gemdpde::cli
