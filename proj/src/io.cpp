#include "fdde/io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace fdde::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  const int written = std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return std::string(buffer, static_cast<std::size_t>(written));
}

void write_trajectory_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
  out << kTrajectoryHeader << '\n';
  for (const auto& row : rows) {
    out << format_real(row.t) << ',' << format_real(row.x) << ',' << format_real(row.x_tau1) << ','
        << format_real(row.x_tau2) << '\n';
  }
}

void write_curve_csv(std::ostream& out, const std::vector<CriticalCurvePoint>& points) {
  out << kCurveHeader << '\n';
  for (const auto& p : points) {
    out << format_real(p.v) << ',' << format_real(p.tau1) << ',' << format_real(p.tau2) << ','
        << p.branch.sign1 << ',' << p.branch.m1 << ',' << p.branch.sign2 << ',' << p.branch.m2
        << ',' << format_real(p.residual) << '\n';
  }
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: missing header row");
  table.header = split(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw std::runtime_error("csv: wrong field count on line " + std::to_string(line_no));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), value);
      if (ec != std::errc() || ptr != f.data() + f.size()) {
        throw std::runtime_error("csv: unparsable field '" + f + "' on line " + std::to_string(line_no));
      }
      row.push_back(value);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fdde::io
