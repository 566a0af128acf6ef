#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fdde/solver.hpp"
#include "fdde/stability.hpp"

namespace fdde::io {

/// Shortest text that is not ambiguous: 17 significant digits, "%.17g".
std::string format_real(double value);

inline constexpr const char* kTrajectoryHeader = "t,x,x_tau1,x_tau2";
inline constexpr const char* kCurveHeader = "v,tau1,tau2,sign1,m1,sign2,m2,residual";

void write_trajectory_csv(std::ostream& out, const std::vector<PhaseRow>& rows);
void write_curve_csv(std::ostream& out, const std::vector<CriticalCurvePoint>& points);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Reads a header line followed by rows of numbers. Throws std::runtime_error
/// on ragged rows or unparsable fields.
CsvTable read_csv(std::istream& in);

}  // namespace fdde::io
