#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "fdde/solver.hpp"

namespace fdde {

/// D^alpha x = delta x(t - tau1) - epsilon x(t - tau2)^3
struct UcarParams {
  double delta = 1.0;
  double epsilon = 1.0;
};

/// D^alpha x = c1 x(t - tau1) + c2 sin(x(t - tau2))
struct IkedaParams {
  double c1 = -3.0;
  double c2 = 24.0;
};

SystemRhs ucar_rhs(UcarParams p);
SystemRhs ikeda_rhs(IkedaParams p);

/// g(x1, x2) = a x1 + b x2.
SystemRhs linear_rhs(double a, double b);

/// Model names accepted on the command line.
inline constexpr std::string_view kUcarModel = "ucar";
inline constexpr std::string_view kIkedaModel = "ikeda";

}  // namespace fdde
