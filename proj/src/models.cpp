#include "fdde/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fdde {

SystemRhs ucar_rhs(UcarParams p) {
  if (!(p.delta > 0.0 && p.epsilon > 0.0 && std::isfinite(p.delta) && std::isfinite(p.epsilon))) {
    std::ostringstream os;
    os << "ucar: delta and epsilon must be positive, got (" << p.delta << ", " << p.epsilon << ")";
    throw std::invalid_argument(os.str());
  }
  SystemRhs rhs;
  rhs.g = [p](double x1, double x2) { return p.delta * x1 - p.epsilon * x2 * x2 * x2; };
  rhs.partials = [p](double, double x2) { return Partials{p.delta, -3.0 * p.epsilon * x2 * x2}; };
  return rhs;
}

SystemRhs ikeda_rhs(IkedaParams p) {
  if (!std::isfinite(p.c1) || !std::isfinite(p.c2)) {
    throw std::invalid_argument("ikeda: coefficients must be finite");
  }
  SystemRhs rhs;
  rhs.g = [p](double x1, double x2) { return p.c1 * x1 + p.c2 * std::sin(x2); };
  rhs.partials = [p](double, double x2) { return Partials{p.c1, p.c2 * std::cos(x2)}; };
  return rhs;
}

SystemRhs linear_rhs(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("linear: coefficients must be finite");
  }
  SystemRhs rhs;
  rhs.g = [a, b](double x1, double x2) { return a * x1 + b * x2; };
  rhs.partials = [a, b](double, double) { return Partials{a, b}; };
  return rhs;
}

}  // namespace fdde
