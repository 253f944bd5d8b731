#pragma once

// Closed-form rate functions and critical exponents for the smallest graphs.
// Deliberately free of any solver code so they can serve as oracles.

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orrw::closed {

inline void check_args(double delta, double x) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(x >= 0.0 && x <= 0.5)) throw std::invalid_argument("x must lie in [0, 1/2]");
}

inline double xlogy_safe(double c, double y) { return c == 0.0 ? 0.0 : c * std::log(y); }

/// I_1 on the 3-vertex path with ν = (x, 1/2, 1/2 − x) around the middle vertex.
inline double three_vertex_srw_rate(double x) { return xlogy_safe(x, 4.0 * x) + xlogy_safe(0.5 - x, 2.0 * (1.0 - 2.0 * x)); }

inline double lower_threshold(double delta) { return (delta - 1.0) / (4.0 * delta); }
inline double upper_threshold(double delta) { return (delta + 1.0) / (4.0 * delta); }

/// Star with centre 0 (the start) and leaves 1, 2; x = ν(1), ν(0) = 1/2.
inline double star3_rate(double delta, double x) {
  check_args(delta, x);
  const double lo = lower_threshold(delta), hi = upper_threshold(delta);
  if (x < lo) return xlogy_safe(x, (delta - 1.0) / delta) + xlogy_safe(0.5 - x, (delta + 1.0) / delta);
  if (x > hi) return xlogy_safe(0.5 - x, (delta - 1.0) / delta) + xlogy_safe(x, (delta + 1.0) / delta);
  return three_vertex_srw_rate(x);
}

/// Path 0 – 1 – 2 started at the end vertex 0; x = ν(0), ν(1) = 1/2.
inline double path3_rate(double delta, double x) {
  check_args(delta, x);
  if (x > upper_threshold(delta)) return xlogy_safe(0.5 - x, (delta - 1.0) / delta) + xlogy_safe(x, (delta + 1.0) / delta);
  return three_vertex_srw_rate(x);
}

/// Critical exponent of the edge cover time for the named fixture graphs.
inline double alpha_closed(std::string_view tag, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (tag == "star3" || tag == "path3" || tag == "triangle") return 0.5 * std::log((1.0 + delta) / delta);
  if (tag == "path4") return 0.5 * std::log((2.0 + 2.0 * delta) / (1.0 + 2.0 * delta));
  throw std::invalid_argument("no closed form for graph '" + std::string(tag) + "'");
}

}  // namespace orrw::closed
