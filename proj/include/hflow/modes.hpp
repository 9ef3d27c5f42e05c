#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace hflow {

// A product-of-trig mode in chart coordinates:
//   amp * f0(k0*x + p0) * f1(k1*y + p1),   f in {1, cos, sin}.
// Sums of such modes express the documented initial-condition grammar and
// the analytic graph profiles f. All derivatives are closed-form.
struct TrigFactor {
  enum class Kind { One, Cos, Sin };
  Kind kind = Kind::One;
  double freq = 0.0;
  double phase = 0.0;

  // n-th derivative w.r.t. the coordinate.
  double eval(double u, int n) const {
    if (kind == Kind::One) return n == 0 ? 1.0 : 0.0;
    double shift = n * M_PI / 2.0;
    double scale = std::pow(freq, n);
    double arg = freq * u + phase + shift;
    return scale * (kind == Kind::Cos ? std::cos(arg) : std::sin(arg));
  }
};

struct Mode {
  double amp = 0.0;
  std::array<TrigFactor, 2> factor;  // factor[1] unused (Kind::One) for m = 1

  double eval(double u0, double u1, int d0 = 0, int d1 = 0) const {
    return amp * factor[0].eval(u0, d0) * factor[1].eval(u1, d1);
  }
};

struct ModeSum {
  std::vector<Mode> modes;

  double eval(double u0, double u1, int d0 = 0, int d1 = 0) const {
    double s = 0.0;
    for (const Mode& mo : modes) s += mo.eval(u0, u1, d0, d1);
    return s;
  }
  bool empty() const { return modes.empty(); }
};

// Parses one mode of the grammar, e.g.
//   "0.05 * cos(2*x) * sin(3*y + 0.5)"   or   "0.1" (constant term).
// Throws ConfigError on malformed input.
Mode parse_mode(const std::string& text);

// Formats a mode back into the grammar (round-trip of config echoes).
std::string format_mode(const Mode& mode);

}  // namespace hflow
