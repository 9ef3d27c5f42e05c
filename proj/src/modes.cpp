#include "hflow/modes.hpp"

#include <cctype>
#include <sstream>

#include "hflow/errors.hpp"

namespace hflow {

namespace {

struct Cursor {
  const std::string& s;
  size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string word() {
    skip_ws();
    size_t start = pos;
    while (pos < s.size() && std::isalpha(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  }
  double number() {
    skip_ws();
    size_t consumed = 0;
    double v;
    try {
      v = std::stod(s.substr(pos), &consumed);
    } catch (const std::exception&) {
      throw ConfigError("mode '" + s + "': expected a number at position " + std::to_string(pos));
    }
    pos += consumed;
    return v;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  bool peek_sign() {
    skip_ws();
    return pos < s.size() && (s[pos] == '+' || s[pos] == '-');
  }
};

}  // namespace

Mode parse_mode(const std::string& text) {
  Cursor c{text};
  Mode m;
  m.amp = c.number();
  while (!c.done()) {
    if (!c.eat('*')) throw ConfigError("mode '" + text + "': expected '*' between factors");
    std::string fname = c.word();
    if (fname != "cos" && fname != "sin")
      throw ConfigError("mode '" + text + "': unknown factor '" + fname + "'");
    TrigFactor f;
    f.kind = fname == "cos" ? TrigFactor::Kind::Cos : TrigFactor::Kind::Sin;
    if (!c.eat('(')) throw ConfigError("mode '" + text + "': expected '(' after " + fname);
    f.freq = c.number();
    if (!c.eat('*')) throw ConfigError("mode '" + text + "': expected '*' before variable");
    std::string var = c.word();
    int ax;
    if (var == "x")
      ax = 0;
    else if (var == "y")
      ax = 1;
    else
      throw ConfigError("mode '" + text + "': variable must be x or y, got '" + var + "'");
    if (c.peek_sign()) {
      bool neg = !c.eat('+') && c.eat('-');
      double v = c.number();
      f.phase = neg ? -v : v;
    }
    if (!c.eat(')')) throw ConfigError("mode '" + text + "': expected ')'");
    if (m.factor[ax].kind != TrigFactor::Kind::One)
      throw ConfigError("mode '" + text + "': duplicate factor for variable " + var);
    m.factor[ax] = f;
  }
  return m;
}

std::string format_mode(const Mode& mode) {
  std::ostringstream os;
  os.precision(17);
  os << mode.amp;
  const char* vars[2] = {"x", "y"};
  for (int ax = 0; ax < 2; ++ax) {
    const TrigFactor& f = mode.factor[ax];
    if (f.kind == TrigFactor::Kind::One) continue;
    os << " * " << (f.kind == TrigFactor::Kind::Cos ? "cos" : "sin") << "(" << f.freq << "*"
       << vars[ax];
    if (f.phase > 0)
      os << " + " << f.phase;
    else if (f.phase < 0)
      os << " - " << -f.phase;
    os << ")";
  }
  return os.str();
}

}  // namespace hflow
