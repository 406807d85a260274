#include "arbkit/rational.hpp"

#include <cctype>
#include <sstream>

namespace arbkit {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

} // namespace

std::optional<Rat> parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) return std::nullopt;
  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = (s[0] == '-');
    s = s.substr(1);
    if (s.empty()) return std::nullopt;
  }

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    bool dneg = false;
    if (!den.empty() && (den[0] == '+' || den[0] == '-')) {
      dneg = (den[0] == '-');
      den = den.substr(1);
    }
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    Int q(den);
    if (q == 0) return std::nullopt;
    Rat r(Int(num), q);
    if (neg != dneg) r = -r;
    return r;
  }

  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) return std::nullopt;
    if (!ip.empty() && !all_digits(ip)) return std::nullopt;
    if (!fp.empty() && !all_digits(fp)) return std::nullopt;
    Int num = ip.empty() ? Int(0) : Int(ip);
    Int den(1);
    for (char c : fp) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    Rat r(num, den);
    return neg ? -r : r;
  }

  if (!all_digits(s)) return std::nullopt;
  Rat r((Int(s)));
  return neg ? -r : r;
}

std::string format_rational(const Rat& x) {
  std::ostringstream os;
  if (denominator(x) == 1)
    os << numerator(x);
  else
    os << numerator(x) << "/" << denominator(x);
  return os.str();
}

std::string format_vector(const std::vector<Rat>& v) {
  std::string out = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_rational(v[i]);
  }
  return out + ")";
}

} // namespace arbkit
