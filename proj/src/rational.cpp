#include "narreq/rational.hpp"

#include <cctype>

#include "narreq/error.hpp"

namespace narreq {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string trimmed(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

std::optional<Rat> try_parse_rat(const std::string& text) {
  std::string s = trimmed(text);
  if (s.empty()) return std::nullopt;

  bool negative = false;
  if (s[0] == '+' || s[0] == '-') {
    negative = s[0] == '-';
    s = s.substr(1);
    if (s.empty()) return std::nullopt;
  }

  Rat value;
  size_t slash = s.find('/');
  size_t dot = s.find('.');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(den);
    if (d == 0) return std::nullopt;
    value = Rat(mpz_class(num), d);
  } else if (dot != std::string::npos) {
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    if (whole.empty() && frac.empty()) return std::nullopt;
    if (!whole.empty() && !all_digits(whole)) return std::nullopt;
    if (!frac.empty() && !all_digits(frac)) return std::nullopt;
    mpz_class scale = 1;
    for (size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class digits(whole.empty() ? "0" : whole);
    digits *= scale;
    if (!frac.empty()) digits += mpz_class(frac);
    value = Rat(digits, scale);
  } else {
    if (!all_digits(s)) return std::nullopt;
    value = Rat(mpz_class(s));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

Rat parse_rat(const std::string& text, const std::string& what) {
  auto v = try_parse_rat(text);
  if (!v) fail(Err::kMalformedConfig, "cannot parse rational for " + what + ": \"" + text + "\"");
  return *v;
}

std::string rat_str(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

double rat_d(const Rat& x) { return x.get_d(); }

Rat rat_of(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace narreq
