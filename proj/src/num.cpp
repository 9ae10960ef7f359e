#include "poolshare/num.hpp"

#include <cctype>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace poolshare {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad(const std::string& text) {
  throw std::invalid_argument("not a rational literal: \"" + text + "\"");
}

}  // namespace

Num::Num(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Num& Num::operator/=(const Num& o) {
  if (o.is_zero()) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Num Num::parse(const std::string& text) {
  size_t b = text.find_first_not_of(" \t");
  size_t e = text.find_last_not_of(" \t");
  if (b == std::string::npos) bad(text);
  std::string s = text.substr(b, e - b + 1);

  bool neg = false;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) bad(text);

  mpq_class v;
  if (size_t slash = s.find('/'); slash != std::string::npos) {
    std::string p = s.substr(0, slash);
    std::string q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q)) bad(text);
    mpz_class den(q);
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    v = mpq_class(mpz_class(p), den);
    v.canonicalize();
  } else if (size_t dot = s.find('.'); dot != std::string::npos) {
    std::string ip = s.substr(0, dot);
    std::string fp = s.substr(dot + 1);
    if (ip.empty() && fp.empty()) bad(text);
    if (!ip.empty() && !all_digits(ip)) bad(text);
    if (!fp.empty() && !all_digits(fp)) bad(text);
    mpz_class num(ip.empty() ? "0" : ip);
    mpz_class den(1);
    for (char c : fp) {
      num = num * 10 + (c - '0');
      den *= 10;
    }
    v = mpq_class(num, den);
    v.canonicalize();
  } else {
    if (!all_digits(s)) bad(text);
    v = mpq_class(mpz_class(s));
  }
  if (neg) v = -v;
  Num n;
  n.v_ = v;
  return n;
}

std::string Num::to_decimal(int significant_digits) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*g", significant_digits, to_double());
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Num& n) { return os << n.to_string(); }

}  // namespace poolshare
