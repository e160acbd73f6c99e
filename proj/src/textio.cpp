#include "moo/textio.hpp"

#include <cstdio>
#include <cstdlib>

namespace moo {

std::string fmt_g9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::string(buf);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r' || s[b] == '\n')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r' || s[e - 1] == '\n'))
    --e;
  return s.substr(b, e - b);
}

double parse_double(const std::string& tok, const std::string& context) {
  const std::string t = trim(tok);
  if (t.empty()) throw ParseError(context + ": empty number");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size()) throw ParseError(context + ": bad number '" + tok + "'");
  return v;
}

long parse_long(const std::string& tok, const std::string& context) {
  const std::string t = trim(tok);
  if (t.empty()) throw ParseError(context + ": empty integer");
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size()) throw ParseError(context + ": bad integer '" + tok + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& s, const std::string& context) {
  std::vector<double> out;
  for (const std::string& tok : split(s, ',')) out.push_back(parse_double(tok, context));
  return out;
}

}  // namespace moo
