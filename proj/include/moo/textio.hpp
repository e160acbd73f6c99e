#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace moo {

/// Parse failure in a text surface (CSV rows, constraint tokens, flag lists).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Decimal text with 9 significant digits (%.9g, C locale). All numbers in
/// the file formats go through this so outputs are byte-reproducible.
std::string fmt_g9(double v);

std::vector<std::string> split(const std::string& s, char sep);
std::string trim(const std::string& s);

double parse_double(const std::string& tok, const std::string& context);
long parse_long(const std::string& tok, const std::string& context);

/// Comma-separated doubles, e.g. "--phi 0.05,0.05".
std::vector<double> parse_double_list(const std::string& s, const std::string& context);

}  // namespace moo
