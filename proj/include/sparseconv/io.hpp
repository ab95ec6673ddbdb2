#pragma once

// Text polynomial files:
//
//   # optional comment lines start with '#'
//   N <length>
//   <index> <coefficient>
//   ...
//
// Indices strictly ascending, coefficients nonzero, decimal integers.

#include <sparseconv/sparse_vector.hpp>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sparseconv {

class PolyFileError : public std::runtime_error {
 public:
  PolyFileError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

}  // namespace detail

inline SparseVector parse_poly(std::istream& in, const std::string& source = "<input>",
                               const Envelope& env = kDefaultEnvelope) {
  std::string line;
  std::size_t line_no = 0;
  Index length = 0;
  bool have_header = false;
  std::vector<Term> terms;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = detail::split_ws(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (!have_header) {
      if (fields.size() != 2 || fields[0] != "N" || !detail::parse_int(fields[1], length)) {
        throw PolyFileError(source, line_no, "expected header 'N <length>'");
      }
      if (length == 0) throw PolyFileError(source, line_no, "length must be positive");
      if (length > env.max_dimension) {
        throw PolyFileError(source, line_no, "length exceeds the envelope dimension");
      }
      have_header = true;
      continue;
    }
    Term t;
    if (fields.size() != 2 || !detail::parse_int(fields[0], t.index) ||
        !detail::parse_int(fields[1], t.coeff)) {
      throw PolyFileError(source, line_no, "malformed term, expected '<index> <coefficient>'");
    }
    if (t.index >= length) {
      throw PolyFileError(source, line_no,
                          "index " + std::to_string(t.index) + " out of range for N = " +
                              std::to_string(length));
    }
    if (t.coeff == 0) throw PolyFileError(source, line_no, "zero coefficient");
    if (!terms.empty() && terms.back().index == t.index) {
      throw PolyFileError(source, line_no, "duplicate index " + std::to_string(t.index));
    }
    if (!terms.empty() && terms.back().index > t.index) {
      throw PolyFileError(source, line_no, "indices must be ascending");
    }
    terms.push_back(t);
  }
  if (!have_header) throw PolyFileError(source, line_no, "missing header 'N <length>'");
  return SparseVector::from_canonical(length, std::move(terms));
}

inline SparseVector parse_poly_file(const std::filesystem::path& path,
                                    const Envelope& env = kDefaultEnvelope) {
  std::ifstream in(path);
  if (!in) throw PolyFileError(path.string(), 0, "cannot open file");
  return parse_poly(in, path.string(), env);
}

inline void write_poly(std::ostream& out, const SparseVector& v) {
  out << "N " << v.length() << '\n';
  for (const auto& t : v.terms()) out << t.index << ' ' << t.coeff << '\n';
}

inline void write_poly_file(const SparseVector& v, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_poly(out, v);
  if (!out) throw std::runtime_error("error writing " + path.string());
}

}  // namespace sparseconv
