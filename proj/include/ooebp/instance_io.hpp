#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ooebp/core.hpp"

namespace ooebp {

/// Parse failure with the 1-based line number of the offending line.
class parse_error : public std::runtime_error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// One size per line ("p/q" or an integer); blank lines and lines starting
/// with '#' are skipped.
inline instance read_instance(std::istream& in) {
  instance inst;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    rational size;
    try {
      size = parse_rational(body);
    } catch (const std::exception& e) {
      throw parse_error(lineno, e.what());
    }
    if (size.num() <= 0) throw parse_error(lineno, "size must be positive");
    inst.push_back(size);
  }
  return inst;
}

inline instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return read_instance(in);
}

inline instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_instance(in);
}

inline void write_instance(std::ostream& out, const instance& inst) {
  for (const rational& s : inst) out << s << '\n';
}

inline std::string format_instance(const instance& inst) {
  std::ostringstream out;
  write_instance(out, inst);
  return out.str();
}

inline void save_instance(const std::string& path, const instance& inst) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_instance(out, inst);
}

/// Text rendering of a packing: a cost line, then one line per non-empty bin
/// with 1-based item indices and the final load.
inline void write_packing(std::ostream& out, const packing& p) {
  out << "cost " << p.cost() << '\n';
  std::size_t shown = 0;
  for (const bin& b : p.bins()) {
    if (b.empty()) continue;
    out << "bin " << ++shown << ':';
    for (item_index i : b.items) out << ' ' << (i + 1);
    out << " load " << b.load << '\n';
  }
}

}  // namespace ooebp
