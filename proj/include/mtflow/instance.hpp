#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mtflow/types.hpp"

namespace mtflow {

// A capacitated tree with a designated terminal set, exactly as read from an
// instance file.  Vertices are 1-based; edges keep input order so that all
// output referring to them is reproducible byte for byte.
struct Instance {
  struct Edge {
    std::int32_t u = 0;
    std::int32_t v = 0;
    Value cap = 0;
  };

  std::int32_t n = 0;               // number of vertices
  std::vector<Edge> edges;          // exactly n-1 entries
  std::vector<std::int32_t> terminals;  // sorted, duplicate-free

  bool is_terminal(std::int32_t v) const;
};

// Malformed input.  line is 1-based; 0 means the problem is not tied to a
// specific line (e.g. truncated file).
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& msg)
      : std::runtime_error(format(line, msg)), line_(line) {}
  int line() const { return line_; }

 private:
  static std::string format(int line, const std::string& msg);
  int line_;
};

// Reads the "p tree <n> <k>" format:
//   p tree <n> <k>
//   e <u> <v> <cap>     (n-1 lines, cap in [0, 2^32-1])
//   t <v>               (k lines)
// '#' starts a comment; blank lines are ignored.  The edge set must form a
// tree; violations are rejected with the offending line number.
Instance parse_instance(std::istream& in);
Instance parse_instance(const std::string& text);

void write_instance(std::ostream& out, const Instance& inst);

}  // namespace mtflow
