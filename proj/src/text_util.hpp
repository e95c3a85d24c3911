#pragma once

#include <charconv>
#include <string_view>
#include <vector>

#include "mtflow/instance.hpp"

namespace mtflow::detail {

// Whitespace-separated tokens of one line; '#' starts a comment.
inline std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
           line[j] != '\r' && line[j] != '#')
      ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view tok, int line, const char* what) {
  if (!tok.empty() && tok.front() == '-')
    throw ParseError(line, std::string("negative ") + what);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(line, std::string("malformed ") + what);
  return value;
}

}  // namespace mtflow::detail
