#pragma once

#include <istream>
#include <sstream>
#include <string>
#include <vector>

namespace kme::detail {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;
};

// Whitespace-split lines with '#' comments and blank lines removed.
inline std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    for (std::string tok; ss >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) out.push_back(std::move(line));
  }
  return out;
}

inline std::string where(const Line& line) { return "line " + std::to_string(line.number) + ": "; }

}  // namespace kme::detail
