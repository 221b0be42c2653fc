#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#ifndef GALIGN_SOURCE_DIR
#error "GALIGN_SOURCE_DIR must be defined by the build"
#endif

namespace support {

inline std::string source_path(const std::string& relative) {
  return std::string(GALIGN_SOURCE_DIR) + "/" + relative;
}

inline std::string fixture(const std::string& name) { return source_path("tests/fixtures/" + name); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct PrintedPair {
  std::string label;  // "<student>_<pre|post>"
  std::vector<std::string> s1;
  std::vector<std::string> s2;
};

// Minimal reader for the appendix fixture, kept separate from the library's
// own parser so the two can be compared.
inline std::vector<PrintedPair> appendix_pairs() {
  auto row = [](const std::string& line, const std::string& prefix) {
    if (line.rfind(prefix, 0) != 0) throw std::runtime_error("expected " + prefix + " in " + line);
    const auto open = line.find('[');
    const auto close = line.rfind(']');
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line.substr(open + 1, close - open - 1));
    while (std::getline(in, field, ',')) {
      const auto b = field.find_first_not_of(' ');
      const auto e = field.find_last_not_of(' ');
      out.push_back(field.substr(b, e - b + 1));
    }
    return out;
  };
  std::istringstream in(slurp(fixture("appendix_a.txt")));
  std::vector<PrintedPair> pairs;
  std::string label;
  std::string line;
  while (std::getline(in, label)) {
    if (label.empty()) continue;
    PrintedPair p;
    p.label = label;
    std::getline(in, line);
    p.s1 = row(line, "student:");
    std::getline(in, line);
    p.s2 = row(line, "normative:");
    pairs.push_back(std::move(p));
  }
  return pairs;
}

// Identity of every printed pair, in percent, as a fraction matches/length
// counted from the printed rows by hand.
struct ExpectedIdentity {
  const char* label;
  int matches;
  int length;
};

inline const std::vector<ExpectedIdentity>& appendix_identities() {
  static const std::vector<ExpectedIdentity> table = {
      {"1_pre", 19, 35},  {"2_pre", 22, 34},  {"3_pre", 34, 64},  {"4_pre", 25, 49},
      {"5_pre", 21, 36},  {"6_pre", 22, 39},  {"7_pre", 25, 42},  {"8_pre", 21, 32},
      {"9_pre", 21, 28},  {"10_pre", 25, 38}, {"1_post", 23, 31}, {"2_post", 21, 35},
      {"3_post", 23, 32}, {"4_post", 22, 32}, {"5_post", 27, 43}, {"6_post", 25, 32},
      {"7_post", 24, 32}, {"8_post", 24, 32}, {"9_post", 23, 29}, {"10_post", 24, 39},
  };
  return table;
}

}  // namespace support
