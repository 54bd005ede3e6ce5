#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#ifndef PTASYNTH_FIXTURES
#define PTASYNTH_FIXTURES "tests/fixtures"
#endif

namespace testing {

inline std::uint64_t seed(std::uint64_t fallback = 20240611) {
  if (const char* s = std::getenv("PTASYNTH_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

inline std::string fixture_path(const std::string& name) {
  return std::string(PTASYNTH_FIXTURES) + "/" + name;
}

inline std::string read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture(const std::string& name) { return read(fixture_path(name)); }

inline const std::vector<std::string>& fixture_models() {
  static const std::vector<std::string> names{"timer", "fischer", "zeno", "deadlock",
                                              "prodcons", "switch", "alarm", "traingate"};
  return names;
}

/// (name, formula) pairs from a .ltl file, one `name: formula` per line.
inline std::vector<std::pair<std::string, std::string>> properties(const std::string& model) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(fixture(model + ".ltl"));
  std::string line;
  while (std::getline(in, line)) {
    const auto colon = line.find(':');
    if (line.empty() || line[0] == '#' || colon == std::string::npos) continue;
    std::string phi = line.substr(colon + 1);
    phi.erase(0, phi.find_first_not_of(' '));
    out.emplace_back(line.substr(0, colon), phi);
  }
  return out;
}

}  // namespace testing
