#include <algorithm>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "holo/acceptance.hpp"

// acceptance [--expect-fail id,id,...] [id ...]
// Without --expect-fail the exit code is 1 if any criterion fails. With it, the exit code is 0
// only if the failing criteria are exactly the listed ones.
int main(int argc, char** argv) {
  std::vector<std::string> only;
  std::set<std::string> expected;
  bool expecting = false;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--expect-fail" && i + 1 < argc) {
      expecting = true;
      std::istringstream ids(argv[++i]);
      for (std::string id; std::getline(ids, id, ',');) expected.insert(id);
    } else {
      only.push_back(arg);
    }
  }
  std::set<std::string> failed;
  for (const auto& r : holo::run_acceptance(only)) {
    std::cout << holo::format_line(r) << std::endl;
    if (!r.passed) failed.insert(r.id);
  }
  if (!expecting) return failed.empty() ? 0 : 1;
  if (failed == expected) {
    std::cout << "failing criteria match the expected list (" << failed.size() << ")" << std::endl;
    return 0;
  }
  for (const auto& id : failed)
    if (!expected.count(id)) std::cout << "unexpected failure: " << id << std::endl;
  for (const auto& id : expected)
    if (!failed.count(id)) std::cout << "expected failure now passes: " << id << std::endl;
  return 1;
}
