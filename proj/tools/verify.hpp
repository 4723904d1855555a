#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sasaki::cli {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Library invariants, each cheap enough for a smoke run of the installed tool.
std::vector<CheckResult> run_verify_suite(unsigned long long seed,
                                          const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace sasaki::cli
