#pragma once

#include <string>
#include <vector>

namespace viscotherm {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Built-in invariant battery on a 41-node grid with 100 steps per run.
std::vector<CheckOutcome> invariant_battery();

/// Entry point of the command line tool. Returns 0 on success, 1 on an operation error
/// and 2 when the check battery fails.
int cli_main(int argc, char** argv);

}  // namespace viscotherm
