#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ucq {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerification = 1,
  kExitCapacity = 2,
  kExitPacking = 3,
  kExitInput = 4,
};

/// Parses "1/3,2/3" or "0.25,0.75" into weights; throws ValidationError.
std::vector<double> parse_weights(const std::string& text);
/// Parses "2,3,5" or "2-5" into block lengths.
std::vector<int> parse_int_list(const std::string& text);

/// Entry point behind the ucq_cli binary. Reads UCQ_DIM_CAP from the
/// environment as the default dimension cap.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ucq
