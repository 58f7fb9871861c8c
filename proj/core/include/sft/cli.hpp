#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sft/report.hpp"

namespace sft::cli {

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2 };

// Default caps: SFT_DEFAULT_CAPS="max_p_degree=4,max_hbar=4,max_word_len=3,...".
inline constexpr const char* kCapsEnv = "SFT_DEFAULT_CAPS";
inline constexpr int kSchemaVersion = 1;

// args[0] is the program name. Everything is written to `out` once, at the end;
// usage and parse errors go to `err` unless --json is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

std::string report_text(const CheckReport& r);

}  // namespace sft::cli
