#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace flattrans::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kDecodeError = 1;
inline constexpr int kUsageError = 2;
inline constexpr int kFuelExhausted = 3;
inline constexpr int kNotAnf = 4;

struct BenchRow {
  std::string module;
  std::uintmax_t size_bytes = 0;
  std::size_t funcs = 0;
  std::size_t trans = 0;
  // Median milliseconds for the chaotic, mixed and deterministic strategies.
  std::int64_t cs_ms = 0;
  std::int64_t ms_ms = 0;
  std::int64_t ds_ms = 0;
};

std::string format_bench_table(const std::vector<BenchRow>& rows);
std::string format_bench_csv(const std::vector<BenchRow>& rows);

/// Runs the command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace flattrans::cli
