#pragma once

#include "pinchlab/pinch_constants.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace pinchlab::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInadmissible = 2, kIoError = 3 };

/// Environment variable naming the default output directory.
inline constexpr const char* kOutEnv = "PINCHLAB_OUT";

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args);

/// Estimate records in `dir`, newest envelope winning per (n, k, lambda, variant, quad).
std::vector<EstimateRecord> load_records(const std::filesystem::path& dir);

/// Derives the constants for (n, delta) from `dir` and writes the envelope.
/// Throws std::invalid_argument on a coverage gap.
std::filesystem::path merge_constants(const std::filesystem::path& dir, int n, double delta);

std::string estimate_filename(const EstimateRecord& r);
std::string constants_filename(int n, double delta);

}  // namespace pinchlab::cli
