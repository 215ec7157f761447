#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace slab {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

CheckResult check_involution(std::uint64_t seed);
CheckResult check_conservation(std::uint64_t seed);
CheckResult check_directions(std::uint64_t seed);
CheckResult check_rank(std::uint64_t seed);
CheckResult check_curvature(std::uint64_t seed);
CheckResult check_billiard(std::uint64_t seed);
CheckResult check_flat(std::uint64_t seed);

/// Run a named suite: "all", "involution", "conservation", "webs" (directions
/// + rank + curvature), "billiard", "flat", or a single check name.
/// Throws std::invalid_argument on an unknown selector.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed);

std::string report_text(const std::vector<CheckResult>& results);
bool all_pass(const std::vector<CheckResult>& results);

}  // namespace slab
