#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gauge::selftest {

struct Options {
    bool quick = false;             ///< reduced corpus sizes
    std::uint64_t seed = 20240611;  ///< corpus seed
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

inline constexpr int kCriterionCount = 10;

CriterionResult run_criterion(int id, const Options& options);
std::vector<CriterionResult> run_all(const Options& options);

/// "PASS  3 modulus soundness: …"
std::string format(const CriterionResult& r);

}  // namespace gauge::selftest
