// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
#include "criteria.hpp"

#include <cstring>
#include <iostream>

int main(int argc, char** argv) {
    gauge::selftest::Options options;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
    bool ok = true;
    for (int id = 1; id <= gauge::selftest::kCriterionCount; ++id) {
        auto r = gauge::selftest::run_criterion(id, options);
        std::cout << gauge::selftest::format(r) << std::endl;
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}
