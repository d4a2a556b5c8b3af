#pragma once

#include "gauge/rational.hpp"
#include "gauge/sexpr.hpp"
#include "gauge/structure.hpp"

#include <string>

namespace test {

inline gauge::Rational q(const char* text) { return gauge::parse_rational(text); }

inline std::string data_file(const std::string& name) {
    return gauge::read_file(std::string(GAUGE_LOGIC_DATA_DIR) + "/" + name);
}

/// Points on a line at the given positions with gauge |position| and no extra symbols.
inline gauge::GaugedStructure line(const std::vector<gauge::Rational>& positions, gauge::Signature sig = {}) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < positions.size(); ++i) names.push_back("p" + std::to_string(i));
    gauge::GaugedStructure m(std::move(sig), names);
    for (gauge::Point a = 0; a < positions.size(); ++a) {
        m.set_gauge(a, abs(positions[a]));
        for (gauge::Point b = a + 1; b < positions.size(); ++b) m.set_distance(a, b, abs(positions[a] - positions[b]));
    }
    return m;
}

}  // namespace test
