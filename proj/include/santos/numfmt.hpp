#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace santos {

// Canonical decimal rendering for scores: 12 significant digits.
// Dictionary files and the result TSV both use this form.
inline std::string format_score(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// Quantize through the 12-digit decimal form so that in-memory scores
// and their persisted representation are the same number.
inline double round12(double v) {
    return std::strtod(format_score(v).c_str(), nullptr);
}

} // namespace santos
