#pragma once

#include <string>
#include <vector>

#include "santos/lake.hpp"

namespace santos {

// Exact unary functional dependency holding on one table instance.
struct UnaryFd {
    std::string table_id;
    int determinant = 0;
    int dependent = 0;

    auto operator<=>(const UnaryFd&) const = default;
};

// Bottom-up check over all ordered textual column pairs: i -> j holds iff
// no two rows agree on a non-empty i value while disagreeing on j. Rows
// with an empty cell on either side are ignored for that pair. Result is
// sorted by (determinant, dependent).
std::vector<UnaryFd> discover_unary_fds(const LakeTable& t);

} // namespace santos
