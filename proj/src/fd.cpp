#include "santos/fd.hpp"

#include <unordered_map>

namespace santos {

std::vector<UnaryFd> discover_unary_fds(const LakeTable& t) {
    std::vector<UnaryFd> fds;
    auto textual = t.textual_columns();
    std::unordered_map<std::string_view, std::string_view> image;
    for (int i : textual) {
        for (int j : textual) {
            if (i == j) continue;
            image.clear();
            bool holds = true;
            for (const auto& row : t.rows) {
                const std::string& det = row[static_cast<std::size_t>(i)];
                const std::string& dep = row[static_cast<std::size_t>(j)];
                if (det.empty() || dep.empty()) continue;
                auto [it, inserted] = image.emplace(det, dep);
                if (!inserted && it->second != dep) {
                    holds = false;
                    break;
                }
            }
            if (holds) fds.push_back(UnaryFd{t.table_id, i, j});
        }
    }
    return fds;
}

} // namespace santos
