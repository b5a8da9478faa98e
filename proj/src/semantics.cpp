#include "santos/semantics.hpp"

#include <algorithm>
#include <cmath>

#include "santos/errors.hpp"

namespace santos {

double granularity_score_from_count(std::int64_t count) {
    if (count < 1) throw UnknownTypeError("granularity score needs a positive entity count");
    double lg = std::log10(static_cast<double>(count));
    return 1.0 / std::max(1.0, lg);
}

double granularity_score(const KbStore& kb, const std::string& type_id) {
    auto it = kb.type_counts.find(type_id);
    if (it == kb.type_counts.end()) throw UnknownTypeError("no entity count for type " + type_id);
    return granularity_score_from_count(it->second);
}

double frequency_score(const std::map<std::string, int>& tally, const std::string& type_id,
                       int mapped_value_count) {
    auto it = tally.find(type_id);
    int hits = it == tally.end() ? 0 : it->second;
    return static_cast<double>(hits) / static_cast<double>(mapped_value_count);
}

ColumnSemantics compute_column_semantics(const KbStore& kb, const std::string& table_id,
                                         const ColumnData& col, Context context) {
    ColumnSemantics cs;
    cs.table_id = table_id;
    cs.column_index = col.column_index;
    cs.context = context;

    std::map<std::string, int> tally; // one vote per unique value per type
    for (const auto& v : col.unique_values) {
        auto types = types_of_value(kb, v);
        if (types.empty()) continue;
        ++cs.mapped_value_count;
        for (const auto& t : types) ++tally[t];
    }
    if (cs.mapped_value_count == 0) return cs;

    // Majority vote over top-level types; ties prefer the rarer type.
    std::string winner;
    for (const auto& top : kb.top_level_types) {
        auto it = tally.find(top);
        if (it == tally.end()) continue;
        if (winner.empty()) {
            winner = top;
            continue;
        }
        int cur = tally.at(winner);
        if (it->second > cur ||
            (it->second == cur && kb.type_counts.at(top) < kb.type_counts.at(winner))) {
            winner = top;
        }
        // equal votes and counts: keep the lexicographically smaller id,
        // which is `winner` since top_level_types iterates in order
    }
    if (winner.empty()) return cs; // values mapped only to the root; nothing usable

    for (const auto& [type, hits] : tally) {
        if (kb.top_level_ancestor(type) != winner) continue;
        double fs = static_cast<double>(hits) / static_cast<double>(cs.mapped_value_count);
        double conf = context == Context::DataLake ? fs * granularity_score(kb, type) : fs;
        cs.annotations[type] = conf;
    }
    return cs;
}

RelationshipSemantics compute_relationship_semantics(const KbStore& kb, const LakeTable& t, int i,
                                                     int j) {
    RelationshipSemantics rs;
    rs.table_id = t.table_id;
    rs.left_column = i;
    rs.right_column = j;

    std::map<std::string, int> tally;
    for (const auto& pair : unique_value_pairs(t, i, j)) {
        auto preds = predicates_of_pair(kb, pair);
        if (preds.empty()) continue;
        ++rs.mapped_pair_count;
        for (const auto& p : preds) ++tally[p];
    }
    if (rs.mapped_pair_count == 0) return rs;

    // Keep only the best predicate; ties prefer the rarer one.
    std::string best;
    for (const auto& [pred, hits] : tally) {
        if (best.empty()) {
            best = pred;
            continue;
        }
        int cur = tally.at(best);
        if (hits > cur ||
            (hits == cur && kb.predicate_counts.at(pred) < kb.predicate_counts.at(best))) {
            best = pred;
        }
    }
    rs.annotations[best] =
        static_cast<double>(tally.at(best)) / static_cast<double>(rs.mapped_pair_count);
    return rs;
}

} // namespace santos
