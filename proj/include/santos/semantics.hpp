#pragma once

#include <map>
#include <string>

#include "santos/kb.hpp"
#include "santos/lake.hpp"

namespace santos {

enum class Source { KB, Synth };
enum class Context { DataLake, Query };

// KB column semantics: the winning top-level type and its descendants,
// each with a confidence score.
struct ColumnSemantics {
    std::string table_id;
    int column_index = 0;
    Context context = Context::DataLake;
    std::map<std::string, double> annotations; // type id -> confidence
    int mapped_value_count = 0;                // unique values mapped to the KB

    bool empty() const { return annotations.empty(); }
};

// KB relationship semantics for an ordered column pair. Holds at most one
// predicate (the best-scoring one).
struct RelationshipSemantics {
    std::string table_id;
    int left_column = 0;
    int right_column = 0;
    std::map<std::string, double> annotations; // predicate id -> confidence
    int mapped_pair_count = 0;                 // unique value pairs mapped to the KB

    bool empty() const { return annotations.empty(); }
};

// gs(a) = 1 / max(1, log10(count)). In (0,1]; the clamp covers rare types
// whose log would exceed 1. Throws UnknownTypeError for uncounted types.
double granularity_score(const KbStore& kb, const std::string& type_id);
double granularity_score_from_count(std::int64_t count);

// fs(a) = |c_a| / |c_KB|.
double frequency_score(const std::map<std::string, int>& tally, const std::string& type_id,
                       int mapped_value_count);

// Tally types over unique values, vote a top-level type (majority; ties to
// the type with fewer entities, then lexicographic), keep its subtree, and
// score each survivor: fs*gs for data-lake columns, fs alone for query
// columns. An unmapped column yields an empty result.
ColumnSemantics compute_column_semantics(const KbStore& kb, const std::string& table_id,
                                         const ColumnData& col, Context context);

// Tally predicates over unique value pairs of (i,j) and keep the argmax
// (ties to the rarer predicate, then lexicographic). Empty when no pair
// maps. Orientation matters; callers store (i,j) and (j,i) separately.
RelationshipSemantics compute_relationship_semantics(const KbStore& kb, const LakeTable& t, int i,
                                                     int j);

} // namespace santos
