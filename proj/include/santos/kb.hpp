#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>

#include "santos/lake.hpp"

namespace santos {

// The four knowledge-base dictionaries plus derived statistics. Identifiers
// (entity, type, predicate) are opaque strings, case-normalized at load.
struct KbStore {
    // label or alternate name (normalized) -> entity ids
    std::map<std::string, std::set<std::string>> entity_dict;
    // entity id -> direct type ids
    std::map<std::string, std::set<std::string>> type_dict;
    // child type -> parent type; the root has no entry
    std::map<std::string, std::string> inheritance;
    std::string root_type;
    std::set<std::string> top_level_types; // direct children of the root
    // type -> number of distinct entities mapped to it or any descendant
    std::map<std::string, std::int64_t> type_counts;
    // (subject entity, object entity) -> predicate ids, direction preserved
    std::map<std::pair<std::string, std::string>, std::set<std::string>> relationship_dict;
    // predicate -> number of distinct entity pairs carrying it
    std::map<std::string, std::int64_t> predicate_counts;

    bool has_types() const { return !type_dict.empty(); }

    // Parent chain from `type` (exclusive) up to the root (inclusive).
    // Returns the top-level ancestor of `type`, or empty if type is the root.
    std::string top_level_ancestor(const std::string& type) const;
};

// Loads entities.tsv, types.tsv, hierarchy.tsv and facts.tsv from a
// directory. '#'-prefixed lines are comments. Fatal on cycles, multiple
// hierarchy roots, or references to undeclared entities/types.
KbStore load_kb(const std::filesystem::path& dir);

// An empty store for ablation runs without a KB.
KbStore empty_kb();

// All types of all entities labeled `v`, with ancestor closure up to and
// including a top-level type. Empty set for unknown values.
std::set<std::string> types_of_value(const KbStore& kb, const std::string& v);

// Predicates connecting any entity labeled p.left to any entity labeled
// p.right, in that order.
std::set<std::string> predicates_of_pair(const KbStore& kb, const ValuePair& p);

} // namespace santos
