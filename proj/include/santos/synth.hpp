#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "santos/fd.hpp"
#include "santos/kb.hpp"
#include "santos/lake.hpp"

namespace santos {

// Identifiers are canonical strings so dictionaries diff cleanly:
//   column  -> "CS(<table>#<col>)"
//   pair    -> "RS(<table>#<i>,<j>)"
std::string synth_cs_id(const std::string& table_id, int col);
std::string synth_rs_id(const std::string& table_id, int i, int j);

// Lake-mined knowledge base. Values (and value pairs) the external KB does
// not cover are typed by the columns (and FD column pairs) hosting them,
// scored by value overlap across hosts.
struct SynthKb {
    // value -> (synthesized type id -> score in (0,1])
    std::map<std::string, std::map<std::string, double>> type_dict;
    // value pair -> (synthesized relationship id -> score in (0,1])
    std::map<ValuePair, std::map<std::string, double>> rel_dict;
    // membership sets behind the scores' denominators
    std::map<std::string, std::set<std::string>> column_members;
    std::map<std::string, std::set<ValuePair>> pair_members;

    bool operator==(const SynthKb&) const = default;
    bool empty() const { return type_dict.empty() && rel_dict.empty(); }
};

// Two passes: (1) register each textual column over its KB-uncovered
// unique values and each ordered FD pair over its KB-uncovered unique
// value pairs; (2) score every member of a host against every overlapping
// host: own host 1, foreign host |host ∩ foreign| / |host|, max-merged
// when a value occurs in several hosts. Scores are quantized to the
// 12-digit form they are persisted in.
SynthKb build_synth_kb(const std::vector<LakeTable>& lake, const KbStore& kb,
                       const std::map<std::string, std::vector<UnaryFd>>& fds_per_table);

std::map<std::string, double> synth_types_of_value(const SynthKb& s, const std::string& v);
std::map<std::string, double> synth_predicates_of_pair(const SynthKb& s, const ValuePair& p);

// Column-level view used when indexing a lake column (or FD pair): its own
// id at 1 plus each overlapping host at the overlap fraction.
std::map<std::string, double> synth_column_profile(const SynthKb& s, const std::string& cs_id);
std::map<std::string, double> synth_pair_profile(const SynthKb& s, const std::string& rs_id);

// All host profiles at once, sharing one inverted member lookup.
std::map<std::string, std::map<std::string, double>> synth_all_column_profiles(const SynthKb& s);
std::map<std::string, std::map<std::string, double>> synth_all_pair_profiles(const SynthKb& s);

// Persisted as synth_type_dict.json / synth_rel_dict.json: sorted keys,
// scores as 12-significant-digit decimal strings. Pair keys join the two
// values with a tab (normalization guarantees values contain none).
void save_synth_kb(const SynthKb& s, const std::filesystem::path& dir);
SynthKb load_synth_kb(const std::filesystem::path& dir);

} // namespace santos
