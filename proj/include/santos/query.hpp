#pragma once

#include <map>
#include <string>
#include <vector>

#include "santos/index.hpp"
#include "santos/kb.hpp"
#include "santos/lake.hpp"
#include "santos/semantics.hpp"
#include "santos/synth.hpp"

namespace santos {

enum class SearchMode { Full, KbOnly, SynthOnly };

SearchMode search_mode_from_string(const std::string& name);
std::string to_string(SearchMode mode);

using Scores = std::map<std::string, double>;

struct QueryColumn {
    int index = 0;
    Scores kb;    // type id -> query-context confidence (fs only)
    Scores synth; // synthesized type id -> aggregated score
};

// Tree edge rooted-side first. Relationship semantics are kept for both
// orientations of the pair, per source.
struct QueryEdge {
    int parent = 0;
    int child = 0;
    Scores kb_fwd, kb_rev;
    Scores synth_fwd, synth_rev;
};

// Semantic tree of the query table, rooted at the intent column. Edges are
// in breadth-first discovery order; columns unreachable from the intent
// column are not part of the tree.
struct QuerySemanticTree {
    std::string table_id;
    int root = 0;
    std::map<int, QueryColumn> columns;
    std::vector<QueryEdge> edges;
};

// Aggregated synthesized semantics for query columns/pairs: the mean of
// per-value dictionary scores over the values (pairs) found in the
// dictionary.
Scores query_synth_cs(const SynthKb& s, const ColumnData& col);
Scores query_synth_rs(const SynthKb& s, const LakeTable& q, int i, int j);

// Annotates the query table from both sources and wires the tree by BFS
// from the intent column. Throws IntentNotTextualError or
// EmptyIntentSemanticsError.
QuerySemanticTree build_query_tree(const LakeTable& q, int intent, const KbStore& kb,
                                   const SynthKb& synth);

struct MatchDetail {
    double score = 0.0;
    std::string winner;
};

// Best product of confidence scores over the shared annotations; 0 with no
// winner when the sets are disjoint.
MatchDetail col_match(const Scores& q, const Scores& t);

// Same over relationship annotations; the table pair is tried in both
// orientations and the better one wins.
MatchDetail rel_match(const Scores& q_fwd, const Scores& q_rev, const Scores& t_fwd,
                      const Scores& t_rev);

// One (type, predicate, type) combination of a table pair, with its stored
// confidences. The edge index keeps at most one pair per table for each
// combination, so a pair's surviving combinations are enumerated
// explicitly rather than recombined from full annotation sets.
struct KbCombo {
    std::string a1, p, a2;
    double l = 0, rel = 0, r = 0;

    auto operator<=>(const KbCombo&) const = default;
};

std::vector<KbCombo> combos_from_semantics(const Scores& t_cs_left, const Scores& t_rs,
                                           const Scores& t_cs_right);

struct QueryEdgeSemantics {
    Scores parent_kb, child_kb;
    Scores rs_kb_fwd, rs_kb_rev;
    Scores parent_synth, child_synth;
    Scores rs_synth_fwd, rs_synth_rev;
};

struct TableEdgeSemantics {
    std::vector<KbCombo> kb_fwd, kb_rev; // surviving combos of (u,x) and (x,u)
    Scores parent_synth, child_synth;    // table columns' synthesized semantics
    Scores rs_synth_fwd, rs_synth_rev;
};

struct PairMatchOutcome {
    double score = 0.0;
    Source source = Source::KB;
    double kb_score = 0.0;
    double synth_score = 0.0;
    std::string kb_a1, kb_pred, kb_a2; // winning KB combination
    std::string synth_rel;
};

// Scores both methods for one aligned (query pair, table pair) and picks a
// side: the KB wins when its score with granularity factors divided out is
// at least the synthesized score; the returned KB value keeps its
// granularity factors.
PairMatchOutcome pair_match(const KbStore& kb, const QueryEdgeSemantics& q,
                            const TableEdgeSemantics& t, SearchMode mode);

struct MatchedEdge {
    int query_parent = 0, query_child = 0;
    int table_parent = 0, table_child = 0;
    Source source = Source::KB;
    double score = 0.0;
    std::string kb_a1, kb_pred, kb_a2;
    std::string synth_rel;
};

struct RankedResult {
    std::string table_id;
    double score = 0.0;
    int root_column = 0;
    std::vector<MatchedEdge> matched_edges;
};

// Per-table semantics reassembled from index postings. Scoring reads only
// this view, so anything the per-table dedup dropped stays dropped.
struct TableView {
    std::map<int, Scores> kb_cs;
    std::map<int, Scores> synth_cs;
    std::map<std::pair<int, int>, std::vector<KbCombo>> kb_edges;
    std::map<std::pair<int, int>, Scores> synth_edges;
    std::vector<int> semantic_columns; // columns carrying any annotation
};

using TableViews = std::map<std::string, TableView>;

// Built once per loaded index; shared across queries.
TableViews build_table_views(const SearchIndex& idx);

// Candidate tables come from probing the edge index with every annotation
// combination on every query edge; each candidate is then scored from the
// best root column by greedily matching tree edges top-down, consuming one
// table column per role. Only positive scores rank; ties break by table id.
std::vector<RankedResult> search_top_k(const SearchIndex& idx, const TableViews& views,
                                       const KbStore& kb, const QuerySemanticTree& tree, int k,
                                       SearchMode mode);
std::vector<RankedResult> search_top_k(const SearchIndex& idx, const KbStore& kb,
                                       const QuerySemanticTree& tree, int k, SearchMode mode);

// rank, table_id, score (12 significant digits), root_column,
// matched_edge_count; header row first.
std::string results_to_tsv(const std::vector<RankedResult>& results);

} // namespace santos
