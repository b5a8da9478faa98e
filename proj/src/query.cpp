#include "santos/query.hpp"

#include <algorithm>

#include "santos/errors.hpp"
#include "santos/numfmt.hpp"

namespace santos {

namespace {

bool parse_kb_edge_key(const std::string& key, std::string& a1, std::string& p, std::string& a2) {
    auto t1 = key.find('\t');
    if (t1 == std::string::npos) return false;
    auto t2 = key.find('\t', t1 + 1);
    if (t2 == std::string::npos) return false;
    a1 = key.substr(0, t1);
    p = key.substr(t1 + 1, t2 - t1 - 1);
    a2 = key.substr(t2 + 1);
    return true;
}

bool intersects(const Scores& a, const Scores& b) {
    if (a.size() > b.size()) return intersects(b, a);
    for (const auto& [id, score] : a)
        if (b.count(id)) return true;
    return false;
}

const Scores* find_scores(const std::map<std::pair<int, int>, Scores>& m, int i, int j) {
    auto it = m.find({i, j});
    return it == m.end() ? nullptr : &it->second;
}

const std::vector<KbCombo>* find_combos(const std::map<std::pair<int, int>, std::vector<KbCombo>>& m,
                                         int i, int j) {
    auto it = m.find({i, j});
    return it == m.end() ? nullptr : &it->second;
}

} // namespace

TableViews build_table_views(const SearchIndex& idx) {
    TableViews views;
    for (const auto& [type, postings] : idx.node_kb)
        for (const auto& p : postings) views[p.table_id].kb_cs[p.column][type] = p.confidence;
    for (const auto& [id, postings] : idx.node_synth)
        for (const auto& p : postings) views[p.table_id].synth_cs[p.column][id] = p.confidence;
    for (const auto& [key, postings] : idx.edge_kb) {
        std::string a1, pred, a2;
        if (!parse_kb_edge_key(key, a1, pred, a2)) continue;
        for (const auto& p : postings)
            views[p.table_id].kb_edges[{p.left_column, p.right_column}].push_back(
                KbCombo{a1, pred, a2, p.left_conf, p.rel_conf, p.right_conf});
    }
    for (const auto& [id, postings] : idx.edge_synth)
        for (const auto& p : postings)
            views[p.table_id].synth_edges[{p.left_column, p.right_column}][id] = p.rel_conf;
    for (auto& [table, view] : views) {
        std::set<int> cols;
        for (const auto& [c, scores] : view.kb_cs) cols.insert(c);
        for (const auto& [c, scores] : view.synth_cs) cols.insert(c);
        view.semantic_columns.assign(cols.begin(), cols.end());
        for (auto& [pair, combos] : view.kb_edges) std::sort(combos.begin(), combos.end());
    }
    return views;
}

SearchMode search_mode_from_string(const std::string& name) {
    if (name == "full") return SearchMode::Full;
    if (name == "kb") return SearchMode::KbOnly;
    if (name == "synth") return SearchMode::SynthOnly;
    throw FormatError("unknown mode '" + name + "' (expected full|kb|synth)");
}

std::string to_string(SearchMode mode) {
    switch (mode) {
    case SearchMode::Full: return "full";
    case SearchMode::KbOnly: return "kb";
    case SearchMode::SynthOnly: return "synth";
    }
    return "full";
}

Scores query_synth_cs(const SynthKb& s, const ColumnData& col) {
    Scores sums;
    int covered = 0;
    for (const auto& v : col.unique_values) {
        auto it = s.type_dict.find(v);
        if (it == s.type_dict.end()) continue;
        ++covered;
        for (const auto& [id, score] : it->second) sums[id] += score;
    }
    Scores out;
    for (const auto& [id, sum] : sums) out[id] = sum / static_cast<double>(covered);
    return out;
}

Scores query_synth_rs(const SynthKb& s, const LakeTable& q, int i, int j) {
    Scores sums;
    int covered = 0;
    for (const auto& p : unique_value_pairs(q, i, j)) {
        auto it = s.rel_dict.find(p);
        if (it == s.rel_dict.end()) continue;
        ++covered;
        for (const auto& [id, score] : it->second) sums[id] += score;
    }
    Scores out;
    for (const auto& [id, sum] : sums) out[id] = sum / static_cast<double>(covered);
    return out;
}

QuerySemanticTree build_query_tree(const LakeTable& q, int intent, const KbStore& kb,
                                   const SynthKb& synth) {
    if (!q.is_textual(intent))
        throw IntentNotTextualError("intent column " + std::to_string(intent) + " of " +
                                    q.table_id + " is not textual");

    QuerySemanticTree tree;
    tree.table_id = q.table_id;
    tree.root = intent;

    std::map<int, QueryColumn> all;
    for (int c : q.textual_columns()) {
        QueryColumn qc;
        qc.index = c;
        qc.kb = compute_column_semantics(kb, q.table_id, q.column(c), Context::Query).annotations;
        qc.synth = query_synth_cs(synth, q.column(c));
        all.emplace(c, std::move(qc));
    }

    const QueryColumn& root_col = all.at(intent);
    if (root_col.kb.empty() && root_col.synth.empty())
        throw EmptyIntentSemanticsError("intent column " + std::to_string(intent) + " of " +
                                        q.table_id + " has no semantics in either source");

    auto kb_rs = [&](int i, int j) -> Scores {
        if (all.at(i).kb.empty() || all.at(j).kb.empty()) return {};
        return compute_relationship_semantics(kb, q, i, j).annotations;
    };

    std::set<int> visited = {intent};
    std::vector<int> frontier = {intent};
    tree.columns.emplace(intent, root_col);
    while (!frontier.empty()) {
        std::vector<int> next;
        for (int u : frontier) {
            for (const auto& [v, vcol] : all) {
                if (visited.count(v)) continue;
                QueryEdge edge;
                edge.parent = u;
                edge.child = v;
                edge.kb_fwd = kb_rs(u, v);
                edge.kb_rev = kb_rs(v, u);
                edge.synth_fwd = query_synth_rs(synth, q, u, v);
                edge.synth_rev = query_synth_rs(synth, q, v, u);
                if (edge.kb_fwd.empty() && edge.kb_rev.empty() && edge.synth_fwd.empty() &&
                    edge.synth_rev.empty())
                    continue;
                visited.insert(v);
                next.push_back(v);
                tree.columns.emplace(v, vcol);
                tree.edges.push_back(std::move(edge));
            }
        }
        frontier = std::move(next);
    }
    return tree;
}

MatchDetail col_match(const Scores& q, const Scores& t) {
    MatchDetail best;
    for (const auto& [id, qscore] : q) {
        auto it = t.find(id);
        if (it == t.end()) continue;
        double v = qscore * it->second;
        if (v > best.score) {
            best.score = v;
            best.winner = id;
        }
    }
    return best;
}

MatchDetail rel_match(const Scores& q_fwd, const Scores& q_rev, const Scores& t_fwd,
                      const Scores& t_rev) {
    MatchDetail fwd = col_match(q_fwd, t_fwd);
    MatchDetail rev = col_match(q_rev, t_rev);
    return rev.score > fwd.score ? rev : fwd;
}

std::vector<KbCombo> combos_from_semantics(const Scores& t_cs_left, const Scores& t_rs,
                                           const Scores& t_cs_right) {
    std::vector<KbCombo> combos;
    for (const auto& [a1, l] : t_cs_left)
        for (const auto& [p, rel] : t_rs)
            for (const auto& [a2, r] : t_cs_right) combos.push_back(KbCombo{a1, p, a2, l, rel, r});
    return combos;
}

PairMatchOutcome pair_match(const KbStore& kb, const QueryEdgeSemantics& q,
                            const TableEdgeSemantics& t, SearchMode mode) {
    PairMatchOutcome out;

    if (mode != SearchMode::SynthOnly) {
        auto try_combo = [&](double qc_parent, double qc_child, double q_rel, const KbCombo& combo,
                             bool reversed) {
            // reversed: the table pair is (child side, parent side)
            double v;
            if (!reversed) {
                v = (qc_parent * combo.l) * (q_rel * combo.rel) * (qc_child * combo.r);
            } else {
                v = (qc_child * combo.l) * (q_rel * combo.rel) * (qc_parent * combo.r);
            }
            if (v > out.kb_score) {
                out.kb_score = v;
                out.kb_a1 = reversed ? combo.a2 : combo.a1;
                out.kb_pred = combo.p;
                out.kb_a2 = reversed ? combo.a1 : combo.a2;
            }
        };
        for (const KbCombo& combo : t.kb_fwd) {
            auto i1 = q.parent_kb.find(combo.a1);
            if (i1 == q.parent_kb.end()) continue;
            auto ip = q.rs_kb_fwd.find(combo.p);
            if (ip == q.rs_kb_fwd.end()) continue;
            auto i2 = q.child_kb.find(combo.a2);
            if (i2 == q.child_kb.end()) continue;
            try_combo(i1->second, i2->second, ip->second, combo, false);
        }
        for (const KbCombo& combo : t.kb_rev) {
            auto i1 = q.child_kb.find(combo.a1);
            if (i1 == q.child_kb.end()) continue;
            auto ip = q.rs_kb_rev.find(combo.p);
            if (ip == q.rs_kb_rev.end()) continue;
            auto i2 = q.parent_kb.find(combo.a2);
            if (i2 == q.parent_kb.end()) continue;
            try_combo(i2->second, i1->second, ip->second, combo, true);
        }
    }

    if (mode != SearchMode::KbOnly) {
        MatchDetail colp = col_match(q.parent_synth, t.parent_synth);
        MatchDetail colc = col_match(q.child_synth, t.child_synth);
        MatchDetail relm =
            rel_match(q.rs_synth_fwd, q.rs_synth_rev, t.rs_synth_fwd, t.rs_synth_rev);
        if (colp.score > 0 && colc.score > 0 && relm.score > 0) {
            out.synth_score = (colp.score * relm.score) * colc.score;
            out.synth_rel = relm.winner;
        }
    }

    switch (mode) {
    case SearchMode::KbOnly:
        out.score = out.kb_score;
        out.source = Source::KB;
        break;
    case SearchMode::SynthOnly:
        out.score = out.synth_score;
        out.source = Source::Synth;
        break;
    case SearchMode::Full: {
        double stripped = 0.0;
        if (out.kb_score > 0) {
            double g1 = granularity_score(kb, out.kb_a1);
            double g2 = granularity_score(kb, out.kb_a2);
            stripped = out.kb_score / (g1 * g2);
        }
        bool kb_wins = stripped >= out.synth_score;
        out.score = kb_wins ? out.kb_score : out.synth_score;
        out.source = kb_wins ? Source::KB : Source::Synth;
        break;
    }
    }
    return out;
}

std::vector<RankedResult> search_top_k(const SearchIndex& idx, const KbStore& kb,
                                       const QuerySemanticTree& tree, int k, SearchMode mode) {
    return search_top_k(idx, build_table_views(idx), kb, tree, k, mode);
}

std::vector<RankedResult> search_top_k(const SearchIndex& idx, const TableViews& views,
                                       const KbStore& kb, const QuerySemanticTree& tree, int k,
                                       SearchMode mode) {
    if (k < 1) return {};

    // Candidate generation: probe the edge index with every annotation
    // combination present on the query tree.
    std::set<std::string> candidates;
    auto probe_kb = [&](const Scores& left, const Scores& rs, const Scores& right) {
        for (const auto& [a1, s1] : left)
            for (const auto& [p, sp] : rs)
                for (const auto& [a2, s2] : right) {
                    auto it = idx.edge_kb.find(kb_edge_key(a1, p, a2));
                    if (it == idx.edge_kb.end()) continue;
                    for (const auto& posting : it->second) candidates.insert(posting.table_id);
                }
    };
    auto probe_synth = [&](const Scores& rs) {
        for (const auto& [id, s] : rs) {
            auto it = idx.edge_synth.find(id);
            if (it == idx.edge_synth.end()) continue;
            for (const auto& posting : it->second) candidates.insert(posting.table_id);
        }
    };
    for (const auto& edge : tree.edges) {
        const auto& parent = tree.columns.at(edge.parent);
        const auto& child = tree.columns.at(edge.child);
        if (mode != SearchMode::SynthOnly) {
            probe_kb(parent.kb, edge.kb_fwd, child.kb);
            probe_kb(child.kb, edge.kb_rev, parent.kb);
        }
        if (mode != SearchMode::KbOnly) {
            probe_synth(edge.synth_fwd);
            probe_synth(edge.synth_rev);
        }
    }

    const QueryColumn& intent = tree.columns.at(tree.root);
    static const Scores kEmpty;

    std::vector<QueryEdgeSemantics> edge_sems;
    edge_sems.reserve(tree.edges.size());
    for (const auto& edge : tree.edges) {
        QueryEdgeSemantics qsem;
        qsem.parent_kb = tree.columns.at(edge.parent).kb;
        qsem.child_kb = tree.columns.at(edge.child).kb;
        qsem.rs_kb_fwd = edge.kb_fwd;
        qsem.rs_kb_rev = edge.kb_rev;
        qsem.parent_synth = tree.columns.at(edge.parent).synth;
        qsem.child_synth = tree.columns.at(edge.child).synth;
        qsem.rs_synth_fwd = edge.synth_fwd;
        qsem.rs_synth_rev = edge.synth_rev;
        edge_sems.push_back(std::move(qsem));
    }

    std::vector<RankedResult> results;
    for (const auto& table_id : candidates) {
        const TableView& view = views.at(table_id);

        RankedResult best;
        best.table_id = table_id;
        bool have_root = false;

        for (int root : view.semantic_columns) {
            bool kb_root = mode != SearchMode::SynthOnly &&
                           view.kb_cs.count(root) && intersects(intent.kb, view.kb_cs.at(root));
            bool synth_root = mode != SearchMode::KbOnly && view.synth_cs.count(root) &&
                              intersects(intent.synth, view.synth_cs.at(root));
            if (!kb_root && !synth_root) continue;

            std::map<int, int> q2t = {{tree.root, root}};
            std::set<int> consumed = {root};
            double total = 0.0;
            std::vector<MatchedEdge> matched;

            for (std::size_t e = 0; e < tree.edges.size(); ++e) {
                const QueryEdge& edge = tree.edges[e];
                const QueryEdgeSemantics& qsem = edge_sems[e];
                auto uit = q2t.find(edge.parent);
                if (uit == q2t.end()) continue;
                int tu = uit->second;

                int best_child = -1;
                PairMatchOutcome best_outcome;
                for (int x : view.semantic_columns) {
                    if (x == tu || consumed.count(x)) continue;
                    TableEdgeSemantics tsem;
                    if (const auto* combos = find_combos(view.kb_edges, tu, x))
                        tsem.kb_fwd = *combos;
                    if (const auto* combos = find_combos(view.kb_edges, x, tu))
                        tsem.kb_rev = *combos;
                    auto cit = view.synth_cs.find(tu);
                    tsem.parent_synth = cit == view.synth_cs.end() ? kEmpty : cit->second;
                    cit = view.synth_cs.find(x);
                    tsem.child_synth = cit == view.synth_cs.end() ? kEmpty : cit->second;
                    if (const auto* scores = find_scores(view.synth_edges, tu, x))
                        tsem.rs_synth_fwd = *scores;
                    if (const auto* scores = find_scores(view.synth_edges, x, tu))
                        tsem.rs_synth_rev = *scores;

                    PairMatchOutcome outcome = pair_match(kb, qsem, tsem, mode);
                    if (outcome.score > best_outcome.score) {
                        best_outcome = outcome;
                        best_child = x;
                    }
                }
                if (best_child >= 0 && best_outcome.score > 0) {
                    q2t[edge.child] = best_child;
                    consumed.insert(best_child);
                    total += best_outcome.score;
                    MatchedEdge me;
                    me.query_parent = edge.parent;
                    me.query_child = edge.child;
                    me.table_parent = tu;
                    me.table_child = best_child;
                    me.source = best_outcome.source;
                    me.score = best_outcome.score;
                    me.kb_a1 = best_outcome.kb_a1;
                    me.kb_pred = best_outcome.kb_pred;
                    me.kb_a2 = best_outcome.kb_a2;
                    me.synth_rel = best_outcome.synth_rel;
                    matched.push_back(std::move(me));
                }
            }

            if (!have_root || total > best.score) {
                have_root = true;
                best.score = total;
                best.root_column = root;
                best.matched_edges = std::move(matched);
            }
        }

        if (have_root && best.score > 0) results.push_back(std::move(best));
    }

    std::sort(results.begin(), results.end(), [](const RankedResult& a, const RankedResult& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.table_id < b.table_id;
    });
    if (results.size() > static_cast<std::size_t>(k)) results.resize(static_cast<std::size_t>(k));
    return results;
}

std::string results_to_tsv(const std::vector<RankedResult>& results) {
    std::string out = "rank\ttable_id\tscore\troot_column\tmatched_edge_count\n";
    int rank = 1;
    for (const auto& r : results) {
        out += std::to_string(rank++) + "\t" + r.table_id + "\t" + format_score(r.score) + "\t" +
               std::to_string(r.root_column) + "\t" + std::to_string(r.matched_edges.size()) +
               "\n";
    }
    return out;
}

} // namespace santos
