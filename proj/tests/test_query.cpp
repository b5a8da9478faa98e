#include <doctest.h>

#include "santos/errors.hpp"
#include "santos/query.hpp"

#include "oracle.hpp"
#include "testutil.hpp"

using namespace santos;

namespace {

struct DemoWorld {
    KbStore kb;
    std::vector<LakeTable> lake;
    SearchIndex idx;
    LakeTable query;

    DemoWorld()
        : kb(load_kb(testutil::fixture_dir() / "kb")),
          lake(ingest_lake(testutil::fixture_dir() / "lake")),
          idx(build_index(lake, kb, BuildOptions{})),
          query(ingest_table(testutil::fixture_dir() / "query" / "parks.csv")) {}
};

} // namespace

TEST_CASE("col_match basics") {
    CHECK(col_match({{"a", 1.0}}, {{"b", 1.0}}).score == 0.0);
    CHECK(col_match({{"a", 1.0}}, {{"a", 1.0}}).score == doctest::Approx(1.0));

    auto m = col_match({{"city", 0.6}, {"place", 1.0}}, {{"city", 0.132}, {"place", 0.14}});
    CHECK(m.score == doctest::Approx(0.14)); // max(0.6*0.132, 1.0*0.14)
    CHECK(m.winner == "place");
}

TEST_CASE("rel_match orientation flip") {
    CHECK(rel_match({{"locatedin", 1.0}}, {}, {{"locatedin", 1.0}}, {}).score ==
          doctest::Approx(1.0));
    CHECK(rel_match({{"a", 1.0}}, {}, {{"b", 1.0}}, {}).score == 0.0);

    // forward direction empty on the table side; the reverse carries it
    auto m = rel_match({{"p", 0.0}}, {{"p", 0.9}}, {}, {{"p", 0.8}});
    CHECK(m.score == doctest::Approx(0.72));
    CHECK(m.winner == "p");
}

TEST_CASE("pair_match inter-method selection and flip") {
    // kb side: colMatch 0.48, relMatch 0.893, second colMatch 1.0
    // synth side: colMatches 1.0, relMatch 0.166*0.552
    KbStore kb;
    kb.type_counts = {{"park", 32}, {"city", 32}}; // gs = 0.664385 each

    QueryEdgeSemantics q;
    q.parent_kb = {{"park", 0.8}};
    q.child_kb = {{"city", 1.0}};
    q.rs_kb_fwd = {{"locatedin", 1.0}};
    q.parent_synth = {{"CS(w)", 1.0}};
    q.child_synth = {{"CS(x)", 1.0}};
    q.rs_synth_fwd = {{"RS(y,z)", 0.166}};

    TableEdgeSemantics t;
    t.kb_fwd = combos_from_semantics({{"park", 0.6}}, {{"locatedin", 0.893}}, {{"city", 1.0}});
    t.parent_synth = {{"CS(w)", 1.0}};
    t.child_synth = {{"CS(x)", 1.0}};
    t.rs_synth_fwd = {{"RS(y,z)", 0.552}};

    auto out = pair_match(kb, q, t, SearchMode::Full);
    CHECK(out.kb_score == doctest::Approx(0.48 * 0.893));
    CHECK(out.synth_score == doctest::Approx(0.166 * 0.552));
    CHECK(out.source == Source::KB);
    CHECK(out.score == doctest::Approx(0.48 * 0.893));
    CHECK(out.kb_a1 == "park");
    CHECK(out.kb_a2 == "city");

    // raising the synth side above kb/(gs*gs) flips the selection
    double gs = granularity_score(kb, "park");
    double threshold = (0.48 * 0.893) / (gs * gs);
    REQUIRE(threshold < 1.0);
    q.rs_synth_fwd = {{"RS(y,z)", 1.0}};
    t.rs_synth_fwd = {{"RS(y,z)", threshold + 0.005}};
    out = pair_match(kb, q, t, SearchMode::Full);
    CHECK(out.source == Source::Synth);
    CHECK(out.score == doctest::Approx(threshold + 0.005));
}

TEST_CASE("pair_match degenerate sides") {
    KbStore kb;
    QueryEdgeSemantics q;
    TableEdgeSemantics t;
    auto out = pair_match(kb, q, t, SearchMode::Full);
    CHECK(out.score == 0.0); // both sides zero: edge unmatched

    q.parent_kb = {{"a", 1.0}};
    q.child_kb = {{"b", 1.0}};
    q.rs_kb_fwd = {{"p", 1.0}};
    kb.type_counts = {{"a", 100}, {"b", 100}};
    t.kb_fwd = combos_from_semantics({{"a", 0.5}}, {{"p", 1.0}}, {{"b", 0.5}});
    out = pair_match(kb, q, t, SearchMode::Full);
    CHECK(out.source == Source::KB); // synth side zero simply loses
    CHECK(out.score == doctest::Approx(0.25));
}

TEST_CASE("query tree for the parks query") {
    DemoWorld w;
    auto tree = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    CHECK(tree.root == 0);
    REQUIRE(tree.edges.size() == 3);

    // park name -- ledby -- supervisor, park name -- locatedin -- city
    CHECK(tree.edges[0].parent == 0);
    CHECK(tree.edges[0].child == 1);
    CHECK(tree.edges[0].kb_fwd.count("ledby") == 1);
    CHECK(tree.edges[1].parent == 0);
    CHECK(tree.edges[1].child == 2);
    CHECK(tree.edges[1].kb_fwd.count("locatedin") == 1);
    // transitive: city -- locatedin -- country
    CHECK(tree.edges[2].parent == 2);
    CHECK(tree.edges[2].child == 3);
    CHECK(tree.edges[2].kb_fwd.count("locatedin") == 1);
}

TEST_CASE("query tree degenerate cases") {
    DemoWorld w;
    testutil::TempDir tmp;
    auto single = testutil::make_table(tmp.path(), "single", {{"City"}, {"Boston"}, {"Dallas"}});
    auto tree = build_query_tree(single, 0, w.kb, w.idx.synth);
    CHECK(tree.edges.empty());
    CHECK(tree.columns.size() == 1);

    auto numeric =
        testutil::make_table(tmp.path(), "numeric", {{"n", "City"}, {"1", "Boston"}, {"2", "Dallas"}});
    CHECK_THROWS_AS(build_query_tree(numeric, 0, w.kb, w.idx.synth), IntentNotTextualError);

    auto unknown =
        testutil::make_table(tmp.path(), "unknown", {{"a", "b"}, {"zz1", "zz2"}, {"zz3", "zz4"}});
    CHECK_THROWS_AS(build_query_tree(unknown, 0, w.kb, w.idx.synth), EmptyIntentSemanticsError);
}

TEST_CASE("parks query ranks parks-films above famous-people") {
    DemoWorld w;
    auto tree = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    auto results = search_top_k(w.idx, w.kb, tree, 10, SearchMode::Full);

    REQUIRE(results.size() == 2);
    CHECK(results[0].table_id == "parks_films");
    CHECK(results[1].table_id == "famous_people");
    CHECK(results[0].score > results[1].score);
    CHECK(results[0].root_column == 0);

    // k truncation
    auto top1 = search_top_k(w.idx, w.kb, tree, 1, SearchMode::Full);
    REQUIRE(top1.size() == 1);
    CHECK(top1[0].table_id == "parks_films");
}

TEST_CASE("score equals the sum of matched edges") {
    DemoWorld w;
    auto tree = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    for (const auto& r : search_top_k(w.idx, w.kb, tree, 10, SearchMode::Full)) {
        double sum = 0;
        for (const auto& e : r.matched_edges) sum += e.score;
        CHECK(r.score == doctest::Approx(sum).epsilon(1e-12));
        CHECK(r.score >= 0.0);
    }
}

TEST_CASE("removing a query edge never raises a score") {
    DemoWorld w;
    auto tree = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    auto full = search_top_k(w.idx, w.kb, tree, 10, SearchMode::Full);
    std::map<std::string, double> full_scores;
    for (const auto& r : full) full_scores[r.table_id] = r.score;

    for (std::size_t drop = 0; drop < tree.edges.size(); ++drop) {
        auto pruned = tree;
        pruned.edges.erase(pruned.edges.begin() + static_cast<long>(drop));
        for (const auto& r : search_top_k(w.idx, w.kb, pruned, 10, SearchMode::Full))
            CHECK(r.score <= full_scores.at(r.table_id) + 1e-12);
    }
}

TEST_CASE("full mode dominates single-source modes on the fixtures") {
    DemoWorld w;
    auto tree = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    std::map<std::string, double> full, kb_only, synth_only;
    for (const auto& r : search_top_k(w.idx, w.kb, tree, 10, SearchMode::Full))
        full[r.table_id] = r.score;
    for (const auto& r : search_top_k(w.idx, w.kb, tree, 10, SearchMode::KbOnly))
        kb_only[r.table_id] = r.score;
    for (const auto& r : search_top_k(w.idx, w.kb, tree, 10, SearchMode::SynthOnly))
        synth_only[r.table_id] = r.score;
    for (const auto& [table, score] : kb_only) CHECK(full[table] >= score - 1e-12);
    for (const auto& [table, score] : synth_only) CHECK(full[table] >= score - 1e-12);
}

TEST_CASE("ranking is invariant under duplicated query rows") {
    DemoWorld w;
    testutil::TempDir tmp;
    std::vector<std::vector<std::string>> records = {{"Park Name", "Supervisor", "City", "Country"}};
    for (int rep = 0; rep < 3; ++rep) {
        for (const auto& row : w.query.rows) records.push_back(row);
    }
    auto doubled = testutil::make_table(tmp.path(), "parks", records);

    auto tree1 = build_query_tree(w.query, 0, w.kb, w.idx.synth);
    auto tree2 = build_query_tree(doubled, 0, w.kb, w.idx.synth);
    auto r1 = search_top_k(w.idx, w.kb, tree1, 10, SearchMode::Full);
    auto r2 = search_top_k(w.idx, w.kb, tree2, 10, SearchMode::Full);
    REQUIRE(r1.size() == r2.size());
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].table_id == r2[i].table_id);
        CHECK(r1[i].score == doctest::Approx(r2[i].score).epsilon(1e-12));
    }
}

TEST_CASE("index search equals the full-scan reference on toy worlds") {
    for (unsigned seed : {42u, 43u, 44u}) {
        std::mt19937 rng(seed);
        testutil::TempDir tmp;
        auto world = oracle::write_toy_world(tmp.path(), rng);
        int tables = 3 + static_cast<int>(rng() % 5);
        for (int t = 0; t < tables; ++t) {
            auto recs = oracle::random_table_records(world, rng, 60);
            std::string text;
            for (const auto& rec : recs) {
                for (std::size_t i = 0; i < rec.size(); ++i)
                    text += (i ? "," : "") + rec[i];
                text += "\n";
            }
            testutil::write_file(world.lake_dir / ("t" + std::to_string(t) + ".csv"), text);
        }
        auto kb = load_kb(world.kb_dir);
        auto lake = ingest_lake(world.lake_dir);
        auto idx = build_index(lake, kb, BuildOptions{});

        SearchMode mode = seed % 3 == 0   ? SearchMode::Full
                          : seed % 3 == 1 ? SearchMode::KbOnly
                                          : SearchMode::SynthOnly;
        oracle::TableFlavor flavor = mode == SearchMode::Full     ? oracle::TableFlavor::Any
                                     : mode == SearchMode::KbOnly ? oracle::TableFlavor::Fact
                                                                  : oracle::TableFlavor::Synth;

        LakeTable query;
        int intent = 0;
        QuerySemanticTree tree;
        for (int attempt = 0;; ++attempt) {
            REQUIRE(attempt < 50);
            auto recs = oracle::random_table_records(world, rng, 30, flavor);
            std::string text;
            for (const auto& rec : recs) {
                for (std::size_t i = 0; i < rec.size(); ++i) text += (i ? "," : "") + rec[i];
                text += "\n";
            }
            testutil::write_file(tmp / "query.csv", text);
            query = ingest_table(tmp / "query.csv");
            try {
                tree = build_query_tree(query, intent, kb, idx.synth);
                break;
            } catch (const std::exception&) {
                continue;
            }
        }
        auto engine = search_top_k(idx, kb, tree, 10, mode);
        auto reference = oracle::brute_force_search(lake, kb, query, intent, 10, mode);

        REQUIRE(engine.size() == reference.size());
        for (std::size_t i = 0; i < engine.size(); ++i) {
            CHECK(engine[i].table_id == reference[i].table_id);
            CHECK(engine[i].score == reference[i].score);
            CHECK(engine[i].root_column == reference[i].root_column);
        }
    }
}

TEST_CASE("searching an empty index yields an empty list") {
    DemoWorld w;
    testutil::TempDir tmp;
    std::filesystem::create_directory(tmp / "lake");
    auto empty_idx = build_index(tmp / "lake", testutil::fixture_dir() / "kb", BuildOptions{});
    auto tree = build_query_tree(w.query, 0, w.kb, empty_idx.synth);
    CHECK(search_top_k(empty_idx, w.kb, tree, 5, SearchMode::Full).empty());
}

TEST_CASE("results tsv format") {
    std::vector<RankedResult> results(1);
    results[0].table_id = "t1";
    results[0].score = 2.0 / 3.0;
    results[0].root_column = 2;
    auto tsv = results_to_tsv(results);
    CHECK(tsv == "rank\ttable_id\tscore\troot_column\tmatched_edge_count\n"
                 "1\tt1\t0.666666666667\t2\t0\n");
}
