#include <doctest.h>

#include "santos/errors.hpp"
#include "santos/index.hpp"
#include "santos/semantics.hpp"

#include "testutil.hpp"

using namespace santos;

namespace {

SearchIndex fixture_index(BuildOptions options = {}) {
    return build_index(testutil::fixture_dir() / "lake", testutil::fixture_dir() / "kb", options);
}

} // namespace

TEST_CASE("edge index holds the person-birthplace-city triple") {
    auto idx = fixture_index();
    auto it = idx.edge_kb.find(kb_edge_key("person", "birthplace", "city"));
    REQUIRE(it != idx.edge_kb.end());
    REQUIRE(it->second.size() == 1);
    const auto& posting = it->second.front();
    CHECK(posting.table_id == "famous_people");
    CHECK(posting.left_column == 0);
    CHECK(posting.right_column == 2);
}

TEST_CASE("ablation: no synth leaves kb postings unchanged") {
    auto full = fixture_index();
    BuildOptions no_synth;
    no_synth.use_synth = false;
    auto kb_only = fixture_index(no_synth);

    CHECK(kb_only.synth.empty());
    CHECK(kb_only.node_synth.empty());
    CHECK(kb_only.edge_synth.empty());
    CHECK(kb_only.node_kb == full.node_kb);
    CHECK(kb_only.edge_kb == full.edge_kb);

    BuildOptions no_kb;
    no_kb.use_kb = false;
    auto synth_only = build_index(testutil::fixture_dir() / "lake", "", no_kb);
    CHECK(synth_only.node_kb.empty());
    CHECK(synth_only.edge_kb.empty());
    CHECK_FALSE(synth_only.edge_synth.empty());
}

TEST_CASE("empty lake directory builds an empty index") {
    testutil::TempDir tmp;
    std::filesystem::create_directory(tmp / "lake");
    auto idx = build_index(tmp / "lake", testutil::fixture_dir() / "kb", BuildOptions{});
    CHECK(idx.node_kb.empty());
    CHECK(idx.edge_kb.empty());
    CHECK(idx.meta.tables.empty());
    CHECK(idx.meta.stats.at("tables") == 0);
}

TEST_CASE("save and load round-trip identity") {
    testutil::TempDir tmp;
    auto idx = fixture_index();
    save_index(idx, tmp / "idx");
    auto loaded = load_index(tmp / "idx");
    CHECK(loaded == idx);

    CHECK_THROWS_AS(load_index(tmp / "missing"), IoError);
}

TEST_CASE("version mismatch is rejected") {
    testutil::TempDir tmp;
    auto idx = fixture_index();
    save_index(idx, tmp / "idx");
    auto meta = testutil::read_file(tmp / "idx" / "meta.json");
    auto pos = meta.find("\"format_version\": 1");
    REQUIRE(pos != std::string::npos);
    meta.replace(pos, std::string("\"format_version\": 1").size(), "\"format_version\": 99");
    testutil::write_file(tmp / "idx" / "meta.json", meta);
    CHECK_THROWS_AS(load_index(tmp / "idx"), VersionError);
}

TEST_CASE("two builds are byte-identical on disk") {
    testutil::TempDir tmp;
    save_index(fixture_index(), tmp / "a");
    save_index(fixture_index(), tmp / "b");
    for (const char* name : {"node_index.json", "edge_index.json", "synth_type_dict.json",
                             "synth_rel_dict.json", "meta.json"}) {
        CHECK(testutil::read_file(tmp / "a" / name) == testutil::read_file(tmp / "b" / name));
    }
}

TEST_CASE("postings are sorted and deduped per table") {
    auto idx = fixture_index();
    for (const auto* edge_map : {&idx.edge_kb, &idx.edge_synth}) {
        for (const auto& [key, postings] : *edge_map) {
            std::set<std::string> tables;
            for (std::size_t i = 0; i < postings.size(); ++i) {
                CHECK(tables.insert(postings[i].table_id).second); // one posting per table
                if (i > 0) CHECK(postings[i - 1].table_id < postings[i].table_id);
            }
        }
    }
    for (const auto* node_map : {&idx.node_kb, &idx.node_synth}) {
        for (const auto& [key, postings] : *node_map) {
            for (std::size_t i = 1; i < postings.size(); ++i) {
                auto prev = std::pair{postings[i - 1].table_id, postings[i - 1].column};
                auto cur = std::pair{postings[i].table_id, postings[i].column};
                CHECK(prev < cur);
            }
        }
    }
}

TEST_CASE("posting confidences equal recomputation from scratch") {
    auto idx = fixture_index();
    auto kb = load_kb(testutil::fixture_dir() / "kb");
    auto lake = ingest_lake(testutil::fixture_dir() / "lake");
    std::map<std::string, const LakeTable*> by_id;
    for (const auto& t : lake) by_id[t.table_id] = &t;

    for (const auto& [type, postings] : idx.node_kb) {
        for (const auto& p : postings) {
            auto cs = compute_column_semantics(kb, p.table_id, by_id.at(p.table_id)->column(p.column),
                                               Context::DataLake);
            CHECK(cs.annotations.at(type) == p.confidence);
        }
    }
    for (const auto& [key, postings] : idx.edge_kb) {
        for (const auto& p : postings) {
            auto rs = compute_relationship_semantics(kb, *by_id.at(p.table_id), p.left_column,
                                                     p.right_column);
            REQUIRE_FALSE(rs.empty());
            CHECK(rs.annotations.begin()->second == p.rel_conf);
        }
    }
}

TEST_CASE("complexity counters match the pair bound") {
    auto idx = fixture_index();
    auto kb = load_kb(testutil::fixture_dir() / "kb");
    auto lake = ingest_lake(testutil::fixture_dir() / "lake");

    std::int64_t expected_pairs = 0;
    std::int64_t expected_cols = 0;
    for (const auto& t : lake) {
        std::int64_t with_cs = 0;
        for (int c : t.textual_columns()) {
            ++expected_cols;
            if (!compute_column_semantics(kb, t.table_id, t.column(c), Context::DataLake).empty())
                ++with_cs;
        }
        expected_pairs += with_cs * (with_cs - 1);
    }
    CHECK(idx.meta.stats.at("cs_columns") == expected_cols);
    CHECK(idx.meta.stats.at("kb_pairs_scored") == expected_pairs);
}

TEST_CASE("edge dedup keeps the best-scoring pair per key") {
    // two column pairs of one table carry the same (person, birthplace,
    // city) key; the pair with the stronger confidences must survive
    testutil::TempDir tmp;
    std::filesystem::create_directory(tmp / "lake");
    testutil::write_file(tmp / "lake" / "people.csv",
                         "Person,CityA,CityB\n"
                         "George Washington,Boston,Boston\n"
                         "Emma Stone,Chicago,Chicago\n"
                         "Walt Disney,Dallas,Texas\n");
    auto idx = build_index(tmp / "lake", testutil::fixture_dir() / "kb", BuildOptions{});

    // CityA maps 3/3 values to city; CityB only 2/3, so pair (0,1) wins
    auto it = idx.edge_kb.find(kb_edge_key("person", "birthplace", "city"));
    REQUIRE(it != idx.edge_kb.end());
    REQUIRE(it->second.size() == 1);
    CHECK(it->second.front().left_column == 0);
    CHECK(it->second.front().right_column == 1);

    // the state annotation only exists on CityB's side
    it = idx.edge_kb.find(kb_edge_key("person", "birthplace", "state"));
    REQUIRE(it != idx.edge_kb.end());
    CHECK(it->second.front().right_column == 2);

    // equal scores: the smaller column pair is kept
    testutil::write_file(tmp / "lake" / "people.csv",
                         "Person,CityA,CityB\n"
                         "George Washington,Boston,Boston\n"
                         "Emma Stone,Chicago,Chicago\n"
                         "Walt Disney,Dallas,Dallas\n");
    idx = build_index(tmp / "lake", testutil::fixture_dir() / "kb", BuildOptions{});
    it = idx.edge_kb.find(kb_edge_key("person", "birthplace", "city"));
    REQUIRE(it != idx.edge_kb.end());
    REQUIRE(it->second.size() == 1);
    CHECK(it->second.front().right_column == 1);
}

TEST_CASE("broken tables are skipped, not fatal") {
    testutil::TempDir tmp;
    std::filesystem::create_directory(tmp / "lake");
    testutil::write_file(tmp / "lake" / "ok.csv", "a,b\nbrands park,moana\n");
    testutil::write_file(tmp / "lake" / "broken.csv", "a,b\nonly-one-field\n");
    auto idx = build_index(tmp / "lake", testutil::fixture_dir() / "kb", BuildOptions{});
    CHECK(idx.meta.stats.at("tables") == 1);
}
