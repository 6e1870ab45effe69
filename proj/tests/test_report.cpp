#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "entangle/report.hpp"
#include "json.hpp"
#include "test_support.hpp"

using namespace entangle;
namespace fs = std::filesystem;

namespace {

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(testing::slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string f;
        while (std::getline(ls, f, ',')) fields.push_back(f);
        rows.push_back(fields);
    }
    return rows;
}

RunConfig synthetic_run(const fs::path& out) {
    RunConfig c;
    c.manifest = testing::synthetic_manifest();
    c.output_dir = out;
    return c;
}

}  // namespace

TEST_CASE("run config validation") {
    RunConfig c = synthetic_run("unused");
    CHECK_NOTHROW(validate(c));
    c.window_sizes = {};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.window_sizes = {5, 0};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.window_sizes = {5, 10, 5};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.window_sizes = {5};
    c.methods = {};
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
    c.methods = {RelevanceMethod::tfidf};
    c.k = 3;
    CHECK_THROWS_AS(validate(c), std::invalid_argument);
}

TEST_CASE("file stems") {
    CHECK(file_stem("topic 3/a") == "topic_3_a");
    CHECK(file_stem("wsj-87.x") == "wsj-87.x");
    CHECK(file_stem("") == "_");
}

TEST_CASE("empty topic list") {
    testing::TempDir dir("notopics");
    RunConfig c = synthetic_run(dir.path() / "out");
    c.manifest = dir.write("m.json", R"({"topics":[]})");
    CHECK_THROWS_WITH_AS(run_analyze(c), doctest::Contains("no topics"), CorpusError);
}

TEST_CASE("analyze on the bundled corpus matches the oracle and writes every file") {
    testing::TempDir dir("analyze");
    const auto config = synthetic_run(dir.path());
    const auto result = run_analyze(config);
    const auto expected =
        nlohmann::json::parse(testing::slurp(testing::source_dir() / "tests/data/planted_expected.json"));

    std::map<std::pair<std::string, std::string>, nlohmann::json> want;  // (topic, method)
    for (const auto& t : expected["topics"])
        for (const auto& [m, e] : t["methods"].items()) want[{t["topic_id"], m}] = e;

    REQUIRE(result.topics.size() == 3);
    for (const auto& topic : result.topics) {
        CHECK(topic.cells.size() == 6);
        for (const auto& [key, cell] : topic.cells) {
            const auto& e = want.at({topic.topic_id, std::string(to_string(key.second))});
            const auto& c = e["cells"][std::to_string(key.first)];
            CHECK(cell.proportion.n_pairs_entangled == c["n_entangled"].get<std::size_t>());
            CHECK(cell.proportion.n_pairs_total == 44100);
            CHECK(cell.proportion.p == c["p"].get<double>());
            CHECK(cell.proportion.p >= 0.0);
            CHECK(cell.proportion.p <= 1.0);
        }
    }

    for (const auto* method : {"frequency", "tfidf"}) {
        const auto rows = read_csv(dir.path() / (std::string("summary_") + method + ".csv"));
        REQUIRE(rows.size() == 1 + 3 * 3);
        CHECK(rows[0] == std::vector<std::string>{"topic_id", "method", "W", "p", "n_entangled",
                                                  "n_pairs", "monotone_in_W"});
        // Sorted by p at W = 5, descending.
        double last = 2.0;
        for (std::size_t r = 1; r < rows.size(); r += 3) {
            CHECK(rows[r][2] == "5");
            const double p5 = std::stod(rows[r][3]);
            CHECK(p5 <= last);
            last = p5;
            const auto& e = want.at({rows[r][0], method});
            for (std::size_t k = 0; k < 3; ++k) {
                const auto& row = rows[r + k];
                CHECK(row[4] == std::to_string(e["cells"][row[2]]["n_entangled"].get<std::size_t>()));
                CHECK(row[5] == "44100");
            }
        }
        const auto hist = read_csv(dir.path() / (std::string("histograms_") + method + ".csv"));
        CHECK(hist[0] == std::vector<std::string>{"topic_id", "method", "W", "n", "count"});
    }

    CHECK(result.files.size() == 2 * 2 + 3 * 2 + 3 * 6 * 2);
    for (const auto& f : result.files) CHECK(fs::is_regular_file(f));

    const auto j = nlohmann::json::parse(testing::slurp(dir.path() / "results/astronomy_tfidf_W5.json"));
    CHECK(j["W"] == 5);
    CHECK(j["method"] == "tfidf");
    CHECK(j["n_pairs"] == 44100);
    REQUIRE(!j["top_violations"].empty());
    const auto& v = j["top_violations"][0];
    CHECK(v["partition"].contains("A'"));
    CHECK(std::fabs(v["S"].get<double>()) > 2.0);
}

TEST_CASE("topic ordering and monotonicity flags") {
    auto cell_with = [](double p) {
        CellResult c;
        c.proportion.p = p;
        return c;
    };
    AnalyzeResult r;
    for (const auto& [id, p5, p10] : {std::tuple{"b", 0.3, 0.1}, std::tuple{"a", 0.3, 0.3},
                                      std::tuple{"c", 0.5, 0.2}}) {
        TopicReport t{id, {}, {}};
        t.cells.emplace(std::pair{std::size_t{5}, RelevanceMethod::frequency}, cell_with(p5));
        t.cells.emplace(std::pair{std::size_t{10}, RelevanceMethod::frequency}, cell_with(p10));
        r.topics.push_back(std::move(t));
    }
    const auto order = sorted_topics(r, RelevanceMethod::frequency);
    CHECK(order[0]->topic_id == "c");
    CHECK(order[1]->topic_id == "a");
    CHECK(order[2]->topic_id == "b");
    CHECK(r.topics[0].monotone_in_w(RelevanceMethod::frequency));
    CHECK_FALSE(r.topics[1].monotone_in_w(RelevanceMethod::frequency));
}

TEST_CASE("simulate writes the curve and its sidecar") {
    testing::TempDir dir("simulate");
    SimulateConfig c;
    c.grid = {0.3, 0.7};
    c.bounds = {10, 50};
    c.samples = 200;
    c.out = dir.path() / "nested" / "curves.csv";
    const auto curves = run_simulate(c);
    CHECK(curves.estimates.size() == 4);
    const auto rows = read_csv(c.out);
    CHECK(rows.size() == 5);
    const auto meta = nlohmann::json::parse(testing::slurp(c.out.string() + ".json"));
    CHECK(meta["seed"] == 42);
    CHECK(meta["points"] == 4);
    CHECK(meta["tool_version"] == std::string(kToolVersion));
}

TEST_CASE("selftest passes and its negative control trips") {
    const auto good = run_selftest();
    CHECK(good.size() == 6);
    for (const auto& c : good) CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);

    const auto bad = run_selftest({true});
    std::map<std::string, bool> by_name;
    for (const auto& c : bad) by_name[c.name] = c.passed;
    CHECK_FALSE(by_name.at("576 vs 144 partition equivalence"));
    CHECK_FALSE(by_name.at("partition table structure"));
    CHECK(by_name.at("large/small violating pattern"));

    std::ostringstream os;
    print_selftest(os, bad);
    CHECK(os.str().find("FAIL") != std::string::npos);
}
