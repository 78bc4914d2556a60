#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tabclust/benchcli/config.hpp"
#include "tabclust/benchcli/ledger.hpp"
#include "tabclust/benchcli/runner.hpp"
#include "tabclust/benchcli/tables.hpp"
#include "tabclust/dataio/csv.hpp"
#include "tabclust/errors.hpp"
#include "test_util.hpp"

using namespace tabclust;
using namespace tabclust::bench;
using nlohmann::json;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

json small_config(const std::filesystem::path& out, std::vector<std::string> methods) {
    return {{"datasets",
             {{{"name", "blobs"}, {"synthetic", {{"n", 100}, {"dim", 4}, {"k", 3}, {"separation", 20}, {"seed", 1}}}},
              {{"name", "blobs2"}, {"synthetic", {{"n", 60}, {"dim", 3}, {"k", 2}, {"separation", 10}, {"seed", 2}}}}}},
            {"methods", methods},
            {"gamma_grid", {0.1, 1.0}},
            {"epochs", 2},
            {"pretrain_epochs", 2},
            {"seed", 17},
            {"output_dir", out.string()}};
}

std::string config_error(const json& j) {
    try {
        parse_config(j);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

const std::vector<std::string> kOutputs{"results.csv", "accuracy_table.csv", "accuracy_table.md", "rank_table.csv",
                                        "rank_table.md"};

}  // namespace

TEST_SUITE("benchcli") {
    TEST_CASE("config parsing and validation") {
        auto j = small_config("out", {"kmeans", "gmm", "idec"});
        const auto c = parse_config(j, "/base");
        CHECK(c.datasets.size() == 2);
        CHECK(c.methods == std::vector<eval::MethodId>{eval::MethodId::kmeans, eval::MethodId::gmm, eval::MethodId::idec});
        CHECK(c.output_dir == std::filesystem::path("/base/out"));
        CHECK(candidate_grid(c, eval::MethodId::idec).size() == 2);
        CHECK(candidate_grid(c, eval::MethodId::kmeans).size() == 1);
        CHECK(candidate_grid(c, eval::MethodId::dec).size() == 1);
        CHECK(candidate_grid(c, eval::MethodId::idec)[1].gamma == 1.0);
        CHECK(candidate_grid(c, eval::MethodId::idec)[0].epochs == 2);

        auto bad = j;
        bad["methods"] = {"kmeans", "spectral"};
        CHECK(config_error(bad).find("'spectral'") != std::string::npos);
        bad["methods"] = {"AECM"};
        CHECK(config_error(bad).find("unsupported") != std::string::npos);
        bad["methods"] = {"dynae"};
        CHECK(config_error(bad).find("unsupported") != std::string::npos);
        bad = j;
        bad["colour"] = "blue";
        CHECK(config_error(bad).find("colour") != std::string::npos);
        bad = j;
        bad["epochs"] = 0;
        CHECK(!config_error(bad).empty());
        bad = j;
        bad["gamma_grid"] = json::array();
        CHECK(!config_error(bad).empty());
        bad["methods"] = {"kmeans"};
        CHECK(config_error(bad).empty());
        bad = j;
        bad["methods"] = json::array();
        CHECK(!config_error(bad).empty());
        bad = j;
        bad["datasets"][1]["name"] = "blobs";
        CHECK(config_error(bad).find("duplicate") != std::string::npos);
    }

    TEST_CASE("fingerprint ignores parallelism and output directory") {
        auto j = small_config("out", {"kmeans"});
        const auto a = parse_config(j).fingerprint();
        j["parallelism"] = 4;
        j["output_dir"] = "elsewhere";
        CHECK(parse_config(j).fingerprint() == a);
        j["seed"] = 18;
        CHECK(parse_config(j).fingerprint() != a);
    }

    TEST_CASE("manifest paths resolve against the config directory") {
        const auto dir = testutil::scratch_dir("cfg");
        std::filesystem::create_directories(dir / "data");
        std::ofstream(dir / "data" / "m.json") << R"({"name": "tiny", "path": "t.csv", "label_column": "y"})";
        std::ofstream(dir / "cfg.json") << R"({"datasets": ["data/m.json"], "methods": ["kmeans"]})";
        const auto c = load_config(dir / "cfg.json");
        CHECK(c.datasets[0].manifest->path == dir / "data" / "t.csv");
        CHECK(c.output_dir == dir / "bench_out");
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("BENCH_THREADS overrides the configured parallelism") {
        BenchmarkConfig c;
        c.parallelism = 2;
        ::unsetenv("BENCH_THREADS");
        CHECK(effective_parallelism(c) == 2);
        ::setenv("BENCH_THREADS", "5", 1);
        CHECK(effective_parallelism(c) == 5);
        ::setenv("BENCH_THREADS", "zero", 1);
        CHECK_THROWS_AS(effective_parallelism(c), ConfigError);
        ::unsetenv("BENCH_THREADS");
    }

    TEST_CASE("cell format") {
        CHECK(format_cell(90.157, 4.25) == "90.2 (4.3)");
        CHECK(format_cell(100.0, 0.0) == "100.0 (0.0)");
    }

    TEST_CASE("smallest pipeline: one synthetic dataset, k-means and GMM") {
        const auto dir = testutil::scratch_dir("bench");
        auto j = small_config(dir / "out", {"kmeans", "gmm"});
        j["datasets"].erase(1);
        const auto summary = run_benchmark(parse_config(j));
        CHECK(summary.exit_code == kExitOk);
        CHECK(summary.units_total == 10);
        const auto acc = data::parse_csv(slurp(dir / "out" / "accuracy_table.csv"));
        CHECK(acc.header == std::vector<std::string>{"method", "blobs"});
        REQUIRE(acc.rows.size() == 2);
        CHECK(acc.rows[0][0] == "K-means");
        CHECK(acc.rows[1][0] == "GMM");
        CHECK(acc.rows[0][1] == "100.0 (0.0)");
        const auto rank = slurp(dir / "out" / "rank_table.md");
        CHECK(rank.find("Average") != std::string::npos);
        CHECK(rank.find("Overall rank") != std::string::npos);
        const auto results = data::parse_csv(slurp(dir / "out" / "results.csv"));
        CHECK(results.header == std::vector<std::string>{"dataset", "method", "fold", "accuracy", "chosen_gamma", "seed"});
        CHECK(results.rows.size() == 10);
        CHECK(results.rows[0][4] == "na");
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("interrupted and resumed run equals an uninterrupted one at any parallelism") {
        const auto dir = testutil::scratch_dir("bench");
        const std::vector<std::string> methods{"kmeans", "idec", "gmm"};

        auto full = parse_config(small_config(dir / "full", methods));
        const auto s1 = run_benchmark(full);
        REQUIRE(s1.exit_code == kExitOk);
        CHECK(s1.units_total == 2 * (5 + 10 + 5));
        CHECK(std::filesystem::exists(dir / "full" / "histories" / "blobs_idec_fold0_cand1.csv"));

        auto parts = parse_config(small_config(dir / "parts", methods));
        RunOptions stop;
        stop.max_units = 13;
        const auto s2 = run_benchmark(parts, stop);
        CHECK(s2.interrupted);
        CHECK(!std::filesystem::exists(dir / "parts" / "results.csv"));
        RunOptions resume;
        resume.resume = true;
        resume.max_units = 9;
        CHECK(run_benchmark(parts, resume).interrupted);
        resume.max_units.reset();
        const auto s3 = run_benchmark(parts, resume);
        CHECK(!s3.interrupted);
        CHECK(s3.units_skipped == 22);
        CHECK(s3.exit_code == kExitOk);

        auto wide = parse_config(small_config(dir / "wide", methods));
        wide.parallelism = 3;
        CHECK(run_benchmark(wide).exit_code == kExitOk);

        for (const auto& f : kOutputs) {
            CHECK_MESSAGE(slurp(dir / "full" / f) == slurp(dir / "parts" / f), f);
            CHECK_MESSAGE(slurp(dir / "full" / f) == slurp(dir / "wide" / f), f);
        }

        // report regenerates the same tables from results.csv alone
        std::filesystem::remove(dir / "parts" / "rank_table.md");
        emit_tables(dir / "parts");
        CHECK(slurp(dir / "full" / "rank_table.md") == slurp(dir / "parts" / "rank_table.md"));

        auto other = small_config(dir / "parts", methods);
        other["seed"] = 99;
        CHECK_THROWS_AS(run_benchmark(parse_config(other), resume), ConfigError);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("tables refuse incomplete results") {
        const auto dir = testutil::scratch_dir("bench");
        std::vector<ResultRow> rows;
        for (std::size_t f = 0; f < 5; ++f) rows.push_back({"flat", "kmeans", f, 80.0, std::nullopt, 1});
        for (std::size_t f = 0; f < 3; ++f) rows.push_back({"flat", "gmm", f, 70.0, std::nullopt, 1});
        write_results_csv(dir / "results.csv", rows);
        CHECK(read_results_csv(dir / "results.csv").size() == 8);
        try {
            emit_tables(dir);
            FAIL("expected an incomplete-results error");
        } catch (const DataError& e) {
            CHECK(std::string(e.what()).find("flat/gmm") != std::string::npos);
        }
        CHECK(!std::filesystem::exists(dir / "rank_table.csv"));
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("dataset problems surface as data errors") {
        const auto dir = testutil::scratch_dir("bench");
        json j{{"datasets", {{{"name", "gone"}, {"path", "missing.csv"}, {"label_column", "y"}}}},
               {"methods", {"kmeans"}},
               {"output_dir", "out"}};
        CHECK_THROWS_AS(run_benchmark(parse_config(j, dir)), DataError);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("ledger keeps the latest record per unit and tolerates a torn line") {
        const auto dir = testutil::scratch_dir("ledger");
        {
            auto l = RunLedger::create(dir / "l.jsonl", "abc");
            UnitRecord r;
            r.dataset = "d";
            r.method = "idec";
            r.status = UnitStatus::failed;
            r.error = "boom";
            l.append(r);
            r.status = UnitStatus::done;
            r.test_accuracy = 87.5;
            r.gamma = 0.1;
            l.append(r);
        }
        std::ofstream(dir / "l.jsonl", std::ios::app) << "{\"type\": \"unit\", \"data";
        auto l = RunLedger::resume(dir / "l.jsonl", "abc");
        const auto r = l.find("d", "idec", 0, 0);
        REQUIRE(r);
        CHECK(r->status == UnitStatus::done);
        CHECK(r->test_accuracy == 87.5);
        CHECK(*r->gamma == 0.1);
        CHECK_THROWS_AS(RunLedger::resume(dir / "l.jsonl", "xyz"), ConfigError);
        std::filesystem::remove_all(dir);
    }
}
