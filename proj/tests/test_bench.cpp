#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "cluvrp/bench.hpp"
#include "oracles.hpp"

using namespace cluvrp;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("cluvrp-bench-" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

RunRecord rec(const std::string& inst, int n, const std::string& solver, const std::string& seed, double best,
              double time, double pre = 0, const std::string& status = "ok") {
    RunRecord r;
    r.instance = inst;
    r.n = n;
    r.clusters = 4;
    r.m = 2;
    r.solver = solver;
    r.seed = seed;
    r.best = best;
    r.avg = best;
    r.time = time;
    r.preproc_time = pre;
    r.status = status;
    return r;
}

std::vector<RunRecord> synthetic() {
    return {rec("A-n10-k2", 10, "ils", "1", 100, 2),     rec("A-n10-k2", 10, "ils", "2", 104, 4),
            rec("A-n10-k2", 10, "uhgs", "1", 102, 5, 1), rec("B_x", 12, "ils", "1", 210, 3),
            rec("B_x", 12, "uhgs", "1", 200, 6, 2),      rec("B_x", 12, "uhgs", "2", 0, 1, 0, "error: boom")};
}

const SummaryRow& row(const std::vector<SummaryRow>& rows, const std::string& group) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const SummaryRow& r) { return r.group == group; });
    REQUIRE(it != rows.end());
    return *it;
}

}  // namespace

TEST_CASE("percent deviation") {
    const PercentDev a = percent_dev(3736, 3693);
    CHECK(a.value == doctest::Approx(1.1643650149).epsilon(1e-9));
    CHECK(!a.improved);
    const PercentDev b = percent_dev(29051, 29087);
    CHECK(b.value < 0);
    CHECK(b.value == doctest::Approx(-0.1237666311).epsilon(1e-9));
    CHECK(b.improved);
    CHECK(percent_dev(50, 50).value == 0);
    CHECK_THROWS(percent_dev(10, 0));
}

TEST_CASE("record lines round trip") {
    RunRecord r = rec("Golden_1-C17", 240, "ils-clu", "3", 5623.47, 12.5, 0.25);
    r.avg = 5630.125;
    const RunRecord back = parse_record_line(record_line(r));
    CHECK(back.instance == r.instance);
    CHECK(back.n == 240);
    CHECK(back.solver == "ils-clu");
    CHECK(back.seed == "3");
    CHECK(back.best == r.best);
    CHECK(back.avg == r.avg);
    CHECK(back.time == r.time);
    CHECK(back.preproc_time == r.preproc_time);
    CHECK(back.ok());
    CHECK_THROWS(parse_record_line("a,b,c"));

    const auto dir = scratch_dir("csv");
    const std::string path = (dir / "runs.csv").string();
    write_records_csv(path, synthetic(), true);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == kRecordHeader);
    const auto all = read_records_csv(path);
    const long aggregates = std::count_if(all.begin(), all.end(), [](const RunRecord& x) { return x.seed == "*"; });
    CHECK(aggregates == 4);
    CHECK(all.size() == synthetic().size() + 4);
    CHECK(read_records_csv((dir / "missing.csv").string()).empty());
}

TEST_CASE("aggregate rows") {
    const auto agg = aggregate(synthetic());
    REQUIRE(agg.size() == 4);
    for (const auto& a : agg) CHECK(a.seed == "*");
    const auto it = std::find_if(agg.begin(), agg.end(),
                                 [](const RunRecord& x) { return x.instance == "A-n10-k2" && x.solver == "ils"; });
    REQUIRE(it != agg.end());
    CHECK(it->best == 100);
    CHECK(it->avg == 102);
    CHECK(it->time == 3);
}

TEST_CASE("BKS table") {
    const auto dir = scratch_dir("bks");
    const std::string path = (dir / "bks.csv").string();
    std::ofstream(path) << "instance,bks\n\nA-n10-k2,100\nGolden_1-C17,4331.39\n";
    const BksTable t = read_bks_csv(path);
    CHECK(t.size() == 2);
    CHECK(t.at("A-n10-k2") == 100);
    CHECK(t.at("Golden_1-C17") == 4331.39);
}

TEST_CASE("summary over synthetic records") {
    const BksTable bks{{"A-n10-k2", 100}};
    const auto rows = summarize(synthetic(), bks, GroupBy::Instance);
    REQUIRE(rows.size() == 3);
    CHECK(rows.back().group == "Tot");

    const auto& a = row(rows, "A-n10-k2");
    CHECK(a.by_solver.at("ils").bks == 1);
    CHECK(a.by_solver.at("ils").avg_dev == 0);
    CHECK(a.by_solver.at("ils").avg_time == 3);
    CHECK(a.by_solver.at("uhgs").bks == 0);
    CHECK(a.by_solver.at("uhgs").avg_dev == doctest::Approx(2.0));
    CHECK(a.by_solver.at("uhgs").avg_time == 4);
    CHECK(a.by_solver.at("uhgs").avg_time_total == 5);

    // no BKS entry: the best of any solver is the reference
    const auto& b = row(rows, "B_x");
    CHECK(b.by_solver.at("ils").bks == 0);
    CHECK(b.by_solver.at("ils").avg_dev == doctest::Approx(5.0));
    CHECK(b.by_solver.at("uhgs").bks == 1);
    CHECK(b.by_solver.at("uhgs").avg_time_total == 6);  // the failed run is ignored

    const auto& tot = row(rows, "Tot");
    CHECK(tot.instances == 2);
    CHECK(tot.by_solver.at("ils").bks == 1);
    CHECK(tot.by_solver.at("ils").avg_dev == doctest::Approx(2.5));
    CHECK(tot.by_solver.at("ils").avg_time == 3);
    CHECK(tot.by_solver.at("uhgs").avg_dev == doctest::Approx(1.0));
    CHECK(tot.by_solver.at("uhgs").avg_time_total == 5.5);

    const std::string md = summary_markdown(rows, {"ils", "uhgs"}, "Instance");
    CHECK(md.find("| Instance | Inst. |") == 0);
    CHECK(md.find("uhgs_p") != std::string::npos);
    CHECK(md.find("| Tot | 2 |") != std::string::npos);
    const std::string csv = summary_csv(rows, {"ils", "uhgs"});
    CHECK(csv.find("Tot,2,ils,1,") != std::string::npos);
}

TEST_CASE("summary does not depend on record order") {
    const BksTable bks{{"A-n10-k2", 100}};
    auto runs = synthetic();
    const std::string want = summary_markdown(summarize(runs, bks, GroupBy::Set), {"ils", "uhgs"}, "Set");
    Rng rng(1);
    for (int t = 0; t < 20; ++t) {
        std::shuffle(runs.begin(), runs.end(), rng);
        CHECK(summary_markdown(summarize(runs, bks, GroupBy::Set), {"ils", "uhgs"}, "Set") == want);
    }
    const auto rows = summarize(runs, bks, GroupBy::Set);
    CHECK(rows.size() == 3);
    CHECK(rows[0].group == "A");
    CHECK(rows[1].group == "B");
}

TEST_CASE("grouping keys") {
    CHECK(instance_set("Golden_1-C17") == "Golden");
    CHECK(instance_set("A-n32-k5-C11") == "A");
    CHECK(instance_set("plain") == "plain");
    CHECK(group_by_from_string("theta") == GroupBy::Theta);
    CHECK(group_by_from_string("size") == GroupBy::Size);
    CHECK_THROWS(group_by_from_string("colour"));

    auto runs = synthetic();
    runs.push_back(rec("C-big", 40, "ils", "1", 500, 1));
    runs.back().clusters = 14;  // theta 3
    const auto rows = summarize(runs, {}, GroupBy::Theta);
    REQUIRE(rows.size() >= 2);
    CHECK(rows.back().group == "Tot");
    int instances = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) instances += rows[i].instances;
    CHECK(instances == 3);
    const auto by_size = summarize(runs, {}, GroupBy::Size);
    CHECK(by_size[0].group == "10");  // numeric order
    CHECK(by_size[1].group == "12");
    CHECK(by_size[2].group == "40");
}

TEST_CASE("experiment runs and resumes") {
    const auto dir = scratch_dir("exp");
    Rng rng(2);
    const Instance inst = oracle::random_instance(rng, 12, 4);
    const std::string file = (dir / "Rnd-12.vrp").string();
    std::ofstream(file) << write_instance(inst);

    ExperimentConfig cfg;
    cfg.instance_files = {file, (dir / "missing.vrp").string()};
    cfg.runs = 1;
    cfg.limits.time_limit = 10;
    cfg.limits.restarts = 2;
    cfg.limits.shakes = 20;
    cfg.limits.it_max = 30;
    cfg.cache_dir = dir.string();
    cfg.csv_path = (dir / "runs.csv").string();
    std::vector<std::string> lines;
    cfg.log = [&](const std::string& s) { lines.push_back(s); };

    const auto first = run_experiment(cfg);
    REQUIRE(first.size() == 3);
    for (const auto& r : first) {
        CHECK_MESSAGE(r.ok(), r.status);
        CHECK(r.n == 12);
        CHECK(r.clusters == 4);
        CHECK(r.best > 0);
        CHECK(r.seed == "1");
    }
    CHECK(std::any_of(lines.begin(), lines.end(), [](const std::string& s) { return s.find("skipping") == 0; }));
    CHECK(read_records_csv(cfg.csv_path).size() == 3);

    cfg.runs = 2;
    const auto second = run_experiment(cfg);
    REQUIRE(second.size() == 6);
    for (const auto& old : first) {
        const auto it = std::find_if(second.begin(), second.end(), [&](const RunRecord& r) {
            return r.solver == old.solver && r.seed == old.seed;
        });
        REQUIRE(it != second.end());
        CHECK(it->time == old.time);  // kept, not re-run
        CHECK(it->best == old.best);
    }
    CHECK(read_records_csv(cfg.csv_path).size() == 6);
}
