#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cluvrp/solver.hpp"

namespace cluvrp {

struct PercentDev {
    double value = 0;
    bool improved = false;  // z below the reference: a new best
};

// (z - z_bks) / z_bks * 100
PercentDev percent_dev(double z, double z_bks);

struct RunRecord {
    std::string instance;
    int n = 0;
    int clusters = 0;
    int m = 0;
    std::string solver;
    std::string seed;  // "*" on aggregate rows
    double best = 0;
    double avg = 0;
    double time = 0;          // total seconds, preprocessing included
    double preproc_time = 0;  // UHGS path table
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

using BksTable = std::map<std::string, double>;

// "instance,bks" lines; a header line and blank lines are skipped.
BksTable read_bks_csv(const std::string& path);

inline constexpr const char* kRecordHeader = "instance,n,clusters,m,solver,seed,best,avg,time,preproc_time,status";

std::string record_line(const RunRecord& r);
RunRecord parse_record_line(const std::string& line);
std::vector<RunRecord> read_records_csv(const std::string& path);  // missing file = no records

struct ExperimentConfig {
    std::vector<std::string> instance_files;
    std::vector<SolverId> solvers{SolverId::Ils, SolverId::IlsClu, SolverId::Uhgs};
    int runs = 10;
    std::uint64_t base_seed = 1;  // run r uses base_seed + r
    SolveLimits limits;
    int workers = 1;
    std::string cache_dir;
    std::string csv_path;  // incremental persistence; existing rows are kept and not re-run
    std::function<void(const std::string&)> log;
};

// Runs every (instance, solver, seed) cell not already present in csv_path.
// Returns all per-run records, old and new, in grid order. Unreadable
// instances are skipped with a log line; solver errors become failed records.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

// Per (instance, solver) rows with seed "*": best = min, avg = mean over
// successful runs, times averaged.
std::vector<RunRecord> aggregate(const std::vector<RunRecord>& runs);

void write_records_csv(const std::string& path, const std::vector<RunRecord>& runs, bool with_aggregates);

enum class GroupBy { Set, Size, Theta, Instance };
GroupBy group_by_from_string(const std::string& name);

// Instance set: the name up to the first '-' or '_'.
std::string instance_set(const std::string& name);

struct SummaryCell {
    int bks = 0;                 // instances whose best reaches the reference
    double avg_time = 0;         // mean over runs, preprocessing excluded
    double avg_time_total = 0;   // preprocessing included
    double avg_dev = 0;          // mean over instances of the deviation of the per-instance best
    bool present = false;
};

struct SummaryRow {
    std::string group;
    int instances = 0;
    std::map<std::string, SummaryCell> by_solver;
};

// The reference of an instance is its BKS entry, or the best cost any solver
// reached when the table has none. Failed runs are ignored.
std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs, const BksTable& bks, GroupBy group_by);

std::string summary_markdown(const std::vector<SummaryRow>& rows, const std::vector<std::string>& solvers,
                             const std::string& group_title);
std::string summary_csv(const std::vector<SummaryRow>& rows, const std::vector<std::string>& solvers);

}  // namespace cluvrp
