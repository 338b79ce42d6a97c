#include "cluvrp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>
#include <thread>

namespace cluvrp {

PercentDev percent_dev(double z, double z_bks) {
    if (!(z_bks > 0)) throw Error("reference cost must be positive");
    PercentDev d;
    d.value = (z - z_bks) / z_bks * 100.0;
    d.improved = z < z_bks;
    return d;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(digits) << v;
    return os.str();
}

}  // namespace

BksTable read_bks_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open BKS file " + path);
    BksTable table;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto cells = split_csv(line);
        if (cells.size() < 2) throw Error(path + ":" + std::to_string(lineno) + ": expected instance,bks");
        double v;
        try {
            v = std::stod(cells[1]);
        } catch (const std::exception&) {
            if (lineno == 1) continue;  // header
            throw Error(path + ":" + std::to_string(lineno) + ": bad BKS value '" + cells[1] + "'");
        }
        if (!(v > 0)) throw Error(path + ":" + std::to_string(lineno) + ": BKS must be positive");
        table[trim(cells[0])] = v;
    }
    return table;
}

std::string record_line(const RunRecord& r) {
    std::ostringstream os;
    os << r.instance << ',' << r.n << ',' << r.clusters << ',' << r.m << ',' << r.solver << ',' << r.seed << ','
       << num(r.best) << ',' << num(r.avg) << ',' << num(r.time) << ',' << num(r.preproc_time) << ',' << r.status;
    return os.str();
}

RunRecord parse_record_line(const std::string& line) {
    const auto c = split_csv(line);
    if (c.size() < 11) throw Error("malformed record line: " + line);
    RunRecord r;
    r.instance = c[0];
    r.n = std::stoi(c[1]);
    r.clusters = std::stoi(c[2]);
    r.m = std::stoi(c[3]);
    r.solver = c[4];
    r.seed = c[5];
    r.best = std::stod(c[6]);
    r.avg = std::stod(c[7]);
    r.time = std::stod(c[8]);
    r.preproc_time = std::stod(c[9]);
    // status may itself contain commas (error text)
    r.status = c[10];
    for (std::size_t i = 11; i < c.size(); ++i) r.status += "," + c[i];
    return r;
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
    std::vector<RunRecord> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line == kRecordHeader) continue;
        try {
            out.push_back(parse_record_line(line));
        } catch (const std::exception&) {
            // a line cut short by an interrupted run
        }
    }
    return out;
}

namespace {

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& cfg) {
    auto log = [&](const std::string& msg) {
        if (cfg.log) cfg.log(msg);
    };
    if (cfg.runs < 1) throw Error("runs must be at least 1");

    std::vector<Instance> instances;
    for (const auto& file : cfg.instance_files) {
        try {
            instances.push_back(read_instance_file(file));
        } catch (const std::exception& e) {
            log("skipping " + file + ": " + one_line(e.what()));
        }
    }

    std::map<std::tuple<std::string, std::string, std::string>, RunRecord> done;
    if (!cfg.csv_path.empty())
        for (auto& r : read_records_csv(cfg.csv_path))
            if (r.seed != "*") done[{r.instance, r.solver, r.seed}] = r;

    struct Cell {
        int inst;
        SolverId solver;
        std::uint64_t seed;
    };
    std::vector<Cell> todo;
    for (int i = 0; i < static_cast<int>(instances.size()); ++i)
        for (SolverId s : cfg.solvers)
            for (int r = 0; r < cfg.runs; ++r) {
                const std::uint64_t seed = cfg.base_seed + r;
                if (!done.count({instances[i].name(), std::string(to_string(s)), std::to_string(seed)}))
                    todo.push_back({i, s, seed});
            }
    if (!done.empty()) log("resuming: " + std::to_string(todo.size()) + " cells left");

    std::ofstream sink;
    if (!cfg.csv_path.empty()) {
        const bool fresh = read_records_csv(cfg.csv_path).empty();
        sink.open(cfg.csv_path, fresh ? std::ios::trunc : std::ios::app);
        if (!sink) throw Error("cannot write " + cfg.csv_path);
        if (fresh) sink << kRecordHeader << '\n' << std::flush;
    }

    std::vector<std::once_flag> table_once(instances.size());
    std::vector<std::optional<PathCostTable>> tables(instances.size());
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (std::size_t t = next++; t < todo.size(); t = next++) {
            const Cell& cell = todo[t];
            const Instance& inst = instances[cell.inst];
            RunRecord rec;
            rec.instance = inst.name();
            rec.n = inst.customers();
            rec.clusters = inst.cluster_count();
            rec.m = inst.fleet();
            rec.solver = std::string(to_string(cell.solver));
            rec.seed = std::to_string(cell.seed);
            try {
                const PathCostTable* table = nullptr;
                if (cell.solver == SolverId::Uhgs) {
                    std::call_once(table_once[cell.inst], [&] {
                        tables[cell.inst] = cfg.cache_dir.empty()
                                                ? build_path_table(inst, cfg.limits.lambda_max)
                                                : load_or_build_path_table(inst, cfg.cache_dir, cfg.limits.lambda_max);
                    });
                    table = &*tables[cell.inst];
                }
                const SolveOutcome out = solve(inst, cell.solver, cell.seed, cfg.limits, cfg.cache_dir, table);
                rec.time = out.seconds;
                rec.preproc_time = out.preprocess_seconds;
                if (!out.validation.feasible) {
                    rec.status = "invalid: " + out.validation.error;
                } else if (std::abs(out.validation.cost - out.solution.cost) > 1e-6 * std::max(1.0, out.validation.cost)) {
                    rec.status = "invalid: reported cost " + num(out.solution.cost) + " but checker found " +
                                 num(out.validation.cost);
                }
                rec.best = rec.avg = out.validation.cost;
            } catch (const std::exception& e) {
                rec.status = "failed: " + one_line(e.what());
            }
            std::lock_guard lock(mu);
            done[{rec.instance, rec.solver, rec.seed}] = rec;
            if (sink.is_open()) sink << record_line(rec) << '\n' << std::flush;
            log(rec.instance + " " + rec.solver + " seed " + rec.seed + ": " +
                (rec.ok() ? num(rec.best) + " in " + fixed(rec.time, 2) + " s" : rec.status));
        }
    };
    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(todo.size())));
    {
        std::vector<std::jthread> pool;
        for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
        worker();
    }

    std::vector<RunRecord> out;
    for (const auto& inst : instances)
        for (SolverId s : cfg.solvers)
            for (int r = 0; r < cfg.runs; ++r) {
                auto it = done.find({inst.name(), std::string(to_string(s)), std::to_string(cfg.base_seed + r)});
                if (it != done.end()) out.push_back(it->second);
            }
    return out;
}

std::vector<RunRecord> aggregate(const std::vector<RunRecord>& runs) {
    std::vector<RunRecord> out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    std::vector<int> counts;
    for (const auto& r : runs) {
        if (r.seed == "*") continue;
        auto [it, fresh] = index.try_emplace({r.instance, r.solver}, out.size());
        if (fresh) {
            RunRecord a = r;
            a.seed = "*";
            a.best = kInf;
            a.avg = a.time = a.preproc_time = 0;
            a.status = "failed";
            out.push_back(a);
            counts.push_back(0);
        }
        if (!r.ok()) continue;
        RunRecord& a = out[it->second];
        int& c = counts[it->second];
        a.best = std::min(a.best, r.best);
        a.avg += r.best;
        a.time += r.time;
        a.preproc_time += r.preproc_time;
        a.status = "ok";
        ++c;
    }
    for (std::size_t i = 0; i < out.size(); ++i)
        if (counts[i] > 0) {
            out[i].avg /= counts[i];
            out[i].time /= counts[i];
            out[i].preproc_time /= counts[i];
        } else {
            out[i].best = 0;
        }
    return out;
}

void write_records_csv(const std::string& path, const std::vector<RunRecord>& runs, bool with_aggregates) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw Error("cannot write " + path);
        out << kRecordHeader << '\n';
        for (const auto& r : runs)
            if (r.seed != "*") out << record_line(r) << '\n';
        if (with_aggregates)
            for (const auto& r : aggregate(runs)) out << record_line(r) << '\n';
    }
    std::filesystem::rename(tmp, path);
}

GroupBy group_by_from_string(const std::string& name) {
    if (name == "set") return GroupBy::Set;
    if (name == "size") return GroupBy::Size;
    if (name == "theta") return GroupBy::Theta;
    if (name == "instance") return GroupBy::Instance;
    throw Error("unknown grouping '" + name + "' (expected set, size, theta or instance)");
}

std::string instance_set(const std::string& name) {
    const auto p = name.find_first_of("-_");
    return p == std::string::npos ? name : name.substr(0, p);
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs_in, const BksTable& bks, GroupBy group_by) {
    // Canonical order first so that floating-point sums do not depend on input order.
    std::vector<RunRecord> runs;
    for (const auto& r : runs_in)
        if (r.seed != "*" && r.ok()) runs.push_back(r);
    std::sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.instance, a.solver, a.seed, a.best, a.time) <
               std::tie(b.instance, b.solver, b.seed, b.best, b.time);
    });

    struct PerInstance {
        const RunRecord* any = nullptr;
        std::map<std::string, double> best;
        std::map<std::string, std::vector<const RunRecord*>> runs;
    };
    std::map<std::string, PerInstance> per;
    for (const auto& r : runs) {
        auto& p = per[r.instance];
        p.any = &r;
        auto [it, fresh] = p.best.try_emplace(r.solver, r.best);
        if (!fresh) it->second = std::min(it->second, r.best);
        p.runs[r.solver].push_back(&r);
    }

    auto key_of = [&](const RunRecord& r) -> std::pair<double, std::string> {
        switch (group_by) {
            case GroupBy::Set: return {0, instance_set(r.instance)};
            case GroupBy::Size: return {r.n, std::to_string(r.n)};
            case GroupBy::Theta: {
                const double t = infer_theta(r.n, r.clusters);
                std::ostringstream os;
                os << t;
                return {t, os.str()};
            }
            case GroupBy::Instance: return {0, r.instance};
        }
        return {0, ""};
    };

    struct Acc {
        int instances = 0;
        std::map<std::string, int> bks;
        std::map<std::string, double> dev, time, total;
        std::map<std::string, int> dev_n, time_n;
    };
    std::map<std::pair<double, std::string>, Acc> groups;
    Acc all;
    for (const auto& [name, p] : per) {
        double ref;
        if (auto it = bks.find(name); it != bks.end()) {
            ref = it->second;
        } else {
            ref = kInf;
            for (const auto& [s, b] : p.best) ref = std::min(ref, b);
        }
        for (Acc* acc : {&groups[key_of(*p.any)], &all}) {
            ++acc->instances;
            for (const auto& [s, b] : p.best) {
                if (b <= ref + 1e-6 * std::max(1.0, ref)) ++acc->bks[s];
                else acc->bks.try_emplace(s, 0);
                if (ref > 0) {
                    acc->dev[s] += percent_dev(b, ref).value;
                    ++acc->dev_n[s];
                }
                for (const RunRecord* r : p.runs.at(s)) {
                    acc->time[s] += r->time - r->preproc_time;
                    acc->total[s] += r->time;
                    ++acc->time_n[s];
                }
            }
        }
    }

    auto row_of = [](const std::string& label, const Acc& acc) {
        SummaryRow row;
        row.group = label;
        row.instances = acc.instances;
        for (const auto& [s, count] : acc.bks) {
            SummaryCell c;
            c.present = true;
            c.bks = count;
            const int tn = acc.time_n.count(s) ? acc.time_n.at(s) : 0;
            if (tn > 0) {
                c.avg_time = acc.time.at(s) / tn;
                c.avg_time_total = acc.total.at(s) / tn;
            }
            const int dn = acc.dev_n.count(s) ? acc.dev_n.at(s) : 0;
            if (dn > 0) c.avg_dev = acc.dev.at(s) / dn;
            row.by_solver[s] = c;
        }
        return row;
    };
    std::vector<SummaryRow> out;
    for (const auto& [key, acc] : groups) out.push_back(row_of(key.second, acc));
    if (!per.empty()) out.push_back(row_of("Tot", all));
    return out;
}

std::string summary_markdown(const std::vector<SummaryRow>& rows, const std::vector<std::string>& solvers,
                             const std::string& group_title) {
    const bool uhgs = std::find(solvers.begin(), solvers.end(), "uhgs") != solvers.end();
    std::ostringstream os;
    os << "| " << group_title << " | Inst. |";
    for (const auto& s : solvers) os << " #BKS " << s << " |";
    for (const auto& s : solvers) os << " Avg. Time (s) " << s << " |";
    if (uhgs) os << " Avg. Time (s) uhgs_p |";
    for (const auto& s : solvers) os << " Avg. % Dev. " << s << " |";
    os << "\n|---|---:|";
    const std::size_t cols = solvers.size() * 3 + (uhgs ? 1 : 0);
    for (std::size_t i = 0; i < cols; ++i) os << "---:|";
    os << '\n';
    for (const auto& row : rows) {
        auto cell = [&](const std::string& s) -> const SummaryCell* {
            auto it = row.by_solver.find(s);
            return it == row.by_solver.end() ? nullptr : &it->second;
        };
        os << "| " << row.group << " | " << row.instances << " |";
        for (const auto& s : solvers) os << ' ' << (cell(s) ? std::to_string(cell(s)->bks) : "-") << " |";
        for (const auto& s : solvers) os << ' ' << (cell(s) ? fixed(cell(s)->avg_time, 2) : "-") << " |";
        if (uhgs) os << ' ' << (cell("uhgs") ? fixed(cell("uhgs")->avg_time_total, 2) : "-") << " |";
        for (const auto& s : solvers) os << ' ' << (cell(s) ? fixed(cell(s)->avg_dev, 2) : "-") << " |";
        os << '\n';
    }
    return os.str();
}

std::string summary_csv(const std::vector<SummaryRow>& rows, const std::vector<std::string>& solvers) {
    std::ostringstream os;
    os << "group,instances,solver,bks,avg_time,avg_time_total,avg_dev\n";
    for (const auto& row : rows)
        for (const auto& s : solvers) {
            auto it = row.by_solver.find(s);
            if (it == row.by_solver.end()) continue;
            const auto& c = it->second;
            os << row.group << ',' << row.instances << ',' << s << ',' << c.bks << ',' << num(c.avg_time) << ','
               << num(c.avg_time_total) << ',' << num(c.avg_dev) << '\n';
        }
    return os.str();
}

}  // namespace cluvrp
