// cluvrp: instance generation, path-table preprocessing, single solves and
// benchmark grids.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "cluvrp/bench.hpp"
#include "cluvrp/hampath.hpp"
#include "cluvrp/instance.hpp"
#include "cluvrp/simd/minplus.hpp"
#include "cluvrp/solver.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace cluvrp;

namespace {

// JSON config files: {"solve": {"solver": "uhgs", "seed": 3}, "simd": "scalar"}.
// Keys are the long flag names; subcommand flags sit under the subcommand name.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string name = opt->get_lnames()[0];
            if (opt->count() > 0) {
                const auto& res = opt->results();
                if (opt->get_type_size() == 0) j[name] = true;
                else if (res.size() == 1) j[name] = res[0];
                else j[name] = res;
            } else if (default_also && !opt->get_default_str().empty()) {
                j[name] = opt->get_default_str();
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            const json s = json::parse(to_config(sub, default_also, false, ""));
            if (!s.empty()) j[sub->get_name()] = s;
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            input >> j;
        } catch (const json::exception& e) {
            throw CLI::ConversionError(std::string("bad JSON config: ") + e.what());
        }
        return items(j, "", {});
    }

  private:
    static std::string scalar(const json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
        return v.dump();
    }

    std::vector<CLI::ConfigItem> items(const json& j, const std::string& name,
                                       std::vector<std::string> prefix) const {
        std::vector<CLI::ConfigItem> out;
        if (j.is_object()) {
            if (!name.empty()) prefix.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it) {
                auto sub = items(*it, it.key(), prefix);
                out.insert(out.end(), sub.begin(), sub.end());
            }
            return out;
        }
        if (name.empty()) throw CLI::ConversionError("config file must hold a JSON object");
        CLI::ConfigItem item;
        item.name = name;
        item.parents = prefix;
        if (j.is_array()) {
            for (const auto& v : j) item.inputs.push_back(scalar(v));
        } else {
            item.inputs = {scalar(j)};
        }
        out.push_back(std::move(item));
        return out;
    }
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

// Explicit flag, then CLUVRP_CACHE_DIR, then the directory of the instance.
std::string cache_dir_for(const std::string& flag, const std::string& instance_path) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv("CLUVRP_CACHE_DIR"); env && *env) return env;
    const fs::path parent = fs::path(instance_path).parent_path();
    return parent.empty() ? "." : parent.string();
}

bool is_instance_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".vrp" || ext == ".gvrp";
}

std::vector<std::string> instance_files(const std::string& where) {
    std::vector<std::string> files;
    if (fs::is_directory(where)) {
        for (const auto& e : fs::directory_iterator(where))
            if (e.is_regular_file() && is_instance_file(e.path())) files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
    } else if (fs::exists(where)) {
        files.push_back(where);
    } else {
        throw Error("no such file or directory: " + where);
    }
    return files;
}

json routes_json(const Solution& sol) {
    json routes = json::array();
    for (const auto& r : sol.routes) {
        json ids = json::array();
        for (int v : r) ids.push_back(v + 1);  // file numbering, depot = 1
        routes.push_back(ids);
    }
    return routes;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Clustered vehicle routing: ILS, ILS-Clu and hybrid genetic search"};
    app.require_subcommand(1);
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file with flag values");
    std::string simd_name;
    app.add_option("--simd", simd_name, "Min-plus kernels: scalar, avx2 or neon (default: best available)");

    // gen -------------------------------------------------------------------
    auto* gen = app.add_subcommand("gen", "Cluster a CVRP instance (or a random one) into a CluVRP instance");
    std::string gen_in, gen_out, gen_name;
    double theta = 5;
    std::uint64_t gen_seed = 1;
    int random_n = 0, capacity = 100, max_demand = 10;
    bool exact = false;
    gen->add_option("input", gen_in, "CVRP instance file (clusters ignored)");
    gen->add_option("--theta", theta, "Mean cluster size")->capture_default_str()->check(CLI::Range(1.0, 1e9));
    gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output file (default: stdout)");
    gen->add_option("--random", random_n, "Generate a uniform random CVRP with this many customers instead")
        ->check(CLI::PositiveNumber);
    gen->add_option("--capacity", capacity, "Vehicle capacity for --random")->capture_default_str();
    gen->add_option("--max-demand", max_demand, "Largest customer demand for --random")->capture_default_str();
    gen->add_option("--name", gen_name, "Instance name for --random");
    gen->add_flag("--exact", exact, "Unrounded Euclidean costs for --random");

    // preprocess ------------------------------------------------------------
    auto* pre = app.add_subcommand("preprocess", "Compute and cache the intra-cluster path table");
    std::string pre_instance, pre_cache;
    int lambda_max = kDefaultLambdaMax, workers = 1;
    pre->add_option("--instance", pre_instance, "Instance file")->required();
    pre->add_option("--cache-dir", pre_cache, "Cache directory (default: $CLUVRP_CACHE_DIR or the instance's)");
    pre->add_option("--lambda-max", lambda_max, "Largest cluster size accepted")->capture_default_str();
    pre->add_option("--workers", workers, "Threads")->capture_default_str()->check(CLI::PositiveNumber);

    // solve -----------------------------------------------------------------
    auto* sol = app.add_subcommand("solve", "Solve one instance");
    std::string sol_instance, solver_name = "uhgs", json_out, sol_cache;
    std::uint64_t sol_seed = 1;
    SolveLimits limits;
    sol->add_option("--instance", sol_instance, "Instance file")->required();
    sol->add_option("--solver", solver_name, "ils | ils-clu | uhgs")
        ->capture_default_str()
        ->check(CLI::IsMember({"ils", "ils-clu", "uhgs"}));
    sol->add_option("--seed", sol_seed, "Random seed")->capture_default_str();
    sol->add_option("--json-out", json_out, "Write the solution as JSON");
    sol->add_option("--cache-dir", sol_cache, "Path-table cache directory");

    // bench -----------------------------------------------------------------
    auto* bench = app.add_subcommand("bench", "Run a solver x seed grid and report");
    std::string bench_dir, bks_file, csv_out, md_out, group_name = "set", bench_cache;
    std::vector<std::string> solver_names{"ils", "ils-clu", "uhgs"};
    int runs = 10, bench_workers = 1;
    std::uint64_t base_seed = 1;
    bench->add_option("--instances", bench_dir, "Directory of .vrp/.gvrp files, or one file")->required();
    bench->add_option("--solvers", solver_names, "Comma-separated solver list")
        ->delimiter(',')
        ->capture_default_str()
        ->check(CLI::IsMember({"ils", "ils-clu", "uhgs"}));
    bench->add_option("--runs", runs, "Seeds per instance and solver")->capture_default_str();
    bench->add_option("--seed", base_seed, "First seed")->capture_default_str();
    bench->add_option("--bks", bks_file, "CSV of best known costs (instance,bks)");
    bench->add_option("--workers", bench_workers, "Concurrent runs")->capture_default_str()->check(CLI::PositiveNumber);
    bench->add_option("--csv", csv_out, "Per-run records; an existing file is resumed");
    bench->add_option("--markdown", md_out, "Summary table");
    bench->add_option("--group-by", group_name, "set | size | theta | instance")
        ->capture_default_str()
        ->check(CLI::IsMember({"set", "size", "theta", "instance"}));
    bench->add_option("--cache-dir", bench_cache, "Path-table cache directory");

    for (auto* sub : {sol, bench}) {
        sub->add_option("--time-limit", limits.time_limit, "Seconds per run, 0 = none")->capture_default_str();
        sub->add_option("--restarts", limits.restarts, "ILS restarts")->capture_default_str();
        sub->add_option("--shakes", limits.shakes, "ILS non-improving shakes, 0 = default")->capture_default_str();
        sub->add_option("--mu-min", limits.mu_min, "UHGS minimum population")->capture_default_str();
        sub->add_option("--mu-gen", limits.mu_gen, "UHGS generation size")->capture_default_str();
        sub->add_option("--it-max", limits.it_max, "UHGS offspring without improvement")->capture_default_str();
        sub->add_option("--lambda-max", limits.lambda_max, "Largest cluster size accepted")->capture_default_str();
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!simd_name.empty()) simd::set_active(simd::parse_isa(simd_name));

        if (gen->parsed()) {
            Instance base = [&] {
                if (random_n > 0) {
                    const std::string name = gen_name.empty() ? "R" + std::to_string(random_n) : gen_name;
                    return random_cvrp(name, random_n, capacity, max_demand, gen_seed,
                                       exact ? Rounding::Exact : Rounding::NearestInt);
                }
                if (gen_in.empty()) throw Error("gen needs an input file or --random N");
                return read_instance_file(gen_in);
            }();
            const Instance out = generate_clustered(base, theta, gen_seed);
            const std::string text = write_instance(out);
            if (gen_out.empty()) std::cout << text;
            else write_file(gen_out, text);
            std::cerr << out.name() << ": n=" << out.customers() << " clusters=" << out.cluster_count()
                      << " m=" << out.fleet() << '\n';
        } else if (pre->parsed()) {
            const Instance inst = read_instance_file(pre_instance);
            if (inst.max_cluster_size() > lambda_max)
                std::cerr << "warning: largest cluster has " << inst.max_cluster_size()
                          << " customers; raise --lambda-max to at least that (cost grows as 2^size)\n";
            const std::string dir = cache_dir_for(pre_cache, pre_instance);
            bool hit = false;
            const auto table = load_or_build_path_table(inst, dir, lambda_max, workers, &hit);
            std::cout << inst.name() << ": clusters=" << table.cluster_count() << " pairs=" << table.pair_count()
                      << " seconds=" << table.compute_seconds << (hit ? " (cached)" : "") << '\n'
                      << (fs::path(dir) / cache_file_name(inst)).string() << '\n';
        } else if (sol->parsed()) {
            const Instance inst = read_instance_file(sol_instance);
            const SolverId id = solver_from_string(solver_name);
            const auto out = solve(inst, id, sol_seed, limits, cache_dir_for(sol_cache, sol_instance));
            std::cout << inst.name() << " " << solver_name << " seed " << sol_seed << ": cost " << out.validation.cost
                      << (out.validation.feasible ? "" : " INFEASIBLE: " + out.validation.error) << ", "
                      << out.solution.routes.size() << " routes, " << out.seconds << " s";
            if (id == SolverId::Uhgs) std::cout << " (preprocessing " << out.preprocess_seconds << " s)";
            std::cout << '\n';
            if (!json_out.empty()) {
                json j{{"instance", inst.name()},
                       {"solver", solver_name},
                       {"seed", sol_seed},
                       {"cost", out.validation.cost},
                       {"feasible", out.validation.feasible},
                       {"time", out.seconds},
                       {"preproc_time", out.preprocess_seconds},
                       {"routes", routes_json(out.solution)}};
                if (!out.validation.feasible) j["error"] = out.validation.error;
                write_file(json_out, j.dump(2) + "\n");
            }
            return out.validation.feasible ? 0 : 2;
        } else if (bench->parsed()) {
            ExperimentConfig cfg;
            cfg.instance_files = instance_files(bench_dir);
            cfg.solvers.clear();
            for (const auto& s : solver_names) cfg.solvers.push_back(solver_from_string(s));
            cfg.runs = runs;
            cfg.base_seed = base_seed;
            cfg.limits = limits;
            cfg.workers = bench_workers;
            cfg.cache_dir = cache_dir_for(bench_cache, fs::is_directory(bench_dir)
                                                           ? (fs::path(bench_dir) / "x").string()
                                                           : bench_dir);
            cfg.csv_path = csv_out;
            cfg.log = [](const std::string& msg) { std::cerr << msg << '\n'; };
            const auto records = run_experiment(cfg);
            if (!csv_out.empty()) write_records_csv(csv_out, records, true);
            const BksTable bks = bks_file.empty() ? BksTable{} : read_bks_csv(bks_file);
            const auto rows = summarize(records, bks, group_by_from_string(group_name));
            const std::string title = group_name == "theta" ? "theta" : group_name == "size" ? "n" : group_name;
            const std::string table = summary_markdown(rows, solver_names, title);
            std::cout << table;
            if (!md_out.empty()) write_file(md_out, table);
            const bool all_ok = std::all_of(records.begin(), records.end(), [](const RunRecord& r) { return r.ok(); });
            return all_ok ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
