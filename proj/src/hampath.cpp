#include "cluvrp/hampath.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace cluvrp {

ClusterPaths::ClusterPaths(std::vector<int> members, std::vector<double> costs, std::vector<int> orders)
    : members_(std::move(members)), costs_(std::move(costs)), orders_(std::move(orders)) {}

std::span<const int> ClusterPaths::path(int i, int j) const {
    const std::size_t l = members_.size();
    return {orders_.data() + (static_cast<std::size_t>(i) * l + j) * l, l};
}

long PathCostTable::pair_count() const {
    long total = 0;
    for (const auto& c : clusters_) {
        for (int i = 0; i < c.size(); ++i)
            for (int j = 0; j < c.size(); ++j)
                if (i != j && c.cost(i, j) < kInf) ++total;
    }
    return total;
}

ClusterPaths cluster_ham_paths(std::span<const int> members, const CostMatrix& costs, int lambda_max) {
    const int l = static_cast<int>(members.size());
    if (l == 0) throw Error("empty cluster");
    if (l > lambda_max)
        throw LambdaLimitError("cluster of " + std::to_string(l) + " customers exceeds lambda-max " +
                               std::to_string(lambda_max) +
                               "; raise the limit (heuristic path estimation is not supported)");
    if (l > 24) throw LambdaLimitError("cluster too large for exact path preprocessing");

    std::vector<int> ids(members.begin(), members.end());
    const std::size_t L = static_cast<std::size_t>(l);
    std::vector<double> table(L * L, kInf);
    std::vector<int> orders(L * L * L, -1);
    if (l == 1) {
        table[0] = 0;
        orders[0] = ids[0];
        return ClusterPaths(std::move(ids), std::move(table), std::move(orders));
    }

    std::vector<double> c(L * L);
    for (int a = 0; a < l; ++a)
        for (int b = 0; b < l; ++b) c[a * L + b] = costs(ids[a], ids[b]);

    const std::size_t states = std::size_t{1} << l;
    const unsigned full = static_cast<unsigned>(states - 1);
    std::vector<double> dp(states * L);
    std::vector<std::uint8_t> parent(states * L);

    for (int s = 0; s + 1 < l; ++s) {
        std::fill(dp.begin(), dp.end(), kInf);
        dp[(std::size_t{1} << s) * L + s] = 0;
        for (unsigned mask = 1; mask <= full; ++mask) {
            if (!(mask & (1u << s))) continue;
            for (int v = 0; v < l; ++v) {
                const double base = dp[mask * L + v];
                if (base == kInf) continue;
                const double* cv = &c[v * L];
                for (int w = 0; w < l; ++w) {
                    if (mask & (1u << w)) continue;
                    const unsigned next = mask | (1u << w);
                    const double cand = base + cv[w];
                    if (cand < dp[next * L + w]) {
                        dp[next * L + w] = cand;
                        parent[next * L + w] = static_cast<std::uint8_t>(v);
                    }
                }
            }
        }
        for (int j = s + 1; j < l; ++j) {
            const double best = dp[full * L + j];
            table[s * L + j] = best;
            table[j * L + s] = best;
            // Walk back from j to s, writing the s -> j order and its reverse.
            int* fwd = &orders[(s * L + j) * L];
            int* bwd = &orders[(j * L + s) * L];
            unsigned mask = full;
            int v = j;
            for (int pos = l - 1; pos >= 0; --pos) {
                fwd[pos] = ids[v];
                bwd[l - 1 - pos] = ids[v];
                const int p = parent[mask * L + v];
                mask &= ~(1u << v);
                v = p;
            }
        }
    }
    return ClusterPaths(std::move(ids), std::move(table), std::move(orders));
}

double ham_path_bruteforce(std::span<const int> members, const CostMatrix& costs, int i, int j) {
    const int l = static_cast<int>(members.size());
    if (l == 1) return 0;
    if (i == j) return kInf;
    std::vector<int> interior;
    for (int k = 0; k < l; ++k)
        if (k != i && k != j) interior.push_back(members[k]);
    std::sort(interior.begin(), interior.end());
    double best = kInf;
    do {
        double total = 0;
        int prev = members[i];
        for (int v : interior) {
            total += costs(prev, v);
            prev = v;
        }
        total += costs(prev, members[j]);
        best = std::min(best, total);
    } while (std::next_permutation(interior.begin(), interior.end()));
    return best;
}

PathCostTable build_path_table(const Instance& inst, int lambda_max, int workers) {
    const auto start = std::chrono::steady_clock::now();
    const int count = inst.cluster_count();
    // Fail fast, before spawning work.
    for (int k = 0; k < count; ++k)
        if (static_cast<int>(inst.cluster(k).size()) > lambda_max)
            throw LambdaLimitError("cluster " + std::to_string(k + 1) + " has " +
                                   std::to_string(inst.cluster(k).size()) + " customers, exceeding lambda-max " +
                                   std::to_string(lambda_max) +
                                   "; raise the limit (heuristic path estimation is not supported)");
    std::vector<ClusterPaths> out(count);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int k = next++; k < count; k = next++) out[k] = cluster_ham_paths(inst.cluster(k), inst.costs(), lambda_max);
    };
    workers = std::clamp(workers, 1, std::max(1, count));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    PathCostTable table(std::move(out));
    table.compute_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return table;
}

// ---------------------------------------------------------------------------
// Cache

std::uint64_t instance_hash(const Instance& inst) {
    const std::string text = write_instance(inst);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void put_number(std::ostream& os, double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    os.write(buf, res.ptr - buf);
}

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
    return out.empty() ? "instance" : out;
}

}  // namespace

std::string cache_file_name(const Instance& inst) {
    return sanitize(inst.name()) + "-" + hex(instance_hash(inst)) + ".paths";
}

void write_path_cache(const std::string& path, const Instance& inst, const PathCostTable& table) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp);
        if (!os) throw Error("cannot write cache file '" + path + "'");
        os << "CLUVRP-PATHS 1\n";
        os << "instance " << sanitize(inst.name()) << "\n";
        os << "hash " << hex(instance_hash(inst)) << "\n";
        os << "seconds ";
        put_number(os, table.compute_seconds);
        os << "\nclusters " << table.cluster_count() << "\n";
        for (int k = 0; k < table.cluster_count(); ++k) {
            const auto& c = table.cluster(k);
            os << "cluster " << k + 1 << " " << c.size();
            for (int v : c.members()) os << " " << v + 1;
            os << "\n";
            if (c.size() == 1) continue;
            for (int i = 0; i < c.size(); ++i)
                for (int j = 0; j < c.size(); ++j) {
                    if (i == j) continue;
                    os << k + 1 << " " << i << " " << j << " ";
                    put_number(os, c.cost(i, j));
                    for (int v : c.path(i, j)) os << " " << v + 1;
                    os << "\n";
                }
        }
        os << "end\n";
        if (!os) throw Error("failed writing cache file '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::optional<PathCostTable> read_path_cache(const std::string& path, const Instance& inst) {
    std::ifstream is(path);
    if (!is) return std::nullopt;
    auto fail = [&](const std::string& why) -> Error { return Error("corrupt cache file '" + path + "': " + why); };
    std::string word;
    int version = 0;
    if (!(is >> word >> version) || word != "CLUVRP-PATHS") throw fail("bad header");
    if (version != 1) throw fail("unsupported version " + std::to_string(version));
    std::string name, hash_hex;
    double seconds = 0;
    int count = 0;
    if (!(is >> word >> name) || word != "instance") throw fail("missing instance line");
    if (!(is >> word >> hash_hex) || word != "hash") throw fail("missing hash line");
    if (hash_hex != hex(instance_hash(inst))) return std::nullopt;
    if (!(is >> word >> seconds) || word != "seconds") throw fail("missing seconds line");
    if (!(is >> word >> count) || word != "clusters") throw fail("missing cluster count");
    if (count != inst.cluster_count()) throw fail("cluster count mismatch");

    std::vector<ClusterPaths> clusters;
    for (int k = 0; k < count; ++k) {
        int id = 0, l = 0;
        if (!(is >> word >> id >> l) || word != "cluster" || id != k + 1 || l <= 0) throw fail("bad cluster header");
        std::vector<int> members(l);
        for (int& v : members) {
            if (!(is >> v)) throw fail("bad member list");
            --v;
        }
        const std::size_t L = static_cast<std::size_t>(l);
        std::vector<double> costs(L * L, kInf);
        std::vector<int> orders(L * L * L, -1);
        if (l == 1) {
            costs[0] = 0;
            orders[0] = members[0];
        } else {
            for (std::size_t r = 0; r < L * (L - 1); ++r) {
                int kk = 0, i = 0, j = 0;
                double c = 0;
                if (!(is >> kk >> i >> j >> c) || kk != k + 1 || i < 0 || j < 0 || i >= l || j >= l || i == j)
                    throw fail("bad pair record in cluster " + std::to_string(k + 1));
                costs[i * L + j] = c;
                for (std::size_t p = 0; p < L; ++p) {
                    int v = 0;
                    if (!(is >> v)) throw fail("bad path record");
                    orders[(i * L + j) * L + p] = v - 1;
                }
            }
        }
        clusters.emplace_back(std::move(members), std::move(costs), std::move(orders));
    }
    if (!(is >> word) || word != "end") throw fail("missing end marker");
    PathCostTable table(std::move(clusters));
    table.compute_seconds = seconds;
    return table;
}

PathCostTable load_or_build_path_table(const Instance& inst, const std::string& cache_dir, int lambda_max,
                                       int workers, bool* cache_hit) {
    namespace fs = std::filesystem;
    const fs::path file = fs::path(cache_dir.empty() ? "." : cache_dir) / cache_file_name(inst);
    if (auto cached = read_path_cache(file.string(), inst)) {
        if (cache_hit) *cache_hit = true;
        return std::move(*cached);
    }
    if (cache_hit) *cache_hit = false;
    PathCostTable table = build_path_table(inst, lambda_max, workers);
    fs::create_directories(file.parent_path());
    write_path_cache(file.string(), inst, table);
    return table;
}

}  // namespace cluvrp
