#include "cluvrp/ils.hpp"

#include <chrono>
#include <memory>

#include "cluvrp/construction.hpp"
#include "cluvrp/intra_cluster.hpp"
#include "cluvrp/local_search.hpp"
#include "cluvrp/m_penalty.hpp"
#include "cluvrp/seq_concat.hpp"

namespace cluvrp {

int default_shakes(const Instance& inst, IlsMode mode) {
    return mode == IlsMode::Vertex ? inst.customers() + 5 * inst.fleet() : 1000;
}

namespace {

int units_load(const std::vector<int>& units, const ClusterModel& model) {
    int load = 0;
    for (int u : units) load += model.load(u);
    return load;
}

int pick(Rng& rng, int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

bool shift11(std::vector<std::vector<int>>& routes, const ClusterModel& model, int Q, Rng& rng,
             const std::vector<int>& used) {
    const int r = used[pick(rng, static_cast<int>(used.size()))];
    int s = used[pick(rng, static_cast<int>(used.size()) - 1)];
    if (s == r) s = used.back();
    const int i = pick(rng, static_cast<int>(routes[r].size()));
    const int j = pick(rng, static_cast<int>(routes[s].size()));
    const int a = routes[r][i];
    const int b = routes[s][j];
    const int diff = model.load(b) - model.load(a);
    if (units_load(routes[r], model) + diff > Q || units_load(routes[s], model) - diff > Q) return false;
    routes[r].erase(routes[r].begin() + i);
    routes[s].erase(routes[s].begin() + j);
    routes[s].insert(routes[s].begin() + pick(rng, static_cast<int>(routes[s].size()) + 1), a);
    routes[r].insert(routes[r].begin() + pick(rng, static_cast<int>(routes[r].size()) + 1), b);
    return true;
}

bool swap_between(std::vector<std::vector<int>>& routes, const ClusterModel& model, int Q, Rng& rng,
                  const std::vector<int>& used) {
    const int r = used[pick(rng, static_cast<int>(used.size()))];
    int s = used[pick(rng, static_cast<int>(used.size()) - 1)];
    if (s == r) s = used.back();
    const int i = pick(rng, static_cast<int>(routes[r].size()));
    const int j = pick(rng, static_cast<int>(routes[s].size()));
    const int diff = model.load(routes[s][j]) - model.load(routes[r][i]);
    if (units_load(routes[r], model) + diff > Q || units_load(routes[s], model) - diff > Q) return false;
    std::swap(routes[r][i], routes[s][j]);
    return true;
}

void swap_within(std::vector<std::vector<int>>& routes, Rng& rng, const std::vector<int>& long_routes) {
    auto& r = routes[long_routes[pick(rng, static_cast<int>(long_routes.size()))]];
    const int len = static_cast<int>(r.size());
    const int i = pick(rng, len);
    int j = pick(rng, len - 1);
    if (j >= i) ++j;
    std::swap(r[i], r[j]);
}

}  // namespace

int perturb(std::vector<std::vector<int>>& routes, const ClusterModel& model, int capacity, IlsMode mode,
            Rng& rng) {
    const int count = 1 + pick(rng, 2);
    int applied = 0;
    for (int c = 0; c < count; ++c) {
        for (int attempt = 0; attempt < 20; ++attempt) {
            std::vector<int> used, long_routes;
            for (int r = 0; r < static_cast<int>(routes.size()); ++r) {
                if (!routes[r].empty()) used.push_back(r);
                if (routes[r].size() >= 2) long_routes.push_back(r);
            }
            const bool can_shift = used.size() >= 2;
            const bool can_swap = mode == IlsMode::Vertex ? used.size() >= 2 : !long_routes.empty();
            if (!can_shift && !can_swap) break;
            const bool do_shift = can_shift && (!can_swap || pick(rng, 2) == 0);
            bool ok;
            if (do_shift) {
                ok = shift11(routes, model, capacity, rng, used);
            } else if (mode == IlsMode::Vertex) {
                ok = swap_between(routes, model, capacity, rng, used);
            } else {
                swap_within(routes, rng, long_routes);
                ok = true;
            }
            if (ok) {
                ++applied;
                break;
            }
        }
    }
    return applied;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Incumbent {
    std::vector<std::vector<int>> units;
    std::vector<std::vector<int>> paths;  // cluster mode
    double cost = kInf;
};

class IlsRun {
  public:
    IlsRun(const Instance& inst, const IlsConfig& cfg)
        : inst_(inst), cfg_(cfg), rng_(cfg.seed), start_(Clock::now()) {
        if (cfg.mode == IlsMode::Cluster) {
            fixed_ = std::make_unique<FixedPathModel>(inst);
            model_ = fixed_.get();
        } else {
            if (cfg.m_policy == MPolicy::Auto) M_ = choose_M(inst);
            else if (cfg.m_policy == MPolicy::Fixed) M_ = cfg.M;
            if (M_ > 0) {
                penalized_ = m_penalty_costs(inst, M_);
                vertex_ = std::make_unique<VertexModel>(inst, penalized_);
            } else {
                vertex_ = std::make_unique<VertexModel>(inst, inst.costs());
            }
            model_ = vertex_.get();
        }
        LsOptions opt;
        // Under M-penalties every route keeps its penalized depot edges, so the
        // number of used vehicles must stay put.
        opt.allow_empty_routes = !(cfg.mode == IlsMode::Vertex && M_ > 0);
        ls_ = std::make_unique<LocalSearch>(*model_, inst.capacity(), opt);
    }

    IlsResult run() {
        const int shakes = cfg_.shakes > 0 ? cfg_.shakes : default_shakes(inst_, cfg_.mode);
        Incumbent global;
        IlsResult result;
        result.stats.M = M_;
        for (int restart = 0; restart < cfg_.restarts; ++restart) {
            if (restart > 0 && expired()) break;
            ++result.stats.restarts;
            ls_->load(initial_units());
            local_search();
            ++result.stats.local_searches;
            Incumbent inc = snapshot();
            int idle = 0;
            while (idle < shakes && !expired()) {
                restore(inc);
                auto routes = inc.units;
                perturb(routes, *model_, inst_.capacity(), cfg_.mode, rng_);
                ls_->load(std::move(routes));
                local_search();
                ++result.stats.local_searches;
                ++result.stats.shakes;
                if (ls_->cost() < inc.cost - kImprovementEps) {
                    inc = snapshot();
                    idle = 0;
                } else {
                    ++idle;
                }
            }
            if (inc.cost < global.cost - kImprovementEps) global = std::move(inc);
        }
        restore(global);
        result.best = decode(global.units);
        result.stats.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        return result;
    }

  private:
    bool expired() const {
        return cfg_.time_limit > 0 &&
               std::chrono::duration<double>(Clock::now() - start_).count() >= cfg_.time_limit;
    }

    std::vector<std::vector<int>> initial_units() {
        const auto routes = cheapest_insertion(inst_, rng_);
        if (cfg_.mode == IlsMode::Vertex) {
            std::vector<std::vector<int>> units = routes;
            for (auto& r : units)
                for (int& v : r) v = VertexModel::unit_of(v);
            return units;
        }
        const auto seqs = cluster_sequences(inst_, routes);
        for (const auto& r : routes) {
            std::size_t p = 0;
            while (p < r.size()) {
                const int k = inst_.cluster_of(r[p]);
                std::size_t q = p;
                while (q < r.size() && inst_.cluster_of(r[q]) == k) ++q;
                fixed_->set_path(k, std::span<const int>(r).subspan(p, q - p));
                p = q;
            }
        }
        return seqs;
    }

    void local_search() {
        if (cfg_.mode == IlsMode::Vertex) ls_->descend(rng_);
        else cluster_local_search();
        if (cfg_.on_local_optimum) cfg_.on_local_optimum(LocalOptimum{decode(ls_->routes()).routes, ls_->cost()});
    }

    void endpoints(std::span<const int> touched) {
        for (int r : touched)
            if (endpoints_search(*fixed_, ls_->routes()[r])) ls_->refresh_route(r);
    }

    void cluster_local_search() {
        const auto& all = ls_->options().inter;
        std::vector<MoveKind> list = all;
        while (!list.empty()) {
            const std::size_t i = rng_() % list.size();
            const auto best = ls_->best_move(list[i]);
            if (best && best->delta < -kImprovementEps) {
                const auto touched = ls_->apply(*best);
                endpoints(touched);
                if (ls_->intra_route_search(rng_, touched)) endpoints(touched);
                list = all;
            } else {
                list.erase(list.begin() + static_cast<long>(i));
            }
        }
        for (int r = 0; r < ls_->route_count(); ++r)
            if (intra_cluster_search(*fixed_, ls_->routes()[r])) ls_->refresh_route(r);
    }

    Incumbent snapshot() const {
        Incumbent inc;
        inc.units = ls_->routes();
        inc.cost = ls_->cost();
        if (fixed_)
            for (int k = 0; k < fixed_->unit_count(); ++k)
                inc.paths.emplace_back(fixed_->path(k).begin(), fixed_->path(k).end());
        return inc;
    }

    void restore(const Incumbent& inc) {
        if (!fixed_) return;
        for (int k = 0; k < static_cast<int>(inc.paths.size()); ++k) fixed_->set_path(k, inc.paths[k]);
    }

    Solution decode(const std::vector<std::vector<int>>& units) const {
        Solution sol;
        for (const auto& r : units) {
            if (r.empty()) continue;
            auto customers = decode_customers(r, *model_);
            sol.cost += sequence_cost(customers, *model_);
            sol.routes.push_back(std::move(customers));
        }
        if (M_ > 0) {
            // Report true costs.
            sol.cost = 0;
            for (const auto& r : sol.routes) {
                int prev = 0;
                for (int v : r) sol.cost += inst_.cost(prev, v), prev = v;
                sol.cost += inst_.cost(prev, 0);
            }
        }
        return sol;
    }

    const Instance& inst_;
    const IlsConfig& cfg_;
    Rng rng_;
    Clock::time_point start_;
    double M_ = 0;
    CostMatrix penalized_;
    std::unique_ptr<FixedPathModel> fixed_;
    std::unique_ptr<VertexModel> vertex_;
    const ClusterModel* model_ = nullptr;
    std::unique_ptr<LocalSearch> ls_;
};

}  // namespace

IlsResult run_ils(const Instance& inst, const IlsConfig& config) {
    if (config.restarts < 1) throw Error("n_R must be at least 1");
    if (config.shakes < 0) throw Error("n_I must be positive");
    IlsRun run(inst, config);
    return run.run();
}

}  // namespace cluvrp
