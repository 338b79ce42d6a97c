#include "cluvrp/uhgs.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <numeric>

#include "cluvrp/local_search.hpp"
#include "cluvrp/seq_concat.hpp"
#include "cluvrp/simd/minplus.hpp"

namespace cluvrp {

std::vector<int> ox_crossover(const std::vector<int>& p1, const std::vector<int>& p2, int a, int b) {
    const int n = static_cast<int>(p1.size());
    std::vector<int> child(n, -1);
    std::vector<char> used(n, 0);
    for (int i = a; i <= b; ++i) {
        child[i] = p1[i];
        used[p1[i]] = 1;
    }
    int pos = (b + 1) % n;
    for (int t = 0; t < n; ++t) {
        const int v = p2[(b + 1 + t) % n];
        if (used[v]) continue;
        child[pos] = v;
        used[v] = 1;
        pos = (pos + 1) % n;
    }
    return child;
}

std::vector<int> ox_crossover(const std::vector<int>& p1, const std::vector<int>& p2, Rng& rng) {
    const int n = static_cast<int>(p1.size());
    int a = static_cast<int>(rng() % n);
    int b = static_cast<int>(rng() % n);
    if (a > b) std::swap(a, b);
    return ox_crossover(p1, p2, a, b);
}

SplitResult split(const std::vector<int>& tour, const ClusterModel& model, int capacity, int max_routes,
                  double penalty) {
    const int n = static_cast<int>(tour.size());
    SplitResult res;
    if (n == 0) return res;
    const auto& k = simd::active();
    const int mp = model.max_ports();
    std::vector<double> v(mp), w(mp), scratch(static_cast<std::size_t>(mp) * mp);

    // seg[i * n + j] = penalized cost of the route tour[i..j]
    std::vector<double> seg(static_cast<std::size_t>(n) * n, kInf);
    for (int i = 0; i < n; ++i) {
        const auto in = model.depot_costs(tour[i]);
        std::copy(in.begin(), in.end(), v.begin());
        int len = static_cast<int>(in.size());
        int load = 0;
        for (int j = i; j < n; ++j) {
            const int u = tour[j];
            if (j > i) {
                const MatrixView c = model.cross(tour[j - 1], u, scratch);
                k.row(v.data(), len, c.data, c.stride, c.cols, w.data());
                std::swap(v, w);
                len = c.cols;
            }
            const MatrixView m = model.inner(u);
            k.row(v.data(), len, m.data, m.stride, m.cols, w.data());
            std::swap(v, w);
            len = m.cols;
            load += model.load(u);
            const auto out = model.depot_costs(u);
            seg[static_cast<std::size_t>(i) * n + j] =
                k.min_sum(v.data(), out.data(), len) + penalty * std::max(0, load - capacity);
        }
    }

    const int R = std::max(1, std::min(max_routes, n));
    std::vector<std::vector<double>> dp(R + 1, std::vector<double>(n + 1, kInf));
    std::vector<std::vector<int>> pred(R + 1, std::vector<int>(n + 1, -1));
    dp[0][0] = 0;
    for (int r = 1; r <= R; ++r)
        for (int j = 1; j <= n; ++j)
            for (int i = r - 1; i < j; ++i) {
                const double c = dp[r - 1][i] + seg[static_cast<std::size_t>(i) * n + (j - 1)];
                if (c < dp[r][j]) {
                    dp[r][j] = c;
                    pred[r][j] = i;
                }
            }
    int best_r = 1;
    for (int r = 2; r <= R; ++r)
        if (dp[r][n] < dp[best_r][n]) best_r = r;
    res.penalized = dp[best_r][n];
    int j = n;
    for (int r = best_r; r > 0; --r) {
        const int i = pred[r][j];
        res.routes.emplace_back(tour.begin() + i, tour.begin() + j);
        j = i;
    }
    std::reverse(res.routes.begin(), res.routes.end());
    return res;
}

double broken_pairs_distance(const std::vector<int>& a, const std::vector<int>& b) {
    const int n = static_cast<int>(a.size());
    if (n < 2) return 0;
    std::vector<int> succ(n), pred(n);
    for (int i = 0; i < n; ++i) {
        succ[b[i]] = b[(i + 1) % n];
        pred[b[i]] = b[(i + n - 1) % n];
    }
    int broken = 0;
    for (int i = 0; i < n; ++i) {
        const int x = a[i];
        const int y = a[(i + 1) % n];
        if (succ[x] != y && pred[x] != y) ++broken;
    }
    return static_cast<double>(broken) / n;
}

void update_biased_fitness(std::vector<Individual>& pop, int n_close, double elite_weight, double penalty) {
    const int size = static_cast<int>(pop.size());
    for (auto& ind : pop) {
        ind.diversity = 0;
        ind.fitness = 0;
        ind.clone = false;
    }
    if (size <= 1) return;
    std::vector<std::vector<double>> dist(size, std::vector<double>(size, 0));
    for (int i = 0; i < size; ++i)
        for (int j = i + 1; j < size; ++j) dist[i][j] = dist[j][i] = broken_pairs_distance(pop[i].tour, pop[j].tour);
    for (int i = 0; i < size; ++i) {
        std::vector<double> d;
        for (int j = 0; j < size; ++j)
            if (j != i) d.push_back(dist[i][j]);
        std::sort(d.begin(), d.end());
        const int take = std::min<int>(n_close, static_cast<int>(d.size()));
        pop[i].diversity = std::accumulate(d.begin(), d.begin() + take, 0.0) / take;
        pop[i].clone = d.front() == 0;
    }
    std::vector<int> by_cost(size), by_div(size);
    std::iota(by_cost.begin(), by_cost.end(), 0);
    std::iota(by_div.begin(), by_div.end(), 0);
    std::stable_sort(by_cost.begin(), by_cost.end(),
                     [&](int x, int y) { return pop[x].penalized(penalty) < pop[y].penalized(penalty); });
    std::stable_sort(by_div.begin(), by_div.end(), [&](int x, int y) { return pop[x].diversity > pop[y].diversity; });
    const double scale = size - 1;
    for (int r = 0; r < size; ++r) {
        pop[by_cost[r]].fitness += r / scale;
        pop[by_div[r]].fitness += (1 - elite_weight) * r / scale;
    }
}

double adapt_penalty(double penalty, double feasible_fraction, double target, double mean_cost) {
    if (feasible_fraction < target) penalty *= 1.2;
    else if (feasible_fraction > target) penalty /= 1.2;
    return std::clamp(penalty, 0.01 * mean_cost, 1000 * mean_cost);
}

namespace {

using Clock = std::chrono::steady_clock;

class Uhgs {
  public:
    Uhgs(const Instance& inst, const PathCostTable& table, const UhgsConfig& cfg)
        : inst_(inst), cfg_(cfg), model_(inst, table), rng_(cfg.seed), start_(Clock::now()) {
        LsOptions opt;
        opt.inter = {MoveKind::Cross, MoveKind::TwoOptStar, MoveKind::TwoOptStarReversed};
        opt.intra = {MoveKind::TwoOpt, MoveKind::OrOpt};
        opt.max_oropt = 2;
        opt.segment_reversal = true;
        opt.hard_capacity = false;
        ls_ = std::make_unique<LocalSearch>(model_, inst.capacity(), opt);
        mean_cost_ = inst.costs().mean_offdiagonal();
        int max_demand = 1;
        for (int v = 1; v <= inst.customers(); ++v) max_demand = std::max(max_demand, inst.demand(v));
        penalty_ = std::clamp(inst.costs().max_cost() / max_demand, 0.01 * mean_cost_, 1000 * mean_cost_);
    }

    UhgsResult run() {
        const int N = inst_.cluster_count();
        const int init = cfg_.initial_size > 0 ? cfg_.initial_size : 4 * cfg_.mu_min;
        for (int i = 0; i < init && !expired(); ++i) {
            std::vector<int> tour(N);
            std::iota(tour.begin(), tour.end(), 0);
            std::shuffle(tour.begin(), tour.end(), rng_);
            offspring(std::move(tour));
        }
        long idle = 0;
        while (idle < cfg_.it_max && !expired()) {
            const double before = best_.cost;
            const bool had = has_best_;
            const Individual& p1 = tournament();
            const Individual& p2 = tournament();
            auto child = ox_crossover(p1.tour, p2.tour, rng_);
            offspring(std::move(child));
            ++stats_.iterations;
            if (has_best_ && (!had || best_.cost < before - kImprovementEps)) idle = 0;
            else ++idle;
            stats_.best_trace.push_back(has_best_ ? best_.cost : kInf);
        }
        if (!has_best_) throw Error("no feasible solution found");
        UhgsResult res;
        for (const auto& r : best_.routes)
            if (!r.empty()) res.best.routes.push_back(decode_customers(r, model_));
        res.best.cost = best_.cost;
        stats_.penalty = penalty_;
        stats_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        res.stats = stats_;
        return res;
    }

  private:
    bool expired() const {
        return cfg_.time_limit > 0 &&
               std::chrono::duration<double>(Clock::now() - start_).count() >= cfg_.time_limit;
    }

    void educate(Individual& ind, double penalty) {
        ls_->set_penalty(penalty);
        auto routes = ind.routes;
        routes.resize(std::max<std::size_t>(routes.size(), static_cast<std::size_t>(inst_.fleet())));
        ls_->load(std::move(routes));
        ls_->descend(rng_);
        ind.routes = ls_->routes();
        ind.cost = ls_->cost();
        ind.excess = ls_->capacity_excess();
        ind.tour.clear();
        for (const auto& r : ind.routes) ind.tour.insert(ind.tour.end(), r.begin(), r.end());
        ++stats_.educations;
        ++window_;
        if (ind.feasible()) ++window_feasible_;
        if (window_ >= cfg_.adapt_every) {
            penalty_ = adapt_penalty(penalty_, static_cast<double>(window_feasible_) / window_, cfg_.target_feasible,
                                     mean_cost_);
            window_ = window_feasible_ = 0;
        }
    }

    void offspring(std::vector<int> tour) {
        Individual ind;
        ind.tour = std::move(tour);
        ind.routes = split(ind.tour, model_, inst_.capacity(), inst_.fleet(), penalty_).routes;
        educate(ind, penalty_);
        insert(ind);
        if (!ind.feasible() && std::uniform_real_distribution<double>(0, 1)(rng_) < cfg_.repair_probability) {
            Individual fixed = ind;
            educate(fixed, penalty_ * 10);
            if (fixed.feasible()) insert(fixed);
        }
    }

    void insert(const Individual& ind) {
        if (ind.feasible() && (!has_best_ || ind.cost < best_.cost - kImprovementEps)) {
            best_ = ind;
            has_best_ = true;
        }
        auto& pop = ind.feasible() ? feasible_ : infeasible_;
        pop.push_back(ind);
        if (static_cast<int>(pop.size()) >= cfg_.mu_min + cfg_.mu_gen) survivors(pop);
    }

    // Prune down to mu_min: clones first, then worst biased fitness; the
    // cheapest individual always stays.
    void survivors(std::vector<Individual>& pop) {
        while (static_cast<int>(pop.size()) > cfg_.mu_min) {
            update_biased_fitness(pop, cfg_.n_close, cfg_.elite_weight, penalty_);
            int keep = 0;
            for (int i = 1; i < static_cast<int>(pop.size()); ++i)
                if (pop[i].penalized(penalty_) < pop[keep].penalized(penalty_)) keep = i;
            int worst = -1;
            for (int i = 0; i < static_cast<int>(pop.size()); ++i) {
                if (i == keep) continue;
                if (worst < 0 || (pop[i].clone && !pop[worst].clone) ||
                    (pop[i].clone == pop[worst].clone && pop[i].fitness > pop[worst].fitness))
                    worst = i;
            }
            pop.erase(pop.begin() + worst);
        }
    }

    const Individual& tournament() {
        update_biased_fitness(feasible_, cfg_.n_close, cfg_.elite_weight, penalty_);
        update_biased_fitness(infeasible_, cfg_.n_close, cfg_.elite_weight, penalty_);
        const std::size_t total = feasible_.size() + infeasible_.size();
        auto at = [&](std::size_t i) -> const Individual& {
            return i < feasible_.size() ? feasible_[i] : infeasible_[i - feasible_.size()];
        };
        const Individual& a = at(rng_() % total);
        const Individual& b = at(rng_() % total);
        return a.fitness <= b.fitness ? a : b;
    }

    const Instance& inst_;
    const UhgsConfig& cfg_;
    ExactClusterModel model_;
    Rng rng_;
    Clock::time_point start_;
    std::unique_ptr<LocalSearch> ls_;
    double mean_cost_ = 1;
    double penalty_ = 1;
    int window_ = 0;
    int window_feasible_ = 0;
    std::vector<Individual> feasible_, infeasible_;
    Individual best_;
    bool has_best_ = false;
    UhgsStats stats_;
};

}  // namespace

UhgsResult run_uhgs(const Instance& inst, const PathCostTable& table, const UhgsConfig& config) {
    if (config.mu_min < 1 || config.mu_gen < 1) throw Error("population sizes must be positive");
    Uhgs run(inst, table, config);
    return run.run();
}

}  // namespace cluvrp
