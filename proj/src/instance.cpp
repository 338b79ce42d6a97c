#include "cluvrp/instance.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace cluvrp {

double CostMatrix::max_cost() const {
    double best = 0;
    for (double c : cells_) best = std::max(best, c);
    return best;
}

double CostMatrix::mean_offdiagonal() const {
    if (dim_ < 2) return 0;
    double sum = 0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if (i != j) sum += (*this)(i, j);
    return sum / (static_cast<double>(dim_) * (dim_ - 1));
}

bool CostMatrix::is_symmetric() const {
    for (int i = 0; i < dim_; ++i)
        for (int j = i + 1; j < dim_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

double euclidean_cost(Point a, Point b, Rounding rounding) {
    const double d = std::hypot(a.x - b.x, a.y - b.y);
    return rounding == Rounding::NearestInt ? std::floor(d + 0.5) : d;
}

namespace {

void validate(const InstanceData& d) {
    if (d.coords.size() < 2) throw InstanceError("instance needs a depot and at least one customer");
    if (d.demand.size() != d.coords.size()) throw InstanceError("demand vector does not match vertex count");
    if (d.capacity <= 0) throw InstanceError("capacity must be positive");
    if (d.fleet <= 0) throw InstanceError("fleet size must be positive");
    if (d.demand[0] != 0) throw InstanceError("depot demand must be 0");
    const int n = static_cast<int>(d.coords.size()) - 1;
    for (int v = 1; v <= n; ++v) {
        if (d.demand[v] <= 0) throw InstanceError("demand of customer " + std::to_string(v) + " must be positive");
    }
    if (d.clusters.empty()) throw InstanceError("instance has no clusters");
    std::vector<int> seen(n + 1, -1);
    int covered = 0;
    for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        if (d.clusters[k].empty()) throw InstanceError("cluster " + std::to_string(k + 1) + " is empty");
        long load = 0;
        for (int v : d.clusters[k]) {
            if (v == 0) throw InstanceError("the depot cannot belong to a cluster");
            if (v < 0 || v > n) throw InstanceError("cluster member " + std::to_string(v) + " out of range");
            if (seen[v] >= 0) throw InstanceError("duplicate cluster membership of customer " + std::to_string(v));
            seen[v] = static_cast<int>(k);
            load += d.demand[v];
            ++covered;
        }
        if (load > d.capacity)
            throw InstanceError("cluster " + std::to_string(k + 1) + " demand " + std::to_string(load) +
                                " exceeds capacity");
    }
    if (covered != n) {
        for (int v = 1; v <= n; ++v)
            if (seen[v] < 0) throw InstanceError("customer " + std::to_string(v) + " belongs to no cluster");
    }
    if (d.theta && *d.theta < 1) throw InstanceError("theta must be at least 1");
}

}  // namespace

Instance::Instance(InstanceData data) : data_(std::move(data)) {
    validate(data_);
    const int nv = vertices();
    cluster_of_.assign(nv, -1);
    cluster_demand_.assign(data_.clusters.size(), 0);
    for (std::size_t k = 0; k < data_.clusters.size(); ++k) {
        for (int v : data_.clusters[k]) {
            cluster_of_[v] = static_cast<int>(k);
            cluster_demand_[k] += data_.demand[v];
        }
    }
    costs_ = CostMatrix(nv);
    for (int i = 0; i < nv; ++i)
        for (int j = i + 1; j < nv; ++j) {
            const double c = euclidean_cost(data_.coords[i], data_.coords[j], data_.rounding);
            costs_(i, j) = c;
            costs_(j, i) = c;
        }
}

int Instance::max_cluster_size() const {
    std::size_t best = 0;
    for (const auto& c : data_.clusters) best = std::max(best, c.size());
    return static_cast<int>(best);
}

long Instance::total_demand() const {
    return std::accumulate(data_.demand.begin(), data_.demand.end(), 0L);
}

bool operator==(const Instance& a, const Instance& b) {
    const auto& x = a.data_;
    const auto& y = b.data_;
    return x.name == y.name && x.coords == y.coords && x.demand == y.demand && x.capacity == y.capacity &&
           x.fleet == y.fleet && x.clusters == y.clusters && x.rounding == y.rounding && x.theta == y.theta;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t j = i;
        while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
        if (j > i) out.push_back(s.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
T number(std::string_view tok, int line, const char* what) {
    T value{};
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw InstanceError(std::string("malformed ") + what + " '" + std::string(tok) + "'", line);
    return value;
}

enum class Section { None, Coords, Demands, Sets, Depot };

}  // namespace

Instance parse_instance(std::string_view text) {
    InstanceData d;
    int dimension = -1;
    int declared_sets = -1;
    bool have_edge_type = false;
    std::map<int, Point> coords;
    std::map<int, int> demands;
    std::map<int, int> demand_line;
    std::vector<std::vector<int>> sets;
    std::vector<int> set_line;
    std::map<int, int> member_of;
    Section section = Section::None;
    bool saw_eof = false;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size() && !saw_eof) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;

        const auto colon = line.find(':');
        const auto toks = tokens(line);
        const std::string_view head = toks.front();
        const bool is_keyword = !head.empty() && (std::isalpha(static_cast<unsigned char>(head.front())) != 0);

        if (is_keyword) {
            section = Section::None;
            std::string key(trim(colon == std::string_view::npos ? head : line.substr(0, colon)));
            std::string_view value = colon == std::string_view::npos ? std::string_view{} : trim(line.substr(colon + 1));
            if (key == "EOF") {
                saw_eof = true;
            } else if (key == "NODE_COORD_SECTION") {
                section = Section::Coords;
            } else if (key == "DEMAND_SECTION") {
                section = Section::Demands;
            } else if (key == "GVRP_SET_SECTION") {
                section = Section::Sets;
            } else if (key == "DEPOT_SECTION") {
                section = Section::Depot;
            } else if (key == "NAME") {
                d.name = std::string(value);
            } else if (key == "COMMENT" || key == "TYPE") {
                // informational
            } else if (key == "DIMENSION") {
                dimension = number<int>(value, line_no, "DIMENSION");
                if (dimension < 2) throw InstanceError("DIMENSION must be at least 2", line_no);
            } else if (key == "CAPACITY") {
                d.capacity = number<int>(value, line_no, "CAPACITY");
                if (d.capacity <= 0) throw InstanceError("CAPACITY must be positive", line_no);
            } else if (key == "VEHICLES") {
                d.fleet = number<int>(value, line_no, "VEHICLES");
                if (d.fleet <= 0) throw InstanceError("VEHICLES must be positive", line_no);
            } else if (key == "GVRP_SETS") {
                declared_sets = number<int>(value, line_no, "GVRP_SETS");
            } else if (key == "THETA") {
                d.theta = number<double>(value, line_no, "THETA");
            } else if (key == "EDGE_WEIGHT_TYPE") {
                have_edge_type = true;
                if (value == "EUC_2D") d.rounding = Rounding::NearestInt;
                else if (value == "EXACT_2D") d.rounding = Rounding::Exact;
                else throw InstanceError("unsupported EDGE_WEIGHT_TYPE '" + std::string(value) + "'", line_no);
            } else {
                throw InstanceError("unknown keyword '" + key + "'", line_no);
            }
            continue;
        }

        switch (section) {
            case Section::None:
                throw InstanceError("data line outside of any section", line_no);
            case Section::Coords: {
                if (toks.size() != 3) throw InstanceError("NODE_COORD_SECTION expects 'id x y'", line_no);
                const int id = number<int>(toks[0], line_no, "node id");
                if (coords.count(id)) throw InstanceError("duplicate node " + std::to_string(id), line_no);
                coords[id] = Point{number<double>(toks[1], line_no, "coordinate"),
                                   number<double>(toks[2], line_no, "coordinate")};
                break;
            }
            case Section::Demands: {
                if (toks.size() != 2) throw InstanceError("DEMAND_SECTION expects 'id demand'", line_no);
                const int id = number<int>(toks[0], line_no, "node id");
                const int q = number<int>(toks[1], line_no, "demand");
                if (demands.count(id)) throw InstanceError("duplicate demand for node " + std::to_string(id), line_no);
                if (id != 1 && q <= 0)
                    throw InstanceError("demand of node " + std::to_string(id) + " must be positive", line_no);
                demands[id] = q;
                demand_line[id] = line_no;
                break;
            }
            case Section::Sets: {
                if (toks.size() < 3 || toks.back() != "-1")
                    throw InstanceError("GVRP_SET_SECTION expects 'set-id members... -1'", line_no);
                const int set_id = number<int>(toks[0], line_no, "set id");
                if (set_id != static_cast<int>(sets.size()) + 1)
                    throw InstanceError("set ids must be consecutive from 1", line_no);
                std::vector<int> members;
                for (std::size_t t = 1; t + 1 < toks.size(); ++t) {
                    const int id = number<int>(toks[t], line_no, "set member");
                    if (id == 1) throw InstanceError("the depot cannot belong to a cluster", line_no);
                    if (auto it = member_of.find(id); it != member_of.end())
                        throw InstanceError("duplicate cluster membership of node " + std::to_string(id) +
                                                " (sets " + std::to_string(it->second) + " and " +
                                                std::to_string(set_id) + ")",
                                            line_no);
                    member_of[id] = set_id;
                    members.push_back(id - 1);
                }
                sets.push_back(std::move(members));
                set_line.push_back(line_no);
                break;
            }
            case Section::Depot: {
                for (auto t : toks) {
                    const int id = number<int>(t, line_no, "depot id");
                    if (id != -1 && id != 1) throw InstanceError("only node 1 may be the depot", line_no);
                }
                break;
            }
        }
    }

    if (dimension < 0) throw InstanceError("missing DIMENSION");
    if (d.capacity <= 0) throw InstanceError("missing CAPACITY");
    if (!have_edge_type) throw InstanceError("missing EDGE_WEIGHT_TYPE");
    if (static_cast<int>(coords.size()) != dimension)
        throw InstanceError("NODE_COORD_SECTION has " + std::to_string(coords.size()) + " nodes, DIMENSION says " +
                            std::to_string(dimension));
    if (static_cast<int>(demands.size()) != dimension)
        throw InstanceError("DEMAND_SECTION has " + std::to_string(demands.size()) + " entries, DIMENSION says " +
                            std::to_string(dimension));
    for (int id = 1; id <= dimension; ++id) {
        if (!coords.count(id)) throw InstanceError("node " + std::to_string(id) + " has no coordinates");
        if (!demands.count(id)) throw InstanceError("node " + std::to_string(id) + " has no demand");
        d.coords.push_back(coords[id]);
        d.demand.push_back(demands[id]);
    }
    if (d.demand[0] != 0) throw InstanceError("depot demand must be 0", demand_line[1]);

    const int n = dimension - 1;
    if (sets.empty()) {
        for (int v = 1; v <= n; ++v) d.clusters.push_back({v});
    } else {
        for (std::size_t k = 0; k < sets.size(); ++k) {
            long load = 0;
            for (int v : sets[k]) {
                if (v < 1 || v > n) throw InstanceError("set member " + std::to_string(v + 1) + " out of range", set_line[k]);
                load += d.demand[v];
            }
            if (load > d.capacity)
                throw InstanceError("cluster " + std::to_string(k + 1) + " demand " + std::to_string(load) +
                                        " exceeds capacity " + std::to_string(d.capacity),
                                    set_line[k]);
        }
        if (declared_sets >= 0 && declared_sets != static_cast<int>(sets.size()))
            throw InstanceError("GVRP_SETS says " + std::to_string(declared_sets) + " but " +
                                std::to_string(sets.size()) + " sets were listed");
        d.clusters = std::move(sets);
    }
    if (d.fleet == 0) d.fleet = ffd_fleet(d);
    return Instance(std::move(d));
}

Instance read_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError("cannot open instance file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

// ---------------------------------------------------------------------------
// Writing

namespace {

void put_number(std::string& out, double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    out.append(buf, res.ptr);
}

}  // namespace

std::string write_instance(const InstanceData& d) {
    validate(d);
    const int dim = static_cast<int>(d.coords.size());
    std::string out;
    out += "NAME : " + d.name + "\n";
    out += "TYPE : CluVRP\n";
    out += "DIMENSION : " + std::to_string(dim) + "\n";
    out += "CAPACITY : " + std::to_string(d.capacity) + "\n";
    out += "VEHICLES : " + std::to_string(d.fleet) + "\n";
    out += "GVRP_SETS : " + std::to_string(d.clusters.size()) + "\n";
    if (d.theta) {
        out += "THETA : ";
        put_number(out, *d.theta);
        out += "\n";
    }
    out += std::string("EDGE_WEIGHT_TYPE : ") + (d.rounding == Rounding::NearestInt ? "EUC_2D" : "EXACT_2D") + "\n";
    out += "NODE_COORD_SECTION\n";
    for (int v = 0; v < dim; ++v) {
        out += std::to_string(v + 1) + " ";
        put_number(out, d.coords[v].x);
        out += " ";
        put_number(out, d.coords[v].y);
        out += "\n";
    }
    out += "DEMAND_SECTION\n";
    for (int v = 0; v < dim; ++v) out += std::to_string(v + 1) + " " + std::to_string(d.demand[v]) + "\n";
    out += "GVRP_SET_SECTION\n";
    for (std::size_t k = 0; k < d.clusters.size(); ++k) {
        out += std::to_string(k + 1);
        for (int v : d.clusters[k]) out += " " + std::to_string(v + 1);
        out += " -1\n";
    }
    out += "DEPOT_SECTION\n1\n-1\nEOF\n";
    return out;
}

std::string write_instance(const Instance& inst) { return write_instance(inst.data()); }

// ---------------------------------------------------------------------------
// Clustering

int clustered_count(int customers, double theta) {
    if (theta < 1) throw InstanceError("theta must be at least 1");
    const int by_vertices = static_cast<int>(std::ceil((customers + 1) / theta - 1e-9));
    return std::clamp(by_vertices, 1, customers);
}

double infer_theta(int customers, int clusters) {
    for (int t = customers + 1; t >= 1; --t)
        if (clustered_count(customers, t) == clusters) return t;
    return std::round(static_cast<double>(customers) / clusters);
}

int ffd_fleet(const InstanceData& d) {
    std::vector<long> loads;
    for (const auto& c : d.clusters) {
        long q = 0;
        for (int v : c) q += d.demand[v];
        loads.push_back(q);
    }
    std::sort(loads.rbegin(), loads.rend());
    std::vector<long> bins;
    for (long q : loads) {
        auto it = std::find_if(bins.begin(), bins.end(), [&](long b) { return b + q <= d.capacity; });
        if (it == bins.end()) bins.push_back(q);
        else *it += q;
    }
    return std::max<int>(1, static_cast<int>(bins.size()));
}

Instance generate_clustered(const Instance& cvrp, double theta, std::uint64_t seed) {
    const int n = cvrp.customers();
    const int count = clustered_count(n, theta);
    Rng rng(seed);
    auto dist = [&](int a, int b) { return euclidean_cost(cvrp.coord(a), cvrp.coord(b), Rounding::Exact); };

    // Max-min dispersion seeding from a random first customer.
    std::vector<int> seeds;
    std::vector<double> to_seeds(n + 1, kInf);
    seeds.push_back(1 + static_cast<int>(rng() % static_cast<std::uint64_t>(n)));
    std::vector<char> is_seed(n + 1, 0);
    is_seed[seeds[0]] = 1;
    while (static_cast<int>(seeds.size()) < count) {
        const int last = seeds.back();
        int pick = -1;
        for (int v = 1; v <= n; ++v) {
            to_seeds[v] = std::min(to_seeds[v], dist(v, last));
            if (!is_seed[v] && (pick < 0 || to_seeds[v] > to_seeds[pick])) pick = v;
        }
        seeds.push_back(pick);
        is_seed[pick] = 1;
    }

    std::vector<int> owner(n + 1, -1);
    std::vector<long> load(count, 0);
    for (int k = 0; k < count; ++k) owner[seeds[k]] = k;
    for (int v = 1; v <= n; ++v) {
        if (owner[v] >= 0) continue;
        int best = 0;
        for (int k = 1; k < count; ++k)
            if (dist(v, seeds[k]) < dist(v, seeds[best])) best = k;
        owner[v] = best;
    }
    for (int v = 1; v <= n; ++v) load[owner[v]] += cvrp.demand(v);

    // Repair: move the customer of an overloaded cluster that lies closest to
    // some other cluster with room for it.
    const int cap = cvrp.capacity();
    for (;;) {
        int over = -1;
        for (int k = 0; k < count && over < 0; ++k)
            if (load[k] > cap) over = k;
        if (over < 0) break;
        int best_v = -1;
        int best_k = -1;
        double best_d = kInf;
        for (int v = 1; v <= n; ++v) {
            if (owner[v] != over) continue;
            for (int u = 1; u <= n; ++u) {
                const int k = owner[u];
                if (k == over || load[k] + cvrp.demand(v) > cap) continue;
                const double dd = dist(v, u);
                if (dd < best_d) {
                    best_d = dd;
                    best_v = v;
                    best_k = k;
                }
            }
        }
        if (best_v < 0)
            throw InstanceError("cannot repair cluster " + std::to_string(over + 1) +
                                ": no other cluster has room for any of its customers");
        owner[best_v] = best_k;
        load[over] -= cvrp.demand(best_v);
        load[best_k] += cvrp.demand(best_v);
    }

    InstanceData d = cvrp.data();
    d.clusters.assign(count, {});
    for (int v = 1; v <= n; ++v) d.clusters[owner[v]].push_back(v);
    d.theta = theta;
    d.fleet = std::max(cvrp.fleet(), ffd_fleet(d));
    return Instance(std::move(d));
}

Instance random_cvrp(const std::string& name, int customers, int capacity, int max_demand, std::uint64_t seed,
                     Rounding rounding) {
    if (customers < 1) throw InstanceError("need at least one customer");
    if (max_demand < 1 || max_demand > capacity) throw InstanceError("max demand must lie in [1, capacity]");
    Rng rng(seed);
    InstanceData d;
    d.name = name;
    d.capacity = capacity;
    d.rounding = rounding;
    d.coords.push_back({500, 500});
    d.demand.push_back(0);
    long total = 0;
    for (int v = 1; v <= customers; ++v) {
        d.coords.push_back({static_cast<double>(rng() % 1001), static_cast<double>(rng() % 1001)});
        const int q = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_demand));
        d.demand.push_back(q);
        total += q;
        d.clusters.push_back({v});
    }
    d.fleet = static_cast<int>(std::max<long>(1, (total + capacity - 1) / capacity));
    d.fleet = std::max(d.fleet, ffd_fleet(d));
    return Instance(std::move(d));
}

}  // namespace cluvrp
