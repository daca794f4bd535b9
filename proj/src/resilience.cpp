#include "inp2cpa/resilience.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <numeric>
#include <set>

#include "inp2cpa/error.hpp"

namespace inp2cpa::resilience {

std::string format_path(const Path& p) {
    std::string out;
    for (std::size_t i = 0; i < p.vertices.size(); ++i) {
        if (i) out += "->";
        out += p.vertices[i];
    }
    return out;
}

std::string_view to_string(Mode m) { return m == Mode::alg2_max ? "alg2_max" : "eq3_cumulative"; }

std::optional<Mode> mode_from_string(std::string_view name) {
    if (name == "alg2_max") return Mode::alg2_max;
    if (name == "eq3_cumulative") return Mode::eq3_cumulative;
    return std::nullopt;
}

void check(const DiversityParams& p) {
    if (!(p.lambda > 0.0) || !std::isfinite(p.lambda)) {
        throw Error(ErrorCode::InvalidParams, "lambda must be a positive number");
    }
    if (!(p.t_ksd >= 0.0 && p.t_ksd < 1.0)) throw Error(ErrorCode::InvalidParams, "t_ksd must lie in [0, 1)");
    if (p.k_paths == 0) throw Error(ErrorCode::InvalidParams, "k_paths must be at least 1");
    if (p.bounds.max_paths == 0) throw Error(ErrorCode::InvalidParams, "max_paths must be at least 1");
}

namespace {

// Vertices are indexed in sorted-name order, so comparing index sequences
// orders paths exactly as comparing name sequences would.
struct IndexedGraph {
    std::vector<std::string> names;
    std::vector<std::vector<int>> out;

    int index(std::string_view name) const {
        auto it = std::lower_bound(names.begin(), names.end(), name);
        if (it == names.end() || *it != name) {
            throw Error(ErrorCode::UnknownVertex, "vertex '" + std::string(name) + "' is not in the graph");
        }
        return static_cast<int>(it - names.begin());
    }
    int size() const { return static_cast<int>(names.size()); }
};

IndexedGraph index_graph(const LogicalGraph& graph) {
    IndexedGraph g;
    g.names = graph.vertices;
    std::sort(g.names.begin(), g.names.end());
    g.names.erase(std::unique(g.names.begin(), g.names.end()), g.names.end());
    g.out.resize(g.names.size());
    for (const auto& [from, to] : graph.directed_edges) {
        if (from == to) continue;
        g.out[static_cast<std::size_t>(g.index(from))].push_back(g.index(to));
    }
    for (auto& adj : g.out) {
        std::sort(adj.begin(), adj.end());
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
    }
    return g;
}

struct IndexedPath {
    std::vector<int> seq;
    std::vector<long long> elements;  // sorted; vertex v -> v, edge (u,v) -> n + u*n + v
};

std::vector<long long> path_elements(const std::vector<int>& seq, long long n) {
    std::vector<long long> el;
    el.reserve(seq.size() * 2);
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (i > 0) el.push_back(seq[i]);
        el.push_back(n + static_cast<long long>(seq[i]) * n + seq[i + 1]);
    }
    std::sort(el.begin(), el.end());
    return el;
}

std::size_t shared_count(const std::vector<long long>& a, const std::vector<long long>& b) {
    std::size_t count = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++count;
            ++i;
            ++j;
        }
    }
    return count;
}

double diversity(const IndexedPath& reference, const IndexedPath& other) {
    return 1.0 - static_cast<double>(shared_count(reference.elements, other.elements)) /
                     static_cast<double>(other.elements.size());
}

std::vector<IndexedPath> enumerate_paths(const IndexedGraph& g, int source, int destination, const Bounds& bounds) {
    std::vector<IndexedPath> paths;
    if (source == destination) return paths;
    const std::size_t max_hops = bounds.max_hops.value_or(static_cast<std::size_t>(g.size()));
    const auto n = static_cast<long long>(g.size());

    std::vector<char> on_path(static_cast<std::size_t>(g.size()), 0);
    std::vector<int> seq{source};
    std::vector<std::size_t> cursor{0};
    on_path[static_cast<std::size_t>(source)] = 1;

    while (!seq.empty()) {
        const int v = seq.back();
        auto& next = cursor.back();
        const auto& adj = g.out[static_cast<std::size_t>(v)];
        if (next == adj.size() || seq.size() - 1 >= max_hops) {
            on_path[static_cast<std::size_t>(v)] = 0;
            seq.pop_back();
            cursor.pop_back();
            continue;
        }
        const int w = adj[next++];
        if (on_path[static_cast<std::size_t>(w)]) continue;
        if (w == destination) {
            if (paths.size() == bounds.max_paths) {
                throw Error(ErrorCode::EnumerationBudgetExceeded,
                            "more than " + std::to_string(bounds.max_paths) + " simple paths from '" +
                                g.names[static_cast<std::size_t>(source)] + "' to '" +
                                g.names[static_cast<std::size_t>(destination)] + "'");
            }
            IndexedPath p;
            p.seq = seq;
            p.seq.push_back(w);
            p.elements = path_elements(p.seq, n);
            paths.push_back(std::move(p));
            continue;
        }
        on_path[static_cast<std::size_t>(w)] = 1;
        seq.push_back(w);
        cursor.push_back(0);
    }
    return paths;
}

std::vector<std::size_t> shortest_indices(const std::vector<IndexedPath>& paths) {
    std::vector<std::size_t> out;
    std::size_t best = SIZE_MAX;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const auto len = paths[i].seq.size();
        if (len < best) {
            best = len;
            out.clear();
        }
        if (len == best) out.push_back(i);
    }
    return out;
}

double k_sd_max_of(const std::vector<IndexedPath>& paths, double t_ksd) {
    double best = 0.0;
    for (const auto p0 : shortest_indices(paths)) {
        for (std::size_t j = 0; j < paths.size(); ++j) {
            if (j == p0) continue;
            const double d = diversity(paths[p0], paths[j]);
            if (d > t_ksd && d > best) best = d;
        }
    }
    return best;
}

double greedy_from(const std::vector<IndexedPath>& paths, std::size_t p0, std::size_t k, double t_ksd) {
    std::vector<char> chosen(paths.size(), 0);
    std::vector<double> min_div(paths.size(), 0.0);
    chosen[p0] = 1;
    for (std::size_t j = 0; j < paths.size(); ++j) {
        if (j != p0) min_div[j] = diversity(paths[p0], paths[j]);
    }
    double sum = 0.0;
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t pick = paths.size();
        for (std::size_t j = 0; j < paths.size(); ++j) {
            if (!chosen[j] && (pick == paths.size() || min_div[j] > min_div[pick])) pick = j;
        }
        if (pick == paths.size() || !(min_div[pick] > t_ksd)) break;
        sum += min_div[pick];
        chosen[pick] = 1;
        for (std::size_t j = 0; j < paths.size(); ++j) {
            if (!chosen[j]) min_div[j] = std::min(min_div[j], diversity(paths[pick], paths[j]));
        }
    }
    return sum;
}

double k_sd_cumulative_of(const std::vector<IndexedPath>& paths, std::size_t k, double t_ksd) {
    double best = 0.0;
    for (const auto p0 : shortest_indices(paths)) best = std::max(best, greedy_from(paths, p0, k, t_ksd));
    return best;
}

double pair_k_sd(const IndexedGraph& g, int s, int d, const DiversityParams& params) {
    const auto paths = enumerate_paths(g, s, d, params.bounds);
    return params.mode == Mode::alg2_max ? k_sd_max_of(paths, params.t_ksd)
                                         : k_sd_cumulative_of(paths, params.k_paths, params.t_ksd);
}

Path to_named(const IndexedGraph& g, const std::vector<int>& seq) {
    Path p;
    for (int v : seq) p.vertices.push_back(g.names[static_cast<std::size_t>(v)]);
    return p;
}

std::pair<int, int> endpoints(const IndexedGraph& g, std::string_view source, std::string_view destination) {
    const int s = g.index(source);
    const int d = g.index(destination);
    if (s == d) throw Error(ErrorCode::InvalidParams, "source and destination are the same vertex");
    return {s, d};
}

// Pair i of the row-major (s, d != s) order.
std::pair<int, int> pair_at(std::size_t i, int n) {
    const auto row = static_cast<int>(i / static_cast<std::size_t>(n - 1));
    const auto col = static_cast<int>(i % static_cast<std::size_t>(n - 1));
    return {row, col < row ? col : col + 1};
}

// Summing in ascending order makes the mean a function of the multiset of
// pair values alone, independent of pair order and thread schedule.
double mean_sorted(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    return sum / static_cast<double>(values.size());
}

void require_two_vertices(const IndexedGraph& g) {
    if (g.size() < 2) throw Error(ErrorCode::GraphTooSmall, "total graph diversity needs at least two vertices");
}

std::vector<double> sorted_lambdas(std::vector<double> lambdas) {
    if (lambdas.empty()) throw Error(ErrorCode::InvalidParams, "at least one lambda is required");
    for (double l : lambdas) {
        if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorCode::InvalidParams, "lambda must be a positive number");
    }
    std::sort(lambdas.begin(), lambdas.end());
    lambdas.erase(std::unique(lambdas.begin(), lambdas.end()), lambdas.end());
    return lambdas;
}

}  // namespace

double path_diversity(const Path& reference, const Path& other) {
    const auto& a = reference.vertices;
    const auto& b = other.vertices;
    if (a.size() < 2 || b.size() < 2 || a.front() != b.front() || a.back() != b.back()) {
        throw Error(ErrorCode::EndpointMismatch,
                    "paths " + format_path(reference) + " and " + format_path(other) + " do not share endpoints");
    }
    // Encode with the vertex names themselves; '\n' cannot occur in an id.
    auto elements = [](const std::vector<std::string>& v) {
        std::set<std::string> el;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (i > 0) el.insert("v\n" + v[i]);
            el.insert("e\n" + v[i] + "\n" + v[i + 1]);
        }
        return el;
    };
    const auto ea = elements(a);
    const auto eb = elements(b);
    std::size_t shared = 0;
    for (const auto& x : eb) shared += ea.count(x);
    return 1.0 - static_cast<double>(shared) / static_cast<double>(eb.size());
}

std::optional<Path> shortest_path(const LogicalGraph& graph, std::string_view source, std::string_view destination) {
    const auto g = index_graph(graph);
    const auto [s, d] = endpoints(g, source, destination);
    const auto n = static_cast<std::size_t>(g.size());

    // Hop distance to the destination over reversed edges.
    std::vector<std::vector<int>> in(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (int v : g.out[u]) in[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
    }
    std::vector<int> dist(n, -1);
    std::vector<int> queue{d};
    dist[static_cast<std::size_t>(d)] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const int v = queue[head];
        for (int u : in[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(u)] < 0) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(u);
            }
        }
    }
    if (dist[static_cast<std::size_t>(s)] < 0) return std::nullopt;

    // Walk forward taking the smallest neighbour that stays on a shortest path.
    std::vector<int> seq{s};
    while (seq.back() != d) {
        const int u = seq.back();
        for (int v : g.out[static_cast<std::size_t>(u)]) {
            if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(u)] - 1) {
                seq.push_back(v);
                break;
            }
        }
    }
    return to_named(g, seq);
}

std::vector<Path> all_simple_paths(const LogicalGraph& graph, std::string_view source, std::string_view destination,
                                   const Bounds& bounds) {
    const auto g = index_graph(graph);
    const auto [s, d] = endpoints(g, source, destination);
    std::vector<Path> out;
    for (const auto& p : enumerate_paths(g, s, d, bounds)) out.push_back(to_named(g, p.seq));
    return out;
}

double k_sd_max(const LogicalGraph& graph, std::string_view source, std::string_view destination, double t_ksd,
                const Bounds& bounds) {
    const auto g = index_graph(graph);
    const auto [s, d] = endpoints(g, source, destination);
    return k_sd_max_of(enumerate_paths(g, s, d, bounds), t_ksd);
}

double k_sd_cumulative(const LogicalGraph& graph, std::string_view source, std::string_view destination,
                       std::size_t k, double t_ksd, const Bounds& bounds) {
    if (k == 0) throw Error(ErrorCode::InvalidParams, "k must be at least 1");
    const auto g = index_graph(graph);
    const auto [s, d] = endpoints(g, source, destination);
    return k_sd_cumulative_of(enumerate_paths(g, s, d, bounds), k, t_ksd);
}

double effective_path_diversity(double k_sd, double lambda) { return -std::expm1(-lambda * k_sd); }

double epd(const LogicalGraph& graph, std::string_view source, std::string_view destination,
           const DiversityParams& params) {
    check(params);
    const auto g = index_graph(graph);
    const auto [s, d] = endpoints(g, source, destination);
    return effective_path_diversity(pair_k_sd(g, s, d, params), params.lambda);
}

std::vector<double> pairwise_k_sd(const LogicalGraph& graph, const DiversityParams& params, Execution execution) {
    check(params);
    const auto g = index_graph(graph);
    const int n = g.size();
    if (n < 2) return {};
    const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1);
    std::vector<double> k_sd(count, 0.0);

    if (execution == Execution::serial) {
        for (std::size_t i = 0; i < count; ++i) {
            const auto [s, d] = pair_at(i, n);
            k_sd[i] = pair_k_sd(g, s, d, params);
        }
        return k_sd;
    }

    std::vector<std::exception_ptr> errors(count);
    const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < total; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            const auto [s, d] = pair_at(idx, n);
            k_sd[idx] = pair_k_sd(g, s, d, params);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return k_sd;
}

double tgd(const LogicalGraph& graph, const DiversityParams& params, Execution execution) {
    check(params);
    require_two_vertices(index_graph(graph));
    auto values = pairwise_k_sd(graph, params, execution);
    for (auto& v : values) v = effective_path_diversity(v, params.lambda);
    return mean_sorted(std::move(values));
}

ResilienceReport resilience_report(const LogicalGraph& graph, std::vector<double> lambdas,
                                   const DiversityParams& params, Execution execution) {
    check(params);
    ResilienceReport report;
    report.lambdas = sorted_lambdas(std::move(lambdas));
    report.params = params;
    const auto g = index_graph(graph);
    require_two_vertices(g);

    const auto k_sd = pairwise_k_sd(graph, params, execution);
    const int n = g.size();
    report.pairs.reserve(k_sd.size());
    for (std::size_t i = 0; i < k_sd.size(); ++i) {
        const auto [s, d] = pair_at(i, n);
        PairRecord rec;
        rec.source = g.names[static_cast<std::size_t>(s)];
        rec.destination = g.names[static_cast<std::size_t>(d)];
        rec.k_sd = k_sd[i];
        for (double l : report.lambdas) rec.epd.push_back(effective_path_diversity(k_sd[i], l));
        report.pairs.push_back(std::move(rec));
    }
    for (std::size_t li = 0; li < report.lambdas.size(); ++li) {
        std::vector<double> column;
        column.reserve(report.pairs.size());
        for (const auto& rec : report.pairs) column.push_back(rec.epd[li]);
        report.tgd.push_back(mean_sorted(std::move(column)));
    }
    return report;
}

}  // namespace inp2cpa::resilience
