#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inp2cpa/cyber_topology.hpp"

// Path-diversity resilience metrics over a directed logical graph:
// path diversity between two paths, k_sd for a vertex pair, effective path
// diversity (EPD) and total graph diversity (TGD, the mean EPD over every
// ordered vertex pair).
namespace inp2cpa::resilience {

struct Path {
    std::vector<std::string> vertices;  // source first, destination last

    bool operator==(const Path&) const = default;
    auto operator<=>(const Path&) const = default;
};

std::string format_path(const Path& p);  // "A->B->C"

struct Bounds {
    std::size_t max_paths = 10'000;
    std::optional<std::size_t> max_hops;  // unset: |V|

    bool operator==(const Bounds&) const = default;
};

enum class Mode { alg2_max, eq3_cumulative };

std::string_view to_string(Mode m);
std::optional<Mode> mode_from_string(std::string_view name);

struct DiversityParams {
    double lambda = 1.0;
    double t_ksd = 0.0;  // diversities must exceed this to count
    Mode mode = Mode::alg2_max;
    std::size_t k_paths = 3;  // eq3_cumulative only
    Bounds bounds;

    bool operator==(const DiversityParams&) const = default;
};

// Throws InvalidParams unless lambda > 0, 0 <= t_ksd < 1, k_paths >= 1 and
// max_paths >= 1.
void check(const DiversityParams& params);

// 1 - |elements(reference) ∩ elements(other)| / |elements(other)|, where a
// path's elements are its directed edges plus its intermediate vertices.
// Throws EndpointMismatch unless both paths join the same two vertices.
double path_diversity(const Path& reference, const Path& other);

// Fewest hops; among equals the lexicographically smallest vertex sequence.
std::optional<Path> shortest_path(const LogicalGraph& graph, std::string_view source,
                                  std::string_view destination);

// Every simple path of at most max_hops edges, in lexicographic order.
// Throws EnumerationBudgetExceeded rather than truncating.
std::vector<Path> all_simple_paths(const LogicalGraph& graph, std::string_view source,
                                   std::string_view destination, const Bounds& bounds = {});

// Largest diversity above t_ksd of any simple path against a shortest path
// p0. When several shortest paths tie, the best p0 is used so the value
// does not depend on vertex names.
double k_sd_max(const LogicalGraph& graph, std::string_view source, std::string_view destination,
                double t_ksd = 0.0, const Bounds& bounds = {});

// Greedy sum: starting from p0, repeatedly add the path whose minimum
// diversity against the already chosen paths is largest, up to k paths,
// stopping once that minimum is <= t_ksd.
double k_sd_cumulative(const LogicalGraph& graph, std::string_view source, std::string_view destination,
                       std::size_t k, double t_ksd = 0.0, const Bounds& bounds = {});

// 1 - exp(-lambda * k_sd)
double effective_path_diversity(double k_sd, double lambda);

// EPD of one ordered pair with k_sd from params.mode. Throws UnknownVertex.
double epd(const LogicalGraph& graph, std::string_view source, std::string_view destination,
           const DiversityParams& params);

enum class Execution { serial, parallel };

// k_sd for every ordered pair (s, d), s != d, in row-major order of the
// sorted vertex list. The parallel and serial paths return identical values.
std::vector<double> pairwise_k_sd(const LogicalGraph& graph, const DiversityParams& params,
                                  Execution execution = Execution::parallel);

// Mean EPD over all ordered pairs; unreachable pairs contribute 0.
// Throws GraphTooSmall below two vertices.
double tgd(const LogicalGraph& graph, const DiversityParams& params, Execution execution = Execution::parallel);

struct PairRecord {
    std::string source;
    std::string destination;
    double k_sd = 0.0;
    std::vector<double> epd;  // one per report lambda

    bool operator==(const PairRecord&) const = default;
};

struct ResilienceReport {
    std::vector<double> lambdas;  // ascending, distinct
    std::vector<PairRecord> pairs;
    std::vector<double> tgd;  // one per lambda
    DiversityParams params;

    bool operator==(const ResilienceReport&) const = default;
};

// k_sd is computed once per pair; EPD and TGD for each lambda.
ResilienceReport resilience_report(const LogicalGraph& graph, std::vector<double> lambdas,
                                   const DiversityParams& params, Execution execution = Execution::parallel);

}  // namespace inp2cpa::resilience
