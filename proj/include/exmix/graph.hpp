#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace exmix {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Finite simple graph with unit-total-rate edge dynamics: every edge rings at
// rate 1/d where d is the common degree (max degree for irregular graphs,
// which are admitted but flagged).
struct Graph {
    int n = 0;
    int d = 0;
    bool regular = false;
    bool vertex_transitive = false;  // set by builders for known families
    double rate_per_edge = 0.0;      // defaults to 1/d
    std::vector<std::pair<int, int>> edges;  // u < v
    std::vector<std::vector<int>> adj;       // sorted neighbour lists
    std::vector<std::string> labels;         // optional vertex names

    int num_edges() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    bool has_edge(int u, int v) const;
    void require_regular(const char* op) const {
        if (!regular) throw GraphError(std::string(op) + ": graph is not regular");
    }
};

// Builds a validated Graph from an edge list; computes degrees, regularity,
// connectivity (throws if disconnected / self-loop / parallel edge).
Graph make_graph(int n, std::vector<std::pair<int, int>> edges);

struct GraphSpec {
    std::string family;  // complete|cycle|path|hypercube|torus|product|random_regular|percolation_giant|file
    int n = 0;           // complete/cycle/path/random_regular
    int dim = 0;         // hypercube/torus
    int side = 0;        // torus side L
    int deg = 0;         // random_regular
    double p = 0.0;      // percolation keep-probability
    uint64_t seed = 0;
    std::string path;    // file
    std::shared_ptr<GraphSpec> a, b;  // product factors
};

Graph build_graph(const GraphSpec& spec);

Graph complete_graph(int n);
Graph cycle_graph(int n);
Graph path_graph(int n);
Graph hypercube_graph(int dim);
Graph torus_graph(int side, int dim);
Graph random_regular_graph(int n, int d, uint64_t seed);
Graph cartesian_product(const Graph& g1, const Graph& g2);

// Open (kept) torus edges of one percolation sample; exposed so tests can run
// an independent component search on the identical edge set.
std::vector<std::pair<int, int>> percolation_open_edges(int side, int dim, double p,
                                                        uint64_t seed);
// Largest component of bond percolation on the torus, relabelled 0..m-1.
// Resamples (incrementing the seed) up to max_tries times while the giant has
// fewer than half the torus vertices.
Graph percolation_giant(int side, int dim, double p, uint64_t seed, int max_tries = 100);

// Graph file format: "n m" then m lines "u v", 0-based, newline-terminated.
Graph load_graph(const std::string& path);
void save_graph(const Graph& g, const std::string& path);

std::vector<int> bfs_distances(const Graph& g, int src);

// Graph with zero-rate directed dummy edges bringing every out-degree up to
// d_hat. Dummy edges affect adjacency only; they never ring.
struct ModifiedGraph {
    Graph base;
    int d_hat = 0;
    int d_max_in = 0;
    std::vector<std::vector<int>> dummy_out;
    std::vector<std::vector<int>> out_adj;  // base adjacency plus dummies, sorted

    const std::vector<int>& out_neighbors(int v) const { return out_adj[v]; }
};

// Deterministic inflation: dummy targets chosen breadth-first by base-graph
// distance then vertex index, never duplicating a real or dummy edge, all
// within base distance d_hat. Throws if the graph cannot supply enough
// distinct targets.
ModifiedGraph degree_inflate(const Graph& g, int d_hat);

// Wraps a plain graph as a ModifiedGraph with no dummies (d_hat = d).
ModifiedGraph as_modified(const Graph& g);

// Greedy sparse subset: repeatedly take the heaviest remaining candidate and
// drop every candidate within the separation radius (base-graph distance).
// Output is pairwise more than `separation` apart and carries at least a
// 1/(max ball size) fraction of the candidate weight.
struct SparseSubsetResult {
    std::vector<int> chosen;
    double chosen_weight = 0.0;
    double total_weight = 0.0;
    double c_frac = 0.0;  // 1 / max candidate-ball size at the separation radius
};
SparseSubsetResult sparse_nice_subset(const ModifiedGraph& mg,
                                      const std::map<int, double>& mass, int separation,
                                      const std::vector<int>& candidates);

struct GrowthStats {
    std::vector<int> ball_volumes;  // V(0), V(1), ... up to the diameter
    int diameter = 0;
    bool root_independent = false;  // ball volumes agree from every root
    struct BoundarySample {
        int size = 0;
        double ratio = 0.0;  // |interior boundary| / |A|
        double bound = 0.0;  // 1 / (2 R(2|A|))
        bool ok = false;
    };
    std::vector<BoundarySample> boundary_samples;  // balls and BFS sweep sets
};
GrowthStats growth_stats(const Graph& g);

}  // namespace exmix
