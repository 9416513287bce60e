#include "exmix/graph.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "exmix/rng.hpp"

namespace exmix {

bool Graph::has_edge(int u, int v) const {
    const auto& a = adj[u];
    return std::binary_search(a.begin(), a.end(), v);
}

namespace {

bool connected(int n, const std::vector<std::vector<int>>& adj) {
    if (n == 0) return false;
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : adj[v])
            if (!seen[u]) {
                seen[u] = 1;
                ++cnt;
                q.push(u);
            }
    }
    return cnt == n;
}

}  // namespace

Graph make_graph(int n, std::vector<std::pair<int, int>> edges) {
    if (n <= 0) throw GraphError("make_graph: empty vertex set");
    Graph g;
    g.n = n;
    std::set<std::pair<int, int>> seen;
    g.adj.assign(n, {});
    for (auto& e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first == e.second) throw GraphError("make_graph: self-loop");
        if (e.first < 0 || e.second >= n) throw GraphError("make_graph: vertex out of range");
        if (!seen.insert(e).second) throw GraphError("make_graph: parallel edge");
        g.adj[e.first].push_back(e.second);
        g.adj[e.second].push_back(e.first);
    }
    g.edges.assign(seen.begin(), seen.end());
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    if (!connected(n, g.adj)) throw GraphError("make_graph: graph is disconnected");
    int dmax = 0;
    for (int v = 0; v < n; ++v) dmax = std::max(dmax, g.degree(v));
    g.d = dmax;
    g.regular = true;
    for (int v = 0; v < n; ++v)
        if (g.degree(v) != dmax) g.regular = false;
    g.rate_per_edge = 1.0 / static_cast<double>(g.d);
    return g;
}

Graph complete_graph(int n) {
    if (n < 2) throw GraphError("complete_graph: need n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) e.emplace_back(i, j);
    Graph g = make_graph(n, std::move(e));
    g.vertex_transitive = true;
    return g;
}

Graph cycle_graph(int n) {
    if (n < 3) throw GraphError("cycle_graph: need n >= 3");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
    Graph g = make_graph(n, std::move(e));
    g.vertex_transitive = true;
    return g;
}

Graph path_graph(int n) {
    if (n < 2) throw GraphError("path_graph: need n >= 2");
    std::vector<std::pair<int, int>> e;
    for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return make_graph(n, std::move(e));  // not regular for n >= 3
}

Graph hypercube_graph(int dim) {
    if (dim < 1 || dim > 20) throw GraphError("hypercube_graph: dim out of range");
    int n = 1 << dim;
    std::vector<std::pair<int, int>> e;
    for (int v = 0; v < n; ++v)
        for (int b = 0; b < dim; ++b) {
            int u = v ^ (1 << b);
            if (v < u) e.emplace_back(v, u);
        }
    Graph g = make_graph(n, std::move(e));
    g.vertex_transitive = true;
    return g;
}

Graph torus_graph(int side, int dim) {
    if (side < 3) throw GraphError("torus_graph: need side >= 3 (no parallel edges)");
    if (dim < 1 || dim > 6) throw GraphError("torus_graph: dim out of range");
    long n = 1;
    for (int i = 0; i < dim; ++i) n *= side;
    if (n > 5'000'000) throw GraphError("torus_graph: too large");
    auto idx = [&](const std::vector<int>& c) {
        long v = 0;
        for (int i = 0; i < dim; ++i) v = v * side + c[i];
        return static_cast<int>(v);
    };
    std::vector<std::pair<int, int>> e;
    std::vector<int> c(dim, 0);
    for (long v = 0; v < n; ++v) {
        long t = v;
        for (int i = dim - 1; i >= 0; --i) {
            c[i] = static_cast<int>(t % side);
            t /= side;
        }
        for (int i = 0; i < dim; ++i) {
            std::vector<int> cc = c;
            cc[i] = (c[i] + 1) % side;
            int u = idx(cc);
            e.emplace_back(static_cast<int>(v), u);
        }
    }
    for (auto& pr : e)
        if (pr.first > pr.second) std::swap(pr.first, pr.second);
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    Graph g = make_graph(static_cast<int>(n), std::move(e));
    g.vertex_transitive = true;
    return g;
}

Graph random_regular_graph(int n, int d, uint64_t seed) {
    if (n < 2 || d < 1 || d >= n || (static_cast<long>(n) * d) % 2 != 0)
        throw GraphError("random_regular_graph: invalid (n, d)");
    Rng rng(derive_seed(seed, 0x5e9));
    for (int attempt = 0; attempt < 500; ++attempt) {
        // Configuration model: pair up half-edges, reject on collisions.
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * d);
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < d; ++i) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.below(i)]);
        std::set<std::pair<int, int>> es;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v) {
                ok = false;
                break;
            }
            auto pr = std::minmax(u, v);
            if (!es.insert({pr.first, pr.second}).second) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        try {
            return make_graph(n, std::vector<std::pair<int, int>>(es.begin(), es.end()));
        } catch (const GraphError&) {
            continue;  // disconnected sample
        }
    }
    throw GraphError("random_regular_graph: retries exhausted");
}

Graph cartesian_product(const Graph& g1, const Graph& g2) {
    long n = static_cast<long>(g1.n) * g2.n;
    if (n > 5'000'000) throw GraphError("cartesian_product: too large");
    auto idx = [&](int v1, int v2) { return v1 * g2.n + v2; };
    std::vector<std::pair<int, int>> e;
    for (int v1 = 0; v1 < g1.n; ++v1)
        for (const auto& pr : g2.edges) e.emplace_back(idx(v1, pr.first), idx(v1, pr.second));
    for (const auto& pr : g1.edges)
        for (int v2 = 0; v2 < g2.n; ++v2) e.emplace_back(idx(pr.first, v2), idx(pr.second, v2));
    Graph g = make_graph(static_cast<int>(n), std::move(e));
    g.vertex_transitive = g1.vertex_transitive && g2.vertex_transitive;
    return g;
}

std::vector<std::pair<int, int>> percolation_open_edges(int side, int dim, double p,
                                                        uint64_t seed) {
    Graph torus = torus_graph(side, dim);
    Rng rng(derive_seed(seed, 0xbead));
    std::vector<std::pair<int, int>> open;
    for (const auto& e : torus.edges)
        if (rng.bernoulli(p)) open.push_back(e);
    return open;
}

Graph percolation_giant(int side, int dim, double p, uint64_t seed, int max_tries) {
    if (p <= 0.0 || p > 1.0) throw GraphError("percolation_giant: p out of range");
    long n_torus = 1;
    for (int i = 0; i < dim; ++i) n_torus *= side;
    for (int t = 0; t < max_tries; ++t) {
        auto open = percolation_open_edges(side, dim, p, seed + static_cast<uint64_t>(t));
        // Largest component over the open edges.
        std::vector<std::vector<int>> adj(n_torus);
        for (auto& e : open) {
            adj[e.first].push_back(e.second);
            adj[e.second].push_back(e.first);
        }
        std::vector<int> comp(n_torus, -1);
        int best = -1, best_size = 0, ncomp = 0;
        for (int s = 0; s < n_torus; ++s) {
            if (comp[s] >= 0) continue;
            int size = 0;
            std::queue<int> q;
            q.push(s);
            comp[s] = ncomp;
            while (!q.empty()) {
                int v = q.front();
                q.pop();
                ++size;
                for (int u : adj[v])
                    if (comp[u] < 0) {
                        comp[u] = ncomp;
                        q.push(u);
                    }
            }
            if (size > best_size) {
                best_size = size;
                best = ncomp;
            }
            ++ncomp;
        }
        if (best_size < (n_torus + 1) / 2) continue;  // sub-critical sample; retry
        std::vector<int> relabel(n_torus, -1);
        int m = 0;
        for (int v = 0; v < n_torus; ++v)
            if (comp[v] == best) relabel[v] = m++;
        std::vector<std::pair<int, int>> e;
        for (auto& pr : open)
            if (comp[pr.first] == best && comp[pr.second] == best)
                e.emplace_back(relabel[pr.first], relabel[pr.second]);
        Graph g = make_graph(m, std::move(e));
        g.regular = false;  // usable for walk/spectral experiments only
        return g;
    }
    throw GraphError("percolation_giant: retries exhausted (giant below half the torus)");
}

Graph build_graph(const GraphSpec& spec) {
    if (spec.family == "complete") return complete_graph(spec.n);
    if (spec.family == "cycle") return cycle_graph(spec.n);
    if (spec.family == "path") return path_graph(spec.n);
    if (spec.family == "hypercube") return hypercube_graph(spec.dim);
    if (spec.family == "torus") return torus_graph(spec.side, spec.dim);
    if (spec.family == "random_regular") return random_regular_graph(spec.n, spec.deg, spec.seed);
    if (spec.family == "percolation_giant")
        return percolation_giant(spec.side, spec.dim, spec.p, spec.seed);
    if (spec.family == "file") return load_graph(spec.path);
    if (spec.family == "product") {
        if (!spec.a || !spec.b) throw GraphError("build_graph: product needs two factors");
        return cartesian_product(build_graph(*spec.a), build_graph(*spec.b));
    }
    throw GraphError("build_graph: unknown family '" + spec.family + "'");
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("load_graph: cannot open " + path);
    int n, m;
    if (!(in >> n >> m)) throw GraphError("load_graph: bad header");
    std::vector<std::pair<int, int>> e(m);
    for (int i = 0; i < m; ++i)
        if (!(in >> e[i].first >> e[i].second)) throw GraphError("load_graph: bad edge line");
    return make_graph(n, std::move(e));
}

void save_graph(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("save_graph: cannot open " + path);
    out << g.n << ' ' << g.num_edges() << '\n';
    for (const auto& e : g.edges) out << e.first << ' ' << e.second << '\n';
}

std::vector<int> bfs_distances(const Graph& g, int src) {
    std::vector<int> dist(g.n, -1);
    std::queue<int> q;
    dist[src] = 0;
    q.push(src);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : g.adj[v])
            if (dist[u] < 0) {
                dist[u] = dist[v] + 1;
                q.push(u);
            }
    }
    return dist;
}

ModifiedGraph as_modified(const Graph& g) {
    ModifiedGraph mg;
    mg.base = g;
    mg.d_hat = g.d;
    mg.d_max_in = g.d;
    mg.dummy_out.assign(g.n, {});
    mg.out_adj = g.adj;
    return mg;
}

ModifiedGraph degree_inflate(const Graph& g, int d_hat) {
    if (d_hat < g.d) throw GraphError("degree_inflate: d_hat below base degree");
    ModifiedGraph mg;
    mg.base = g;
    mg.d_hat = d_hat;
    mg.dummy_out.assign(g.n, {});
    mg.out_adj = g.adj;
    std::vector<int> in_deg(g.n);
    for (int v = 0; v < g.n; ++v) in_deg[v] = g.degree(v);
    for (int v = 0; v < g.n; ++v) {
        int need = d_hat - g.degree(v);
        if (need == 0) continue;
        // Breadth-first by distance then index; skip existing neighbours.
        auto dist = bfs_distances(g, v);
        std::vector<int> order(g.n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](int a, int b) { return dist[a] < dist[b]; });
        for (int u : order) {
            if (need == 0) break;
            if (u == v || dist[u] > d_hat) continue;
            if (g.has_edge(v, u)) continue;
            mg.dummy_out[v].push_back(u);
            ++in_deg[u];
            --need;
        }
        if (need > 0)
            throw GraphError("degree_inflate: not enough targets within distance d_hat");
    }
    for (int v = 0; v < g.n; ++v) {
        auto& o = mg.out_adj[v];
        o.insert(o.end(), mg.dummy_out[v].begin(), mg.dummy_out[v].end());
        std::sort(o.begin(), o.end());
    }
    mg.d_max_in = *std::max_element(in_deg.begin(), in_deg.end());
    return mg;
}

SparseSubsetResult sparse_nice_subset(const ModifiedGraph& mg,
                                      const std::map<int, double>& mass, int separation,
                                      const std::vector<int>& candidates) {
    if (separation < 1) throw GraphError("sparse_nice_subset: separation must be >= 1");
    for (const auto& kv : mass)
        if (kv.second < 0) throw GraphError("sparse_nice_subset: negative weight");
    const Graph& g = mg.base;
    auto weight = [&](int v) {
        auto it = mass.find(v);
        return it == mass.end() ? 0.0 : it->second;
    };
    SparseSubsetResult res;
    std::set<int> remaining(candidates.begin(), candidates.end());
    for (int v : remaining) res.total_weight += weight(v);
    // Ball sizes within the candidate set fix the provable weight fraction.
    std::size_t max_ball = 1;
    for (int v : remaining) {
        auto dist = bfs_distances(g, v);
        std::size_t ball = 0;
        for (int u : remaining)
            if (dist[u] >= 0 && dist[u] <= separation) ++ball;
        max_ball = std::max(max_ball, ball);
    }
    res.c_frac = 1.0 / static_cast<double>(max_ball);
    while (!remaining.empty()) {
        int best = -1;
        double best_w = -1.0;
        for (int v : remaining)
            if (weight(v) > best_w) {
                best_w = weight(v);
                best = v;
            }
        res.chosen.push_back(best);
        res.chosen_weight += best_w;
        auto dist = bfs_distances(g, best);
        for (auto it = remaining.begin(); it != remaining.end();) {
            if (dist[*it] >= 0 && dist[*it] <= separation)
                it = remaining.erase(it);
            else
                ++it;
        }
    }
    std::sort(res.chosen.begin(), res.chosen.end());
    return res;
}

GrowthStats growth_stats(const Graph& g) {
    GrowthStats st;
    auto volumes_from = [&](int root) {
        auto dist = bfs_distances(g, root);
        int ecc = *std::max_element(dist.begin(), dist.end());
        std::vector<int> vol(ecc + 1, 0);
        for (int v = 0; v < g.n; ++v) ++vol[dist[v]];
        for (int r = 1; r <= ecc; ++r) vol[r] += vol[r - 1];
        return vol;
    };
    st.ball_volumes = volumes_from(0);
    st.diameter = static_cast<int>(st.ball_volumes.size()) - 1;
    st.root_independent = true;
    for (int r = 1; r < g.n && st.root_independent; ++r)
        if (volumes_from(r) != st.ball_volumes) st.root_independent = false;

    auto inv_growth = [&](int m) {  // R(m) = inf{r : V(r) >= m}; -1 encodes infinity
        for (std::size_t r = 0; r < st.ball_volumes.size(); ++r)
            if (st.ball_volumes[r] >= m) return static_cast<int>(r);
        return -1;
    };
    auto sample = [&](const std::vector<int>& A) {
        if (A.empty() || static_cast<int>(A.size()) > g.n / 2) return;
        std::vector<char> in(g.n, 0);
        for (int v : A) in[v] = 1;
        int boundary = 0;
        for (int v : A)
            for (int u : g.adj[v])
                if (!in[u]) {
                    ++boundary;
                    break;
                }
        GrowthStats::BoundarySample s;
        s.size = static_cast<int>(A.size());
        s.ratio = static_cast<double>(boundary) / static_cast<double>(A.size());
        int R = inv_growth(2 * s.size);
        s.bound = R <= 0 ? 0.0 : 1.0 / (2.0 * R);
        s.ok = s.ratio >= s.bound - 1e-12;
        st.boundary_samples.push_back(s);
    };
    // Balls around vertex 0 and BFS sweep prefixes.
    auto dist = bfs_distances(g, 0);
    for (int r = 0; r <= st.diameter; ++r) {
        std::vector<int> ball;
        for (int v = 0; v < g.n; ++v)
            if (dist[v] <= r) ball.push_back(v);
        sample(ball);
    }
    std::vector<int> order(g.n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });
    for (int m : {g.n / 4, g.n / 3, g.n / 2})
        if (m >= 1) sample(std::vector<int>(order.begin(), order.begin() + m));
    return st;
}

}  // namespace exmix
