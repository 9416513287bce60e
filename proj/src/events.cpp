#include "exmix/events.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace exmix {

namespace {

double stream_rate(const Graph& g, StreamMode mode) {
    double base = static_cast<double>(g.num_edges()) / static_cast<double>(g.d);
    return mode == StreamMode::modified ? 2.0 * base : base;
}

}  // namespace

EventStream sample_events(const Graph& g, double horizon, StreamMode mode, uint64_t seed) {
    if (horizon < 0) throw std::invalid_argument("sample_events: negative horizon");
    EventStream es;
    es.horizon = horizon;
    es.mode = mode;
    es.seed = seed;
    Rng rng(seed);
    double rate = stream_rate(g, mode);
    double t = 0.0;
    for (;;) {
        t += rng.exponential(rate);
        if (t > horizon) break;
        Event e;
        e.t = t;
        e.edge = static_cast<int>(rng.below(static_cast<uint64_t>(g.num_edges())));
        e.coin = mode == StreamMode::modified ? static_cast<uint8_t>(rng.bernoulli(0.5)) : 1;
        es.events.push_back(e);
    }
    return es;
}

TrajectoryMap interval_map(const Graph& g, const EventStream& es, double s, double t) {
    if (s < 0 || t < s || t > es.horizon)
        throw std::out_of_range("interval_map: interval outside horizon");
    TrajectoryMap m;
    m.fwd.resize(g.n);
    std::iota(m.fwd.begin(), m.fwd.end(), 0);
    std::vector<int> inv = m.fwd;
    auto lo = std::lower_bound(es.events.begin(), es.events.end(), s,
                               [](const Event& e, double v) { return e.t <= v; });
    for (auto it = lo; it != es.events.end() && it->t <= t; ++it) {
        if (!it->coin) continue;
        auto [u, v] = g.edges[it->edge];
        int x = inv[u], y = inv[v];
        m.fwd[x] = v;
        m.fwd[y] = u;
        std::swap(inv[u], inv[v]);
    }
    return m;
}

TrajectoryMap compose(const TrajectoryMap& later, const TrajectoryMap& earlier) {
    TrajectoryMap m;
    m.fwd.resize(earlier.fwd.size());
    for (std::size_t v = 0; v < m.fwd.size(); ++v) m.fwd[v] = later.fwd[earlier.fwd[v]];
    return m;
}

StreamWalker::StreamWalker(const Graph& g, const EventStream& es) : g_(&g), es_(&es) {
    pos_.resize(g.n);
    std::iota(pos_.begin(), pos_.end(), 0);
    inv_ = pos_;
}

void StreamWalker::advance_to(double t) {
    const auto& ev = es_->events;
    while (next_ < ev.size() && ev[next_].t <= t) {
        const Event& e = ev[next_++];
        if (e.coin) {
            auto [u, v] = g_->edges[e.edge];
            int x = inv_[u], y = inv_[v];
            pos_[x] = v;
            pos_[y] = u;
            std::swap(inv_[u], inv_[v]);
        }
    }
    now_ = t;
}

ProcessPaths run_processes(const Graph& g, const EventStream& es, const std::vector<int>& init,
                           std::vector<double> times) {
    std::vector<char> seen(g.n, 0);
    for (int v : init) {
        if (v < 0 || v >= g.n) throw std::invalid_argument("run_processes: vertex out of range");
        if (seen[v]) throw std::invalid_argument("run_processes: duplicate initial vertex");
        seen[v] = 1;
    }
    if (init.empty()) throw std::invalid_argument("run_processes: empty initial configuration");
    std::sort(times.begin(), times.end());
    ProcessPaths out;
    StreamWalker w(g, es);
    for (double t : times) {
        w.advance_to(t);
        std::vector<int> tuple(init.size());
        for (std::size_t i = 0; i < init.size(); ++i) tuple[i] = w.position_of(init[i]);
        out.rw.push_back(tuple[0]);
        std::vector<int> set = tuple;
        std::sort(set.begin(), set.end());
        out.ip.push_back(std::move(tuple));
        out.ex.push_back(std::move(set));
    }
    return out;
}

long interaction_count(const Graph& g, const EventStream& es, int a, int b, double t) {
    StreamWalker w(g, es);
    long count = 0;
    for (const Event& e : es.events) {
        if (e.t > t) break;
        auto [u, v] = g.edges[e.edge];
        int pa = w.position_of(a), pb = w.position_of(b);
        if ((u == pa && v == pb) || (u == pb && v == pa)) ++count;
        w.advance_to(e.t);
    }
    return count;
}

long hat_interactions(const Graph& g, const ModifiedGraph& mg, const EventStream& es, int v,
                      double t, double T) {
    if (!(t <= T && T <= es.horizon))
        throw std::out_of_range("hat_interactions: need t <= T <= horizon");
    // One pass: count interactions of v's particle with every other particle
    // up to time t, then read the time-T adjacency.
    std::vector<long> n_t(g.n, 0);
    StreamWalker w(g, es);
    for (const Event& e : es.events) {
        if (e.t > t) break;
        auto [x, y] = g.edges[e.edge];
        int ox = w.occupant_of(x), oy = w.occupant_of(y);
        if (ox == v)
            ++n_t[oy];
        else if (oy == v)
            ++n_t[ox];
        w.advance_to(e.t);
    }
    w.advance_to(T);
    long total = 0;
    for (int u : mg.out_neighbors(w.position_of(v))) total += n_t[w.occupant_of(u)];
    return total;
}

LiveStream::LiveStream(const Graph& g, StreamMode mode, uint64_t seed)
    : g_(&g), mode_(mode), rng_(seed), rate_(stream_rate(g, mode)) {}

const Event& LiveStream::peek() {
    if (!have_) {
        clock_ += rng_.exponential(rate_);
        next_.t = clock_;
        next_.edge = static_cast<int>(rng_.below(static_cast<uint64_t>(g_->num_edges())));
        next_.coin = mode_ == StreamMode::modified ? static_cast<uint8_t>(rng_.bernoulli(0.5)) : 1;
        have_ = true;
    }
    return next_;
}

Event LiveStream::pop() {
    peek();
    have_ = false;
    return next_;
}

}  // namespace exmix
