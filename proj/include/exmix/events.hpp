#pragma once

#include <cstdint>
#include <vector>

#include "exmix/graph.hpp"
#include "exmix/rng.hpp"

namespace exmix {

enum class StreamMode { standard, modified };

// One ring of the graphical construction: at time t the edge with this index
// rings; in modified mode the fair coin decides whether the swap happens.
struct Event {
    double t;
    int edge;
    uint8_t coin;  // always 1 in standard mode
};

// Time-ordered realization of the (modified) graphical construction on a
// fixed horizon. Global Poisson rate |E|/d (standard) or 2|E|/d (modified),
// edges uniform, coins fair, fully reproducible from the seed.
struct EventStream {
    double horizon = 0.0;
    StreamMode mode = StreamMode::standard;
    uint64_t seed = 0;
    std::vector<Event> events;
};

EventStream sample_events(const Graph& g, double horizon, StreamMode mode, uint64_t seed);

// The permutation I_[s,t]: fwd[v] is the time-t position of the particle that
// was at v at time s.
struct TrajectoryMap {
    std::vector<int> fwd;
    int operator()(int v) const { return fwd[v]; }
};

TrajectoryMap interval_map(const Graph& g, const EventStream& es, double s, double t);
TrajectoryMap compose(const TrajectoryMap& later, const TrajectoryMap& earlier);

// Incremental interval-map walker over a materialized stream.
class StreamWalker {
public:
    StreamWalker(const Graph& g, const EventStream& es);
    void advance_to(double t);  // applies all events in (now, t]
    double now() const { return now_; }
    int position_of(int v) const { return pos_[v]; }      // I_[0,now](v)
    int occupant_of(int u) const { return inv_[u]; }      // I^{-1}_[0,now](u)
    const std::vector<int>& positions() const { return pos_; }

private:
    const Graph* g_;
    const EventStream* es_;
    std::size_t next_ = 0;
    double now_ = 0.0;
    std::vector<int> pos_, inv_;
};

// RW(1), EX(k) and IP(k) trajectories driven by one stream: positions of the
// initial tuple at each query time (times are sorted ascending before use).
// EX is the sorted projection of IP.
struct ProcessPaths {
    std::vector<int> rw;                      // first coordinate's position
    std::vector<std::vector<int>> ip;         // labelled tuple per time
    std::vector<std::vector<int>> ex;         // sorted occupied set per time
};

ProcessPaths run_processes(const Graph& g, const EventStream& es,
                           const std::vector<int>& init, std::vector<double> times);

// Number of interactions in [0,t] of the particles starting at a and b: rings
// of the edge currently joining them, both coin outcomes counted.
long interaction_count(const Graph& g, const EventStream& es, int a, int b, double t);

// N-hat_t(v): interactions in [0,t] of the particle from v with the particles
// that occupy its time-T out-neighbourhood. Adjacency may come from a
// modified graph; interactions themselves always involve real edges only.
long hat_interactions(const Graph& g, const ModifiedGraph& mg, const EventStream& es, int v,
                      double t, double T);

// Unbounded deterministic stream for open-ended runs: events generated on
// demand in seed-determined order.
class LiveStream {
public:
    LiveStream(const Graph& g, StreamMode mode, uint64_t seed);
    const Event& peek();  // next event (generated lazily)
    Event pop();
    double rate() const { return rate_; }

private:
    const Graph* g_;
    StreamMode mode_;
    Rng rng_;
    double rate_;
    double clock_ = 0.0;
    bool have_ = false;
    Event next_{};
};

}  // namespace exmix
