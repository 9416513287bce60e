#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exmix/graph.hpp"

namespace exmix {

struct ChamError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ChamColor : char { black = 'B', red = 'R', pink = 'K', white = 'W' };

enum class ChamVariant { fixed, variable };

struct RoundParams {
    double alpha = 0.2;                 // in (0, 1/4)
    ChamVariant variant = ChamVariant::fixed;
    double t_round = 4.0;               // fixed variant round length, > 1
    double burn_in = 1.0;               // duration of each burn-in period
    int goodness_trials = 2000;         // inner Monte Carlo size for p-hat
    int max_rounds = 0;                 // truncation horizon; 0 = 50x expected rounds
    uint64_t seed = 1;
    std::vector<double> round_lengths;  // variable variant: L_i by dyadic index i >= 1
    bool check_invariants = false;

    void validate() const;
    // Round length for a round starting with r reds among n-k+1 non-blacks.
    double round_length(int r, int free_particles) const;
    // Truncation horizon: the configured cap, or 50x the expected number of
    // rounds to absorb the ink walk on {0..N} (diffusive scale over the
    // type-1 rate alpha/2).
    int truncation_rounds(int N) const;
};

// Builds the variable-variant L_i table L_i = C_round / Lambda(C_profile 2^i / n) + 1
// from a profile's step values (lambda_at with lower bracket).
std::vector<double> variable_round_lengths(const std::vector<double>& lambda_by_support,
                                           int n, double c_round, double c_profile);

struct GoodnessResult {
    double h_mean = 0.0;
    double h_stderr = 0.0;
    double p_hat = 0.0;  // empirical P[H >= alpha (|R| ^ |W|)]
    bool good = false;   // h_mean >= 2 alpha (|R| ^ |W|)
};

// Expected-pinkening estimator: evolve the configuration for t time units
// with no recolouring, then mark red-white ringing pairs during (t, t+1].
// Fresh streams, independent of any driving stream.
GoodnessResult estimate_goodness(const Graph& g, const std::vector<ChamColor>& colors,
                                 double t, double alpha, int trials, uint64_t seed);

// Memoization of goodness estimates: p(M) is a function of the configuration,
// so one Monte Carlo estimate per distinct (configuration, horizon) is reused.
class GoodnessCache {
public:
    explicit GoodnessCache(uint64_t seed = 99) : seed_(seed) {}
    const GoodnessResult& get(const Graph& g, const std::vector<ChamColor>& colors, double t,
                              double alpha, int trials);
    std::size_t size() const { return cache_.size(); }

private:
    uint64_t seed_;
    std::map<std::pair<std::string, long>, GoodnessResult> cache_;
};

struct RoundOutcome {
    double end_time = 0.0;
    int type = 2;            // 1 or 2
    bool all_red = false;    // type-1 colour choice
    double p_hat = 0.0;
    double ink_after = 0.0;
    int r_before = 0, w_before = 0;
    int burn_ins_before = 0;  // cumulative burn-in count when the round started
};

enum class ChamEnd { filled, emptied, truncated };

struct ChameleonRunRecord {
    ChamEnd fill = ChamEnd::truncated;
    double end_time = 0.0;
    int burn_ins = 0;     // total burn-in periods
    int p_hat_flags = 0;  // rounds re-classified because p_hat fell below alpha/2
    std::vector<RoundOutcome> rounds;
    // Optional snapshots: (time, total ink, z tuple, per-vertex ink at b).
    struct Snapshot {
        double t = 0.0;
        double ink_total = 0.0;
        std::vector<int> z;
        std::vector<double> ink_at;  // per-vertex ink
    };
    std::vector<Snapshot> snapshots;

    // Total ink at time t, reconstructed from the depinking record (ink only
    // changes at type-1 depinkings).
    double ink_at_time(double t, double ink0 = 1.0) const;
};

// Full chameleon run from blacks w (k-1 distinct vertices) and one red y.
// Burn-ins repeat until the configuration is good; each round is a
// constant-colour phase, a unit pinkening phase capped at 2*ceil(alpha *
// (|R| ^ |W|)) pinks (round-start counts), and a depinking. Ends at
// absorption or after max_rounds.
ChameleonRunRecord run_chameleon(const Graph& g, const std::vector<int>& w, int y,
                                 const RoundParams& params, GoodnessCache* cache = nullptr,
                                 const std::vector<double>& snapshot_times = {});

struct InkIdentityResult {
    double mc_value = 0.0;
    double mc_stderr = 0.0;
    double exact_value = 0.0;
    double z_score = 0.0;
};

// Monte Carlo E[ink_t(b) 1{z(t)=c}] against the exact interchange
// probability P[x(t) = (c,b)] from the dense generator exponential.
InkIdentityResult verify_ink_identity(const Graph& g, const std::vector<int>& w, int y,
                                      double t, const std::vector<int>& c, int b, int trials,
                                      const RoundParams& params, GoodnessCache* cache = nullptr);

// Same Monte Carlo pass, checked against every (c, b) cell; returns the
// largest |z| over cells with meaningful variance.
double ink_identity_max_z(const Graph& g, const std::vector<int>& w, int y, double t,
                          int trials, const RoundParams& params, GoodnessCache* cache = nullptr);

// Round-indexed ink chain conditioned on filling: transitions
// P(r, r+-Delta(r)) = ((r+-Delta)/2r) p with p = alpha/2, absorbing at N.
struct DoobChain {
    int N = 0;  // n - k + 1
    double alpha = 0.0;
    double p = 0.0;

    int delta(int r) const;
    // z-statistic sqrt(I ^ (1-I))/I with I = r/N; zero at r = N.
    double z_stat(int r) const;
};

DoobChain doob_chain(int n, int k, double alpha);

// Exhaustive max over r of E[Z(Y_1) | Y_0 = r] / Z(r); throws unless < 1.
double supermartingale_verify(const DoobChain& chain);

// Mean missing fraction E[1 - Y_i/N] over simulated chain paths from r0.
std::vector<double> simulate_missing_mean(const DoobChain& chain, int steps, int trials,
                                          uint64_t seed, int r0 = 1,
                                          std::vector<double>* stderrs = nullptr);

// Holding-time version: stays at r for L(r) time units, then steps. Returns
// tail statistics of the dyadic upcrossing decomposition.
struct YhatTailStats {
    std::vector<double> t_up_mean;  // E[T_i^up] per dyadic level
    double cross_mean = 0.0;
    double s_mean = 0.0;
    double t_below_mean = 0.0;      // E[T_{[m-1]} | Cross >= 1]
    double tau_mean = 0.0;          // settle time of the holding-time chain
};
YhatTailStats simulate_yhat(const DoobChain& chain, const std::vector<double>& hold_by_level,
                            int trials, uint64_t seed);

struct MissingInkCurve {
    std::vector<double> round_index;
    std::vector<double> missing_mean;     // conditioned on filled runs
    std::vector<double> missing_stderr;
    std::vector<double> bound;            // sqrt(N) c^i + burn-in correction
    int filled_runs = 0;
    bool wide_ci = false;  // fewer than 100 filled runs
};

MissingInkCurve missing_ink_curves(const std::vector<ChameleonRunRecord>& records, int n,
                                   int k, double c_alpha, int max_round_index);

}  // namespace exmix
