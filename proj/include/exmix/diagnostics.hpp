#pragma once

#include <cstdint>
#include <vector>

#include "exmix/graph.hpp"
#include "exmix/spectral.hpp"

namespace exmix {

// Expected out-neighbourhood mass e_T(v,S) = sum_{u: v->u} P_T(u,S) and the
// set of vertices where it stays below d_hat (1/32 + |S|/n).
struct NiceReport {
    std::vector<double> e_t;   // per vertex
    std::vector<int> nice;     // sorted members of Nice(S)
    double threshold = 0.0;
    double counting_bound = 0.0;  // on |Nice(S)^c|
    int complement_size = 0;
    double counting_gap = 0.0;    // bound - |Nice^c| (>= 0 always)
    double pi_hit = 0.0;          // Pr_{pi_S}[X_T in Nice(S)]
    double pi_nice = 0.0;
};

// Throws if the deterministic counting bound fails (it cannot, short of a
// bug); S may be empty.
NiceReport nice_set(const ModifiedGraph& mg, const std::vector<int>& S, double T,
                    const SpectralData& sd);

// (1/d) log L(lambda, theta, d, r): the per-degree Chernoff exponent
// -lambda theta + (e^lambda - 1)(1/32 + r/n).
double chernoff_exponent(double lambda, double theta, double s_frac);
// Exponent-minimizing lambda (0 when the bound is vacuous).
double chernoff_lambda_star(double theta, double s_frac);

// m_{eps,n,k} = max{ log(eps n / e^2 k), (eps n / 2k)(1/2 - eps n / k) }.
double black_ld_exponent(double eps, double n, double k);

struct BnGnReport {
    double empirical = 0.0;  // Pr[v in BN | v in N]
    long cond_hits = 0;
    double sigma = 0.0;
    double bound = 1.0;  // L(lambda*, theta, d, |S|)
    double lambda_star = 0.0;
    bool inconclusive = false;  // conditioning event seen < 50 times
    bool ok = true;             // empirical <= bound + 3 sigma
};

BnGnReport bn_gn_estimate(const Graph& g, const std::vector<int>& S, double T, double theta,
                          int trials, const SpectralData& sd, uint64_t seed);

struct QWeightReport {
    double max_q_hat = 0.0;
    double max_q_sigma = 0.0;
    double heat_bound = 0.0;  // max_{z,z'} P_{t_*}(z,z')
    bool max_ok = true;
    long accepted = 0;
    bool inconclusive = false;
    double t_star = 0.0;
    // Weighted-sum statistic over stationary black sets.
    double sum_mean = 0.0;
    double sum_stderr = 0.0;
    double sum_expected = 0.0;  // ((k-1)/n) sum_a Q(a)
    double exceed_frequency = 0.0;  // P[sum > k/n + 1/16], report-only
};

QWeightReport q_weight_checks(const Graph& g, int k, double eps, double T, int trials,
                              const SpectralData& sd, uint64_t seed);

struct BlackLdReport {
    double eps = 0.0;
    double m_value = 0.0;
    double bound = 1.0;  // exp(-d_hat eps m)
    std::vector<double> empirical;  // max over v, per s in the grid
    std::vector<double> sigma;
    bool ok = true;
};

BlackLdReport black_ld_check(const ModifiedGraph& mg, int k, double eps,
                             const std::vector<double>& s_grid, int trials, uint64_t seed);

struct WhiteSetReport {
    std::vector<int> q_set;  // Q(S)
    double size_bound = 0.0; // 8 eps n d_max_in / d_hat
    bool size_checked = false;  // requires T >= rel log(1/eps) and |S| >= n/4
    bool size_ok = true;
    double no_white_bound = 0.0;  // (31/32)^{d_hat/32}
    double no_white_empirical = 0.0;
    double no_white_sigma = 0.0;
    bool no_white_ok = true;
};

WhiteSetReport white_set_checks(const ModifiedGraph& mg, const std::vector<int>& S, double T,
                                double eps, const SpectralData& sd, int trials, uint64_t seed);

struct NaCnaReport {
    struct PairCov {
        int u = 0, v = 0;
        double cov = 0.0;
        double sigma = 0.0;
        bool ok = true;  // cov <= 3 sigma
    };
    std::vector<double> times;
    std::vector<std::vector<PairCov>> pairwise;     // per time
    std::vector<std::vector<PairCov>> conditional;  // per time, conditioned on pilot occupancy
    bool all_ok = true;
    bool stationary_exact_available = false;
    double stationary_cov = 0.0;  // exact, by enumeration
};

NaCnaReport na_cna_tests(const Graph& g, int k, const std::vector<double>& t_grid, int trials,
                         uint64_t seed, long enum_cap = 200000);

// Exact stationary covariance of two occupation indicators under the uniform
// k-subset law, by direct enumeration.
double stationary_pair_covariance(int n, int k);

}  // namespace exmix
