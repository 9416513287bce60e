#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "exmix/graph.hpp"

namespace exmix {

struct ExperimentConfig {
    GraphSpec graph;
    std::vector<int> k_values = {2};
    double alpha = 0.2;
    double c_round = 8.0;
    double c_profile = 16.0;
    double eps = 1e-2;
    double c_hat = 0.1;
    int trials = 10000;
    int goodness_trials = 2000;
    uint64_t master_seed = 1;
    std::vector<std::string> suites;  // spectral | exact | chameleon | diagnostics | ratios
    std::string out_path;
    std::string csv_dir;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

struct CheckRecord {
    std::string name;
    std::string ref;      // short identifier of the law or construction checked
    std::string inputs;
    double measured = 0.0;
    double bound = 0.0;
    double margin = 0.0;
    std::string verdict;  // pass | fail | inconclusive | report-only
    double runtime_ms = 0.0;
};

struct ReportDocument {
    std::string config_json;
    uint64_t master_seed = 0;
    std::string environment;
    std::vector<CheckRecord> checks;

    int failures() const;
    std::string to_json(bool with_timestamps = false) const;
    void write_csv(const std::string& dir) const;
};

ReportDocument run_suite(const ExperimentConfig& cfg);

struct RatioRow {
    std::string graph;
    int k = 0;
    double mix_ex = 0.0;
    double mix_rw_k = 0.0;
    double rel = 0.0;
    double r_star = 0.0;
    double general_shape = 0.0;   // mix_ex / ((rel + r_star) log(4n))
    double oliveira_ratio = 0.0;  // mix_ex / mix_rw_k
    double degree_shape = 0.0;    // mix_ex / (rel log(4n))
    double diameter_shape = 0.0;  // mix_ex / (diam^2 log(k+1))
    bool exact = true;            // false when Monte Carlo proxy mixing was used
};

std::vector<RatioRow> theorem_ratios(const ExperimentConfig& cfg);

// Monte Carlo proxy for EX(k) mixing on instances beyond the exact caps:
// total variation of a half-space occupancy statistic against its
// hypergeometric stationary law, bisected over t (documented lower-bound
// bias: a statistic can only under-estimate the true distance).
double mc_proxy_mix_time(const Graph& g, int k, const std::vector<int>& half, double eps,
                         int trials, uint64_t seed);

}  // namespace exmix
