#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "exmix/graph.hpp"

namespace exmix {

struct ExactError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProcTag { rw_k, ex_k, ip_k };

// Enumerated finite-state process: k independent walks (states V^k), EX(k)
// (k-subsets) or IP(k) (k-tuples of distinct vertices), with symmetric rate
// matrix from per-edge rate 1/d. Stationary law uniform on the state list.
struct ExactProcess {
    ProcTag tag = ProcTag::ex_k;
    int n = 0, k = 0;
    std::vector<std::vector<int>> states;  // tuples, or sorted subsets for EX
    std::map<std::vector<int>, int> index;
    Eigen::MatrixXd Q;

    int size() const { return static_cast<int>(states.size()); }
    int state_index(const std::vector<int>& s) const;
};

// cap bounds the enumerated state count; dense_cap bounds the dense matrix
// work (exponentials, eigensolves).
ExactProcess build_exact(const Graph& g, int k, ProcTag tag, long cap = 200000,
                         long dense_cap = 3000);

// Distribution at time t from a point start, by scaling-and-squaring matrix
// exponential of the rate matrix.
Eigen::VectorXd exact_distribution(const ExactProcess& ep, double t, int start);
Eigen::MatrixXd exact_transition(const ExactProcess& ep, double t);  // e^{tQ}

double tv_from_uniform(const Eigen::VectorXd& dist);
double exact_tv(const ExactProcess& ep, double t, int start);
double exact_worst_tv(const ExactProcess& ep, double t);

// TV between the laws at time t from two starts (Delta_{x,y}(t) for IP).
double delta_xy(const ExactProcess& ep_ip, const std::vector<int>& x,
                const std::vector<int>& y, double t);

// Numeric evaluation of the EX <= IP <= max-Delta chain and its two
// refinements (factor-k interpolation, conditional-uniform comparison).
struct TriangleChains {
    double ex_tv = 0.0;        // worst-start EX(k) TV
    double ip_tv = 0.0;        // worst-start IP(k) TV
    double max_delta = 0.0;    // max over start pairs
    double last_coord = 0.0;   // max over (w,y),(w,z) pairs
    double cond_uniform = 0.0; // max TV(law(w(t),y(t)), law(w(t),U))
};
TriangleChains triangle_chains(const Graph& g, int k, double t, long cap = 200000);

double exact_mix_time(const ExactProcess& ep, double eps);

struct GapTable {
    double rw1_gap = 0.0;
    std::map<std::pair<std::string, int>, double> gaps;  // (process, k) -> gap
    double max_discrepancy = 0.0;
};
GapTable aldous_check(const Graph& g, const std::vector<int>& k_list, long cap = 200000);

struct ConjectureRow {
    double t = 0.0;
    double tv_ip = 0.0;
    double tv_rw = 0.0;
    bool ip_exceeds_rw = false;
};
std::vector<ConjectureRow> conjecture_probe(const Graph& g, int k,
                                            const std::vector<double>& t_grid,
                                            long cap = 200000);

}  // namespace exmix
