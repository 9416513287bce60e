#pragma once

#include <Eigen/Dense>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "exmix/graph.hpp"

namespace exmix {

struct SpectralError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dense spectral data of the single-walk generator L(x,y) = 1/d for x~y,
// L(x,x) = -deg(x)/d (unit total rate on regular graphs). Eigenvalues are of
// -L, ascending with lambda_1 = 0; eigenvectors are pi-orthonormal with
// f_1 = 1, pi = Unif(V).
struct SpectralData {
    int n = 0;
    Eigen::MatrixXd generator;     // L
    Eigen::VectorXd eigenvalues;   // of -L, ascending
    Eigen::MatrixXd eigenvectors;  // column i is f_{i+1}

    double gap() const { return eigenvalues(1); }
    double rel() const { return 1.0 / gap(); }
    double max_diag_rate() const;  // max_x |L(x,x)|
};

SpectralData eigendecompose(const Graph& g, int dense_cap = 2000);

Eigen::MatrixXd heat_kernel(const SpectralData& sd, double t);
Eigen::VectorXd heat_kernel_row(const SpectralData& sd, int x, double t);

// max_x n P_t(x,x) - 1; equals max_{x,y} |n P_t(x,y) - 1| for these chains.
double diag_linf(const SpectralData& sd, double t);
// max_x ||P_t(x,.) - pi||_TV
double worst_tv(const SpectralData& sd, double t);

// Smallest t with f(t) <= target for non-increasing f; brackets by doubling,
// then bisects to relative tolerance. Returns +inf (flagged via the bool) if
// no bracket is found below t_cap.
struct BisectResult {
    double t = 0.0;
    bool bracketed = true;
};
BisectResult bisect_time(const std::function<double(double)>& f, double target,
                         double t_guess, double rel_tol = 1e-6, double t_cap = 1e9);

struct CLsBracket {
    double lower = 0.0;  // provable sandwich value
    double upper = 0.0;  // min(gap/2, best multi-start numeric minimum)
    double numeric = 0.0;
};

// Multi-start minimization of E(h,h)/Ent_pi(h^2) over the positive orthant.
CLsBracket log_sobolev_bracket(const SpectralData& sd, int restarts = 64,
                               uint64_t seed = 1);

struct MixFunctionals {
    double rel = 0.0;
    std::map<double, double> t_mix;      // total-variation mixing time
    std::map<double, double> t_mix_2;    // L2 mixing time
    std::map<double, double> t_mix_inf;  // L-infinity mixing time
    std::map<double, double> r_star;     // diagonal decay at eps/(log n)^2
    std::map<double, double> t_star;     // diagonal decay at eps/log n
    std::map<double, double> s_star;     // diagonal decay at eps/t_star(eps)
    CLsBracket c_ls;
    bool all_bracketed = true;
};

MixFunctionals mixing_functionals(const SpectralData& sd, const std::vector<double>& eps_list);

struct ProfileTable {
    double eps = 0.0;
    bool exact = false;  // false: heuristic brackets (provenance flag)
    // Step values indexed by support size m = 1..n: Lambda_m = Lambda(m/n).
    std::vector<double> lambda_lo, lambda_hi;  // index m-1
    std::vector<double> phi_lo, phi_hi;        // index m-1, m <= n/2 meaningful
    double t_sp_lo = 0.0, t_sp_hi = 0.0;
    double t_ev_lo = 0.0, t_ev_hi = 0.0;

    double lambda_at(double delta, bool lower) const;
    double phi_at(double delta, bool lower) const;
};

// Exact profiles by subset enumeration for n <= exact_cap, otherwise bracketed
// heuristically (sweep and ball cuts, Cheeger sandwich, gap floor).
ProfileTable profiles(const Graph& g, const SpectralData& sd, double eps,
                      int exact_cap = 20);

// Exact minimum of ||mu - pi||^2_{2,pi} over distributions with
// mu(A) >= pi(A) + delta pi(A^c):  delta^2 (1-piA)/piA.
double lagrange_min_distance(double piA, double delta);

struct LowerBoundResult {
    double t_bound = 0.0;
    bool feasible = false;
    double lambda = 0.0;
    double f_l1 = 0.0, f_l2 = 0.0;
};

// Mixing-time lower bound from the gap eigenfunction: feasibility needs
// ||f||_1 >= k^{-1/4+delta} ||f||_2 and 4 delta log k - log(16/eps) >= 0.
LowerBoundResult thm_lower_bound(const SpectralData& sd, int k, double delta, double eps,
                                 uint64_t seed = 1);

struct InequalityCheck {
    std::string name;
    double lhs = 0.0, rhs = 0.0, margin = 0.0;
    bool pass = false;
    bool report_only = false;
    std::string note;
};

std::vector<InequalityCheck> inequality_suite(const SpectralData& sd,
                                              const ProfileTable& pt,
                                              const MixFunctionals& mf,
                                              uint64_t seed = 1);

}  // namespace exmix
