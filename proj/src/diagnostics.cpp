#include "exmix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

#include "exmix/events.hpp"
#include "exmix/stats.hpp"

namespace exmix {

NiceReport nice_set(const ModifiedGraph& mg, const std::vector<int>& S, double T,
                    const SpectralData& sd) {
    const Graph& g = mg.base;
    int n = g.n;
    NiceReport rep;
    Eigen::MatrixXd P = heat_kernel(sd, T);
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);  // P_T(u, S)
    for (int u = 0; u < n; ++u)
        for (int s : S) mass(u) += P(u, s);
    rep.e_t.assign(n, 0.0);
    double frac = static_cast<double>(S.size()) / n;
    rep.threshold = mg.d_hat * (1.0 / 32.0 + frac);
    for (int v = 0; v < n; ++v) {
        for (int u : mg.out_neighbors(v)) rep.e_t[v] += mass(u);
        if (rep.e_t[v] < rep.threshold) rep.nice.push_back(v);
    }
    rep.complement_size = n - static_cast<int>(rep.nice.size());
    rep.counting_bound = (1.0 / 32.0 + frac) > 0
                             ? static_cast<double>(mg.d_max_in) / mg.d_hat * S.size() /
                                   (1.0 / 32.0 + frac)
                             : 0.0;
    rep.counting_gap = rep.counting_bound - rep.complement_size;
    if (rep.complement_size > rep.counting_bound + 1e-9)
        throw std::logic_error("nice_set: counting bound violated");
    rep.pi_nice = static_cast<double>(rep.nice.size()) / n;
    if (!S.empty()) {
        double hit = 0.0;
        for (int s : S)
            for (int v : rep.nice) hit += P(s, v);
        rep.pi_hit = hit / static_cast<double>(S.size());
    } else {
        rep.pi_hit = 1.0;
    }
    return rep;
}

double chernoff_exponent(double lambda, double theta, double s_frac) {
    return -lambda * theta + (std::exp(lambda) - 1.0) * (1.0 / 32.0 + s_frac);
}

double chernoff_lambda_star(double theta, double s_frac) {
    double base = 1.0 / 32.0 + s_frac;
    if (theta <= base) return 0.0;
    return std::log(theta / base);
}

double black_ld_exponent(double eps, double n, double k) {
    double a = std::log(eps * n / (std::exp(2.0) * k));
    double b = (eps * n / (2.0 * k)) * (0.5 - eps * n / k);
    return std::max(a, b);
}

BnGnReport bn_gn_estimate(const Graph& g, const std::vector<int>& S, double T, double theta,
                          int trials, const SpectralData& sd, uint64_t seed) {
    if (theta <= 0 || theta >= 1) throw std::invalid_argument("bn_gn_estimate: theta out of (0,1)");
    BnGnReport rep;
    double s_frac = static_cast<double>(S.size()) / g.n;
    rep.lambda_star = chernoff_lambda_star(theta, s_frac);
    rep.bound = std::exp(g.d * chernoff_exponent(rep.lambda_star, theta, s_frac));
    NiceReport nice = nice_set(as_modified(g), S, T, sd);
    std::vector<char> is_nice(g.n, 0);
    for (int v : nice.nice) is_nice[v] = 1;
    long hits = 0, bad = 0;
    for (int trial = 0; trial < trials; ++trial) {
        EventStream es = sample_events(g, T, StreamMode::standard, derive_seed(seed, trial));
        TrajectoryMap m = interval_map(g, es, 0.0, T);
        std::vector<char> occupied(g.n, 0);  // vertices holding particles from S
        for (int s : S) occupied[m(s)] = 1;
        for (int v = 0; v < g.n; ++v) {
            if (!is_nice[v] || !occupied[v]) continue;  // v must lie in N(S)
            ++hits;
            int cnt = 0;
            for (int u : g.adj[v]) cnt += occupied[u];
            if (cnt > theta * g.d) ++bad;
        }
    }
    rep.cond_hits = hits;
    rep.inconclusive = hits < 50;
    if (hits > 0) {
        rep.empirical = static_cast<double>(bad) / hits;
        rep.sigma = std::sqrt(std::max(rep.empirical * (1.0 - rep.empirical), 1e-12) / hits);
        rep.ok = rep.empirical <= rep.bound + 3.0 * rep.sigma;
    }
    return rep;
}

QWeightReport q_weight_checks(const Graph& g, int k, double eps, double T, int trials,
                              const SpectralData& sd, uint64_t seed) {
    if (eps <= 0 || eps >= 1) throw std::invalid_argument("q_weight_checks: eps out of (0,1)");
    QWeightReport rep;
    int n = g.n;
    // t_*(eps): diagonal decay below eps / log n.
    auto diag = [&](double t) { return diag_linf(sd, t); };
    rep.t_star =
        bisect_time(diag, n * eps / std::log(static_cast<double>(n)), sd.rel() * std::log(n))
            .t;
    Eigen::MatrixXd Pt = heat_kernel(sd, rep.t_star);
    rep.heat_bound = Pt.maxCoeff();

    // Conditioned trajectories: x is tracked to v at time T; all (a,u) cells
    // are accumulated from each accepted trial.
    int x = 0, v = g.n - 1;
    std::vector<std::vector<long>> zero_hits(n, std::vector<long>(n, 0));
    long accepted = 0;
    for (int trial = 0; trial < trials; ++trial) {
        EventStream es = sample_events(g, T, StreamMode::modified, derive_seed(seed, trial));
        TrajectoryMap m = interval_map(g, es, 0.0, T);
        if (m(x) != v) continue;
        ++accepted;
        // Interactions of every particle with x's particle during [0, t_*].
        std::vector<long> n_t(n, 0);
        StreamWalker w(g, es);
        for (const Event& e : es.events) {
            if (e.t > rep.t_star) break;
            auto [eu, ev] = g.edges[e.edge];
            int ou = w.occupant_of(eu), ov = w.occupant_of(ev);
            if (ou == x)
                ++n_t[ov];
            else if (ov == x)
                ++n_t[ou];
            w.advance_to(e.t);
        }
        for (int a = 0; a < n; ++a) {
            if (a == x) continue;
            if (n_t[a] == 0) ++zero_hits[a][m(a)];
        }
    }
    rep.accepted = accepted;
    rep.inconclusive = accepted < 50;
    if (accepted == 0) return rep;
    double max_q = 0.0;
    for (int a = 0; a < n; ++a)
        for (int u = 0; u < n; ++u)
            max_q = std::max(max_q, static_cast<double>(zero_hits[a][u]) / accepted);
    rep.max_q_hat = max_q;
    rep.max_q_sigma = std::sqrt(std::max(max_q * (1 - max_q), 1e-12) / accepted);
    rep.max_ok = max_q <= rep.heat_bound + 3.0 * rep.max_q_sigma;

    // Weighted-sum statistic over stationary black (k-1)-sets, with Q-hat for
    // a fixed (u, x, v) read off the same table.
    int u_cell = 0;
    std::vector<double> q_hat(n, 0.0);
    double q_sum = 0.0;
    for (int a = 0; a < n; ++a) {
        q_hat[a] = a == x ? 0.0 : static_cast<double>(zero_hits[a][u_cell]) / accepted;
        q_sum += q_hat[a];
    }
    Rng rng(derive_seed(seed, 0xb1ac));
    RunningStats sums;
    long exceed = 0;
    int draws = std::max(trials, 1000);
    std::vector<int> verts(n);
    for (int i = 0; i < n; ++i) verts[i] = i;
    for (int d = 0; d < draws; ++d) {
        for (int i = 0; i < k - 1; ++i)
            std::swap(verts[i], verts[i + static_cast<int>(rng.below(n - i))]);
        double s = 0.0;
        for (int i = 0; i < k - 1; ++i) s += q_hat[verts[i]];
        sums.add(s);
        if (s > static_cast<double>(k) / n + 1.0 / 16.0) ++exceed;
    }
    rep.sum_mean = sums.mean();
    rep.sum_stderr = sums.stderror();
    rep.sum_expected = (static_cast<double>(k - 1) / n) * q_sum;
    rep.exceed_frequency = static_cast<double>(exceed) / draws;
    return rep;
}

BlackLdReport black_ld_check(const ModifiedGraph& mg, int k, double eps,
                             const std::vector<double>& s_grid, int trials, uint64_t seed) {
    const Graph& g = mg.base;
    if (k < 2 || k > g.n) throw std::invalid_argument("black_ld_check: k out of range");
    BlackLdReport rep;
    rep.eps = eps;
    rep.m_value = black_ld_exponent(eps, g.n, k);
    rep.bound = std::exp(-mg.d_hat * eps * rep.m_value);
    std::vector<int> b0(k - 1);
    for (int i = 0; i < k - 1; ++i) b0[i] = i;
    for (double s : s_grid) {
        std::vector<long> count(g.n, 0);
        for (int trial = 0; trial < trials; ++trial) {
            EventStream es =
                sample_events(g, s, StreamMode::standard, derive_seed(seed, trial * 131 + 7));
            TrajectoryMap m = interval_map(g, es, 0.0, s);
            std::vector<char> black(g.n, 0);
            for (int b : b0) black[m(b)] = 1;
            for (int v = 0; v < g.n; ++v) {
                int cnt = 0;
                for (int u : mg.out_neighbors(v)) cnt += black[u];
                if (cnt >= (static_cast<double>(k) / g.n + eps) * mg.d_hat) ++count[v];
            }
        }
        long worst = *std::max_element(count.begin(), count.end());
        double emp = static_cast<double>(worst) / trials;
        rep.empirical.push_back(emp);
        double sig = std::sqrt(std::max(emp * (1 - emp), 1e-12) / trials);
        rep.sigma.push_back(sig);
        if (emp > rep.bound + 3.0 * sig) rep.ok = false;
    }
    return rep;
}

WhiteSetReport white_set_checks(const ModifiedGraph& mg, const std::vector<int>& S, double T,
                                double eps, const SpectralData& sd, int trials, uint64_t seed) {
    const Graph& g = mg.base;
    int n = g.n;
    WhiteSetReport rep;
    Eigen::MatrixXd P = heat_kernel(sd, T);
    Eigen::VectorXd mass = Eigen::VectorXd::Zero(n);
    for (int u = 0; u < n; ++u)
        for (int s : S) mass(u) += P(u, s);
    for (int v = 0; v < n; ++v) {
        double e = 0.0;
        for (int u : mg.out_neighbors(v)) e += mass(u);
        if (e < mg.d_hat / 16.0) rep.q_set.push_back(v);
    }
    rep.size_bound = 8.0 * eps * n * mg.d_max_in / mg.d_hat;
    bool pre = 4 * static_cast<int>(S.size()) >= n && T >= sd.rel() * std::fabs(std::log(eps));
    rep.size_checked = pre;
    if (pre) rep.size_ok = static_cast<double>(rep.q_set.size()) <= rep.size_bound + 1e-9;

    rep.no_white_bound = std::pow(31.0 / 32.0, mg.d_hat / 32.0);
    std::vector<char> in_q(n, 0);
    for (int v : rep.q_set) in_q[v] = 1;
    if (static_cast<int>(rep.q_set.size()) < n && trials > 0) {
        // Every vertex outside Q(S) must rarely see an all-non-S out-neighbourhood.
        std::vector<long> misses(n, 0);
        for (int trial = 0; trial < trials; ++trial) {
            EventStream es =
                sample_events(g, T, StreamMode::standard, derive_seed(seed, trial));
            TrajectoryMap m = interval_map(g, es, 0.0, T);
            std::vector<char> in_st(n, 0);
            for (int s : S) in_st[m(s)] = 1;
            for (int v = 0; v < n; ++v) {
                if (in_q[v]) continue;
                bool any = false;
                for (int u : mg.out_neighbors(v)) any = any || in_st[u];
                if (!any) ++misses[v];
            }
        }
        for (int v = 0; v < n; ++v) {
            if (in_q[v]) continue;
            double emp = static_cast<double>(misses[v]) / trials;
            if (emp > rep.no_white_empirical) {
                rep.no_white_empirical = emp;
                rep.no_white_sigma = std::sqrt(std::max(emp * (1 - emp), 1e-12) / trials);
            }
        }
        rep.no_white_ok =
            rep.no_white_empirical <= rep.no_white_bound + 3.0 * rep.no_white_sigma;
    }
    return rep;
}

double stationary_pair_covariance(int n, int k) {
    // Direct enumeration over all k-subsets of the occupation product.
    std::vector<int> cur;
    long total = 0, joint = 0, single = 0;
    std::function<void(int)> rec = [&](int lo) {
        if (static_cast<int>(cur.size()) == k) {
            ++total;
            bool has0 = std::find(cur.begin(), cur.end(), 0) != cur.end();
            bool has1 = std::find(cur.begin(), cur.end(), 1) != cur.end();
            joint += has0 && has1;
            single += has0;
            return;
        }
        for (int v = lo; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
    double p2 = static_cast<double>(joint) / total;
    double p1 = static_cast<double>(single) / total;
    return p2 - p1 * p1;
}

NaCnaReport na_cna_tests(const Graph& g, int k, const std::vector<double>& t_grid, int trials,
                         uint64_t seed, long enum_cap) {
    NaCnaReport rep;
    rep.times = t_grid;
    int n = g.n;
    std::vector<int> a0(k);
    for (int i = 0; i < k; ++i) a0[i] = i;
    int pilot = n - 1;  // conditioning vertex for the CNA probe

    // Covariance standard error via the asymptotic variance of the sample
    // covariance: (mu22 - cov^2)/trials.
    struct Acc {
        double sx = 0, sy = 0, sxy = 0;
        long n = 0;
        std::vector<char> xs, ys;
    };
    for (double t : t_grid) {
        std::vector<std::vector<char>> occ(trials, std::vector<char>(n, 0));
        for (int trial = 0; trial < trials; ++trial) {
            EventStream es = sample_events(g, t, StreamMode::standard,
                                           derive_seed(seed, trial * 977 + std::lround(t * 64)));
            TrajectoryMap m = interval_map(g, es, 0.0, t);
            for (int v : a0) occ[trial][m(v)] = 1;
        }
        auto cov_of = [&](int u, int v, const std::vector<int>& subset) {
            NaCnaReport::PairCov pc;
            pc.u = u;
            pc.v = v;
            double sx = 0, sy = 0, sxy = 0;
            for (int t_i : subset) {
                sx += occ[t_i][u];
                sy += occ[t_i][v];
                sxy += occ[t_i][u] & occ[t_i][v];
            }
            double m_ = static_cast<double>(subset.size());
            double mx = sx / m_, my = sy / m_;
            pc.cov = sxy / m_ - mx * my;
            double mu22 = 0;
            for (int t_i : subset)
                mu22 += (occ[t_i][u] - mx) * (occ[t_i][u] - mx) * (occ[t_i][v] - my) *
                        (occ[t_i][v] - my);
            mu22 /= m_;
            pc.sigma = std::sqrt(std::max(mu22 - pc.cov * pc.cov, 1e-12) / m_);
            pc.ok = pc.cov <= 3.0 * pc.sigma;
            return pc;
        };
        std::vector<int> all(trials);
        std::iota(all.begin(), all.end(), 0);
        std::vector<NaCnaReport::PairCov> pairs;
        for (int u = 0; u < n; ++u)
            for (int v = u + 1; v < n; ++v) {
                auto pc = cov_of(u, v, all);
                rep.all_ok = rep.all_ok && pc.ok;
                pairs.push_back(pc);
            }
        rep.pairwise.push_back(std::move(pairs));

        // CNA probe: condition on the pilot vertex's occupancy.
        std::vector<NaCnaReport::PairCov> cond;
        for (int val = 0; val <= 1; ++val) {
            std::vector<int> subset;
            for (int t_i = 0; t_i < trials; ++t_i)
                if (occ[t_i][pilot] == val) subset.push_back(t_i);
            if (static_cast<int>(subset.size()) < 100) continue;
            for (int u = 0; u < std::min(n - 1, 4); ++u)
                for (int v = u + 1; v < std::min(n - 1, 5); ++v) {
                    auto pc = cov_of(u, v, subset);
                    rep.all_ok = rep.all_ok && pc.ok;
                    cond.push_back(pc);
                }
        }
        rep.conditional.push_back(std::move(cond));
    }

    double states = 1;
    for (int i = 0; i < k; ++i) states = states * (n - i) / (i + 1);
    if (states <= static_cast<double>(enum_cap)) {
        rep.stationary_exact_available = true;
        rep.stationary_cov = stationary_pair_covariance(n, k);
    }
    return rep;
}

}  // namespace exmix
