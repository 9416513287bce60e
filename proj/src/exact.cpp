#include "exmix/exact.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "exmix/spectral.hpp"

namespace exmix {

int ExactProcess::state_index(const std::vector<int>& s) const {
    auto it = index.find(s);
    if (it == index.end()) throw ExactError("state_index: unknown state");
    return it->second;
}

namespace {

long count_states(const Graph& g, int k, ProcTag tag) {
    long n = g.n;
    switch (tag) {
        case ProcTag::rw_k: {
            double c = std::pow(static_cast<double>(n), k);
            return c > 1e18 ? -1 : static_cast<long>(c);
        }
        case ProcTag::ex_k: {
            double c = 1;
            for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
            return c > 1e18 ? -1 : static_cast<long>(std::llround(c));
        }
        case ProcTag::ip_k: {
            double c = 1;
            for (int i = 0; i < k; ++i) c *= (n - i);
            return c > 1e18 ? -1 : static_cast<long>(c);
        }
    }
    return -1;
}

void enumerate_tuples(int n, int k, bool distinct, std::vector<std::vector<int>>& out) {
    std::vector<int> cur(k, 0);
    std::function<void(int)> rec = [&](int pos) {
        if (pos == k) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (distinct) {
                bool used = false;
                for (int i = 0; i < pos; ++i)
                    if (cur[i] == v) used = true;
                if (used) continue;
            }
            cur[pos] = v;
            rec(pos + 1);
        }
    };
    rec(0);
}

void enumerate_subsets(int n, int k, std::vector<std::vector<int>>& out) {
    std::vector<int> cur;
    std::function<void(int)> rec = [&](int lo) {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int v = lo; v < n; ++v) {
            cur.push_back(v);
            rec(v + 1);
            cur.pop_back();
        }
    };
    rec(0);
}

}  // namespace

ExactProcess build_exact(const Graph& g, int k, ProcTag tag, long cap, long dense_cap) {
    if (k < 1 || k > g.n) throw ExactError("build_exact: k out of range");
    long count = count_states(g, k, tag);
    if (count < 0 || count > cap)
        throw ExactError("build_exact: state count " +
                         (count < 0 ? std::string("overflow") : std::to_string(count)) +
                         " exceeds cap " + std::to_string(cap));
    if (count > dense_cap)
        throw ExactError("build_exact: state count " + std::to_string(count) +
                         " exceeds dense cap " + std::to_string(dense_cap));
    ExactProcess ep;
    ep.tag = tag;
    ep.n = g.n;
    ep.k = k;
    if (tag == ProcTag::ex_k)
        enumerate_subsets(g.n, k, ep.states);
    else
        enumerate_tuples(g.n, k, tag == ProcTag::ip_k, ep.states);
    for (int i = 0; i < ep.size(); ++i) ep.index[ep.states[i]] = i;

    int S = ep.size();
    ep.Q = Eigen::MatrixXd::Zero(S, S);
    double rate = 1.0 / static_cast<double>(g.d);
    for (int i = 0; i < S; ++i) {
        const auto& st = ep.states[i];
        if (tag == ProcTag::rw_k) {
            // Independent walks: each coordinate jumps along its edges.
            for (int c = 0; c < k; ++c)
                for (int u : g.adj[st[c]]) {
                    std::vector<int> to = st;
                    to[c] = u;
                    ep.Q(i, ep.index[to]) += rate;
                }
        } else {
            // Edge {u,v} rings at rate 1/d and swaps endpoint contents.
            for (const auto& e : g.edges) {
                std::vector<int> to = st;
                bool changed = false;
                for (auto& v : to) {
                    if (v == e.first) {
                        v = e.second;
                        changed = true;
                    } else if (v == e.second) {
                        v = e.first;
                        changed = true;
                    }
                }
                if (!changed) continue;
                if (tag == ProcTag::ex_k) std::sort(to.begin(), to.end());
                int j = ep.index[to];
                if (j != i) ep.Q(i, j) += rate;  // both-endpoint rings fix the set
            }
        }
    }
    for (int i = 0; i < S; ++i) ep.Q(i, i) = -ep.Q.row(i).sum();
    return ep;
}

Eigen::MatrixXd exact_transition(const ExactProcess& ep, double t) {
    if (t < 0) throw ExactError("exact_transition: negative time");
    return Eigen::MatrixXd((t * ep.Q).exp());
}

Eigen::VectorXd exact_distribution(const ExactProcess& ep, double t, int start) {
    return exact_transition(ep, t).row(start).transpose();
}

double tv_from_uniform(const Eigen::VectorXd& dist) {
    double pi = 1.0 / static_cast<double>(dist.size());
    double s = 0.0;
    for (int i = 0; i < dist.size(); ++i) s += std::fabs(dist(i) - pi);
    return 0.5 * s;
}

double exact_tv(const ExactProcess& ep, double t, int start) {
    return tv_from_uniform(exact_distribution(ep, t, start));
}

double exact_worst_tv(const ExactProcess& ep, double t) {
    Eigen::MatrixXd P = exact_transition(ep, t);
    double best = 0.0;
    for (int i = 0; i < ep.size(); ++i) best = std::max(best, tv_from_uniform(P.row(i).transpose()));
    return best;
}

double delta_xy(const ExactProcess& ep_ip, const std::vector<int>& x, const std::vector<int>& y,
                double t) {
    Eigen::MatrixXd P = exact_transition(ep_ip, t);
    Eigen::VectorXd a = P.row(ep_ip.state_index(x)).transpose();
    Eigen::VectorXd b = P.row(ep_ip.state_index(y)).transpose();
    return 0.5 * (a - b).cwiseAbs().sum();
}

TriangleChains triangle_chains(const Graph& g, int k, double t, long cap) {
    TriangleChains tc;
    ExactProcess ex = build_exact(g, k, ProcTag::ex_k, cap);
    ExactProcess ip = build_exact(g, k, ProcTag::ip_k, cap);
    tc.ex_tv = exact_worst_tv(ex, t);
    Eigen::MatrixXd P = exact_transition(ip, t);
    for (int i = 0; i < ip.size(); ++i)
        tc.ip_tv = std::max(tc.ip_tv, tv_from_uniform(P.row(i).transpose()));
    for (int i = 0; i < ip.size(); ++i)
        for (int j = i + 1; j < ip.size(); ++j) {
            double d = 0.5 * (P.row(i) - P.row(j)).cwiseAbs().sum();
            tc.max_delta = std::max(tc.max_delta, d);
            // Same (k-1)-prefix, different last coordinate.
            bool same_prefix = std::equal(ip.states[i].begin(), ip.states[i].end() - 1,
                                          ip.states[j].begin());
            if (same_prefix) tc.last_coord = std::max(tc.last_coord, d);
        }
    // Conditional-uniform comparison: law of (w(t), y(t)) against (w(t), U)
    // with U uniform on the complement of w(t).
    int nm1 = ip.n - k + 1;
    for (int s = 0; s < ip.size(); ++s) {
        // Marginal of the (k-1)-prefix under row s.
        std::map<std::vector<int>, double> prefix_mass;
        for (int j = 0; j < ip.size(); ++j) {
            std::vector<int> pre(ip.states[j].begin(), ip.states[j].end() - 1);
            prefix_mass[pre] += P(s, j);
        }
        double tv = 0.0;
        for (int j = 0; j < ip.size(); ++j) {
            std::vector<int> pre(ip.states[j].begin(), ip.states[j].end() - 1);
            double q = prefix_mass[pre] / static_cast<double>(nm1);
            tv += std::fabs(P(s, j) - q);
        }
        tc.cond_uniform = std::max(tc.cond_uniform, 0.5 * tv);
    }
    return tc;
}

double exact_mix_time(const ExactProcess& ep, double eps) {
    if (eps <= 0 || eps >= 1) throw ExactError("exact_mix_time: eps out of (0,1)");
    auto f = [&](double t) { return exact_worst_tv(ep, t); };
    // Gap of the process gives the time scale.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-ep.Q);
    double gap = 0.0;
    for (int i = 0; i < ep.size(); ++i)
        if (es.eigenvalues()(i) > 1e-9) {
            gap = es.eigenvalues()(i);
            break;
        }
    double guess = (1.0 / gap) * std::log(ep.size() / eps);
    BisectResult r = bisect_time(f, eps, guess, 1e-6, 1e7);
    if (!r.bracketed) throw ExactError("exact_mix_time: no bracket");
    return r.t;
}

GapTable aldous_check(const Graph& g, const std::vector<int>& k_list, long cap) {
    GapTable gt;
    SpectralData sd = eigendecompose(g);
    gt.rw1_gap = sd.gap();
    auto gap_of = [&](const ExactProcess& ep) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-ep.Q);
        for (int i = 0; i < ep.size(); ++i)
            if (es.eigenvalues()(i) > 1e-9) return es.eigenvalues()(i);
        throw ExactError("aldous_check: degenerate spectrum");
    };
    for (int k : k_list) {
        if (k < g.n) {
            ExactProcess ex = build_exact(g, k, ProcTag::ex_k, cap);
            double gp = gap_of(ex);
            gt.gaps[{"ex", k}] = gp;
            gt.max_discrepancy = std::max(gt.max_discrepancy, std::fabs(gp - gt.rw1_gap));
        }
        ExactProcess ip = build_exact(g, k, ProcTag::ip_k, cap);
        double gp = gap_of(ip);
        gt.gaps[{"ip", k}] = gp;
        // IP(k) gap can only be compared one-way at k = n (easier direction);
        // for k < n it must match exactly.
        if (k < g.n)
            gt.max_discrepancy = std::max(gt.max_discrepancy, std::fabs(gp - gt.rw1_gap));
        else if (gp < gt.rw1_gap - 1e-9)
            throw ExactError("aldous_check: IP(n) gap below RW(1) gap");
    }
    return gt;
}

std::vector<ConjectureRow> conjecture_probe(const Graph& g, int k,
                                            const std::vector<double>& t_grid, long cap) {
    ExactProcess ip = build_exact(g, k, ProcTag::ip_k, cap);
    SpectralData sd = eigendecompose(g);
    long nk = 1;
    for (int i = 0; i < k; ++i) nk *= g.n;
    if (nk > cap) throw ExactError("conjecture_probe: RW(k) state count exceeds cap");
    std::vector<ConjectureRow> rows;
    for (double t : t_grid) {
        Eigen::MatrixXd P = exact_transition(ip, t);
        Eigen::MatrixXd W = heat_kernel(sd, t);
        ConjectureRow row;
        row.t = t;
        int worst = 0;
        for (int s = 0; s < ip.size(); ++s) {
            double tv = tv_from_uniform(P.row(s).transpose());
            if (tv > row.tv_ip) {
                row.tv_ip = tv;
                worst = s;
            }
        }
        // RW(k) from the same worst start: product law over V^k.
        const auto& x = ip.states[worst];
        double pi = std::pow(1.0 / g.n, k);
        std::vector<int> idx(k, 0);
        double acc = 0.0;
        for (;;) {
            double p = 1.0;
            for (int c = 0; c < k; ++c) p *= W(x[c], idx[c]);
            acc += std::fabs(p - pi);
            int c = k - 1;
            while (c >= 0 && ++idx[c] == g.n) idx[c--] = 0;
            if (c < 0) break;
        }
        row.tv_rw = 0.5 * acc;
        row.ip_exceeds_rw = row.tv_ip > row.tv_rw + 1e-12;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace exmix
