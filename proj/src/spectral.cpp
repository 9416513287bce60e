#include "exmix/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "exmix/rng.hpp"

namespace exmix {

double SpectralData::max_diag_rate() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::fabs(generator(i, i)));
    return m;
}

SpectralData eigendecompose(const Graph& g, int dense_cap) {
    if (g.n > dense_cap) throw SpectralError("eigendecompose: n exceeds dense solver cap");
    SpectralData sd;
    sd.n = g.n;
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n, g.n);
    double r = 1.0 / static_cast<double>(g.d);
    for (const auto& e : g.edges) {
        L(e.first, e.second) = r;
        L(e.second, e.first) = r;
        L(e.first, e.first) -= r;
        L(e.second, e.second) -= r;
    }
    sd.generator = L;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-L);
    if (es.info() != Eigen::Success)
        throw SpectralError("eigendecompose: eigensolver did not converge");
    sd.eigenvalues = es.eigenvalues();
    // l2-orthonormal -> pi-orthonormal (pi uniform): f = sqrt(n) v.
    sd.eigenvectors = es.eigenvectors() * std::sqrt(static_cast<double>(g.n));
    if (std::fabs(sd.eigenvalues(0)) > 1e-9)
        throw SpectralError("eigendecompose: lambda_1 not zero");
    sd.eigenvalues(0) = 0.0;
    sd.eigenvectors.col(0).setOnes();
    // Invariant checks: pi-orthonormality and generator reconstruction.
    int n = g.n;
    Eigen::MatrixXd gram = sd.eigenvectors.transpose() * sd.eigenvectors / n;
    if ((gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-7)
        throw SpectralError("eigendecompose: eigenvectors not pi-orthonormal");
    Eigen::MatrixXd rec = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        rec += sd.eigenvalues(i) * sd.eigenvectors.col(i) * sd.eigenvectors.col(i).transpose() / n;
    if ((L + rec).cwiseAbs().maxCoeff() > 1e-7)
        throw SpectralError("eigendecompose: reconstruction failed");
    return sd;
}

Eigen::MatrixXd heat_kernel(const SpectralData& sd, double t) {
    if (t < 0) throw SpectralError("heat_kernel: t < 0");
    int n = sd.n;
    Eigen::VectorXd w = (-t * sd.eigenvalues.array()).exp();
    Eigen::MatrixXd P =
        sd.eigenvectors * w.asDiagonal() * sd.eigenvectors.transpose() / static_cast<double>(n);
    // Contract checks: symmetry, stochasticity, positivity, and the identity
    // max_{x,y} |nP(x,y)-1| = max_x nP(x,x)-1.
    double tol = 1e-8 * n;
    if ((P - P.transpose()).cwiseAbs().maxCoeff() > tol)
        throw SpectralError("heat_kernel: asymmetric");
    for (int x = 0; x < n; ++x) {
        if (std::fabs(P.row(x).sum() - 1.0) > tol) throw SpectralError("heat_kernel: bad row sum");
        for (int y = 0; y < n; ++y)
            if (P(x, y) < -tol) throw SpectralError("heat_kernel: negative entry");
    }
    double off = (static_cast<double>(n) * P.array() - 1.0).abs().maxCoeff();
    double diag = (static_cast<double>(n) * P.diagonal().array() - 1.0).maxCoeff();
    if (off > diag + tol) throw SpectralError("heat_kernel: diagonal-dominance identity failed");
    return P;
}

Eigen::VectorXd heat_kernel_row(const SpectralData& sd, int x, double t) {
    Eigen::VectorXd w = (-t * sd.eigenvalues.array()).exp();
    Eigen::VectorXd fx = sd.eigenvectors.row(x).transpose();
    return sd.eigenvectors * (w.cwiseProduct(fx)) / static_cast<double>(sd.n);
}

double diag_linf(const SpectralData& sd, double t) {
    // n P_t(x,x) - 1 = sum_{i>=2} e^{-lambda_i t} f_i(x)^2
    double best = 0.0;
    for (int x = 0; x < sd.n; ++x) {
        double s = 0.0;
        for (int i = 1; i < sd.n; ++i)
            s += std::exp(-sd.eigenvalues(i) * t) * sd.eigenvectors(x, i) * sd.eigenvectors(x, i);
        best = std::max(best, s);
    }
    return best;
}

double worst_tv(const SpectralData& sd, double t) {
    Eigen::MatrixXd P = heat_kernel(sd, t);
    double pi = 1.0 / static_cast<double>(sd.n);
    double best = 0.0;
    for (int x = 0; x < sd.n; ++x) {
        double s = 0.0;
        for (int y = 0; y < sd.n; ++y) s += std::fabs(P(x, y) - pi);
        best = std::max(best, 0.5 * s);
    }
    return best;
}

BisectResult bisect_time(const std::function<double(double)>& f, double target,
                         double t_guess, double rel_tol, double t_cap) {
    BisectResult res;
    if (f(0.0) <= target) {
        res.t = 0.0;
        return res;
    }
    double hi = std::max(t_guess, 1e-6);
    while (f(hi) > target) {
        hi *= 2.0;
        if (hi > t_cap) {
            res.t = std::numeric_limits<double>::infinity();
            res.bracketed = false;
            return res;
        }
    }
    double lo = 0.0;
    if (f(lo) < f(hi)) throw SpectralError("bisect_time: quantity not non-increasing at bracket");
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * std::max(hi, 1e-12); ++it) {
        double mid = 0.5 * (lo + hi);
        if (f(mid) <= target)
            hi = mid;
        else
            lo = mid;
    }
    res.t = hi;
    return res;
}

CLsBracket log_sobolev_bracket(const SpectralData& sd, int restarts, uint64_t seed) {
    int n = sd.n;
    double gap = sd.gap();
    CLsBracket br;
    br.lower = n == 2 ? gap / 2.0
                      : gap * (1.0 - 2.0 / static_cast<double>(n)) /
                            std::log(static_cast<double>(n - 1));
    const Eigen::MatrixXd negL = -sd.generator;
    auto ratio = [&](const Eigen::VectorXd& h) {
        double e = h.dot(negL * h) / n;
        double s = h.squaredNorm() / n;
        double ent = 0.0;
        for (int i = 0; i < n; ++i) {
            double h2 = h(i) * h(i);
            if (h2 > 0) ent += h2 * std::log(h2 / s);
        }
        ent /= n;
        if (ent <= 1e-300) return std::numeric_limits<double>::infinity();
        return e / ent;
    };
    auto grad_ratio = [&](const Eigen::VectorXd& h, double& val) {
        double e = h.dot(negL * h) / n;
        double s = h.squaredNorm() / n;
        Eigen::VectorXd ge = 2.0 * (negL * h) / n;
        double ent = 0.0;
        Eigen::VectorXd gent(n);
        for (int i = 0; i < n; ++i) {
            double h2 = h(i) * h(i);
            double lg = h2 > 0 ? std::log(h2 / s) : 0.0;
            ent += h2 * lg;
            gent(i) = 2.0 * h(i) * lg / n;
        }
        ent /= n;
        val = e / std::max(ent, 1e-300);
        return Eigen::VectorXd(((ge * ent - e * gent) / (ent * ent)).eval());
    };
    double best = gap / 2.0;  // linearization limit is always an upper bound
    Rng rng(derive_seed(seed, 0xc15));
    for (int r = 0; r < restarts; ++r) {
        Eigen::VectorXd x(n);  // h = exp(x)
        if (r == 0) {
            // Start near the constant function displaced along the gap direction.
            for (int i = 0; i < n; ++i) x(i) = 0.05 * sd.eigenvectors(i, 1);
        } else {
            for (int i = 0; i < n; ++i) x(i) = rng.normal();
        }
        double step = 0.25;
        Eigen::VectorXd h = x.array().exp();
        double val = ratio(h);
        for (int it = 0; it < 400; ++it) {
            double cur;
            Eigen::VectorXd gh = grad_ratio(h, cur);
            Eigen::VectorXd gx = gh.cwiseProduct(h);  // chain rule for h = e^x
            double gn = gx.norm();
            if (gn < 1e-12) break;
            Eigen::VectorXd xt = x - (step / gn) * gx;
            Eigen::VectorXd ht = xt.array().exp();
            double vt = ratio(ht);
            if (vt < cur) {
                x = xt;
                h = ht;
                val = vt;
                step *= 1.15;
            } else {
                step *= 0.5;
                if (step < 1e-10) break;
            }
        }
        best = std::min(best, val);
    }
    br.numeric = best;
    br.upper = std::min(best, gap / 2.0);
    // Guard against a numeric artifact dipping below the provable floor.
    br.upper = std::max(br.upper, br.lower);
    return br;
}

MixFunctionals mixing_functionals(const SpectralData& sd, const std::vector<double>& eps_list) {
    MixFunctionals mf;
    mf.rel = sd.rel();
    double n = sd.n;
    double logn = std::log(n);
    auto tv = [&](double t) { return worst_tv(sd, t); };
    auto diag = [&](double t) { return diag_linf(sd, t); };
    for (double eps : eps_list) {
        if (eps <= 0 || eps >= 1) throw SpectralError("mixing_functionals: eps out of (0,1)");
        double guess = mf.rel * std::log(n / eps);
        auto record = [&](std::map<double, double>& m, BisectResult r) {
            if (!r.bracketed) mf.all_bracketed = false;
            m[eps] = r.t;
        };
        record(mf.t_mix, bisect_time(tv, eps, guess));
        record(mf.t_mix_inf, bisect_time(diag, eps, guess));
        record(mf.t_mix_2,
               bisect_time([&](double t) { return std::sqrt(std::max(diag(2 * t), 0.0)); }, eps,
                           guess));
        // Diagonal-decay functionals take max_v P_t(v,v) - 1/n = diag(t)/n.
        record(mf.r_star, bisect_time(diag, n * eps / (logn * logn), guess));
        auto ts = bisect_time(diag, n * eps / logn, guess);
        record(mf.t_star, ts);
        double s_thresh = ts.t > 0 ? n * eps / ts.t : std::numeric_limits<double>::infinity();
        record(mf.s_star, bisect_time(diag, s_thresh, guess));
    }
    mf.c_ls = log_sobolev_bracket(sd);
    return mf;
}

namespace {

// Generalized Rayleigh minimum of E(h,h)/Var(h) over h supported on S.
double support_rayleigh_min(const Eigen::MatrixXd& negL, const std::vector<int>& S, int n) {
    int m = static_cast<int>(S.size());
    Eigen::MatrixXd A(m, m), B(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            A(i, j) = negL(S[i], S[j]);
            B(i, j) = (i == j ? 1.0 : 0.0) - 1.0 / static_cast<double>(n);
        }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(A, B);
    return ges.eigenvalues()(0);
}

double step_integral(const std::function<double(double)>& integrand, double a, double b) {
    if (b <= a) return 0.0;
    // Geometric grid refined until the value moves by less than 1%.
    double ratio = 1.1;
    double prev = -1.0;
    for (int pass = 0; pass < 12; ++pass) {
        double total = 0.0;
        double x = a;
        while (x < b) {
            double xn = std::min(x * ratio, b);
            double mid = std::sqrt(x * xn);
            total += integrand(mid) * std::log(xn / x);
            x = xn;
        }
        if (prev >= 0 && std::fabs(total - prev) <= 0.01 * std::fabs(total)) return total;
        prev = total;
        ratio = std::sqrt(ratio);
    }
    return prev;
}

}  // namespace

double ProfileTable::lambda_at(double delta, bool lower) const {
    int n = static_cast<int>(lambda_lo.size());
    int m = std::clamp(static_cast<int>(std::floor(delta * n)), 1, n);
    return lower ? lambda_lo[m - 1] : lambda_hi[m - 1];
}

double ProfileTable::phi_at(double delta, bool lower) const {
    int n = static_cast<int>(phi_lo.size());
    int m = std::clamp(static_cast<int>(std::floor(delta * n)), 1, n - 1);
    return lower ? phi_lo[m - 1] : phi_hi[m - 1];
}

ProfileTable profiles(const Graph& g, const SpectralData& sd, double eps, int exact_cap) {
    if (eps <= 0 || eps >= 1) throw SpectralError("profiles: eps out of (0,1)");
    int n = g.n;
    ProfileTable pt;
    pt.eps = eps;
    pt.lambda_lo.assign(n, sd.gap());
    pt.lambda_hi.assign(n, sd.gap());
    pt.phi_lo.assign(n, 0.0);
    pt.phi_hi.assign(n, 0.0);
    const Eigen::MatrixXd negL = -sd.generator;

    if (n <= exact_cap && n <= 24) {
        pt.exact = true;
        std::vector<uint32_t> adj_mask(n, 0);
        for (const auto& e : g.edges) {
            adj_mask[e.first] |= 1u << e.second;
            adj_mask[e.second] |= 1u << e.first;
        }
        std::vector<double> lam(n + 1, std::numeric_limits<double>::infinity());
        std::vector<double> phi(n + 1, std::numeric_limits<double>::infinity());
        lam[n] = sd.gap();
        double rate = 1.0 / static_cast<double>(g.d);
        for (uint32_t mask = 1; mask < (1u << n) - 1; ++mask) {
            int m = __builtin_popcount(mask);
            long cross = 0;
            std::vector<int> S;
            S.reserve(m);
            for (int v = 0; v < n; ++v)
                if (mask & (1u << v)) {
                    S.push_back(v);
                    cross += __builtin_popcount(adj_mask[v] & ~mask);
                }
            // Phi_A = Q(A,A^c)/pi(A) with Q = cross * rate / n.
            phi[m] = std::min(phi[m], static_cast<double>(cross) * rate / m);
            lam[m] = std::min(lam[m], support_rayleigh_min(negL, S, n));
        }
        // Running minima make both profiles monotone in the support cap.
        for (int m = 2; m <= n; ++m) lam[m] = std::min(lam[m], lam[m - 1]);
        for (int m = 2; m <= n - 1; ++m) phi[m] = std::min(phi[m], phi[m - 1]);
        for (int m = 1; m <= n; ++m) pt.lambda_lo[m - 1] = pt.lambda_hi[m - 1] = lam[m];
        for (int m = 1; m <= n - 1; ++m) pt.phi_lo[m - 1] = pt.phi_hi[m - 1] = phi[m];
        pt.phi_lo[n - 1] = pt.phi_hi[n - 1] = phi[n - 1];
    } else {
        pt.exact = false;
        // Upper brackets from explicit cuts: balls and eigenvector sweeps.
        std::vector<double> lam_hi(n + 1, std::numeric_limits<double>::infinity());
        std::vector<double> phi_hi(n + 1, std::numeric_limits<double>::infinity());
        lam_hi[n] = sd.gap();
        double rate = 1.0 / static_cast<double>(g.d);
        auto consider = [&](const std::vector<int>& A) {
            if (A.empty() || static_cast<int>(A.size()) >= n) return;
            std::vector<char> in(n, 0);
            for (int v : A) in[v] = 1;
            long cross = 0;
            for (int v : A)
                for (int u : g.adj[v])
                    if (!in[u]) ++cross;
            int m = static_cast<int>(A.size());
            double piA = static_cast<double>(m) / n;
            double q = static_cast<double>(cross) * rate / n;
            phi_hi[m] = std::min(phi_hi[m], q / piA);
            lam_hi[m] = std::min(lam_hi[m], q / (piA * (1.0 - piA)));
        };
        for (int root : {0, n / 2, n - 1}) {
            auto dist = bfs_distances(g, root);
            int ecc = *std::max_element(dist.begin(), dist.end());
            for (int r = 0; r < ecc; ++r) {
                std::vector<int> ball;
                for (int v = 0; v < n; ++v)
                    if (dist[v] <= r) ball.push_back(v);
                consider(ball);
            }
        }
        for (int col = 1; col < std::min(n, 4); ++col) {
            std::vector<int> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return sd.eigenvectors(a, col) < sd.eigenvectors(b, col);
            });
            for (int m = 1; m < n; ++m)
                consider(std::vector<int>(order.begin(), order.begin() + m));
        }
        // Enforce monotone non-increasing in m (larger support can only help).
        for (int m = 2; m <= n; ++m) lam_hi[m] = std::min(lam_hi[m], lam_hi[m - 1]);
        for (int m = 2; m <= n - 1; ++m) phi_hi[m] = std::min(phi_hi[m], phi_hi[m - 1]);
        for (int m = 1; m <= n; ++m) {
            pt.lambda_hi[m - 1] = std::isfinite(lam_hi[m]) ? lam_hi[m] : sd.gap();
            pt.lambda_lo[m - 1] = sd.gap();  // valid floor: Lambda(delta) >= gap
        }
        for (int m = 1; m <= n; ++m) {
            double piA = static_cast<double>(m) / n;
            pt.phi_hi[m - 1] = m < n && std::isfinite(phi_hi[std::min(m, n - 1)])
                                   ? phi_hi[std::min(m, n - 1)]
                                   : sd.gap();
            pt.phi_lo[m - 1] = (1.0 - std::min(piA, 1.0 - 1e-12)) * sd.gap();
        }
    }

    // Cheeger sandwich holds bracket-wise; enforce as a construction check.
    double md = sd.max_diag_rate();
    for (int m = 1; m <= n - 1; ++m) {
        double delta = static_cast<double>(m) / n;
        double lo = pt.phi_lo[m - 1] * pt.phi_lo[m - 1] / (2.0 * md);
        double hi = pt.phi_hi[m - 1] / (1.0 - delta);
        if (pt.exact && (pt.lambda_lo[m - 1] < lo - 1e-9 || pt.lambda_hi[m - 1] > hi + 1e-9))
            throw SpectralError("profiles: Cheeger sandwich violated");
    }

    double a = 4.0 / n;
    double b = 4.0 / eps;
    pt.t_sp_hi = step_integral([&](double d) { return 2.0 / pt.lambda_at(d, true); }, a, b);
    pt.t_sp_lo = step_integral([&](double d) { return 2.0 / pt.lambda_at(d, false); }, a, b);
    double bev = std::min(b, 0.5);
    double tail = sd.rel() * std::log(8.0 / eps);
    pt.t_ev_hi =
        md * step_integral([&](double d) { return 4.0 / std::pow(pt.phi_at(d, true), 2); }, a,
                           bev) +
        tail;
    pt.t_ev_lo =
        md * step_integral([&](double d) { return 4.0 / std::pow(pt.phi_at(d, false), 2); }, a,
                           bev) +
        tail;
    return pt;
}

double lagrange_min_distance(double piA, double delta) {
    if (piA <= 0 || piA >= 1) throw SpectralError("lagrange_min_distance: piA out of (0,1)");
    if (delta <= 0 || delta >= 1) throw SpectralError("lagrange_min_distance: delta out of (0,1)");
    return delta * delta * (1.0 - piA) / piA;
}

LowerBoundResult thm_lower_bound(const SpectralData& sd, int k, double delta, double eps,
                                 uint64_t seed) {
    if (k < 2) throw SpectralError("thm_lower_bound: k must be at least 2");
    LowerBoundResult res;
    res.lambda = sd.gap();
    // Pick the eigenfunction in the gap eigenspace with the best l1/l2 ratio;
    // any member of the eigenspace is admissible.
    std::vector<int> idx;
    for (int i = 1; i < sd.n; ++i)
        if (std::fabs(sd.eigenvalues(i) - sd.eigenvalues(1)) < 1e-9) idx.push_back(i);
    auto l1 = [&](const Eigen::VectorXd& f) { return f.cwiseAbs().sum() / sd.n; };
    auto l2 = [&](const Eigen::VectorXd& f) { return std::sqrt(f.squaredNorm() / sd.n); };
    Eigen::VectorXd best = sd.eigenvectors.col(idx[0]);
    double best_ratio = l1(best) / l2(best);
    Rng rng(derive_seed(seed, 0x7f1));
    for (int trial = 0; trial < 32 + static_cast<int>(idx.size()); ++trial) {
        Eigen::VectorXd f = Eigen::VectorXd::Zero(sd.n);
        if (trial < static_cast<int>(idx.size()))
            f = sd.eigenvectors.col(idx[trial]);
        else
            for (int j : idx) f += rng.normal() * sd.eigenvectors.col(j);
        if (l2(f) < 1e-12) continue;
        double r = l1(f) / l2(f);
        if (r > best_ratio) {
            best_ratio = r;
            best = f;
        }
    }
    res.f_l1 = l1(best);
    res.f_l2 = l2(best);
    double spread = 4.0 * delta * std::log(static_cast<double>(k)) - std::log(16.0 / eps);
    bool delocalized = res.f_l1 >= std::pow(static_cast<double>(k), -0.25 + delta) * res.f_l2;
    if (!delocalized || spread < 0) {
        res.feasible = false;
        res.t_bound = 0.0;
        return res;
    }
    res.feasible = true;
    res.t_bound = spread / (2.0 * res.lambda);
    return res;
}

std::vector<InequalityCheck> inequality_suite(const SpectralData& sd, const ProfileTable& pt,
                                              const MixFunctionals& mf, uint64_t seed) {
    std::vector<InequalityCheck> out;
    int n = sd.n;
    double pi = 1.0 / n;
    auto push = [&](std::string name, double lhs, double rhs, bool report_only = false,
                    std::string note = "") {
        InequalityCheck c;
        c.name = std::move(name);
        c.lhs = lhs;
        c.rhs = rhs;
        c.margin = lhs - rhs;
        c.pass = lhs >= rhs - 1e-9;
        c.report_only = report_only;
        c.note = std::move(note);
        out.push_back(c);
    };

    // (1-eps) Lambda(eps) >= c_LS log(1/eps), checked against the numeric
    // upper bracket (the strong direction).
    for (double e : {0.25, 0.5, 0.75})
        push("profile-vs-logsob@" + std::to_string(e), (1.0 - e) * pt.lambda_at(e, true),
             mf.c_ls.upper * std::log(1.0 / e));

    // Dirichlet-form bound E(u,u)/Var >= (1/2) Lambda(4||u||_1^2/Var) on
    // nonnegative test vectors.
    Rng rng(derive_seed(seed, 0x1e9));
    const Eigen::MatrixXd negL = -sd.generator;
    auto dirichlet = [&](const Eigen::VectorXd& u) { return u.dot(negL * u) / n; };
    auto check_u = [&](const Eigen::VectorXd& u, const std::string& tag) {
        double mean = u.sum() / n;
        double var = u.squaredNorm() / n - mean * mean;
        if (var < 1e-14) return;
        double l1 = u.cwiseAbs().sum() / n;
        double delta = 4.0 * l1 * l1 / var;
        push("dirichlet-profile-" + tag, dirichlet(u) / var,
             0.5 * pt.lambda_at(std::min(delta, 1.0), true));
    };
    for (int v = 0; v < std::min(n, 3); ++v) {
        Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
        u(v) = 1.0;
        check_u(u, "indicator" + std::to_string(v));
    }
    for (int t = 0; t < 3; ++t) {
        Eigen::VectorXd u(n);
        for (int i = 0; i < n; ++i) u(i) = std::fabs(rng.normal());
        check_u(u, "random" + std::to_string(t));
    }

    // L2 contraction with c = 1/2 from point masses.
    for (int x = 0; x < std::min(n, 2); ++x) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
        mu(x) = 1.0;
        double d0 = (mu / pi - Eigen::VectorXd::Ones(n)).squaredNorm() / n;
        double c = 0.5;
        double delta = std::min(4.0 / (c * d0), 1.0);
        double t = std::log(1.0 / c) / pt.lambda_at(delta, true);
        Eigen::VectorXd mu_t = heat_kernel(sd, t).transpose() * mu;
        double dt = (mu_t / pi - Eigen::VectorXd::Ones(n)).squaredNorm() / n;
        push("l2-contraction-x" + std::to_string(x), c * d0, dt);
    }

    // t_mix_inf(eps) <= t_sp(eps) (compare at the table's eps when present).
    auto it = mf.t_mix_inf.find(pt.eps);
    if (it != mf.t_mix_inf.end())
        push("linf-vs-spectral-profile", pt.t_sp_lo, it->second, !pt.exact);

    // t_sp(1/2) <= C loglog n / c_LS: report the constant.
    double llog = std::log(std::log(std::max(static_cast<double>(n), std::exp(std::exp(1.0)))));
    push("tsp-loglog-constant", pt.t_sp_hi * mf.c_ls.lower / llog, 0.0, true,
         "reported constant, no pass/fail");

    // Poincare on sampled (mu, t), with equality at t = 0.
    for (double t : {0.0, 0.3, 1.0}) {
        Eigen::VectorXd mu = Eigen::VectorXd::Zero(n);
        mu(0) = 1.0;
        double d0 = (mu / pi - Eigen::VectorXd::Ones(n)).squaredNorm() / n;
        Eigen::VectorXd mu_t = heat_kernel(sd, t).transpose() * mu;
        double dt = (mu_t / pi - Eigen::VectorXd::Ones(n)).squaredNorm() / n;
        push("poincare@t=" + std::to_string(t), d0 * std::exp(-2.0 * sd.gap() * t), dt);
    }
    return out;
}

}  // namespace exmix
