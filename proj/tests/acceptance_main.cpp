// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Every tolerance is fixed here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "exmix/chameleon.hpp"
#include "exmix/diagnostics.hpp"
#include "exmix/events.hpp"
#include "exmix/exact.hpp"
#include "exmix/graph.hpp"
#include "exmix/harness.hpp"
#include "exmix/rng.hpp"
#include "exmix/spectral.hpp"
#include "exmix/stats.hpp"
#include "support/oracles.hpp"

using namespace exmix;

namespace {

int g_failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s  criterion %2d  %-34s %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1: fill probability ------------------------------------------------
void criterion_fill() {
    auto t0 = std::chrono::steady_clock::now();
    Graph c6 = cycle_graph(6);
    SpectralData sd = eigendecompose(c6);
    MixFunctionals mf = mixing_functionals(sd, {0.25});
    RoundParams params;
    params.alpha = 0.2;
    params.t_round = 4.0;
    // Burn-in at the L-infinity mixing time with accuracy n^{-10}.
    params.burn_in = bisect_time([&](double t) { return diag_linf(sd, t); },
                                 std::pow(6.0, -10), mf.rel * std::log(6.0))
                         .t;
    params.goodness_trials = 400;
    params.max_rounds = 50000;
    GoodnessCache cache(derive_seed(20240801, 0x600d));
    const int runs = 100000;
    long filled = 0, decided = 0;
    for (int i = 0; i < runs; ++i) {
        RoundParams p = params;
        p.seed = derive_seed(20240801, i);
        ChameleonRunRecord rec = run_chameleon(c6, {0}, 1, p, &cache);
        if (rec.fill == ChamEnd::truncated) continue;
        ++decided;
        filled += rec.fill == ChamEnd::filled;
    }
    double hat = static_cast<double>(filled) / decided;
    double se = std::sqrt(hat * (1.0 - hat) / decided);
    double secs = seconds_since(t0);
    bool pass = std::fabs(hat - 0.2) <= 3.0 * se && decided == runs && secs <= 180.0;
    char buf[160];
    std::snprintf(buf, sizeof buf, "fill=%.5f expect=0.2 se=%.5f (%.1fs)", hat, se, secs);
    report(1, "chameleon fill probability", pass, buf);
}

// ---- 2: ink identity ----------------------------------------------------
void criterion_ink_identity() {
    auto t0 = std::chrono::steady_clock::now();
    RoundParams params;
    params.alpha = 0.2;
    params.t_round = 1.25;
    params.burn_in = 0.25;
    params.goodness_trials = 400;
    params.seed = 987;
    double worst = 0.0;
    for (const auto& [name, g] :
         {std::pair<std::string, Graph>{"P3", path_graph(3)}, {"C4", cycle_graph(4)}}) {
        GoodnessCache cache(derive_seed(31337, g.n));
        for (double t : {0.5, 1.0, 2.0}) {
            double z = ink_identity_max_z(g, {0}, 1, t, 100000, params, &cache);
            worst = std::max(worst, z);
        }
    }
    double secs = seconds_since(t0);
    bool pass = worst <= 4.0 && secs <= 120.0;
    char buf[120];
    std::snprintf(buf, sizeof buf, "max |z|=%.2f over P3/C4, t in {0.5,1,2} (%.1fs)", worst,
                  secs);
    report(2, "ink identity vs exact interchange", pass, buf);
}

// ---- 3: gap equality ----------------------------------------------------
void criterion_aldous() {
    double worst = 0.0;
    worst = std::max(worst, aldous_check(complete_graph(4), {1, 2, 3}).max_discrepancy);
    worst = std::max(worst, aldous_check(cycle_graph(5), {2}).max_discrepancy);
    worst = std::max(worst, aldous_check(cycle_graph(6), {2, 3}).max_discrepancy);
    worst = std::max(worst, aldous_check(hypercube_graph(3), {2}).max_discrepancy);
    char buf[80];
    std::snprintf(buf, sizeof buf, "max gap discrepancy=%.2e", worst);
    report(3, "spectral-gap equality", worst <= 1e-8, buf);
}

// ---- 4: hypercube relaxation time --------------------------------------
void criterion_hypercube_rel() {
    double worst = 0.0;
    for (int d = 2; d <= 6; ++d) {
        SpectralData sd = eigendecompose(hypercube_graph(d));
        worst = std::max(worst, std::fabs(sd.rel() - d / 2.0));
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "max |rel - d/2|=%.2e for d=2..6", worst);
    report(4, "hypercube relaxation time", worst <= 1e-10, buf);
}

// ---- 5: mixing-time sandwiches ------------------------------------------
void criterion_sandwiches() {
    double eps = 0.125;
    int k = 2;
    bool pass = true;
    std::string note;
    for (const auto& [name, g] : {std::pair<std::string, Graph>{"K4", complete_graph(4)},
                                  {"C6", cycle_graph(6)},
                                  {"Q3", hypercube_graph(3)}}) {
        SpectralData sd = eigendecompose(g);
        MixFunctionals mf = mixing_functionals(sd, {eps, eps / 2, 4 * eps / k, eps / k});
        bool chain = mf.rel * std::fabs(std::log(eps)) <= mf.t_mix.at(eps / 2) + 1e-6 &&
                     mf.t_mix.at(eps / 2) <= mf.t_mix_inf.at(eps) + 1e-6 &&
                     mf.t_mix_inf.at(eps) <= mf.rel * std::log(g.n / eps) + 1e-6;
        auto rw_tv = [&](double t) {
            Eigen::MatrixXd W = heat_kernel(sd, t);
            double pi = std::pow(1.0 / g.n, k);
            double acc = 0.0;
            for (int y1 = 0; y1 < g.n; ++y1)
                for (int y2 = 0; y2 < g.n; ++y2) acc += std::fabs(W(0, y1) * W(1, y2) - pi);
            return 0.5 * acc;
        };
        double t_k = bisect_time(rw_tv, eps, sd.rel() * std::log(4.0 * g.n)).t;
        bool kvs = 0.5 * mf.t_mix.at(4 * eps / k) <= t_k + 1e-6 &&
                   t_k <= mf.t_mix.at(eps / k) + 1e-6;
        if (!(chain && kvs)) {
            pass = false;
            note += name + "! ";
        }
    }
    report(5, "relaxation and k-walk sandwiches", pass,
           pass ? "chain and k-walk sandwich hold on K4/C6/Q3" : note);
}

// ---- 6: exclusion floor over the single walk -----------------------------
void criterion_exclusion_floor() {
    bool pass = true;
    double worst_margin = 1e9;
    for (const auto& g : {complete_graph(4), cycle_graph(6), hypercube_graph(3)}) {
        SpectralData sd = eigendecompose(g);
        MixFunctionals mf = mixing_functionals(sd, {0.25});
        for (int k = 1; k < g.n; ++k) {
            ExactProcess ex = build_exact(g, k, ProcTag::ex_k);
            double mix = exact_mix_time(ex, 0.25);
            double floor = std::pow(2.0, -13) * mf.t_mix.at(0.25);
            worst_margin = std::min(worst_margin, mix / floor);
            if (mix + 1e-9 < floor) pass = false;
        }
    }
    char buf[100];
    std::snprintf(buf, sizeof buf, "min mix/floor ratio=%.1f (every k on K4/C6/Q3)",
                  worst_margin);
    report(6, "EX(k) vs 2^-13 RW(1) mixing", pass, buf);
}

// ---- 7: Lagrange minimum -------------------------------------------------
void criterion_lagrange() {
    Rng rng(424242);
    double worst = 0.0;
    int n = 24;
    for (int trial = 0; trial < 20; ++trial) {
        int sizeA = 1 + static_cast<int>(rng.below(n - 1));
        double delta = 0.05 + 0.9 * rng.uniform();
        double closed = lagrange_min_distance(static_cast<double>(sizeA) / n, delta);
        double oracle = test_oracles::simplex_min_oracle(n, sizeA, delta);
        worst = std::max(worst, std::fabs(closed - oracle));
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "max |closed - simplex-min|=%.2e over 20 pairs", worst);
    report(7, "Lagrange minimum closed form", worst <= 1e-6, buf);
}

// ---- 8: counting lemmas --------------------------------------------------
void criterion_counting() {
    int cases = 0;
    bool pass = true;
    auto run_case = [&](const ModifiedGraph& mg, const SpectralData& sd, int size, double T) {
        std::vector<int> S;
        for (int v = 0; v < size; ++v) S.push_back(v);
        try {
            NiceReport rep = nice_set(mg, S, T, sd);
            if (rep.complement_size > rep.counting_bound) pass = false;  // zero tolerance
        } catch (const std::exception&) {
            pass = false;
        }
        ++cases;
    };
    std::vector<Graph> graphs = {complete_graph(4), cycle_graph(6), cycle_graph(8),
                                 hypercube_graph(3), torus_graph(3, 2)};
    for (const auto& g : graphs) {
        SpectralData sd = eigendecompose(g);
        ModifiedGraph mg = as_modified(g);
        for (int size : {1, g.n / 4, g.n / 2, 3 * g.n / 4})
            for (double T : {0.5, 1.0, 2.0})
                if (size >= 1) run_case(mg, sd, size, T);
    }
    for (int base : {6, 8}) {
        Graph g = cycle_graph(base);
        SpectralData sd = eigendecompose(g);
        ModifiedGraph mg = degree_inflate(g, 4);
        for (int size : {1, base / 4, base / 2, 3 * base / 4})
            for (double T : {0.5, 1.0, 2.0}) run_case(mg, sd, size, T);
    }
    char buf[80];
    std::snprintf(buf, sizeof buf, "%d cases, zero tolerance", cases);
    report(8, "deterministic counting lemmas", pass && cases >= 50, buf);
}

// ---- 9: negative association ---------------------------------------------
void criterion_negative_association() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = std::fabs(stationary_pair_covariance(3, 2) - (-1.0 / 9)) <= 1e-12;
    int bad_pairs = 0, total_pairs = 0;
    for (const auto& g : {cycle_graph(6), hypercube_graph(3)})
        for (int k : {2, 3}) {
            NaCnaReport rep =
                na_cna_tests(g, k, {0.5, 1.0, 2.0}, 100000, derive_seed(777, g.n * 10 + k));
            for (const auto& per_t : rep.pairwise)
                for (const auto& pc : per_t) {
                    ++total_pairs;
                    if (!pc.ok) ++bad_pairs;
                }
        }
    if (bad_pairs > 0) pass = false;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%d/%d covariances above 3 sigma; K3 exact ok (%.1fs)",
                  bad_pairs, total_pairs, seconds_since(t0));
    report(9, "negative association", pass, buf);
}

// ---- 10: ink-chain decay ---------------------------------------------------
void criterion_doob_decay() {
    bool pass = true;
    double worst_c = 0.0;
    for (int N : {5, 9, 17})
        for (double alpha : {0.1, 0.2}) {
            DoobChain ch = doob_chain(N + 1, 2, alpha);
            double c;
            try {
                c = supermartingale_verify(ch);
            } catch (const std::exception&) {
                pass = false;
                continue;
            }
            worst_c = std::max(worst_c, c);
            std::vector<double> se;
            auto mean = simulate_missing_mean(ch, 30, 30000, derive_seed(4242, N * 10), 1, &se);
            for (int i = 0; i <= 30; ++i)
                if (mean[i] > std::pow(c, i) * std::sqrt(static_cast<double>(N)) + 3 * se[i])
                    pass = false;
        }
    char buf[100];
    std::snprintf(buf, sizeof buf, "max c=%.4f < 1; decay within CI to i=30", worst_c);
    report(10, "ink-chain supermartingale decay", pass && worst_c < 1.0, buf);
}

// ---- 11: Chernoff exponent sign -------------------------------------------
void criterion_chernoff_sign() {
    int points = 0;
    bool pass = true;
    double worst = -1e9;
    for (int ki = 1; ki <= 10; ++ki)
        for (int ri = 0; ri <= 9; ++ri) {
            double k_frac = 0.05 * ki;
            double r_frac = (0.5 - k_frac / 2.0) * ri / 9.0;
            double theta = 9.0 / 16.0 - k_frac / 2.0;
            double e = chernoff_exponent(0.05, theta, r_frac);
            worst = std::max(worst, e);
            if (e > -0.0008) pass = false;
            ++points;
        }
    char buf[100];
    std::snprintf(buf, sizeof buf, "max exponent=%.6f over %d grid points (<= -0.0008)", worst,
                  points);
    report(11, "Chernoff exponent sign", pass && points == 100, buf);
}

// ---- 12: theorem-shape ratios (regression-pinned) -------------------------
// Pinned at the first successful run of this suite; asserted stable within
// +-1% (exact instances) and a factor-2 band (hypercube shape) thereafter.
struct PinnedRatio {
    const char* name;
    double value;
};
constexpr PinnedRatio kOliveiraPins[] = {
    {"K4", 0.751979},
    {"C6", 0.984581},
    {"Q3", 0.900096},
};

void criterion_ratios() {
    auto t0 = std::chrono::steady_clock::now();
    bool pass = true;
    std::string detail;
    int idx = 0;
    for (const auto& [name, g] : {std::pair<std::string, Graph>{"K4", complete_graph(4)},
                                  {"C6", cycle_graph(6)},
                                  {"Q3", hypercube_graph(3)}}) {
        SpectralData sd = eigendecompose(g);
        ExactProcess ex = build_exact(g, 2, ProcTag::ex_k);
        double mix_ex = exact_mix_time(ex, 0.25);
        auto rw_tv = [&](double t) {
            Eigen::MatrixXd W = heat_kernel(sd, t);
            double pi = std::pow(1.0 / g.n, 2);
            double acc = 0.0;
            for (int y1 = 0; y1 < g.n; ++y1)
                for (int y2 = 0; y2 < g.n; ++y2) acc += std::fabs(W(0, y1) * W(1, y2) - pi);
            return 0.5 * acc;
        };
        double mix_rw = bisect_time(rw_tv, 0.25, sd.rel() * std::log(4.0 * g.n)).t;
        double ratio = mix_ex / mix_rw;
        double pin = kOliveiraPins[idx++].value;
        if (pin > 0 && std::fabs(ratio - pin) > 0.01 * pin) pass = false;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%s=%.6f ", name.c_str(), ratio);
        detail += buf;
    }
    // Hypercube d log(dk) shape with k = 2^{d-1}, proxy statistic mixing.
    double lo = 1e9, hi = 0.0;
    for (int d = 2; d <= 5; ++d) {
        Graph q = hypercube_graph(d);
        int k = 1 << (d - 1);
        std::vector<int> half;
        for (int v = 0; v < q.n / 2; ++v) half.push_back(v);
        double t =
            mc_proxy_mix_time(q, k, half, 0.25, d <= 4 ? 4000 : 2500, derive_seed(99, d));
        double shape = t / (d * std::log(static_cast<double>(d) * k));
        lo = std::min(lo, shape);
        hi = std::max(hi, shape);
    }
    if (hi > 2.0 * lo) pass = false;
    char buf[100];
    std::snprintf(buf, sizeof buf, "hypercube shape band [%.4f, %.4f] (x%.2f) (%.1fs)", lo, hi,
                  hi / lo, seconds_since(t0));
    report(12, "theorem-shape ratios", pass, detail + buf);
}

}  // namespace

int main() {
    std::printf("acceptance suite\n");
    criterion_fill();
    criterion_ink_identity();
    criterion_aldous();
    criterion_hypercube_rel();
    criterion_sandwiches();
    criterion_exclusion_floor();
    criterion_lagrange();
    criterion_counting();
    criterion_negative_association();
    criterion_doob_decay();
    criterion_chernoff_sign();
    criterion_ratios();
    std::printf("%s: %d criterion failure(s)\n", g_failures ? "FAIL" : "OK", g_failures);
    return g_failures ? 1 : 0;
}
