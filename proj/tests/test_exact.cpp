#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "exmix/exact.hpp"
#include "exmix/graph.hpp"
#include "exmix/spectral.hpp"

using namespace exmix;

TEST_CASE("state space sizes and generator structure") {
    Graph c4 = cycle_graph(4);
    ExactProcess ex = build_exact(c4, 2, ProcTag::ex_k);
    CHECK(ex.size() == 6);
    ExactProcess ip = build_exact(c4, 2, ProcTag::ip_k);
    CHECK(ip.size() == 12);
    for (int i = 0; i < ip.size(); ++i) CHECK(std::fabs(ip.Q.row(i).sum()) < 1e-12);
    // Symmetric rates.
    CHECK((ip.Q - ip.Q.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(build_exact(c4, 3, ProcTag::ip_k, 10), ExactError);  // cap
}

TEST_CASE("independent-walk process") {
    Graph c4 = cycle_graph(4);
    ExactProcess rw = build_exact(c4, 2, ProcTag::rw_k);
    CHECK(rw.size() == 16);  // collisions allowed
    for (int i = 0; i < rw.size(); ++i) CHECK(std::fabs(rw.Q.row(i).sum()) < 1e-12);
    // The product chain relaxes at the single-walk gap, and its law at time t
    // is the product of heat-kernel rows.
    SpectralData sd = eigendecompose(c4);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(-rw.Q);
    double gap = 0;
    for (int i = 0; i < rw.size(); ++i)
        if (es.eigenvalues()(i) > 1e-9) {
            gap = es.eigenvalues()(i);
            break;
        }
    CHECK(gap == doctest::Approx(sd.gap()).epsilon(1e-10));
    double t = 0.9;
    Eigen::VectorXd dist = exact_distribution(rw, t, rw.state_index({0, 1}));
    Eigen::MatrixXd W = heat_kernel(sd, t);
    for (int i = 0; i < rw.size(); ++i) {
        const auto& s = rw.states[i];
        CHECK(dist(i) == doctest::Approx(W(0, s[0]) * W(1, s[1])).epsilon(1e-8));
    }
}

TEST_CASE("exponential semigroup and stationarity") {
    Graph c4 = cycle_graph(4);
    ExactProcess ip = build_exact(c4, 2, ProcTag::ip_k);
    Eigen::MatrixXd a = exact_transition(ip, 0.6);
    Eigen::MatrixXd b = exact_transition(ip, 1.1);
    Eigen::MatrixXd ab = exact_transition(ip, 1.7);
    CHECK((a * b - ab).cwiseAbs().maxCoeff() < 1e-10);
    // Uniform law is invariant.
    Eigen::VectorXd pi = Eigen::VectorXd::Constant(ip.size(), 1.0 / ip.size());
    CHECK(((a.transpose() * pi) - pi).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("EX distribution equals unordered IP distribution") {
    Graph c5 = cycle_graph(5);
    ExactProcess ex = build_exact(c5, 2, ProcTag::ex_k);
    ExactProcess ip = build_exact(c5, 2, ProcTag::ip_k);
    for (double t : {0.4, 1.3}) {
        Eigen::VectorXd pex = exact_distribution(ex, t, ex.state_index({0, 1}));
        Eigen::VectorXd pip = exact_distribution(ip, t, ip.state_index({0, 1}));
        std::map<std::vector<int>, double> folded;
        for (int i = 0; i < ip.size(); ++i) {
            std::vector<int> s = ip.states[i];
            std::sort(s.begin(), s.end());
            folded[s] += pip(i);
        }
        for (int i = 0; i < ex.size(); ++i)
            CHECK(pex(i) == doctest::Approx(folded[ex.states[i]]).epsilon(1e-10));
    }
}

TEST_CASE("TV basics and monotonicity") {
    Graph c5 = cycle_graph(5);
    ExactProcess ex = build_exact(c5, 2, ProcTag::ex_k);
    CHECK(exact_tv(ex, 0.0, 0) == doctest::Approx(1.0 - 1.0 / ex.size()));
    double prev = 2.0;
    for (double t : {0.0, 0.3, 0.8, 1.5, 3.0, 6.0}) {
        double tv = exact_worst_tv(ex, t);
        CHECK(tv <= prev + 1e-12);
        prev = tv;
    }
}

TEST_CASE("contraction chains") {
    Graph c5 = cycle_graph(5);
    int k = 2;
    for (double t : {0.5, 1.0, 2.0}) {
        TriangleChains tc = triangle_chains(c5, k, t);
        CHECK(tc.ex_tv <= tc.ip_tv + 1e-10);
        CHECK(tc.ip_tv <= tc.max_delta + 1e-10);
        CHECK(tc.max_delta <= k * tc.last_coord + 1e-10);
        CHECK(tc.last_coord <= 2.0 * tc.cond_uniform + 1e-10);
    }
}

TEST_CASE("exact mixing times") {
    Graph k4 = complete_graph(4);
    SpectralData sd = eigendecompose(k4);
    MixFunctionals mf = mixing_functionals(sd, {0.25});
    // EX(1) is the single walk.
    ExactProcess ex1 = build_exact(k4, 1, ProcTag::ex_k);
    CHECK(exact_mix_time(ex1, 0.25) == doctest::Approx(mf.t_mix.at(0.25)).epsilon(1e-4));

    // min_k mix^{EX(k)} >= 2^{-13} mix^{RW(1)}.
    for (auto g : {complete_graph(4), cycle_graph(6), hypercube_graph(3)}) {
        SpectralData sg = eigendecompose(g);
        MixFunctionals mg = mixing_functionals(sg, {0.25});
        for (int k = 1; k < g.n; ++k) {
            double states = 1;
            for (int i = 0; i < k; ++i) states = states * (g.n - i) / (i + 1);
            if (states > 3000) continue;
            ExactProcess ex = build_exact(g, k, ProcTag::ex_k);
            CHECK(exact_mix_time(ex, 0.25) >= std::pow(2.0, -13) * mg.t_mix.at(0.25));
        }
    }
}

TEST_CASE("k-walk sandwich") {
    // (1/2) t^{RW(1)}(4 eps / k) <= t^{RW(k)}(eps) <= t^{RW(1)}(eps / k)
    double eps = 0.125;
    int k = 2;
    for (auto g : {complete_graph(4), cycle_graph(6), hypercube_graph(3)}) {
        SpectralData sd = eigendecompose(g);
        auto rw_tv = [&](double t) {
            Eigen::MatrixXd W = heat_kernel(sd, t);
            double pi = std::pow(1.0 / g.n, k);
            double acc = 0.0;
            for (int y1 = 0; y1 < g.n; ++y1)
                for (int y2 = 0; y2 < g.n; ++y2) acc += std::fabs(W(0, y1) * W(1, y2) - pi);
            return 0.5 * acc;
        };
        double t_k = bisect_time(rw_tv, eps, sd.rel() * std::log(g.n * 4)).t;
        MixFunctionals mf = mixing_functionals(sd, {4 * eps / k, eps / k});
        CHECK(0.5 * mf.t_mix.at(4 * eps / k) <= t_k + 1e-6);
        CHECK(t_k <= mf.t_mix.at(eps / k) + 1e-6);
    }
}

TEST_CASE("gap equality across processes") {
    Graph k4 = complete_graph(4);
    GapTable gt = aldous_check(k4, {1, 2, 3});
    CHECK(gt.max_discrepancy < 1e-8);
    CHECK(gt.rw1_gap == doctest::Approx(4.0 / 3.0));

    GapTable c5 = aldous_check(cycle_graph(5), {2});
    CHECK(c5.max_discrepancy < 1e-8);

    // k = n: the labelled process can only relax faster (easier direction).
    GapTable full = aldous_check(complete_graph(3), {3});
    CHECK(full.gaps.at({"ip", 3}) >= full.rw1_gap - 1e-9);
}

TEST_CASE("stronger-conjecture probe") {
    Graph c4 = cycle_graph(4);
    auto rows = conjecture_probe(c4, 2, {0.0, 1.0, 25.0});
    CHECK(rows[0].t == 0.0);
    // Point starts at t = 0: each distance is 1 - 1/|state space|.
    CHECK(rows[0].tv_ip == doctest::Approx(1.0 - 1.0 / 12));
    CHECK(rows[0].tv_rw == doctest::Approx(1.0 - 1.0 / 16));
    // Reported with full precision, no pass/fail; both distances vanish for
    // large t.
    CHECK(rows[2].tv_ip < 1e-4);
    CHECK(rows[2].tv_rw < 1e-4);
    for (const auto& r : rows) {
        CHECK(r.tv_ip >= 0.0);
        CHECK(r.tv_rw >= 0.0);
    }
}
