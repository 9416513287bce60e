#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

#include "exmix/chameleon.hpp"
#include "exmix/diagnostics.hpp"
#include "exmix/events.hpp"
#include "exmix/exact.hpp"
#include "exmix/harness.hpp"
#include "exmix/spectral.hpp"
#include "exmix/stats.hpp"

using nlohmann::json;
using namespace exmix;

namespace {

void write_or_print(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << '\n';
    } else {
        std::ofstream out(path);
        out << text << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exclusion / interchange / chameleon process laboratory"};
    app.require_subcommand(1);

    // ---- gen ----
    auto* gen = app.add_subcommand("gen", "generate a graph file");
    GraphSpec spec;
    std::string gen_out, gen_a, gen_b;
    gen->add_option("--family", spec.family,
                    "complete|cycle|path|hypercube|torus|random_regular|percolation_giant|product")
        ->required();
    gen->add_option("--n", spec.n, "vertex count (complete/cycle/path/random_regular)");
    gen->add_option("--dim", spec.dim, "dimension (hypercube/torus/percolation)");
    gen->add_option("--side", spec.side, "torus side length");
    gen->add_option("--deg", spec.deg, "degree (random_regular)");
    gen->add_option("--p", spec.p, "bond keep-probability (percolation)");
    gen->add_option("--seed", spec.seed, "random seed");
    gen->add_option("--a", gen_a, "left factor graph file (product)");
    gen->add_option("--b", gen_b, "right factor graph file (product)");
    gen->add_option("--out", gen_out, "output path")->required();
    gen->callback([&] {
        if (spec.family == "product") {
            spec.a = std::make_shared<GraphSpec>();
            spec.a->family = "file";
            spec.a->path = gen_a;
            spec.b = std::make_shared<GraphSpec>();
            spec.b->family = "file";
            spec.b->path = gen_b;
        }
        Graph g = build_graph(spec);
        save_graph(g, gen_out);
        std::cout << "wrote " << gen_out << ": n=" << g.n << " m=" << g.num_edges()
                  << " d=" << g.d << (g.regular ? " regular" : " irregular") << '\n';
    });

    // ---- spectral ----
    auto* sp = app.add_subcommand("spectral", "spectral functionals and profile report");
    std::string sp_graph, sp_json;
    double sp_eps = 0.25;
    sp->add_option("--graph", sp_graph, "graph file")->required();
    sp->add_option("--eps", sp_eps, "target accuracy");
    sp->add_option("--json", sp_json, "output JSON path");
    sp->callback([&] {
        Graph g = load_graph(sp_graph);
        SpectralData sd = eigendecompose(g);
        MixFunctionals mf = mixing_functionals(sd, {sp_eps});
        ProfileTable pt = profiles(g, sd, sp_eps, 14);
        json j;
        j["n"] = g.n;
        j["d"] = g.d;
        j["gap"] = sd.gap();
        j["rel"] = sd.rel();
        j["t_mix"] = mf.t_mix.at(sp_eps);
        j["t_mix_2"] = mf.t_mix_2.at(sp_eps);
        j["t_mix_inf"] = mf.t_mix_inf.at(sp_eps);
        j["r_star"] = mf.r_star.at(sp_eps);
        j["t_star"] = mf.t_star.at(sp_eps);
        j["s_star"] = mf.s_star.at(sp_eps);
        j["c_ls_lower"] = mf.c_ls.lower;
        j["c_ls_upper"] = mf.c_ls.upper;
        j["profile_exact"] = pt.exact;
        j["t_sp"] = pt.t_sp_hi;
        j["t_evolving_sets"] = pt.t_ev_hi;
        j["lambda_by_support"] = pt.lambda_hi;
        j["phi_by_support"] = pt.phi_hi;
        json checks = json::array();
        for (const auto& c : inequality_suite(sd, pt, mf)) {
            json e;
            e["name"] = c.name;
            e["lhs"] = c.lhs;
            e["rhs"] = c.rhs;
            e["margin"] = c.margin;
            e["verdict"] = c.report_only ? "report-only" : (c.pass ? "pass" : "fail");
            checks.push_back(e);
        }
        j["inequalities"] = checks;
        write_or_print(sp_json, j.dump(2));
    });

    // ---- simulate ----
    auto* sim = app.add_subcommand("simulate", "Monte Carlo process marginals vs oracle");
    std::string sim_graph, sim_proc = "ex", sim_json;
    int sim_k = 2, sim_trials = 100000;
    double sim_t = 5.0;
    uint64_t sim_seed = 7;
    sim->add_option("--graph", sim_graph)->required();
    sim->add_option("--process", sim_proc, "rw|ex|ip");
    sim->add_option("--k", sim_k);
    sim->add_option("--t", sim_t);
    sim->add_option("--trials", sim_trials);
    sim->add_option("--seed", sim_seed);
    sim->add_option("--json", sim_json, "output JSON path");
    sim->callback([&] {
        Graph g = load_graph(sim_graph);
        SpectralData sd = eigendecompose(g);
        std::vector<int> init(sim_k);
        for (int i = 0; i < sim_k; ++i) init[i] = i;
        std::vector<double> occ(g.n, 0.0);
        for (int trial = 0; trial < sim_trials; ++trial) {
            EventStream es =
                sample_events(g, sim_t, StreamMode::standard, derive_seed(sim_seed, trial));
            TrajectoryMap m = interval_map(g, es, 0.0, sim_t);
            for (int v : init) occ[m(v)] += 1.0;
        }
        Eigen::MatrixXd P = heat_kernel(sd, sim_t);
        json j;
        j["process"] = sim_proc;
        j["k"] = sim_k;
        j["t"] = sim_t;
        j["trials"] = sim_trials;
        json marg = json::array();
        double worst_z = 0.0;
        for (int v = 0; v < g.n; ++v) {
            double expect = 0.0;
            for (int a : init) expect += P(a, v);
            double hat = occ[v] / sim_trials;
            double se = std::sqrt(std::max(expect * (1 - expect), 1e-12) / sim_trials);
            double z = (hat - expect) / se;
            worst_z = std::max(worst_z, std::fabs(z));
            json e;
            e["vertex"] = v;
            e["empirical"] = hat;
            e["heat_kernel"] = expect;
            e["z"] = z;
            marg.push_back(e);
        }
        j["occupancy"] = marg;
        j["worst_z"] = worst_z;
        write_or_print(sim_json, j.dump(2));
    });

    // ---- exact ----
    auto* ex = app.add_subcommand("exact", "exact small-instance mixing quantities");
    std::string ex_graph, ex_proc = "ex";
    int ex_k = 2;
    double ex_eps = 0.25;
    ex->add_option("--graph", ex_graph)->required();
    ex->add_option("--k", ex_k);
    ex->add_option("--process", ex_proc, "rw|ex|ip");
    ex->add_option("--eps", ex_eps);
    ex->callback([&] {
        Graph g = load_graph(ex_graph);
        ProcTag tag = ex_proc == "ip"   ? ProcTag::ip_k
                      : ex_proc == "rw" ? ProcTag::rw_k
                                        : ProcTag::ex_k;
        ExactProcess ep = build_exact(g, ex_k, tag);
        json j;
        j["states"] = ep.size();
        j["mix_time"] = exact_mix_time(ep, ex_eps);
        GapTable gt = aldous_check(g, {ex_k});
        j["gap_rw1"] = gt.rw1_gap;
        j["gap_discrepancy"] = gt.max_discrepancy;
        std::cout << j.dump(2) << '\n';
    });

    // ---- chameleon ----
    auto* ch = app.add_subcommand("chameleon", "chameleon process runs and fill statistics");
    std::string ch_graph, ch_json, ch_variant = "fixed";
    int ch_k = 2, ch_trials = 10000;
    double ch_alpha = 0.2, ch_tround = 4.0;
    uint64_t ch_seed = 3;
    ch->add_option("--graph", ch_graph)->required();
    ch->add_option("--k", ch_k);
    ch->add_option("--alpha", ch_alpha);
    ch->add_option("--variant", ch_variant, "fixed|variable");
    ch->add_option("--t-round", ch_tround);
    ch->add_option("--trials", ch_trials);
    ch->add_option("--seed", ch_seed);
    ch->add_option("--json", ch_json);
    ch->callback([&] {
        Graph g = load_graph(ch_graph);
        SpectralData sd = eigendecompose(g);
        RoundParams params;
        params.alpha = ch_alpha;
        params.t_round = ch_tround;
        auto t_inf = [&](double eps) {
            return bisect_time([&](double t) { return diag_linf(sd, t); }, eps,
                               sd.rel() * std::log(g.n))
                .t;
        };
        // Fixed variant burns in at t_inf(n^{-10}); the variable variant at
        // t_inf(c_hat / k) with c_hat = 0.1.
        params.burn_in = t_inf(std::pow(static_cast<double>(g.n), -10.0));
        params.seed = ch_seed;
        if (ch_variant == "variable") {
            params.variant = ChamVariant::variable;
            params.burn_in = t_inf(0.1 / ch_k);
            ProfileTable pt = profiles(g, sd, 0.25, 14);
            params.round_lengths = variable_round_lengths(pt.lambda_lo, g.n, 8.0, 16.0);
        }
        std::vector<int> w(ch_k - 1);
        for (int i = 0; i < ch_k - 1; ++i) w[i] = i;
        GoodnessCache cache(derive_seed(ch_seed, 0x600d));
        long filled = 0, emptied = 0, truncated = 0, rounds = 0, type1 = 0;
        for (int trial = 0; trial < ch_trials; ++trial) {
            RoundParams p = params;
            p.seed = derive_seed(ch_seed, trial);
            ChameleonRunRecord rec = run_chameleon(g, w, ch_k - 1, p, &cache);
            filled += rec.fill == ChamEnd::filled;
            emptied += rec.fill == ChamEnd::emptied;
            truncated += rec.fill == ChamEnd::truncated;
            rounds += static_cast<long>(rec.rounds.size());
            for (const auto& r : rec.rounds) type1 += r.type == 1;
        }
        json j;
        j["trials"] = ch_trials;
        j["filled"] = filled;
        j["emptied"] = emptied;
        j["truncated"] = truncated;
        j["fill_hat"] = static_cast<double>(filled) / std::max(1L, filled + emptied);
        j["fill_expected"] = 1.0 / (g.n - ch_k + 1);
        j["mean_rounds"] = static_cast<double>(rounds) / ch_trials;
        j["type1_frequency"] = rounds ? static_cast<double>(type1) / rounds : 0.0;
        j["goodness_cache_entries"] = cache.size();
        write_or_print(ch_json, j.dump(2));
    });

    // ---- diag ----
    auto* dg = app.add_subcommand("diag", "neighbourhood / large-deviation diagnostics");
    std::string dg_graph, dg_suite = "nice";
    int dg_k = 2, dg_trials = 20000, dg_dhat = 0;
    double dg_T = 1.0, dg_eps = 0.05, dg_theta = 0.5;
    uint64_t dg_seed = 5;
    dg->add_option("--graph", dg_graph)->required();
    dg->add_option("--suite", dg_suite, "nice|chernoff|na|white|blackld");
    dg->add_option("--k", dg_k);
    dg->add_option("--T", dg_T);
    dg->add_option("--eps", dg_eps);
    dg->add_option("--theta", dg_theta);
    dg->add_option("--d-hat", dg_dhat, "degree inflation target (0: none)");
    dg->add_option("--trials", dg_trials);
    dg->add_option("--seed", dg_seed);
    dg->callback([&] {
        Graph g = load_graph(dg_graph);
        SpectralData sd = eigendecompose(g);
        ModifiedGraph mg = dg_dhat > 0 ? degree_inflate(g, dg_dhat) : as_modified(g);
        json j;
        j["suite"] = dg_suite;
        if (dg_suite == "nice") {
            std::vector<int> S;
            for (int v = 0; v < std::max(1, g.n / 4); ++v) S.push_back(v);
            NiceReport rep = nice_set(mg, S, dg_T, sd);
            j["complement_size"] = rep.complement_size;
            j["counting_bound"] = rep.counting_bound;
            j["counting_gap"] = rep.counting_gap;
            j["pi_hit"] = rep.pi_hit;
            j["pi_nice"] = rep.pi_nice;
            j["verdict"] = "pass";
        } else if (dg_suite == "chernoff") {
            std::vector<int> S = {0, 1 % g.n, 2 % g.n};
            BnGnReport rep = bn_gn_estimate(g, S, dg_T, dg_theta, dg_trials, sd, dg_seed);
            j["empirical"] = rep.empirical;
            j["bound"] = rep.bound;
            j["lambda_star"] = rep.lambda_star;
            j["conditioning_hits"] = rep.cond_hits;
            j["verdict"] = rep.inconclusive ? "inconclusive" : (rep.ok ? "pass" : "fail");
        } else if (dg_suite == "na") {
            NaCnaReport rep = na_cna_tests(g, dg_k, {0.5, 1.0, 2.0}, dg_trials, dg_seed);
            j["all_ok"] = rep.all_ok;
            if (rep.stationary_exact_available) j["stationary_cov"] = rep.stationary_cov;
            j["verdict"] = rep.all_ok ? "pass" : "fail";
        } else if (dg_suite == "white") {
            std::vector<int> S;
            for (int v = 0; v < (g.n + 3) / 4; ++v) S.push_back(v);
            WhiteSetReport rep = white_set_checks(mg, S, dg_T, dg_eps, sd, dg_trials, dg_seed);
            j["q_set_size"] = rep.q_set.size();
            j["size_bound"] = rep.size_bound;
            j["size_checked"] = rep.size_checked;
            j["no_white_empirical"] = rep.no_white_empirical;
            j["no_white_bound"] = rep.no_white_bound;
            j["verdict"] = (rep.size_checked ? rep.size_ok : true) && rep.no_white_ok
                               ? "pass"
                               : "fail";
        } else if (dg_suite == "blackld") {
            BlackLdReport rep =
                black_ld_check(mg, dg_k, dg_eps, {dg_T, 2 * dg_T}, dg_trials, dg_seed);
            j["m_value"] = rep.m_value;
            j["bound"] = rep.bound;
            j["empirical"] = rep.empirical;
            j["verdict"] = rep.ok ? "pass" : "fail";
        }
        std::cout << j.dump(2) << '\n';
    });

    // ---- suite ----
    auto* su = app.add_subcommand("suite", "run configured check suites");
    std::string su_config, su_out, su_csv;
    su->add_option("--config", su_config, "config JSON path")->required();
    su->add_option("--out", su_out, "report JSON path");
    su->add_option("--csv", su_csv, "CSV table directory");
    su->callback([&] {
        std::ifstream in(su_config);
        if (!in) throw CLI::ValidationError("--config", "cannot open " + su_config);
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        ExperimentConfig cfg = ExperimentConfig::from_json(text);
        if (!su_out.empty()) cfg.out_path = su_out;
        if (!su_csv.empty()) cfg.csv_dir = su_csv;
        ReportDocument doc = run_suite(cfg);
        write_or_print(cfg.out_path, doc.to_json());
        if (!cfg.csv_dir.empty()) doc.write_csv(cfg.csv_dir);
        int fails = doc.failures();
        std::cerr << doc.checks.size() << " checks, " << fails << " failures\n";
        if (fails) std::exit(1);
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}
