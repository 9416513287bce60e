#include "exmix/chameleon.hpp"

#include <algorithm>
#include <cmath>

#include "exmix/events.hpp"
#include "exmix/exact.hpp"
#include "exmix/stats.hpp"

namespace exmix {

void RoundParams::validate() const {
    if (!(alpha > 0 && alpha < 0.25)) throw ChamError("RoundParams: alpha must be in (0, 1/4)");
    if (variant == ChamVariant::fixed && !(t_round > 1))
        throw ChamError("RoundParams: t_round must exceed 1");
    if (variant == ChamVariant::variable && round_lengths.empty())
        throw ChamError("RoundParams: variable variant needs a round-length table");
    if (!(burn_in > 0)) throw ChamError("RoundParams: burn_in must be positive");
    if (goodness_trials < 1) throw ChamError("RoundParams: goodness_trials < 1");
}

namespace {

int dyadic_level(int m) {  // m in (2^{i-1}, 2^i] -> i, with m >= 1
    int i = 0;
    while ((1 << i) < m) ++i;
    return i;
}

}  // namespace

double RoundParams::round_length(int r, int free_particles) const {
    if (variant == ChamVariant::fixed) return t_round;
    int m = std::min(r, free_particles - r);
    int lvl = std::min(dyadic_level(std::max(m, 1)),
                       static_cast<int>(round_lengths.size()) - 1);
    return round_lengths[lvl];
}

int RoundParams::truncation_rounds(int N) const {
    if (max_rounds > 0) return max_rounds;
    double expected = (2.0 / alpha) * (0.25 * N * N + 1.0);
    return static_cast<int>(std::ceil(50.0 * expected));
}

std::vector<double> variable_round_lengths(const std::vector<double>& lambda_by_support, int n,
                                           double c_round, double c_profile) {
    int levels = dyadic_level(n) + 1;
    std::vector<double> out(levels);
    for (int i = 0; i < levels; ++i) {
        double delta = c_profile * std::pow(2.0, i) / static_cast<double>(n);
        int m = std::clamp(static_cast<int>(std::floor(delta * n)), 1, n);
        out[i] = c_round / lambda_by_support[m - 1] + 1.0;
    }
    return out;
}

GoodnessResult estimate_goodness(const Graph& g, const std::vector<ChamColor>& colors, double t,
                                 double alpha, int trials, uint64_t seed) {
    if (trials < 1) throw ChamError("estimate_goodness: trials < 1");
    int nR = 0, nW = 0;
    for (ChamColor c : colors) {
        if (c == ChamColor::pink) throw ChamError("estimate_goodness: configuration has pinks");
        nR += c == ChamColor::red;
        nW += c == ChamColor::white;
    }
    int m0 = std::min(nR, nW);
    RunningStats h_stats;
    long hits = 0;
    for (int trial = 0; trial < trials; ++trial) {
        LiveStream ls(g, StreamMode::modified, derive_seed(seed, trial));
        std::vector<ChamColor> col = colors;
        std::vector<char> marked(g.n, 0);
        int marks = 0;
        for (;;) {
            Event e = ls.pop();
            if (e.t > t + 1.0) break;
            auto [u, v] = g.edges[e.edge];
            if (e.t > t) {
                bool rw = (col[u] == ChamColor::red && col[v] == ChamColor::white) ||
                          (col[u] == ChamColor::white && col[v] == ChamColor::red);
                if (rw && !marked[u] && !marked[v]) {
                    marked[u] = marked[v] = 1;
                    marks += 2;
                }
            }
            if (e.coin) {
                std::swap(col[u], col[v]);
                std::swap(marked[u], marked[v]);
            }
        }
        double h = marks / 2.0;
        h_stats.add(h);
        if (h + 1e-12 >= alpha * m0) ++hits;
    }
    GoodnessResult res;
    res.h_mean = h_stats.mean();
    res.h_stderr = h_stats.stderror();
    res.p_hat = static_cast<double>(hits) / trials;
    res.good = m0 >= 1 && res.h_mean + 1e-12 >= 2.0 * alpha * m0;
    return res;
}

const GoodnessResult& GoodnessCache::get(const Graph& g, const std::vector<ChamColor>& colors,
                                         double t, double alpha, int trials) {
    std::string key(colors.size(), ' ');
    for (std::size_t i = 0; i < colors.size(); ++i) key[i] = static_cast<char>(colors[i]);
    long tq = std::lround(t * 1e9) * 131 + std::lround(alpha * 1e6) + trials;
    auto it = cache_.find({key, tq});
    if (it != cache_.end()) return it->second;
    uint64_t h = 1469598103934665603ULL;
    for (char c : key) h = (h ^ static_cast<uint64_t>(c)) * 1099511628211ULL;
    h ^= static_cast<uint64_t>(tq);
    GoodnessResult res = estimate_goodness(g, colors, t, alpha, trials, derive_seed(seed_, h));
    return cache_.emplace(std::make_pair(key, tq), res).first->second;
}

double ChameleonRunRecord::ink_at_time(double t, double ink0) const {
    double ink = ink0;
    for (const auto& r : rounds) {
        if (r.end_time <= t)
            ink = r.ink_after;
        else
            break;
    }
    return ink;
}

namespace {

class Engine {
public:
    Engine(const Graph& g, const std::vector<int>& w, int y, const RoundParams& params,
           GoodnessCache* cache)
        : g_(g),
          P_(params),
          cache_(cache ? cache : &own_cache_),
          stream_(g, StreamMode::modified, derive_seed(params.seed, 1)),
          coin_(derive_seed(params.seed, 2)) {
        P_.validate();
        color_.assign(g.n, ChamColor::white);
        label_at_.assign(g.n, -1);
        std::vector<char> used(g.n, 0);
        for (std::size_t i = 0; i < w.size(); ++i) {
            int v = w[i];
            if (v < 0 || v >= g.n || used[v]) throw ChamError("run_chameleon: bad black tuple");
            used[v] = 1;
            color_[v] = ChamColor::black;
            label_at_[v] = static_cast<int>(i);
        }
        if (y < 0 || y >= g.n || used[y])
            throw ChamError("run_chameleon: red vertex clashes with blacks");
        color_[y] = ChamColor::red;
        z_ = w;
        k_ = static_cast<int>(w.size()) + 1;
        nR_ = 1;
        nK_ = 0;
        nW_ = g.n - k_;
    }

    ChameleonRunRecord run(std::vector<double> snaps) {
        std::sort(snaps.begin(), snaps.end());
        std::size_t si = 0;
        enum class Ph { burn_in, constant, pinkening, done };
        Ph ph = Ph::burn_in;
        double ph_end = P_.burn_in;
        rec_.burn_ins = 1;
        int cap = 0, m0 = 0, r_before = 0, w_before = 0;
        double p_hat = 1.0;
        const int round_cap = P_.truncation_rounds(g_.n - k_ + 1);

        // Decides what follows a burn-in end or a depinking: the next round
        // when the configuration is good, another burn-in otherwise.
        auto decide = [&]() {
            double len = P_.round_length(nR_, g_.n - k_ + 1);
            const GoodnessResult& gr =
                cache_->get(g_, color_, len - 1.0, P_.alpha, P_.goodness_trials);
            if (gr.good && gr.p_hat >= P_.alpha / 2.0) {
                m0 = std::min(nR_, nW_);
                cap = 2 * static_cast<int>(std::ceil(P_.alpha * m0));
                p_hat = gr.p_hat;
                r_before = nR_;
                w_before = nW_;
                ph = Ph::constant;
                ph_end = now_ + len - 1.0;
            } else {
                if (gr.good) ++rec_.p_hat_flags;  // p-hat below alpha/2: not usable as a round
                ++rec_.burn_ins;
                ph = Ph::burn_in;
                ph_end = now_ + P_.burn_in;
            }
        };

        for (;;) {
            if (ph == Ph::done) {
                if (si >= snaps.size()) break;
                // Plain interchange keeps driving the state for late snapshots.
                const Event& e = stream_.peek();
                if (snaps[si] <= e.t) {
                    take_snapshot(snaps[si++]);
                    continue;
                }
                Event ev = stream_.pop();
                now_ = ev.t;
                apply_plain(ev);
                continue;
            }
            const Event& e = stream_.peek();
            double next_stop = std::min(e.t, ph_end);
            if (si < snaps.size() && snaps[si] <= next_stop) {
                take_snapshot(snaps[si++]);
                continue;
            }
            if (ph_end <= e.t) {
                now_ = ph_end;
                switch (ph) {
                    case Ph::burn_in: {
                        if (absorbed()) {
                            finish();
                            ph = Ph::done;
                            break;
                        }
                        decide();
                        break;
                    }
                    case Ph::constant:
                        ph = Ph::pinkening;
                        ph_end = now_ + 1.0;
                        break;
                    case Ph::pinkening: {
                        depink(cap, p_hat, r_before, w_before);
                        if (absorbed() ||
                            static_cast<int>(rec_.rounds.size()) >= round_cap) {
                            finish();
                            ph = Ph::done;
                            break;
                        }
                        decide();
                        break;
                    }
                    default:
                        break;
                }
                continue;
            }
            Event ev = stream_.pop();
            now_ = ev.t;
            if (ph == Ph::pinkening && nK_ < cap && red_white_edge(ev))
                apply_pinkening(ev);
            else
                apply_plain(ev);
            if (P_.check_invariants) check_partition(cap);
        }
        rec_.end_time = now_;
        return std::move(rec_);
    }

private:
    bool absorbed() const { return nK_ == 0 && (nR_ == 0 || nW_ == 0); }

    void finish() {
        rec_.fill = nK_ == 0 && nW_ == 0   ? ChamEnd::filled
                    : nK_ == 0 && nR_ == 0 ? ChamEnd::emptied
                                           : ChamEnd::truncated;
    }

    bool red_white_edge(const Event& e) const {
        auto [u, v] = g_.edges[e.edge];
        return (color_[u] == ChamColor::red && color_[v] == ChamColor::white) ||
               (color_[u] == ChamColor::white && color_[v] == ChamColor::red);
    }

    void apply_plain(const Event& e) {
        if (!e.coin) return;
        auto [u, v] = g_.edges[e.edge];
        std::swap(color_[u], color_[v]);
        std::swap(label_at_[u], label_at_[v]);
        if (label_at_[u] >= 0) z_[label_at_[u]] = u;
        if (label_at_[v] >= 0) z_[label_at_[v]] = v;
    }

    void apply_pinkening(const Event& e) {
        auto [u, v] = g_.edges[e.edge];
        color_[u] = ChamColor::pink;
        color_[v] = ChamColor::pink;
        --nR_;
        --nW_;
        nK_ += 2;
    }

    void depink(int cap, double p_hat, int r_before, int w_before) {
        RoundOutcome out;
        out.end_time = now_;
        out.p_hat = p_hat;
        out.r_before = r_before;
        out.w_before = w_before;
        out.burn_ins_before = rec_.burn_ins;
        bool full = nK_ == cap && cap > 0;
        bool hat = full && coin_.bernoulli(std::min(1.0, (P_.alpha / 2.0) / p_hat));
        std::vector<int> pinks;
        pinks.reserve(nK_);
        for (int v = 0; v < g_.n; ++v)
            if (color_[v] == ChamColor::pink) pinks.push_back(v);
        if (hat) {
            out.type = 1;
            out.all_red = coin_.bernoulli(0.5);
            for (int v : pinks) color_[v] = out.all_red ? ChamColor::red : ChamColor::white;
            (out.all_red ? nR_ : nW_) += nK_;
        } else {
            out.type = 2;
            // Uniform half red, half white.
            for (std::size_t i = pinks.size(); i > 1; --i)
                std::swap(pinks[i - 1], pinks[coin_.below(i)]);
            std::size_t half = pinks.size() / 2;
            for (std::size_t i = 0; i < pinks.size(); ++i)
                color_[pinks[i]] = i < half ? ChamColor::red : ChamColor::white;
            nR_ += static_cast<int>(half);
            nW_ += static_cast<int>(pinks.size() - half);
        }
        nK_ = 0;
        out.ink_after = nR_;
        rec_.rounds.push_back(out);
    }

    void take_snapshot(double t) {
        now_ = std::max(now_, t);
        ChameleonRunRecord::Snapshot s;
        s.t = t;
        s.z = z_;
        s.ink_total = nR_ + 0.5 * nK_;
        s.ink_at.assign(g_.n, 0.0);
        for (int v = 0; v < g_.n; ++v)
            s.ink_at[v] = color_[v] == ChamColor::red    ? 1.0
                          : color_[v] == ChamColor::pink ? 0.5
                                                         : 0.0;
        rec_.snapshots.push_back(std::move(s));
    }

    void check_partition(int cap) const {
        int b = 0, r = 0, k = 0, w = 0;
        for (ChamColor c : color_) {
            b += c == ChamColor::black;
            r += c == ChamColor::red;
            k += c == ChamColor::pink;
            w += c == ChamColor::white;
        }
        if (b != k_ - 1 || r != nR_ || k != nK_ || w != nW_ || b + r + k + w != g_.n)
            throw ChamError("chameleon: partition invariant violated");
        if (cap > 0 && nK_ > cap) throw ChamError("chameleon: pink cap exceeded");
        double ink = nR_ + 0.5 * nK_;
        if (ink < -1e-12 || ink > g_.n - k_ + 1 + 1e-12)
            throw ChamError("chameleon: ink out of range");
    }

    const Graph& g_;
    RoundParams P_;
    GoodnessCache* cache_;
    GoodnessCache own_cache_;
    std::vector<ChamColor> color_;
    std::vector<int> label_at_, z_;
    int k_ = 0, nR_ = 0, nK_ = 0, nW_ = 0;
    LiveStream stream_;
    Rng coin_;
    double now_ = 0.0;
    ChameleonRunRecord rec_;
};

}  // namespace

ChameleonRunRecord run_chameleon(const Graph& g, const std::vector<int>& w, int y,
                                 const RoundParams& params, GoodnessCache* cache,
                                 const std::vector<double>& snapshot_times) {
    Engine en(g, w, y, params, cache);
    return en.run(snapshot_times);
}

InkIdentityResult verify_ink_identity(const Graph& g, const std::vector<int>& w, int y, double t,
                                      const std::vector<int>& c, int b, int trials,
                                      const RoundParams& params, GoodnessCache* cache) {
    int k = static_cast<int>(w.size()) + 1;
    ExactProcess ip = build_exact(g, k, ProcTag::ip_k);
    std::vector<int> start = w;
    start.push_back(y);
    std::vector<int> target = c;
    target.push_back(b);
    Eigen::VectorXd dist = exact_distribution(ip, t, ip.state_index(start));
    double exact = dist(ip.state_index(target));

    GoodnessCache local(derive_seed(params.seed, 0xca));
    if (!cache) cache = &local;
    RunningStats st;
    for (int trial = 0; trial < trials; ++trial) {
        RoundParams p = params;
        p.seed = derive_seed(params.seed, trial);
        ChameleonRunRecord rec = run_chameleon(g, w, y, p, cache, {t});
        const auto& s = rec.snapshots.at(0);
        st.add(s.z == c ? s.ink_at[b] : 0.0);
    }
    InkIdentityResult res;
    res.mc_value = st.mean();
    res.mc_stderr = st.stderror();
    res.exact_value = exact;
    res.z_score = res.mc_stderr > 0 ? (res.mc_value - exact) / res.mc_stderr
                                    : (std::fabs(res.mc_value - exact) < 1e-12 ? 0.0 : 1e9);
    return res;
}

double ink_identity_max_z(const Graph& g, const std::vector<int>& w, int y, double t, int trials,
                          const RoundParams& params, GoodnessCache* cache) {
    int k = static_cast<int>(w.size()) + 1;
    ExactProcess ip = build_exact(g, k, ProcTag::ip_k);
    std::vector<int> start = w;
    start.push_back(y);
    Eigen::VectorXd dist = exact_distribution(ip, t, ip.state_index(start));

    GoodnessCache local(derive_seed(params.seed, 0xca));
    if (!cache) cache = &local;
    std::vector<RunningStats> cells(ip.size());
    for (int trial = 0; trial < trials; ++trial) {
        RoundParams p = params;
        p.seed = derive_seed(params.seed, trial);
        ChameleonRunRecord rec = run_chameleon(g, w, y, p, cache, {t});
        const auto& s = rec.snapshots.at(0);
        for (int i = 0; i < ip.size(); ++i) {
            const auto& st = ip.states[i];
            bool z_match = std::equal(st.begin(), st.end() - 1, s.z.begin());
            cells[i].add(z_match ? s.ink_at[st.back()] : 0.0);
        }
    }
    double max_z = 0.0;
    for (int i = 0; i < ip.size(); ++i) {
        // Floor the sample stderr with the binomial one under the exact law
        // so empty rare cells are scored sanely.
        double p = std::clamp(dist(i), 0.0, 1.0);
        double se = std::max(cells[i].stderror(), std::sqrt(p * (1 - p) / trials));
        double diff = cells[i].mean() - dist(i);
        if (se > 0)
            max_z = std::max(max_z, std::fabs(diff / se));
        else if (std::fabs(diff) > 1e-12)
            return 1e9;
    }
    return max_z;
}

int DoobChain::delta(int r) const {
    int m = std::min(r, N - r);
    return m <= 0 ? 0 : static_cast<int>(std::ceil(alpha * m));
}

double DoobChain::z_stat(int r) const {
    if (r >= N) return 0.0;
    return std::sqrt(static_cast<double>(std::min(r, N - r)) * N) / static_cast<double>(r);
}

DoobChain doob_chain(int n, int k, double alpha) {
    DoobChain ch;
    ch.N = n - k + 1;
    if (ch.N < 2) throw ChamError("doob_chain: n - k + 1 must be at least 2");
    ch.alpha = alpha;
    ch.p = alpha / 2.0;
    return ch;
}

double supermartingale_verify(const DoobChain& ch) {
    double worst = 0.0;
    for (int r = 1; r < ch.N; ++r) {
        int d = ch.delta(r);
        double up = static_cast<double>(r + d) / (2.0 * r) * ch.p;
        double down = static_cast<double>(r - d) / (2.0 * r) * ch.p;
        double e = (1.0 - ch.p) * ch.z_stat(r) + up * ch.z_stat(r + d);
        if (r - d > 0) e += down * ch.z_stat(r - d);
        worst = std::max(worst, e / ch.z_stat(r));
    }
    if (!(worst < 1.0)) throw ChamError("supermartingale_verify: ratio not below 1");
    return worst;
}

namespace {

int doob_step(const DoobChain& ch, int r, Rng& rng) {
    if (r >= ch.N) return r;
    if (!rng.bernoulli(ch.p)) return r;
    int d = ch.delta(r);
    double up = static_cast<double>(r + d) / (2.0 * r);
    return rng.bernoulli(up) ? r + d : r - d;
}

}  // namespace

std::vector<double> simulate_missing_mean(const DoobChain& ch, int steps, int trials,
                                          uint64_t seed, int r0, std::vector<double>* stderrs) {
    std::vector<RunningStats> acc(steps + 1);
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, trial));
        int r = r0;
        acc[0].add(1.0 - static_cast<double>(r) / ch.N);
        for (int i = 1; i <= steps; ++i) {
            r = doob_step(ch, r, rng);
            acc[i].add(1.0 - static_cast<double>(r) / ch.N);
        }
    }
    std::vector<double> mean(steps + 1);
    if (stderrs) stderrs->resize(steps + 1);
    for (int i = 0; i <= steps; ++i) {
        mean[i] = acc[i].mean();
        if (stderrs) (*stderrs)[i] = acc[i].stderror();
    }
    return mean;
}

YhatTailStats simulate_yhat(const DoobChain& ch, const std::vector<double>& hold_by_level,
                            int trials, uint64_t seed) {
    int m = (ch.N + 1) / 2;
    int levels = dyadic_level(ch.N) + 1;
    YhatTailStats st;
    std::vector<RunningStats> t_up(levels);
    RunningStats cross, s_stat, t_below, tau;
    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(derive_seed(seed, trial));
        int r = 1;
        long step = 0;
        double clock = 0.0;
        std::vector<long> hit(levels, -1);
        long first_at_or_above_m = -1, last_below_m = -1;
        long crossings = 0;
        int prev = r;
        double settle_clock = 0.0;
        const long step_cap = 200000;
        while (r < ch.N && step < step_cap) {
            int lvl_cap = std::min(dyadic_level(std::max(std::min(r, ch.N - r), 1)),
                                   levels - 1);
            double hold = hold_by_level.empty()
                              ? 1.0
                              : hold_by_level[std::min(lvl_cap,
                                                       static_cast<int>(hold_by_level.size()) - 1)];
            clock += hold;
            prev = r;
            r = doob_step(ch, r, rng);
            ++step;
            for (int i = 0; i < levels; ++i)
                if (hit[i] < 0 && r >= std::min(1 << i, m)) hit[i] = step;
            if (first_at_or_above_m < 0 && r >= m) first_at_or_above_m = step;
            if (prev >= m && r < m) {
                ++crossings;
                last_below_m = step;
            }
            if (r >= m && settle_clock == 0.0) settle_clock = clock;
            if (r < m) settle_clock = 0.0;
        }
        for (int i = 0; i < levels; ++i)
            if (hit[i] >= 0) t_up[i].add(static_cast<double>(hit[i]));
        cross.add(static_cast<double>(crossings));
        if (first_at_or_above_m >= 0) {
            long s = (last_below_m > first_at_or_above_m ? last_below_m - first_at_or_above_m
                                                         : 0);
            s_stat.add(static_cast<double>(s));
        }
        if (crossings >= 1 && last_below_m >= 0) t_below.add(static_cast<double>(last_below_m));
        tau.add(settle_clock > 0 ? settle_clock : clock);
    }
    for (int i = 0; i < levels; ++i) st.t_up_mean.push_back(t_up[i].mean());
    st.cross_mean = cross.mean();
    st.s_mean = s_stat.mean();
    st.t_below_mean = t_below.mean();
    st.tau_mean = tau.mean();
    return st;
}

MissingInkCurve missing_ink_curves(const std::vector<ChameleonRunRecord>& records, int n, int k,
                                   double c_alpha, int max_round_index) {
    MissingInkCurve curve;
    double N = n - k + 1;
    std::vector<RunningStats> acc(max_round_index + 1);
    std::vector<long> extra(max_round_index + 1, 0);
    int filled = 0;
    for (const auto& rec : records) {
        if (rec.fill != ChamEnd::filled) continue;
        ++filled;
        for (int i = 0; i <= max_round_index; ++i) {
            double ink;
            if (i == 0)
                ink = 1.0;  // single red before the first depinking
            else if (i <= static_cast<int>(rec.rounds.size()))
                ink = rec.rounds[i - 1].ink_after;
            else
                ink = N;  // absorbed on Fill
            acc[i].add(1.0 - ink / N);
            int bib = i == 0 ? 1
                             : (i <= static_cast<int>(rec.rounds.size())
                                    ? rec.rounds[i - 1].burn_ins_before
                                    : rec.burn_ins);
            if (bib >= 2) ++extra[i];
        }
    }
    curve.filled_runs = filled;
    curve.wide_ci = filled < 100;
    for (int i = 0; i <= max_round_index; ++i) {
        curve.round_index.push_back(i);
        curve.missing_mean.push_back(acc[i].mean());
        curve.missing_stderr.push_back(acc[i].stderror());
        double correction = filled > 0 ? static_cast<double>(extra[i]) / filled : 0.0;
        curve.bound.push_back(std::sqrt(N) * std::pow(c_alpha, i) + correction);
    }
    return curve;
}

}  // namespace exmix
