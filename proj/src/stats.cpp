#include "exmix/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exmix {

double RunningStats::stderror() const {
    if (n_ < 2) return 0.0;
    return std::sqrt(variance() / static_cast<double>(n_));
}

namespace {

// Series expansion of P(a,x), valid for x < a+1.
double gamma_p_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    for (int k = 1; k < 500; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Continued fraction for Q(a,x), valid for x >= a+1 (Lentz).
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q: bad arguments");
    if (x == 0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_cf(a, x);
}

double chi2_sf(double stat, int dof) {
    if (dof <= 0) return 1.0;
    if (stat <= 0) return 1.0;
    return gamma_q(0.5 * dof, 0.5 * stat);
}

double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected, double min_expected) {
    if (observed.size() != expected.size() || observed.empty())
        throw std::invalid_argument("chi2_gof: size mismatch");
    // Pool low-expectation bins into one.
    double stat = 0.0;
    int bins = 0;
    double pool_obs = 0.0, pool_exp = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] < min_expected) {
            pool_obs += observed[i];
            pool_exp += expected[i];
        } else {
            double d = observed[i] - expected[i];
            stat += d * d / expected[i];
            ++bins;
        }
    }
    if (pool_exp > 0) {
        double d = pool_obs - pool_exp;
        stat += d * d / pool_exp;
        ++bins;
    }
    return chi2_sf(stat, bins - 1);
}

double chi2_homogeneity_pvalue(const std::vector<long>& a, const std::vector<long>& b,
                               double min_expected) {
    if (a.size() != b.size() || a.empty())
        throw std::invalid_argument("chi2_homogeneity: size mismatch");
    double na = 0, nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        na += static_cast<double>(a[i]);
        nb += static_cast<double>(b[i]);
    }
    double total = na + nb;
    double stat = 0.0;
    int bins = 0;
    double pa_obs = 0, pa_exp = 0, pb_obs = 0, pb_exp = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double col = static_cast<double>(a[i] + b[i]);
        double ea = col * na / total;
        double eb = col * nb / total;
        if (ea < min_expected || eb < min_expected) {
            pa_obs += static_cast<double>(a[i]);
            pa_exp += ea;
            pb_obs += static_cast<double>(b[i]);
            pb_exp += eb;
            continue;
        }
        stat += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
        ++bins;
    }
    if (pa_exp > 0) {
        stat += (pa_obs - pa_exp) * (pa_obs - pa_exp) / pa_exp +
                (pb_obs - pb_exp) * (pb_obs - pb_exp) / pb_exp;
        ++bins;
    }
    return chi2_sf(stat, bins - 1);
}

double chi2_independence_pvalue(const std::vector<std::vector<long>>& table) {
    std::size_t r = table.size();
    if (r == 0) throw std::invalid_argument("chi2_independence: empty table");
    std::size_t c = table[0].size();
    std::vector<double> row(r, 0), col(c, 0);
    double total = 0;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            row[i] += static_cast<double>(table[i][j]);
            col[j] += static_cast<double>(table[i][j]);
            total += static_cast<double>(table[i][j]);
        }
    // Drop empty rows/columns, then compute the statistic directly.
    double stat = 0.0;
    int nr = 0, nc = 0;
    for (std::size_t i = 0; i < r; ++i)
        if (row[i] > 0) ++nr;
    for (std::size_t j = 0; j < c; ++j)
        if (col[j] > 0) ++nc;
    for (std::size_t i = 0; i < r; ++i) {
        if (row[i] == 0) continue;
        for (std::size_t j = 0; j < c; ++j) {
            if (col[j] == 0) continue;
            double e = row[i] * col[j] / total;
            double d = static_cast<double>(table[i][j]) - e;
            stat += d * d / e;
        }
    }
    return chi2_sf(stat, (nr - 1) * (nc - 1));
}

double ks2_pvalue(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks2: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    double en = std::sqrt(na * nb / (na + nb));
    double lam = (en + 0.12 + 0.11 / en) * d;
    // Kolmogorov asymptotic series.
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lam * lam);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

}  // namespace exmix
