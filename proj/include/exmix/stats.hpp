#pragma once

#include <cstddef>
#include <vector>

namespace exmix {

// Streaming mean/variance accumulator (Welford).
class RunningStats {
public:
    void add(double x) {
        ++n_;
        double d = x - mean_;
        mean_ += d / static_cast<double>(n_);
        m2_ += d * (x - mean_);
    }
    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double stderror() const;

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Regularized upper incomplete gamma Q(a, x); used for chi-square p-values.
double gamma_q(double a, double x);

// P[X >= stat] for a chi-square variable with dof degrees of freedom.
double chi2_sf(double stat, int dof);

// Pearson chi-square GOF test of observed counts against expected counts.
// Bins with expected < min_expected are pooled. Returns p-value.
double chi2_gof_pvalue(const std::vector<double>& observed,
                       const std::vector<double>& expected,
                       double min_expected = 5.0);

// Two-sample chi-square homogeneity test over category counts.
double chi2_homogeneity_pvalue(const std::vector<long>& a, const std::vector<long>& b,
                               double min_expected = 5.0);

// Chi-square independence test on an r x c contingency table.
double chi2_independence_pvalue(const std::vector<std::vector<long>>& table);

// Two-sample Kolmogorov-Smirnov test on real-valued samples (ties allowed;
// the asymptotic p-value is conservative in the presence of ties).
double ks2_pvalue(std::vector<double> a, std::vector<double> b);

}  // namespace exmix
