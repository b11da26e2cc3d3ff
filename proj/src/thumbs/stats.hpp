#ifndef SSC_THUMBS_STATS_HPP
#define SSC_THUMBS_STATS_HPP

#include <string>
#include <utility>
#include <vector>

namespace ssc {

struct StatResult {
    std::string test_name;
    double statistic = 0.0;
    double p_value = 1.0;
    int n = 0;
    std::string notes;
};

double normal_cdf(double z);
// Inverse standard normal CDF, refined to near machine precision.
double normal_ppf(double p);
// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);
// Two-sided tail probability of Student's t with `dof` degrees of freedom.
double student_t_two_sided_p(double t, double dof);

// Mid-ranks (1-based, ties averaged).
std::vector<double> midranks(const std::vector<double>& x);

// Spearman rank correlation: Pearson correlation of mid-ranks. Two-sided p
// is an exact permutation tail for n <= 10 and the t-approximation with
// n - 2 degrees of freedom above that.
std::pair<double, double> spearman_rho(const std::vector<double>& x,
                                       const std::vector<double>& y);

// Signed-rank test on paired samples. Zero differences are dropped, tied
// absolute differences get average ranks; the statistic is the positive rank
// sum W+. Exact tail by enumeration over sign assignments for n <= 25,
// normal approximation with continuity and tie correction otherwise.
StatResult wilcoxon_signed_rank(const std::vector<double>& a,
                                const std::vector<double>& b);

// W normality statistic and p-value following the published AS R94
// approximation (polynomial coefficient corrections on expected normal order
// statistics; log-normal / normal tail transforms for p).
StatResult shapiro_wilk(const std::vector<double>& x);

// t = mean(d) / (sd(d)/sqrt(n)), two-sided p with n - 1 dof.
StatResult paired_t(const std::vector<double>& a,
                    const std::vector<double>& b);

} // namespace ssc

#endif
