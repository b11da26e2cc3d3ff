#include "thumbs/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "common/errors.hpp"

namespace ssc {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_ppf(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw DomainError("normal_ppf needs p in (0,1)");
    // Rational approximation (Acklam), then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1 - plow;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= phigh) {
        const double q = p - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
             a[5]) *
            q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log(1 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
              c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    const double e = normal_cdf(x) - p;
    const double u = e * std::sqrt(2 * M_PI) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

double incomplete_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw DomainError("incomplete_beta: x outside [0,1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    // Continued fraction (Lentz) on the canonical side.
    if (x > (a + 1.0) / (a + b + 2.0))
        return 1.0 - incomplete_beta(b, a, 1.0 - x);
    const double ln_front = a * std::log(x) + b * std::log(1.0 - x) -
                            std::log(a) + std::lgamma(a + b) - std::lgamma(a) -
                            std::lgamma(b);
    const double tiny = 1e-300;
    double f = 1.0, c = 1.0, d = 0.0;
    for (int m = 0; m <= 300; ++m) {
        double numerator;
        if (m == 0)
            numerator = 1.0;
        else if (m % 2 == 0) {
            const double k = m / 2.0;
            numerator = k * (b - k) * x / ((a + 2 * k - 1) * (a + 2 * k));
        } else {
            const double k = (m - 1) / 2.0;
            numerator =
                -(a + k) * (a + b + k) * x / ((a + 2 * k) * (a + 2 * k + 1));
        }
        d = 1.0 + numerator * d;
        if (std::abs(d) < tiny) d = tiny;
        d = 1.0 / d;
        c = 1.0 + numerator / c;
        if (std::abs(c) < tiny) c = tiny;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-15) break;
    }
    return std::exp(ln_front) * (f - 1.0);
}

double student_t_two_sided_p(double t, double dof) {
    if (dof <= 0.0) throw DomainError("t distribution needs dof > 0");
    const double x = dof / (dof + t * t);
    return incomplete_beta(dof / 2.0, 0.5, x);
}

std::vector<double> midranks(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = 0.5 * double(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    return rank;
}

namespace {

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= double(n);
    my /= double(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ConstantInputError("correlation undefined for constant input");
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

std::pair<double, double> spearman_rho(const std::vector<double>& x,
                                       const std::vector<double>& y) {
    if (x.size() != y.size())
        throw LengthError("spearman_rho: unequal lengths");
    const std::size_t n = x.size();
    if (n < 3) throw LengthError("spearman_rho needs n >= 3");
    std::vector<double> rx = midranks(x);
    std::vector<double> ry = midranks(y);
    const double rho = pearson(rx, ry);

    double p;
    if (n <= 10) {
        // Exact permutation distribution of rho over arrangements of the
        // y-ranks (multiset permutations are uniform under the null).
        std::vector<double> perm = ry;
        std::sort(perm.begin(), perm.end());
        const double target = std::abs(rho) - 1e-12;
        long hits = 0, total = 0;
        do {
            ++total;
            if (std::abs(pearson(rx, perm)) >= target) ++hits;
        } while (std::next_permutation(perm.begin(), perm.end()));
        p = double(hits) / double(total);
    } else {
        const double denom = 1.0 - rho * rho;
        if (denom <= 0.0) {
            p = 0.0;
        } else {
            const double t = rho * std::sqrt((double(n) - 2.0) / denom);
            p = student_t_two_sided_p(t, double(n) - 2.0);
        }
    }
    return {rho, p};
}

StatResult wilcoxon_signed_rank(const std::vector<double>& a,
                                const std::vector<double>& b) {
    if (a.size() != b.size())
        throw LengthError("wilcoxon_signed_rank: unequal lengths");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double v = a[i] - b[i];
        if (v != 0.0) d.push_back(v);
    }
    if (d.empty())
        throw AllZeroDifferencesError(
            "wilcoxon_signed_rank: all paired differences are zero");
    const std::size_t n = d.size();
    std::vector<double> absd(n);
    for (std::size_t i = 0; i < n; ++i) absd[i] = std::abs(d[i]);
    const std::vector<double> rank = midranks(absd);

    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (d[i] > 0.0) w_plus += rank[i];

    StatResult res;
    res.test_name = "wilcoxon_signed_rank";
    res.statistic = w_plus;
    res.n = int(n);

    if (n <= 25) {
        // Exact tail over the 2^n sign assignments; ranks doubled so tied
        // (half-integer) ranks stay integral.
        std::vector<int> r2(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            r2[i] = int(std::lround(2.0 * rank[i]));
            total += r2[i];
        }
        std::vector<double> count(std::size_t(total) + 1, 0.0);
        count[0] = 1.0;
        for (std::size_t i = 0; i < n; ++i)
            for (int w = total; w >= r2[i]; --w)
                count[std::size_t(w)] += count[std::size_t(w - r2[i])];
        const int w2 = int(std::lround(2.0 * w_plus));
        double below = 0.0, above = 0.0, all = 0.0;
        for (int w = 0; w <= total; ++w) {
            all += count[std::size_t(w)];
            if (w <= w2) below += count[std::size_t(w)];
            if (w >= w2) above += count[std::size_t(w)];
        }
        res.p_value = std::min(1.0, 2.0 * std::min(below, above) / all);
        res.notes = "exact";
    } else {
        const double mean = double(n) * double(n + 1) / 4.0;
        double tie_term = 0.0;
        {
            std::vector<double> sorted = absd;
            std::sort(sorted.begin(), sorted.end());
            std::size_t i = 0;
            while (i < n) {
                std::size_t j = i;
                while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
                const double t = double(j - i + 1);
                tie_term += t * t * t - t;
                i = j + 1;
            }
        }
        const double var =
            double(n) * double(n + 1) * double(2 * n + 1) / 24.0 -
            tie_term / 48.0;
        const double diff = w_plus - mean;
        const double cc = diff > 0 ? -0.5 : (diff < 0 ? 0.5 : 0.0);
        const double z = (diff + cc) / std::sqrt(var);
        res.p_value = 2.0 * (1.0 - normal_cdf(std::abs(z)));
        res.notes = "normal approximation, continuity corrected";
    }
    return res;
}

StatResult shapiro_wilk(const std::vector<double>& x) {
    const int n = int(x.size());
    if (n < 3 || n > 5000)
        throw SampleSizeError("shapiro_wilk needs 3 <= n <= 5000");
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    if (s.front() == s.back())
        throw ConstantInputError("shapiro_wilk: constant sample");

    // Expected normal order statistics (Blom scores) and AS R94 coefficient
    // corrections for the two extreme weights on each side.
    std::vector<double> m(std::size_t(n), 0.0);
    double ssm = 0.0;
    for (int i = 0; i < n; ++i) {
        m[std::size_t(i)] =
            normal_ppf((double(i) + 1.0 - 0.375) / (double(n) + 0.25));
        ssm += m[std::size_t(i)] * m[std::size_t(i)];
    }
    std::vector<double> w(std::size_t(n), 0.0);
    const double rsn = 1.0 / std::sqrt(double(n));
    if (n == 3) {
        w[0] = -std::sqrt(0.5);
        w[1] = 0.0;
        w[2] = std::sqrt(0.5);
    } else {
        const double cn = m[std::size_t(n - 1)] / std::sqrt(ssm);
        const double an =
            cn + ((((-2.706056 * rsn + 4.434685) * rsn - 2.071190) * rsn -
                   0.147981) *
                      rsn +
                  0.221157) *
                     rsn;
        if (n <= 5) {
            const double phi =
                (ssm - 2.0 * m[std::size_t(n - 1)] * m[std::size_t(n - 1)]) /
                (1.0 - 2.0 * an * an);
            for (int i = 1; i < n - 1; ++i)
                w[std::size_t(i)] = m[std::size_t(i)] / std::sqrt(phi);
            w[std::size_t(n - 1)] = an;
            w[0] = -an;
        } else {
            const double cn1 = m[std::size_t(n - 2)] / std::sqrt(ssm);
            const double an1 =
                cn1 + ((((-3.582633 * rsn + 5.682633) * rsn - 1.752461) * rsn -
                        0.293762) *
                           rsn +
                       0.042981) *
                          rsn;
            const double phi =
                (ssm -
                 2.0 * m[std::size_t(n - 1)] * m[std::size_t(n - 1)] -
                 2.0 * m[std::size_t(n - 2)] * m[std::size_t(n - 2)]) /
                (1.0 - 2.0 * an * an - 2.0 * an1 * an1);
            for (int i = 2; i < n - 2; ++i)
                w[std::size_t(i)] = m[std::size_t(i)] / std::sqrt(phi);
            w[std::size_t(n - 1)] = an;
            w[std::size_t(n - 2)] = an1;
            w[0] = -an;
            w[1] = -an1;
        }
    }

    double mean = 0.0;
    for (double v : s) mean += v;
    mean /= double(n);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
        num += w[std::size_t(i)] * s[std::size_t(i)];
        den += (s[std::size_t(i)] - mean) * (s[std::size_t(i)] - mean);
    }
    const double W = num * num / den;

    StatResult res;
    res.test_name = "shapiro_wilk";
    res.statistic = W;
    res.n = n;
    if (n == 3) {
        const double pi6 = 6.0 / M_PI;
        const double stqr = std::asin(std::sqrt(0.75));
        res.p_value = std::clamp(
            pi6 * (std::asin(std::sqrt(W)) - stqr), 0.0, 1.0);
    } else if (n <= 11) {
        const double g = -2.273 + 0.459 * n;
        const double mu =
            0.5440 - 0.39978 * n + 0.025054 * n * n - 0.0006714 * n * n * n;
        const double sig = std::exp(1.3822 - 0.77857 * n + 0.062767 * n * n -
                                    0.0020322 * n * n * n);
        const double z = (-std::log(g - std::log1p(-W)) - mu) / sig;
        res.p_value = 1.0 - normal_cdf(z);
    } else {
        const double ln = std::log(double(n));
        const double mu = -1.5861 - 0.31082 * ln - 0.083751 * ln * ln +
                          0.0038915 * ln * ln * ln;
        const double sig =
            std::exp(-0.4803 - 0.082676 * ln + 0.0030302 * ln * ln);
        const double z = (std::log1p(-W) - mu) / sig;
        res.p_value = 1.0 - normal_cdf(z);
    }
    return res;
}

StatResult paired_t(const std::vector<double>& a,
                    const std::vector<double>& b) {
    if (a.size() != b.size()) throw LengthError("paired_t: unequal lengths");
    const int n = int(a.size());
    if (n < 2) throw LengthError("paired_t needs n >= 2");
    double mean = 0.0;
    for (int i = 0; i < n; ++i) mean += a[std::size_t(i)] - b[std::size_t(i)];
    mean /= double(n);
    double ss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double d = a[std::size_t(i)] - b[std::size_t(i)] - mean;
        ss += d * d;
    }
    StatResult res;
    res.test_name = "paired_t";
    res.n = n;
    if (ss == 0.0) {
        if (mean == 0.0) {
            res.statistic = 0.0;
            res.p_value = 1.0;
            res.notes = "all differences zero";
            return res;
        }
        throw ZeroVarianceError("paired_t: zero difference variance");
    }
    const double sd = std::sqrt(ss / double(n - 1));
    res.statistic = mean / (sd / std::sqrt(double(n)));
    res.p_value = student_t_two_sided_p(res.statistic, double(n - 1));
    return res;
}

} // namespace ssc
