#include "qortho/qcore.hpp"

#include <cmath>
#include <limits>

namespace qortho {

double qpoch(double a, double q, int n) {
    double p = 1.0;
    double aq = a;
    for (int j = 0; j < n; ++j) {
        p *= (1.0 - aq);
        aq *= q;
    }
    return p;
}

dd qpoch_dd(dd a, dd q, int n) {
    dd p(1.0);
    dd aq = a;
    for (int j = 0; j < n; ++j) {
        p *= (dd(1.0) - aq);
        aq *= q;
    }
    return p;
}

PochResult qpoch_inf(double a, const QContext& ctx) {
    if (a == 0.0) return {1, 0.0, 0.0};
    const double q = ctx.q;
    PochResult r;
    double aq = a;  // a q^j
    for (int j = 0; j < ctx.max_terms; ++j) {
        double f = 1.0 - aq;
        if (std::abs(f) <= 1e-14 * (1.0 + std::abs(aq))) {
            // a = q^{-j}: the product vanishes
            return {0, -std::numeric_limits<double>::infinity(), 0.0};
        }
        if (f < 0.0) r.sign = -r.sign;
        r.log_abs += std::abs(aq) < 0.5 ? std::log1p(-aq) : std::log(std::abs(f));
        aq *= q;
        double absaq = std::abs(aq);
        if (absaq < 1.0) {
            double tail_log = absaq / ((1.0 - q) * (1.0 - absaq));
            if (tail_log <= ctx.eps_term) {
                r.tail_bound = std::expm1(tail_log);
                return r;
            }
        }
    }
    // max_terms hit: record the (uncertified-to-eps) bound we do have
    double absaq = std::abs(aq);
    r.tail_bound = absaq < 1.0
                       ? std::expm1(absaq / ((1.0 - q) * (1.0 - absaq)))
                       : std::numeric_limits<double>::infinity();
    return r;
}

double qpoch_paired(double b, const QContext& ctx, int n) {
    return qpoch(-b * b, ctx.q * ctx.q, n);
}

LatticeValue mu(double x, double alpha, const QContext& ctx) {
    const double q = ctx.q;
    return {x, alpha, std::pow(q, -x) + alpha * std::pow(q, x + 1.0)};
}

PhiResult phi_eval(const PhiSeries& s, const QContext& ctx) {
    const dd q(ctx.q);
    const dd z = s.z;
    const int conv = 1 + static_cast<int>(s.den.size()) + 2 * static_cast<int>(s.den_pairs.size())
                     - static_cast<int>(s.num.size()) - 2 * static_cast<int>(s.num_pairs.size());
    dd total(0.0), sum_abs(0.0);
    dd t(1.0);
    dd qm(1.0);  // q^m
    for (int m = 0;; ++m) {
        total += t;
        sum_abs += fabs(t);
        if (m == s.terms) break;
        dd fac(1.0);
        for (dd a : s.num) fac *= (dd(1.0) - a * qm);
        for (const PairFactor& p : s.num_pairs)
            fac *= (dd(1.0) - p.two_re * qm + p.abs_sq * qm * qm);
        dd den(1.0);
        for (dd b : s.den) {
            dd f = dd(1.0) - b * qm;
            if (std::abs(f.hi) <= 1e-13 * (1.0 + std::abs(b.hi * qm.hi)))
                throw DenominatorPole("phi: denominator parameter " + std::to_string(b.hi) +
                                      " vanishes at term " + std::to_string(m));
            den *= f;
        }
        for (const PairFactor& p : s.den_pairs) {
            dd f = dd(1.0) - p.two_re * qm + p.abs_sq * qm * qm;
            if (std::abs(f.hi) <= 1e-13)
                throw DenominatorPole("phi: paired denominator vanishes at term " + std::to_string(m));
            den *= f;
        }
        den *= (dd(1.0) - qm * q);  // the (q;q)_m factor
        t = t * fac / den * z;
        if (conv != 0) {
            dd g = -qm;
            t = conv > 0 ? t * powi(g, conv) : t / powi(g, -conv);
        }
        qm *= q;
    }
    double v = static_cast<double>(total);
    double sa = static_cast<double>(sum_abs);
    double est = sa > 0.0 && v != 0.0
                     ? sa / std::abs(v) * 2.5e-32 * static_cast<double>(s.terms + 2)
                     : 0.0;
    return {v, est, sa};
}

double phi_terminating(std::span<const double> num, std::span<const double> den,
                       const QContext& ctx, double z, int n) {
    PhiSeries s;
    s.num.assign(num.begin(), num.end());
    s.den.assign(den.begin(), den.end());
    s.z = z;
    s.terms = n;
    return phi_eval(s, ctx).value;
}

PochResult bilateral_weight(int n, double d, double t1, double t2, const QContext& ctx) {
    if (!(t1 * t2 > 0.0)) throw DomainError("bilateral_weight: require t1*t2 > 0");
    if (!(d >= ctx.q && d < 1.0)) throw DomainError("bilateral_weight: require q <= d < 1");
    const double q = ctx.q;
    const double qn = std::pow(q, static_cast<double>(n));
    const double qmn = std::pow(q, static_cast<double>(-n));

    PochResult p1 = qpoch_inf(-t1 * qmn / d, ctx);
    PochResult p2 = qpoch_inf(t1 * qn * d, ctx);
    PochResult p3 = qpoch_inf(-t2 * qmn / d, ctx);
    PochResult p4 = qpoch_inf(t2 * qn * d, ctx);
    PochResult c1 = qpoch_inf(-t1 * t2 / q, ctx);
    PochResult c2 = qpoch_inf(-d * d, ctx);
    PochResult c3 = qpoch_inf(-q / (d * d), ctx);
    PochResult c4 = qpoch_inf(q, ctx);

    PochResult w;
    w.sign = p1.sign * p2.sign * p3.sign * p4.sign * c1.sign * c2.sign * c3.sign * c4.sign;
    if (w.sign == 0) return {0, -std::numeric_limits<double>::infinity(), 0.0};
    double u = d * d * qn * qn;
    double log1pu = u > 1e300 ? 2.0 * (std::log(d) + n * std::log(q)) + std::log1p(1.0 / u)
                              : std::log1p(u);
    w.log_abs = p1.log_abs + p2.log_abs + p3.log_abs + p4.log_abs
                - c1.log_abs - c2.log_abs - c3.log_abs - c4.log_abs
                + 4.0 * n * std::log(d)
                + static_cast<double>(n) * (2.0 * n - 1.0) * std::log(q)
                + log1pu;
    w.tail_bound = p1.tail_bound + p2.tail_bound + p3.tail_bound + p4.tail_bound
                   + c1.tail_bound + c2.tail_bound + c3.tail_bound + c4.tail_bound;
    return w;
}

} // namespace qortho
