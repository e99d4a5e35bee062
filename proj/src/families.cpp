#include "qortho/families.hpp"

#include <cmath>

namespace qortho {

namespace {

dd qpow(const QContext& ctx, long e) { return powi(dd(ctx.q), e); }

double series_est(const PhiResult& r) { return r.est_error; }

// recurrence condition heuristic: worst step-cancellation ratio
struct CondTrack {
    double worst = 1.0;
    void step(double lhs_mag, double result_mag) {
        if (result_mag > 0.0) worst = std::max(worst, lhs_mag / result_mag);
    }
    double est(int n) const { return worst * 2.5e-32 * (n + 2); }
};

} // namespace

FamilyParams FamilyParams::big_q_jacobi(double a, double b, double c) {
    FamilyParams p;
    p.family = Family::BigQJacobi;
    p.a = a; p.b = b; p.c = c;
    return p;
}
FamilyParams FamilyParams::little_q_jacobi(double a, double b) {
    FamilyParams p;
    p.family = Family::LittleQJacobi;
    p.a = a; p.b = b;
    return p;
}
FamilyParams FamilyParams::disc_ultra_c(double alpha) {
    FamilyParams p;
    p.family = Family::DiscUltraC;
    p.alpha = alpha;
    return p;
}
FamilyParams FamilyParams::disc_ultra_c_tilde(double alpha) {
    FamilyParams p;
    p.family = Family::DiscUltraCTilde;
    p.alpha = alpha;
    return p;
}
FamilyParams FamilyParams::dual_big_d(double a, double b, double c) {
    FamilyParams p;
    p.family = Family::DualBigD;
    p.a = a; p.b = b; p.c = c;
    return p;
}
FamilyParams FamilyParams::dual_little_d(double a, double b) {
    FamilyParams p;
    p.family = Family::DualLittleD;
    p.a = a; p.b = b;
    return p;
}
FamilyParams FamilyParams::dual_disc_d(double alpha) {
    FamilyParams p;
    p.family = Family::DualDiscD;
    p.alpha = alpha;
    return p;
}
FamilyParams FamilyParams::dual_disc_d_tilde(double alpha) {
    FamilyParams p;
    p.family = Family::DualDiscDTilde;
    p.alpha = alpha;
    return p;
}
FamilyParams FamilyParams::u_family(double t1, double t2) {
    FamilyParams p;
    p.family = Family::UFamily;
    p.t1 = t1; p.t2 = t2;
    return p;
}
FamilyParams FamilyParams::q_mp(double a) {
    FamilyParams p;
    p.family = Family::QMeixnerPollaczek;
    p.a = a;
    return p;
}

std::string family_name(Family f) {
    switch (f) {
        case Family::BigQJacobi: return "big-qjacobi";
        case Family::LittleQJacobi: return "little-qjacobi";
        case Family::DiscUltraC: return "disc-ultra-c";
        case Family::DiscUltraCTilde: return "disc-ultra-ctilde";
        case Family::DualBigD: return "dual-big-d";
        case Family::DualLittleD: return "dual-little-d";
        case Family::DualDiscD: return "dual-disc-d";
        case Family::DualDiscDTilde: return "dual-disc-dtilde";
        case Family::UFamily: return "u-family";
        case Family::QMeixnerPollaczek: return "q-meixner-pollaczek";
    }
    return "?";
}

void FamilyParams::validate(const QContext& ctx, bool for_orthogonality) const {
    const double qinv = 1.0 / ctx.q;
    const double qinv2 = qinv * qinv;
    switch (family) {
        case Family::BigQJacobi:
        case Family::DualBigD:
            if (for_orthogonality) {
                if (!(a > 0.0 && a < qinv)) throw DomainError(family_name(family) + ": require 0 < a < 1/q");
                if (!(b > 0.0 && b < qinv)) throw DomainError(family_name(family) + ": require 0 < b < 1/q");
                if (!(c < 0.0)) throw DomainError(family_name(family) + ": require c < 0");
            }
            break;
        case Family::LittleQJacobi:
        case Family::DualLittleD:
            if (for_orthogonality) {
                if (!(a > 0.0 && a < qinv)) throw DomainError(family_name(family) + ": require 0 < a < 1/q");
                if (!(b < qinv)) throw DomainError(family_name(family) + ": require b < 1/q");
            }
            break;
        case Family::DiscUltraC:
        case Family::DualDiscD:
            if (!(alpha > 0.0)) throw DomainError(family_name(family) + ": require alpha > 0");
            if (for_orthogonality && !(alpha < qinv2))
                throw DomainError(family_name(family) + ": require alpha < 1/q^2");
            break;
        case Family::DiscUltraCTilde:
        case Family::DualDiscDTilde:
            if (!(alpha > 0.0)) throw DomainError(family_name(family) + ": require alpha > 0");
            break;
        case Family::UFamily:
            if (!(t1 * t2 > 0.0)) throw DomainError("u-family: require t1*t2 > 0");
            break;
        case Family::QMeixnerPollaczek:
            if (a == 0.0) throw DomainError("q-meixner-pollaczek: require a != 0");
            if (for_orthogonality && !(std::abs(a) < 1.0))
                throw DomainError("q-meixner-pollaczek: continuous orthogonality requires |a| < 1");
            break;
    }
}

// ---------------------------------------------------------------------------
// recurrence kernels (all-degree, double-double)

std::vector<dd> c_all(int nmax, dd x, double alpha, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    if (nmax == 0) return v;
    v[1] = x;
    const dd al(alpha);
    for (int n = 1; n < nmax; ++n) {
        dd den = dd(1.0) - al * qpow(ctx, 2 * n + 1);
        dd A = (dd(1.0) - al * qpow(ctx, n + 1)) / den;
        dd C = al * qpow(ctx, n + 1) * (dd(1.0) - qpow(ctx, n)) / den;
        v[n + 1] = (x * v[n] - C * v[n - 1]) / A;
    }
    return v;
}

std::vector<dd> ct_all(int nmax, dd x, double alpha, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    if (nmax == 0) return v;
    v[1] = x;
    const dd al(alpha);
    for (int n = 1; n < nmax; ++n) {
        dd den = dd(1.0) + al * qpow(ctx, 2 * n + 1);
        dd A = (dd(1.0) + al * qpow(ctx, n + 1)) / den;
        dd C = al * qpow(ctx, n + 1) * (dd(1.0) - qpow(ctx, n)) / den;
        v[n + 1] = (x * v[n] - C * v[n - 1]) / A;
    }
    return v;
}

std::vector<dd> d_all_at_mu(int nmax, dd muv, double alpha, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    if (nmax == 0) return v;
    const dd al(alpha);
    const dd q(ctx.q);
    v[1] = (dd(1.0) + q - q * muv) / (dd(1.0) - al * q * q);
    for (int n = 1; n < nmax; ++n) {
        dd qm = qpow(ctx, -2 * n - 1);
        dd num = qm * (dd(1.0) + q) * v[n] - qm * q * (dd(1.0) - qpow(ctx, 2 * n)) * v[n - 1] - muv * v[n];
        v[n + 1] = num / (qm * (dd(1.0) - al * qpow(ctx, 2 * n + 2)));
    }
    return v;
}

std::vector<dd> dt_all_at_mu(int nmax, dd muv, double alpha, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    if (nmax == 0) return v;
    const dd al(alpha);
    const dd q(ctx.q);
    v[1] = (dd(1.0) + q - q * muv) / (dd(1.0) + al * q * q);
    for (int n = 1; n < nmax; ++n) {
        dd qm = qpow(ctx, -2 * n - 1);
        dd num = qm * (dd(1.0) + q) * v[n] - qm * q * (dd(1.0) - qpow(ctx, 2 * n)) * v[n - 1] - muv * v[n];
        v[n + 1] = num / (qm * (dd(1.0) + al * qpow(ctx, 2 * n + 2)));
    }
    return v;
}

std::vector<dd> bigp_all(int nmax, dd x, double a, double b, double c, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    const dd ad(a), bd(b), cd(c);
    for (int n = 0; n < nmax; ++n) {
        dd ab2n1 = ad * bd * qpow(ctx, 2 * n + 1);
        dd A = (dd(1.0) - ad * qpow(ctx, n + 1)) * (dd(1.0) - ad * bd * qpow(ctx, n + 1)) *
               (dd(1.0) - cd * qpow(ctx, n + 1)) /
               ((dd(1.0) - ab2n1) * (dd(1.0) - ad * bd * qpow(ctx, 2 * n + 2)));
        dd C = -ad * cd * qpow(ctx, n + 1) * (dd(1.0) - qpow(ctx, n)) *
               (dd(1.0) - ad * bd * qpow(ctx, n) / cd) * (dd(1.0) - bd * qpow(ctx, n)) /
               ((dd(1.0) - ad * bd * qpow(ctx, 2 * n)) * (dd(1.0) - ab2n1));
        dd prev = n >= 1 ? v[n - 1] : dd(0.0);
        v[n + 1] = ((x - dd(1.0) + A + C) * v[n] - C * prev) / A;
    }
    return v;
}

std::vector<dd> littlep_all(int nmax, dd x, double a, double b, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    const dd ad(a), bd(b);
    for (int n = 0; n < nmax; ++n) {
        dd A = qpow(ctx, n) * (dd(1.0) - ad * qpow(ctx, n + 1)) * (dd(1.0) - ad * bd * qpow(ctx, n + 1)) /
               ((dd(1.0) - ad * bd * qpow(ctx, 2 * n + 1)) * (dd(1.0) - ad * bd * qpow(ctx, 2 * n + 2)));
        dd C = ad * qpow(ctx, n) * (dd(1.0) - qpow(ctx, n)) * (dd(1.0) - bd * qpow(ctx, n)) /
               ((dd(1.0) - ad * bd * qpow(ctx, 2 * n)) * (dd(1.0) - ad * bd * qpow(ctx, 2 * n + 1)));
        dd prev = n >= 1 ? v[n - 1] : dd(0.0);
        v[n + 1] = ((A + C - x) * v[n] - C * prev) / A;
    }
    return v;
}

std::vector<dd> qmp_all(int nmax, double sin_theta, double a, const QContext& ctx) {
    std::vector<dd> v(static_cast<size_t>(nmax) + 1);
    v[0] = dd(1.0);
    if (nmax == 0) return v;
    const dd x2 = dd(2.0) * dd(sin_theta);
    const dd a2(a * a);
    v[1] = x2 / (dd(1.0) - dd(ctx.q));
    for (int n = 1; n < nmax; ++n) {
        v[n + 1] = (x2 * v[n] - (dd(1.0) + a2 * qpow(ctx, n - 1)) * v[n - 1]) /
                   (dd(1.0) - qpow(ctx, n + 1));
    }
    return v;
}

// ---------------------------------------------------------------------------
// series kernels

namespace {

PhiResult bigp_series(int n, dd x, double a, double b, double c, const QContext& ctx) {
    PhiSeries s;
    s.num = {qpow(ctx, -n), dd(a) * dd(b) * qpow(ctx, n + 1), x};
    s.den = {dd(a) * dd(ctx.q), dd(c) * dd(ctx.q)};
    s.z = dd(ctx.q);
    s.terms = n;
    return phi_eval(s, ctx);
}

PhiResult littlep_series(int n, dd x, double a, double b, const QContext& ctx) {
    PhiSeries s;
    s.num = {qpow(ctx, -n), dd(a) * dd(b) * qpow(ctx, n + 1)};
    s.den = {dd(a) * dd(ctx.q)};
    s.z = dd(ctx.q) * x;
    s.terms = n;
    return phi_eval(s, ctx);
}

PhiResult c_series(int n, dd x, double alpha, const QContext& ctx) {
    const dd al(alpha);
    PhiSeries s;
    s.num = {qpow(ctx, -n), al * qpow(ctx, n + 1), x};
    s.den_pairs = {{dd(0.0), -al * qpow(ctx, 2)}};  // the (sqrt(a)q, -sqrt(a)q) pair
    s.z = dd(ctx.q);
    s.terms = n;
    return phi_eval(s, ctx);
}

// even/odd real forms: prefactor * little q-Jacobi in x^2/(alpha q^2), base q^2.
// sign +1 selects the C family forms, -1 the C~ ones.
PhiResult ct_series_realform(int n, dd x, double alpha, int sign, const QContext& ctx) {
    const QContext ctx2 = ctx.squared();
    const dd al(alpha);
    const dd sal = dd(static_cast<double>(sign)) * al;
    const int k = n / 2;
    PhiSeries s;
    if (n % 2 == 0) {
        s.num = {powi(dd(ctx2.q), -k), sal * qpow(ctx, 2 * k + 1)};
        s.den = {dd(ctx.q)};
    } else {
        s.num = {powi(dd(ctx2.q), -k), sal * qpow(ctx, 2 * k + 3)};
        s.den = {qpow(ctx, 3)};
    }
    s.z = x * x / al;
    s.terms = k;
    PhiResult r = phi_eval(s, ctx2);
    dd pref = qpoch_dd(n % 2 == 0 ? dd(ctx.q) : qpow(ctx, 3), dd(ctx2.q), k) * powi(al, k) /
              qpoch_dd(sal * qpow(ctx, 2), dd(ctx2.q), k) * qpow(ctx, static_cast<long>(k) * (k + 1));
    if (k % 2 != 0) pref = -pref;
    if (n % 2 != 0) pref *= x;
    r.value = static_cast<double>(dd(r.value) * pref);
    r.sum_abs *= std::abs(static_cast<double>(pref));
    return r;
}

PhiResult d_series(int n, dd qminusx, dd qplusx, double alpha, int terms, const QContext& ctx) {
    const dd al(alpha);
    PhiSeries s;
    s.num = {qminusx, al * dd(ctx.q) * qplusx, qpow(ctx, -n)};
    s.den_pairs = {{dd(0.0), -al * qpow(ctx, 2)}};
    s.z = -qpow(ctx, n + 1);
    s.terms = terms;
    return phi_eval(s, ctx);
}

PhiResult dt_series(int n, dd qminusx, dd qplusx, double alpha, int terms, const QContext& ctx) {
    const dd al(alpha);
    PhiSeries s;
    s.num = {qminusx, -al * dd(ctx.q) * qplusx, qpow(ctx, -n)};
    s.den_pairs = {{dd(0.0), al * qpow(ctx, 2)}};  // (i sqrt(a) q, -i sqrt(a) q)
    s.z = -qpow(ctx, n + 1);
    s.terms = terms;
    return phi_eval(s, ctx);
}

PhiResult dual_little_series(int n, int m, double a, double b, const QContext& ctx) {
    const dd ad(a), bd(b);
    PhiSeries s;
    s.num = {qpow(ctx, -m), ad * bd * qpow(ctx, m + 1), qpow(ctx, -n)};
    s.den = {bd * dd(ctx.q)};
    s.z = qpow(ctx, n) / ad;
    s.terms = std::min(m, n);
    return phi_eval(s, ctx);
}

PhiResult u_series(int n, double sval, double t1, double t2, const QContext& ctx) {
    // e^xi from sinh xi, stable on both signs
    double ex = sval >= 0.0 ? sval + std::sqrt(sval * sval + 1.0)
                            : 1.0 / (std::sqrt(sval * sval + 1.0) - sval);
    const dd q(ctx.q);
    PhiSeries s;
    s.num = {q * dd(ex) / dd(t1), -q / (dd(ex) * dd(t1)), qpow(ctx, -n)};
    s.den = {-q * q / (dd(t1) * dd(t2))};
    s.z = qpow(ctx, n) * dd(t1) / dd(t2);
    s.terms = n;
    return phi_eval(s, ctx);
}

PhiResult qmp_series(int n, double theta, double a, const QContext& ctx) {
    const dd ad(a);
    PhiSeries s;
    s.num = {qpow(ctx, -n)};
    s.num_pairs = {{dd(2.0 * a) * dd(std::sin(theta)), ad * ad}};
    s.den = {-ad * ad, dd(0.0)};
    s.z = dd(ctx.q);
    s.terms = n;
    PhiResult r = phi_eval(s, ctx);
    dd pref = qpoch_dd(-ad * ad, dd(ctx.q), n) / (powi(ad, n) * qpoch_dd(dd(ctx.q), dd(ctx.q), n));
    r.value = static_cast<double>(dd(r.value) * pref);
    r.sum_abs *= std::abs(static_cast<double>(pref));
    return r;
}

} // namespace

// ---------------------------------------------------------------------------
// public evaluators

EvalResult big_q_jacobi(int n, double x, const FamilyParams& p, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("big_q_jacobi: n >= 0");
    if (method == Method::Series) {
        PhiResult r = bigp_series(n, dd(x), p.a, p.b, p.c, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    auto v = bigp_all(n, dd(x), p.a, p.b, p.c, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult little_q_jacobi(int n, double x, const FamilyParams& p, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("little_q_jacobi: n >= 0");
    if (method == Method::Series) {
        PhiResult r = littlep_series(n, dd(x), p.a, p.b, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    auto v = littlep_all(n, dd(x), p.a, p.b, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult disc_ultra_c(int n, double x, double alpha, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("disc_ultra_c: n >= 0");
    if (!(alpha > 0.0)) throw DomainError("disc_ultra_c: require alpha > 0");
    if (method == Method::Series) {
        PhiResult r = c_series(n, dd(x), alpha, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    auto v = c_all(n, dd(x), alpha, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult disc_ultra_c_tilde(int n, double x, double alpha, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("disc_ultra_c_tilde: n >= 0");
    if (!(alpha > 0.0)) throw DomainError("disc_ultra_c_tilde: require alpha > 0");
    if (method == Method::Series) {
        PhiResult r = ct_series_realform(n, dd(x), alpha, -1, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    auto v = ct_all(n, dd(x), alpha, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult dual_big_d(int n, int m, const FamilyParams& p, const QContext& ctx) {
    if (n < 0 || m < 0) throw DomainError("dual_big_d: n, m >= 0");
    const dd ad(p.a), bd(p.b), cd(p.c);
    PhiSeries s;
    s.num = {qpow(ctx, -m), ad * bd * qpow(ctx, m + 1), qpow(ctx, -n)};
    s.den = {ad * dd(ctx.q), ad * bd * dd(ctx.q) / cd};
    s.z = ad * qpow(ctx, n + 1) / cd;
    s.terms = std::min(m, n);
    PhiResult r = phi_eval(s, ctx);
    return {r.value, Method::Series, series_est(r)};
}

EvalResult dual_little_d(int n, int m, const FamilyParams& p, const QContext& ctx) {
    if (n < 0 || m < 0) throw DomainError("dual_little_d: n, m >= 0");
    PhiResult r = dual_little_series(n, m, p.a, p.b, ctx);
    return {r.value, Method::Series, series_est(r)};
}

EvalResult dual_disc_d(int n, double x, double alpha, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("dual_disc_d: n >= 0");
    if (!(alpha > 0.0)) throw DomainError("dual_disc_d: require alpha > 0");
    if (method == Method::Series) {
        bool integral = x >= 0.0 && x == std::floor(x) && x < 1e9;
        dd qmx, qpx;
        if (integral) {
            qmx = qpow(ctx, -static_cast<long>(x));
            qpx = qpow(ctx, static_cast<long>(x));
        } else {
            qmx = dd(std::pow(ctx.q, -x));
            qpx = dd(std::pow(ctx.q, x));
        }
        int terms = integral ? std::min(n, static_cast<int>(x)) : n;
        PhiResult r = d_series(n, qmx, qpx, alpha, terms, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    return dual_disc_d_at_mu(n, mu(x, alpha, ctx).mu, alpha, ctx);
}

EvalResult dual_disc_d_tilde(int n, double x, double alpha, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("dual_disc_d_tilde: n >= 0");
    if (!(alpha > 0.0)) throw DomainError("dual_disc_d_tilde: require alpha > 0");
    if (method == Method::Series) {
        bool integral = x >= 0.0 && x == std::floor(x) && x < 1e9;
        dd qmx, qpx;
        if (integral) {
            qmx = qpow(ctx, -static_cast<long>(x));
            qpx = qpow(ctx, static_cast<long>(x));
        } else {
            qmx = dd(std::pow(ctx.q, -x));
            qpx = dd(std::pow(ctx.q, x));
        }
        int terms = integral ? std::min(n, static_cast<int>(x)) : n;
        PhiResult r = dt_series(n, qmx, qpx, alpha, terms, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    return dual_disc_d_tilde_at_mu(n, mu(x, -alpha, ctx).mu, alpha, ctx);
}

EvalResult dual_disc_d_at_mu(int n, double mu_value, double alpha, const QContext& ctx) {
    auto v = d_all_at_mu(n, dd(mu_value), alpha, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult dual_disc_d_tilde_at_mu(int n, double mu_value, double alpha, const QContext& ctx) {
    auto v = dt_all_at_mu(n, dd(mu_value), alpha, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

EvalResult u_poly(int n, double s, double t1, double t2, const QContext& ctx) {
    if (n < 0) throw DomainError("u_poly: n >= 0");
    if (t1 == 0.0) throw DomainError("u_poly: require t1 != 0");
    PhiResult r = u_series(n, s, t1, t2, ctx);
    return {r.value, Method::Series, series_est(r)};
}

EvalResult q_mp_tilde(int n, double theta, double a, const QContext& ctx, Method method) {
    if (n < 0) throw DomainError("q_mp_tilde: n >= 0");
    if (a == 0.0) throw DomainError("q_mp_tilde: require a != 0");
    if (method == Method::Series) {
        PhiResult r = qmp_series(n, theta, a, ctx);
        return {r.value, Method::Series, series_est(r)};
    }
    auto v = qmp_all(n, std::sin(theta), a, ctx);
    return {static_cast<double>(v[n]), Method::Recurrence, 0.0};
}

double jacobi_ratio(int n, double x, double alpha, double beta) {
    if (n < 0) throw DomainError("jacobi_ratio: n >= 0");
    if (!(alpha > -1.0 && beta > -1.0)) throw DomainError("jacobi_ratio: require alpha, beta > -1");
    double p0 = 1.0;
    if (n == 0) return 1.0;
    double p1 = (alpha + 1.0) + (alpha + beta + 2.0) * (x - 1.0) / 2.0;
    for (int m = 2; m <= n; ++m) {
        double ab = alpha + beta;
        double c1 = 2.0 * m * (m + ab) * (2.0 * m + ab - 2.0);
        double c2 = (2.0 * m + ab - 1.0) * ((2.0 * m + ab) * (2.0 * m + ab - 2.0) * x + alpha * alpha - beta * beta);
        double c3 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * (2.0 * m + ab);
        double p2 = (c2 * p1 - c3 * p0) / c1;
        p0 = p1;
        p1 = p2;
    }
    double at1 = 1.0;
    for (int j = 1; j <= n; ++j) at1 *= (alpha + j) / j;
    return p1 / at1;
}

RecurrenceCoeffs recurrence_coeffs(const FamilyParams& p, int n, const QContext& ctx) {
    const double q = ctx.q;
    switch (p.family) {
        case Family::DiscUltraC: {
            // C_n = 1 - A_n = alpha q^{n+1}(1-q^n)/(1-alpha q^{2n+1}), cancellation-free
            double A = (1.0 - p.alpha * std::pow(q, n + 1)) / (1.0 - p.alpha * std::pow(q, 2 * n + 1));
            double C = p.alpha * std::pow(q, n + 1) * (1.0 - std::pow(q, n)) /
                       (1.0 - p.alpha * std::pow(q, 2 * n + 1));
            return {A, C};
        }
        case Family::DiscUltraCTilde: {
            double A = (1.0 + p.alpha * std::pow(q, n + 1)) / (1.0 + p.alpha * std::pow(q, 2 * n + 1));
            double C = p.alpha * std::pow(q, n + 1) * (1.0 - std::pow(q, n)) /
                       (1.0 + p.alpha * std::pow(q, 2 * n + 1));
            return {A, C};
        }
        case Family::QMeixnerPollaczek:
            return {1.0 - std::pow(q, n + 1), 1.0 + p.a * p.a * std::pow(q, n - 1)};
        default:
            throw DomainError("recurrence_coeffs: only C, C~, and Q-MP expose Favard coefficients");
    }
}

} // namespace qortho
