#include "qortho/identities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <limits>

namespace qortho {

namespace {

dd qpow(const QContext& ctx, long e) { return powi(dd(ctx.q), e); }

int kmax_for(double q) { return q >= 0.65 ? 6 : q >= 0.45 ? 3 : 2; }

struct Residual {
    double worst = 0.0;
    void add(double lhs, double rhs) {
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
};

std::string fmt(const char* f, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

IdentityCheck finish(std::string id, double residual, std::string grid, double tol) {
    return {std::move(id), residual, std::move(grid), residual <= tol, tol};
}

} // namespace

IdentityCheck check_prop1(double alpha, const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    const int kmax = kmax_for(q);
    const double xs[] = {0.3, -0.11, 0.7};
    Residual res;
    FamilyParams even_p = FamilyParams::little_q_jacobi(1.0 / q, alpha);
    FamilyParams odd_p = FamilyParams::little_q_jacobi(q, alpha);
    for (int k = 0; k <= kmax; ++k) {
        double pref = qpoch(q, q * q, k) * std::pow(alpha, k) / qpoch(alpha * q * q, q * q, k) *
                      (k % 2 == 0 ? 1.0 : -1.0) * std::pow(q, k * (k + 1));
        double pref_odd = qpoch(q * q * q, q * q, k) * std::pow(alpha, k) /
                          qpoch(alpha * q * q, q * q, k) * (k % 2 == 0 ? 1.0 : -1.0) *
                          std::pow(q, k * (k + 1));
        for (double x : xs) {
            double y = x * x / (alpha * q * q);
            res.add(disc_ultra_c(2 * k, x, alpha, ctx, Method::Series).value,
                    pref * little_q_jacobi(k, y, even_p, ctx2).value);
            res.add(disc_ultra_c(2 * k + 1, x, alpha, ctx, Method::Series).value,
                    pref_odd * x * little_q_jacobi(k, y, odd_p, ctx2).value);
        }
    }
    return finish("prop1", res.worst,
                  fmt("k=0..%d, x in {0.3,-0.11,0.7}, alpha=%g, q=%g", kmax, alpha, q), 1e-10);
}

IdentityCheck check_prop2(double alpha, const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    const int kmax = kmax_for(q);
    Residual res;
    FamilyParams even_p = FamilyParams::dual_little_d(1.0 / q, alpha);
    FamilyParams odd_p = FamilyParams::dual_little_d(q, alpha);
    for (int n = 0; n <= kmax; ++n) {
        for (int k = 0; k <= kmax; ++k) {
            res.add(dual_disc_d(n, 2 * k, alpha, ctx, Method::Series).value,
                    dual_little_d(n, k, even_p, ctx2).value);
            res.add(dual_disc_d(n, 2 * k + 1, alpha, ctx, Method::Series).value,
                    std::pow(q, n) * dual_little_d(n, k, odd_p, ctx2).value);
        }
    }
    return finish("prop2", res.worst, fmt("n,k=0..%d, alpha=%g, q=%g", kmax, alpha, q), 1e-10);
}

IdentityCheck check_singh(const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    const int kmax = q >= 0.7 ? 6 : q >= 0.45 ? 3 : 2;
    const double ab2[][2] = {{0.25, 0.5}, {0.3, 0.7}, {0.25, 0.0}};
    Residual res;
    for (auto [A, B] : ab2) {
        for (int k = 0; k <= kmax; ++k) {
            PhiSeries lhs;
            lhs.num = {dd(A), dd(B), qpow(ctx, -2 * k)};
            lhs.den_pairs = {{dd(0.0), -dd(A) * dd(B) * dd(q)}};  // the (ab sqrt(q), -ab sqrt(q)) pair
            lhs.z = dd(q);
            lhs.terms = 2 * k;
            PhiSeries rhs;
            rhs.num = {dd(A), dd(B), qpow(ctx, -4 * k)};
            rhs.den = {dd(A) * dd(B) * dd(q), dd(0.0)};
            rhs.z = dd(q) * dd(q);
            rhs.terms = 2 * k;
            res.add(phi_eval(lhs, ctx).value, phi_eval(rhs, ctx2).value);
        }
    }
    return finish("singh15", res.worst,
                  fmt("(a^2,b^2) in {(0.25,0.5),(0.3,0.7),(0.25,0)}, k=0..%d, q=%g", kmax, q), 1e-10);
}

IdentityCheck check_eq16(const QContext& ctx) {
    const double q = ctx.q;
    struct Pt {
        int n;
        double b, c, z;
    };
    const Pt pts[] = {{0, 0.3, 0.7, 0.5}, {3, 0.3, 0.7, 0.5}, {5, 0.4, 0.9, -0.3}, {4, 0.3, 0.7, 0.0}};
    Residual res;
    for (const Pt& p : pts) {
        PhiSeries lhs;
        lhs.num = {qpow(ctx, -p.n), dd(p.b)};
        lhs.den = {dd(p.c)};
        lhs.z = dd(p.z);
        lhs.terms = p.n;
        double pref = qpoch(p.c / p.b, q, p.n) / qpoch(p.c, q, p.n);
        PhiSeries rhs;
        rhs.num = {qpow(ctx, -p.n), dd(p.b), dd(p.b) * dd(p.z) * qpow(ctx, -p.n) / dd(p.c)};
        rhs.den = {dd(p.b) * qpow(ctx, 1 - p.n) / dd(p.c), dd(0.0)};
        rhs.z = dd(q);
        rhs.terms = p.n;
        res.add(phi_eval(lhs, ctx).value, pref * phi_eval(rhs, ctx).value);
    }
    return finish("eq16", res.worst, fmt("(n,b,c,z) 4-point grid, q=%g", q), 1e-10);
}

IdentityCheck check_eq19(double alpha, const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    const int kmax = kmax_for(q);
    const double xs[] = {0.3, -0.2, 0.55};
    Residual res;
    double parity_worst = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        for (double x : xs) {
            PhiSeries lhs;
            lhs.num = {qpow(ctx, -2 * k - 1), dd(alpha) * qpow(ctx, 2 * k + 2), dd(x)};
            lhs.den_pairs = {{dd(0.0), -dd(alpha) * dd(q) * dd(q)}};
            lhs.z = dd(q);
            lhs.terms = 2 * k + 1;
            PhiSeries rhs;
            rhs.num = {qpow(ctx, -2 * k), dd(alpha) * qpow(ctx, 2 * k + 3), dd(x) * dd(x)};
            rhs.den = {dd(alpha) * dd(q) * dd(q), dd(0.0)};
            rhs.z = dd(q) * dd(q);
            rhs.terms = k;
            double l = phi_eval(lhs, ctx).value;
            res.add(l, x * phi_eval(rhs, ctx2).value);
            PhiSeries lhsm = lhs;
            lhsm.num[2] = dd(-x);
            double lm = phi_eval(lhsm, ctx).value;
            parity_worst = std::max(parity_worst, std::abs(l + lm) / std::max(1.0, std::abs(l)));
        }
    }
    double worst = std::max(res.worst, parity_worst);
    return finish("eq19", worst,
                  fmt("k=0..%d, x in {0.3,-0.2,0.55}, alpha=%g, q=%g (with oddness check)", kmax, alpha, q),
                  1e-10);
}

IdentityCheck check_eq36(double a, double c_shift, const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    const int kmax = kmax_for(q);
    const dd a2 = dd(a) * dd(a);
    const dd c(c_shift);
    Residual res;
    for (int k = 0; k <= kmax; ++k) {
        for (int n = 0; n <= kmax; ++n) {
            PhiSeries lhs;
            lhs.num = {qpow(ctx, -2 * k) / c, -c * a2 * qpow(ctx, 2 * k + 1), qpow(ctx, -n)};
            lhs.den_pairs = {{dd(0.0), a2 * dd(q) * dd(q)}};  // (i a q, -i a q)
            lhs.z = -qpow(ctx, n + 1);
            lhs.terms = n;
            PhiSeries rhs;
            rhs.num = {qpow(ctx, -2 * k) / c, -c * a2 * qpow(ctx, 2 * k + 1), qpow(ctx, -2 * n)};
            rhs.den = {-a2 * dd(q) * dd(q)};
            rhs.z = qpow(ctx, 2 * n + 1);
            rhs.terms = n;
            res.add(phi_eval(lhs, ctx).value, phi_eval(rhs, ctx2).value);
        }
    }
    return finish("eq36", res.worst,
                  fmt("k,n=0..%d, a=%g, c_shift=%g, q=%g", kmax, a, c_shift, q), 1e-10);
}

IdentityCheck check_lattice39(double a, double d, const QContext& ctx) {
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    if (!(d >= q && d < 1.0)) throw DomainError("lattice39: require q <= d < 1");
    if (!(a > 0.0)) throw DomainError("lattice39: require a > 0");
    const double t1 = std::sqrt(q * q * q / a);
    const double t2 = std::sqrt(q / a);
    const double sqaq = std::sqrt(a * q);
    Residual res;
    double mu_worst = 0.0;
    for (int k = 0; k <= 6; ++k) {
        double lat = std::pow(q, -2.0 * k) / d - d * std::pow(q, 2.0 * k);
        double muk = sqaq * lat;
        // the lattice coordinate x_k with q^{-x_k} = sqrt(aq) q^{-2k}/d
        double xk = 2.0 * k + std::log(d / sqaq) / std::log(q);
        mu_worst = std::max(mu_worst, std::abs(mu(xk, -a, ctx).mu - muk) / std::abs(muk));
        for (int n = 0; n <= 6; ++n) {
            double lhs = dual_disc_d_tilde_at_mu(n, muk, a, ctx).value;
            double rhs = u_poly(n, lat / 2.0, t1, t2, ctx2).value;
            res.add(lhs, rhs);
        }
    }
    double worst = std::max(res.worst, mu_worst);
    return finish("lattice39", worst, fmt("k,n=0..6, a=%g, d=%g, q=%g (with mu identity)", a, d, q),
                  1e-9);
}

IdentityCheck check_favard(const FamilyParams& p, int n_max, const QContext& ctx) {
    double min_prod = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= n_max; ++n) {
        RecurrenceCoeffs rc = recurrence_coeffs(p, n, ctx);
        RecurrenceCoeffs rc1 = recurrence_coeffs(p, n + 1, ctx);
        min_prod = std::min(min_prod, rc.A_n * rc1.C_n);
    }
    IdentityCheck c;
    c.id = "favard:" + family_name(p.family);
    c.residual = std::max(0.0, -min_prod);
    c.grid = fmt("n=0..%d, min A_n C_{n+1} = %.3g", n_max, min_prod);
    c.tol = 0.0;
    c.pass = min_prod > 0.0;
    return c;
}

IdentityCheck check_limit_q1(double alpha_exp, int n, double x) {
    const double qs[] = {0.9, 0.99, 0.999};
    double e[3];
    for (int i = 0; i < 3; ++i) {
        QContext c(qs[i]);
        double aa = std::pow(qs[i], alpha_exp);
        FamilyParams p = FamilyParams::big_q_jacobi(aa, aa, -aa);
        double P = big_q_jacobi(n, x, p, c, Method::Series).value;
        e[i] = std::abs(P - jacobi_ratio(n, x, alpha_exp, alpha_exp));
    }
    bool tiny = e[0] < 1e-12 && e[1] < 1e-12 && e[2] < 1e-12;
    bool decreasing = (e[2] < e[1] && e[1] < e[0]) || tiny;
    IdentityCheck c;
    c.id = "limit-q1";
    c.residual = e[2];
    c.grid = fmt("n=%d, alpha=%g, x=%g: e = {%.3g, %.3g, %.3g} at q = {0.9, 0.99, 0.999}", n,
                 alpha_exp, x, e[0], e[1], e[2]);
    c.tol = 0.01;
    c.pass = decreasing && e[2] < 0.01;
    return c;
}

IdentityCheck check_parity(double alpha, bool tilde, const QContext& ctx) {
    const double xs[] = {0.37, 1.21, 0.05};
    double worst = 0.0;
    for (double x : xs) {
        auto vp = tilde ? ct_all(10, dd(x), alpha, ctx) : c_all(10, dd(x), alpha, ctx);
        auto vm = tilde ? ct_all(10, dd(-x), alpha, ctx) : c_all(10, dd(-x), alpha, ctx);
        for (int n = 0; n <= 10; ++n) {
            double ref = static_cast<double>(vp[n]);
            double mir = static_cast<double>(vm[n]) * (n % 2 == 0 ? 1.0 : -1.0);
            worst = std::max(worst, std::abs(ref - mir) / std::max(1.0, std::abs(ref)));
        }
    }
    IdentityCheck c = finish(tilde ? "parity:ctilde" : "parity:c", worst,
                             fmt("n=0..10, x in {0.37,1.21,0.05}, alpha=%g, q=%g", alpha, ctx.q), 1e-12);
    return c;
}

std::vector<std::string> identity_catalog() {
    return {"prop1", "prop2", "singh15", "eq16", "eq19", "eq36", "lattice39",
            "favard:c", "favard:ctilde", "favard:qmp", "limit-q1", "parity"};
}

IdentityCheck run_identity(std::string_view id, const IdentityParams& p, const QContext& ctx) {
    if (id == "prop1") return check_prop1(p.alpha, ctx);
    if (id == "prop2") return check_prop2(p.alpha, ctx);
    if (id == "singh15") return check_singh(ctx);
    if (id == "eq16") return check_eq16(ctx);
    if (id == "eq19") return check_eq19(p.alpha, ctx);
    if (id == "eq36") return check_eq36(p.a, p.c_shift, ctx);
    if (id == "lattice39") {
        double d = p.d > 0.0 ? p.d : std::max(ctx.q, 0.7);
        return check_lattice39(p.a, d, ctx);
    }
    if (id == "favard:c") return check_favard(FamilyParams::disc_ultra_c(p.alpha), p.nmax, ctx);
    if (id == "favard:ctilde")
        return check_favard(FamilyParams::disc_ultra_c_tilde(p.alpha), p.nmax, ctx);
    if (id == "favard:qmp") return check_favard(FamilyParams::q_mp(p.a), p.nmax, ctx);
    if (id == "limit-q1") return check_limit_q1(p.alpha_exp, p.n, p.x);
    if (id == "parity") {
        IdentityCheck c1 = check_parity(p.alpha, false, ctx);
        IdentityCheck c2 = check_parity(p.alpha, true, ctx);
        IdentityCheck c;
        c.id = "parity";
        c.residual = std::max(c1.residual, c2.residual);
        c.grid = c1.grid + " (C and C~)";
        c.tol = 1e-12;
        c.pass = c1.pass && c2.pass;
        return c;
    }
    throw DomainError("run_identity: unknown identity id '" + std::string(id) + "'");
}

} // namespace qortho
