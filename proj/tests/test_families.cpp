#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qortho/families.hpp"

using namespace qortho;

namespace {

// scaled probe set for the n <= 12 cross-method grid: outside the support
// accumulation region, where the terminating series is well conditioned
std::vector<double> scaled_probes(double alpha, double q, int nmax) {
    double X = std::sqrt(alpha) * std::pow(q, -0.5 * (nmax + 1));
    return {0.9 * X, -1.4 * X, 2.3 * X};
}

// inner-probe degree cap: the terminating series condition q^{-n(n-1)/2}
// must stay within double-double reach on O(1) arguments
int inner_degree_cap(double q) {
    return 87.5 / std::log(1.0 / q) >= 132.0 ? 12 : 8;
}

} // namespace

TEST_CASE("trivial degree-0 and degree-1 values") {
    QContext ctx(0.5);
    CHECK(disc_ultra_c(0, 0.3, 0.5, ctx).value == 1.0);
    CHECK(disc_ultra_c(1, 0.25, 0.5, ctx, Method::Recurrence).value == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(disc_ultra_c(1, 0.25, 0.5, ctx, Method::Series).value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(disc_ultra_c_tilde(0, 0.3, 2.0, ctx).value == 1.0);
    CHECK(disc_ultra_c_tilde(1, 0.4, 2.0, ctx).value == doctest::Approx(0.4).epsilon(1e-14));
    CHECK(big_q_jacobi(0, 0.3, FamilyParams::big_q_jacobi(0.5, 0.7, -0.4), ctx).value == 1.0);
    CHECK(little_q_jacobi(0, 0.3, FamilyParams::little_q_jacobi(0.5, 0.5), ctx).value == 1.0);
    // p_n(0) = 1: the argument z = qx = 0 kills all m >= 1 terms
    CHECK(little_q_jacobi(5, 0.0, FamilyParams::little_q_jacobi(0.5, 0.5), ctx).value == 1.0);
    CHECK(dual_big_d(0, 3, FamilyParams::dual_big_d(0.5, 0.7, -0.4), ctx).value == 1.0);
    CHECK(dual_little_d(0, 3, FamilyParams::dual_little_d(0.5, 0.5), ctx).value == 1.0);
    CHECK(dual_disc_d(0, 2.0, 0.5, ctx).value == 1.0);
    CHECK(dual_disc_d_tilde(0, 2.0, 0.5, ctx).value == 1.0);
    CHECK(u_poly(0, 1.3, 0.4, 0.6, ctx).value == 1.0);
    CHECK(q_mp_tilde(0, 0.7, 0.5, ctx).value == 1.0);
    CHECK(jacobi_ratio(0, 0.3, 1.0, 1.0) == 1.0);
    CHECK(jacobi_ratio(1, 0.37, 1.5, 1.5) == doctest::Approx(0.37).epsilon(1e-15));
}

TEST_CASE("frozen values") {
    QContext ctx(0.5);
    CHECK(disc_ultra_c(2, 0.3, 0.5, ctx, Method::Series).value ==
          doctest::Approx(0.025).epsilon(1e-13));
    CHECK(disc_ultra_c(3, 0.3, 0.5, ctx, Method::Series).value ==
          doctest::Approx(-0.007125).epsilon(1e-12));
    CHECK(disc_ultra_c_tilde(5, 0.4, 2.0, ctx, Method::Series).value ==
          doctest::Approx(-0.0045768518518518519).epsilon(1e-12));
    CHECK(dual_disc_d(4, 6.0, 0.5, ctx, Method::Series).value ==
          doctest::Approx(-216.60030075555711281).epsilon(1e-13));
    CHECK(dual_disc_d_tilde(4, 6.0, 0.5, ctx, Method::Series).value ==
          doctest::Approx(-155.57060187853415975).epsilon(1e-13));
    CHECK(dual_little_d(3, 5, FamilyParams::dual_little_d(0.5, 0.5), ctx).value ==
          doctest::Approx(-37248.691009521484375).epsilon(1e-13));
    CHECK(big_q_jacobi(3, 0.3, FamilyParams::big_q_jacobi(0.5, 0.7, -0.4), ctx).value ==
          doctest::Approx(0.0095870694482022607).epsilon(1e-12));
    QContext c25(0.25);
    CHECK(little_q_jacobi(2, 0.3, FamilyParams::little_q_jacobi(0.5, 0.5), c25).value ==
          doctest::Approx(-0.2849609375).epsilon(1e-13));
    QContext c6(0.6);
    QContext c36 = c6.squared();
    CHECK(u_poly(3, 1.7, std::sqrt(std::pow(0.6, 3)), std::sqrt(0.6), c36).value ==
          doctest::Approx(-0.44268662792263090229).epsilon(1e-12));
    CHECK(q_mp_tilde(4, M_PI / 3.0, 0.7, ctx).value ==
          doctest::Approx(5.6853688888888888889).epsilon(1e-13));
}

TEST_CASE("C_3 recurrence matches the quadratic-transform series") {
    QContext ctx(0.5);
    QContext ctx2 = ctx.squared();
    // C_3 = x * 3phi2(q^{-2}, alpha q^5, x^2; alpha q^2, 0; q^2, q^2)
    double x = 0.3, alpha = 0.5;
    const double num[] = {4.0, alpha * std::pow(0.5, 5), x * x};
    const double den[] = {alpha * 0.25, 0.0};
    double rhs = x * phi_terminating(num, den, ctx2, 0.25, 1);
    CHECK(disc_ultra_c(3, x, alpha, ctx, Method::Recurrence).value ==
          doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("series and recurrence agree") {
    // dual-path families, n <= 12, across the default grid (criterion grid)
    const double grids[][2] = {{0.4, 0.5}, {0.6, 0.5}, {0.6, 2.5}, {0.8, 1.2}};
    for (auto& g : grids) {
        QContext ctx(g[0]);
        const double alpha = g[1];
        CAPTURE(g[0]);
        CAPTURE(g[1]);
        // O(1) probes up to the conditioning cap
        for (double x : {0.3, -0.7, 1.1}) {
            for (int n = 0; n <= std::min(6, inner_degree_cap(ctx.q)); ++n) {
                double s = disc_ultra_c(n, x, alpha, ctx, Method::Series).value;
                double r = disc_ultra_c(n, x, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(s - r) <= 1e-10 * std::max(1.0, std::abs(r)));
                double st = disc_ultra_c_tilde(n, x, alpha, ctx, Method::Series).value;
                double rt = disc_ultra_c_tilde(n, x, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(st - rt) <= 1e-10 * std::max(1.0, std::abs(rt)));
            }
        }
        // n <= 12 on the scaled probes
        for (double x : scaled_probes(alpha, ctx.q, 12)) {
            for (int n : {8, 10, 12}) {
                double s = disc_ultra_c(n, x, alpha, ctx, Method::Series).value;
                double r = disc_ultra_c(n, x, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(s - r) <= 1e-10 * std::abs(r));
                double st = disc_ultra_c_tilde(n, x, alpha, ctx, Method::Series).value;
                double rt = disc_ultra_c_tilde(n, x, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(st - rt) <= 1e-10 * std::abs(rt));
            }
        }
        // dual families on their lattices
        for (int n = 0; n <= 12; ++n) {
            for (int m : {0, 1, 3, 7, 12, 20}) {
                double s = dual_disc_d(n, m, alpha, ctx, Method::Series).value;
                double r = dual_disc_d(n, m, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(s - r) <= 1e-10 * std::max(1.0, std::abs(r)));
                double st = dual_disc_d_tilde(n, m, alpha, ctx, Method::Series).value;
                double rt = dual_disc_d_tilde(n, m, alpha, ctx, Method::Recurrence).value;
                CHECK(std::abs(st - rt) <= 1e-10 * std::max(1.0, std::abs(rt)));
            }
            // non-integer lattice coordinate
            double s = dual_disc_d(n, 1.7, alpha, ctx, Method::Series).value;
            double r = dual_disc_d(n, 1.7, alpha, ctx, Method::Recurrence).value;
            CHECK(std::abs(s - r) <= 1e-10 * std::max(1.0, std::abs(r)));
        }
    }
    // q-MP: theta grid, a in {0.5, 2}; the family lives on |sin theta| <= 1,
    // so the degree cap binds at small q
    for (double q : {0.4, 0.6, 0.8}) {
        QContext ctx(q);
        for (double a : {0.5, 2.0}) {
            for (double th : {0.0, M_PI / 3.0, -M_PI / 3.0, 1.1}) {
                for (int n = 0; n <= inner_degree_cap(q); ++n) {
                    double s = q_mp_tilde(n, th, a, ctx, Method::Series).value;
                    double r = q_mp_tilde(n, th, a, ctx, Method::Recurrence).value;
                    CHECK(std::abs(s - r) <= 1e-10 * std::max(1.0, std::abs(r)));
                }
            }
        }
    }
    // big / little q-Jacobi
    for (double q : {0.4, 0.7}) {
        QContext ctx(q);
        FamilyParams bp = FamilyParams::big_q_jacobi(0.5, 0.7, -0.4);
        FamilyParams lp = FamilyParams::little_q_jacobi(0.5, 0.5);
        double X = std::pow(q, -6.5);
        for (double x : {0.3, -0.9, 0.8 * X, -1.3 * X}) {
            for (int n : {3, 8, 12}) {
                if (n > inner_degree_cap(q) && std::abs(x) < 2.0) continue;
                double s = big_q_jacobi(n, x, bp, ctx).value;
                double r = big_q_jacobi(n, x, bp, ctx, Method::Recurrence).value;
                CHECK(std::abs(s - r) <= 1e-10 * std::max(1.0, std::abs(r)));
                double sl = little_q_jacobi(n, x, lp, ctx).value;
                double rl = little_q_jacobi(n, x, lp, ctx, Method::Recurrence).value;
                CHECK(std::abs(sl - rl) <= 1e-10 * std::max(1.0, std::abs(rl)));
            }
        }
    }
}

TEST_CASE("degree property via finite differences") {
    // the (n+1)-th forward difference of a degree-n polynomial vanishes
    QContext ctx(0.6);
    auto fd_check = [&](auto eval, int n, double h0) {
        int pts = n + 2;
        std::vector<double> vals(pts);
        for (int i = 0; i < pts; ++i) vals[i] = eval(h0 * (i + 1));
        double scale = 0.0;
        for (double v : vals) scale = std::max(scale, std::abs(v));
        for (int level = 0; level < n + 1; ++level) {
            for (size_t i = 0; i + 1 < vals.size(); ++i) vals[i] = vals[i + 1] - vals[i];
            vals.pop_back();
        }
        // vals[0] is the (n+1)-th difference
        CHECK(std::abs(vals[0]) <= 1e-8 * std::max(1.0, scale));
    };
    for (int n : {1, 3, 5, 8}) {
        fd_check([&](double x) { return disc_ultra_c(n, x, 0.5, ctx).value; }, n, 0.13);
        fd_check([&](double x) { return disc_ultra_c_tilde(n, x, 2.0, ctx).value; }, n, 0.13);
        // dual families are polynomials in mu
        fd_check([&](double m) { return dual_disc_d_at_mu(n, m, 0.5, ctx).value; }, n, 0.37);
        fd_check([&](double m) { return dual_disc_d_tilde_at_mu(n, m, 0.5, ctx).value; }, n, 0.37);
        fd_check([&](double s) { return u_poly(n, s, 0.4, 0.6, ctx).value; }, n, 0.29);
    }
}

TEST_CASE("parity") {
    QContext ctx(0.5);
    for (int n = 0; n <= 10; ++n) {
        for (double x : {0.17, 0.42, 1.3}) {
            double cp = disc_ultra_c(n, x, 0.5, ctx).value;
            double cm = disc_ultra_c(n, -x, 0.5, ctx).value;
            double sign = n % 2 == 0 ? 1.0 : -1.0;
            CHECK(std::abs(cm - sign * cp) <= 1e-12 * std::max(1.0, std::abs(cp)));
            double tp = disc_ultra_c_tilde(n, x, 2.0, ctx).value;
            double tm = disc_ultra_c_tilde(n, -x, 2.0, ctx).value;
            CHECK(std::abs(tm - sign * tp) <= 1e-12 * std::max(1.0, std::abs(tp)));
        }
    }
}

TEST_CASE("C~ complex brute-force oracle") {
    // (10): C~_n(x) = (-i)^n C_n^{(-alpha)}(ix) computed with complex arithmetic
    QContext ctx(0.5);
    const double alpha = 0.5, q = 0.5;
    for (int n = 0; n <= 8; ++n) {
        for (double x : {0.3, -0.7}) {
            std::complex<double> total = 0.0, t = 1.0;
            double sum_abs = 0.0;
            std::complex<double> I(0.0, 1.0);
            std::complex<double> ra = I * std::sqrt(alpha);
            for (int m = 0; m <= n; ++m) {
                total += t;
                sum_abs += std::abs(t);
                std::complex<double> qm = std::pow(q, m);
                std::complex<double> fac = (1.0 - std::pow(q, -n) * qm) *
                                           (1.0 + alpha * std::pow(q, n + 1) * qm) *
                                           (1.0 - I * x * qm);
                std::complex<double> den = (1.0 - ra * q * qm) * (1.0 + ra * q * qm) *
                                           (1.0 - std::pow(q, m + 1));
                t = t * fac / den * q;
            }
            std::complex<double> ref = std::pow(-I, n) * total;
            // the double-precision oracle is itself limited by its term cancellation
            double noise = 64.0 * sum_abs * 1e-16;
            CHECK(std::abs(ref.imag()) <= noise + 1e-13);
            double got = disc_ultra_c_tilde(n, x, alpha, ctx, Method::Recurrence).value;
            CHECK(std::abs(got - ref.real()) <= noise + 1e-11 * std::abs(got));
        }
    }
}

TEST_CASE("Favard coefficients") {
    QContext ctx(0.5);
    // A_tilde_n >= 1 throughout
    FamilyParams ct = FamilyParams::disc_ultra_c_tilde(2.0);
    for (int n = 0; n <= 200; ++n) {
        RecurrenceCoeffs rc = recurrence_coeffs(ct, n, ctx);
        CHECK(rc.A_n >= 1.0);
    }
    // C family inside domain: A_n C_{n+1} > 0; outside: fails for some n
    FamilyParams cin = FamilyParams::disc_ultra_c(3.9);
    bool all_pos = true;
    for (int n = 0; n <= 200; ++n) {
        RecurrenceCoeffs a = recurrence_coeffs(cin, n, ctx);
        RecurrenceCoeffs b = recurrence_coeffs(cin, n + 1, ctx);
        all_pos = all_pos && (a.A_n * b.C_n > 0.0);
    }
    CHECK(all_pos);
    FamilyParams cout = FamilyParams::disc_ultra_c(4.04);  // q^{-2} = 4
    bool any_neg = false;
    for (int n = 0; n <= 200; ++n) {
        RecurrenceCoeffs a = recurrence_coeffs(cout, n, ctx);
        RecurrenceCoeffs b = recurrence_coeffs(cout, n + 1, ctx);
        if (a.A_n * b.C_n <= 0.0) any_neg = true;
    }
    CHECK(any_neg);
}

TEST_CASE("validation errors name the constraint") {
    QContext ctx(0.5);
    CHECK_THROWS_WITH_AS(FamilyParams::disc_ultra_c(-0.1).validate(ctx, true),
                         doctest::Contains("alpha > 0"), DomainError);
    CHECK_THROWS_WITH_AS(FamilyParams::disc_ultra_c(5.0).validate(ctx, true),
                         doctest::Contains("alpha < 1/q^2"), DomainError);
    CHECK_THROWS_AS(FamilyParams::big_q_jacobi(0.5, 0.7, 0.4).validate(ctx, true), DomainError);
    CHECK_THROWS_AS(FamilyParams::u_family(0.5, -0.5).validate(ctx, true), DomainError);
    CHECK_THROWS_AS(FamilyParams::q_mp(1.5).validate(ctx, true), DomainError);
    CHECK_NOTHROW(FamilyParams::q_mp(1.5).validate(ctx, false));
    CHECK_NOTHROW(FamilyParams::disc_ultra_c_tilde(50.0).validate(ctx, true));
}

TEST_CASE("classical Jacobi ratio oracle") {
    // P_2^{(1,1)}(0.5) = 3/16, P_2^{(1,1)}(1) = 3 from the explicit classical formula
    CHECK(jacobi_ratio(2, 0.5, 1.0, 1.0) == doctest::Approx(0.0625).epsilon(1e-14));
    CHECK(jacobi_ratio(4, 0.3, 0.5, 0.5) == doctest::Approx(0.00992).epsilon(1e-12));
    CHECK(jacobi_ratio(4, 0.3, 1.0, 1.0) == doctest::Approx(-0.0112375).epsilon(1e-12));
}

TEST_CASE("u-family exponential stability for negative sinh") {
    QContext ctx(0.6);
    // e^xi computed as s + sqrt(s^2+1) must stay accurate for s < 0
    double v1 = u_poly(3, -40.0, 0.4, 0.6, ctx).value;
    CHECK(std::isfinite(v1));
    // reflection consistency with direct series at moderate s
    CHECK(std::abs(u_poly(2, -0.7, 0.4, 0.6, ctx).value) > 0.0);
}
