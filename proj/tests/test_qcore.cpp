#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "qortho/qcore.hpp"

using namespace qortho;

TEST_CASE("QContext invariants") {
    CHECK_THROWS_AS(QContext(0.0), DomainError);
    CHECK_THROWS_AS(QContext(1.0), DomainError);
    CHECK_THROWS_AS(QContext(0.5, 1e-2), DomainError);
    CHECK_THROWS_AS(QContext(0.5, 1e-12, 8), DomainError);
    QContext ok(0.5);
    CHECK(ok.q == 0.5);
}

TEST_CASE("finite q-Pochhammer") {
    CHECK(qpoch(0.7, 0.5, 0) == 1.0);
    CHECK(qpoch(0.5, 0.5, 2) == doctest::Approx(0.375).epsilon(1e-15));
    CHECK(qpoch(0.0, 0.5, 5) == 1.0);

    // (a;q)_{n+1} = (a;q)_n (1 - a q^n)
    for (double a : {-2.0, -0.7, 0.3, 1.0, 2.0}) {
        for (double q : {0.3, 0.8}) {
            for (int n = 0; n <= 50; n += 7) {
                double lhs = qpoch(a, q, n + 1);
                double rhs = qpoch(a, q, n) * (1.0 - a * std::pow(q, n));
                CHECK(lhs == doctest::Approx(rhs).epsilon(1e-14));
            }
        }
    }
}

TEST_CASE("infinite q-Pochhammer") {
    QContext ctx(0.5, 1e-15);  // the truncation certifies to eps_term
    CHECK(qpoch_inf(0.0, ctx).value() == 1.0);
    CHECK(qpoch_inf(0.5, ctx).value() == doctest::Approx(0.28878809508660242128).epsilon(1e-13));
    CHECK(qpoch_inf(-1.0, ctx).value() == doctest::Approx(4.7684620580627434483).epsilon(1e-13));
    // factor splitting (-1;q)_inf = 2 (-q;q)_inf
    CHECK(qpoch_inf(-1.0, ctx).value() ==
          doctest::Approx(2.0 * qpoch_inf(-0.5, ctx).value()).epsilon(1e-13));

    SUBCASE("splitting identity (a;q)_inf = (a;q)_n (a q^n;q)_inf") {
        for (double a : {0.9, -1.7, 0.3}) {
            PochResult full = qpoch_inf(a, ctx);
            for (int n : {1, 5, 20}) {
                PochResult rest = qpoch_inf(a * std::pow(ctx.q, n), ctx);
                double split = qpoch(a, ctx.q, n) * rest.value();
                double bound = (full.tail_bound + rest.tail_bound + 1e-14) * std::abs(full.value());
                CHECK(std::abs(split - full.value()) <= bound);
            }
        }
    }

    SUBCASE("zero of the product reported as sign 0") {
        PochResult z = qpoch_inf(4.0, ctx);  // a = q^{-2}
        CHECK(z.sign == 0);
        CHECK(z.value() == 0.0);
    }

    SUBCASE("tail bound consistency under eps halving") {
        for (double a : {0.6, -1.3, 123.0}) {
            QContext loose(0.5, 1e-6);
            QContext tight(0.5, 5e-7);
            PochResult r1 = qpoch_inf(a, loose);
            PochResult r2 = qpoch_inf(a, tight);
            CHECK(std::abs(r2.value() - r1.value()) <= std::abs(r1.value()) * r1.tail_bound + 1e-300);
        }
    }
}

TEST_CASE("paired q-Pochhammer") {
    QContext ctx(0.5);
    CHECK(qpoch_paired(0.3, ctx, 0) == 1.0);
    CHECK(qpoch_paired(1.0, ctx, 1) == doctest::Approx(2.0).epsilon(1e-15));

    // complex brute-force oracle: (ib;q)_n (-ib;q)_n
    QContext c6(0.6);
    double b = 0.4;
    std::complex<double> prod(1.0, 0.0);
    std::complex<double> ib(0.0, b);
    double qj = 1.0;
    for (int j = 0; j < 7; ++j) {
        prod *= (1.0 - ib * qj) * (1.0 + ib * qj);
        qj *= 0.6;
    }
    CHECK(std::abs(prod.imag()) < 1e-16);
    CHECK(qpoch_paired(b, c6, 7) == doctest::Approx(prod.real()).epsilon(1e-14));
    CHECK(qpoch_paired(b, c6, 7) == doctest::Approx(1.2666585406039101442).epsilon(1e-14));
    CHECK(qpoch_paired(b, c6, 7) == doctest::Approx(qpoch(-b * b, 0.36, 7)).epsilon(1e-15));
}

TEST_CASE("mu lattice") {
    QContext ctx(0.5);
    CHECK(mu(0.0, 0.7, ctx).mu == doctest::Approx(1.0 + 0.7 * 0.5).epsilon(1e-15));
    CHECK(mu(2.0, 0.0, ctx).mu == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(mu(1.0, 0.25, ctx).mu == doctest::Approx(2.0625).epsilon(1e-15));
}

TEST_CASE("terminating phi") {
    QContext ctx(0.5);
    SUBCASE("n = 0 is exactly 1") {
        const double num[] = {2.0, 0.3};
        const double den[] = {0.7};
        CHECK(phi_terminating(num, den, ctx, 0.9, 0) == 1.0);
    }
    SUBCASE("two-term 2phi1 with q^{-1}") {
        const double num[] = {2.0, 0.3};  // q^{-1} = 2, b = 0.3
        const double den[] = {0.5};
        CHECK(phi_terminating(num, den, ctx, 0.2, 1) == doctest::Approx(0.44).epsilon(1e-15));
    }
    SUBCASE("denominator pole is an error") {
        const double num[] = {4.0, 0.3};
        const double den[] = {2.0};  // (2;q)_m vanishes at m = 1 for q = 0.5
        CHECK_THROWS_AS(phi_terminating(num, den, ctx, 0.2, 2), DenominatorPole);
    }
    SUBCASE("3phi1 convention factor") {
        // r=3, s=1 series must carry [(-1)^m q^{m(m-1)/2}]^{-1}: check one term by hand
        PhiSeries s;
        s.num = {dd(0.25), dd(0.3), dd(0.7)};
        s.den = {dd(0.6)};
        s.z = dd(0.1);
        s.terms = 1;
        // m=1 term: (1-0.25)(1-0.3)(1-0.7)/((1-0.6)(1-0.5)) * 0.1 / (-1)
        double expect = 1.0 + (0.75 * 0.7 * 0.3) / (0.4 * 0.5) * 0.1 / (-1.0);
        CHECK(phi_eval(s, ctx).value == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("q-binomial theorem oracle") {
    // sum_s (A;q^2)_s q^s/(q^2;q^2)_s = (Aq;q^2)_inf / (q;q^2)_inf
    for (double q : {0.3, 0.5, 0.8}) {
        QContext ctx(q, 1e-15);
        QContext ctx2 = ctx.squared();
        for (double a : {0.5, 1.5}) {
            for (double sign : {1.0, -1.0}) {
                double A = sign * a * q * q;
                NeumaierSum sum;
                double term = 1.0;
                for (int s = 0; s < 400; ++s) {
                    sum.add(term);
                    term *= (1.0 - A * std::pow(q * q, s)) * q / (1.0 - std::pow(q * q, s + 1));
                }
                double closed = qpoch_inf(A * q, ctx2).value() / qpoch_inf(q, ctx2).value();
                CHECK(sum.value() == doctest::Approx(closed).epsilon(1e-13));
            }
        }
    }
}

TEST_CASE("bilateral weight") {
    QContext ctx(0.6);
    double a = 1.0;
    double t1 = std::sqrt(ctx.q * ctx.q * ctx.q / a);
    double t2 = std::sqrt(ctx.q / a);
    double d = 0.8;

    SUBCASE("n = 0 equals the direct product assembly") {
        PochResult w = bilateral_weight(0, d, t1, t2, ctx);
        double direct = qpoch_inf(-t1 / d, ctx).value() * qpoch_inf(t1 * d, ctx).value() *
                        qpoch_inf(-t2 / d, ctx).value() * qpoch_inf(t2 * d, ctx).value() /
                        qpoch_inf(-t1 * t2 / ctx.q, ctx).value() * (1.0 + d * d) /
                        (qpoch_inf(-d * d, ctx).value() * qpoch_inf(-ctx.q / (d * d), ctx).value() *
                         qpoch_inf(ctx.q, ctx).value());
        CHECK(w.value() == doctest::Approx(direct).epsilon(1e-12));
    }

    SUBCASE("positive for n >= 0; signed tail certified") {
        // the measure really is signed: some n < 0 weights are negative
        for (int n = 0; n <= 20; ++n) CHECK(bilateral_weight(n, d, t1, t2, ctx).sign == 1);
        bool any_negative = false;
        for (int n = -8; n < 0; ++n)
            if (bilateral_weight(n, d, t1, t2, ctx).sign < 0) any_negative = true;
        CHECK(any_negative);
    }

    SUBCASE("log-weight decays superexponentially at both ends") {
        for (int n : {10, 14, 18}) {
            double drop_pos = bilateral_weight(n, d, t1, t2, ctx).log_abs -
                              bilateral_weight(n + 1, d, t1, t2, ctx).log_abs;
            double drop_neg = bilateral_weight(-n, d, t1, t2, ctx).log_abs -
                              bilateral_weight(-n - 1, d, t1, t2, ctx).log_abs;
            CHECK(drop_pos > 2.0 * n * std::log(1.0 / ctx.q));
            CHECK(drop_neg > 2.0 * (n - 2) * std::log(1.0 / ctx.q));
        }
    }

    SUBCASE("domain") {
        CHECK_THROWS_AS(bilateral_weight(0, 1.2, t1, t2, ctx), DomainError);
        CHECK_THROWS_AS(bilateral_weight(0, d, t1, -t2, ctx), DomainError);
    }
}

TEST_CASE("double-double arithmetic") {
    dd one(1.0);
    dd tiny(0.0);
    // (1 + 2^-80) - 1 survives in dd
    dd x = one + dd(std::ldexp(1.0, -80));
    dd y = x - one;
    CHECK(static_cast<double>(y) == doctest::Approx(std::ldexp(1.0, -80)).epsilon(1e-15));
    CHECK(static_cast<double>(powi(dd(2.0), 10)) == 1024.0);
    CHECK(static_cast<double>(powi(dd(2.0), -3)) == 0.125);
    CHECK(static_cast<double>(dd_sqrt(dd(2.0)) * dd_sqrt(dd(2.0))) == doctest::Approx(2.0).epsilon(1e-30));
    (void)tiny;
}
