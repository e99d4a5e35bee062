#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qortho/dd.hpp"

namespace qortho {

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DenominatorPole : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Base q plus the numerical policy shared by every series / product routine.
struct QContext {
    double q;
    double eps_term = 1e-12;  // relative truncation target
    int max_terms = 4096;

    explicit QContext(double q_, double eps = 1e-12, int mt = 4096)
        : q(q_), eps_term(eps), max_terms(mt) {
        if (!(q > 0.0 && q < 1.0)) throw DomainError("QContext: require 0 < q < 1");
        if (!(eps_term > 0.0 && eps_term < 1e-3)) throw DomainError("QContext: require 0 < eps_term < 1e-3");
        if (max_terms < 64) throw DomainError("QContext: require max_terms >= 64");
    }

    // same policy, squared base (the q^2-lattice relations)
    QContext squared() const { return QContext(q * q, eps_term, max_terms); }
};

// Sign/log-magnitude value of a (possibly huge) product, with a certified
// relative truncation bound: true value within value*(1 +/- tail_bound).
struct PochResult {
    int sign = 1;              // -1, 0, +1
    double log_abs = 0.0;      // log|value|; -inf when sign == 0
    double tail_bound = 0.0;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

struct LatticeValue {
    double x;
    double alpha;
    double mu;  // q^{-x} + alpha q^{x+1}
};

// (a;q)_n, finite product. Exact empty product for n = 0.
double qpoch(double a, double q, int n);
dd qpoch_dd(dd a, dd q, int n);

// (a;q)_infinity with geometric tail bound |a|q^J/((1-q)(1-|a|q^J)).
// A vanishing factor (a = q^{-j}) is reported as sign 0, not an error.
PochResult qpoch_inf(double a, const QContext& ctx);

// (ib;q)_n (-ib;q)_n = (-b^2;q^2)_n, kept in real arithmetic.
double qpoch_paired(double b, const QContext& ctx, int n);

LatticeValue mu(double x, double alpha, const QContext& ctx);

// Parameter pair contributing the quadratic factor (1 - two_re q^m + abs_sq q^{2m})
// per term; counts as two parameters in the series convention exponent.
// Conjugate pair p, conj(p): two_re = 2 Re p, abs_sq = |p|^2.
// Real pair u, -u:           two_re = 0,      abs_sq = -u^2.
struct PairFactor {
    dd two_re;
    dd abs_sq;
};

// Terminating basic hypergeometric sum, Gasper-Rahman normalization:
// the m-th term carries [(-1)^m q^{m(m-1)/2}]^{1+s-r}. Sums m = 0..terms.
// Parameters are double-double so exact q-powers survive the cancellation.
struct PhiSeries {
    std::vector<dd> num;
    std::vector<dd> den;            // zero entries are the "0" parameter
    std::vector<PairFactor> num_pairs;
    std::vector<PairFactor> den_pairs;
    dd z = 0.0;
    int terms = 0;
};

struct PhiResult {
    double value;
    double est_error;  // heuristic: residual of the compensated sum
    double sum_abs;    // sum of |term|, the cancellation diagnostic
};

PhiResult phi_eval(const PhiSeries& s, const QContext& ctx);

// Spec-surface wrapper: real parameter lists only.
double phi_terminating(std::span<const double> num, std::span<const double> den,
                       const QContext& ctx, double z, int n);

// Weight of the bilateral one-parameter orthogonality family at integer index n,
// in log space (the q^{-n} product arguments overflow doubles long before the
// q^{2n^2} decay wins). Sign is carried: the weight is negative for some n < 0.
PochResult bilateral_weight(int n, double d, double t1, double t2, const QContext& ctx);

// Compensated (Neumaier) accumulator for plain-double sums.
struct NeumaierSum {
    double s = 0.0;
    double c = 0.0;

    void add(double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

} // namespace qortho
