#pragma once

#include <string>
#include <vector>

#include "qortho/qcore.hpp"

namespace qortho {

enum class Family {
    BigQJacobi,
    LittleQJacobi,
    DiscUltraC,
    DiscUltraCTilde,
    DualBigD,
    DualLittleD,
    DualDiscD,
    DualDiscDTilde,
    UFamily,
    QMeixnerPollaczek,
};

enum class Method { Series, Recurrence };

struct EvalResult {
    double value;
    Method method;
    double est_error;
};

// A_n, C_n of the three-term recurrence x f_n = A_n f_{n+1} + C_n f_{n-1}
// (for Q-MP the pair (1-q^{n+1}), (1+a^2 q^{n-1}) of 2x f_n = ...).
struct RecurrenceCoeffs {
    double A_n;
    double C_n;
};

// Validated parameter set for one family. Unused fields stay zero.
struct FamilyParams {
    Family family;
    double a = 0.0, b = 0.0, c = 0.0;  // big/little/dual-little
    double alpha = 0.0;                // C, C~, D, D~
    double t1 = 0.0, t2 = 0.0;         // u

    static FamilyParams big_q_jacobi(double a, double b, double c);
    static FamilyParams little_q_jacobi(double a, double b);
    static FamilyParams disc_ultra_c(double alpha);
    static FamilyParams disc_ultra_c_tilde(double alpha);
    static FamilyParams dual_big_d(double a, double b, double c);
    static FamilyParams dual_little_d(double a, double b);
    static FamilyParams dual_disc_d(double alpha);
    static FamilyParams dual_disc_d_tilde(double alpha);
    static FamilyParams u_family(double t1, double t2);
    static FamilyParams q_mp(double a);

    // Throws DomainError naming the violated constraint. With
    // for_orthogonality the stricter orthogonality-domain bounds apply.
    void validate(const QContext& ctx, bool for_orthogonality) const;
};

std::string family_name(Family f);

EvalResult big_q_jacobi(int n, double x, const FamilyParams& p, const QContext& ctx,
                        Method method = Method::Series);
EvalResult little_q_jacobi(int n, double x, const FamilyParams& p, const QContext& ctx,
                           Method method = Method::Series);
EvalResult disc_ultra_c(int n, double x, double alpha, const QContext& ctx,
                        Method method = Method::Recurrence);
EvalResult disc_ultra_c_tilde(int n, double x, double alpha, const QContext& ctx,
                              Method method = Method::Recurrence);
// dual big / dual little evaluate on the lattice mu(m;ab)
EvalResult dual_big_d(int n, int m, const FamilyParams& p, const QContext& ctx);
EvalResult dual_little_d(int n, int m, const FamilyParams& p, const QContext& ctx);
// dual discrete families take the real lattice coordinate x; the value is a
// polynomial in mu(x;alpha) (resp. mu(x;-alpha))
EvalResult dual_disc_d(int n, double x, double alpha, const QContext& ctx,
                       Method method = Method::Series);
EvalResult dual_disc_d_tilde(int n, double x, double alpha, const QContext& ctx,
                             Method method = Method::Series);
EvalResult dual_disc_d_at_mu(int n, double mu_value, double alpha, const QContext& ctx);
EvalResult dual_disc_d_tilde_at_mu(int n, double mu_value, double alpha, const QContext& ctx);
EvalResult u_poly(int n, double s, double t1, double t2, const QContext& ctx);
EvalResult q_mp_tilde(int n, double theta, double a, const QContext& ctx,
                      Method method = Method::Series);

// Classical P_n^{(alpha,beta)}(x) / P_n^{(alpha,beta)}(1), the q->1 reference.
double jacobi_ratio(int n, double x, double alpha, double beta);

RecurrenceCoeffs recurrence_coeffs(const FamilyParams& p, int n, const QContext& ctx);

// All degrees 0..nmax at one point via the three-term recurrences, in
// double-double. These are the evaluation kernels of the Gram engine.
std::vector<dd> c_all(int nmax, dd x, double alpha, const QContext& ctx);
std::vector<dd> ct_all(int nmax, dd x, double alpha, const QContext& ctx);
std::vector<dd> d_all_at_mu(int nmax, dd muv, double alpha, const QContext& ctx);
std::vector<dd> dt_all_at_mu(int nmax, dd muv, double alpha, const QContext& ctx);
std::vector<dd> bigp_all(int nmax, dd x, double a, double b, double c, const QContext& ctx);
std::vector<dd> littlep_all(int nmax, dd x, double a, double b, const QContext& ctx);
std::vector<dd> qmp_all(int nmax, double sin_theta, double a, const QContext& ctx);

} // namespace qortho
