#include "qortho/ortho.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qortho {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sqr(double x) { return x * x; }

std::string format_d(double d) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

// ---------------------------------------------------------------------------
// weights

// single-sign C / C~ weight (alpha q^2; q^2)_s q^s / (q^2;q^2)_s, sign -> -alpha for tilde
double c_weight_ratio(double alpha, bool tilde, double q, int s) {
    double a = tilde ? -alpha : alpha;
    double q2s2 = std::pow(q, 2 * s + 2);
    return q * (1.0 - a * q2s2) / (1.0 - q2s2);
}

// ---------------------------------------------------------------------------

struct Cell {
    int n, np;
};

std::vector<Cell> upper_cells(int nmax) {
    std::vector<Cell> cells;
    for (int n = 0; n <= nmax; ++n)
        for (int np = n; np <= nmax; ++np) cells.push_back({n, np});
    return cells;
}

void finalize_report(GramReport& rep, const OrthoRelation& rel) {
    const int N = rep.n_max;
    rep.max_offdiag_rel = 0.0;
    rep.max_diag_rel_err = 0.0;
    for (int n = 0; n <= N; ++n) {
        for (int np = n; np <= N; ++np) {
            double e = rep.entry(n, np);
            if (n == np) {
                rep.max_diag_rel_err = std::max(rep.max_diag_rel_err,
                                                std::abs(e - rep.rhs_diag[n]) / rep.rhs_diag[n]);
            } else {
                rep.max_offdiag_rel = std::max(rep.max_offdiag_rel,
                                               std::abs(e) / std::sqrt(rep.rhs_diag[n] * rep.rhs_diag[np]));
            }
        }
    }
    if (rel.as_printed_factor != 1.0) {
        rep.as_printed_ratio_min = kInf;
        rep.as_printed_ratio_max = -kInf;
        for (int n = 0; n <= N; ++n) {
            double r = rel.as_printed_factor * rep.entry(n, n) / rep.rhs_diag[n];
            rep.as_printed_ratio_min = std::min(rep.as_printed_ratio_min, r);
            rep.as_printed_ratio_max = std::max(rep.as_printed_ratio_max, r);
        }
    }
}

// evaluate the family values for one abscissa: all degrees 0..degmax
std::vector<dd> eval_point(const OrthoRelation& rel, int degmax, double x, const QContext& ctx) {
    switch (rel.family.family) {
        case Family::DiscUltraC: return c_all(degmax, dd(x), rel.family.alpha, ctx);
        case Family::DiscUltraCTilde: return ct_all(degmax, dd(x), rel.family.alpha, ctx);
        case Family::BigQJacobi: return bigp_all(degmax, dd(x), rel.family.a, rel.family.b, rel.family.c, ctx);
        case Family::LittleQJacobi: return littlep_all(degmax, dd(x), rel.family.a, rel.family.b, ctx);
        default: throw DomainError("eval_point: unsupported family");
    }
}

// ---------------------------------------------------------------------------
// discrete engine for C/C~/little/big kinds: plain-double weights, dd values

struct DiscreteBranch {
    std::vector<double> w;       // per-point weight (already halved for signed kinds)
    std::vector<double> x;       // abscissas
};

// certified sup bound for |f_n| on [0, xedge]: probe grid times safety 2
std::vector<double> probe_sup(const OrthoRelation& rel, int degmax, double xedge, const QContext& ctx) {
    std::vector<double> M(static_cast<size_t>(degmax) + 1, 0.0);
    for (double frac : {0.0, 0.34, 0.67, 1.0}) {
        auto v = eval_point(rel, degmax, xedge * frac, ctx);
        for (int n = 0; n <= degmax; ++n)
            M[n] = std::max(M[n], std::abs(static_cast<double>(v[n])));
    }
    for (double& m : M) m *= 2.0;
    return M;
}

// returns truncation tail (relative to the rhs scale) and fills the branch
double build_c_branch(const OrthoRelation& rel, int degmax, const std::vector<double>& rhs_of_deg,
                      const QContext& ctx, DiscreteBranch& br) {
    const double q = ctx.q;
    const double al = rel.family.alpha;
    const double ra = std::sqrt(al);
    const double half = rel.kind == RelationKind::CSigned ? 0.5 : 1.0;
    std::vector<double> w{1.0};
    auto ratio = [&](int s) { return c_weight_ratio(al, rel.tilde, q, s); };
    int S = 24;
    double tail_rel = kInf;
    for (;;) {
        while (static_cast<int>(w.size()) <= S + 1) {
            int s = static_cast<int>(w.size()) - 1;
            w.push_back(w[s] * ratio(s));
        }
        double q2S4 = std::pow(q, 2 * S + 4);
        double rbar = rel.tilde ? q * (1.0 + al * q2S4) / (1.0 - q2S4) : q / (1.0 - q2S4);
        if (rbar < 1.0) {
            double tailw = w[S + 1] / (1.0 - rbar);
            auto M = probe_sup(rel, degmax, ra * std::pow(q, S + 2), ctx);
            tail_rel = 0.0;
            for (int n = 0; n <= degmax; ++n)
                for (int np = n; np <= degmax; ++np)
                    tail_rel = std::max(tail_rel, tailw * M[n] * M[np] /
                                                      std::sqrt(rhs_of_deg[n] * rhs_of_deg[np]));
            if (tail_rel <= ctx.eps_term) break;
        }
        if (S >= ctx.max_terms)
            throw NonConverged("gram: support truncation did not certify within max_terms");
        S += S / 2;
    }
    br.w.resize(S + 1);
    br.x.resize(S + 1);
    for (int s = 0; s <= S; ++s) {
        br.w[s] = half * w[s];
        br.x[s] = ra * std::pow(q, s + 1);
    }
    return tail_rel;
}

double build_little_branch(const OrthoRelation& rel, int degmax, const std::vector<double>& rhs_of_deg,
                           const QContext& ctx, DiscreteBranch& br) {
    const double q = ctx.q;
    const double a = rel.family.a, b = rel.family.b;
    std::vector<double> w{1.0};
    auto ratio = [&](int s) { return a * q * (1.0 - b * std::pow(q, s + 1)) / (1.0 - std::pow(q, s + 1)); };
    int S = 24;
    double tail_rel = kInf;
    for (;;) {
        while (static_cast<int>(w.size()) <= S + 1) {
            int s = static_cast<int>(w.size()) - 1;
            w.push_back(w[s] * ratio(s));
        }
        double qS2 = std::pow(q, S + 2);
        double rbar = a * q * (1.0 + std::max(0.0, -b) * qS2) / (1.0 - qS2);
        if (rbar < 1.0) {
            double tailw = std::abs(w[S + 1]) / (1.0 - rbar);
            auto M = probe_sup(rel, degmax, std::pow(q, S + 1), ctx);
            tail_rel = 0.0;
            for (int n = 0; n <= degmax; ++n)
                for (int np = n; np <= degmax; ++np)
                    tail_rel = std::max(tail_rel, tailw * M[n] * M[np] /
                                                      std::sqrt(rhs_of_deg[n] * rhs_of_deg[np]));
            if (tail_rel <= ctx.eps_term) break;
        }
        if (S >= ctx.max_terms)
            throw NonConverged("gram: support truncation did not certify within max_terms");
        S += S / 2;
    }
    br.w.resize(S + 1);
    br.x.resize(S + 1);
    for (int s = 0; s <= S; ++s) {
        br.w[s] = w[s];
        br.x[s] = std::pow(q, s);
    }
    return tail_rel;
}

// big q-Jacobi: branch 0 on a q^{s+1}, branch 1 on c q^{s+1}
double build_bigqj_branch(const OrthoRelation& rel, int branch, int degmax,
                          const std::vector<double>& rhs_of_deg, const QContext& ctx,
                          DiscreteBranch& br) {
    const double q = ctx.q;
    double a = rel.family.a, b = rel.family.b, c = rel.family.c;
    if (branch == 1) {
        // second sum of the relation: (a,b,c) -> (b,a,ab/c)
        double a2 = b, b2 = a, c2 = a * b / c;
        a = a2; b = b2; c = c2;
    }
    // prefactor r(a,b,c) = (bq, cq;q)_inf / (abq^2, c/a;q)_inf
    PochResult r1 = qpoch_inf(b * q, ctx), r2 = qpoch_inf(c * q, ctx);
    PochResult r3 = qpoch_inf(a * b * q * q, ctx), r4 = qpoch_inf(c / a, ctx);
    double pref = r1.sign * r2.sign * r3.sign * r4.sign *
                  std::exp(r1.log_abs + r2.log_abs - r3.log_abs - r4.log_abs);
    std::vector<double> w{pref};
    auto ratio = [&](int s) {
        double qs1 = std::pow(q, s + 1);
        return q * (1.0 - a * qs1) * (1.0 - a * b * qs1 / c) / ((1.0 - a * qs1 / c) * (1.0 - qs1));
    };
    int S = 24;
    double tail_rel = kInf;
    const double support_base = branch == 0 ? rel.family.a : rel.family.c;
    for (;;) {
        while (static_cast<int>(w.size()) <= S + 1) {
            int s = static_cast<int>(w.size()) - 1;
            w.push_back(w[s] * ratio(s));
        }
        double qS2 = std::pow(q, S + 2);
        double rbar = q * (1.0 + std::abs(a * b / c) * qS2) / (1.0 - qS2);
        if (rbar < 1.0) {
            double tailw = std::abs(w[S + 1]) / (1.0 - rbar);
            auto M = probe_sup(rel, degmax, support_base * std::pow(q, S + 2), ctx);
            tail_rel = 0.0;
            for (int n = 0; n <= degmax; ++n)
                for (int np = n; np <= degmax; ++np)
                    tail_rel = std::max(tail_rel, tailw * M[n] * M[np] /
                                                      std::sqrt(rhs_of_deg[n] * rhs_of_deg[np]));
            if (tail_rel <= ctx.eps_term) break;
        }
        if (S >= ctx.max_terms)
            throw NonConverged("gram: support truncation did not certify within max_terms");
        S += S / 2;
    }
    br.w.resize(S + 1);
    br.x.resize(S + 1);
    for (int s = 0; s <= S; ++s) {
        br.w[s] = w[s];
        br.x[s] = support_base * std::pow(q, s + 1);
    }
    return tail_rel;
}

GramReport gram_discrete(const OrthoRelation& rel, int nmax, const QContext& ctx, Exec exec) {
    GramReport rep;
    rep.relation_id = rel.id;
    rep.n_max = nmax;
    rep.rhs_diag.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) rep.rhs_diag[n] = rhs_norm(rel, n);

    // map report index -> polynomial degree
    auto degree = [&](int n) {
        if (rel.kind == RelationKind::CSingle) return rel.odd ? 2 * n + 1 : 2 * n;
        return n;
    };
    const int degmax = degree(nmax);
    std::vector<double> rhs_of_deg(static_cast<size_t>(degmax) + 1, 1.0);
    for (int n = 0; n <= nmax; ++n) rhs_of_deg[degree(n)] = rep.rhs_diag[n];

    std::vector<DiscreteBranch> branches;
    double tail = 0.0;
    switch (rel.kind) {
        case RelationKind::CSingle: {
            branches.emplace_back();
            tail = build_c_branch(rel, degmax, rhs_of_deg, ctx, branches[0]);
            break;
        }
        case RelationKind::CSigned: {
            branches.emplace_back();
            tail = build_c_branch(rel, degmax, rhs_of_deg, ctx, branches[0]);
            DiscreteBranch mirror = branches[0];
            for (double& xx : mirror.x) xx = -xx;
            branches.push_back(std::move(mirror));
            tail *= 2.0;
            break;
        }
        case RelationKind::LittleQJ: {
            branches.emplace_back();
            tail = build_little_branch(rel, degmax, rhs_of_deg, ctx, branches[0]);
            break;
        }
        case RelationKind::BigQJ: {
            branches.emplace_back();
            branches.emplace_back();
            tail = build_bigqj_branch(rel, 0, degmax, rhs_of_deg, ctx, branches[0]) +
                   build_bigqj_branch(rel, 1, degmax, rhs_of_deg, ctx, branches[1]);
            break;
        }
        default:
            throw DomainError("gram_discrete: wrong kind");
    }
    rep.truncation_bound = tail;

    const bool par = exec == Exec::Parallel;
    // evaluate all branch values
    std::vector<std::vector<std::vector<dd>>> vals(branches.size());
    for (size_t b = 0; b < branches.size(); ++b) {
        auto& bvals = vals[b];
        const auto& br = branches[b];
        bvals.resize(br.x.size());
        long npts = static_cast<long>(br.x.size());
#pragma omp parallel for schedule(static) if (par)
        for (long s = 0; s < npts; ++s) {
            bvals[s] = eval_point(rel, degmax, br.x[s], ctx);
        }
        rep.support_points_used += npts;
    }

    rep.entries.assign(sqr(static_cast<size_t>(nmax) + 1), 0.0);
    auto cells = upper_cells(nmax);
    long ncells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(static) if (par)
    for (long ci = 0; ci < ncells; ++ci) {
        const int dn = degree(cells[ci].n), dnp = degree(cells[ci].np);
        dd acc(0.0);
        if (rel.kind == RelationKind::CSigned) {
            // fixed order: ascending s, then epsilon = +1, -1
            for (size_t s = 0; s < branches[0].w.size(); ++s) {
                acc += dd(branches[0].w[s]) * vals[0][s][dn] * vals[0][s][dnp];
                acc += dd(branches[1].w[s]) * vals[1][s][dn] * vals[1][s][dnp];
            }
        } else {
            for (size_t b = 0; b < branches.size(); ++b)
                for (size_t s = 0; s < branches[b].w.size(); ++s)
                    acc += dd(branches[b].w[s]) * vals[b][s][dn] * vals[b][s][dnp];
        }
        double v = static_cast<double>(acc);
        rep.entries[static_cast<size_t>(cells[ci].n) * (nmax + 1) + cells[ci].np] = v;
        rep.entries[static_cast<size_t>(cells[ci].np) * (nmax + 1) + cells[ci].n] = v;
    }
    finalize_report(rep, rel);
    return rep;
}

// ---------------------------------------------------------------------------
// log-space discrete engine: dual lattices and dual little (huge abscissas,
// underflowing weights; per-term value = sign * exp(logw + log|f_n| + log|f_n'|))

struct LogPointData {
    double logw;
    std::vector<double> logf;
    std::vector<int> sgnf;
};

GramReport gram_logdiscrete(const OrthoRelation& rel, int nmax, const QContext& ctx, Exec exec) {
    const double q = ctx.q;
    const double al = rel.family.alpha;
    GramReport rep;
    rep.relation_id = rel.id;
    rep.n_max = nmax;
    rep.rhs_diag.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) rep.rhs_diag[n] = rhs_norm(rel, n);
    double rhs_min = *std::min_element(rep.rhs_diag.begin(), rep.rhs_diag.end());

    const bool dual_little = rel.kind == RelationKind::DualLittle;
    const bool tilde = rel.tilde;
    const bool oddlat = rel.odd;

    // log-weight ratio and mu abscissa per lattice index k
    auto logw_ratio = [&](int k) {
        if (dual_little) {
            double a = rel.family.a, b = rel.family.b;
            double num = (1.0 - a * b * std::pow(q, 2 * k + 3)) * (1.0 - a * b * std::pow(q, k + 1)) *
                         (1.0 - b * std::pow(q, k + 1)) * a * std::pow(q, 2 * k + 1);
            double den = (1.0 - a * b * std::pow(q, 2 * k + 1)) * (1.0 - a * std::pow(q, k + 1)) *
                         (1.0 - std::pow(q, k + 1));
            return std::log(num / den);
        }
        double s = tilde ? -1.0 : 1.0;  // poch parameter sign: (alpha q;q) vs (-alpha q;q)
        if (!oddlat) {
            double num = (1.0 - s * al * std::pow(q, 4 * k + 5)) * (1.0 - s * al * std::pow(q, 2 * k + 1)) *
                         (1.0 - s * al * std::pow(q, 2 * k + 2));
            double den = (1.0 - s * al * std::pow(q, 4 * k + 1)) * (1.0 - std::pow(q, 2 * k + 1)) *
                         (1.0 - std::pow(q, 2 * k + 2));
            return std::log(num / den) + (4 * k + 1) * std::log(q);
        }
        double num = (1.0 - s * al * std::pow(q, 4 * k + 7)) * (1.0 - s * al * std::pow(q, 2 * k + 2)) *
                     (1.0 - s * al * std::pow(q, 2 * k + 3));
        double den = (1.0 - s * al * std::pow(q, 4 * k + 3)) * (1.0 - std::pow(q, 2 * k + 2)) *
                     (1.0 - std::pow(q, 2 * k + 3));
        return std::log(num / den) + (4 * k + 3) * std::log(q);
    };
    auto logw0 = [&]() {
        if (dual_little) return 0.0;
        if (!oddlat) return 0.0;
        double s = tilde ? -1.0 : 1.0;
        return std::log((1.0 - s * al * std::pow(q, 3)) / (1.0 - q));
    };
    auto point_values = [&](int k) {
        if (dual_little) {
            std::vector<dd> v(static_cast<size_t>(nmax) + 1);
            FamilyParams p = rel.family;
            for (int n = 0; n <= nmax; ++n) v[n] = dd(dual_little_d(n, k, p, ctx).value);
            return v;
        }
        long xlat = oddlat ? 2L * k + 1 : 2L * k;
        dd muv = powi(dd(q), -xlat) + dd(tilde ? -al : al) * powi(dd(q), xlat + 1);
        return tilde ? dt_all_at_mu(nmax, muv, al, ctx) : d_all_at_mu(nmax, muv, al, ctx);
    };

    // structural index beyond which the term ratio is certified <= 1/2:
    // weight ratio ~ q^{4k+1}, |f_n f_n'| grows at most ~ q^{-2(n+n')} * B
    const double B = 16.0 * sqr(1.0 + al * q);
    int k1 = static_cast<int>(std::ceil((4.0 * nmax + std::log(2.0 * B) / std::log(1.0 / q)) / 4.0)) + 1;
    if (dual_little) k1 = std::max(k1, 2 * nmax + 4);

    std::vector<LogPointData> pts;
    double logw = logw0();
    double term_scale_prev = kInf;
    int consecutive_small = 0;
    double tail_term = 0.0;
    for (int k = 0;; ++k) {
        if (k > 0) logw += logw_ratio(k - 1);
        LogPointData p;
        p.logw = logw;
        auto v = point_values(k);
        p.logf.resize(nmax + 1);
        p.sgnf.resize(nmax + 1);
        double lfmax = -kInf;
        for (int n = 0; n <= nmax; ++n) {
            double d = static_cast<double>(v[n]);
            p.sgnf[n] = d > 0.0 ? 1 : d < 0.0 ? -1 : 0;
            p.logf[n] = d == 0.0 ? -kInf : std::log(std::abs(d));
            lfmax = std::max(lfmax, p.logf[n]);
        }
        pts.push_back(std::move(p));
        double term_scale = std::exp(logw + 2.0 * lfmax - std::log(rhs_min));
        if (k >= k1 && term_scale <= 0.25 * ctx.eps_term && term_scale <= term_scale_prev) {
            if (++consecutive_small >= 2) {
                tail_term = term_scale;
                break;
            }
        } else {
            consecutive_small = 0;
        }
        term_scale_prev = term_scale;
        if (k >= ctx.max_terms)
            throw NonConverged("gram: dual lattice sum did not certify within max_terms");
    }
    rep.truncation_bound = 2.0 * tail_term;  // ratio <= 1/2 beyond the cut
    rep.support_points_used = static_cast<long>(pts.size());

    rep.entries.assign(sqr(static_cast<size_t>(nmax) + 1), 0.0);
    auto cells = upper_cells(nmax);
    long ncells = static_cast<long>(cells.size());
    const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
    for (long ci = 0; ci < ncells; ++ci) {
        const int n = cells[ci].n, np = cells[ci].np;
        NeumaierSum acc;
        for (const LogPointData& p : pts) {
            int sg = p.sgnf[n] * p.sgnf[np];
            if (sg == 0) continue;
            double lg = p.logw + p.logf[n] + p.logf[np];
            if (lg < -745.0) continue;
            acc.add(sg * std::exp(lg));
        }
        double v = acc.value();
        rep.entries[static_cast<size_t>(n) * (nmax + 1) + np] = v;
        rep.entries[static_cast<size_t>(np) * (nmax + 1) + n] = v;
    }
    finalize_report(rep, rel);
    return rep;
}

// ---------------------------------------------------------------------------
// bilateral engine: window [-N, N], signed log-space weights

GramReport gram_bilateral(const OrthoRelation& rel, int nmax, const QContext& ctx, Exec exec) {
    // dt-family runs in the squared base
    const bool dt = rel.tilde;
    const QContext bctx = dt ? ctx.squared() : ctx;
    const double q = ctx.q;
    GramReport rep;
    rep.relation_id = rel.id;
    rep.n_max = nmax;
    rep.rhs_diag.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) rep.rhs_diag[n] = rhs_norm(rel, n);
    double rhs_min = *std::min_element(rep.rhs_diag.begin(), rep.rhs_diag.end());

    const double d = rel.d;
    auto lattice_x = [&](int n) {
        // u-family: (d^{-1} q^{-n} - d q^n)/2;  dt-family: mu = sqrt(aq) (d^{-1} q^{-2n} - d q^{2n})
        if (dt)
            return std::sqrt(rel.family.alpha * q) *
                   (std::pow(q, -2.0 * n) / d - d * std::pow(q, 2.0 * n));
        return 0.5 * (std::pow(q, -static_cast<double>(n)) / d - d * std::pow(q, static_cast<double>(n)));
    };
    auto point_values = [&](int n) {
        if (dt) return dt_all_at_mu(nmax, dd(lattice_x(n)), rel.family.alpha, ctx);
        std::vector<dd> v(static_cast<size_t>(nmax) + 1);
        for (int r = 0; r <= nmax; ++r)
            v[r] = dd(u_poly(r, lattice_x(n), rel.t1, rel.t2, bctx).value);
        return v;
    };

    // find the window: both ends must certify; term ratio beyond is < 1/2
    // (weight log-ratio ~ -(2|n|) log(1/q_b) while |f|^2 grows ~ q_b^{-2 nmax})
    int N = 2 * nmax + 8;
    auto end_scale = [&](int n) {
        PochResult w = bilateral_weight(n, d, rel.t1, rel.t2, bctx);
        auto v = point_values(n);
        double lfmax = -kInf;
        for (int r = 0; r <= nmax; ++r) {
            double dv = std::abs(static_cast<double>(v[r]));
            if (dv > 0.0) lfmax = std::max(lfmax, std::log(dv));
        }
        return w.log_abs + 2.0 * lfmax - std::log(rhs_min);
    };
    const double logeps = std::log(0.25 * ctx.eps_term);
    for (;;) {
        if (end_scale(N) < logeps && end_scale(N - 1) < logeps && end_scale(-N) < logeps &&
            end_scale(-N + 1) < logeps)
            break;
        N += std::max(4, N / 2);
        if (2 * N + 1 > ctx.max_terms)
            throw NonConverged("gram: bilateral window did not certify within max_terms");
    }
    rep.truncation_bound = 4.0 * std::exp(std::max(end_scale(N), end_scale(-N)));
    rep.support_points_used = 2L * N + 1;

    // weights and values over the fixed window
    std::vector<PochResult> w(2 * N + 1);
    std::vector<std::vector<dd>> vals(2 * N + 1);
    const bool par = exec == Exec::Parallel;
#pragma omp parallel for schedule(static) if (par)
    for (long i = 0; i <= 2L * N; ++i) {
        int n = static_cast<int>(i) - N;
        w[i] = bilateral_weight(n, d, rel.t1, rel.t2, bctx);
        vals[i] = point_values(n);
    }

    rep.entries.assign(sqr(static_cast<size_t>(nmax) + 1), 0.0);
    auto cells = upper_cells(nmax);
    long ncells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(static) if (par)
    for (long ci = 0; ci < ncells; ++ci) {
        const int r = cells[ci].n, s = cells[ci].np;
        NeumaierSum acc;
        for (long i = 0; i <= 2L * N; ++i) {
            if (w[i].sign == 0) continue;
            double fr = static_cast<double>(vals[i][r]);
            double fs = static_cast<double>(vals[i][s]);
            if (fr == 0.0 || fs == 0.0) continue;
            double lg = w[i].log_abs + std::log(std::abs(fr)) + std::log(std::abs(fs));
            if (lg < -745.0) continue;
            int sg = w[i].sign * (fr > 0.0 ? 1 : -1) * (fs > 0.0 ? 1 : -1);
            acc.add(sg * std::exp(lg));
        }
        double v = acc.value();
        rep.entries[static_cast<size_t>(r) * (nmax + 1) + s] = v;
        rep.entries[static_cast<size_t>(s) * (nmax + 1) + r] = v;
    }
    finalize_report(rep, rel);
    return rep;
}

// ---------------------------------------------------------------------------
// continuous engine: q-Meixner-Pollaczek on [-pi, pi], periodic trapezoid

double qmp_weight(double theta, double a, const QContext& ctx) {
    const double q = ctx.q;
    const double c2 = std::cos(2.0 * theta);
    const double a2 = a * a;
    // |(-e^{2 i theta};q)_inf|^2 / |(-a^2 e^{2 i theta};q^2)_inf|^2
    double lognum = 0.0, logden = 0.0;
    double qj = 1.0;
    while (3.0 * qj / ((1.0 - q) * (1.0 - std::min(0.999, 3.0 * qj))) > 0.1 * ctx.eps_term || qj == 1.0) {
        lognum += std::log1p(qj * (2.0 * c2 + qj));
        qj *= q;
        if (qj < 1e-300) break;
    }
    const double q2 = q * q;
    double q2j = 1.0;
    while (3.0 * a2 * q2j / ((1.0 - q2) * (1.0 - std::min(0.999, a2 * q2j * 3.0))) > 0.1 * ctx.eps_term ||
           q2j == 1.0) {
        logden += std::log1p(a2 * q2j * (2.0 * c2 + a2 * q2j));
        q2j *= q2;
        if (q2j < 1e-300) break;
    }
    return std::exp(lognum - logden);
}

GramReport gram_continuous(const OrthoRelation& rel, int nmax, const QContext& ctx, Exec exec) {
    GramReport rep;
    rep.relation_id = rel.id;
    rep.n_max = nmax;
    rep.rhs_diag.resize(nmax + 1);
    for (int n = 0; n <= nmax; ++n) rep.rhs_diag[n] = rhs_norm(rel, n);

    const double a = rel.family.a;
    const bool par = exec == Exec::Parallel;
    const size_t dim = sqr(static_cast<size_t>(nmax) + 1);
    std::vector<double> prev(dim, 0.0), cur(dim, 0.0);
    double diff_rel = kInf;
    int M = 64;
    auto cells = upper_cells(nmax);
    for (; M <= (1 << 15); M *= 2) {
        // theta_j = -pi + 2 pi j / M; the weight carries the double-cover 1/2
        std::vector<std::vector<dd>> vals(M);
        std::vector<double> w(M);
#pragma omp parallel for schedule(static) if (par)
        for (long j = 0; j < M; ++j) {
            double theta = -M_PI + 2.0 * M_PI * static_cast<double>(j) / M;
            w[j] = 0.5 * qmp_weight(theta, a, ctx) / M;
            vals[j] = qmp_all(nmax, std::sin(theta), a, ctx);
        }
        long ncells = static_cast<long>(cells.size());
#pragma omp parallel for schedule(static) if (par)
        for (long ci = 0; ci < ncells; ++ci) {
            const int n = cells[ci].n, np = cells[ci].np;
            dd acc(0.0);
            for (int j = 0; j < M; ++j) acc += dd(w[j]) * vals[j][n] * vals[j][np];
            double v = static_cast<double>(acc);
            cur[static_cast<size_t>(n) * (nmax + 1) + np] = v;
            cur[static_cast<size_t>(np) * (nmax + 1) + n] = v;
        }
        if (M > 64) {
            diff_rel = 0.0;
            for (int n = 0; n <= nmax; ++n)
                for (int np = n; np <= nmax; ++np) {
                    size_t idx = static_cast<size_t>(n) * (nmax + 1) + np;
                    diff_rel = std::max(diff_rel, std::abs(cur[idx] - prev[idx]) /
                                                      std::sqrt(rep.rhs_diag[n] * rep.rhs_diag[np]));
                }
            if (diff_rel <= std::max(ctx.eps_term, 5e-14)) {
                rep.support_points_used = M;
                break;
            }
        }
        prev = cur;
        rep.support_points_used = M;
    }
    rep.entries = cur;
    rep.truncation_bound = diff_rel;
    finalize_report(rep, rel);
    return rep;
}

} // namespace

// ---------------------------------------------------------------------------

const char* moment_problem_name(MomentProblem m) {
    switch (m) {
        case MomentProblem::Determinate: return "determinate";
        case MomentProblem::IndeterminateExtremal: return "indeterminate-extremal";
        case MomentProblem::IndeterminateUnknown: return "indeterminate-unknown";
    }
    return "?";
}

std::vector<std::string> relation_catalog() {
    return {"big-qjacobi", "little-qjacobi", "dual-little", "c-even", "c-odd", "c-full",
            "ct-even", "ct-odd", "ct-full", "d-even", "d-odd", "dt-even", "dt-odd",
            "u-family", "dt-family", "qmp-continuous"};
}

OrthoRelation make_relation(std::string_view id, const RelationParams& p, const QContext& ctx) {
    OrthoRelation rel{std::string(id), RelationKind::CSingle, FamilyParams::disc_ultra_c(1.0),
                      MomentProblem::Determinate, ctx};
    const double q = ctx.q;

    std::string_view base = id;
    double dparam = p.d;
    if (auto pos = id.find(':'); pos != std::string_view::npos) {
        base = id.substr(0, pos);
        std::string_view ds = id.substr(pos + 1);
        double v{};
        auto [ptr, ec] = std::from_chars(ds.data(), ds.data() + ds.size(), v);
        if (ec != std::errc() || ptr != ds.data() + ds.size())
            throw DomainError("make_relation: bad d in relation id");
        dparam = v;
    }

    auto c_kind = [&](bool tilde, bool odd, RelationKind kind) {
        rel.kind = kind;
        rel.tilde = tilde;
        rel.odd = odd;
        rel.family = tilde ? FamilyParams::disc_ultra_c_tilde(p.alpha) : FamilyParams::disc_ultra_c(p.alpha);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::Determinate;
        if (kind == RelationKind::CSigned) rel.as_printed_factor = 2.0;
    };
    auto d_kind = [&](bool tilde, bool odd) {
        rel.kind = RelationKind::DualLattice;
        rel.tilde = tilde;
        rel.odd = odd;
        rel.family = tilde ? FamilyParams::dual_disc_d_tilde(p.alpha) : FamilyParams::dual_disc_d(p.alpha);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::IndeterminateExtremal;
    };

    if (base == "c-even") c_kind(false, false, RelationKind::CSingle);
    else if (base == "c-odd") c_kind(false, true, RelationKind::CSingle);
    else if (base == "c-full") c_kind(false, false, RelationKind::CSigned);
    else if (base == "ct-even") c_kind(true, false, RelationKind::CSingle);
    else if (base == "ct-odd") c_kind(true, true, RelationKind::CSingle);
    else if (base == "ct-full") c_kind(true, false, RelationKind::CSigned);
    else if (base == "d-even") d_kind(false, false);
    else if (base == "d-odd") d_kind(false, true);
    else if (base == "dt-even") d_kind(true, false);
    else if (base == "dt-odd") d_kind(true, true);
    else if (base == "big-qjacobi") {
        rel.kind = RelationKind::BigQJ;
        rel.family = FamilyParams::big_q_jacobi(p.a, p.b, p.c);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::Determinate;
    } else if (base == "little-qjacobi") {
        rel.kind = RelationKind::LittleQJ;
        rel.family = FamilyParams::little_q_jacobi(p.a, p.b);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::Determinate;
    } else if (base == "dual-little") {
        rel.kind = RelationKind::DualLittle;
        rel.family = FamilyParams::dual_little_d(p.a, p.b);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::IndeterminateExtremal;
    } else if (base == "u-family") {
        rel.kind = RelationKind::Bilateral;
        rel.tilde = false;
        double t1 = p.t1, t2 = p.t2;
        if (t1 == 0.0 && t2 == 0.0) {
            if (!(p.a > 0.0)) throw DomainError("u-family: need t1,t2 or a > 0");
            t1 = std::sqrt(q * q * q / p.a);
            t2 = std::sqrt(q / p.a);
        }
        rel.family = FamilyParams::u_family(t1, t2);
        rel.family.validate(ctx, true);
        rel.t1 = t1;
        rel.t2 = t2;
        if (!(dparam >= q && dparam < 1.0))
            throw DomainError("u-family: require q <= d < 1");
        rel.d = dparam;
        rel.moment = MomentProblem::IndeterminateUnknown;
        rel.id = "u-family:" + format_d(dparam);
    } else if (base == "dt-family") {
        rel.kind = RelationKind::Bilateral;
        rel.tilde = true;
        double alpha = p.alpha != 0.0 ? p.alpha : p.a;
        rel.family = FamilyParams::dual_disc_d_tilde(alpha);
        rel.family.validate(ctx, true);
        rel.t1 = std::sqrt(q * q * q / alpha);
        rel.t2 = std::sqrt(q / alpha);
        if (!(dparam >= q * q && dparam < 1.0))
            throw DomainError("dt-family: require q^2 <= d < 1");
        rel.d = dparam;
        rel.moment = MomentProblem::IndeterminateUnknown;
        rel.id = "dt-family:" + format_d(dparam);
    } else if (base == "qmp-continuous") {
        rel.kind = RelationKind::Continuous;
        rel.family = FamilyParams::q_mp(p.a);
        rel.family.validate(ctx, true);
        rel.moment = MomentProblem::Determinate;
        rel.as_printed_factor = 2.0;
    } else {
        throw DomainError("make_relation: unknown relation id '" + std::string(id) + "'");
    }
    return rel;
}

double rhs_norm(const OrthoRelation& rel, int n) {
    if (n < 0) throw DomainError("rhs_norm: n >= 0");
    const QContext& ctx = rel.ctx;
    const double q = ctx.q;
    const QContext ctx2 = ctx.squared();
    auto inf = [&](double a, const QContext& c) {
        PochResult r = qpoch_inf(a, c);
        return r.value();
    };
    switch (rel.kind) {
        case RelationKind::CSingle:
        case RelationKind::CSigned: {
            const double s = rel.tilde ? -1.0 : 1.0;
            const double al = rel.family.alpha;
            int deg = rel.kind == RelationKind::CSingle ? (rel.odd ? 2 * n + 1 : 2 * n) : n;
            double G = inf(s * al * q * q * q, ctx2) / inf(q, ctx2);
            double num = (1.0 - s * al * q) * std::pow(al, deg) * qpoch(q, q, deg) *
                         std::pow(q, 0.5 * deg * (deg + 3.0));
            double den = (1.0 - s * al * std::pow(q, 2 * deg + 1)) * qpoch(s * al * q, q, deg);
            return G * num / den;
        }
        case RelationKind::DualLattice: {
            const double s = rel.tilde ? -1.0 : 1.0;
            const double al = rel.family.alpha;
            double G = inf(s * al * q * q * q, ctx2) / inf(q, ctx2);
            return G * qpoch(q * q, q * q, n) * std::pow(q, -static_cast<double>(n)) /
                   qpoch(s * al * q * q, q * q, n);
        }
        case RelationKind::BigQJ: {
            const double a = rel.family.a, b = rel.family.b, c = rel.family.c;
            double num = (1.0 - a * b * q) * qpoch(b * q, q, n) * qpoch(a * b * q / c, q, n) *
                         qpoch(q, q, n) * std::pow(-a * c, n) * std::pow(q, 0.5 * n * (n + 3.0));
            double den = (1.0 - a * b * std::pow(q, 2 * n + 1)) * qpoch(a * q, q, n) *
                         qpoch(a * b * q, q, n) * qpoch(c * q, q, n);
            return num / den;
        }
        case RelationKind::LittleQJ: {
            const double a = rel.family.a, b = rel.family.b;
            double G = inf(a * b * q * q, ctx) / inf(a * q, ctx);
            double num = (1.0 - a * b * q) * std::pow(a * q, n) * qpoch(b * q, q, n) * qpoch(q, q, n);
            double den = (1.0 - a * b * std::pow(q, 2 * n + 1)) * qpoch(a * b * q, q, n) * qpoch(a * q, q, n);
            return G * num / den;
        }
        case RelationKind::DualLittle: {
            const double a = rel.family.a, b = rel.family.b;
            double G = inf(a * b * q * q, ctx) / inf(a * q, ctx);
            return G * qpoch(q, q, n) * std::pow(a * q, -static_cast<double>(n)) / qpoch(b * q, q, n);
        }
        case RelationKind::Bilateral: {
            if (!rel.tilde) {
                double t1 = rel.t1, t2 = rel.t2;
                return qpoch(q, q, n) * std::pow(t1 / t2, n) /
                       (qpoch(-q * q / (t1 * t2), q, n) * std::pow(q, n));
            }
            // the substitution q->q^2, t1 = sqrt(q^3/a), t2 = sqrt(q/a) applied to the
            // base relation gives (q^2;q^2)_r q^{-r} / (-a q^2;q^2)_r
            const double al = rel.family.alpha;
            return qpoch(q * q, q * q, n) * std::pow(q, -static_cast<double>(n)) /
                   qpoch(-al * q * q, q * q, n);
        }
        case RelationKind::Continuous: {
            const double a2 = rel.family.a * rel.family.a;
            return 1.0 / (qpoch(q, q, n) * inf(q, ctx) * inf(-a2 * std::pow(q, n), ctx));
        }
    }
    throw DomainError("rhs_norm: unreachable");
}

GramReport gram(const OrthoRelation& rel, int n_max, const QContext& ctx, Exec exec) {
    if (n_max < 0) throw DomainError("gram: n_max >= 0");
    if (ctx.q != rel.ctx.q) throw DomainError("gram: QContext q differs from the relation's");
    switch (rel.kind) {
        case RelationKind::CSingle:
        case RelationKind::CSigned:
        case RelationKind::LittleQJ:
        case RelationKind::BigQJ:
            return gram_discrete(rel, n_max, ctx, exec);
        case RelationKind::DualLattice:
        case RelationKind::DualLittle:
            return gram_logdiscrete(rel, n_max, ctx, exec);
        case RelationKind::Bilateral:
            return gram_bilateral(rel, n_max, ctx, exec);
        case RelationKind::Continuous:
            return gram_continuous(rel, n_max, ctx, exec);
    }
    throw DomainError("gram: unreachable");
}

GramReport verify(const OrthoRelation& rel, int n_max, double tol, const QContext& ctx, Exec exec) {
    GramReport rep = gram(rel, n_max, ctx, exec);
    rep.tol = tol;
    rep.pass = rep.max_offdiag_rel <= tol && rep.max_diag_rel_err <= tol;
    return rep;
}

double discrete_weight(const OrthoRelation& rel, int s) {
    const double q = rel.ctx.q;
    switch (rel.kind) {
        case RelationKind::CSingle:
        case RelationKind::CSigned: {
            double w = 1.0;
            for (int j = 0; j < s; ++j) w *= c_weight_ratio(rel.family.alpha, rel.tilde, q, j);
            return rel.kind == RelationKind::CSigned ? 0.5 * w : w;
        }
        case RelationKind::LittleQJ:
            return qpoch(rel.family.b * q, q, s) * std::pow(rel.family.a * q, s) / qpoch(q, q, s);
        case RelationKind::DualLittle: {
            const double a = rel.family.a, b = rel.family.b;
            return (1.0 - a * b * std::pow(q, 2 * s + 1)) * qpoch(a * b * q, q, s) * qpoch(b * q, q, s) *
                   std::pow(a, s) * std::pow(q, static_cast<double>(s) * s) /
                   ((1.0 - a * b * q) * qpoch(a * q, q, s) * qpoch(q, q, s));
        }
        case RelationKind::DualLattice: {
            const double sg = rel.tilde ? -1.0 : 1.0;
            const double al = rel.family.alpha;
            int m = rel.odd ? 2 * s + 1 : 2 * s;
            double expo = rel.odd ? s * (2.0 * s + 1.0) : s * (2.0 * s - 1.0);
            return (1.0 - sg * al * std::pow(q, 2 * m + 1)) * qpoch(sg * al * q, q, m) *
                   std::pow(q, expo) / ((1.0 - sg * al * q) * qpoch(q, q, m));
        }
        default:
            throw DomainError("discrete_weight: not a pointwise-discrete relation");
    }
}

double support_abscissa(const OrthoRelation& rel, int s) {
    const double q = rel.ctx.q;
    switch (rel.kind) {
        case RelationKind::CSingle:
        case RelationKind::CSigned:
            return std::sqrt(rel.family.alpha) * std::pow(q, s + 1);
        case RelationKind::LittleQJ:
            return std::pow(q, s);
        case RelationKind::DualLittle:
            return mu(s, rel.family.a * rel.family.b, rel.ctx).mu;
        case RelationKind::DualLattice: {
            int m = rel.odd ? 2 * s + 1 : 2 * s;
            return mu(m, rel.tilde ? -rel.family.alpha : rel.family.alpha, rel.ctx).mu;
        }
        case RelationKind::Bilateral: {
            if (rel.tilde)
                return std::sqrt(rel.family.alpha * q) *
                       (std::pow(q, -2.0 * s) / rel.d - rel.d * std::pow(q, 2.0 * s));
            return 0.5 * (std::pow(q, -static_cast<double>(s)) / rel.d -
                          rel.d * std::pow(q, static_cast<double>(s)));
        }
        default:
            throw DomainError("support_abscissa: continuous relation has no lattice");
    }
}

PochResult bilateral_weight_at(const OrthoRelation& rel, int n) {
    if (rel.kind != RelationKind::Bilateral)
        throw DomainError("bilateral_weight_at: not a bilateral relation");
    const QContext bctx = rel.tilde ? rel.ctx.squared() : rel.ctx;
    return bilateral_weight(n, rel.d, rel.t1, rel.t2, bctx);
}

double continuous_weight(const OrthoRelation& rel, double theta) {
    if (rel.kind != RelationKind::Continuous)
        throw DomainError("continuous_weight: not the continuous relation");
    return qmp_weight(theta, rel.family.a, rel.ctx);
}

ParityWitness mixed_parity_witness(double alpha, bool tilde, int k, int kp, const QContext& ctx) {
    RelationParams p;
    p.alpha = alpha;
    OrthoRelation even = make_relation(tilde ? "ct-even" : "c-even", p, ctx);
    OrthoRelation odd = make_relation(tilde ? "ct-odd" : "c-odd", p, ctx);
    const double q = ctx.q;
    const double ra = std::sqrt(alpha);
    const int degE = 2 * k, degO = 2 * kp + 1;
    const int degmax = std::max(degE, degO);

    // fixed generous truncation: the weights decay like q^s and the integrand
    // is bounded by the probe sup
    int S = 64;
    while (std::pow(q, S) > 1e-40 && S < ctx.max_terms) S += 32;
    double I1 = 0.0, I2m = 0.0;
    {
        dd accP(0.0), accM(0.0);
        double w = 1.0;
        for (int s = 0; s <= S; ++s) {
            double x = ra * std::pow(q, s + 1);
            auto vP = tilde ? ct_all(degmax, dd(x), alpha, ctx) : c_all(degmax, dd(x), alpha, ctx);
            auto vM = tilde ? ct_all(degmax, dd(-x), alpha, ctx) : c_all(degmax, dd(-x), alpha, ctx);
            accP += dd(w) * vP[degE] * vP[degO];
            accM += dd(w) * vM[degE] * vM[degO];
            w *= c_weight_ratio(alpha, tilde, q, s);
        }
        I1 = static_cast<double>(accP);
        I2m = static_cast<double>(accM);
    }
    ParityWitness wit;
    wit.plus_sum = I1;
    wit.minus_sum = I2m;
    wit.cancellation_rel = I1 == 0.0 ? std::abs(I2m) : std::abs(I1 + I2m) / std::abs(I1);
    wit.single_sign_rel = std::abs(I1) / std::sqrt(rhs_norm(even, k) * rhs_norm(odd, kp));
    return wit;
}

} // namespace qortho
