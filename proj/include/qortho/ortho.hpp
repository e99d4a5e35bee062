#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qortho/families.hpp"
#include "qortho/qcore.hpp"

namespace qortho {

enum class MomentProblem { Determinate, IndeterminateExtremal, IndeterminateUnknown };
enum class Exec { Serial, Parallel };

enum class RelationKind {
    CSingle,      // c-even, c-odd, ct-even, ct-odd
    CSigned,      // c-full, ct-full (weights carry the 1/2 epsilon-average)
    BigQJ,        // two-branch support a q^{s+1} and c q^{s+1}
    LittleQJ,     // support q^s
    DualLittle,   // lattice mu(m;ab)
    DualLattice,  // d-even, d-odd, dt-even, dt-odd
    Bilateral,    // u-family:<d>, dt-family:<d>
    Continuous,   // qmp-continuous
};

const char* moment_problem_name(MomentProblem m);

// Free-form parameter bag for make_relation; only the fields the chosen
// relation needs are read.
struct RelationParams {
    double alpha = 0.0;
    double a = 0.0, b = 0.0, c = 0.0;
    double t1 = 0.0, t2 = 0.0;
    double d = 0.0;
};

struct OrthoRelation {
    std::string id;
    RelationKind kind;
    FamilyParams family;
    MomentProblem moment;
    QContext ctx;
    bool tilde = false;   // the imaginary-parameter variants
    bool odd = false;     // odd sublattice / odd-degree subfamily
    double d = 0.0;       // bilateral lattice parameter
    double t1 = 0.0, t2 = 0.0;
    // printed right-hand side = as_printed_factor * (per-point weight integral
    // with the corrected weights); 2 where the double-cover 1/2 applies
    double as_printed_factor = 1.0;
};

// Stable catalog identifiers (bilateral ids take a ":<d>" suffix or --d).
std::vector<std::string> relation_catalog();

OrthoRelation make_relation(std::string_view id, const RelationParams& p, const QContext& ctx);

// Closed-form diagonal normalization; strictly positive inside the domain.
double rhs_norm(const OrthoRelation& rel, int n);

struct GramReport {
    std::string relation_id;
    int n_max = 0;
    std::vector<double> entries;    // (n_max+1)^2, row-major, symmetric
    std::vector<double> rhs_diag;
    double max_offdiag_rel = 0.0;   // max |entry| / sqrt(rhs_n rhs_n')
    double max_diag_rel_err = 0.0;
    double truncation_bound = 0.0;  // certified, relative to the rhs scale
    long support_points_used = 0;
    // as-printed diagnostic (relations carrying the 1/2 correction): range of
    // as_printed_factor * diag / rhs over n; empty relations report 0
    double as_printed_ratio_min = 0.0;
    double as_printed_ratio_max = 0.0;
    bool pass = false;
    double tol = 0.0;

    double entry(int n, int np) const { return entries[static_cast<size_t>(n) * (n_max + 1) + np]; }
};

GramReport gram(const OrthoRelation& rel, int n_max, const QContext& ctx, Exec exec = Exec::Parallel);
GramReport verify(const OrthoRelation& rel, int n_max, double tol, const QContext& ctx,
                  Exec exec = Exec::Parallel);

// Weight/support accessors (tests and the CLI poke at these).
double discrete_weight(const OrthoRelation& rel, int s);     // discrete kinds, branch 0
double support_abscissa(const OrthoRelation& rel, int s);    // abscissa for weight index s
PochResult bilateral_weight_at(const OrthoRelation& rel, int n);
double continuous_weight(const OrthoRelation& rel, double theta);

// Mixed-parity diagnostics on the C / C~ support (the signed-lattice argument):
// I1 = sum over +sqrt(a)q^{s+1}, I2m = sum over the mirrored points, of
// w_s C_{2k} C_{2k'+1}; exact cancellation I1 + I2m = 0 is the orthogonality.
struct ParityWitness {
    double plus_sum = 0.0;       // I1
    double minus_sum = 0.0;      // the epsilon = -1 partial sum (= -I2 of the paper)
    double cancellation_rel = 0.0;  // |I1 + minus_sum| / |I1|
    double single_sign_rel = 0.0;   // |I1| / sqrt(rhs_{2k} rhs_{2k'+1})
};
ParityWitness mixed_parity_witness(double alpha, bool tilde, int k, int kp, const QContext& ctx);

} // namespace qortho
