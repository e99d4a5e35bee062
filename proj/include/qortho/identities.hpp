#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qortho/families.hpp"
#include "qortho/qcore.hpp"

namespace qortho {

struct IdentityCheck {
    std::string id;
    double residual = 0.0;   // max relative deviation over the fixed grid
    std::string grid;        // enumerated grid description
    bool pass = false;
    double tol = 0.0;
};

// Every check runs on a fixed, enumerated grid; k-depth adapts to q so the
// terminating-series condition number stays within double-double reach.

IdentityCheck check_prop1(double alpha, const QContext& ctx);
IdentityCheck check_prop2(double alpha, const QContext& ctx);
IdentityCheck check_singh(const QContext& ctx);
IdentityCheck check_eq16(const QContext& ctx);
IdentityCheck check_eq19(double alpha, const QContext& ctx);
IdentityCheck check_eq36(double a, double c_shift, const QContext& ctx);
IdentityCheck check_lattice39(double a, double d, const QContext& ctx);
// family: DiscUltraC / DiscUltraCTilde / QMeixnerPollaczek
IdentityCheck check_favard(const FamilyParams& p, int n_max, const QContext& ctx);
// q_list is fixed {0.9, 0.99, 0.999}; pass iff errors decrease and e(0.999) < 0.01
IdentityCheck check_limit_q1(double alpha_exp, int n, double x);
IdentityCheck check_parity(double alpha, bool tilde, const QContext& ctx);

// catalog ids: prop1 prop2 singh15 eq16 eq19 eq36 lattice39 favard:<c|ctilde|qmp>
// limit-q1 parity
struct IdentityParams {
    double alpha = 0.5;
    double a = 0.8;
    double c_shift = 1.0;
    double d = 0.0;       // 0: pick max(q, 0.7)
    int nmax = 200;
    double alpha_exp = 1.0;
    int n = 4;
    double x = 0.3;
};

std::vector<std::string> identity_catalog();
IdentityCheck run_identity(std::string_view id, const IdentityParams& p, const QContext& ctx);

} // namespace qortho
