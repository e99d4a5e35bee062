// qortho: evaluate the q-orthogonal families, verify orthogonality relations
// and transformation identities, and emit machine-readable reports.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qortho/report.hpp"

namespace {

using namespace qortho;

struct GlobalOpts {
    double q = 0.5;
    std::optional<double> eps;
    std::optional<int> max_terms;
    std::string format = "json";
    std::string out_path;
    bool no_timestamp = false;
    bool serial = false;
};

RunConfig make_config(const GlobalOpts& g) {
    RunConfig cfg;
    cfg.q = g.q;
    cfg.eps_term = 1e-12;
    cfg.max_terms = 4096;
    // precedence: flag > environment > default
    if (const char* e = std::getenv("QORTHO_EPS")) cfg.eps_term = std::atof(e);
    if (const char* e = std::getenv("QORTHO_MAXTERMS")) cfg.max_terms = std::atoi(e);
    if (g.eps) cfg.eps_term = *g.eps;
    if (g.max_terms) cfg.max_terms = *g.max_terms;
    cfg.output_format = g.format;
    cfg.out_path = g.out_path;
    cfg.timestamp = !g.no_timestamp;
    return cfg;
}

int emit(const GlobalOpts& g, const std::string& payload) {
    if (!g.out_path.empty()) {
        std::ofstream f(g.out_path, std::ios::binary);
        if (!f) {
            std::cerr << "qortho: cannot open " << g.out_path << "\n";
            return 2;
        }
        f << payload;
        return 0;
    }
    std::cout << payload;
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-orthogonal polynomial families: evaluation and orthogonality verification"};
    app.require_subcommand(1);

    GlobalOpts g;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--q", g.q, "base q in (0,1)");
        sub->add_option("--eps", g.eps, "series/product truncation tolerance");
        sub->add_option("--max-terms", g.max_terms, "cap on summed/multiplied terms");
        sub->add_option("--format", g.format, "json | csv | text")
            ->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_option("--out", g.out_path, "write output to file");
        sub->add_flag("--no-timestamp", g.no_timestamp, "suppress the timestamp field");
        sub->add_flag("--serial", g.serial, "disable the OpenMP parallel engine");
    };

    // ---- eval
    auto* eval = app.add_subcommand("eval", "evaluate one polynomial");
    std::string family = "c";
    int n = 0;
    double x = 0.0, alpha = 0.5, a = 0.5, b = 0.5, c = -0.5, t1 = 0.0, t2 = 0.0;
    std::string method = "default";
    eval->add_option("--family", family,
                     "big | little | c | ctilde | dualbig | duallittle | d | dtilde | u | qmp")
        ->required();
    eval->add_option("--n", n, "degree")->required();
    eval->add_option("--x", x, "argument (x, lattice coordinate, sinh xi, or theta)");
    eval->add_option("--alpha", alpha, "family parameter alpha");
    eval->add_option("--a", a, "parameter a");
    eval->add_option("--b", b, "parameter b");
    eval->add_option("--c", c, "parameter c");
    eval->add_option("--t1", t1, "parameter t1");
    eval->add_option("--t2", t2, "parameter t2");
    eval->add_option("--method", method, "series | recurrence");
    add_common(eval);

    // ---- gram
    auto* gramc = app.add_subcommand("gram", "compute and verify one Gram matrix");
    std::string relation;
    int nmax = 8;
    double tol = 1e-8, dpar = 0.0;
    bool matrix = false;
    gramc->add_option("--relation", relation, "relation id from the catalog")->required();
    gramc->add_option("--nmax", nmax, "max index");
    gramc->add_option("--tol", tol, "pass tolerance");
    gramc->add_option("--alpha", alpha, "family parameter alpha");
    gramc->add_option("--a", a, "parameter a");
    gramc->add_option("--b", b, "parameter b");
    gramc->add_option("--c", c, "parameter c");
    gramc->add_option("--t1", t1, "parameter t1");
    gramc->add_option("--t2", t2, "parameter t2");
    gramc->add_option("--d", dpar, "bilateral lattice parameter d");
    gramc->add_flag("--matrix", matrix, "include the full entries matrix");
    add_common(gramc);

    // ---- identity
    auto* idc = app.add_subcommand("identity", "run one identity check");
    std::string ident;
    double c_shift = 1.0, alpha_exp = 1.0;
    int favard_nmax = 200;
    idc->add_option("--id", ident, "identity id from the catalog")->required();
    idc->add_option("--alpha", alpha, "family parameter alpha");
    idc->add_option("--a", a, "parameter a");
    idc->add_option("--c-shift", c_shift, "the c replacement parameter of the quadratic identity");
    idc->add_option("--d", dpar, "lattice parameter d");
    idc->add_option("--nmax", favard_nmax, "Favard scan depth");
    idc->add_option("--alpha-exp", alpha_exp, "exponent: the limit check uses a = q^alpha_exp");
    idc->add_option("--n", n, "degree for the limit check");
    idc->add_option("--x", x, "argument for the limit check");
    add_common(idc);

    // ---- report
    auto* repc = app.add_subcommand("report", "run the full verification suite");
    bool all = false;
    std::string only;
    repc->add_flag("--all", all, "run relations and identities (default)");
    repc->add_option("--only", only, "relations | identities")
        ->check(CLI::IsMember({"relations", "identities"}));
    add_common(repc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = make_config(g);
        const QContext ctx = cfg.context();
        const Exec exec = g.serial ? Exec::Serial : Exec::Parallel;

        if (eval->parsed()) {
            Method m = method == "recurrence" ? Method::Recurrence : Method::Series;
            EvalResult r{0.0, Method::Series, 0.0};
            if (family == "big")
                r = big_q_jacobi(n, x, FamilyParams::big_q_jacobi(a, b, c), ctx,
                                 method == "default" ? Method::Series : m);
            else if (family == "little")
                r = little_q_jacobi(n, x, FamilyParams::little_q_jacobi(a, b), ctx,
                                    method == "default" ? Method::Series : m);
            else if (family == "c")
                r = disc_ultra_c(n, x, alpha, ctx, method == "default" ? Method::Recurrence : m);
            else if (family == "ctilde")
                r = disc_ultra_c_tilde(n, x, alpha, ctx, method == "default" ? Method::Recurrence : m);
            else if (family == "dualbig")
                r = dual_big_d(n, static_cast<int>(x), FamilyParams::dual_big_d(a, b, c), ctx);
            else if (family == "duallittle")
                r = dual_little_d(n, static_cast<int>(x), FamilyParams::dual_little_d(a, b), ctx);
            else if (family == "d")
                r = dual_disc_d(n, x, alpha, ctx, method == "default" ? Method::Series : m);
            else if (family == "dtilde")
                r = dual_disc_d_tilde(n, x, alpha, ctx, method == "default" ? Method::Series : m);
            else if (family == "u") {
                if (t1 == 0.0 && t2 == 0.0) {
                    t1 = std::sqrt(ctx.q * ctx.q * ctx.q / a);
                    t2 = std::sqrt(ctx.q / a);
                }
                r = u_poly(n, x, t1, t2, ctx);
            } else if (family == "qmp")
                r = q_mp_tilde(n, x, a, ctx, method == "default" ? Method::Series : m);
            else
                throw DomainError("eval: unknown family '" + family + "'");
            if (cfg.output_format == "text") {
                char buf[160];
                std::snprintf(buf, sizeof buf, "%s n=%d x=%.17g value=%.17g (%s)\n", family.c_str(),
                              n, x, r.value, r.method == Method::Series ? "series" : "recurrence");
                return emit(g, buf);
            }
            if (cfg.output_format == "csv") {
                return emit(g, family + "," + std::to_string(n) + "," + json_number(x) + "," +
                                   json_number(r.value) + "\n");
            }
            return emit(g, eval_to_json(family, n, x, r));
        }

        if (gramc->parsed()) {
            RelationParams p;
            p.alpha = alpha; p.a = a; p.b = b; p.c = c; p.t1 = t1; p.t2 = t2; p.d = dpar;
            OrthoRelation rel = make_relation(relation, p, ctx);
            GramReport rep = verify(rel, nmax, tol, ctx, exec);
            int rc = emit(g, gram_to_json(rep, moment_problem_name(rel.moment), matrix));
            if (rc != 0) return rc;
            return rep.pass ? 0 : 1;
        }

        if (idc->parsed()) {
            IdentityParams p;
            p.alpha = alpha; p.a = a; p.c_shift = c_shift; p.d = dpar;
            p.nmax = favard_nmax; p.alpha_exp = alpha_exp; p.n = n; p.x = x;
            // favard:<family> shorthand ids
            std::string id = ident;
            if (id == "favard:ctilde" || id == "favard:c") p.alpha = alpha;
            IdentityCheck chk = run_identity(id, p, ctx);
            int rc = emit(g, identity_to_json(chk));
            if (rc != 0) return rc;
            return chk.pass ? 0 : 1;
        }

        if (repc->parsed()) {
            bool want_rel = only.empty() || only == "relations";
            bool want_id = only.empty() || only == "identities";
            Report rep = run_report(cfg, want_rel, want_id, exec);
            std::string payload = cfg.output_format == "csv"
                                      ? to_csv(rep)
                                      : cfg.output_format == "text" ? to_text(rep) : to_json(rep);
            int rc = emit(g, payload);
            if (rc != 0) return rc;
            return rep.overall_pass ? 0 : 1;
        }
    } catch (const DomainError& e) {
        std::cerr << "qortho: domain error: " << e.what() << "\n";
        return 2;
    } catch (const DenominatorPole& e) {
        std::cerr << "qortho: " << e.what() << "\n";
        return 3;
    } catch (const NonConverged& e) {
        std::cerr << "qortho: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "qortho: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
