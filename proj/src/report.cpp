#include "qortho/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace qortho {

namespace {

std::string fmtnum(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    return out;
}

class Json {
  public:
    void key(const std::string& k) { pre(); s_ += '"' + escape(k) + "\":"; keyed_ = true; }
    void str(const std::string& v) { pre(); s_ += '"' + escape(v) + '"'; }
    void num(double v) { pre(); s_ += fmtnum(v); }
    void numi(long v) { pre(); s_ += std::to_string(v); }
    void boolean(bool v) { pre(); s_ += v ? "true" : "false"; }
    void begin_obj() { pre(); s_ += '{'; first_ = true; }
    void end_obj() { s_ += '}'; first_ = false; }
    void begin_arr() { pre(); s_ += '['; first_ = true; }
    void end_arr() { s_ += ']'; first_ = false; }
    const std::string& out() const { return s_; }

  private:
    void pre() {
        if (keyed_) { keyed_ = false; return; }
        if (!first_) s_ += ',';
        first_ = false;
    }
    std::string s_;
    bool first_ = true;
    bool keyed_ = false;
};

void gram_fields(Json& j, const GramReport& g, const std::string& moment) {
    j.key("id"); j.str(g.relation_id);
    if (!moment.empty()) { j.key("moment_problem"); j.str(moment); }
    j.key("n_max"); j.numi(g.n_max);
    j.key("max_offdiag_rel"); j.num(g.max_offdiag_rel);
    j.key("max_diag_rel_err"); j.num(g.max_diag_rel_err);
    j.key("truncation_bound"); j.num(g.truncation_bound);
    j.key("support_points"); j.numi(g.support_points_used);
    if (g.as_printed_ratio_min != 0.0 || g.as_printed_ratio_max != 0.0) {
        j.key("as_printed_ratio_min"); j.num(g.as_printed_ratio_min);
        j.key("as_printed_ratio_max"); j.num(g.as_printed_ratio_max);
    }
    if (g.tol > 0.0) { j.key("tol"); j.num(g.tol); }
    j.key("pass"); j.boolean(g.pass);
}

void identity_fields(Json& j, const IdentityCheck& c) {
    j.key("id"); j.str(c.id);
    j.key("residual"); j.num(c.residual);
    j.key("tol"); j.num(c.tol);
    j.key("grid"); j.str(c.grid);
    j.key("pass"); j.boolean(c.pass);
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct RelSpec {
    std::string id;
    RelationParams params;
    std::string desc;
    int nmax;
    double tol;
};

// the 3-point parameter grids of the default suite; all q-adaptive choices
// stay strictly inside each relation's domain
std::vector<RelSpec> default_relation_grid(double q) {
    std::vector<RelSpec> v;
    auto add = [&](const std::string& id, RelationParams p, std::string d, int nmax, double tol) {
        v.push_back({id, p, std::move(d), nmax, tol});
    };
    const double qi2 = 1.0 / (q * q);
    const double al3 = 0.9 * qi2;
    for (const char* id : {"c-even", "c-odd", "c-full", "d-even", "d-odd"}) {
        for (double al : {0.5, std::min(1.5, 0.6 * qi2), al3}) {
            RelationParams p;
            p.alpha = al;
            add(id, p, "alpha=" + fmtnum(al), 8, 1e-8);
        }
    }
    for (const char* id : {"ct-even", "ct-odd", "ct-full", "dt-even", "dt-odd"}) {
        for (double al : {0.5, 2.0, 10.0}) {
            RelationParams p;
            p.alpha = al;
            add(id, p, "alpha=" + fmtnum(al), 8, 1e-8);
        }
    }
    {
        const double amax = 0.9 / q;
        const double abc[][3] = {{0.5, 0.7, -0.4}, {std::min(0.9, amax), std::min(0.9, amax), -0.6},
                                 {std::min(1.2, amax), 0.4, -1.5}};
        for (auto& t : abc) {
            RelationParams p;
            p.a = t[0]; p.b = t[1]; p.c = t[2];
            add("big-qjacobi", p,
                "a=" + fmtnum(t[0]) + " b=" + fmtnum(t[1]) + " c=" + fmtnum(t[2]), 8, 1e-8);
        }
        const double ab[][2] = {{0.5, 0.5}, {std::min(0.9, amax), 0.3}, {std::min(1.1, amax), -0.8}};
        for (auto& t : ab) {
            RelationParams p;
            p.a = t[0]; p.b = t[1];
            add("little-qjacobi", p, "a=" + fmtnum(t[0]) + " b=" + fmtnum(t[1]), 8, 1e-8);
            add("dual-little", p, "a=" + fmtnum(t[0]) + " b=" + fmtnum(t[1]), 8, 1e-8);
        }
    }
    for (double d : {q, std::sqrt(q), 0.95}) {
        RelationParams p;
        p.a = 1.0;
        p.d = d;
        add("u-family", p, "a=1 d=" + fmtnum(d), 5, 1e-7);
        add("dt-family", p, "a=1 d=" + fmtnum(d), 5, 1e-7);
    }
    for (double a : {0.3, 0.7, 0.95}) {
        RelationParams p;
        p.a = a;
        add("qmp-continuous", p, "a=" + fmtnum(a), 5, 1e-6);
    }
    return v;
}

} // namespace

Report run_report(const RunConfig& cfg, bool include_relations, bool include_identities, Exec exec) {
    Report rep;
    rep.tool_version = kToolVersion;
    rep.config = cfg;
    if (cfg.timestamp) rep.timestamp = iso_now();
    const QContext ctx = cfg.context();
    bool ok = true;

    if (include_relations) {
        for (const RelSpec& spec : default_relation_grid(ctx.q)) {
            OrthoRelation rel = make_relation(spec.id, spec.params, ctx);
            RelationRow row;
            row.gram = verify(rel, spec.nmax, spec.tol, ctx, exec);
            row.params_desc = spec.desc;
            row.moment = moment_problem_name(rel.moment);
            ok = ok && row.gram.pass;
            rep.relations.push_back(std::move(row));
        }
    }
    if (include_identities) {
        auto push = [&](IdentityCheck c, bool expect_fail = false) {
            ok = ok && (c.pass != expect_fail);
            rep.identities.push_back({std::move(c), expect_fail});
        };
        for (double al : {0.5, 1.7}) push(check_prop1(al, ctx));
        for (double al : {0.5, 1.7}) push(check_prop2(al, ctx));
        push(check_singh(ctx));
        push(check_eq16(ctx));
        for (double al : {0.5, 0.7}) push(check_eq19(al, ctx));
        for (double cs : {0.5, 1.0, 1.3, 2.0}) push(check_eq36(0.8, cs, ctx));
        push(check_lattice39(1.0, std::max(ctx.q, 0.7), ctx));
        push(check_lattice39(0.5, 0.95, ctx));
        push(check_favard(FamilyParams::disc_ultra_c(0.5 / (ctx.q * ctx.q)), 200, ctx));
        // deliberate out-of-domain case: expected to violate Favard positivity
        push(check_favard(FamilyParams::disc_ultra_c(1.01 / (ctx.q * ctx.q)), 200, ctx), true);
        for (double al : {0.5, 2.0, 10.0}) push(check_favard(FamilyParams::disc_ultra_c_tilde(al), 200, ctx));
        for (double a : {-3.0, 0.5, 5.0}) push(check_favard(FamilyParams::q_mp(a), 200, ctx));
        for (double ae : {0.5, 1.0})
            for (int n = 0; n <= 4; ++n) {
                // fold the x-grid into one row per (n, alpha)
                IdentityCheck agg;
                agg.id = "limit-q1";
                agg.pass = true;
                agg.tol = 0.01;
                for (double x : {0.0, 0.3, -0.3}) {
                    IdentityCheck c = check_limit_q1(ae, n, x);
                    agg.residual = std::max(agg.residual, c.residual);
                    agg.pass = agg.pass && c.pass;
                }
                char buf[96];
                std::snprintf(buf, sizeof buf, "n=%d, alpha=%g, x in {0, 0.3, -0.3}", n, ae);
                agg.grid = buf;
                push(agg);
            }
        for (double al : {0.5, 2.0}) {
            IdentityParams p;
            p.alpha = al;
            push(run_identity("parity", p, ctx));
        }
    }
    rep.overall_pass = ok;
    return rep;
}

std::string json_number(double v) { return fmtnum(v); }

std::string gram_to_json(const GramReport& g, const std::string& moment, bool include_matrix) {
    Json j;
    j.begin_obj();
    j.key("schema_version"); j.numi(1);
    gram_fields(j, g, moment);
    j.key("rhs_diag");
    j.begin_arr();
    for (double v : g.rhs_diag) j.num(v);
    j.end_arr();
    if (include_matrix) {
        j.key("entries");
        j.begin_arr();
        for (int n = 0; n <= g.n_max; ++n) {
            j.begin_arr();
            for (int np = 0; np <= g.n_max; ++np) j.num(g.entry(n, np));
            j.end_arr();
        }
        j.end_arr();
    }
    j.end_obj();
    return j.out() + "\n";
}

std::string identity_to_json(const IdentityCheck& c) {
    Json j;
    j.begin_obj();
    j.key("schema_version"); j.numi(1);
    identity_fields(j, c);
    j.end_obj();
    return j.out() + "\n";
}

std::string eval_to_json(const std::string& family, int n, double x, const EvalResult& r) {
    Json j;
    j.begin_obj();
    j.key("schema_version"); j.numi(1);
    j.key("family"); j.str(family);
    j.key("n"); j.numi(n);
    j.key("x"); j.num(x);
    j.key("value"); j.num(r.value);
    j.key("method"); j.str(r.method == Method::Series ? "series" : "recurrence");
    j.key("est_error"); j.num(r.est_error);
    j.end_obj();
    return j.out() + "\n";
}

std::string to_json(const Report& r) {
    Json j;
    j.begin_obj();
    j.key("schema_version"); j.numi(r.schema_version);
    j.key("tool_version"); j.str(r.tool_version);
    if (!r.timestamp.empty()) { j.key("timestamp"); j.str(r.timestamp); }
    j.key("config");
    j.begin_obj();
    j.key("q"); j.num(r.config.q);
    j.key("eps_term"); j.num(r.config.eps_term);
    j.key("max_terms"); j.numi(r.config.max_terms);
    j.end_obj();
    j.key("relations");
    j.begin_arr();
    for (const RelationRow& row : r.relations) {
        j.begin_obj();
        gram_fields(j, row.gram, row.moment);
        j.key("params"); j.str(row.params_desc);
        j.end_obj();
    }
    j.end_arr();
    j.key("identities");
    j.begin_arr();
    for (const IdentityRow& row : r.identities) {
        j.begin_obj();
        identity_fields(j, row.check);
        if (row.expect_fail) { j.key("expected_fail"); j.boolean(true); }
        j.end_obj();
    }
    j.end_arr();
    j.key("overall_pass"); j.boolean(r.overall_pass);
    j.end_obj();
    return j.out() + "\n";
}

std::string to_csv(const Report& r) {
    std::ostringstream os;
    os << "kind,id,params,metric,aux_metric,tol,pass\n";
    for (const RelationRow& row : r.relations) {
        os << "relation," << row.gram.relation_id << "," << row.params_desc << ","
           << fmtnum(row.gram.max_offdiag_rel) << "," << fmtnum(row.gram.max_diag_rel_err) << ","
           << fmtnum(row.gram.tol) << "," << (row.gram.pass ? "true" : "false") << "\n";
    }
    for (const IdentityRow& row : r.identities) {
        os << "identity," << row.check.id << "," << (row.expect_fail ? "expected-fail" : "") << ","
           << fmtnum(row.check.residual) << ",," << fmtnum(row.check.tol) << ","
           << (row.check.pass ? "true" : "false") << "\n";
    }
    os << "overall,,,,," << "," << (r.overall_pass ? "true" : "false") << "\n";
    return os.str();
}

std::string to_text(const Report& r) {
    std::ostringstream os;
    os << "qortho report (tool " << r.tool_version << ", q=" << fmtnum(r.config.q) << ")\n";
    if (!r.timestamp.empty()) os << "generated: " << r.timestamp << "\n";
    if (!r.relations.empty()) {
        os << "\nrelations:\n";
        for (const RelationRow& row : r.relations) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "  %-22s %-28s offdiag %.3e  diag %.3e  [%s]\n",
                          row.gram.relation_id.c_str(), row.params_desc.c_str(),
                          row.gram.max_offdiag_rel, row.gram.max_diag_rel_err,
                          row.gram.pass ? "pass" : "FAIL");
            os << buf;
        }
    }
    if (!r.identities.empty()) {
        os << "\nidentities:\n";
        for (const IdentityRow& row : r.identities) {
            char buf[200];
            std::snprintf(buf, sizeof buf, "  %-22s residual %.3e  [%s]%s\n", row.check.id.c_str(),
                          row.check.residual,
                          row.check.pass ? "pass" : "FAIL",
                          row.expect_fail ? " (expected fail)" : "");
            os << buf;
        }
    }
    os << "\noverall: " << (r.overall_pass ? "pass" : "FAIL") << "\n";
    return os.str();
}

} // namespace qortho
