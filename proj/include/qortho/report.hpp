#pragma once

#include <string>
#include <vector>

#include "qortho/identities.hpp"
#include "qortho/ortho.hpp"

namespace qortho {

struct RunConfig {
    double q = 0.5;
    double eps_term = 1e-12;
    int max_terms = 4096;
    std::string output_format = "json";  // json | csv | text
    std::string out_path;                // empty: stdout
    bool timestamp = true;

    QContext context() const { return QContext(q, eps_term, max_terms); }
};

struct RelationRow {
    GramReport gram;
    std::string params_desc;
    std::string moment;
};

struct IdentityRow {
    IdentityCheck check;
    bool expect_fail = false;  // the deliberate out-of-domain Favard case
};

struct Report {
    std::string tool_version;
    int schema_version = 1;
    RunConfig config;
    std::string timestamp;  // empty when suppressed
    std::vector<RelationRow> relations;
    std::vector<IdentityRow> identities;
    bool overall_pass = false;
};

inline constexpr const char* kToolVersion = "1.0.0";

// Full default suite at cfg.q: every catalog relation on its 3-point parameter
// grid, every identity on its fixed grid.
Report run_report(const RunConfig& cfg, bool include_relations, bool include_identities,
                  Exec exec = Exec::Parallel);

std::string to_json(const Report& r);
std::string to_csv(const Report& r);
std::string to_text(const Report& r);

// single-record emitters for the CLI subcommands
std::string json_number(double v);  // decimal, 17 significant digits
std::string gram_to_json(const GramReport& g, const std::string& moment, bool include_matrix);
std::string identity_to_json(const IdentityCheck& c);
std::string eval_to_json(const std::string& family, int n, double x, const EvalResult& r);

} // namespace qortho
