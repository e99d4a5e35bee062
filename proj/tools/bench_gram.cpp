// Wall-time comparison of the serial reference engine against the OpenMP one
// on the heavier Gram workloads.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qortho/ortho.hpp"

using namespace qortho;

namespace {

double time_ms(const OrthoRelation& rel, int nmax, const QContext& ctx, Exec exec, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        GramReport rep = gram(rel, nmax, ctx, exec);
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
        if (rep.max_offdiag_rel > 1e-6) std::printf("  (warning: offdiag %.2e)\n", rep.max_offdiag_rel);
    }
    return best;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP: %d threads\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled in this build\n");
#endif
    QContext ctx(0.7, 1e-12, 8192);
    struct Case {
        const char* id;
        RelationParams p;
        int nmax;
    };
    RelationParams pc;   pc.alpha = 0.5;
    RelationParams pq;   pq.a = 0.6;
    RelationParams pu;   pu.a = 1.0; pu.d = 0.8;
    const Case cases[] = {
        {"c-full", pc, 48},
        {"ct-full", pc, 48},
        {"d-even", pc, 32},
        {"qmp-continuous", pq, 16},
        {"u-family", pu, 12},
    };
    std::printf("%-18s %8s %12s %12s %8s\n", "relation", "nmax", "serial(ms)", "openmp(ms)", "speedup");
    for (const Case& c : cases) {
        OrthoRelation rel = make_relation(c.id, c.p, ctx);
        double ts = time_ms(rel, c.nmax, ctx, Exec::Serial, 3);
        double tp = time_ms(rel, c.nmax, ctx, Exec::Parallel, 3);
        std::printf("%-18s %8d %12.2f %12.2f %8.2f\n", c.id, c.nmax, ts, tp, ts / tp);
    }
    return 0;
}
