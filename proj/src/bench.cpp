#include "gsrc/bench.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "gsrc/repair.hpp"

namespace gsrc {

namespace {

std::string sig6(const Rational& r) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", r.to_double());
    return buf;
}

}  // namespace

Rational rs_baseline(unsigned n, unsigned k) {
    if (k < 1 || n <= k) throw UsageError("rs_baseline requires 1 <= k < n");
    return Rational(k);
}

std::vector<SweepRow> sweep_alpha(unsigned n, unsigned k, const std::vector<unsigned>& alphas,
                                  unsigned w, std::uint64_t seed, VerifyLevel level) {
    std::vector<unsigned> sorted = alphas;
    std::sort(sorted.begin(), sorted.end());

    std::vector<SweepRow> rows;
    for (unsigned alpha : sorted) {
        SweepRow row;
        row.alpha = alpha;
        try {
            if (alpha == 1) {
                row.avg_gamma = rs_baseline(n, k);
                row.lower_bound = row.avg_gamma;
                row.upper_bound = row.avg_gamma;
            } else {
                GeneralizedCode code =
                    construct_code(CodeParams{n, k, alpha, w, seed}, std::nullopt, level);
                row.avg_gamma = average_repair_bandwidth(code);
                RepairTrace t = bandwidth(plan_repair(code, 1));
                row.lower_bound = t.lower_bound;
                row.upper_bound = t.upper_bound;
            }
            row.reduction_vs_rs = (Rational(k) - row.avg_gamma) / Rational(k);
            row.ok = true;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os) {
    os << "alpha,avg_gamma,lower_bound,upper_bound,reduction_vs_rs_pct,avg_gamma_rat\n";
    for (const SweepRow& row : rows) {
        if (!row.ok) continue;
        Rational pct = row.reduction_vs_rs * Rational(100);
        os << row.alpha << ',' << sig6(row.avg_gamma) << ',' << sig6(row.lower_bound) << ','
           << sig6(row.upper_bound) << ',' << sig6(pct) << ',' << row.avg_gamma.str() << '\n';
    }
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    emit_csv(rows, out);
    if (!out.good()) throw IoError("write failed: " + path);
}

}  // namespace gsrc
