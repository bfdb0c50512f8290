// Parameter sweeps: average repair bandwidth vs sub-packetization, with an
// RS baseline and CSV emission.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gsrc/codec.hpp"
#include "gsrc/rational.hpp"

namespace gsrc {

struct SweepRow {
    unsigned alpha = 0;
    Rational avg_gamma;
    Rational lower_bound;
    Rational upper_bound;
    Rational reduction_vs_rs;  // (k - avg_gamma)/k
    bool ok = false;
    std::string error;  // set when construction/verification failed for this alpha
};

// Repairing any node of an RS code reads the whole file: k node-units.
Rational rs_baseline(unsigned n, unsigned k);

// Constructs and measures one code per alpha (alpha=1 is reported as the RS
// baseline; the bounds columns carry the baseline value there since the
// repair algorithm is not what an RS code would run). Construction errors
// land in the row instead of aborting the sweep.
std::vector<SweepRow> sweep_alpha(unsigned n, unsigned k, const std::vector<unsigned>& alphas,
                                  unsigned w, std::uint64_t seed,
                                  VerifyLevel level = {});

// Header: alpha,avg_gamma,lower_bound,upper_bound,reduction_vs_rs_pct,avg_gamma_rat
// Decimals carry 6 significant digits; avg_gamma_rat is exact "num/den".
void emit_csv(const std::vector<SweepRow>& rows, std::ostream& os);
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace gsrc
