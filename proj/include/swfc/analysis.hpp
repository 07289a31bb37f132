#pragma once

#include <optional>
#include <vector>

namespace swfc::analysis {

// Extra received symbols needed beyond the unknown count before a random
// GF(2) system is full rank with probability at least 1 - delta: log2(1/delta).
// Domain: delta in (0, 1].
double full_rank_excess(double delta);

// Highest code rate sustaining reliable decoding over n symbols at loss rate
// p_e with failure budget delta: n*(1-p_e) / (n - log2(delta)). Tends to
// 1 - p_e as n grows.
double asymptotic_rate_bound(double p_e, double n, double delta);

struct FeasibilityResult {
    double p_e = 0.0;
    // Empty when no rate closes the loop at this loss level.
    std::optional<double> r_max;
    // The loss level at which feasibility is lost, for context in reports.
    double threshold_used = 0.0;

    bool feasible() const { return r_max.has_value(); }
};

// Largest R in (0, 1] with (1 - p_e)^(1/R) > R, i.e. the highest rate whose
// own airtime expansion still leaves enough surviving packets. Solved by a
// coarse scan (step 1e-3) for a sign change and bisection to 1e-6; the
// returned rate sits 1e-6 inside the feasible side. p_e = 0 gives rate 1.
FeasibilityResult max_effective_rate(double p_e);

// Loss probability beyond which no rate is feasible: 1 - e^(-1/e), about
// 0.30780, where the expansion curve becomes tangent to the identity.
double feasibility_threshold();

}  // namespace swfc::analysis
