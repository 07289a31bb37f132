#include "swfc/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace swfc::analysis {

double full_rank_excess(double delta) {
    if (!(delta > 0.0) || delta > 1.0) {
        throw std::invalid_argument("delta must be in (0, 1]");
    }
    return std::log2(1.0 / delta);
}

double asymptotic_rate_bound(double p_e, double n, double delta) {
    if (p_e < 0.0 || p_e > 1.0) throw std::invalid_argument("p_e out of [0, 1]");
    if (!(n > 0.0)) throw std::invalid_argument("n must be positive");
    if (!(delta > 0.0) || delta >= 1.0) {
        throw std::invalid_argument("delta must be in (0, 1)");
    }
    return n * (1.0 - p_e) / (n - std::log2(delta));
}

namespace {

// Feasibility margin of rate R: survivors after expansion minus the rate
// itself. Positive means R closes the loop.
double margin(double p_e, double r) {
    return std::pow(1.0 - p_e, 1.0 / r) - r;
}

}  // namespace

FeasibilityResult max_effective_rate(double p_e) {
    if (p_e < 0.0 || p_e >= 1.0) {
        throw std::invalid_argument("p_e must be in [0, 1)");
    }
    FeasibilityResult out;
    out.p_e = p_e;
    out.threshold_used = feasibility_threshold();
    if (p_e == 0.0) {
        out.r_max = 1.0;
        return out;
    }

    // Walk down from R = 1 (margin -p_e < 0 there) looking for the last
    // positive grid point; the largest root lies just above it.
    constexpr double kStep = 1e-3;
    constexpr double kTol = 1e-6;
    double hi = 1.0;
    double lo = 0.0;
    bool found = false;
    for (double r = 1.0 - kStep; r > kStep / 2; r -= kStep) {
        if (margin(p_e, r) > 0.0) {
            lo = r;
            found = true;
            break;
        }
        hi = r;
    }
    if (!found) return out;

    while (hi - lo > kTol) {
        double mid = 0.5 * (lo + hi);
        if (margin(p_e, mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Step inside the feasible side so the returned rate itself has margin.
    out.r_max = 0.5 * (lo + hi) - kTol;
    return out;
}

double feasibility_threshold() {
    return 1.0 - std::exp(-std::exp(-1.0));
}

}  // namespace swfc::analysis
