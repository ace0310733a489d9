#pragma once

#include <cstdint>
#include <vector>

#include "lesieve/increments.hpp"
#include "lesieve/rng.hpp"

namespace lesieve {

using uint128 = unsigned __int128;

enum class GWMode { Exact, LogDomain };

// Generation sizes Z_0 = 1, Z_1, ..., Z_n of a Galton-Watson process with
// offspring law xi.  Offspring >= 1, so sizes are nondecreasing and the
// process survives surely.
struct GWTrajectory {
    std::vector<uint128> sizes;     // Exact mode
    std::vector<double> log_sizes;  // LogDomain mode
    GWMode mode = GWMode::Exact;
    // set when an exact run stopped early because a size exceeded the cap
    bool capped = false;

    std::uint64_t generations() const {
        return (mode == GWMode::Exact ? sizes.size() : log_sizes.size()) - 1;
    }
};

// Sum of `count` iid offspring draws, 128-bit streaming accumulation.
// Faults on overflow, signalling the caller to switch to the closed-form or
// log-domain route.
uint128 gw_step(uint128 count, const IncrementLaw& law, RandomStream& rng);

// Exact trajectory for n generations.  If `cap` > 0, stops as soon as a
// generation exceeds it (sizes are monotone, so everything past the cap is
// determined to be > cap as well).
GWTrajectory gw_run_exact(const IncrementLaw& law, std::uint64_t n, RandomStream& rng,
                          uint128 cap = 0);

// (mu^{-k} Z_k)_{k=0..n}, the nonnegative martingale view.
std::vector<double> mart_normalized(const GWTrajectory& traj, double mu);

// alpha^n log Z_n with Z_n drawn directly as Sibuya(alpha^n) — the
// closed-form shortcut through the generating-function semigroup; avoids the
// doubly-exponential population explosion.
double log_normalized_sibuya(double alpha, std::uint64_t n, RandomStream& rng);

// mu^{-n_fixed} Z_{n_fixed} as a proxy draw of the martingale limit.
// Requires a finite-mean, non-degenerate law passing the x log x check.
double z_infty_sample(const IncrementLaw& law, RandomStream& rng,
                      std::uint64_t n_fixed = 14);

// Rejects laws outside the hypotheses of the finite-mean limit theorems
// (mu in (1,inf) and E xi log xi < inf); throws ValidationError naming the
// violated condition.
void require_finite_mean_hypotheses(const IncrementLaw& law);

// (alpha^n log S_j^(n))_{j=1..j_max} for a Sibuya(alpha) sieve, drawn in the
// log domain.  Uses the composition identity: the composed walk has iid
// increments, each a generation-n population size ~ Sibuya(alpha^n), so the
// labels are running log-sum-exp partial sums.
std::vector<double> survivors_log_sibuya(double alpha, std::uint64_t n,
                                         std::uint64_t j_max, RandomStream& rng);

} // namespace lesieve
