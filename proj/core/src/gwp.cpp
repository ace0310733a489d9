#include "lesieve/gwp.hpp"

#include <cmath>

namespace lesieve {

namespace {
constexpr uint128 kOverflowGuard = uint128(1) << 120;
}

uint128 gw_step(uint128 count, const IncrementLaw& law, RandomStream& rng) {
    if (count < 1)
        throw ValidationError("gw_step: population >= 1 required");
    uint128 total = 0;
    for (uint128 i = 0; i < count; ++i) {
        total += law.sample(rng);
        if (total > kOverflowGuard)
            throw ResourceError("gw_step: population overflow, use the log-domain route");
    }
    return total;
}

GWTrajectory gw_run_exact(const IncrementLaw& law, std::uint64_t n, RandomStream& rng,
                          uint128 cap) {
    GWTrajectory traj;
    traj.mode = GWMode::Exact;
    traj.sizes.reserve(n + 1);
    traj.sizes.push_back(1);
    for (std::uint64_t k = 0; k < n; ++k) {
        uint128 cur = traj.sizes.back();
        if (cap > 0 && cur > cap) {
            traj.capped = true;
            break;
        }
        traj.sizes.push_back(gw_step(cur, law, rng));
    }
    if (cap > 0 && traj.sizes.back() > cap) traj.capped = true;
    return traj;
}

std::vector<double> mart_normalized(const GWTrajectory& traj, double mu) {
    if (traj.mode != GWMode::Exact)
        throw ValidationError("mart_normalized: exact-mode trajectory required");
    std::vector<double> out;
    out.reserve(traj.sizes.size());
    double scale = 1.0;
    for (uint128 z : traj.sizes) {
        out.push_back(static_cast<double>(z) * scale);
        scale /= mu;
    }
    return out;
}

double log_normalized_sibuya(double alpha, std::uint64_t n, RandomStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("log_normalized_sibuya: alpha in (0,1) required");
    if (n == 0) return 0.0; // Z_0 = 1
    double alpha_n = std::pow(alpha, static_cast<double>(n));
    IncrementLaw z_law = IncrementLaw::sibuya(alpha_n);
    return alpha_n * z_law.sample_log(rng);
}

void require_finite_mean_hypotheses(const IncrementLaw& law) {
    double mu = law.mean();
    if (!(mu > 1.0) || !std::isfinite(mu))
        throw ValidationError("hypothesis violated: mu in (1, infinity) required, law " +
                              law.describe());
    if (!law.xlogx_finite())
        throw ValidationError("hypothesis violated: E xi log xi < infinity required, law " +
                              law.describe());
}

double z_infty_sample(const IncrementLaw& law, RandomStream& rng, std::uint64_t n_fixed) {
    require_finite_mean_hypotheses(law);
    GWTrajectory traj = gw_run_exact(law, n_fixed, rng);
    return static_cast<double>(traj.sizes.back()) *
           std::pow(law.mean(), -static_cast<double>(n_fixed));
}

std::vector<double> survivors_log_sibuya(double alpha, std::uint64_t n,
                                         std::uint64_t j_max, RandomStream& rng) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("survivors_log_sibuya: alpha in (0,1) required");
    double alpha_n = std::pow(alpha, static_cast<double>(n));
    std::optional<IncrementLaw> z_law;
    if (n > 0) z_law = IncrementLaw::sibuya(alpha_n);
    std::vector<double> out;
    out.reserve(j_max);
    double log_sum = -std::numeric_limits<double>::infinity();
    for (std::uint64_t j = 0; j < j_max; ++j) {
        double log_z = (n == 0) ? 0.0 : z_law->sample_log(rng);
        // log(S + Z) from log S and log Z
        if (log_z > log_sum) {
            log_sum = (log_sum == -std::numeric_limits<double>::infinity())
                          ? log_z
                          : log_z + std::log1p(std::exp(log_sum - log_z));
        } else {
            log_sum = log_sum + std::log1p(std::exp(log_z - log_sum));
        }
        out.push_back(alpha_n * log_sum);
    }
    return out;
}

} // namespace lesieve
