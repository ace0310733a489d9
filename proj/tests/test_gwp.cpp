#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lesieve/gwp.hpp"
#include "lesieve/parallel.hpp"
#include "lesieve/stats.hpp"

using namespace lesieve;

namespace {

double exp_cdf(double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; }

// Exact quantile of Sibuya(alpha) at level v in the log domain (comonotone
// coupling device for the stabilization test).
double sibuya_log_quantile(double alpha, double v) {
    double log_s = std::log1p(-v); // log of target survival
    double log_n = (-log_s - std::lgamma(1.0 - alpha)) / alpha;
    if (log_n > 40.0 * 0.6931471805599453) return log_n;
    std::uint64_t lo = 1, hi = std::uint64_t(1) << 41;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        if (sibuya_log_survival(alpha, static_cast<double>(mid)) <= log_s)
            hi = mid;
        else
            lo = mid + 1;
    }
    return std::log(static_cast<double>(lo));
}

} // namespace

TEST_CASE("gw_step basics") {
    RandomStream rng(3);
    CHECK(gw_step(1, IncrementLaw::degenerate_one(), rng) == 1);

    IncrementLaw geo = IncrementLaw::geometric(0.5);
    uint128 total = gw_step(10000, geo, rng);
    double ratio = static_cast<double>(total) / 10000.0;
    CHECK(ratio > 1.9);
    CHECK(ratio < 2.1);

    // one Sibuya individual: the step is a single draw of the law
    IncrementLaw sib = IncrementLaw::sibuya(0.5);
    RandomStream a(9), b(9);
    CHECK(gw_step(1, sib, a) == sib.sample(b));

    CHECK_THROWS_AS(gw_step(0, geo, rng), ValidationError);
}

TEST_CASE("martingale normalization of an exact doubling trajectory") {
    GWTrajectory traj;
    traj.sizes = {1, 2, 4};
    auto norm = mart_normalized(traj, 2.0);
    CHECK(norm == std::vector<double>{1.0, 1.0, 1.0});
}

TEST_CASE("geometric generation sizes match the closed-form geometric law") {
    // For Geometric(1/2) offspring the generating function is linear
    // fractional and Z_n is exactly Geometric(2^{-n}).
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    IncrementLaw direct = IncrementLaw::geometric(std::pow(2.0, -6.0));
    const std::uint64_t reps = 100000;
    std::vector<double> chain(reps), closed(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream rng = RandomStream::derive(51, {r});
        GWTrajectory traj = gw_run_exact(geo, 6, rng);
        chain[r] = static_cast<double>(static_cast<std::uint64_t>(traj.sizes.back()));
        RandomStream rng2 = RandomStream::derive(52, {r});
        closed[r] = static_cast<double>(direct.sample(rng2));
        // monotone, >= 1
        for (std::size_t k = 1; k < traj.sizes.size(); ++k)
            if (traj.sizes[k] < traj.sizes[k - 1]) chain[r] = -1.0;
    });
    CHECK(std::count(chain.begin(), chain.end(), -1.0) == 0);
    CHECK(ks_statistic_two_sample(chain, closed) < 0.01);
}

TEST_CASE("normalized Z_14 approximates the exponential martingale limit") {
    // closed-form route: Z_14 ~ Geometric(2^{-14}) exactly
    IncrementLaw z14 = IncrementLaw::geometric(std::pow(2.0, -14.0));
    const std::uint64_t reps = 100000;
    std::vector<double> vals(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream rng = RandomStream::derive(53, {r});
        vals[r] = static_cast<double>(z14.sample(rng)) * std::pow(2.0, -14.0);
    });
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= static_cast<double>(reps);
    CHECK(mean > 0.98);
    CHECK(mean < 1.02);
    CHECK(ks_statistic_one_sample(vals, exp_cdf) < 0.02);
}

TEST_CASE("z_infty proxy: mean, exceedance and hypothesis rejection") {
    for (const auto& bad : {IncrementLaw::degenerate_one(), IncrementLaw::sibuya(0.5)}) {
        RandomStream rng(1);
        std::string message;
        try {
            z_infty_sample(bad, rng);
        } catch (const ValidationError& e) {
            message = e.what();
        }
        CHECK(message.find("mu in (1, infinity)") != std::string::npos);
    }

    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 20000;
    std::vector<double> vals(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream rng = RandomStream::derive(54, {r});
        vals[r] = z_infty_sample(geo, rng);
    });
    double mean = 0.0, above1 = 0.0;
    for (double v : vals) {
        mean += v;
        if (v > 1.0) above1 += 1.0;
    }
    mean /= static_cast<double>(reps);
    above1 /= static_cast<double>(reps);
    CHECK(mean > 0.98);
    CHECK(mean < 1.02);
    CHECK(above1 > std::exp(-1.0) - 0.01);
    CHECK(above1 < std::exp(-1.0) + 0.01);
}

TEST_CASE("martingale conditional-mean regression slope is 1") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 100000;
    std::vector<double> x(reps), y(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream rng = RandomStream::derive(55, {r});
        GWTrajectory traj = gw_run_exact(geo, 9, rng);
        auto norm = mart_normalized(traj, 2.0);
        x[r] = norm[8];
        y[r] = norm[9];
    });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::uint64_t r = 0; r < reps; ++r) {
        sx += x[r]; sy += y[r]; sxx += x[r] * x[r]; sxy += x[r] * y[r];
    }
    double n = static_cast<double>(reps);
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope > 0.98);
    CHECK(slope < 1.02);
}

TEST_CASE("log-normalized sibuya draw: trivial case and limit law") {
    RandomStream rng(1);
    CHECK(log_normalized_sibuya(0.5, 0, rng) == 0.0);
    CHECK_THROWS_AS(log_normalized_sibuya(1.5, 3, rng), ValidationError);

    const std::uint64_t reps = 100000;
    std::vector<double> vals(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream stream = RandomStream::derive(56, {r});
        vals[r] = log_normalized_sibuya(0.5, 10, stream);
    });
    CHECK(ks_statistic_one_sample(vals, exp_cdf) < 0.02);
}

TEST_CASE("closed-form Z_2 equals the exact two-generation chain") {
    // Values are compared after censoring both samples at the same cap; the
    // monotone generations classify the censored bucket exactly.
    IncrementLaw sib = IncrementLaw::sibuya(0.5);
    IncrementLaw direct = IncrementLaw::sibuya(0.25);
    const std::uint64_t reps = 100000;
    const double cap = 1000.0;
    std::vector<double> chain(reps), closed(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream rng = RandomStream::derive(57, {r});
        GWTrajectory traj = gw_run_exact(sib, 2, rng, 1000);
        double z = traj.capped
                       ? cap + 1.0
                       : static_cast<double>(static_cast<std::uint64_t>(traj.sizes.back()));
        chain[r] = std::min(z, cap + 1.0);
        RandomStream rng2 = RandomStream::derive(58, {r});
        closed[r] = std::min(static_cast<double>(direct.sample(rng2)), cap + 1.0);
    });
    CHECK(ks_statistic_two_sample(chain, closed) < 0.01);
}

TEST_CASE("alpha^n log Z_n stabilizes along the comonotone coupling") {
    const double alpha = 0.5;
    const std::uint64_t reps = 10000;
    std::vector<std::vector<double>> diffs(6); // n = 4..9 vs n+1
    for (auto& d : diffs) d.resize(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        double v = RandomStream::derive(59, {r}).uniform01();
        double prev = 0.0;
        for (std::uint64_t n = 4; n <= 10; ++n) {
            double a_n = std::pow(alpha, static_cast<double>(n));
            double y = a_n * sibuya_log_quantile(a_n, v);
            if (n > 4) diffs[n - 5][r] = std::abs(y - prev);
            prev = y;
        }
    });
    std::vector<double> medians;
    for (auto& d : diffs) {
        std::sort(d.begin(), d.end());
        medians.push_back(d[reps / 2]);
    }
    for (std::size_t i = 1; i < medians.size(); ++i) CHECK(medians[i] < medians[i - 1]);
}

TEST_CASE("limit of alpha^n log Z_n has no atoms") {
    const std::uint64_t reps = 100000;
    std::vector<double> vals(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        RandomStream stream = RandomStream::derive(60, {r});
        vals[r] = log_normalized_sibuya(0.5, 10, stream);
    });
    std::sort(vals.begin(), vals.end());
    std::uint64_t longest = 1, run = 1;
    for (std::uint64_t i = 1; i < reps; ++i) {
        run = (vals[i] == vals[i - 1]) ? run + 1 : 1;
        longest = std::max(longest, run);
    }
    CHECK(static_cast<double>(longest) / static_cast<double>(reps) < 0.01);
}

TEST_CASE("log-domain survivor labels") {
    RandomStream rng(61);
    auto labels = survivors_log_sibuya(0.5, 0, 5, rng);
    for (std::uint64_t j = 1; j <= 5; ++j)
        CHECK(labels[j - 1] == doctest::Approx(std::log(static_cast<double>(j))));

    RandomStream rng2(62);
    auto deep = survivors_log_sibuya(0.5, 10, 50, rng2);
    CHECK(deep.size() == 50);
    for (std::size_t j = 1; j < deep.size(); ++j) CHECK(deep[j] >= deep[j - 1]);

    RandomStream a(63), b(63);
    CHECK(survivors_log_sibuya(0.5, 5, 20, a) == survivors_log_sibuya(0.5, 5, 20, b));
}
