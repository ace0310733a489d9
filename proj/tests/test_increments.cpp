#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "lesieve/increments.hpp"
#include "lesieve/stats.hpp"

using namespace lesieve;

namespace {

// Sibuya generating function f(t) = 1 - (1-t)^alpha, the independent oracle
// for the leading pmf coefficients.
double sibuya_gf(double alpha, double t) { return 1.0 - std::pow(1.0 - t, alpha); }

std::vector<double> draw_log_values(const IncrementLaw& law, std::uint64_t n,
                                    std::uint64_t seed) {
    RandomStream rng(seed);
    std::vector<double> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.push_back(std::log(static_cast<double>(law.sample(rng))));
    return out;
}

} // namespace

TEST_CASE("geometric pmf and mean") {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    CHECK(law.pmf(1) == doctest::Approx(0.5));
    CHECK(law.pmf(3) == doctest::Approx(0.125));
    CHECK(law.pmf(0) == 0.0);
    CHECK(law.mean() == doctest::Approx(2.0));
    CHECK(law.has_finite_mean());
    CHECK(law.survival(2) == doctest::Approx(0.25));
}

TEST_CASE("sibuya leading pmf coefficients vs generating-function oracle") {
    const double alpha = 0.4;
    IncrementLaw law = IncrementLaw::sibuya(alpha);
    // p_1 = f'(0) by central difference
    const double h = 1e-6;
    double p1_oracle = (sibuya_gf(alpha, h) - sibuya_gf(alpha, -h)) / (2.0 * h);
    CHECK(law.pmf(1) == doctest::Approx(0.4).epsilon(1e-9));
    CHECK(law.pmf(1) == doctest::Approx(p1_oracle).epsilon(1e-6));
    // p_2 = f''(0)/2 by second finite difference
    double p2_oracle =
        (sibuya_gf(alpha, h) - 2.0 * sibuya_gf(alpha, 0.0) + sibuya_gf(alpha, -h)) /
        (h * h) / 2.0;
    CHECK(law.pmf(2) == doctest::Approx(0.12).epsilon(1e-9));
    CHECK(law.pmf(2) == doctest::Approx(p2_oracle).epsilon(1e-3));
}

TEST_CASE("sibuya generating function matches 1-(1-t)^alpha") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        IncrementLaw law = IncrementLaw::sibuya(alpha);
        for (double t = 0.1; t < 0.95; t += 0.1) {
            double sum = 0.0, tn = 1.0;
            for (std::uint64_t n = 1; n <= 2000; ++n) {
                tn *= t;
                sum += law.pmf(n) * tn;
            }
            CHECK(sum == doctest::Approx(sibuya_gf(alpha, t)).epsilon(1e-10));
        }
    }
}

TEST_CASE("pmf partial sums approach 1 with controlled tail") {
    std::vector<IncrementLaw> laws = {
        IncrementLaw::geometric(0.3), IncrementLaw::sibuya(0.5),
        IncrementLaw::davies_pareto(0.7, 0),
        IncrementLaw::explicit_pmf({0.2, 0.3, 0.5})};
    for (const auto& law : laws) {
        const std::uint64_t N = 100000;
        double sum = 0.0, prev = 0.0;
        for (std::uint64_t n = 1; n <= N; ++n) {
            sum += law.pmf(n);
            CHECK(sum >= prev);
            prev = sum;
        }
        CHECK(sum <= 1.0 + 1e-12);
        CHECK(1.0 - sum <= 10.0 * law.survival(N) + 1e-12);
    }
}

TEST_CASE("degenerate law is a point mass at 1") {
    IncrementLaw law = IncrementLaw::degenerate_one();
    RandomStream rng(7);
    for (int i = 0; i < 100; ++i) CHECK(law.sample(rng) == 1);
    CHECK(law.pmf(1) == 1.0);
    CHECK(law.pmf(2) == 0.0);
    CHECK(law.is_degenerate());
}

TEST_CASE("geometric sample mean over 1e6 draws") {
    IncrementLaw law = IncrementLaw::geometric(0.5);
    RandomStream rng(11);
    double sum = 0.0;
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i) sum += static_cast<double>(law.sample(rng));
    double mean = sum / static_cast<double>(n);
    CHECK(mean > 1.99);
    CHECK(mean < 2.01);
}

TEST_CASE("sibuya empirical tail tracks n^{-1/2}/Gamma(1/2)") {
    IncrementLaw law = IncrementLaw::sibuya(0.5);
    RandomStream rng(13);
    const std::uint64_t n = 1000000;
    std::uint64_t above_1e2 = 0, above_1e3 = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        std::uint64_t v = law.sample(rng);
        if (v > 100) ++above_1e2;
        if (v > 1000) ++above_1e3;
    }
    // survival ~ n^{-0.5}/Gamma(0.5), constant ~ 0.5642
    double c2 = static_cast<double>(above_1e2) / n * std::sqrt(100.0);
    double c3 = static_cast<double>(above_1e3) / n * std::sqrt(1000.0);
    CHECK(c2 > 0.4); CHECK(c2 < 0.8);
    CHECK(c3 > 0.4); CHECK(c3 < 0.8);
    // and the exact product oracle agrees
    CHECK(law.survival(100) == doctest::Approx(0.5642 / 10.0).epsilon(0.01));
}

TEST_CASE("bernoulli-min sibuya sampler near alpha -> 1 concentrates at 1") {
    RandomStream rng(17);
    std::uint64_t ones = 0;
    const std::uint64_t n = 10000;
    for (std::uint64_t i = 0; i < n; ++i)
        if (sample_sibuya_bernoulli(0.999, rng) == 1) ++ones;
    CHECK(static_cast<double>(ones) / n >= 0.99);
}

TEST_CASE("cross-sampler agreement on log-values, alpha in {0.3,0.5,0.8}") {
    for (double alpha : {0.3, 0.5, 0.8}) {
        IncrementLaw law = IncrementLaw::sibuya(alpha);
        const std::uint64_t n = 100000;
        std::vector<double> a = draw_log_values(law, n, 19);
        RandomStream rng(23);
        std::vector<double> b;
        b.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i)
            b.push_back(std::log(static_cast<double>(sample_sibuya_bernoulli(alpha, rng))));
        CHECK(ks_statistic_two_sample(a, b) < 0.01);
    }
}

TEST_CASE("sample_log agrees with log of sample") {
    IncrementLaw law = IncrementLaw::sibuya(0.5);
    const std::uint64_t n = 100000;
    std::vector<double> a = draw_log_values(law, n, 29);
    RandomStream rng(31);
    std::vector<double> b;
    b.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) b.push_back(law.sample_log(rng));
    CHECK(ks_statistic_two_sample(a, b) < 0.01);
}

TEST_CASE("sibuya semigroup: compound draw equals product-parameter law") {
    // sum of Sibuya(0.5) over a Sibuya(0.5) count vs direct Sibuya(0.25)
    IncrementLaw outer = IncrementLaw::sibuya(0.5);
    IncrementLaw target = IncrementLaw::sibuya(0.25);
    RandomStream rng(37);
    const std::uint64_t reps = 100000;
    const std::int64_t hi = 50;
    std::vector<std::int64_t> vals;
    vals.reserve(reps);
    for (std::uint64_t r = 0; r < reps; ++r) {
        std::uint64_t count = outer.sample(rng);
        if (count > static_cast<std::uint64_t>(hi)) {
            // every term is >= 1, so the sum is already past the tail bucket
            vals.push_back(hi + 1);
            continue;
        }
        std::uint64_t total = 0;
        for (std::uint64_t i = 0; i < count && total <= static_cast<std::uint64_t>(hi); ++i)
            total += outer.sample(rng);
        vals.push_back(static_cast<std::int64_t>(std::min<std::uint64_t>(total, hi + 1)));
    }
    auto chi = chi_square_discrete(
        vals,
        [&](std::int64_t k) { return k >= 1 ? target.pmf(static_cast<std::uint64_t>(k)) : 0.0; },
        1, hi + 1);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("davies-pareto survival and tail index") {
    IncrementLaw law = IncrementLaw::davies_pareto(0.7, 0);
    CHECK(law.survival(1) == doctest::Approx(1.0));
    CHECK(law.survival(10) == doctest::Approx(std::pow(10.0, -0.7)));
    CHECK(!law.has_finite_mean());

    RandomStream rng(41);
    const std::uint64_t n = 1000000;
    std::vector<double> vals;
    vals.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        vals.push_back(static_cast<double>(law.sample(rng)));
    EmpiricalSample sample{std::move(vals), {41, n, "davies_pareto(0.7)"}};
    double est = tail_index(sample, 0.9, 0.999);
    CHECK(est > 0.65);
    CHECK(est < 0.75);
}

TEST_CASE("xlogx check separates finite-mean and heavy tails") {
    CHECK(IncrementLaw::geometric(0.5).xlogx_finite());
    CHECK(IncrementLaw::explicit_pmf({0.5, 0.5}).xlogx_finite());
    CHECK(!IncrementLaw::sibuya(0.5).xlogx_finite());
    CHECK(!IncrementLaw::davies_pareto(0.7, 0).xlogx_finite());
}

TEST_CASE("explicit pmf normalization and degenerate rejections") {
    IncrementLaw law = IncrementLaw::explicit_pmf({2.0, 2.0});
    CHECK(law.pmf(1) == doctest::Approx(0.5));
    CHECK(law.mean() == doctest::Approx(1.5));
    CHECK_THROWS_AS(IncrementLaw::explicit_pmf({1.0}), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::explicit_pmf({}), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::explicit_pmf({0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::geometric(1.5), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::sibuya(1.0), ValidationError);

    // p_1 = 0 member: all mass at 2
    IncrementLaw two = IncrementLaw::explicit_pmf({0.0, 1.0});
    RandomStream rng(43);
    for (int i = 0; i < 50; ++i) CHECK(two.sample(rng) == 2);
}

TEST_CASE("json descriptors round-trip and reject unknown keys") {
    nlohmann::json j = {{"kind", "sibuya"}, {"alpha", 0.5}};
    IncrementLaw law = IncrementLaw::from_json(j);
    CHECK(law.kind() == LawKind::Sibuya);
    CHECK(IncrementLaw::from_json(law.to_json()).describe() == law.describe());

    CHECK_THROWS_AS(IncrementLaw::from_json({{"kind", "sibuya"}, {"alpha", 0.5}, {"x", 1}}),
                    ValidationError);
    CHECK_THROWS_AS(IncrementLaw::from_json({{"kind", "cauchy"}}), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::from_json({{"kind", "geometric"}}), ValidationError);
    CHECK_THROWS_AS(IncrementLaw::from_json(nlohmann::json::array()), ValidationError);
}

TEST_CASE("identical seeds give identical draw sequences") {
    for (const auto& law :
         {IncrementLaw::geometric(0.3), IncrementLaw::sibuya(0.5),
          IncrementLaw::davies_pareto(0.6, 2), IncrementLaw::explicit_pmf({1, 2, 3})}) {
        RandomStream a(97), b(97);
        for (int i = 0; i < 1000; ++i) CHECK(law.sample(a) == law.sample(b));
    }
}

TEST_CASE("unseeded stream faults on draw") {
    RandomStream rng;
    CHECK(!rng.seeded());
    CHECK_THROWS_AS(rng.next_u64(), ValidationError);
}
