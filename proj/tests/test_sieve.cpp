#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lesieve/parallel.hpp"
#include "lesieve/sieve.hpp"
#include "lesieve/stats.hpp"

using namespace lesieve;

TEST_CASE("walk evaluation basics") {
    IncrementLaw one = IncrementLaw::degenerate_one();
    WalkPath unit(one, RandomStream(1));
    CHECK(unit.eval(0) == 0);
    CHECK(unit.eval(7) == 7);

    // R(3) equals the sum of the first three draws of the same stream
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    WalkPath walk(geo, RandomStream(5));
    RandomStream replay(5);
    std::uint64_t expected = geo.sample(replay) + geo.sample(replay) + geo.sample(replay);
    CHECK(walk.eval(3) == expected);
    CHECK(walk.eval(3) == expected); // lazy re-evaluation is stable
    CHECK(walk.increment(1) >= 1);
}

TEST_CASE("walk path length cap faults") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    WalkPath walk(geo, RandomStream(5), 10);
    CHECK_THROWS_AS(walk.eval(11), ResourceError);
}

TEST_CASE("one sieve round keeps survivors at walk positions") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    SieveState state = make_initial_state(5);

    WalkPath walk(geo, RandomStream(123));
    WalkPath oracle(geo, RandomStream(123));
    SieveState next = sieve_round(state, walk);

    std::vector<std::uint64_t> expected;
    for (std::uint64_t k = 1;; ++k) {
        std::uint64_t pos = oracle.eval(k);
        if (pos > 5) break;
        expected.push_back(pos); // original labels are 1..5 in round 0
    }
    CHECK(next.original_labels == expected);
    CHECK(next.round == 1);

    // degenerate walk: identity sieve
    IncrementLaw one = IncrementLaw::degenerate_one();
    WalkPath unit(one, RandomStream(1));
    SieveState same = sieve_round(state, unit);
    CHECK(same.original_labels == state.original_labels);
    CHECK(same.round == 1);
}

TEST_CASE("one geometric round thins M=10 to Binomial(10, 1/2)") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 100000;
    std::vector<std::int64_t> counts(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        counts[r] = static_cast<std::int64_t>(run_sieve(10, geo, 1, 777, r).survivor_count());
    });
    auto pmf = [](std::int64_t k) {
        if (k < 0 || k > 10) return 0.0;
        double c = 1.0;
        for (std::int64_t i = 0; i < k; ++i)
            c *= static_cast<double>(10 - i) / static_cast<double>(i + 1);
        return c * std::pow(0.5, 10.0);
    };
    auto chi = chi_square_discrete(counts, pmf, 0, 10);
    CHECK(chi.p_value > 0.001);
}

TEST_CASE("run_sieve initial condition and degenerate identity") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    SieveState s0 = run_sieve(5, geo, 0, 1);
    CHECK(s0.survivor_count() == 5);
    CHECK(s0.original_labels == std::vector<std::uint64_t>{1, 2, 3, 4, 5});

    SieveState id = run_sieve(17, IncrementLaw::degenerate_one(), 9, 1);
    CHECK(id.survivor_count() == 17);
}

TEST_CASE("elimination history is consistent with extinction time") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    for (std::uint64_t replica = 0; replica < 20; ++replica) {
        SieveState state = run_sieve(50, geo, 50, 99, replica);
        CHECK(state.survivor_count() == 0);
        std::uint32_t last = *std::max_element(state.elimination_round.begin(),
                                               state.elimination_round.end());
        CHECK(time_to_extinction(50, geo, 99, replica) == last);
    }
}

TEST_CASE("T(1) mean and guaranteed single-round elimination") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 100000;
    std::vector<std::int64_t> t(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        t[r] = static_cast<std::int64_t>(time_to_extinction(1, geo, 555, r));
    });
    double mean = 0.0;
    for (auto v : t) mean += static_cast<double>(v);
    mean /= static_cast<double>(reps);
    CHECK(mean > 2.0 * 0.99);
    CHECK(mean < 2.0 * 1.01);

    IncrementLaw no_one = IncrementLaw::explicit_pmf({0.0, 1.0});
    for (std::uint64_t r = 0; r < 50; ++r)
        CHECK(time_to_extinction(1, no_one, 3, r) == 1);

    CHECK_THROWS_AS(time_to_extinction(5, IncrementLaw::degenerate_one(), 1), ValidationError);
}

TEST_CASE("T(100) mode sits near log2(100)") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 10000;
    std::vector<std::int64_t> t(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        t[r] = static_cast<std::int64_t>(time_to_extinction(100, geo, 314, r));
    });
    std::map<std::int64_t, std::uint64_t> freq;
    for (auto v : t) ++freq[v];
    auto mode = std::max_element(freq.begin(), freq.end(), [](const auto& a, const auto& b) {
                    return a.second < b.second;
                })->first;
    CHECK(mode >= 6);
    CHECK(mode <= 8);
}

TEST_CASE("composition representation: identity cases") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    auto s0 = survivors_by_composition(geo, 0, 4, 1, 0);
    CHECK(s0 == std::vector<std::uint64_t>{1, 2, 3, 4});

    // n=1 equals the prefix of a single walk with the same substream
    auto s1 = survivors_by_composition(geo, 1, 5, 7, 3);
    WalkPath oracle(geo, RandomStream::derive(7, {3, 1}));
    for (std::uint64_t j = 1; j <= 5; ++j) CHECK(s1[j - 1] == oracle.eval(j));
}

TEST_CASE("backward composition matches forward sieve for S_1^(8)") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t reps = 10000;
    const double scale = std::pow(2.0, -8.0);
    std::vector<double> backward(reps), forward(reps);
    parallel_for_replicas(reps, 0, [&](std::uint64_t r) {
        backward[r] =
            static_cast<double>(survivors_by_composition(geo, 8, 1, 1001, r)[0]) * scale;
        // forward route: S_1^(8) = smallest M with N_M^(8) >= 1, which the
        // forward composition realizes directly under the duality
        WalkFamily family(geo, 8, 2002, r);
        forward[r] = static_cast<double>(composed_labels(family, 8, 1)[0]) * scale;
    });
    CHECK(ks_statistic_two_sample(backward, forward) < 0.02);
}

TEST_CASE("pathwise dualities and monotonicity under the shared coupling") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    for (std::uint64_t replica = 0; replica < 10; ++replica) {
        WalkFamily family(geo, 6, 424242, replica);
        auto counts = forward_counts(family, 100, 6);
        CHECK(counts[0] == 100);
        for (std::uint64_t n = 1; n <= 6; ++n) CHECK(counts[n] <= counts[n - 1]);

        auto labels = composed_labels(family, 6, 30);
        for (std::uint64_t j = 1; j < labels.size(); ++j)
            CHECK(labels[j] > labels[j - 1]); // strictly increasing in j

        // N_M >= k  <=>  S_k <= M, spot-checked across the grid
        for (std::uint64_t m : {10u, 50u, 100u}) {
            auto cm = forward_counts(family, m, 6);
            for (std::uint64_t k = 1; k <= 30; ++k) {
                bool lhs = cm[6] >= k;
                bool rhs = labels[k - 1] <= m;
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("composed two-round walk has exchangeable increments") {
    IncrementLaw geo = IncrementLaw::geometric(0.5);
    const std::uint64_t half = 4000;
    std::vector<double> first, second;
    for (std::uint64_t replica = 0; replica < 4; ++replica) {
        WalkFamily family(geo, 2, 9090, replica);
        auto labels = composed_labels(family, 2, 2 * half);
        for (std::uint64_t j = 1; j < 2 * half; ++j) {
            double inc = static_cast<double>(labels[j] - labels[j - 1]);
            (j < half ? first : second).push_back(inc);
        }
    }
    CHECK(ks_statistic_two_sample(first, second) < 0.03);
}

TEST_CASE("replica-parallel map is order-independent") {
    std::vector<std::uint64_t> a(257), b(257);
    parallel_for_replicas(257, 1, [&](std::uint64_t r) {
        a[r] = RandomStream::derive(5, {r}).next_u64();
    });
    parallel_for_replicas(257, 8, [&](std::uint64_t r) {
        b[r] = RandomStream::derive(5, {r}).next_u64();
    });
    CHECK(a == b);
}
