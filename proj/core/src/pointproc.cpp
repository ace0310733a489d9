#include "lesieve/pointproc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lesieve/gwp.hpp"
#include "lesieve/parallel.hpp"

namespace lesieve {

namespace {

constexpr std::uint64_t kIndexSaturation = std::uint64_t(1) << 62;

// Gamma(shape, 1) for integer shape >= 1: exact exponential sums for small
// shapes, Marsaglia-Tsang otherwise.
double gamma_integer_shape(std::uint64_t shape, RandomStream& rng) {
    if (shape <= 16) {
        double acc = 0.0;
        for (std::uint64_t i = 0; i < shape; ++i) acc += rng.exponential();
        return acc;
    }
    const double d = static_cast<double>(shape) - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = rng.normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        double u = rng.uniform01();
        if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v))
            return d * v;
    }
}

// max of m iid standard exponentials, by inversion of (1-e^{-x})^m
double exp_max_of(std::uint64_t m, RandomStream& rng) {
    double t = std::log(rng.uniform01()) / static_cast<double>(m);
    return -std::log(-std::expm1(t));
}

std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
    return (a > kIndexSaturation - std::min(b, kIndexSaturation)) ? kIndexSaturation
                                                                  : a + b;
}

} // namespace

PointPattern thin(const PointPattern& pattern, WalkPath& walk) {
    if (pattern.points.empty())
        throw ValidationError("thin: nonempty pattern required");
    PointPattern out;
    out.truncation = pattern.truncation;
    const std::uint64_t L = pattern.points.size();
    for (std::uint64_t k = 1;; ++k) {
        std::uint64_t pos = walk.eval(k);
        if (pos > L) break;
        out.points.push_back(pattern.points[pos - 1]);
    }
    return out;
}

PointPattern scale(const PointPattern& pattern, double a) {
    if (!(a > 0.0)) throw ValidationError("scale: a > 0 required");
    PointPattern out;
    out.points.reserve(pattern.points.size());
    for (double x : pattern.points) out.points.push_back(a * x);
    out.truncation = pattern.truncation * a;
    return out;
}

std::vector<std::pair<double, std::uint64_t>> cluster_stats(const PointPattern& pattern,
                                                            double tolerance) {
    if (tolerance < 0.0) throw ValidationError("cluster_stats: tolerance >= 0 required");
    std::vector<std::pair<double, std::uint64_t>> out;
    for (double x : pattern.points) {
        if (!out.empty() && x <= out.back().first + tolerance) {
            ++out.back().second;
        } else {
            out.emplace_back(x, 1);
        }
    }
    return out;
}

double ProfileRealization::operator()(double t) const {
    switch (kind) {
    case ProfileKind::Identity:
        return t;
    case ProfileKind::PowerLaw:
        return std::pow(t, beta);
    case ProfileKind::PiecewiseRandom: {
        if (t <= 0.0) return 0.0;
        const double c = period;
        double k = std::floor(std::log(t) / std::log(c));
        double u = t * std::pow(c, -k);
        if (u < 1.0) { u *= c; k -= 1.0; }
        if (u >= c) { u /= c; k += 1.0; }
        auto it = std::upper_bound(jump_at.begin(), jump_at.end(), u);
        double g0 = level[static_cast<std::size_t>(it - jump_at.begin()) - 1];
        return std::pow(c, k) * g0;
    }
    }
    return t;
}

ProfileRealization realize_profile(const SelfSimilarProfile& profile, RandomStream& rng) {
    ProfileRealization g;
    g.kind = profile.kind;
    g.beta = profile.beta;
    if (profile.kind != ProfileKind::PiecewiseRandom) return g;

    double c = profile.scale_factor;
    if (!(c > 0.0) || c == 1.0)
        throw ValidationError("profile: scale_factor in (0,1) or (1,inf) required");
    if (c < 1.0) c = 1.0 / c; // one multiplicative period [1, c), c > 1
    g.period = c;

    // nondecreasing staircase on [1, c) with 8 uniform jump locations/levels;
    // levels stay inside [1, c) so the periodic extension is monotone
    constexpr int kJumps = 8;
    g.jump_at.resize(kJumps);
    g.level.resize(kJumps);
    g.jump_at[0] = 1.0;
    for (int i = 1; i < kJumps; ++i) g.jump_at[i] = 1.0 + rng.uniform01() * (c - 1.0);
    for (int i = 0; i < kJumps; ++i) g.level[i] = 1.0 + rng.uniform01() * (c - 1.0);
    std::sort(g.jump_at.begin() + 1, g.jump_at.end());
    std::sort(g.level.begin(), g.level.end());
    return g;
}

std::vector<double> PoissonProcessSampler::points_at(std::span<const std::uint64_t> indices,
                                                     RandomStream& rng) const {
    std::vector<double> out;
    out.reserve(indices.size());
    double cur = 0.0;
    std::uint64_t prev = 0;
    for (std::uint64_t idx : indices) {
        if (idx <= prev) throw ValidationError("points_at: strictly increasing indices required");
        cur += gamma_integer_shape(idx - prev, rng);
        out.push_back(cur);
        prev = idx;
    }
    return out;
}

std::vector<double> ExpMaximaSampler::points_at(std::span<const std::uint64_t> indices,
                                                RandomStream& rng) const {
    std::vector<double> out;
    out.reserve(indices.size());
    double cur = 0.0;
    std::uint64_t prev = 0;
    for (std::uint64_t idx : indices) {
        if (idx <= prev) throw ValidationError("points_at: strictly increasing indices required");
        cur = std::max(cur, exp_max_of(idx - prev, rng));
        out.push_back(cur);
        prev = idx;
    }
    return out;
}

ZSumSampler::ZSumSampler(IncrementLaw law, std::uint64_t n_fixed)
    : law_(std::move(law)), n_fixed_(n_fixed) {
    require_finite_mean_hypotheses(law_);
}

std::vector<double> ZSumSampler::points_at(std::span<const std::uint64_t> indices,
                                           RandomStream& rng) const {
    std::vector<double> out;
    out.reserve(indices.size());
    double cur = 0.0;
    std::uint64_t prev = 0;
    for (std::uint64_t idx : indices) {
        if (idx <= prev) throw ValidationError("points_at: strictly increasing indices required");
        if (idx - prev > 100000)
            throw ResourceError("ZSumSampler: index gap too large for the exact route");
        for (std::uint64_t i = prev; i < idx; ++i)
            cur += z_infty_sample(law_, rng, n_fixed_);
        out.push_back(cur);
        prev = idx;
    }
    return out;
}

ProfiledSampler::ProfiledSampler(const PatternSampler& inner, SelfSimilarProfile profile)
    : inner_(&inner), profile_(profile) {}

std::vector<double> ProfiledSampler::points_at(std::span<const std::uint64_t> indices,
                                               RandomStream& rng) const {
    ProfileRealization g = realize_profile(profile_, rng);
    std::vector<double> pts = inner_->points_at(indices, rng);
    for (double& x : pts) x = g(x);
    return pts;
}

std::string ProfiledSampler::name() const {
    return inner_->name() + "+profile";
}

std::vector<double> LatticeSampler::points_at(std::span<const std::uint64_t> indices,
                                              RandomStream&) const {
    std::vector<double> out;
    out.reserve(indices.size());
    for (std::uint64_t idx : indices) out.push_back(static_cast<double>(idx));
    return out;
}

PointPattern make_stable_finite_mean(const IncrementLaw& law,
                                     const SelfSimilarProfile& profile,
                                     std::uint64_t k_points, std::uint64_t seed) {
    require_finite_mean_hypotheses(law);
    RandomStream rng = RandomStream::derive(seed, {0x5f1});
    ProfileRealization g = realize_profile(profile, rng);
    PointPattern out;
    out.points.reserve(k_points);
    double cur = 0.0;
    for (std::uint64_t j = 0; j < k_points; ++j) {
        cur += z_infty_sample(law, rng);
        out.points.push_back(g(cur));
    }
    out.truncation = out.points.empty() ? 0.0 : out.points.back();
    return out;
}

PointPattern make_stable_infinite_mean(double alpha, const SelfSimilarProfile& profile,
                                       std::uint64_t k_points, std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError(
            "make_stable_infinite_mean: only the Sibuya family (alpha in (0,1)) is supported");
    RandomStream rng = RandomStream::derive(seed, {0x5f2});
    ProfileRealization g = realize_profile(profile, rng);
    PointPattern out;
    out.points.reserve(k_points);
    double cur = 0.0;
    for (std::uint64_t j = 0; j < k_points; ++j) {
        cur = std::max(cur, rng.exponential());
        out.points.push_back(g(cur));
    }
    out.truncation = out.points.empty() ? 0.0 : out.points.back();
    return out;
}

TestReport stability_test(const PatternSampler& generator, const IncrementLaw& walk_law,
                          const StabilityConfig& config, std::uint64_t seed) {
    const std::uint64_t k = config.k_marginals;
    const std::uint64_t reps = config.replicas;
    if (k == 0 || reps == 0)
        throw ValidationError("stability_test: k_marginals and replicas must be positive");

    std::vector<std::uint64_t> identity(k);
    std::iota(identity.begin(), identity.end(), 1);

    // per-coordinate samples, fresh vs rescaled-thinned
    std::vector<std::vector<double>> fresh(k, std::vector<double>(reps));
    std::vector<std::vector<double>> transformed(k, std::vector<double>(reps));

    parallel_for_replicas(reps, config.threads, [&](std::uint64_t r) {
        RandomStream rng_fresh = RandomStream::derive(seed, {r, 0});
        std::vector<double> f = generator.points_at(identity, rng_fresh);

        RandomStream rng_walk = RandomStream::derive(seed, {r, 1});
        std::vector<std::uint64_t> idx(k);
        std::uint64_t cum = 0, last = 0;
        for (std::uint64_t i = 0; i < k; ++i) {
            cum = saturating_add(cum, walk_law.sample(rng_walk));
            last = std::max(cum, last + 1); // stay strictly increasing under saturation
            idx[i] = last;
        }
        RandomStream rng_pattern = RandomStream::derive(seed, {r, 2});
        std::vector<double> t = generator.points_at(idx, rng_pattern);

        for (std::uint64_t i = 0; i < k; ++i) {
            fresh[i][r] = f[i];
            transformed[i][r] = config.a * t[i];
        }
    });

    TestReport report;
    report.name = "stability[" + generator.name() + "]";
    report.seed = seed;
    double n_eff = static_cast<double>(reps) / 2.0;
    for (std::uint64_t i = 0; i < k; ++i) {
        double d = ks_statistic_two_sample(fresh[i], transformed[i]);
        report.statistics.push_back({"marginal_" + std::to_string(i + 1) + "_ks", d,
                                     config.ks_threshold, -1, ks_p_value(d, n_eff)});
    }
    // pooled pairwise gaps
    std::vector<double> gaps_f, gaps_t;
    gaps_f.reserve(reps * (k - 1));
    gaps_t.reserve(reps * (k - 1));
    for (std::uint64_t i = 0; i + 1 < k; ++i) {
        for (std::uint64_t r = 0; r < reps; ++r) {
            gaps_f.push_back(fresh[i + 1][r] - fresh[i][r]);
            gaps_t.push_back(transformed[i + 1][r] - transformed[i][r]);
        }
    }
    if (!gaps_f.empty()) {
        double d = ks_statistic_two_sample(gaps_f, gaps_t);
        report.statistics.push_back({"pooled_gap_ks", d, config.ks_threshold, -1,
                                     ks_p_value(d, static_cast<double>(gaps_f.size()) / 2.0)});
    }
    report.finalize();
    return report;
}

} // namespace lesieve
