#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "lesieve/increments.hpp"
#include "lesieve/rng.hpp"
#include "lesieve/sieve.hpp"
#include "lesieve/stats.hpp"

namespace lesieve {

// A finite nondecreasing sequence of nonnegative points with multiset
// semantics (repeats are meaningful clusters).  Points beyond `truncation`
// are not represented.
struct PointPattern {
    std::vector<double> points;
    double truncation = std::numeric_limits<double>::infinity();
};

// X bullet R: keeps points at indices R(1), R(2), ... while they fit.
PointPattern thin(const PointPattern& pattern, WalkPath& walk);

// a . X: multiplies every point and the truncation by a.
PointPattern scale(const PointPattern& pattern, double a);

// Groups points lying within `tolerance` of the running cluster anchor;
// returns (location, multiplicity) pairs.
std::vector<std::pair<double, std::uint64_t>> cluster_stats(const PointPattern& pattern,
                                                            double tolerance);

enum class ProfileKind { Identity, PowerLaw, PiecewiseRandom };

// A nondecreasing random process G with the one-scale self-similarity
// (G(ct)) = (cG(t)) in law for its scale factor c.  PiecewiseRandom draws a
// nondecreasing staircase on one multiplicative period and extends it by
// G(c^k t) = c^k G(t), which makes the self-similarity hold pointwise.
struct SelfSimilarProfile {
    ProfileKind kind = ProfileKind::Identity;
    double beta = 1.0;         // PowerLaw exponent
    double scale_factor = 2.0; // c: mu for the finite-mean SFPE, alpha for the heavy one
};

class ProfileRealization {
public:
    double operator()(double t) const;

    ProfileKind kind = ProfileKind::Identity;
    double beta = 1.0;
    double period = 2.0; // > 1; the multiplicative period used internally
    std::vector<double> jump_at;  // staircase jump locations in [1, period)
    std::vector<double> level;    // staircase levels in [1, period)
};

ProfileRealization realize_profile(const SelfSimilarProfile& profile, RandomStream& rng);

// Samples a point process at arbitrary increasing indices.  This is the
// generator abstraction behind the stability tests: huge thinning indices
// (heavy-tailed walks) are reachable without materializing all points.
class PatternSampler {
public:
    virtual ~PatternSampler() = default;
    // indices strictly increasing, 1-based; appends one point per index
    virtual std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                          RandomStream& rng) const = 0;
    virtual std::string name() const = 0;
};

// Unit-rate Poisson process: point at index n is a Gamma(n, 1) partial sum.
class PoissonProcessSampler final : public PatternSampler {
public:
    std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                  RandomStream& rng) const override;
    std::string name() const override { return "poisson1"; }
};

// Running maxima of iid standard exponentials (the heavy-tailed SFPE
// solution with identity profile).  Point at index n is the maximum of n
// exponentials, drawn incrementally by inversion of (1-e^{-x})^m.
class ExpMaximaSampler final : public PatternSampler {
public:
    std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                  RandomStream& rng) const override;
    std::string name() const override { return "exp_maxima"; }
};

// Partial sums of iid martingale-limit proxies (finite-mean SFPE solution
// with identity profile).  Indices must stay desk-scale.
class ZSumSampler final : public PatternSampler {
public:
    ZSumSampler(IncrementLaw law, std::uint64_t n_fixed = 14);
    std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                  RandomStream& rng) const override;
    std::string name() const override { return "z_sum"; }

private:
    IncrementLaw law_;
    std::uint64_t n_fixed_;
};

// Applies a fresh profile realization G to the points of an inner sampler.
class ProfiledSampler final : public PatternSampler {
public:
    ProfiledSampler(const PatternSampler& inner, SelfSimilarProfile profile);
    std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                  RandomStream& rng) const override;
    std::string name() const override;

private:
    const PatternSampler* inner_;
    SelfSimilarProfile profile_;
};

// Deterministic lattice 1, 2, 3, ... (a designed stability_test failure case).
class LatticeSampler final : public PatternSampler {
public:
    std::vector<double> points_at(std::span<const std::uint64_t> indices,
                                  RandomStream& rng) const override;
    std::string name() const override { return "lattice"; }
};

// X_j = G(Z_inf^(1) + ... + Z_inf^(j)), j = 1..k_points.
PointPattern make_stable_finite_mean(const IncrementLaw& law,
                                     const SelfSimilarProfile& profile,
                                     std::uint64_t k_points, std::uint64_t seed);

// X_j = G(Z*^(1) v ... v Z*^(j)) with Z* standard exponential (Sibuya case).
PointPattern make_stable_infinite_mean(double alpha, const SelfSimilarProfile& profile,
                                       std::uint64_t k_points, std::uint64_t seed);

struct StabilityConfig {
    double a = 0.5;                 // rescaling constant
    std::uint64_t k_marginals = 10;
    std::uint64_t replicas = 10000;
    double ks_threshold = 0.02;
    unsigned threads = 0;
};

// Compares the first k marginals (and the pairwise gaps) of a . (X bullet R)
// against a fresh X, coordinatewise two-sample KS.  PASS iff every statistic
// is below the threshold.
TestReport stability_test(const PatternSampler& generator, const IncrementLaw& walk_law,
                          const StabilityConfig& config, std::uint64_t seed);

} // namespace lesieve
