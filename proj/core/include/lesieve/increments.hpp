#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lesieve/rng.hpp"

namespace lesieve {

enum class LawKind { Geometric, Sibuya, DaviesPareto, ExplicitPmf, DegenerateOne };

// An increment distribution on {1,2,...} with p_1 < 1 (the walk step law).
// DegenerateOne (xi == 1) is a flagged test-only exception to p_1 < 1; limit
// theorem harnesses reject it.  Immutable after construction, shareable
// across workers.
class IncrementLaw {
public:
    static IncrementLaw geometric(double p);
    static IncrementLaw sibuya(double alpha);
    static IncrementLaw davies_pareto(double alpha, std::uint64_t shift);
    static IncrementLaw explicit_pmf(std::vector<double> weights);
    static IncrementLaw degenerate_one();

    // Descriptor form used in experiment configs, e.g.
    //   {"kind": "sibuya", "alpha": 0.5}
    static IncrementLaw from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    std::string describe() const;

    LawKind kind() const { return kind_; }

    // E xi; +infinity for the heavy-tailed kinds.
    double mean() const { return mu_; }
    bool has_finite_mean() const { return std::isfinite(mu_); }

    // Tail index for the Davies-class kinds (Sibuya, DaviesPareto).
    std::optional<double> tail_alpha() const { return alpha_; }

    bool is_degenerate() const { return kind_ == LawKind::DegenerateOne; }

    // P{xi = n}; 0 outside the support.
    double pmf(std::uint64_t n) const;

    // log P{xi > n}; survival(0) = 1.  For Sibuya this is the exact product
    // prod_{j<=n} (1 - alpha/j), evaluated as
    // lgamma(n+1-alpha) - lgamma(n+1) - lgamma(1-alpha).
    double log_survival(std::uint64_t n) const;
    double survival(std::uint64_t n) const;

    // Exact draw.  Sibuya values above 2^40 come from continuous log-domain
    // inversion of the asymptotic survival n^{-alpha}/Gamma(1-alpha) and the
    // result saturates at 2^63-1; consumers needing the far tail should use
    // sample_log.
    std::uint64_t sample(RandomStream& rng) const;

    // log of a draw, exact in the log domain for arbitrarily large values.
    double sample_log(RandomStream& rng) const;

    // Numerical check of E xi log xi < infinity (partial sum to 10^6 plus a
    // remainder estimate from the tail decay).  Heavy-tailed kinds report
    // false; finite-support kinds true.
    bool xlogx_finite() const;

    // Truncated sum n log n p_n over n <= limit (diagnostic).
    double xlogx_moment_truncated(std::uint64_t limit = 1000000) const;

private:
    IncrementLaw() = default;

    LawKind kind_ = LawKind::DegenerateOne;
    double p_ = 0.0;                 // Geometric parameter
    double alpha_value_ = 0.0;       // tail index value, when set
    std::optional<double> alpha_;
    std::uint64_t shift0_ = 1;       // DaviesPareto lattice scale (shift + 1)
    double mu_ = 1.0;
    std::vector<double> weights_;    // ExplicitPmf, normalized, index 0 -> n=1
    std::vector<double> cum_;        // ExplicitPmf cdf
};

// Independent Sibuya sampler from the Bernoulli-min construction
// S = min{n : B_n = 1}, P{B_i = 1} = alpha/i.  Trials are simulated one by
// one up to a cutoff; past the cutoff the minimum of the remaining trials is
// drawn by conditional inversion of the same Bernoulli product.  Used as a
// cross-validation oracle for IncrementLaw::sample.
std::uint64_t sample_sibuya_bernoulli(double alpha, RandomStream& rng);

// log P{Sibuya(alpha) > n} for real n >= 0.
double sibuya_log_survival(double alpha, double n);

} // namespace lesieve
