#include "lesieve/increments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace lesieve {

namespace {

constexpr std::uint64_t kSibuyaExactMax = std::uint64_t(1) << 40;
constexpr std::uint64_t kValueSaturation = (std::uint64_t(1) << 63) - 1;

double require_in_open01(double x, const char* name) {
    if (!(x > 0.0 && x < 1.0))
        throw ValidationError(std::string(name) + " must lie in (0,1)");
    return x;
}

} // namespace

double sibuya_log_survival(double alpha, double n) {
    if (n <= 0.0) return 0.0;
    // P{xi > n} = Gamma(n+1-alpha) / (Gamma(n+1) Gamma(1-alpha))
    if (n <= static_cast<double>(kSibuyaExactMax))
        return std::lgamma(n + 1.0 - alpha) - std::lgamma(n + 1.0) - std::lgamma(1.0 - alpha);
    // Stirling regime: the ratio Gamma(n+1-alpha)/Gamma(n+1) is n^{-alpha}
    // up to O(alpha(1-alpha)/n), negligible past 2^40.
    return -alpha * std::log(n) - std::lgamma(1.0 - alpha);
}

IncrementLaw IncrementLaw::geometric(double p) {
    IncrementLaw law;
    law.kind_ = LawKind::Geometric;
    law.p_ = require_in_open01(p, "geometric p");
    law.mu_ = 1.0 / p;
    return law;
}

IncrementLaw IncrementLaw::sibuya(double alpha) {
    IncrementLaw law;
    law.kind_ = LawKind::Sibuya;
    law.alpha_value_ = require_in_open01(alpha, "sibuya alpha");
    law.alpha_ = alpha;
    law.mu_ = std::numeric_limits<double>::infinity();
    return law;
}

IncrementLaw IncrementLaw::davies_pareto(double alpha, std::uint64_t shift) {
    IncrementLaw law;
    law.kind_ = LawKind::DaviesPareto;
    law.alpha_value_ = require_in_open01(alpha, "davies_pareto alpha");
    law.alpha_ = alpha;
    law.shift0_ = shift + 1;
    law.mu_ = std::numeric_limits<double>::infinity();
    return law;
}

IncrementLaw IncrementLaw::explicit_pmf(std::vector<double> weights) {
    if (weights.empty())
        throw ValidationError("explicit_pmf: empty weight vector");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ValidationError("explicit_pmf: weights must be finite and nonnegative");
        total += w;
    }
    if (!(total > 0.0))
        throw ValidationError("explicit_pmf: weights sum to zero");
    for (double& w : weights) w /= total;
    if (weights[0] >= 1.0 - 1e-15)
        throw ValidationError("explicit_pmf: p_1 < 1 required");

    IncrementLaw law;
    law.kind_ = LawKind::ExplicitPmf;
    law.weights_ = std::move(weights);
    law.cum_.resize(law.weights_.size());
    double acc = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < law.weights_.size(); ++i) {
        acc += law.weights_[i];
        law.cum_[i] = acc;
        mean += static_cast<double>(i + 1) * law.weights_[i];
    }
    law.cum_.back() = 1.0;
    law.mu_ = mean;
    return law;
}

IncrementLaw IncrementLaw::degenerate_one() {
    IncrementLaw law;
    law.kind_ = LawKind::DegenerateOne;
    law.mu_ = 1.0;
    return law;
}

double IncrementLaw::pmf(std::uint64_t n) const {
    if (n == 0) return 0.0;
    switch (kind_) {
    case LawKind::Geometric:
        return p_ * std::exp(static_cast<double>(n - 1) * std::log1p(-p_));
    case LawKind::Sibuya:
        // S(n) = S(n-1)(1 - alpha/n), hence P{xi = n} = S(n-1) * alpha/n,
        // free of cancellation for large n.
        return std::exp(log_survival(n - 1)) * alpha_value_ / static_cast<double>(n);
    case LawKind::DaviesPareto: {
        double s_prev = survival(n - 1);
        double s_cur = survival(n);
        return std::max(0.0, s_prev - s_cur);
    }
    case LawKind::ExplicitPmf:
        return n <= weights_.size() ? weights_[n - 1] : 0.0;
    case LawKind::DegenerateOne:
        return n == 1 ? 1.0 : 0.0;
    }
    return 0.0;
}

double IncrementLaw::log_survival(std::uint64_t n) const {
    if (n == 0) return 0.0;
    switch (kind_) {
    case LawKind::Geometric:
        return static_cast<double>(n) * std::log1p(-p_);
    case LawKind::Sibuya:
        return sibuya_log_survival(alpha_value_, static_cast<double>(n));
    case LawKind::DaviesPareto: {
        double ls = -alpha_value_ * (std::log(static_cast<double>(n)) -
                                     std::log(static_cast<double>(shift0_)));
        return std::min(0.0, ls);
    }
    case LawKind::ExplicitPmf: {
        if (n >= weights_.size()) return -std::numeric_limits<double>::infinity();
        double s = 1.0 - cum_[n - 1];
        return s > 0.0 ? std::log(s) : -std::numeric_limits<double>::infinity();
    }
    case LawKind::DegenerateOne:
        return -std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

double IncrementLaw::survival(std::uint64_t n) const {
    return std::exp(log_survival(n));
}

std::uint64_t IncrementLaw::sample(RandomStream& rng) const {
    switch (kind_) {
    case LawKind::Geometric: {
        double v = rng.uniform01();
        // xi = min{n : (1-p)^n <= v}
        double x = std::ceil(std::log(v) / std::log1p(-p_));
        if (!(x >= 1.0)) return 1;
        if (x >= static_cast<double>(kValueSaturation)) return kValueSaturation;
        return static_cast<std::uint64_t>(x);
    }
    case LawKind::Sibuya: {
        double log_v = std::log(rng.uniform01());
        if (log_v >= sibuya_log_survival(alpha_value_, static_cast<double>(kSibuyaExactMax))) {
            // exact inverse transform: min{n : log S(n) <= log v}
            std::uint64_t lo = 1, hi = kSibuyaExactMax;
            while (lo < hi) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                if (sibuya_log_survival(alpha_value_, static_cast<double>(mid)) <= log_v)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            return lo;
        }
        double log_n = (-log_v - std::lgamma(1.0 - alpha_value_)) / alpha_value_;
        if (log_n >= 63.0 * 0.6931471805599453) return kValueSaturation;
        return static_cast<std::uint64_t>(std::llround(std::exp(log_n)));
    }
    case LawKind::DaviesPareto: {
        double v = rng.uniform01();
        double x = static_cast<double>(shift0_) * std::pow(v, -1.0 / alpha_value_);
        if (x >= static_cast<double>(kValueSaturation)) return kValueSaturation;
        std::uint64_t n = static_cast<std::uint64_t>(std::ceil(x));
        if (n <= shift0_) n = shift0_ + 1;
        // guard against rounding at the lattice boundary
        while (survival(n) > v) ++n;
        while (n > shift0_ + 1 && survival(n - 1) <= v) --n;
        return n;
    }
    case LawKind::ExplicitPmf: {
        double v = rng.uniform01();
        auto it = std::lower_bound(cum_.begin(), cum_.end(), v);
        return static_cast<std::uint64_t>(it - cum_.begin()) + 1;
    }
    case LawKind::DegenerateOne:
        return 1;
    }
    return 1;
}

double IncrementLaw::sample_log(RandomStream& rng) const {
    if (kind_ == LawKind::Sibuya) {
        double log_v = std::log(rng.uniform01());
        if (log_v >= sibuya_log_survival(alpha_value_, static_cast<double>(kSibuyaExactMax))) {
            std::uint64_t lo = 1, hi = kSibuyaExactMax;
            while (lo < hi) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                if (sibuya_log_survival(alpha_value_, static_cast<double>(mid)) <= log_v)
                    hi = mid;
                else
                    lo = mid + 1;
            }
            return std::log(static_cast<double>(lo));
        }
        return (-log_v - std::lgamma(1.0 - alpha_value_)) / alpha_value_;
    }
    if (kind_ == LawKind::DaviesPareto) {
        double v = rng.uniform01();
        double log_x = std::log(static_cast<double>(shift0_)) - std::log(v) / alpha_value_;
        if (log_x < 40.0 * 0.6931471805599453) {
            double x = static_cast<double>(shift0_) * std::pow(v, -1.0 / alpha_value_);
            std::uint64_t n = static_cast<std::uint64_t>(std::ceil(x));
            if (n <= shift0_) n = shift0_ + 1;
            while (survival(n) > v) ++n;
            while (n > shift0_ + 1 && survival(n - 1) <= v) --n;
            return std::log(static_cast<double>(n));
        }
        return log_x;
    }
    return std::log(static_cast<double>(sample(rng)));
}

std::uint64_t sample_sibuya_bernoulli(double alpha, RandomStream& rng) {
    require_in_open01(alpha, "alpha");
    constexpr std::uint64_t kCutoff = 1 << 16;
    for (std::uint64_t i = 1; i <= kCutoff; ++i) {
        if (rng.uniform01() < alpha / static_cast<double>(i))
            return i;
    }
    // No success among the first kCutoff trials.  The minimum over the
    // remaining trials has conditional survival S(n)/S(kCutoff) with S the
    // Bernoulli product prod_{j<=n}(1-alpha/j); invert it directly.
    double log_target = std::log(rng.uniform01()) +
                        sibuya_log_survival(alpha, static_cast<double>(kCutoff));
    if (log_target >= sibuya_log_survival(alpha, static_cast<double>(std::uint64_t(1) << 40))) {
        std::uint64_t lo = kCutoff + 1, hi = std::uint64_t(1) << 40;
        while (lo < hi) {
            std::uint64_t mid = lo + (hi - lo) / 2;
            if (sibuya_log_survival(alpha, static_cast<double>(mid)) <= log_target)
                hi = mid;
            else
                lo = mid + 1;
        }
        return lo;
    }
    double log_n = (-log_target - std::lgamma(1.0 - alpha)) / alpha;
    if (log_n >= 63.0 * 0.6931471805599453)
        return (std::uint64_t(1) << 63) - 1;
    return static_cast<std::uint64_t>(std::llround(std::exp(log_n)));
}

bool IncrementLaw::xlogx_finite() const {
    switch (kind_) {
    case LawKind::ExplicitPmf:
    case LawKind::DegenerateOne:
        return true;
    default:
        break;
    }
    // Tail-decay test: fit the local survival exponent between 2^20 and 2^30.
    // The truncated sum of n log n p_n has a finite remainder iff the tail
    // decays strictly faster than n^{-1}.
    double ls1 = log_survival(std::uint64_t(1) << 20);
    double ls2 = log_survival(std::uint64_t(1) << 30);
    if (ls2 == -std::numeric_limits<double>::infinity()) return true;
    double slope = (ls1 - ls2) / (10.0 * 0.6931471805599453);
    return slope > 1.0 + 1e-9;
}

double IncrementLaw::xlogx_moment_truncated(std::uint64_t limit) const {
    double acc = 0.0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        double p = pmf(n);
        if (p == 0.0 && n > weights_.size() && kind_ == LawKind::ExplicitPmf) break;
        acc += static_cast<double>(n) * std::log(static_cast<double>(n)) * p;
    }
    return acc;
}

IncrementLaw IncrementLaw::from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw ValidationError("law descriptor: object with a \"kind\" field required");
    std::string kind = j.at("kind").get<std::string>();

    auto check_keys = [&](std::initializer_list<const char*> allowed) {
        std::set<std::string> ok(allowed.begin(), allowed.end());
        ok.insert("kind");
        for (auto it = j.begin(); it != j.end(); ++it)
            if (!ok.count(it.key()))
                throw ValidationError("law descriptor: unknown key \"" + it.key() + "\"");
    };

    if (kind == "geometric") {
        check_keys({"p"});
        if (!j.contains("p")) throw ValidationError("law descriptor: missing field \"p\"");
        return geometric(j.at("p").get<double>());
    }
    if (kind == "sibuya") {
        check_keys({"alpha"});
        if (!j.contains("alpha")) throw ValidationError("law descriptor: missing field \"alpha\"");
        return sibuya(j.at("alpha").get<double>());
    }
    if (kind == "davies_pareto") {
        check_keys({"alpha", "shift"});
        if (!j.contains("alpha")) throw ValidationError("law descriptor: missing field \"alpha\"");
        return davies_pareto(j.at("alpha").get<double>(),
                             j.value("shift", std::uint64_t(0)));
    }
    if (kind == "explicit_pmf") {
        check_keys({"weights"});
        if (!j.contains("weights"))
            throw ValidationError("law descriptor: missing field \"weights\"");
        return explicit_pmf(j.at("weights").get<std::vector<double>>());
    }
    if (kind == "degenerate_one") {
        check_keys({});
        return degenerate_one();
    }
    throw ValidationError("law descriptor: unknown kind \"" + kind + "\"");
}

nlohmann::json IncrementLaw::to_json() const {
    nlohmann::json j;
    switch (kind_) {
    case LawKind::Geometric:
        j["kind"] = "geometric";
        j["p"] = p_;
        break;
    case LawKind::Sibuya:
        j["kind"] = "sibuya";
        j["alpha"] = alpha_value_;
        break;
    case LawKind::DaviesPareto:
        j["kind"] = "davies_pareto";
        j["alpha"] = alpha_value_;
        j["shift"] = shift0_ - 1;
        break;
    case LawKind::ExplicitPmf:
        j["kind"] = "explicit_pmf";
        j["weights"] = weights_;
        break;
    case LawKind::DegenerateOne:
        j["kind"] = "degenerate_one";
        break;
    }
    return j;
}

std::string IncrementLaw::describe() const {
    return to_json().dump();
}

} // namespace lesieve
