#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lesieve/errors.hpp"

namespace lesieve {

struct SampleMeta {
    std::uint64_t seed = 0;
    std::uint64_t replicas = 0;
    std::string generator;
};

struct EmpiricalSample {
    std::vector<double> values;
    SampleMeta meta;
};

// One named statistic with its acceptance threshold.  `pass` compares
// according to `direction` (-1: value must be below threshold, +1: above).
struct Statistic {
    std::string label;
    double value = 0.0;
    double threshold = 0.0;
    int direction = -1;
    double p_value = std::numeric_limits<double>::quiet_NaN();

    bool pass() const {
        return direction < 0 ? value < threshold : value > threshold;
    }
};

struct TestReport {
    std::string name;
    std::vector<Statistic> statistics;
    bool pass = false;
    std::uint64_t seed = 0;
    std::string config_hash;

    void finalize(); // pass = all statistics pass
    nlohmann::json to_json() const;
};

// sup-norm distance between the empirical cdf of `sample` and `cdf`.
double ks_statistic_one_sample(std::vector<double> sample,
                               const std::function<double(double)>& cdf);

// two-sample Kolmogorov-Smirnov statistic
double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b);

// Asymptotic Kolmogorov p-value Q(sqrt(n_eff) * d).
double ks_p_value(double d, double n_eff);

TestReport ks_one_sample(const EmpiricalSample& sample,
                         const std::function<double(double)>& cdf,
                         const std::string& name, double threshold = 0.02);

// Chi-square against a discrete pmf on {lo..hi} with a pooled tail bucket
// for values > hi.  Bins with expected count < min_expected are merged with
// their right neighbor.  Throws ValidationError if fewer than 2 bins remain.
struct ChiSquareResult {
    double statistic = 0.0;
    std::uint64_t dof = 0;
    double p_value = 0.0;
};
ChiSquareResult chi_square_discrete(const std::vector<std::int64_t>& sample,
                                    const std::function<double(std::int64_t)>& pmf,
                                    std::int64_t lo, std::int64_t hi,
                                    double min_expected = 5.0);

// Upper-tail chi-square p-value (regularized incomplete gamma).
double chi_square_sf(double statistic, double dof);

// log-log regression slope of the empirical survival function over the
// given quantile range; estimates the tail index alpha.
double tail_index(const EmpiricalSample& sample, double q_lo, double q_hi);

std::string config_hash(const nlohmann::json& config);

} // namespace lesieve
