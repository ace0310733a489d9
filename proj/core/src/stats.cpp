#include "lesieve/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

namespace lesieve {

void TestReport::finalize() {
    pass = !statistics.empty() &&
           std::all_of(statistics.begin(), statistics.end(),
                       [](const Statistic& s) { return s.pass(); });
}

nlohmann::json TestReport::to_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["verdict"] = pass ? "PASS" : "FAIL";
    j["seed"] = seed;
    j["config_hash"] = config_hash;
    nlohmann::json stats = nlohmann::json::array();
    for (const auto& s : statistics) {
        nlohmann::json e;
        e["label"] = s.label;
        e["value"] = s.value;
        e["threshold"] = s.threshold;
        e["direction"] = s.direction < 0 ? "below" : "above";
        e["pass"] = s.pass();
        if (!std::isnan(s.p_value)) e["p_value"] = s.p_value;
        stats.push_back(e);
    }
    j["statistics"] = stats;
    return j;
}

double ks_statistic_one_sample(std::vector<double> sample,
                               const std::function<double(double)>& cdf) {
    if (sample.empty()) throw ValidationError("ks_one_sample: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    return d;
}

double ks_statistic_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw ValidationError("ks_two_sample: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_p_value(double d, double n_eff) {
    double lambda = (std::sqrt(n_eff) + 0.12 + 0.11 / std::sqrt(n_eff)) * d;
    if (lambda < 0.2) return 1.0; // the alternating series is unusable near 0
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        if (term < 1e-12) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestReport ks_one_sample(const EmpiricalSample& sample,
                         const std::function<double(double)>& cdf,
                         const std::string& name, double threshold) {
    double d = ks_statistic_one_sample(sample.values, cdf);
    TestReport report;
    report.name = name;
    report.seed = sample.meta.seed;
    Statistic stat{"ks_distance", d, threshold, -1,
                   ks_p_value(d, static_cast<double>(sample.values.size()))};
    report.statistics.push_back(stat);
    report.finalize();
    return report;
}

double chi_square_sf(double statistic, double dof) {
    if (statistic <= 0.0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, statistic / 2.0);
}

ChiSquareResult chi_square_discrete(const std::vector<std::int64_t>& sample,
                                    const std::function<double(std::int64_t)>& pmf,
                                    std::int64_t lo, std::int64_t hi,
                                    double min_expected) {
    if (sample.empty()) throw ValidationError("chi_square: empty sample");
    if (hi < lo) throw ValidationError("chi_square: hi < lo");
    const double n = static_cast<double>(sample.size());

    // categories: {<= lo}, lo+1, ..., hi-1, {>= hi}... represented as bins
    // [lo..hi] where lo collects everything below and hi everything above.
    const std::size_t nbins = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> observed(nbins, 0.0), expected(nbins, 0.0);
    for (std::int64_t v : sample) {
        std::int64_t b = std::clamp(v, lo, hi);
        observed[static_cast<std::size_t>(b - lo)] += 1.0;
    }
    double mass_below_and_in = 0.0;
    for (std::size_t i = 0; i + 1 < nbins; ++i) {
        std::int64_t v = lo + static_cast<std::int64_t>(i);
        double p = pmf(v);
        if (i == 0) {
            // pool the pmf mass at or below lo: caller's pmf is pointwise, so
            // accumulate downward until negligible
            double extra = 0.0;
            for (std::int64_t w = v - 1; w >= v - 64; --w) {
                double pw = pmf(w);
                extra += pw;
                if (pw < 1e-15) break;
            }
            p += extra;
        }
        expected[i] = p * n;
        mass_below_and_in += p;
    }
    expected[nbins - 1] = std::max(0.0, 1.0 - mass_below_and_in) * n;

    // merge sparse bins rightward
    std::vector<double> obs_m, exp_m;
    double o_acc = 0.0, e_acc = 0.0;
    for (std::size_t i = 0; i < nbins; ++i) {
        o_acc += observed[i];
        e_acc += expected[i];
        if (e_acc >= min_expected) {
            obs_m.push_back(o_acc);
            exp_m.push_back(e_acc);
            o_acc = e_acc = 0.0;
        }
    }
    if (e_acc > 0.0 || o_acc > 0.0) {
        if (!exp_m.empty()) {
            obs_m.back() += o_acc;
            exp_m.back() += e_acc;
        }
    }
    if (exp_m.size() < 2)
        throw ValidationError("chi_square: degenerate binning (fewer than 2 bins)");

    double stat = 0.0;
    for (std::size_t i = 0; i < exp_m.size(); ++i) {
        double diff = obs_m[i] - exp_m[i];
        stat += diff * diff / exp_m[i];
    }
    ChiSquareResult result;
    result.statistic = stat;
    result.dof = exp_m.size() - 1;
    result.p_value = chi_square_sf(stat, static_cast<double>(result.dof));
    return result;
}

double tail_index(const EmpiricalSample& sample, double q_lo, double q_hi) {
    if (sample.values.size() < 10000)
        throw ValidationError("tail_index: at least 10^4 points required");
    if (!(q_lo < q_hi && q_lo > 0.0 && q_hi < 1.0))
        throw ValidationError("tail_index: quantile range must satisfy 0 < q_lo < q_hi < 1");
    std::vector<double> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    std::size_t i_lo = static_cast<std::size_t>(q_lo * static_cast<double>(n));
    std::size_t i_hi = static_cast<std::size_t>(q_hi * static_cast<double>(n));
    i_hi = std::min(i_hi, n - 1);
    if (i_hi - i_lo < 100)
        throw ValidationError("tail_index: insufficient tail points in quantile range");

    // regress log survival on log value
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double count = 0;
    double prev_x = -std::numeric_limits<double>::infinity();
    for (std::size_t i = i_lo; i <= i_hi; ++i) {
        double v = sorted[i];
        if (!(v > 0.0)) throw ValidationError("tail_index: positive sample required");
        double x = std::log(v);
        if (x == prev_x) continue; // ties contribute one point
        prev_x = x;
        double surv = 1.0 - static_cast<double>(i + 1) / static_cast<double>(n);
        if (surv <= 0.0) break;
        double y = std::log(surv);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        count += 1.0;
    }
    double denom = count * sxx - sx * sx;
    if (!(denom > 0.0)) throw ValidationError("tail_index: degenerate regression");
    double slope = (count * sxy - sx * sy) / denom;
    return -slope;
}

std::string config_hash(const nlohmann::json& config) {
    std::string canon = config.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace lesieve
