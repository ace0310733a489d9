#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lesieve/stats.hpp"

namespace lesieve {

// Registered Monte Carlo verification suites, one per limit theorem /
// structural identity.  Each runs a seeded simulation with thresholds pinned
// in code and returns a reproducible TestReport (bit-identical given the
// same seed, independent of thread count).
std::vector<std::string> theorem_ids();

// `overrides` may replace the default "law" descriptor and "replicas"; all
// thresholds are fixed.  Throws ValidationError for unknown ids or violated
// theorem hypotheses (naming the condition).
TestReport run_theorem(const std::string& id, std::uint64_t seed, unsigned threads,
                       const nlohmann::json& overrides);
TestReport run_theorem(const std::string& id, std::uint64_t seed, unsigned threads = 0);

// Runs every registered suite in registry order; aggregated JSON document
// {seed, reports: [...], all_pass}.
nlohmann::json run_all_theorems(std::uint64_t seed, unsigned threads = 0);

} // namespace lesieve
