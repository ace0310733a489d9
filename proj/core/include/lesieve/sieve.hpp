#pragma once

#include <cstdint>
#include <vector>

#include "lesieve/increments.hpp"
#include "lesieve/rng.hpp"

namespace lesieve {

// Lazily extended realization of an increasing integer random walk
// R(0) = 0 < R(1) < R(2) < ...  Evaluating R(k) extends the path exactly
// once; re-evaluation returns the identical value.
class WalkPath {
public:
    WalkPath(const IncrementLaw& law, RandomStream stream,
             std::uint64_t max_length = std::uint64_t(1) << 31)
        : law_(&law), stream_(std::move(stream)), max_length_(max_length) {
        partial_sums_.push_back(0);
    }

    // R(k)
    std::uint64_t eval(std::uint64_t k);

    // xi_k, k >= 1
    std::uint64_t increment(std::uint64_t k);

    std::uint64_t realized_length() const { return partial_sums_.size() - 1; }

    // Largest k with R(k) <= bound (0 if R(1) > bound).
    std::uint64_t count_below(std::uint64_t bound);

    const IncrementLaw& law() const { return *law_; }

private:
    void extend_to(std::uint64_t k);

    const IncrementLaw* law_;
    RandomStream stream_;
    std::uint64_t max_length_;
    std::vector<std::uint64_t> partial_sums_; // partial_sums_[k] = R(k)
};

// Survivor bookkeeping for players 1..m across rounds.
struct SieveState {
    std::uint64_t m = 0;
    std::uint64_t round = 0;
    // original labels of the current survivors, strictly increasing, all <= m
    std::vector<std::uint64_t> original_labels;
    // elimination_round[i] is the round in which player i+1 left (0 = alive)
    std::vector<std::uint32_t> elimination_round;

    std::uint64_t survivor_count() const { return original_labels.size(); }
};

SieveState make_initial_state(std::uint64_t m);

// One round: survivors are the previous survivors at positions
// R(1), R(2), ... not exceeding the previous survivor count.  The walk must
// be fresh for this round.
SieveState sieve_round(const SieveState& state, WalkPath& walk);

// `rounds` applications of sieve_round with independent per-round walks.
// Walk substreams are derived as {replica, round}, so replicas are
// embarrassingly parallel and reproducible.
SieveState run_sieve(std::uint64_t m, const IncrementLaw& law, std::uint64_t rounds,
                     std::uint64_t seed, std::uint64_t replica = 0);

// T(M): first round with no survivors among 1..m.
std::uint64_t time_to_extinction(std::uint64_t m, const IncrementLaw& law,
                                 std::uint64_t seed, std::uint64_t replica = 0,
                                 std::uint64_t max_rounds = 1000000);

// A family of independent per-round walks sharing the {replica, round}
// substream layout; the coupling object for the exact duality checks.
class WalkFamily {
public:
    WalkFamily(const IncrementLaw& law, std::uint64_t rounds, std::uint64_t seed,
               std::uint64_t replica = 0,
               std::uint64_t max_length = std::uint64_t(1) << 31);

    WalkPath& walk(std::uint64_t round); // 1-based
    std::uint64_t rounds() const { return walks_.size(); }

private:
    std::vector<WalkPath> walks_;
};

// (R^(1) o ... o R^(n)(j))_{j=1..j_max}: survivor labels S_j^(n) realized by
// forward iteration of the walk family.  Faults on 64-bit index overflow
// (expected for infinite-mean laws at large n; use the log-domain route in
// the gwp module instead).
std::vector<std::uint64_t> composed_labels(WalkFamily& family, std::uint64_t n,
                                           std::uint64_t j_max);

// N_M^(i) for i = 0..n under the same walk family (recursion
// N^(i) = #{j : R^(i)(j) <= N^(i-1)}).
std::vector<std::uint64_t> forward_counts(WalkFamily& family, std::uint64_t m,
                                          std::uint64_t n);

// Distribution-equal backward composition route for S_j^(n): independent
// walks consumed innermost-first.  Equal in law to composed_labels by the
// composition identity.
std::vector<std::uint64_t> survivors_by_composition(const IncrementLaw& law,
                                                    std::uint64_t n, std::uint64_t j_max,
                                                    std::uint64_t seed,
                                                    std::uint64_t replica = 0);

} // namespace lesieve
