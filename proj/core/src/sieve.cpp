#include "lesieve/sieve.hpp"

#include <algorithm>

namespace lesieve {

namespace {
constexpr std::uint64_t kWalkValueCap = std::uint64_t(1) << 62;
}

void WalkPath::extend_to(std::uint64_t k) {
    if (k > max_length_)
        throw ResourceError("WalkPath: index " + std::to_string(k) +
                            " exceeds configured max path length");
    while (partial_sums_.size() <= k) {
        std::uint64_t step = law_->sample(stream_);
        std::uint64_t prev = partial_sums_.back();
        if (prev > kWalkValueCap - step)
            throw ResourceError("WalkPath: partial sum overflow");
        partial_sums_.push_back(prev + step);
    }
}

std::uint64_t WalkPath::eval(std::uint64_t k) {
    extend_to(k);
    return partial_sums_[k];
}

std::uint64_t WalkPath::increment(std::uint64_t k) {
    if (k == 0) throw ValidationError("WalkPath::increment: k >= 1 required");
    extend_to(k);
    return partial_sums_[k] - partial_sums_[k - 1];
}

std::uint64_t WalkPath::count_below(std::uint64_t bound) {
    // strictly increasing with unit-or-larger steps, so at most `bound` terms
    std::uint64_t k = 0;
    while (eval(k + 1) <= bound) ++k;
    return k;
}

SieveState make_initial_state(std::uint64_t m) {
    if (m == 0) throw ValidationError("sieve: m >= 1 required");
    SieveState state;
    state.m = m;
    state.round = 0;
    state.original_labels.resize(m);
    for (std::uint64_t i = 0; i < m; ++i) state.original_labels[i] = i + 1;
    state.elimination_round.assign(m, 0);
    return state;
}

SieveState sieve_round(const SieveState& state, WalkPath& walk) {
    SieveState next;
    next.m = state.m;
    next.round = state.round + 1;
    next.elimination_round = state.elimination_round;

    const std::uint64_t count = state.survivor_count();
    std::uint64_t k = 1;
    std::vector<bool> kept(count, false);
    while (true) {
        std::uint64_t pos = walk.eval(k);
        if (pos > count) break;
        kept[pos - 1] = true;
        ++k;
    }
    next.original_labels.reserve(k - 1);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint64_t label = state.original_labels[i];
        if (kept[i]) {
            next.original_labels.push_back(label);
        } else {
            next.elimination_round[label - 1] = static_cast<std::uint32_t>(next.round);
        }
    }
    return next;
}

SieveState run_sieve(std::uint64_t m, const IncrementLaw& law, std::uint64_t rounds,
                     std::uint64_t seed, std::uint64_t replica) {
    SieveState state = make_initial_state(m);
    for (std::uint64_t r = 1; r <= rounds; ++r) {
        WalkPath walk(law, RandomStream::derive(seed, {replica, r}));
        state = sieve_round(state, walk);
    }
    return state;
}

std::uint64_t time_to_extinction(std::uint64_t m, const IncrementLaw& law,
                                 std::uint64_t seed, std::uint64_t replica,
                                 std::uint64_t max_rounds) {
    if (law.is_degenerate())
        throw ValidationError("time_to_extinction: degenerate law never eliminates");
    SieveState state = make_initial_state(m);
    while (state.survivor_count() > 0) {
        if (state.round >= max_rounds)
            throw ResourceError("time_to_extinction: round cap exceeded");
        WalkPath walk(law, RandomStream::derive(seed, {replica, state.round + 1}));
        state = sieve_round(state, walk);
    }
    return state.round;
}

WalkFamily::WalkFamily(const IncrementLaw& law, std::uint64_t rounds, std::uint64_t seed,
                       std::uint64_t replica, std::uint64_t max_length) {
    walks_.reserve(rounds);
    for (std::uint64_t r = 1; r <= rounds; ++r)
        walks_.emplace_back(law, RandomStream::derive(seed, {replica, r}), max_length);
}

WalkPath& WalkFamily::walk(std::uint64_t round) {
    if (round == 0 || round > walks_.size())
        throw ValidationError("WalkFamily: round out of range");
    return walks_[round - 1];
}

std::vector<std::uint64_t> composed_labels(WalkFamily& family, std::uint64_t n,
                                           std::uint64_t j_max) {
    if (n > family.rounds())
        throw ValidationError("composed_labels: n exceeds family rounds");
    std::vector<std::uint64_t> out(j_max);
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        // S_j^(n) = R^(1) o R^(2) o ... o R^(n)(j): innermost walk is R^(n)
        std::uint64_t value = j;
        for (std::uint64_t r = n; r >= 1; --r) {
            value = family.walk(r).eval(value);
        }
        out[j - 1] = value;
    }
    return out;
}

std::vector<std::uint64_t> forward_counts(WalkFamily& family, std::uint64_t m,
                                          std::uint64_t n) {
    std::vector<std::uint64_t> counts(n + 1);
    counts[0] = m;
    for (std::uint64_t r = 1; r <= n; ++r)
        counts[r] = family.walk(r).count_below(counts[r - 1]);
    return counts;
}

std::vector<std::uint64_t> survivors_by_composition(const IncrementLaw& law,
                                                    std::uint64_t n, std::uint64_t j_max,
                                                    std::uint64_t seed,
                                                    std::uint64_t replica) {
    WalkFamily family(law, n, seed, replica);
    std::vector<std::uint64_t> out(j_max);
    for (std::uint64_t j = 1; j <= j_max; ++j) {
        // backward composition R^(n) o ... o R^(1)(j), the distributional
        // mirror of the forward iteration
        std::uint64_t value = j;
        for (std::uint64_t r = 1; r <= n; ++r)
            value = family.walk(r).eval(value);
        out[j - 1] = value;
    }
    return out;
}

} // namespace lesieve
