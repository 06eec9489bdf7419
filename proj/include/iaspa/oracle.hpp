#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iaspa/metrics.hpp"
#include "iaspa/optimizer.hpp"
#include "iaspa/problem.hpp"

namespace iaspa {

struct BruteForceResult {
    std::vector<int> best_subset;  // lexicographically first maximizer
    double best_S = 0;
    std::uint64_t subsets_evaluated = 0;
    int k = 0;
    std::uint64_t problem_hash = 0;
};

/// Exact maximizer of S over all k-subsets of the candidate set, enumerated
/// in lexicographic index order. Uses its own scalar evaluation path (plain
/// loops, long double accumulation), independent of the placement kernels.
/// Refuses with CapExceededError when C(|X|, k) exceeds `cap`.
BruteForceResult brute_force_optimal(const PlacementProblem& problem, int k,
                                     std::uint64_t cap = 200000);

struct BoundCertificate {
    double greedy_S = 0;
    double optimal_S = 0;
    double ratio = 0;  // greedy_S / optimal_S
    double bound = 0;  // 1 - exp(-n(1-eps)/k)
    int n = 0;
    int k = 0;
    double epsilon = 0;
    bool pass = false;
};

/// Checks S(T_n) >= (1 - e^{-n(1-eps)/k}) * S(T_k*). Throws ValidationError
/// on mismatched problem hashes.
BoundCertificate certify_bound(const PlacementResult& greedy, const BruteForceResult& oracle,
                               const PlacementProblem& problem, double epsilon);

struct BaselineResult {
    int draws = 0;
    std::vector<std::vector<int>> subsets;
    std::vector<MetricsReport> per_draw;
    std::vector<double> per_draw_S;
    MetricsReport averaged;  // statistics are arithmetic means of per-draw statistics
};

/// `draws` independent uniform k-subsets without replacement from the
/// candidate set (seeded, reproducible).
BaselineResult random_baseline(const PlacementProblem& problem, int count_towers, int draws,
                               std::uint64_t seed);

struct PropertyBlock {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::vector<std::string> counterexamples;  // inputs + values, verbatim
    bool vacuous = false;

    bool pass() const { return failures == 0; }
};

struct PropertySuiteReport {
    PropertyBlock monotonicity;        // T1 subset of T2 -> S(T1) <= S(T2) + 1e-12
    PropertyBlock diminishing_returns; // A subset of B, t not in B -> G(t|A) >= G(t|B) - 1e-9
    PropertyBlock threshold_integral;  // |S_integral - S_eval| / max(S_eval,1e-12) < 1e-3 @1e5
    bool pass() const {
        return monotonicity.pass() && diminishing_returns.pass() && threshold_integral.pass();
    }
    std::string to_text() const;
};

/// trials scales the blocks: `trials` diminishing-returns triples,
/// trials/5 nesting pairs, trials/20 threshold-integral instances.
/// trials = 0 is a vacuous pass (flagged). Failures are reported, not thrown.
PropertySuiteReport property_suite(const PlacementProblem& problem, int trials,
                                   std::uint64_t seed);

}  // namespace iaspa
