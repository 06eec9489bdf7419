#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "iaspa/problem.hpp"

namespace iaspa {

struct OptimizerConfig {
    enum class Termination { Budget, Coverage };

    double epsilon = 0.0;  // in [0, 1)
    Termination termination = Termination::Budget;
    int budget_k = 1;            // Budget mode
    double coverage_beta = 0.0;  // Coverage mode
    std::uint64_t seed = 0;
    std::vector<int> fixed;  // candidate indices, never re-selected
    bool lazy = false;       // stale-bound argmax accelerator (epsilon = 0 only)
    int workers = 0;         // <= 0: hardware concurrency
};

enum class TerminationReason { Budget, Coverage, Exhausted };

struct IterationRecord {
    int chosen = -1;
    double chosen_gain = 0;
    double max_gain = 0;
    int omega_size = 0;  // |Omega_eps| at this iteration
    double S_after = 0;
};

struct PlacementResult {
    TransmitterSet selection;
    std::vector<IterationRecord> trajectory;
    TerminationReason terminated_by = TerminationReason::Exhausted;
    double S_fixed = 0;  // S of the fixed set before any selection
    double epsilon = 0;
    std::uint64_t seed = 0;
    std::uint64_t problem_hash = 0;
};

/// Greedy interference-aware placement: per iteration, evaluate the marginal
/// gain of every unselected candidate against the frozen aggregate raster,
/// form the near-optimal set Omega_eps = {x : gain >= (1-eps) * max gain},
/// draw uniformly from it with the seeded generator, and re-check
/// termination. Stops early (Exhausted) when every remaining gain is <= 1e-15.
/// Coverage mode raises InfeasibleTargetError when beta exceeds S over the
/// full candidate set.
PlacementResult ia_spa(const PlacementProblem& problem, const OptimizerConfig& cfg);

/// S over all candidates plus the fixed set: the cheap upper bound used by
/// the Coverage-mode feasibility check.
double feasibility_precheck(const PlacementProblem& problem, const std::vector<int>& fixed);

/// Exact-argmax scheduler over stale gain bounds. Diminishing returns makes
/// any previously computed gain an upper bound on the current one, so entries
/// are refreshed only while they could still reach the maximum; the returned
/// maximizer set equals exhaustive evaluation's. Only valid for concave
/// weights.
class LazyGainSchedule {
  public:
    explicit LazyGainSchedule(int n_candidates);

    struct ArgmaxSet {
        double max_gain = 0;
        std::vector<int> maximizers;  // ascending candidate order
        int refreshed = 0;            // gain evaluations spent this round
    };

    /// fresh_gain(c) must return the exact current gain of candidate c.
    ArgmaxSet next(const std::function<double(int)>& fresh_gain);
    void remove(int candidate);

  private:
    struct Entry {
        double bound;
        int cand;
        int updated;
    };
    std::vector<Entry> heap_;  // max-heap by bound
    std::vector<char> alive_;
    int round_ = 0;
};

/// Deterministic uniform draw in [0, n) via rejection sampling (n >= 1;
/// consumes no draw when n == 1).
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);

/// Byte-reproducible placement file (fixed field order, %.17g floats).
std::string placement_to_text(const PlacementResult& result, const PlacementProblem& problem,
                              const OptimizerConfig& cfg);

struct PlacementFile {
    std::vector<int> fixed;
    std::vector<int> selected;
    std::vector<Site> sites;  // canonical order: fixed then selected
    std::uint64_t problem_hash = 0;
};

PlacementFile parse_placement_text(std::istream& in, const std::string& name);

}  // namespace iaspa
