#include "iaspa/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <random>
#include <sstream>

#include "iaspa/errors.hpp"
#include "iaspa/kernels.hpp"
#include "iaspa/parallel.hpp"
#include "iaspa/version.hpp"

namespace iaspa {

namespace {

constexpr double kGainFloor = 1e-15;  // gains at or below are treated as zero

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validate_config(const PlacementProblem& problem, const OptimizerConfig& cfg) {
    if (!(cfg.epsilon >= 0.0) || cfg.epsilon >= 1.0)
        throw ValidationError("epsilon must be in [0, 1)");
    if (cfg.termination == OptimizerConfig::Termination::Budget && cfg.budget_k < 1)
        throw ValidationError("budget k must be >= 1");
    if (cfg.termination == OptimizerConfig::Termination::Coverage && !(cfg.coverage_beta > 0.0))
        throw ValidationError("coverage target beta must be > 0");
    if (cfg.lazy && cfg.epsilon > 0.0)
        throw ValidationError(
            "lazy gain scheduling refused: Omega_eps with epsilon > 0 requires all gains");
    std::vector<int> seen;
    for (int idx : cfg.fixed) {
        if (idx < 0 || static_cast<std::size_t>(idx) >= problem.fields.size())
            throw ValidationError("fixed index " + std::to_string(idx) + " out of range");
        if (std::find(seen.begin(), seen.end(), idx) != seen.end())
            throw ValidationError("fixed index " + std::to_string(idx) + " repeated");
        seen.push_back(idx);
    }
}

}  // namespace

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t rem = (kMax % n + 1) % n;  // 2^64 mod n
    std::uint64_t r;
    do {
        r = rng();
    } while (r > kMax - rem);
    return r % n;
}

double feasibility_precheck(const PlacementProblem& problem, const std::vector<int>& fixed) {
    TransmitterSet all;
    all.fixed = fixed;
    for (int i = 0; i < static_cast<int>(problem.fields.size()); ++i)
        if (std::find(fixed.begin(), fixed.end(), i) == fixed.end()) all.selected.push_back(i);
    Objective obj(problem.objective);
    return obj.S_eval(all, problem.fields);
}

LazyGainSchedule::LazyGainSchedule(int n_candidates)
    : alive_(static_cast<std::size_t>(n_candidates), 1) {}

void LazyGainSchedule::remove(int candidate) { alive_[static_cast<std::size_t>(candidate)] = 0; }

LazyGainSchedule::ArgmaxSet LazyGainSchedule::next(const std::function<double(int)>& fresh_gain) {
    auto by_bound = [](const Entry& a, const Entry& b) { return a.bound < b.bound; };
    ++round_;
    ArgmaxSet out;

    if (round_ == 1) {
        // Cold start: every candidate is evaluated, exactly like the
        // exhaustive pass.
        for (int c = 0; c < static_cast<int>(alive_.size()); ++c) {
            if (!alive_[static_cast<std::size_t>(c)]) continue;
            heap_.push_back({fresh_gain(c), c, round_});
            ++out.refreshed;
        }
        std::make_heap(heap_.begin(), heap_.end(), by_bound);
    }

    std::vector<Entry> fresh_max;
    bool have_max = false;
    while (!heap_.empty()) {
        Entry top = heap_.front();
        if (!alive_[static_cast<std::size_t>(top.cand)]) {
            std::pop_heap(heap_.begin(), heap_.end(), by_bound);
            heap_.pop_back();
            continue;
        }
        if (have_max && top.bound < out.max_gain) break;
        std::pop_heap(heap_.begin(), heap_.end(), by_bound);
        heap_.pop_back();
        if (top.updated == round_) {
            if (!have_max) {
                out.max_gain = top.bound;
                have_max = true;
            }
            fresh_max.push_back(top);  // bound == max_gain here
        } else {
            // Stale bound could still reach the current maximum: refresh.
            top.bound = fresh_gain(top.cand);
            top.updated = round_;
            ++out.refreshed;
            heap_.push_back(top);
            std::push_heap(heap_.begin(), heap_.end(), by_bound);
        }
    }
    for (const Entry& e : fresh_max) {
        heap_.push_back(e);
        std::push_heap(heap_.begin(), heap_.end(), by_bound);
        out.maximizers.push_back(e.cand);
    }
    std::sort(out.maximizers.begin(), out.maximizers.end());
    return out;
}

PlacementResult ia_spa(const PlacementProblem& problem, const OptimizerConfig& cfg) {
    validate_config(problem, cfg);
    Objective obj(problem.objective);
    const auto& fields = problem.fields;
    const int n = static_cast<int>(fields.size());
    const int rows = problem.grid.rows, cols = problem.grid.cols;

    PlacementResult res;
    res.epsilon = cfg.epsilon;
    res.seed = cfg.seed;
    res.problem_hash = problem.hash;
    res.selection.fixed = cfg.fixed;

    if (cfg.termination == OptimizerConfig::Termination::Coverage) {
        const double upper = feasibility_precheck(problem, cfg.fixed);
        if (cfg.coverage_beta > upper)
            throw InfeasibleTargetError("coverage target " + fmt(cfg.coverage_beta) +
                                        " exceeds the achievable bound S(X) = " + fmt(upper));
    }

    Raster agg = build_aggregate(res.selection, fields, problem.objective.mode, rows, cols);
    double S_cur = obj.S_of_aggregate(agg);
    res.S_fixed = S_cur;

    std::vector<int> remaining;
    for (int i = 0; i < n; ++i)
        if (std::find(cfg.fixed.begin(), cfg.fixed.end(), i) == cfg.fixed.end())
            remaining.push_back(i);

    std::mt19937_64 rng(cfg.seed);
    res.terminated_by = TerminationReason::Exhausted;

    if (cfg.termination == OptimizerConfig::Termination::Coverage && S_cur >= cfg.coverage_beta) {
        res.terminated_by = TerminationReason::Coverage;
        return res;
    }

    const bool use_lazy = cfg.lazy && cfg.epsilon == 0.0 && obj.concave();
    LazyGainSchedule schedule(n);
    if (use_lazy)
        for (int i = 0; i < n; ++i)
            if (std::find(remaining.begin(), remaining.end(), i) == remaining.end())
                schedule.remove(i);

    while (!remaining.empty()) {
        double gmax = 0.0;
        std::vector<int> omega;         // ascending candidate order
        std::vector<double> omega_gain;  // parallel to omega
        if (use_lazy) {
            auto arg = schedule.next(
                [&](int c) { return obj.gain_on(agg, fields[static_cast<std::size_t>(c)].values); });
            gmax = arg.max_gain;
            if (gmax > kGainFloor) {
                omega = std::move(arg.maximizers);
                omega_gain.assign(omega.size(), gmax);
            }
        } else {
            std::vector<double> gains(remaining.size());
            parallel_for(remaining.size(), cfg.workers, [&](std::size_t i) {
                gains[i] =
                    obj.gain_on(agg, fields[static_cast<std::size_t>(remaining[i])].values);
            });
            gmax = *std::max_element(gains.begin(), gains.end());
            if (gmax > kGainFloor) {
                const double threshold = (1.0 - cfg.epsilon) * gmax;
                for (std::size_t i = 0; i < remaining.size(); ++i) {
                    if (gains[i] >= threshold) {
                        omega.push_back(remaining[i]);
                        omega_gain.push_back(gains[i]);
                    }
                }
            }
        }
        if (omega.empty()) {
            res.terminated_by = TerminationReason::Exhausted;
            break;
        }

        const std::size_t pick = uniform_index(rng, omega.size());
        const int chosen = omega[pick];
        const double chosen_gain = omega_gain[pick];

        const Raster& f = fields[static_cast<std::size_t>(chosen)].values;
        const auto& ops = kernels::active_ops();
        if (problem.objective.mode == AggMode::Max)
            ops.accumulate_max(agg.data(), f.data(), agg.size());
        else
            ops.accumulate_sum(agg.data(), f.data(), agg.size());
        S_cur = obj.S_of_aggregate(agg);

        res.selection.selected.push_back(chosen);
        remaining.erase(std::find(remaining.begin(), remaining.end(), chosen));
        if (use_lazy) schedule.remove(chosen);
        res.trajectory.push_back({chosen, chosen_gain,
                                  gmax, static_cast<int>(omega.size()), S_cur});

        if (cfg.termination == OptimizerConfig::Termination::Budget &&
            static_cast<int>(res.selection.selected.size()) == cfg.budget_k) {
            res.terminated_by = TerminationReason::Budget;
            break;
        }
        if (cfg.termination == OptimizerConfig::Termination::Coverage &&
            S_cur >= cfg.coverage_beta) {
            res.terminated_by = TerminationReason::Coverage;
            break;
        }
    }
    return res;
}

namespace {

const char* reason_name(TerminationReason r) {
    switch (r) {
        case TerminationReason::Budget: return "BUDGET";
        case TerminationReason::Coverage: return "COVERAGE";
        case TerminationReason::Exhausted: return "EXHAUSTED";
    }
    return "?";
}

}  // namespace

std::string placement_to_text(const PlacementResult& result, const PlacementProblem& problem,
                              const OptimizerConfig& cfg) {
    std::ostringstream out;
    out << "iaspa placement v1\n";
    out << "version " << kVersion << "\n";
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(result.problem_hash));
    out << "problem_hash " << hex << "\n";
    out << "mode " << (problem.objective.mode == AggMode::Max ? "MAX" : "SUM") << "\n";
    switch (problem.objective.weight.family) {
        case WeightFamily::Log1p: out << "weight log1p\n"; break;
        case WeightFamily::Saturating:
            out << "weight saturating " << fmt(problem.objective.weight.c) << "\n";
            break;
        case WeightFamily::CustomTable: out << "weight table\n"; break;
    }
    out << "epsilon " << fmt(result.epsilon) << "\n";
    out << "seed " << result.seed << "\n";
    if (cfg.termination == OptimizerConfig::Termination::Budget)
        out << "termination BUDGET " << cfg.budget_k << "\n";
    else
        out << "termination COVERAGE " << fmt(cfg.coverage_beta) << "\n";
    out << "terminated_by " << reason_name(result.terminated_by) << "\n";
    out << "S_fixed " << fmt(result.S_fixed) << "\n";
    out << "fixed";
    for (int idx : result.selection.fixed) out << ' ' << idx;
    out << "\nselected";
    for (int idx : result.selection.selected) out << ' ' << idx;
    out << "\nsites:\n";
    for (int idx : result.selection.all()) {
        const Site& s = problem.candidates.sites[static_cast<std::size_t>(idx)];
        out << idx << ' ' << fmt(s.pos.x) << ' ' << fmt(s.pos.y) << ' ' << fmt(s.height) << "\n";
    }
    out << "trajectory:\n";
    for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
        const IterationRecord& t = result.trajectory[i];
        out << i << ' ' << t.chosen << ' ' << fmt(t.chosen_gain) << ' ' << fmt(t.max_gain) << ' '
            << t.omega_size << ' ' << fmt(t.S_after) << "\n";
    }
    out << "end\n";
    return out.str();
}

PlacementFile parse_placement_text(std::istream& in, const std::string& name) {
    PlacementFile out;
    std::string line;
    if (!std::getline(in, line) || line != "iaspa placement v1")
        throw ParseError(name + ": not a placement file");
    bool in_sites = false;
    while (std::getline(in, line)) {
        if (line == "end") break;
        if (line == "sites:") {
            in_sites = true;
            continue;
        }
        if (line == "trajectory:") {
            in_sites = false;
            continue;
        }
        std::istringstream iss(line);
        if (in_sites) {
            int idx;
            Site s;
            if (!(iss >> idx >> s.pos.x >> s.pos.y >> s.height))
                throw ParseError(name + ": malformed site line '" + line + "'");
            out.sites.push_back(s);
            continue;
        }
        std::string key;
        iss >> key;
        if (key == "problem_hash") {
            std::string hex;
            iss >> hex;
            out.problem_hash = std::stoull(hex, nullptr, 16);
        } else if (key == "fixed") {
            int idx;
            while (iss >> idx) out.fixed.push_back(idx);
        } else if (key == "selected") {
            int idx;
            while (iss >> idx) out.selected.push_back(idx);
        }
    }
    return out;
}

}  // namespace iaspa
