#include "iaspa/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

#include "iaspa/errors.hpp"

namespace iaspa {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string subset_str(const std::vector<int>& s) {
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ", ";
        out += std::to_string(s[i]);
    }
    return out + "}";
}

// From-scratch S evaluation on plain loops: the comparison route kept
// independent of the kernel-backed pipeline.
double S_reference(const std::vector<int>& subset, const PlacementProblem& p,
                   const Objective& table_eval) {
    const Raster& d = p.objective.density.w;
    const std::size_t n = d.size();
    long double acc = 0.0L;
    const double M = p.objective.weight.M;
    for (std::size_t i = 0; i < n; ++i) {
        double agg = 0.0;
        for (int idx : subset) {
            const double v = p.fields[static_cast<std::size_t>(idx)].values.v[i];
            agg = p.objective.mode == AggMode::Max ? std::max(agg, v) : agg + v;
        }
        agg = std::min(agg, M);
        double wb = 0.0;
        switch (p.objective.weight.family) {
            case WeightFamily::Log1p: wb = std::log1p(agg); break;
            case WeightFamily::Saturating: wb = agg / (agg + p.objective.weight.c); break;
            case WeightFamily::CustomTable: wb = table_eval.wbar(agg); break;
        }
        acc += static_cast<long double>(d.v[i]) * wb;
    }
    return static_cast<double>(acc);
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        // c * (n - k + i + 1) / (i + 1), capped to avoid overflow
        if (c > 4 * cap) return c;  // already hopeless, stop growing
        c = c * (n - k + i + 1) / (i + 1);
    }
    return c;
}

}  // namespace

BruteForceResult brute_force_optimal(const PlacementProblem& problem, int k, std::uint64_t cap) {
    const int n = static_cast<int>(problem.fields.size());
    if (k < 1 || k > n)
        throw ValidationError("brute force k must be in [1, |X|]");
    const std::uint64_t count = binomial_capped(static_cast<std::uint64_t>(n),
                                                static_cast<std::uint64_t>(k), cap);
    if (count > cap)
        throw CapExceededError("C(" + std::to_string(n) + ", " + std::to_string(k) + ") = " +
                               std::to_string(count) + " subsets exceeds the cap " +
                               std::to_string(cap) + "; raise the cap to at least " +
                               std::to_string(count));

    BruteForceResult res;
    res.k = k;
    res.problem_hash = problem.hash;
    const Objective table_eval(problem.objective);
    std::vector<int> subset(static_cast<std::size_t>(k));
    std::iota(subset.begin(), subset.end(), 0);
    bool more = true;
    while (more) {
        const double s = S_reference(subset, problem, table_eval);
        ++res.subsets_evaluated;
        if (res.best_subset.empty() || s > res.best_S) {
            res.best_S = s;
            res.best_subset = subset;
        }
        // Next combination in lexicographic order.
        more = false;
        for (int i = k - 1; i >= 0; --i) {
            if (subset[static_cast<std::size_t>(i)] < n - k + i) {
                ++subset[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < k; ++j)
                    subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
                more = true;
                break;
            }
        }
    }
    return res;
}

BoundCertificate certify_bound(const PlacementResult& greedy, const BruteForceResult& oracle,
                               const PlacementProblem& problem, double epsilon) {
    if (greedy.problem_hash != oracle.problem_hash || greedy.problem_hash != problem.hash)
        throw ValidationError("bound certification refused: problem hashes do not match");
    BoundCertificate cert;
    cert.n = static_cast<int>(greedy.selection.selected.size());
    cert.k = oracle.k;
    cert.epsilon = epsilon;
    cert.greedy_S = greedy.trajectory.empty() ? greedy.S_fixed : greedy.trajectory.back().S_after;
    cert.optimal_S = oracle.best_S;
    cert.bound = 1.0 - std::exp(-static_cast<double>(cert.n) * (1.0 - epsilon) /
                                static_cast<double>(cert.k));
    cert.ratio = cert.optimal_S > 0 ? cert.greedy_S / cert.optimal_S : 1.0;
    cert.pass = cert.greedy_S >= cert.bound * cert.optimal_S - 1e-12 * std::max(1.0, cert.optimal_S);
    return cert;
}

BaselineResult random_baseline(const PlacementProblem& problem, int count_towers, int draws,
                               std::uint64_t seed) {
    const int n = static_cast<int>(problem.fields.size());
    if (count_towers < 1 || count_towers > n)
        throw ValidationError("baseline tower count " + std::to_string(count_towers) +
                              " exceeds |X| = " + std::to_string(n));
    if (draws < 1) throw ValidationError("baseline needs at least one draw");

    Objective obj(problem.objective);
    std::mt19937_64 rng(seed);
    BaselineResult res;
    res.draws = draws;

    for (int d = 0; d < draws; ++d) {
        // Partial Fisher-Yates: uniform k-subset without replacement.
        std::vector<int> pool(static_cast<std::size_t>(n));
        std::iota(pool.begin(), pool.end(), 0);
        std::vector<int> subset;
        for (int j = 0; j < count_towers; ++j) {
            const std::size_t pick =
                static_cast<std::size_t>(j) +
                static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(n - j)));
            std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
            subset.push_back(pool[static_cast<std::size_t>(j)]);
        }
        std::sort(subset.begin(), subset.end());

        TransmitterSet T;
        T.selected = subset;
        res.per_draw.push_back(report(T, problem.fields, problem.radio, problem.objective.mode));
        res.per_draw_S.push_back(obj.S_eval(T, problem.fields));
        res.subsets.push_back(std::move(subset));
    }

    MetricsReport avg;
    avg.mode = problem.objective.mode;
    avg.has_interference = res.per_draw.front().has_interference;
    for (const MetricsReport& r : res.per_draw) {
        avg.mean_rate += r.mean_rate;
        avg.std_rate += r.std_rate;
        avg.max_rate += r.max_rate;
        avg.edge_rate_p5 += r.edge_rate_p5;
        avg.mean_interf_nw += r.mean_interf_nw;
        avg.std_interf_nw += r.std_interf_nw;
        avg.max_interf_nw += r.max_interf_nw;
    }
    const double inv = 1.0 / draws;
    avg.mean_rate *= inv;
    avg.std_rate *= inv;
    avg.max_rate *= inv;
    avg.edge_rate_p5 *= inv;
    avg.mean_interf_nw *= inv;
    avg.std_interf_nw *= inv;
    avg.max_interf_nw *= inv;
    res.averaged = std::move(avg);
    return res;
}

namespace {

// Uniform random subset of [0, n) with the given size, ascending.
std::vector<int> random_subset(std::mt19937_64& rng, int n, int size) {
    std::vector<int> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> out;
    for (int j = 0; j < size; ++j) {
        const std::size_t pick =
            static_cast<std::size_t>(j) +
            static_cast<std::size_t>(uniform_index(rng, static_cast<std::uint64_t>(n - j)));
        std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
        out.push_back(pool[static_cast<std::size_t>(j)]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

PropertySuiteReport property_suite(const PlacementProblem& problem, int trials,
                                   std::uint64_t seed) {
    PropertySuiteReport rep;
    rep.monotonicity.name = "monotonicity";
    rep.diminishing_returns.name = "diminishing_returns";
    rep.threshold_integral.name = "threshold_integral";
    if (trials <= 0) {
        rep.monotonicity.vacuous = rep.diminishing_returns.vacuous =
            rep.threshold_integral.vacuous = true;
        return rep;
    }

    Objective obj(problem.objective);
    const int n = static_cast<int>(problem.fields.size());
    std::mt19937_64 rng(seed);

    // Nested pairs: S(T1) <= S(T2) + 1e-12.
    const int pairs = std::max(1, trials / 5);
    for (int t = 0; t < pairs; ++t) {
        const int size2 = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
        std::vector<int> t2 = random_subset(rng, n, size2);
        const int size1 = static_cast<int>(
            uniform_index(rng, static_cast<std::uint64_t>(size2) + 1));
        std::vector<int> t1(t2.begin(), t2.begin() + size1);
        TransmitterSet T1, T2;
        T1.selected = t1;
        T2.selected = t2;
        const double s1 = obj.S_eval(T1, problem.fields);
        const double s2 = obj.S_eval(T2, problem.fields);
        ++rep.monotonicity.trials;
        if (!(s1 <= s2 + 1e-12)) {
            ++rep.monotonicity.failures;
            rep.monotonicity.counterexamples.push_back(
                "T1=" + subset_str(t1) + " T2=" + subset_str(t2) + " S(T1)=" + fmt(s1) +
                " S(T2)=" + fmt(s2));
        }
    }

    // Diminishing returns: A subset of B, t not in B: G(t|A) >= G(t|B) - 1e-9.
    for (int t = 0; t < trials; ++t) {
        if (n < 2) break;
        const int sizeB = 1 + static_cast<int>(
            uniform_index(rng, static_cast<std::uint64_t>(n - 1)));  // leave room for t
        std::vector<int> b = random_subset(rng, n, sizeB);
        const int sizeA = static_cast<int>(
            uniform_index(rng, static_cast<std::uint64_t>(sizeB) + 1));
        std::vector<int> a(b.begin(), b.begin() + sizeA);
        std::vector<int> outside;
        for (int i = 0; i < n; ++i)
            if (std::find(b.begin(), b.end(), i) == b.end()) outside.push_back(i);
        const int x = outside[static_cast<std::size_t>(
            uniform_index(rng, outside.size()))];
        TransmitterSet A, B;
        A.selected = a;
        B.selected = b;
        const double ga = obj.gain(x, A, problem.fields);
        const double gb = obj.gain(x, B, problem.fields);
        ++rep.diminishing_returns.trials;
        if (!(ga >= gb - 1e-9)) {
            ++rep.diminishing_returns.failures;
            rep.diminishing_returns.counterexamples.push_back(
                "A=" + subset_str(a) + " B=" + subset_str(b) + " t=" + std::to_string(x) +
                " G(t|A)=" + fmt(ga) + " G(t|B)=" + fmt(gb));
        }
    }

    // Expectation form vs threshold-integral form.
    if (problem.objective.weight.family != WeightFamily::CustomTable) {
        const int instances = std::max(1, trials / 20);
        for (int t = 0; t < instances; ++t) {
            const int size = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(n)));
            TransmitterSet T;
            T.selected = random_subset(rng, n, size);
            const double se = obj.S_eval(T, problem.fields);
            const double si = S_integral_oracle(T, problem.fields, problem.objective, 100000);
            const double rel = std::abs(si - se) / std::max(se, 1e-12);
            ++rep.threshold_integral.trials;
            if (!(rel < 1e-3)) {
                ++rep.threshold_integral.failures;
                rep.threshold_integral.counterexamples.push_back(
                    "T=" + subset_str(T.selected) + " S_eval=" + fmt(se) + " S_integral=" + fmt(si) +
                    " rel=" + fmt(rel));
            }
        }
    }
    return rep;
}

std::string PropertySuiteReport::to_text() const {
    std::ostringstream out;
    out << "iaspa property suite v1\n";
    for (const PropertyBlock* b : {&monotonicity, &diminishing_returns, &threshold_integral}) {
        out << b->name << ' ' << (b->pass() ? "PASS" : "FAIL") << " trials " << b->trials
            << " failures " << b->failures;
        if (b->vacuous) out << " (vacuous: zero trials)";
        out << '\n';
        for (const std::string& c : b->counterexamples) out << "  counterexample " << c << '\n';
    }
    return out.str();
}

}  // namespace iaspa
