#include "iaspa/objective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iaspa/errors.hpp"
#include "iaspa/kernels.hpp"

namespace iaspa {

void validate_weight_table(const std::vector<std::pair<double, double>>& table) {
    if (table.size() < 2) throw ValidationError("weight table needs at least 2 points");
    if (table.front().first != 0.0 || table.front().second != 0.0)
        throw ValidationError("weight table must start at (0, 0): Wbar(0) = 0");
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first))
            throw ValidationError("weight table abscissae must be strictly increasing");
        if (table[i].second < table[i - 1].second)
            throw ValidationError("weight table must be non-decreasing");
        if (!std::isfinite(table[i].first) || !std::isfinite(table[i].second))
            throw ValidationError("weight table entries must be finite");
    }
}

bool table_is_concave(const std::vector<std::pair<double, double>>& table) {
    for (std::size_t i = 2; i < table.size(); ++i) {
        const double s1 = (table[i - 1].second - table[i - 2].second) /
                          (table[i - 1].first - table[i - 2].first);
        const double s2 =
            (table[i].second - table[i - 1].second) / (table[i].first - table[i - 1].first);
        if (s2 > s1 + 1e-12) return false;
    }
    return true;
}

PriorityDensity uniform_density(const Scene& scene, const ReceiverGrid& grid) {
    Raster w(grid.rows, grid.cols, 0.0);
    std::size_t live = 0;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const Vec2 p = grid.center(r, c);
            bool indoor = false;
            for (const Building& b : scene.buildings)
                if (b.footprint.contains(p)) { indoor = true; break; }
            if (!indoor) {
                w.at(r, c) = 1.0;
                ++live;
            }
        }
    }
    if (live == 0) throw ValidationError("priority density is empty: every cell is inside a building");
    const double inv = 1.0 / static_cast<double>(live);
    for (double& v : w.v) v *= inv;
    return {std::move(w)};
}

PriorityDensity density_from_raster(Raster r) {
    double total = 0.0;
    for (double v : r.v) {
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("priority density must be finite and non-negative");
        total += v;
    }
    if (!(total > 0.0)) throw ValidationError("priority density has zero total mass");
    for (double& v : r.v) v /= total;
    return {std::move(r)};
}

double compute_M(const std::vector<PowerField>& fields, AggMode mode) {
    if (fields.empty()) return 0.0;
    if (mode == AggMode::Max) {
        double m = 0.0;
        for (const PowerField& f : fields)
            for (double v : f.values.v) m = std::max(m, v);
        return m;
    }
    const std::size_t n = fields[0].values.size();
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (const PowerField& f : fields) s += f.values.v[i];
        m = std::max(m, s);
    }
    return m;
}

Objective::Objective(ObjectiveConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.weight.family == WeightFamily::Saturating && !(cfg_.weight.c > 0.0))
        throw ValidationError("saturating weight parameter c must be > 0");
    if (cfg_.weight.family == WeightFamily::CustomTable) {
        validate_weight_table(cfg_.weight.table);
        concave_ = table_is_concave(cfg_.weight.table);
    }
    if (!(cfg_.weight.M >= 0.0)) throw ValidationError("utility bound M must be >= 0");
}

double Objective::wbar_table(double x) const {
    const auto& t = cfg_.weight.table;
    if (x <= t.front().first) return t.front().second;
    if (x >= t.back().first) return t.back().second;  // flat extension stays monotone
    auto it = std::upper_bound(t.begin(), t.end(), x,
                               [](double v, const auto& p) { return v < p.first; });
    const auto& [x1, y1] = *it;
    const auto& [x0, y0] = *(it - 1);
    return y0 + (x - x0) / (x1 - x0) * (y1 - y0);
}

double Objective::wbar(double x) const {
    if (x > cfg_.weight.M) {
        clamps_.fetch_add(1, std::memory_order_relaxed);
        x = cfg_.weight.M;
    }
    if (x < 0.0) x = 0.0;
    switch (cfg_.weight.family) {
        case WeightFamily::Log1p: return std::log1p(x);
        case WeightFamily::Saturating: return x / (x + cfg_.weight.c);
        case WeightFamily::CustomTable: return wbar_table(x);
    }
    return 0.0;
}

double Objective::S_of_aggregate(const Raster& agg) const {
    const Raster& d = cfg_.density.w;
    if (!agg.same_shape(d)) throw ValidationError("aggregate raster does not match density grid");
    const auto& ops = kernels::active_ops();
    const double cap = cfg_.weight.M;
    switch (cfg_.weight.family) {
        case WeightFamily::Log1p:
            return ops.weighted_log1p_sum(agg.data(), d.data(), agg.size(), cap);
        case WeightFamily::Saturating:
            return ops.weighted_saturating_sum(agg.data(), d.data(), agg.size(), cfg_.weight.c, cap);
        case WeightFamily::CustomTable: {
            double s = 0.0;
            for (std::size_t i = 0; i < agg.size(); ++i) s += d.v[i] * wbar(agg.v[i]);
            return s;
        }
    }
    return 0.0;
}

double Objective::S_eval(const TransmitterSet& T, const std::vector<PowerField>& fields) const {
    const Raster agg =
        build_aggregate(T, fields, cfg_.mode, cfg_.density.w.rows, cfg_.density.w.cols);
    return S_of_aggregate(agg);
}

double Objective::gain_on(const Raster& agg, const Raster& field) const {
    const Raster& d = cfg_.density.w;
    if (!agg.same_shape(d) || !field.same_shape(d))
        throw ValidationError("raster shapes do not match density grid");
    const auto& ops = kernels::active_ops();
    const double cap = cfg_.weight.M;
    const bool sum_mode = cfg_.mode == AggMode::Sum;
    switch (cfg_.weight.family) {
        case WeightFamily::Log1p:
            return sum_mode ? ops.gain_log1p_sum(agg.data(), field.data(), d.data(), agg.size(), cap)
                            : ops.gain_log1p_max(agg.data(), field.data(), d.data(), agg.size(), cap);
        case WeightFamily::Saturating:
            return sum_mode ? ops.gain_saturating_sum(agg.data(), field.data(), d.data(),
                                                      agg.size(), cfg_.weight.c, cap)
                            : ops.gain_saturating_max(agg.data(), field.data(), d.data(),
                                                      agg.size(), cfg_.weight.c, cap);
        case WeightFamily::CustomTable: {
            double s = 0.0;
            for (std::size_t i = 0; i < agg.size(); ++i) {
                const double a = agg.v[i];
                const double b = sum_mode ? a + field.v[i] : std::max(a, field.v[i]);
                if (b > a) s += d.v[i] * (wbar(b) - wbar(a));
            }
            return s;
        }
    }
    return 0.0;
}

double Objective::gain(int x, const TransmitterSet& T, const std::vector<PowerField>& fields) const {
    if (x < 0 || static_cast<std::size_t>(x) >= fields.size())
        throw ValidationError("candidate index " + std::to_string(x) + " out of range");
    if (T.contains(x))
        throw ValidationError("candidate " + std::to_string(x) + " is already in the set");
    const Raster agg =
        build_aggregate(T, fields, cfg_.mode, cfg_.density.w.rows, cfg_.density.w.cols);
    return gain_on(agg, fields[static_cast<std::size_t>(x)].values);
}

double S_integral_oracle(const TransmitterSet& T, const std::vector<PowerField>& fields,
                         const ObjectiveConfig& cfg, int kappa_samples) {
    if (cfg.weight.family == WeightFamily::CustomTable)
        throw ValidationError("threshold-integral form needs a closed-form weight (log1p or saturating)");
    if (kappa_samples < 2) throw ValidationError("kappa_samples must be >= 2");
    const double M = cfg.weight.M;
    if (!(M > 0.0)) return 0.0;

    // Independent scalar aggregation (no kernel reuse).
    const Raster& d = cfg.density.w;
    const std::size_t n = d.size();
    std::vector<double> agg(n, 0.0);
    for (int idx : T.all()) {
        const Raster& f = fields[static_cast<std::size_t>(idx)].values;
        for (std::size_t i = 0; i < n; ++i)
            agg[i] = cfg.mode == AggMode::Max ? std::max(agg[i], f.v[i]) : agg[i] + f.v[i];
    }

    // Sort cells by aggregate; tail mass via prefix sums and a two-pointer
    // sweep over the ascending kappa lattice.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return agg[a] < agg[b]; });
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += d.v[i];

    auto w_of = [&](double kappa) {
        if (cfg.weight.family == WeightFamily::Log1p) return 1.0 / (1.0 + kappa);
        const double c = cfg.weight.c;
        return c / ((kappa + c) * (kappa + c));
    };

    const double h = M / static_cast<double>(kappa_samples - 1);
    double integral = 0.0;
    std::size_t p = 0;
    double passed = 0.0;
    for (int j = 0; j < kappa_samples; ++j) {
        const double kappa = (j == kappa_samples - 1) ? M : j * h;
        while (p < n && agg[order[p]] <= kappa) passed += d.v[order[p++]];
        const double g = w_of(kappa) * (total - passed);
        integral += (j == 0 || j == kappa_samples - 1) ? 0.5 * g : g;
    }
    return integral * h;
}

}  // namespace iaspa
