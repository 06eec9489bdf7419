#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#include "iaspa/metrics.hpp"
#include "iaspa/propagation.hpp"
#include "iaspa/raster.hpp"

namespace iaspa {

enum class WeightFamily { Log1p, Saturating, CustomTable };

/// Utility antiderivative Wbar and its bound M over the candidate fields.
/// Log1p:      Wbar(x) = ln(1+x),   w(k) = 1/(1+k)
/// Saturating: Wbar(x) = x/(x+c),   w(k) = c/(k+c)^2
/// CustomTable: monotone piecewise-linear interpolation of user (x, Wbar)
/// points; no closed-form w.
struct WeightSpec {
    WeightFamily family = WeightFamily::Log1p;
    double c = 1.0;                                 // Saturating parameter, > 0
    std::vector<std::pair<double, double>> table;   // CustomTable knots, x ascending
    double M = 0.0;                                  // computed utility bound
};

/// Throws ValidationError on Wbar(0) != 0, non-monotone ordinates, or
/// non-ascending abscissae.
void validate_weight_table(const std::vector<std::pair<double, double>>& table);

/// Second differences <= 0 (within slack): diminishing returns holds.
bool table_is_concave(const std::vector<std::pair<double, double>>& table);

struct PriorityDensity {
    Raster w;  // >= 0, sums to 1
};

/// Uniform over cells whose centers fall outside every building footprint,
/// renormalized. Throws if no cell remains.
PriorityDensity uniform_density(const Scene& scene, const ReceiverGrid& grid);

/// Validates non-negativity and normalizes to unit mass.
PriorityDensity density_from_raster(Raster r);

struct ObjectiveConfig {
    AggMode mode = AggMode::Max;
    WeightSpec weight;
    PriorityDensity density;
};

/// Utility bound: Sum mode -> max over cells of the all-candidate sum;
/// Max mode -> max single-field value.
double compute_M(const std::vector<PowerField>& fields, AggMode mode);

/// Network quality functional S and marginal gains over precomputed fields.
class Objective {
  public:
    explicit Objective(ObjectiveConfig cfg);

    const ObjectiveConfig& config() const { return cfg_; }
    bool concave() const { return concave_; }

    /// Wbar with clamping above M (counted).
    double wbar(double x) const;
    std::uint64_t clamp_count() const { return clamps_.load(); }

    /// S of a prebuilt aggregate raster: sum_y density(y) * Wbar(agg(y)).
    double S_of_aggregate(const Raster& agg) const;

    /// S(T); T may be empty (S of nothing is 0).
    double S_eval(const TransmitterSet& T, const std::vector<PowerField>& fields) const;

    /// Marginal gain of adding `field` to the frozen aggregate raster.
    /// Single pass; never re-aggregates the existing set.
    double gain_on(const Raster& agg, const Raster& field) const;

    /// G(x|T) = S(T u {x}) - S(T). Throws if x is already in T.
    double gain(int x, const TransmitterSet& T, const std::vector<PowerField>& fields) const;

  private:
    double wbar_table(double x) const;

    ObjectiveConfig cfg_;
    bool concave_ = true;
    mutable std::atomic<std::uint64_t> clamps_{0};
};

/// Threshold-integral form of S: trapezoid quadrature over kappa in [0, M] of
/// w(kappa) times the density mass of cells with aggregate > kappa. Agrees
/// with S_eval in the limit; used as the independent cross-check. Throws for
/// CustomTable (no closed-form w).
double S_integral_oracle(const TransmitterSet& T, const std::vector<PowerField>& fields,
                         const ObjectiveConfig& cfg, int kappa_samples);

}  // namespace iaspa
