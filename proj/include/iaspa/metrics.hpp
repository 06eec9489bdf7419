#pragma once

#include <vector>

#include "iaspa/propagation.hpp"
#include "iaspa/raster.hpp"

namespace iaspa {

enum class AggMode { Max, Sum };

struct TransmitterSet {
    std::vector<int> selected;  // greedy selection order
    std::vector<int> fixed;     // pre-existing sites, never re-selected

    bool empty() const { return selected.empty() && fixed.empty(); }
    std::size_t size() const { return selected.size() + fixed.size(); }
    /// Canonical evaluation order: fixed first, then selected.
    std::vector<int> all() const;
    bool contains(int idx) const;
};

/// Aggregate raster over the set in canonical order (empty set -> zeros).
Raster build_aggregate(const TransmitterSet& T, const std::vector<PowerField>& fields,
                       AggMode mode, int rows, int cols);

/// Point ops; all throw ValidationError for an empty set.
double aggregate_at(std::size_t cell, const TransmitterSet& T,
                    const std::vector<PowerField>& fields, AggMode mode);
double sinr_at(std::size_t cell, const TransmitterSet& T, const std::vector<PowerField>& fields,
               const RadioConfig& radio);
double interference_at(std::size_t cell, const TransmitterSet& T,
                       const std::vector<PowerField>& fields);

/// B * log2(1 + q / Gamma), bits/s.
double shannon_rate(double q, const RadioConfig& radio);

/// Thermal noise floor in watts (-174 dBm/Hz density), used only for the nW
/// reporting convention.
double noise_floor_watts(double bandwidth_hz);

/// Linear-interpolation percentile (inclusive) with p in [0, 1]; selection
/// based, the full-sort route lives in tests.
double percentile(std::vector<double> values, double p);

struct MetricsReport {
    AggMode mode = AggMode::Max;
    double mean_rate = 0, std_rate = 0, max_rate = 0, edge_rate_p5 = 0;  // bits/s
    bool has_interference = false;
    double mean_interf_nw = 0, std_interf_nw = 0, max_interf_nw = 0;
    Raster rate_bps;
    Raster interference_nw;  // empty unless has_interference
};

/// Max mode: per-cell rate from SINR, plus the interference block.
/// Sum mode: per-cell rate from the aggregate power, no interference block.
MetricsReport report(const TransmitterSet& T, const std::vector<PowerField>& fields,
                     const RadioConfig& radio, AggMode mode);

/// Recomputes fields per receiver height, averages the per-cell rasters, then
/// takes statistics of the averaged rasters.
MetricsReport multi_height_report(const std::vector<double>& heights, const TransmitterSet& T,
                                  const CandidateSet& candidates, const Scene& scene,
                                  const RadioConfig& radio, AggMode mode,
                                  FieldCache* cache = nullptr, int workers = 0);

/// Structured text with the seven statistics (interference block omitted in
/// Sum mode).
std::string report_to_text(const MetricsReport& rep);

}  // namespace iaspa
