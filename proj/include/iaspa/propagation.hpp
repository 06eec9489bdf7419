#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <vector>

#include "iaspa/raster.hpp"
#include "iaspa/scene.hpp"

namespace iaspa {

struct RadioConfig {
    double carrier_frequency_hz = 1.8e9;
    double tx_power_dbm = 40.0;
    double bandwidth_hz = 10e6;
    double noise_power = 1.0;  // linear, fixed to 1 after normalization
    double gap_gamma = 2.0;    // linear SNR gap
    double min_distance_m = 1.0;
};

void validate_radio(const RadioConfig& radio);
std::uint64_t radio_hash(const RadioConfig& radio);

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

/// Linear SNR at `point` from a transmitter at `site`: free-space inverse
/// square at the min_distance-clamped 3D range, times through-material
/// absorption along the 2.5D chords below each building's height. Noise
/// divides out as 1 under the sigma^2 = 1 normalization.
double path_snr(const Site& site, Point3 point, const Scene& scene, const RadioConfig& radio);

struct PowerField {
    Site site;
    Raster values;  // linear SNR per grid cell
};

PowerField compute_field(const Site& site, const Scene& scene, const ReceiverGrid& grid,
                         const RadioConfig& radio);

/// On-disk cache of computed fields, keyed by (scene hash, radio hash, site).
/// Hits are bit-identical to recomputation (binary payloads).
class FieldCache {
  public:
    FieldCache(std::filesystem::path dir, std::uint64_t scene_h, std::uint64_t radio_h);

    struct Stats {
        std::uint64_t hits = 0;
        std::uint64_t misses = 0;
    };

    PowerField get_or_compute(const Site& site, const ReceiverGrid& grid,
                              const std::function<Raster()>& compute);
    Stats stats() const;
    const std::filesystem::path& directory() const { return dir_; }

  private:
    std::filesystem::path path_for(const Site& site, const ReceiverGrid& grid) const;

    std::filesystem::path dir_;
    std::uint64_t scene_hash_;
    std::uint64_t radio_hash_;
    mutable std::mutex mu_;
    Stats stats_;
};

/// One field per candidate, cache-backed when a cache is given. Parallel per
/// candidate; output order matches the candidate order.
std::vector<PowerField> field_matrix(const CandidateSet& candidates, const Scene& scene,
                                     const ReceiverGrid& grid, const RadioConfig& radio,
                                     FieldCache* cache = nullptr, int workers = 0);

}  // namespace iaspa
