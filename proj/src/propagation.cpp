#include "iaspa/propagation.hpp"

#include <cmath>
#include <cstring>
#include <system_error>

#include "iaspa/errors.hpp"
#include "iaspa/field_io.hpp"
#include "iaspa/parallel.hpp"

namespace iaspa {

namespace {

constexpr double kSpeedOfLight = 299792458.0;  // m/s
constexpr double kPi = 3.141592653589793238462643383279502884;

void hash_double(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xFF;
        h *= 0x100000001b3ULL;
    }
}

}  // namespace

void validate_radio(const RadioConfig& radio) {
    if (!(radio.carrier_frequency_hz > 0.0))
        throw ValidationError("carrier frequency must be > 0");
    if (!std::isfinite(radio.tx_power_dbm)) throw ValidationError("tx power must be finite");
    if (!(radio.bandwidth_hz > 0.0)) throw ValidationError("bandwidth must be > 0");
    if (!(radio.noise_power > 0.0)) throw ValidationError("noise power must be > 0");
    if (!(radio.gap_gamma >= 1.0)) throw ValidationError("gap Gamma must be >= 1 (linear)");
    if (!(radio.min_distance_m > 0.0)) throw ValidationError("min distance must be > 0");
}

std::uint64_t radio_hash(const RadioConfig& radio) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_double(h, radio.carrier_frequency_hz);
    hash_double(h, radio.tx_power_dbm);
    hash_double(h, radio.bandwidth_hz);
    hash_double(h, radio.noise_power);
    hash_double(h, radio.gap_gamma);
    hash_double(h, radio.min_distance_m);
    return h;
}

double path_snr(const Site& site, Point3 point, const Scene& scene, const RadioConfig& radio) {
    const double dx = point.x - site.pos.x;
    const double dy = point.y - site.pos.y;
    const double dz = point.z - site.height;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    const double d = std::max(dist, radio.min_distance_m);

    double atten_db = 0.0;
    const Vec2 target{point.x, point.y};
    for (const Building& b : scene.buildings) {
        const auto chords = b.footprint.segment_inside_intervals(site.pos, target);
        if (chords.empty()) continue;
        const double coeff = scene.materials.attenuation(b.material);
        for (const auto& [t0, t1] : chords) {
            // 2.5D: the chord counts only while the ray is below the roof.
            const double z_mid = site.height + 0.5 * (t0 + t1) * (point.z - site.height);
            if (z_mid < b.height) atten_db += coeff * (t1 - t0) * dist;
        }
    }

    const double tx_watts = std::pow(10.0, (radio.tx_power_dbm - 30.0) / 10.0);
    const double lambda = kSpeedOfLight / radio.carrier_frequency_hz;
    const double fspl = lambda / (4.0 * kPi * d);
    return tx_watts * fspl * fspl * std::pow(10.0, -atten_db / 10.0) / radio.noise_power;
}

PowerField compute_field(const Site& site, const Scene& scene, const ReceiverGrid& grid,
                         const RadioConfig& radio) {
    PowerField f;
    f.site = site;
    f.values = Raster(grid.rows, grid.cols);
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const Vec2 p = grid.center(r, c);
            f.values.at(r, c) = path_snr(site, {p.x, p.y, grid.height}, scene, radio);
        }
    }
    return f;
}

FieldCache::FieldCache(std::filesystem::path dir, std::uint64_t scene_h, std::uint64_t radio_h)
    : dir_(std::move(dir)), scene_hash_(scene_h), radio_hash_(radio_h) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
}

std::filesystem::path FieldCache::path_for(const Site& site, const ReceiverGrid& grid) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_double(h, site.pos.x);
    hash_double(h, site.pos.y);
    hash_double(h, site.height);
    hash_double(h, grid.height);
    hash_double(h, static_cast<double>(grid.rows));
    hash_double(h, static_cast<double>(grid.cols));
    char name[64];
    std::snprintf(name, sizeof name, "f_%016llx_%016llx_%016llx.pfb",
                  static_cast<unsigned long long>(scene_hash_),
                  static_cast<unsigned long long>(radio_hash_),
                  static_cast<unsigned long long>(h));
    return dir_ / name;
}

PowerField FieldCache::get_or_compute(const Site& site, const ReceiverGrid& grid,
                                      const std::function<Raster()>& compute) {
    const auto file = path_for(site, grid);
    if (std::filesystem::exists(file)) {
        LoadedRaster loaded = read_raster_binary(file, /*require_nonneg=*/true);
        require_grid_match(loaded.header, grid);
        {
            std::lock_guard<std::mutex> lock(mu_);
            ++stats_.hits;
        }
        return {site, std::move(loaded.raster)};
    }
    Raster values = compute();
    const auto tmp = file.string() + ".tmp";
    write_raster_binary(tmp, values, header_for(grid));
    std::error_code ec;
    std::filesystem::rename(tmp, file, ec);
    if (ec) throw IoError("cache write failed for " + file.string() + ": " + ec.message());
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++stats_.misses;
    }
    return {site, std::move(values)};
}

FieldCache::Stats FieldCache::stats() const {
    std::lock_guard<std::mutex> lock(mu_);
    return stats_;
}

std::vector<PowerField> field_matrix(const CandidateSet& candidates, const Scene& scene,
                                     const ReceiverGrid& grid, const RadioConfig& radio,
                                     FieldCache* cache, int workers) {
    std::vector<PowerField> fields(candidates.sites.size());
    parallel_for(candidates.sites.size(), workers, [&](std::size_t i) {
        const Site& site = candidates.sites[i];
        if (cache) {
            fields[i] = cache->get_or_compute(
                site, grid, [&] { return compute_field(site, scene, grid, radio).values; });
        } else {
            fields[i] = compute_field(site, scene, grid, radio);
        }
    });
    return fields;
}

}  // namespace iaspa
