#include "iaspa/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>

#include "iaspa/errors.hpp"

namespace iaspa {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void validate_scene(Scene& scene) {
    if (!(scene.bounds.width() > 0.0) || !(scene.bounds.height() > 0.0))
        throw ValidationError("scene bounds must have strictly positive width and height");
    if (!(scene.grid_spacing > 0.0))
        throw ValidationError("grid spacing must be > 0");
    if (!(scene.receiver_height >= 0.0))
        throw ValidationError("receiver height must be >= 0");
    for (const auto& [id, att] : scene.materials.db_per_meter) {
        if (!std::isfinite(att) || att < 0.0)
            throw ValidationError("material '" + id + "' attenuation must be finite and >= 0");
    }
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        Building& b = scene.buildings[i];
        const std::string tag = "building " + std::to_string(i);
        if (b.footprint.size() < 3)
            throw ValidationError(tag + ": footprint needs at least 3 vertices");
        b.footprint.normalize_orientation();
        if (b.footprint.is_self_intersecting())
            throw ValidationError(tag + ": footprint is self-intersecting");
        for (const Vec2& p : b.footprint.vertices()) {
            if (!scene.bounds.contains(p))
                throw ValidationError(tag + ": footprint vertex (" + fmt(p.x) + ", " + fmt(p.y) +
                                      ") outside scene bounds");
        }
        if (!(b.height > 0.0))
            throw ValidationError(tag + ": height must be > 0");
        if (!scene.materials.has(b.material))
            throw ValidationError(tag + ": unknown material '" + b.material + "'");
    }
}

ReceiverGrid make_grid(const Scene& scene) {
    const double w = scene.bounds.width();
    const double h = scene.bounds.height();
    const double s = scene.grid_spacing;
    // Nudge guards against 199.99999 / 10 style representation noise.
    const int cols = static_cast<int>(std::floor(w / s + 1e-9));
    const int rows = static_cast<int>(std::floor(h / s + 1e-9));
    if (rows < 1 || cols < 1)
        throw ValidationError("grid spacing " + fmt(s) + " exceeds a bounds dimension (" + fmt(w) +
                              " x " + fmt(h) + ")");
    ReceiverGrid g;
    g.origin = {scene.bounds.min_x, scene.bounds.min_y};
    g.spacing = s;
    g.rows = rows;
    g.cols = cols;
    g.height = scene.receiver_height;
    return g;
}

CandidateSet build_candidates(const Scene& scene, const CandidateSpec& spec) {
    std::vector<Vec2> raw;
    if (spec.lattice_pitch) {
        const double p = *spec.lattice_pitch;
        if (!(p > 0.0)) throw ValidationError("lattice pitch must be > 0");
        const int nx = static_cast<int>(std::floor(scene.bounds.width() / p + 1e-9));
        const int ny = static_cast<int>(std::floor(scene.bounds.height() / p + 1e-9));
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                raw.push_back({scene.bounds.min_x + (i + 0.5) * p, scene.bounds.min_y + (j + 0.5) * p});
    }
    raw.insert(raw.end(), spec.explicit_sites.begin(), spec.explicit_sites.end());

    std::sort(raw.begin(), raw.end(), [](Vec2 a, Vec2 b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
    });

    CandidateSet out;
    out.exclusion_zones = spec.exclusions;
    const double min_sep = scene.grid_spacing;
    for (const Vec2& p : raw) {
        if (!scene.bounds.contains(p)) continue;
        bool excluded = false;
        for (const auto& z : spec.exclusions)
            if (zone_contains(z, p)) { excluded = true; break; }
        if (excluded) continue;
        bool too_close = false;
        for (const Site& s : out.sites)
            if (norm(p - s.pos) < min_sep) { too_close = true; break; }
        if (too_close) continue;
        out.sites.push_back({p, spec.mount_height});
    }
    if (out.sites.empty())
        throw ValidationError("candidate set is empty after exclusion filtering");
    return out;
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
}

void hash_double(std::uint64_t& h, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    hash_bytes(h, &bits, sizeof bits);
}

}  // namespace

std::uint64_t scene_hash(const Scene& scene) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    hash_double(h, scene.bounds.min_x);
    hash_double(h, scene.bounds.min_y);
    hash_double(h, scene.bounds.max_x);
    hash_double(h, scene.bounds.max_y);
    hash_double(h, scene.grid_spacing);
    hash_double(h, scene.receiver_height);
    for (const auto& [id, att] : scene.materials.db_per_meter) {
        hash_bytes(h, id.data(), id.size());
        hash_double(h, att);
    }
    for (const Building& b : scene.buildings) {
        hash_double(h, b.height);
        hash_bytes(h, b.material.data(), b.material.size());
        for (const Vec2& p : b.footprint.vertices()) {
            hash_double(h, p.x);
            hash_double(h, p.y);
        }
    }
    return h;
}

}  // namespace iaspa
