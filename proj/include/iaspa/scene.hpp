#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iaspa/geometry.hpp"

namespace iaspa {

struct Building {
    Polygon footprint;     // counter-clockwise after load
    double height = 0.0;   // meters above ground
    std::string material;  // key into MaterialTable
};

/// Material id -> through-material attenuation in dB per meter.
struct MaterialTable {
    std::map<std::string, double> db_per_meter;

    bool has(const std::string& id) const { return db_per_meter.count(id) != 0; }
    double attenuation(const std::string& id) const { return db_per_meter.at(id); }
};

struct Scene {
    Rect bounds;
    std::vector<Building> buildings;
    MaterialTable materials;
    double grid_spacing = 0.0;     // receiver lattice spacing, meters
    double receiver_height = 0.0;  // meters above ground
};

/// Normalizes building orientations and throws ValidationError naming the
/// first violated invariant.
void validate_scene(Scene& scene);

struct Site {
    Vec2 pos;
    double height = 0.0;  // mount height, meters
};

/// Receiver lattice of cell centers covering the scene bounds.
struct ReceiverGrid {
    Vec2 origin;           // bounds min corner
    double spacing = 0.0;  // meters
    int rows = 0;
    int cols = 0;
    double height = 0.0;  // receiver height, meters

    double cell_weight() const { return spacing * spacing; }  // area element, m^2
    std::size_t cells() const { return static_cast<std::size_t>(rows) * cols; }
    Vec2 center(int r, int c) const {
        return {origin.x + (c + 0.5) * spacing, origin.y + (r + 0.5) * spacing};
    }
};

/// rows = floor(height/spacing), cols = floor(width/spacing).
/// Throws ValidationError if the spacing exceeds either bounds dimension.
ReceiverGrid make_grid(const Scene& scene);

struct CandidateSet {
    std::vector<Site> sites;  // row-major by position (y, then x)
    std::vector<ExclusionZone> exclusion_zones;
};

/// Either an explicit site list or an auto-generated lattice.
struct CandidateSpec {
    double mount_height = 0.0;
    std::optional<double> lattice_pitch;  // cell-center lattice when set
    std::vector<Vec2> explicit_sites;
    std::vector<ExclusionZone> exclusions;
};

/// Generates the feasible candidate set: in bounds, outside every exclusion
/// zone, pairwise at least one grid spacing apart. Deterministic row-major
/// ordering. Throws ValidationError if the filtered set is empty.
CandidateSet build_candidates(const Scene& scene, const CandidateSpec& spec);

/// FNV-1a content hash over a canonical serialization (used for cache keys
/// and problem identity).
std::uint64_t scene_hash(const Scene& scene);

}  // namespace iaspa
