#include "iaspa/problem.hpp"

#include <cstring>

namespace iaspa {

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

std::uint64_t problem_hash(const PlacementProblem& p) {
    std::uint64_t h = scene_hash(p.scene);
    const std::uint64_t rh = radio_hash(p.radio);
    hash_bytes(h, &rh, sizeof rh);
    for (const Site& s : p.candidates.sites) {
        hash_double(h, s.pos.x);
        hash_double(h, s.pos.y);
        hash_double(h, s.height);
    }
    const int mode = p.objective.mode == AggMode::Max ? 0 : 1;
    hash_bytes(h, &mode, sizeof mode);
    const int fam = static_cast<int>(p.objective.weight.family);
    hash_bytes(h, &fam, sizeof fam);
    hash_double(h, p.objective.weight.c);
    for (const auto& [x, y] : p.objective.weight.table) {
        hash_double(h, x);
        hash_double(h, y);
    }
    for (double v : p.objective.density.w.v) hash_double(h, v);
    return h;
}

}  // namespace iaspa
