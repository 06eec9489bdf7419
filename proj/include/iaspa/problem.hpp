#pragma once

#include <cstdint>
#include <vector>

#include "iaspa/objective.hpp"
#include "iaspa/propagation.hpp"
#include "iaspa/scene.hpp"

namespace iaspa {

/// Everything the placement loop needs: scene, lattice, per-candidate fields
/// and the objective configuration with its computed bound M. `hash`
/// identifies the instance (scene + radio + candidates + objective) so
/// results from different problems cannot be cross-certified.
struct PlacementProblem {
    Scene scene;
    ReceiverGrid grid;
    RadioConfig radio;
    CandidateSet candidates;
    std::vector<PowerField> fields;
    ObjectiveConfig objective;
    std::uint64_t hash = 0;
};

std::uint64_t problem_hash(const PlacementProblem& p);

}  // namespace iaspa
