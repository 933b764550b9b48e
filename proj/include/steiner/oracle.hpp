#pragma once

#include <cstdint>

#include "steiner/instance.hpp"

namespace steiner {

inline constexpr int kSteinerTreeMaxR = 10;
inline constexpr int kSteinerTreeMaxV = 16;

/// Provably minimum Steiner tree of the metric-closed instance, by the
/// classic subset dynamic program over (vertex, terminal subset) states.
/// Throws UsageError when the caps are exceeded.
Tree exact_steiner_tree(const Instance& closed, int max_r = kSteinerTreeMaxR,
                        int max_v = kSteinerTreeMaxV);

/// Splits a tree of the closed instance into full components at its internal
/// terminals; each returned edge set is one component of the decomposition.
std::vector<std::vector<int>> full_component_decomposition(const Instance& closed,
                                                           const std::vector<int>& edge_ids);

struct RandomSpec {
    std::uint64_t seed = 1;
    int num_vertices = 8;
    int num_terminals = 4;
    long cost_min = 1;
    long cost_max = 20;
    InstanceClass cls = InstanceClass::General;
};

/// Seeded, reproducible random instance: connected, integer costs, class
/// enforced by construction (general instances may still happen to be
/// quasibipartite; classify() decides).
Instance random_instance(const RandomSpec& spec);

} // namespace steiner
