// SPDX-License-Identifier: Apache-2.0
#include "latsched/routing.hpp"

#include <algorithm>

namespace latsched {

std::optional<PathChoice> select_best_path(const Fabric& fabric, QubitId control, QubitId target,
                                           EdgeOrientation control_orientation,
                                           EdgeOrientation target_orientation, const MstSnapshot& snapshot,
                                           std::span<const double> expected_free) {
    const Position pc = fabric.data_position(control);
    const Position pt = fabric.data_position(target);
    std::optional<PathChoice> best;
    for (Side sc : kAllSides) {
        const auto ac = fabric.neighbor_ancilla(pc, sc);
        if (!ac) continue;
        const bool rc = edge_type(control_orientation, sc) != EdgeType::Z;
        for (Side st : kAllSides) {
            const auto at = fabric.neighbor_ancilla(pt, st);
            if (!at) continue;
            const bool rt = edge_type(target_orientation, st) != EdgeType::X;
            TreePath p = shortest_minimax_path(snapshot, *ac, *at);
            double wait = 0.0;
            for (AncillaId a : p.nodes) wait = std::max(wait, expected_free[a]);
            const double completion = 3.0 * rc + 3.0 * rt + 2.0 + wait;
            if (!best || completion < best->expected_completion ||
                (completion == best->expected_completion && p.nodes.size() < best->path.size())) {
                best = PathChoice{*ac, *at, std::move(p.nodes), rc, rt, completion};
            }
        }
    }
    return best;
}

}  // namespace latsched
