#pragma once

#include <optional>

#include "hjw/kinds.hpp"

namespace hjw {

enum class ColorConstraint { Monochromatic, BalancedConstant, ProfileInvariant };

// Finders return the first qualifying witness in canonical enumeration order
// (blocks by minimum element, anchors by rank, interval and grid witnesses
// lexicographic), or nullopt when no candidate qualifies.

std::optional<Witness> find_subspace_witness(const Coloring& d, int m,
                                             BlockConstraint bc, int fixed_size,
                                             ColorConstraint cc);
std::optional<Witness> find_f13_witness(const Coloring& d, int m);
std::optional<Witness> find_ap_witness(const Coloring& d, int m);
std::optional<Witness> find_gallai_witt_witness(const Coloring& d, int m);
std::optional<Witness> find_oplus_witness(const Coloring& d);

// Dispatch on the kind; the coloring's ground must match spec.ground_for(size).
std::optional<Witness> find_witness(const KindSpec& spec, const Coloring& d);

// Re-validates a witness against the defining condition of the kind by direct
// point evaluation; shares no decision logic with the finders.  Throws
// std::invalid_argument on a structural mismatch (wrong payload shape, wrong
// size, out-of-range entries); returns false when the condition fails.
bool verify_witness(const KindSpec& spec, int size, const Coloring& d, const Witness& w);

}  // namespace hjw
