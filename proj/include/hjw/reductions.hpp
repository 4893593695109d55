#pragma once

#include <functional>
#include <optional>
#include <stdexcept>

#include <json.hpp>

#include "hjw/checkers.hpp"
#include "hjw/kinds.hpp"

namespace hjw {

// An input witness failed its re-verification gate.
struct InvalidInputWitnessError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A stage of the composed construction failed; `stage` names it.
struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_, const std::string& msg)
      : std::runtime_error(stage_ + ": " + msg), stage(std::move(stage_)) {}
};

// ---------------------------------------------------------------------------
// cube-of-cubes flattening: words of length n over an alphabet of size h^m
// correspond to words of length n*m over h
// ---------------------------------------------------------------------------

// Output position i*m+l holds component l of the composite letter eta(i).
Word grid_flatten_map(const Word& eta, int n, int m, int h);

// e(eta) = d(flatten(eta)); d colors the (n*m)-cube over h.
Coloring pullback_grid_flatten(const Coloring& d, int n, int m, int h);

// A monochromatic line (N, rho) for the pullback lifts to an equal-block-size
// subspace witness for d: block l is N x {l}, the anchor splits rho
// componentwise.  Gates on the input line, re-verifies the output.
SubspaceWitness grid_lift_witness(const SubspaceWitness& line, const Coloring& d,
                                  int n, int m, int h);

// ---------------------------------------------------------------------------
// singleton blocks: a count-determined witness yields unit blocks
// ---------------------------------------------------------------------------

SubspaceWitness singleton_blocks(const F13Witness& w, const Coloring& d);

// ---------------------------------------------------------------------------
// embedding through a profile-invariant witness
// ---------------------------------------------------------------------------

// The word constant eta(l) on block l and equal to the anchor elsewhere.
Word blocks_embed(const BlockSystem& s, const Word& eta, int h);

// e(eta) = d(embed(eta)) on the cube of side s.dim(); gates on s verifying as
// a profile-invariant witness for d when verify_input is set.
Coloring pullback_blocks_embed(const Coloring& d, const BlockSystem& s,
                               bool verify_input = true);

// A monochromatic line for the pullback lifts to a monochromatic line for d:
// the moving set is the union of the blocks named by the input line.
SubspaceWitness embed_lift_line(const SubspaceWitness& line_for_e, const BlockSystem& s,
                                const Coloring& d);

// ---------------------------------------------------------------------------
// composition space machinery
// ---------------------------------------------------------------------------

// The word whose first counts[0] positions are 0, the next counts[1] are 1, ...
Word canonical_word(const OmegaPoint& counts, int total, int h);

struct OplusSolution {
  std::vector<long long> base;
  long long step = 0;
  nlohmann::json trace;
};

// The affine image of a grid point in the composition space of h*h*n:
// coordinate e maps to h*eta(e) + h*n - sum(eta).  Every part is positive and
// the parts always sum to h*h*n.
OmegaPoint grid_composition_image(const GridPoint& eta, int h, int n);

using GwSearchFn = std::function<std::optional<GwWitness>(const Coloring& e)>;

// Solves the bump property on Omega(h*h*n, h) by pulling the coloring back to
// the h-dimensional grid of side n and finding a monochromatic homothetic
// 2^h box there.  The grid witness (corner, delta) maps to
//   offset = h*n - sum(corner) - delta,
//   base[e] = h*corner[e] + offset,  step = h*delta,
// and the bumped compositions are exactly the images of the box's h bumped
// corners.  Throws InvalidInputWitnessError for h < 2 and PipelineError when
// the grid search yields nothing at this n.
OplusSolution solve_oplus_via_gallai_witt(const Coloring& d, int h, int n,
                                          const GwSearchFn& gw_search = {});

// How the line construction obtains its bump solution.
struct OplusRoute {
  enum class Mode { GallaiWitt, Direct };
  Mode mode = Mode::GallaiWitt;
  int n = 0;                        // grid side; requires m* = h*h*n
  std::optional<GwWitness> planted; // bypasses the grid search when set
};

struct PipelineResult {
  SubspaceWitness line;
  nlohmann::json trace;
};

// End-to-end: a verified profile-invariant witness with m* blocks produces a
// verified monochromatic line for d.  Stages: embed pullback, composition
// coloring, bump solution (grid route or direct search), line for the
// pullback, lift, final verification.
PipelineResult find_monochromatic_line_main(const Coloring& d, const BlockSystem& s,
                                            const OplusRoute& route);

}  // namespace hjw
