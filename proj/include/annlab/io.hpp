#pragma once

#include <string>

#include "annlab/levelset.hpp"
#include "annlab/weierstrass.hpp"

namespace annlab {

struct SvgStyle {
    double canvas = 720.0;  // square viewport, px
    double pad = 0.06;      // margin around the outer circle, fraction of its radius
};

// Level-set picture: both boundary circles, arcs as polylines, crossing nodes
// as filled markers, and an inward arrow on every endpoint that reaches the
// inner limit.  Output bytes are a pure function of the input.
std::string render_svg(const LevelSetComplex& complex, const SvgStyle& style = {});

// One row per polyline vertex: arc_id,vertex_index,re,im,r,theta.  theta is
// the unrolled walk angle so closed loops expose their winding.
std::string arc_csv(const LevelSetComplex& complex);

// OBJ-style text mesh: "v x y z" per grid node in row-major order, then
// "f a b c d" quads (1-indexed) closing around the angular seam.
std::string mesh_text(const MinimalImmersion& immersion);

}  // namespace annlab
