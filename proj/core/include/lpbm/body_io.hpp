#pragma once

#include <string>

#include "lpbm/body.hpp"

namespace lpbm {

// Builds a body from a JSON specification:
//
//   {"dim": 2, "rep": {"type": "ball", "radius": 1.0}, "flags": {...}}
//
// Representation objects ("rep", and the nested bodies of affine_image and
// lp_sum) take one of these shapes:
//
//   {"type": "ball",            "radius": r, "center": [..]?}
//   {"type": "ellipsoid",       "semi_axes": [..] | "shape": [[..],..],
//                               "center": [..]?}
//   {"type": "polytope",        "vertices": [[..], ..]}
//   {"type": "support_sampled", "grid": {"type": "circle", "count": m}
//                                      | {"type": "sphere", "min_vertices": m},
//                               "values": [..]}
//   {"type": "reuleaux",        "width": w}                      (dim 2)
//   {"type": "affine_image",    "matrix": [[..], ..], "shift": [..]?,
//                               "body": {rep}}
//   {"type": "lp_sum",          "p": number | "inf", "weights": [a, b],
//                               "bodies": [{rep}, {rep}]}
//
// "flags" currently supports {"origin_symmetric": true}, which is verified
// against the constructed body rather than trusted.  Unknown fields anywhere
// are rejected.  All failures throw std::invalid_argument with a message
// naming the offending path.
ConvexBody body_from_json_text(const std::string& text);

// body_from_json_text on the contents of the file at `path`.
ConvexBody load_body(const std::string& path);

}  // namespace lpbm
