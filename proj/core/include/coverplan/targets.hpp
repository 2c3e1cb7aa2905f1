// Target construction from a compact spec string shared by the CLI and the
// experiment harness:
//   "sphere"                      unit reference target (r=10, 960 triangles)
//   "sphere:r=6,tris=320"         parameterized sphere
//   "nested-box", "channel-block" occluded targets
//   anything else                 mesh file path (format from extension)
#pragma once

#include <string>
#include <vector>

#include "coverplan/mesh.hpp"

namespace coverplan {

struct TargetInfo {
    TriangleMesh mesh;
    std::string canonical;  // normalized spec string
    double hidden_area_fraction{0.0};
    std::vector<int> hidden_ids;
};

TargetInfo make_target(const std::string& spec);

}  // namespace coverplan
