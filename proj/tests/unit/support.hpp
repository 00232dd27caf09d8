#pragma once

#include "layerfem/fespace.hpp"
#include "layerfem/mesh.hpp"

#include <memory>

namespace layerfem::test {

/// Uniform N x N mesh of the unit square, bypassing the layer-adapted
/// generator (which needs N >= 8).
Mesh1D uniform_line(int N);
std::shared_ptr<const FeSpace> uniform_space(int N, int k);

MeshParams roos(int N, double epsilon, double sigma);
MeshParams kopteva(int N, double epsilon, double sigma);
std::shared_ptr<const FeSpace> layer_space(const MeshParams& p, int k);

}  // namespace layerfem::test
