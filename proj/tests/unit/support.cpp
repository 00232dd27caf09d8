#include "support.hpp"

namespace layerfem::test {

Mesh1D uniform_line(int N)
{
    std::vector<double> x(static_cast<std::size_t>(N + 1));
    std::vector<double> h(static_cast<std::size_t>(N));
    for (int i = 0; i <= N; ++i) {
        x[static_cast<std::size_t>(i)] = static_cast<double>(i) / N;
    }
    for (int i = 0; i < N; ++i) {
        h[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
    }
    MeshParams p;
    p.N = N;
    return Mesh1D(p, x, h);
}

std::shared_ptr<const FeSpace> uniform_space(int N, int k)
{
    return build_space(TensorMesh2D(uniform_line(N)), k);
}

MeshParams roos(int N, double epsilon, double sigma)
{
    MeshParams p;
    p.kind = MeshKind::roos;
    p.N = N;
    p.epsilon = epsilon;
    p.sigma = sigma;
    p.beta = 1.0;
    return p;
}

MeshParams kopteva(int N, double epsilon, double sigma)
{
    MeshParams p = roos(N, epsilon, sigma);
    p.kind = MeshKind::kopteva;
    p.c1 = default_c1(sigma, p.beta);
    return p;
}

std::shared_ptr<const FeSpace> layer_space(const MeshParams& p, int k)
{
    return build_space(TensorMesh2D(build_mesh(p)), k);
}

}  // namespace layerfem::test
