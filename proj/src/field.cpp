#include "layerfem/field.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace layerfem {

ScalarField::ScalarField(ValueFn value, GradientFn gradient, ValueFn laplacian)
    : value_(std::move(value)), gradient_(std::move(gradient)), laplacian_(std::move(laplacian))
{
}

ScalarField ScalarField::constant(double c)
{
    return ScalarField([c](double, double) { return c; },
                       [](double, double) { return Vec2{0.0, 0.0}; },
                       [](double, double) { return 0.0; });
}

ScalarField ScalarField::affine(double a, double bx, double by)
{
    return ScalarField([=](double x, double y) { return a + bx * x + by * y; },
                       [=](double, double) { return Vec2{bx, by}; },
                       [](double, double) { return 0.0; });
}

Vec2 ScalarField::gradient(double x, double y) const
{
    if (!gradient_) {
        throw std::logic_error("ScalarField: gradient not provided");
    }
    return gradient_(x, y);
}

double ScalarField::laplacian(double x, double y) const
{
    if (!laplacian_) {
        throw std::logic_error("ScalarField: laplacian not provided");
    }
    return laplacian_(x, y);
}

namespace {

template <class Op>
ScalarField combine(const ScalarField& a, const ScalarField& b, Op op)
{
    ScalarField::GradientFn grad;
    ScalarField::ValueFn lap;
    if (a.has_gradient() && b.has_gradient()) {
        grad = [=](double x, double y) {
            const Vec2 ga = a.gradient(x, y);
            const Vec2 gb = b.gradient(x, y);
            return Vec2{op(ga[0], gb[0]), op(ga[1], gb[1])};
        };
    }
    if (a.has_laplacian() && b.has_laplacian()) {
        lap = [=](double x, double y) { return op(a.laplacian(x, y), b.laplacian(x, y)); };
    }
    return ScalarField([=](double x, double y) { return op(a.value(x, y), b.value(x, y)); },
                       std::move(grad), std::move(lap));
}

}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b)
{
    return combine(a, b, std::plus<double>{});
}

ScalarField operator-(const ScalarField& a, const ScalarField& b)
{
    return combine(a, b, std::minus<double>{});
}

ScalarField operator*(double s, const ScalarField& a)
{
    ScalarField::GradientFn grad;
    ScalarField::ValueFn lap;
    if (a.has_gradient()) {
        grad = [=](double x, double y) {
            const Vec2 g = a.gradient(x, y);
            return Vec2{s * g[0], s * g[1]};
        };
    }
    if (a.has_laplacian()) {
        lap = [=](double x, double y) { return s * a.laplacian(x, y); };
    }
    return ScalarField([=](double x, double y) { return s * a.value(x, y); }, std::move(grad),
                       std::move(lap));
}

double gradient_fd_mismatch(const ScalarField& field, double step, int samples, unsigned seed)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        const double x = dist(rng);
        const double y = dist(rng);
        const Vec2 g = field.gradient(x, y);
        const double fx = (field(x + step, y) - field(x - step, y)) / (2.0 * step);
        const double fy = (field(x, y + step) - field(x, y - step)) / (2.0 * step);
        const double scale = std::max({std::abs(g[0]), std::abs(g[1]), 1.0});
        worst = std::max(worst, std::max(std::abs(fx - g[0]), std::abs(fy - g[1])) / scale);
    }
    return worst;
}

}  // namespace layerfem
