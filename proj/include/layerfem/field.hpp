#pragma once

#include <array>
#include <functional>
#include <stdexcept>
#include <string>

namespace layerfem {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

using Vec2 = std::array<double, 2>;

/// Analytic scalar field on the unit square: value plus optional gradient and
/// Laplacian callables.
class ScalarField {
public:
    using ValueFn = std::function<double(double, double)>;
    using GradientFn = std::function<Vec2(double, double)>;

    ScalarField() = default;
    explicit ScalarField(ValueFn value, GradientFn gradient = {}, ValueFn laplacian = {});

    static ScalarField constant(double c);
    /// Linear map (x, y) -> a + bx x + by y.
    static ScalarField affine(double a, double bx, double by);

    [[nodiscard]] double value(double x, double y) const { return value_(x, y); }
    [[nodiscard]] double operator()(double x, double y) const { return value_(x, y); }
    [[nodiscard]] Vec2 gradient(double x, double y) const;
    [[nodiscard]] double laplacian(double x, double y) const;

    [[nodiscard]] bool has_value() const { return static_cast<bool>(value_); }
    [[nodiscard]] bool has_gradient() const { return static_cast<bool>(gradient_); }
    [[nodiscard]] bool has_laplacian() const { return static_cast<bool>(laplacian_); }

    friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
    friend ScalarField operator*(double s, const ScalarField& a);

private:
    ValueFn value_;
    GradientFn gradient_;
    ValueFn laplacian_;
};

/// Worst mismatch between the analytic gradient and central differences of the
/// value over `samples` pseudo-random interior points, relative to
/// max(|grad|, 1).
double gradient_fd_mismatch(const ScalarField& field, double step, int samples, unsigned seed = 7);

}  // namespace layerfem
