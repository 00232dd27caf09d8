#include "layerfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace layerfem {

std::string to_string(MeshKind kind)
{
    return kind == MeshKind::roos ? "roos" : "kopteva";
}

MeshKind parse_mesh_kind(const std::string& text)
{
    if (text == "roos") {
        return MeshKind::roos;
    }
    if (text == "kopteva") {
        return MeshKind::kopteva;
    }
    throw InvalidParameters("unknown mesh kind '" + text + "' (expected roos or kopteva)");
}

std::array<double, 2> c1_bounds(double sigma, double beta)
{
    return {sigma / (4.0 * std::exp(1.0) * beta), 0.5 * std::max(sigma / beta, 0.25)};
}

double default_c1(double sigma, double beta)
{
    const double preferred = 4.0 * sigma / (3.0 * beta);
    const auto [lo, hi] = c1_bounds(sigma, beta);
    return (preferred >= lo && preferred <= hi) ? preferred : hi;
}

std::vector<std::string> parameter_violations(const MeshParams& p)
{
    std::vector<std::string> out;
    auto fmt = [](double v) {
        std::ostringstream os;
        os << std::setprecision(6) << v;
        return os.str();
    };
    if (p.N <= 0 || p.N % 4 != 0) {
        out.push_back("N must be a positive multiple of 4 (N = " + std::to_string(p.N) + ")");
    }
    if (!(p.epsilon > 0.0)) {
        out.push_back("epsilon must be positive (epsilon = " + fmt(p.epsilon) + ")");
    }
    if (!(p.sigma >= 1.0)) {
        out.push_back("sigma must satisfy sigma >= 1 (sigma = " + fmt(p.sigma) + ")");
    }
    if (!(p.beta > 0.0)) {
        out.push_back("beta must be positive (beta = " + fmt(p.beta) + ")");
    }
    if (!out.empty()) {
        return out;
    }
    const double n_min = std::max(8.0, 2.0 * std::log(p.sigma / p.beta));
    if (p.N < n_min) {
        out.push_back("N >= max{8, 2 ln(sigma/beta)} violated: N = " + std::to_string(p.N) +
                      " < " + fmt(n_min));
    }
    const double eps_max = std::min(p.beta / (4.0 * p.sigma), 1.0) / p.N;
    if (p.epsilon > eps_max) {
        out.push_back("epsilon <= min{beta/(4 sigma), 1} N^-1 violated: epsilon = " +
                      fmt(p.epsilon) + " > " + fmt(eps_max));
    }
    if (p.kind == MeshKind::kopteva) {
        const auto [lo, hi] = c1_bounds(p.sigma, p.beta);
        if (!(p.c1 >= lo && p.c1 <= hi)) {
            out.push_back("sigma/(4 e beta) <= C1 <= max{sigma/beta, 1/4}/2 violated: C1 = " +
                          fmt(p.c1) + " not in [" + fmt(lo) + ", " + fmt(hi) + "]");
        }
    }
    return out;
}

void require_valid(const MeshParams& params)
{
    const auto violations = parameter_violations(params);
    if (violations.empty()) {
        return;
    }
    std::string msg = "invalid mesh parameters:";
    for (const auto& v : violations) {
        msg += "\n  " + v;
    }
    throw InvalidParameters(msg);
}

double kopteva_theta(const MeshParams& params)
{
    return 0.25 - params.c1 * params.epsilon;
}

namespace {

void require_well_defined(const MeshParams& p)
{
    if (!(p.epsilon > 0.0) || !(p.beta > 0.0) || !(p.sigma > 0.0)) {
        throw InvalidParameters("generating function needs epsilon, sigma, beta > 0");
    }
    if (p.kind == MeshKind::roos && !(p.epsilon < 1.0)) {
        throw InvalidParameters("roos generating function needs epsilon < 1");
    }
    if (p.kind == MeshKind::kopteva && !(p.c1 > 0.0 && 4.0 * p.c1 * p.epsilon < 1.0)) {
        throw InvalidParameters("kopteva generating function needs 0 < 4 C1 epsilon < 1");
    }
}

// Value of the left logarithmic piece at its breakpoint.
double left_break_value(const MeshParams& p)
{
    const double scale = p.sigma * p.epsilon / p.beta;
    if (p.kind == MeshKind::roos) {
        return -scale * std::log(p.epsilon);
    }
    return -scale * std::log(4.0 * (0.25 - kopteva_theta(p)));
}

double left_piece(const MeshParams& p, double t)
{
    const double scale = p.sigma * p.epsilon / p.beta;
    if (p.kind == MeshKind::roos) {
        return -scale * std::log(4.0 * (0.25 - t) + 4.0 * p.epsilon * t);
    }
    return -scale * std::log(4.0 * (0.25 - t));
}

double right_piece(const MeshParams& p, double t)
{
    const double scale = p.sigma * p.epsilon / p.beta;
    if (p.kind == MeshKind::roos) {
        return 1.0 + scale * std::log(4.0 * (t - 0.75) + 4.0 * p.epsilon * (1.0 - t));
    }
    return 1.0 + scale * std::log(4.0 * (t - 0.75));
}

double middle_piece(const MeshParams& p, const ContinuityConstants& d, double t)
{
    if (p.kind == MeshKind::roos) {
        return d.d_a * (t - 0.25) + d.d_b * (t - 0.75);
    }
    const double theta = kopteva_theta(p);
    return d.d_a * (t - theta) + d.d_b * (t - 1.0 + theta);
}

double breakpoint(const MeshParams& p)
{
    return p.kind == MeshKind::roos ? 0.25 : kopteva_theta(p);
}

}  // namespace

ContinuityConstants continuity_constants(const MeshParams& p)
{
    require_well_defined(p);
    // Left piece ends at L, right piece starts at 1 - L; the middle line must
    // pass through (t1, L) and (1 - t1, 1 - L).
    const double value = left_break_value(p);
    if (p.kind == MeshKind::roos) {
        // d1 (t - 1/4) + d2 (t - 3/4): t = 1/4 gives -d2/2 = L, t = 3/4 gives d1/2 = 1 - L.
        return {2.0 * (1.0 - value), -2.0 * value};
    }
    const double theta = kopteva_theta(p);
    const double width = 1.0 - 2.0 * theta;
    return {(1.0 - value) / width, -value / width};
}

double generating_function(const MeshParams& p, double t)
{
    const ContinuityConstants d = continuity_constants(p);
    const double t1 = breakpoint(p);
    if (t <= t1) {
        return left_piece(p, t);
    }
    if (t >= 1.0 - t1) {
        return right_piece(p, t);
    }
    return middle_piece(p, d, t);
}

std::array<double, 4> breakpoint_limits(const MeshParams& p)
{
    const ContinuityConstants d = continuity_constants(p);
    const double t1 = breakpoint(p);
    const double t2 = 1.0 - t1;
    return {left_piece(p, t1), middle_piece(p, d, t1), middle_piece(p, d, t2), right_piece(p, t2)};
}

Mesh1D::Mesh1D(MeshParams params, std::vector<double> points, std::vector<double> steps)
    : params_(params), points_(std::move(points)), steps_(std::move(steps))
{
}

int Mesh1D::locate(double t) const
{
    const auto it = std::lower_bound(points_.begin(), points_.end(), t);
    const int idx = static_cast<int>(it - points_.begin()) - 1;
    return std::clamp(idx, 0, N() - 1);
}

Mesh1D build_mesh(const MeshParams& params)
{
    require_valid(params);
    const int n = params.N;
    const int half = n / 2;
    std::vector<double> x(static_cast<std::size_t>(n + 1));
    for (int i = 0; i < half; ++i) {
        x[static_cast<std::size_t>(i)] =
            generating_function(params, static_cast<double>(i) / static_cast<double>(n));
    }
    x[0] = 0.0;
    x[static_cast<std::size_t>(half)] = 0.5;
    std::vector<double> h(static_cast<std::size_t>(n));
    for (int i = 0; i < half; ++i) {
        h[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i + 1)] - x[static_cast<std::size_t>(i)];
        h[static_cast<std::size_t>(n - 1 - i)] = h[static_cast<std::size_t>(i)];
    }
    for (int i = half + 1; i <= n; ++i) {
        x[static_cast<std::size_t>(i)] = 1.0 - x[static_cast<std::size_t>(n - i)];
    }
    for (int i = 0; i < n; ++i) {
        if (!(x[static_cast<std::size_t>(i + 1)] > x[static_cast<std::size_t>(i)])) {
            throw InvalidParameters("mesh points not strictly increasing at index " +
                                    std::to_string(i));
        }
    }
    return Mesh1D(params, std::move(x), std::move(h));
}

TensorMesh2D::TensorMesh2D(Mesh1D line) : xs_(std::move(line)) {}

bool ElementSet::contains(int ei, int ej) const
{
    const std::array<int, 2> key{ei, ej};
    return std::binary_search(elements.begin(), elements.end(), key,
                              [](const auto& a, const auto& b) {
                                  return a[1] != b[1] ? a[1] < b[1] : a[0] < b[0];
                              });
}

ElementSet block_ring(const ElementBlock& block, int N)
{
    ElementSet ring;
    for (int j = block.j.lo; j <= block.j.hi; ++j) {
        for (int i = block.i.lo; i <= block.i.hi; ++i) {
            // A neighbouring element (including diagonal ones) inside the grid
            // but outside the block means the closures meet.
            bool touches = false;
            for (int dj = -1; dj <= 1 && !touches; ++dj) {
                for (int di = -1; di <= 1 && !touches; ++di) {
                    const int ni = i + di;
                    const int nj = j + dj;
                    if (ni < 0 || nj < 0 || ni >= N || nj >= N) {
                        continue;
                    }
                    touches = !block.contains(ni, nj);
                }
            }
            if (touches) {
                ring.elements.push_back({i, j});
            }
        }
    }
    return ring;
}

BoundaryRegion block_boundary(const ElementBlock& b)
{
    return {
        LineSegment{Axis::horizontal, b.j.lo, b.i.lo, b.i.hi + 1},
        LineSegment{Axis::vertical, b.i.hi + 1, b.j.lo, b.j.hi + 1},
        LineSegment{Axis::horizontal, b.j.hi + 1, b.i.lo, b.i.hi + 1},
        LineSegment{Axis::vertical, b.i.lo, b.j.lo, b.j.hi + 1},
    };
}

namespace {

// Sides of the block that are not on the domain boundary.
BoundaryRegion interior_sides(const ElementBlock& b, int N)
{
    BoundaryRegion out;
    const auto sides = block_boundary(b);
    if (b.j.lo != 0) {
        out.push_back(sides[0]);
    }
    if (b.i.hi + 1 != N) {
        out.push_back(sides[1]);
    }
    if (b.j.hi + 1 != N) {
        out.push_back(sides[2]);
    }
    if (b.i.lo != 0) {
        out.push_back(sides[3]);
    }
    return out;
}

// Closure of dOmega minus the part of dOmega shared with the block.
BoundaryRegion boundary_complement(const ElementBlock& b, int N)
{
    BoundaryRegion out;
    auto side = [&](Axis axis, int line, bool touches, int lo, int hi) {
        if (!touches) {
            out.push_back({axis, line, 0, N});
            return;
        }
        if (lo > 0) {
            out.push_back({axis, line, 0, lo});
        }
        if (hi < N) {
            out.push_back({axis, line, hi, N});
        }
    };
    side(Axis::horizontal, 0, b.j.lo == 0, b.i.lo, b.i.hi + 1);
    side(Axis::vertical, N, b.i.hi + 1 == N, b.j.lo, b.j.hi + 1);
    side(Axis::horizontal, N, b.j.hi + 1 == N, b.i.lo, b.i.hi + 1);
    side(Axis::vertical, 0, b.i.lo == 0, b.j.lo, b.j.hi + 1);
    return out;
}

}  // namespace

SubdomainTable classify_subdomains(const TensorMesh2D& mesh)
{
    SubdomainTable t;
    const int n = mesh.N();
    const int q = n / 4;
    const int s = q - 2;
    t.N = n;
    t.layer_end = s;

    t.omega0 = {{q, 3 * q - 1}, {q, 3 * q - 1}};
    t.omega0_star = {{q - 1, 3 * q}, {q - 1, 3 * q}};
    t.omega0_star2 = {{q - 2, 3 * q + 1}, {q - 2, 3 * q + 1}};

    const IndexRange all{0, n - 1};
    const IndexRange low{0, s};
    const IndexRange high{n - 1 - s, n - 1};
    t.edge_strips = {ElementBlock{all, low}, ElementBlock{high, all}, ElementBlock{all, high},
                     ElementBlock{low, all}};
    t.corner_boxes = {ElementBlock{low, low}, ElementBlock{high, low}, ElementBlock{high, high},
                      ElementBlock{low, high}};

    for (int side = 0; side < 4; ++side) {
        const auto& strip = t.edge_strips[static_cast<std::size_t>(side)];
        const auto& box = t.corner_boxes[static_cast<std::size_t>(side)];
        t.edge_rings[static_cast<std::size_t>(side)] = block_ring(strip, n);
        t.corner_rings[static_cast<std::size_t>(side)] = block_ring(box, n);
        t.strip_interfaces[static_cast<std::size_t>(side)] = interior_sides(strip, n).front();
        t.corner_interfaces[static_cast<std::size_t>(side)] = interior_sides(box, n);
        t.strip_gammas[static_cast<std::size_t>(side)] = boundary_complement(strip, n);
        t.corner_gammas[static_cast<std::size_t>(side)] = boundary_complement(box, n);
    }
    t.domain_ring = block_ring({all, all}, n);
    t.omega0_star_boundary = block_boundary(t.omega0_star);
    t.domain_boundary = block_boundary({all, all});
    return t;
}

bool Lemma1Report::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const Lemma1Check& c) { return c.passed; });
}

void Lemma1Report::print(std::ostream& os) const
{
    os << "mesh " << to_string(params.kind) << " N=" << params.N << " epsilon=" << params.epsilon
       << " sigma=" << params.sigma << " beta=" << params.beta;
    if (params.kind == MeshKind::kopteva) {
        os << " c1=" << params.c1;
    }
    os << '\n';
    for (const auto& c : checks) {
        os << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name;
        if (c.witness >= 0) {
            os << " (index " << c.witness << ")";
        }
        if (!c.detail.empty()) {
            os << ": " << c.detail;
        }
        os << '\n';
    }
    os << "  empirical: h_{N/4-1}/eps=" << c_step_lower << " N*h_{N/4-1}=" << c_step_upper
       << " C4=" << c4 << " C5=" << c5 << " x_{N/4-1}/(sigma eps lnN)=" << c_ln_n
       << " x_{N/4}/(sigma eps ln(1/eps))=" << c_ln_eps << " decay(mu=0,1,sigma)=" << c_decay[0]
       << "," << c_decay[1] << "," << c_decay[2] << '\n';
}

Lemma1Report verify_lemma1(const Mesh1D& mesh)
{
    Lemma1Report r;
    r.params = mesh.params();
    const auto& p = r.params;
    const int n = mesh.N();
    const int q = n / 4;
    const double eps = p.epsilon;
    auto num = [](double v) {
        std::ostringstream os;
        os << std::setprecision(8) << v;
        return os.str();
    };

    {
        Lemma1Check c{"points strictly increasing", true, true, -1, ""};
        for (int i = 0; i < n && c.passed; ++i) {
            if (!(mesh.point(i + 1) > mesh.point(i))) {
                c.passed = false;
                c.witness = i;
            }
        }
        r.checks.push_back(c);
    }
    {
        Lemma1Check c{"h_0 <= h_1 <= ... <= h_{N/4-2}", true, true, -1, ""};
        for (int i = 0; i + 1 <= q - 2 && c.passed; ++i) {
            if (mesh.step(i) > mesh.step(i + 1)) {
                c.passed = false;
                c.witness = i;
            }
        }
        r.checks.push_back(c);
    }
    {
        const double h = mesh.step(q - 2);
        const double lo = p.sigma / (4.0 * p.beta) * eps;
        const double hi = p.sigma / p.beta * eps;
        Lemma1Check c{"(sigma/4beta) eps <= h_{N/4-2} <= (sigma/beta) eps", lo <= h && h <= hi, true,
                      -1, num(lo) + " <= " + num(h) + " <= " + num(hi)};
        if (!c.passed) {
            c.witness = q - 2;
        }
        r.checks.push_back(c);
    }
    {
        Lemma1Check c{"h_i = h_{N-1-i}", true, true, -1, ""};
        for (int i = 0; i < n && c.passed; ++i) {
            if (mesh.step(i) != mesh.step(n - 1 - i)) {
                c.passed = false;
                c.witness = i;
            }
        }
        r.checks.push_back(c);
    }
    {
        Lemma1Check c{"x_i + x_{N-i} = 1", true, true, -1, ""};
        for (int i = 0; i <= n && c.passed; ++i) {
            const double sum = mesh.point(i) + mesh.point(n - i);
            if (std::abs(sum - 1.0) > 2.0 * std::numeric_limits<double>::epsilon()) {
                c.passed = false;
                c.witness = i;
            }
        }
        r.checks.push_back(c);
    }
    {
        const double xq = mesh.point(q);
        r.checks.push_back({"x_{N/4} <= 1/4", xq <= 0.25, true, xq <= 0.25 ? -1 : q, num(xq)});
    }
    if (p.kind == MeshKind::kopteva) {
        const double theta = kopteva_theta(p);
        const bool ok = 0.25 - 1.0 / n <= theta && theta < 0.25;
        r.checks.push_back({"1/4 - 1/N <= theta < 1/4", ok, true, -1, "theta = " + num(theta)});
    }

    const double h_tr = mesh.step(q - 1);
    r.c_step_lower = h_tr / eps;
    r.c_step_upper = h_tr * n;
    r.c4 = std::numeric_limits<double>::infinity();
    r.c5 = 0.0;
    for (int i = q; i <= n / 2; ++i) {
        r.c4 = std::min(r.c4, mesh.step(i) * n);
        r.c5 = std::max(r.c5, mesh.step(i) * n);
    }
    r.c_ln_n = mesh.point(q - 1) / (p.sigma * eps * std::log(static_cast<double>(n)));
    r.c_ln_eps = mesh.point(q) / (p.sigma * eps * std::log(1.0 / eps));
    const std::array<double, 3> mus{0.0, 1.0, p.sigma};
    for (std::size_t m = 0; m < mus.size(); ++m) {
        double worst = 0.0;
        for (int i = 0; i <= mesh.layer_end(); ++i) {
            const double lhs = std::pow(mesh.step(i), mus[m]) * std::exp(-p.beta * mesh.point(i) / eps);
            worst = std::max(worst, lhs / std::pow(eps / n, mus[m]));
        }
        r.c_decay[m] = worst;
    }
    r.checks.push_back({"C eps <= h_{N/4-1} <= C N^-1", r.c_step_lower > 0 && r.c_step_upper > 0,
                        false, -1, "reported constants"});
    return r;
}

void write_mesh_dump(std::ostream& os, const Mesh1D& mesh)
{
    const auto& p = mesh.params();
    os << std::setprecision(17);
    os << "# " << to_string(p.kind) << ' ' << p.N << ' ' << p.epsilon << ' ' << p.sigma << ' '
       << p.beta << ' ' << p.c1 << '\n';
    for (double x : mesh.points()) {
        os << x << '\n';
    }
}

}  // namespace layerfem
