#include "layerfem/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace layerfem {

CsrMatrix::CsrMatrix(int n, std::vector<int> row_offsets, std::vector<int> columns,
                     std::vector<double> values)
    : n_(n), offsets_(std::move(row_offsets)), columns_(std::move(columns)), values_(std::move(values))
{
    if (offsets_.size() != static_cast<std::size_t>(n_) + 1 || columns_.size() != values_.size() ||
        static_cast<std::size_t>(offsets_.back()) != columns_.size()) {
        throw std::invalid_argument("CsrMatrix: inconsistent array sizes");
    }
    for (int r = 0; r < n_; ++r) {
        for (int p = offsets_[static_cast<std::size_t>(r)] + 1; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p) {
            if (columns_[static_cast<std::size_t>(p)] <= columns_[static_cast<std::size_t>(p) - 1]) {
                throw std::invalid_argument("CsrMatrix: column indices must increase within a row");
            }
        }
    }
}

CsrMatrix CsrMatrix::from_pattern(int n, std::vector<std::vector<int>> rows)
{
    std::vector<int> offsets(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> cols;
    for (int r = 0; r < n; ++r) {
        auto& row = rows[static_cast<std::size_t>(r)];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        cols.insert(cols.end(), row.begin(), row.end());
        offsets[static_cast<std::size_t>(r) + 1] = static_cast<int>(cols.size());
    }
    std::vector<double> vals(cols.size(), 0.0);
    return CsrMatrix(n, std::move(offsets), std::move(cols), std::move(vals));
}

int CsrMatrix::find(int row, int col) const
{
    const auto begin = columns_.begin() + offsets_[static_cast<std::size_t>(row)];
    const auto end = columns_.begin() + offsets_[static_cast<std::size_t>(row) + 1];
    const auto it = std::lower_bound(begin, end, col);
    if (it == end || *it != col) {
        return -1;
    }
    return static_cast<int>(it - columns_.begin());
}

double CsrMatrix::at(int row, int col) const
{
    const int p = find(row, col);
    return p < 0 ? 0.0 : values_[static_cast<std::size_t>(p)];
}

void CsrMatrix::add(int row, int col, double value)
{
    const int p = find(row, col);
    if (p < 0) {
        throw std::out_of_range("CsrMatrix::add: entry not in sparsity pattern");
    }
    values_[static_cast<std::size_t>(p)] += value;
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (int r = 0; r < n_; ++r) {
        double sum = 0.0;
        for (int p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p) {
            sum += values_[static_cast<std::size_t>(p)] * x[static_cast<std::size_t>(columns_[static_cast<std::size_t>(p)])];
        }
        y[static_cast<std::size_t>(r)] = sum;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(static_cast<std::size_t>(n_));
    multiply(x, y);
    return y;
}

std::vector<double> CsrMatrix::diagonal() const
{
    std::vector<double> d(static_cast<std::size_t>(n_));
    for (int r = 0; r < n_; ++r) {
        d[static_cast<std::size_t>(r)] = at(r, r);
    }
    return d;
}

bool CsrMatrix::structurally_symmetric() const
{
    for (int r = 0; r < n_; ++r) {
        for (int p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p) {
            if (find(columns_[static_cast<std::size_t>(p)], r) < 0) {
                return false;
            }
        }
    }
    return true;
}

double CsrMatrix::asymmetry() const
{
    double worst = 0.0;
    for (int r = 0; r < n_; ++r) {
        for (int p = offsets_[static_cast<std::size_t>(r)]; p < offsets_[static_cast<std::size_t>(r) + 1]; ++p) {
            const int c = columns_[static_cast<std::size_t>(p)];
            worst = std::max(worst, std::abs(values_[static_cast<std::size_t>(p)] - at(c, r)));
        }
    }
    return worst;
}

double CsrMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

double norm_inf(std::span<const double> a)
{
    double m = 0.0;
    for (double v : a) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, double rel_tol, int max_iter)
{
    const int n = a.size();
    if (rhs.size() != static_cast<std::size_t>(n)) {
        throw std::invalid_argument("cg_solve: right-hand side length does not match the matrix");
    }
    const std::vector<double> diag = a.diagonal();
    for (int i = 0; i < n; ++i) {
        if (!(diag[static_cast<std::size_t>(i)] > 0.0)) {
            throw SolverError("cg_solve: non-positive diagonal entry in row " + std::to_string(i), {});
        }
    }

    CgResult out;
    out.solution.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<double> r(rhs.begin(), rhs.end());
    std::vector<double> z(static_cast<std::size_t>(n));
    std::vector<double> p(static_cast<std::size_t>(n));
    std::vector<double> ap(static_cast<std::size_t>(n));

    const double target = rel_tol * norm2(rhs);
    double rnorm = norm2(r);
    out.residual_history.push_back(rnorm);
    auto precondition = [&] {
        for (int i = 0; i < n; ++i) {
            z[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] / diag[static_cast<std::size_t>(i)];
        }
    };
    precondition();
    double rz = dot(r, z);
    out.preconditioned_history.push_back(std::sqrt(rz));
    p = z;

    int it = 0;
    for (int restart = 0;; ++restart) {
        while (rnorm > target) {
            if (it >= max_iter) {
                std::ostringstream msg;
                msg << "cg_solve: no convergence in " << max_iter << " iterations (residual " << rnorm
                    << ", target " << target << ")";
                throw SolverError(msg.str(), out.residual_history);
            }
            a.multiply(p, ap);
            const double pap = dot(p, ap);
            if (!(pap > 0.0)) {
                throw SolverError("cg_solve: breakdown, matrix not positive definite", out.residual_history);
            }
            const double alpha = rz / pap;
            for (int i = 0; i < n; ++i) {
                out.solution[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
                r[static_cast<std::size_t>(i)] -= alpha * ap[static_cast<std::size_t>(i)];
            }
            out.energy_drop.push_back(alpha * rz);
            precondition();
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (int i = 0; i < n; ++i) {
                p[static_cast<std::size_t>(i)] = z[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
            }
            rnorm = norm2(r);
            out.residual_history.push_back(rnorm);
            out.preconditioned_history.push_back(std::sqrt(rz));
            ++it;
        }
        // The recursively updated residual can drift from b - A x; restart
        // from the true residual when it has.
        a.multiply(out.solution, ap);
        for (int i = 0; i < n; ++i) {
            r[static_cast<std::size_t>(i)] = rhs[static_cast<std::size_t>(i)] - ap[static_cast<std::size_t>(i)];
        }
        rnorm = norm2(r);
        if (rnorm <= target || restart >= 3) {
            break;
        }
        precondition();
        rz = dot(r, z);
        p = z;
    }
    if (rnorm > target) {
        throw SolverError("cg_solve: true residual stagnates above the target", out.residual_history);
    }
    out.iterations = it;
    out.residual = rnorm;
    return out;
}

}  // namespace layerfem
