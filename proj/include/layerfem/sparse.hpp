#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace layerfem {

/// Square compressed-sparse-row matrix. Column indices are strictly
/// increasing within each row.
class CsrMatrix {
public:
    CsrMatrix() = default;
    CsrMatrix(int n, std::vector<int> row_offsets, std::vector<int> columns, std::vector<double> values);

    /// Builds the matrix from a per-row list of column indices; values start at zero.
    static CsrMatrix from_pattern(int n, std::vector<std::vector<int>> rows);

    [[nodiscard]] int size() const { return n_; }
    [[nodiscard]] std::size_t nonzeros() const { return values_.size(); }
    [[nodiscard]] const std::vector<int>& row_offsets() const { return offsets_; }
    [[nodiscard]] const std::vector<int>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<double>& values() const { return values_; }
    [[nodiscard]] std::vector<double>& values() { return values_; }

    /// Position of (row, col) in the value array, -1 when structurally zero.
    [[nodiscard]] int find(int row, int col) const;
    [[nodiscard]] double at(int row, int col) const;
    /// Adds to an existing entry; throws std::out_of_range if it is not stored.
    void add(int row, int col, double value);

    void multiply(std::span<const double> x, std::span<double> y) const;
    [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;
    [[nodiscard]] std::vector<double> diagonal() const;

    [[nodiscard]] bool structurally_symmetric() const;
    /// max |A_ij - A_ji|.
    [[nodiscard]] double asymmetry() const;
    [[nodiscard]] double max_abs() const;

private:
    int n_ = 0;
    std::vector<int> offsets_{0};
    std::vector<int> columns_;
    std::vector<double> values_;
};

struct CgResult {
    std::vector<double> solution;
    int iterations = 0;
    double residual = 0.0;                  ///< final ||b - A x||_2
    std::vector<double> residual_history;   ///< ||r||_2 per iteration, starting with the initial one
    std::vector<double> preconditioned_history;  ///< sqrt(r^T D^-1 r) per iteration
    std::vector<double> energy_drop;        ///< ||e_m||_A^2 - ||e_{m+1}||_A^2 = alpha_m r_m^T z_m per step
};

class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), history_(std::move(history))
    {
    }
    [[nodiscard]] const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Jacobi-preconditioned conjugate gradients from a zero initial guess. Stops
/// when ||b - A x||_2 <= rel_tol ||b||_2; throws SolverError on a zero or
/// negative diagonal entry, a breakdown, or when max_iter is exhausted.
CgResult cg_solve(const CsrMatrix& a, std::span<const double> rhs, double rel_tol = 1e-12,
                  int max_iter = 10000);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

}  // namespace layerfem
