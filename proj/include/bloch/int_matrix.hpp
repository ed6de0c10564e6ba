#pragma once

#include "bloch/integer.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace bloch {

// sparse row: sorted (column, value) pairs, values nonzero
using SparseVec = std::vector<std::pair<std::size_t, Int>>;

SparseVec sparsify(const std::vector<Int>& dense);
std::vector<Int> densify(const SparseVec& row, std::size_t cols);

// Row-sparse matrix for large relation sets.
struct SparseMatrix {
    std::size_t rows = 0, cols = 0;
    std::vector<SparseVec> data;

    SparseMatrix() = default;
    explicit SparseMatrix(std::size_t cols_) : cols(cols_) {}
    void append(SparseVec row);
    void append_dense(const std::vector<Int>& row);
};

// Dense matrix of arbitrary-precision integers. Rows are the unit of work
// throughout (relation matrices store one relation per row).
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}
    IntMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows, std::vector<Int>(cols)) {}

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(std::vector<std::vector<Int>> rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& at(std::size_t i, std::size_t j) { return data_[i][j]; }
    const Int& at(std::size_t i, std::size_t j) const { return data_[i][j]; }

    std::vector<Int>& row(std::size_t i) { return data_[i]; }
    const std::vector<Int>& row(std::size_t i) const { return data_[i]; }

    void append_row(std::vector<Int> r);

    // x * (*this) for a row vector x of length rows()
    std::vector<Int> row_times(const std::vector<Int>& x) const;

    // (*this) stacked on top of other (same column count)
    IntMatrix stacked(const IntMatrix& other) const;

    IntMatrix transposed() const;

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_, cols_;
    std::vector<std::vector<Int>> data_;
};

std::vector<Int> add_rows(const std::vector<Int>& a, const std::vector<Int>& b);
std::vector<Int> sub_rows(const std::vector<Int>& a, const std::vector<Int>& b);
std::vector<Int> scale_row(const std::vector<Int>& a, const Int& c);
bool is_zero_row(const std::vector<Int>& a);

// Row-echelon basis of an integer row lattice, built incrementally.
// Invariants: one basis row per pivot column, first nonzero entry of a row is
// at its pivot and positive, rows kept sorted by pivot. Membership and normal
// forms reduce against pivots in increasing column order, which makes the
// normal form the unique coset representative with 0 <= v[p] < pivot value.
class HermiteBasis {
public:
    HermiteBasis() : cols_(0) {}
    explicit HermiteBasis(std::size_t cols) : cols_(cols) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    void insert(std::vector<Int> row);
    void insert(const SparseVec& row) { insert(densify(row, cols_)); }

    bool contains(const std::vector<Int>& row) const;
    std::vector<Int> reduce(std::vector<Int> row) const;

    // coordinates of a lattice vector in terms of the basis rows;
    // returns false if the vector is not in the lattice
    bool solve(const std::vector<Int>& target, std::vector<Int>& coords) const;

    const std::vector<std::pair<std::size_t, std::vector<Int>>>& rows() const { return rows_; }
    IntMatrix to_matrix() const;

private:
    std::size_t cols_;
    // pivot column -> row; kept as sorted map for ordered traversal
    std::vector<std::pair<std::size_t, std::vector<Int>>> rows_;
    std::map<std::size_t, std::size_t> by_pivot_;
};

HermiteBasis hermite_basis(const IntMatrix& m);

struct SmithResult {
    std::vector<Int> factors;      // d1 | d2 | ... (nonnegative), length min(rows, cols)
    std::optional<IntMatrix> left;   // L (rows x rows)
    std::optional<IntMatrix> right;  // R (cols x cols)
    std::optional<IntMatrix> right_inverse;
};

// L * M * R = diag(factors). Pivot choice: nonzero entry of minimal absolute
// value, row-major tie-break, with full reduction passes interleaved.
SmithResult smith_normal_form(const IntMatrix& m, bool with_transforms = false);

// Basis of {x in Z^rows : x * m = 0}.
HermiteBasis left_kernel(const IntMatrix& m);

// Basis of {x in Z^rows : x * m in L}, where L is a lattice in Z^cols.
HermiteBasis preimage_lattice(const IntMatrix& m, const HermiteBasis& lattice);

}  // namespace bloch
