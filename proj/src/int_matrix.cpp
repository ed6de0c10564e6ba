#include "bloch/int_matrix.hpp"

#include <algorithm>
#include <stdexcept>

namespace bloch {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(std::vector<std::vector<Int>> rows, std::size_t cols) {
    IntMatrix m;
    m.rows_ = rows.size();
    m.cols_ = cols;
    for (const auto& r : rows) {
        if (r.size() != cols) throw std::invalid_argument("from_rows: ragged row");
    }
    m.data_ = std::move(rows);
    return m;
}

void IntMatrix::append_row(std::vector<Int> r) {
    if (r.size() != cols_) throw std::invalid_argument("append_row: wrong length");
    data_.push_back(std::move(r));
    ++rows_;
}

std::vector<Int> IntMatrix::row_times(const std::vector<Int>& x) const {
    if (x.size() != rows_) throw std::invalid_argument("row_times: wrong length");
    std::vector<Int> out(cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        if (x[i] == 0) continue;
        for (std::size_t j = 0; j < cols_; ++j) {
            if (data_[i][j] != 0) out[j] += x[i] * data_[i][j];
        }
    }
    return out;
}

IntMatrix IntMatrix::stacked(const IntMatrix& other) const {
    if (other.cols_ != cols_) throw std::invalid_argument("stacked: column mismatch");
    IntMatrix m = *this;
    for (std::size_t i = 0; i < other.rows_; ++i) m.append_row(other.data_[i]);
    return m;
}

IntMatrix IntMatrix::transposed() const {
    IntMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m.at(j, i) = data_[i][j];
    return m;
}

SparseVec sparsify(const std::vector<Int>& dense) {
    SparseVec out;
    for (std::size_t i = 0; i < dense.size(); ++i)
        if (dense[i] != 0) out.emplace_back(i, dense[i]);
    return out;
}

std::vector<Int> densify(const SparseVec& row, std::size_t cols) {
    std::vector<Int> out(cols);
    for (const auto& [j, v] : row) out[j] += v;
    return out;
}

void SparseMatrix::append(SparseVec row) {
    data.push_back(std::move(row));
    ++rows;
}

void SparseMatrix::append_dense(const std::vector<Int>& row) { append(sparsify(row)); }

std::vector<Int> add_rows(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

std::vector<Int> sub_rows(const std::vector<Int>& a, const std::vector<Int>& b) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

std::vector<Int> scale_row(const std::vector<Int>& a, const Int& c) {
    std::vector<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
    return out;
}

bool is_zero_row(const std::vector<Int>& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

namespace {

std::size_t first_nonzero(const std::vector<Int>& row) {
    for (std::size_t i = 0; i < row.size(); ++i)
        if (row[i] != 0) return i;
    return row.size();
}

void negate_row(std::vector<Int>& row) {
    for (auto& x : row) x = -x;
}

}  // namespace

void HermiteBasis::insert(std::vector<Int> row) {
    if (row.size() != cols_) throw std::invalid_argument("HermiteBasis::insert: wrong length");
    while (true) {
        std::size_t j = first_nonzero(row);
        if (j == cols_) return;
        auto it = by_pivot_.find(j);
        if (it == by_pivot_.end()) {
            if (row[j] < 0) negate_row(row);
            std::size_t idx = rows_.size();
            rows_.emplace_back(j, std::move(row));
            by_pivot_[j] = idx;
            // keep rows_ sorted by pivot
            std::sort(rows_.begin(), rows_.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            by_pivot_.clear();
            for (std::size_t k = 0; k < rows_.size(); ++k) by_pivot_[rows_[k].first] = k;
            return;
        }
        auto& vec = rows_[it->second].second;
        const Int a = vec[j];
        const Int b = row[j];
        if (b % a == 0) {
            // plain elimination
            Int q = b / a;
            for (std::size_t k = j; k < cols_; ++k) row[k] -= q * vec[k];
        } else {
            Int s, t;
            Int g = ext_gcd(a, b, s, t);
            Int av = a / g, bv = b / g;
            std::vector<Int> nv(cols_), nr(cols_);
            for (std::size_t k = 0; k < cols_; ++k) {
                nv[k] = s * vec[k] + t * row[k];
                nr[k] = bv * vec[k] - av * row[k];
            }
            if (nv[j] < 0) negate_row(nv);
            vec = std::move(nv);
            row = std::move(nr);
        }
    }
}

std::vector<Int> HermiteBasis::reduce(std::vector<Int> row) const {
    if (row.size() != cols_) throw std::invalid_argument("HermiteBasis::reduce: wrong length");
    for (const auto& [piv, vec] : rows_) {
        if (row[piv] == 0) continue;
        Int q = floor_div(row[piv], vec[piv]);
        if (q == 0) continue;
        for (std::size_t k = piv; k < cols_; ++k) row[k] -= q * vec[k];
    }
    return row;
}

bool HermiteBasis::contains(const std::vector<Int>& row) const {
    return is_zero_row(reduce(row));
}

bool HermiteBasis::solve(const std::vector<Int>& target, std::vector<Int>& coords) const {
    std::vector<Int> row = target;
    coords.assign(rows_.size(), Int(0));
    std::size_t idx = 0;
    for (const auto& [piv, vec] : rows_) {
        if (row[piv] != 0) {
            if (row[piv] % vec[piv] != 0) return false;
            Int q = row[piv] / vec[piv];
            coords[idx] = q;
            for (std::size_t k = piv; k < cols_; ++k) row[k] -= q * vec[k];
        }
        ++idx;
    }
    return is_zero_row(row);
}

IntMatrix HermiteBasis::to_matrix() const {
    IntMatrix m(rows_.size(), cols_);
    for (std::size_t i = 0; i < rows_.size(); ++i) m.row(i) = rows_[i].second;
    return m;
}

HermiteBasis hermite_basis(const IntMatrix& m) {
    HermiteBasis b(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) b.insert(m.row(i));
    return b;
}

namespace {

struct PivotPos {
    std::size_t i, j;
};

// minimal nonzero |entry|, row-major tie-break, within the trailing block
std::optional<PivotPos> find_pivot(const IntMatrix& m, std::size_t s) {
    std::optional<PivotPos> best;
    Int best_abs = 0;
    for (std::size_t i = s; i < m.rows(); ++i) {
        for (std::size_t j = s; j < m.cols(); ++j) {
            const Int& v = m.at(i, j);
            if (v == 0) continue;
            Int a = abs_int(v);
            if (!best || a < best_abs) {
                best = PivotPos{i, j};
                best_abs = a;
                if (best_abs == 1) return best;
            }
        }
    }
    return best;
}

}  // namespace

SmithResult smith_normal_form(const IntMatrix& input, bool with_transforms) {
    IntMatrix m = input;
    const std::size_t R = m.rows(), C = m.cols();
    IntMatrix L, Rt, Rti;
    if (with_transforms) {
        L = IntMatrix::identity(R);
        Rt = IntMatrix::identity(C);
        Rti = IntMatrix::identity(C);
    }

    auto swap_rows = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        std::swap(m.row(a), m.row(b));
        if (with_transforms) std::swap(L.row(a), L.row(b));
    };
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < R; ++i) std::swap(m.at(i, a), m.at(i, b));
        if (with_transforms) {
            for (std::size_t i = 0; i < C; ++i) std::swap(Rt.at(i, a), Rt.at(i, b));
            std::swap(Rti.row(a), Rti.row(b));
        }
    };
    auto add_row_multiple = [&](std::size_t dst, std::size_t src, const Int& c) {
        if (c == 0) return;
        for (std::size_t j = 0; j < C; ++j) m.at(dst, j) += c * m.at(src, j);
        if (with_transforms)
            for (std::size_t j = 0; j < R; ++j) L.at(dst, j) += c * L.at(src, j);
    };
    auto add_col_multiple = [&](std::size_t dst, std::size_t src, const Int& c) {
        if (c == 0) return;
        for (std::size_t i = 0; i < R; ++i) m.at(i, dst) += c * m.at(i, src);
        if (with_transforms) {
            for (std::size_t i = 0; i < C; ++i) Rt.at(i, dst) += c * Rt.at(i, src);
            // column op on Rt corresponds to inverse row op on Rti
            for (std::size_t j = 0; j < C; ++j) Rti.at(src, j) -= c * Rti.at(dst, j);
        }
    };
    auto negate_row_op = [&](std::size_t i) {
        for (std::size_t j = 0; j < C; ++j) m.at(i, j) = -m.at(i, j);
        if (with_transforms)
            for (std::size_t j = 0; j < R; ++j) L.at(i, j) = -L.at(i, j);
    };

    const std::size_t N = std::min(R, C);
    std::size_t s = 0;
    while (s < N) {
        auto pv = find_pivot(m, s);
        if (!pv) break;
        swap_rows(s, pv->i);
        swap_cols(s, pv->j);
        bool clean = false;
        while (!clean) {
            clean = true;
            // clear column s below pivot; keep re-choosing the smaller remainder
            for (std::size_t i = s + 1; i < R; ++i) {
                if (m.at(i, s) == 0) continue;
                Int q = floor_div(m.at(i, s), m.at(s, s));
                add_row_multiple(i, s, -q);
                if (m.at(i, s) != 0) {
                    swap_rows(s, i);
                    clean = false;
                }
            }
            for (std::size_t j = s + 1; j < C; ++j) {
                if (m.at(s, j) == 0) continue;
                Int q = floor_div(m.at(s, j), m.at(s, s));
                add_col_multiple(j, s, -q);
                if (m.at(s, j) != 0) {
                    swap_cols(s, j);
                    clean = false;
                }
            }
            if (!clean) continue;
            // full reduction pass: pivot must divide the trailing block
            for (std::size_t i = s + 1; i < R && clean; ++i) {
                for (std::size_t j = s + 1; j < C; ++j) {
                    if (m.at(i, j) % m.at(s, s) != 0) {
                        add_row_multiple(s, i, 1);
                        clean = false;
                        break;
                    }
                }
            }
        }
        if (m.at(s, s) < 0) negate_row_op(s);
        ++s;
    }

    SmithResult res;
    res.factors.resize(N);
    for (std::size_t i = 0; i < N; ++i) res.factors[i] = m.at(i, i);
    if (with_transforms) {
        res.left = std::move(L);
        res.right = std::move(Rt);
        res.right_inverse = std::move(Rti);
    }
    return res;
}

HermiteBasis left_kernel(const IntMatrix& m) {
    // reduce augmented rows [m_i | e_i]; rows that vanish on the m-part
    // contribute their augmentation to the kernel
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::pair<std::vector<Int>, std::vector<Int>>> basis;  // (lead part, aug part)
    std::map<std::size_t, std::size_t> by_pivot;
    HermiteBasis kernel(R);

    for (std::size_t i = 0; i < R; ++i) {
        std::vector<Int> lead = m.row(i);
        std::vector<Int> aug(R);
        aug[i] = 1;
        while (true) {
            std::size_t j = first_nonzero(lead);
            if (j == C) {
                kernel.insert(std::move(aug));
                break;
            }
            auto it = by_pivot.find(j);
            if (it == by_pivot.end()) {
                by_pivot[j] = basis.size();
                basis.emplace_back(std::move(lead), std::move(aug));
                break;
            }
            auto& [bl, ba] = basis[it->second];
            const Int a = bl[j], b = lead[j];
            if (b % a == 0) {
                Int q = b / a;
                for (std::size_t k = j; k < C; ++k) lead[k] -= q * bl[k];
                for (std::size_t k = 0; k < R; ++k) aug[k] -= q * ba[k];
            } else {
                Int s, t;
                Int g = ext_gcd(a, b, s, t);
                Int av = a / g, bv = b / g;
                std::vector<Int> nl(C), na(R), rl(C), ra(R);
                for (std::size_t k = 0; k < C; ++k) {
                    nl[k] = s * bl[k] + t * lead[k];
                    rl[k] = bv * bl[k] - av * lead[k];
                }
                for (std::size_t k = 0; k < R; ++k) {
                    na[k] = s * ba[k] + t * aug[k];
                    ra[k] = bv * ba[k] - av * aug[k];
                }
                bl = std::move(nl);
                ba = std::move(na);
                lead = std::move(rl);
                aug = std::move(ra);
            }
        }
    }
    return kernel;
}

HermiteBasis preimage_lattice(const IntMatrix& m, const HermiteBasis& lattice) {
    if (lattice.cols() != m.cols())
        throw std::invalid_argument("preimage_lattice: column mismatch");
    IntMatrix stacked = m.stacked(lattice.to_matrix());
    HermiteBasis full = left_kernel(stacked);
    // project kernel vectors onto the first m.rows() coordinates
    HermiteBasis out(m.rows());
    for (const auto& [piv, vec] : full.rows()) {
        std::vector<Int> x(vec.begin(), vec.begin() + m.rows());
        out.insert(std::move(x));
    }
    return out;
}

}  // namespace bloch
