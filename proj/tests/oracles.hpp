#pragma once

// Test-only reference implementations, independent of the library's
// minimal-pivot Smith engine and its Hermite-basis membership path.

#include "bloch/int_matrix.hpp"

#include <vector>

namespace bloch::oracle {

// Textbook Smith normal form by repeated corner reduction: scan for the
// first nonzero entry (no minimal-pivot heuristic), clear its row and
// column with gcd steps, fix divisibility by adding rows back in.
inline std::vector<Int> smith_reference(IntMatrix m) {
    const std::size_t R = m.rows(), C = m.cols();
    const std::size_t N = std::min(R, C);
    std::vector<Int> diag;

    for (std::size_t s = 0; s < N; ++s) {
        // find any nonzero entry in the trailing block (first one found)
        std::size_t pi = R, pj = C;
        for (std::size_t i = s; i < R && pi == R; ++i)
            for (std::size_t j = s; j < C; ++j)
                if (m.at(i, j) != 0) {
                    pi = i;
                    pj = j;
                    break;
                }
        if (pi == R) break;
        std::swap(m.row(s), m.row(pi));
        for (std::size_t i = 0; i < R; ++i) std::swap(m.at(i, s), m.at(i, pj));

        bool again = true;
        while (again) {
            again = false;
            for (std::size_t i = s + 1; i < R; ++i) {
                while (m.at(i, s) != 0) {
                    Int q = m.at(i, s) / m.at(s, s);
                    for (std::size_t j = s; j < C; ++j) m.at(i, j) -= q * m.at(s, j);
                    if (m.at(i, s) != 0) std::swap(m.row(s), m.row(i));
                }
            }
            for (std::size_t j = s + 1; j < C; ++j) {
                while (m.at(s, j) != 0) {
                    Int q = m.at(s, j) / m.at(s, s);
                    for (std::size_t i = s; i < R; ++i) m.at(i, j) -= q * m.at(i, s);
                    if (m.at(s, j) != 0)
                        for (std::size_t i = s; i < R; ++i) std::swap(m.at(i, s), m.at(i, j));
                }
            }
            for (std::size_t i = s + 1; i < R && !again; ++i)
                for (std::size_t j = s + 1; j < C; ++j)
                    if (m.at(i, j) % m.at(s, s) != 0) {
                        for (std::size_t jj = s; jj < C; ++jj) m.at(s, jj) += m.at(i, jj);
                        again = true;
                        break;
                    }
        }
        diag.push_back(abs_int(m.at(s, s)));
    }
    return diag;
}

// invariant factors (entries > 1) of the cokernel Z^cols / rowlattice(m)
inline std::pair<std::size_t, std::vector<Int>> structure_reference(const IntMatrix& m) {
    auto d = smith_reference(m);
    std::vector<Int> tor;
    std::size_t rank = 0;
    for (const auto& x : d) {
        if (x != 0) ++rank;
        if (x > 1) tor.push_back(x);
    }
    return {m.cols() - rank, tor};
}

}  // namespace bloch::oracle
