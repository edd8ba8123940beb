#include "ctx/simplex.hpp"

#include <stdexcept>

namespace ctx {

SimplexResult solve_equality_feasibility(const std::vector<std::vector<Rational>>& a,
                                         const std::vector<Rational>& b) {
    const std::size_t rows = a.size();
    if (b.size() != rows) {
        throw std::invalid_argument("matrix/rhs row mismatch");
    }
    const std::size_t cols = rows ? a[0].size() : 0;
    for (const auto& row : a) {
        if (row.size() != cols) throw std::invalid_argument("ragged matrix");
    }

    // Phase-1 tableau: [A | I | rhs], artificial basis, minimize the sum of
    // artificials. Rows with negative rhs are negated first.
    const std::size_t width = cols + rows;
    std::vector<std::vector<Rational>> t(rows, std::vector<Rational>(width + 1, Rational(0)));
    std::vector<int> row_sign(rows, 1);
    for (std::size_t i = 0; i < rows; ++i) {
        const bool flip = b[i] < 0;
        if (flip) row_sign[i] = -1;
        for (std::size_t j = 0; j < cols; ++j) t[i][j] = flip ? -a[i][j] : a[i][j];
        t[i][cols + i] = 1;
        t[i][width] = flip ? -b[i] : b[i];
    }
    std::vector<std::size_t> basis(rows);
    for (std::size_t i = 0; i < rows; ++i) basis[i] = cols + i;

    // Reduced-cost row r_j = c_j - sum_i t[i][j] (all basic costs are 1).
    std::vector<Rational> reduced(width, Rational(0));
    for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) reduced[j] -= t[i][j];
    }

    for (;;) {
        // Bland: lowest-index column with negative reduced cost.
        std::size_t enter = width;
        for (std::size_t j = 0; j < width; ++j) {
            if (reduced[j] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == width) break;

        // Ratio test; ties go to the smallest basic variable index.
        std::size_t leave = rows;
        Rational best;
        for (std::size_t i = 0; i < rows; ++i) {
            if (t[i][enter] <= 0) continue;
            const Rational ratio = t[i][width] / t[i][enter];
            if (leave == rows || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == rows) {
            throw std::logic_error("phase-1 objective unbounded");
        }

        const Rational pivot = t[leave][enter];
        for (std::size_t j = 0; j <= width; ++j) t[leave][j] /= pivot;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == leave || t[i][enter] == 0) continue;
            const Rational factor = t[i][enter];
            for (std::size_t j = 0; j <= width; ++j) t[i][j] -= factor * t[leave][j];
        }
        const Rational rfac = reduced[enter];
        if (rfac != 0) {
            for (std::size_t j = 0; j < width; ++j) reduced[j] -= rfac * t[leave][j];
        }
        basis[leave] = enter;
    }

    // Phase-1 objective at optimality: total artificial mass left in the basis.
    Rational value = 0;
    for (std::size_t i = 0; i < rows; ++i) {
        if (basis[i] >= cols) value += t[i][width];
    }

    SimplexResult result;
    if (value == 0) {
        result.feasible = true;
        result.solution.assign(cols, Rational(0));
        for (std::size_t i = 0; i < rows; ++i) {
            if (basis[i] < cols) result.solution[basis[i]] = t[i][width];
        }
    } else {
        result.feasible = false;
        // y_i = 1 - r_{artificial i}, undoing any row negation.
        result.dual.assign(rows, Rational(0));
        for (std::size_t i = 0; i < rows; ++i) {
            result.dual[i] = (Rational(1) - reduced[cols + i]) * row_sign[i];
        }
    }
    return result;
}

} // namespace ctx
