#include "doctest.h"

#include <random>

#include "ctx/simplex.hpp"
#include "support/lp_oracle.hpp"

using namespace ctx;

namespace {

void check_certificates(const std::vector<std::vector<Rational>>& a,
                        const std::vector<Rational>& b, const SimplexResult& result) {
    if (result.feasible) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            Rational sum = 0;
            for (std::size_t j = 0; j < a[i].size(); ++j) {
                CHECK(result.solution[j] >= 0);
                sum += a[i][j] * result.solution[j];
            }
            CHECK(sum == b[i]);
        }
    } else {
        // y'A <= 0 and y'b > 0
        Rational yb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) yb += result.dual[i] * b[i];
        CHECK(yb > 0);
        for (std::size_t j = 0; j < a[0].size(); ++j) {
            Rational ya = 0;
            for (std::size_t i = 0; i < a.size(); ++i) ya += result.dual[i] * a[i][j];
            CHECK(ya <= 0);
        }
    }
}

} // namespace

TEST_CASE("tiny systems") {
    // x = 1 feasible
    auto r = solve_equality_feasibility({{Rational(1)}}, {Rational(1)});
    CHECK(r.feasible);
    CHECK(r.solution[0] == 1);

    // x + y = 1, x - y = 1  ->  x = 1, y = 0
    r = solve_equality_feasibility({{1, 1}, {1, -1}}, {Rational(1), Rational(1)});
    CHECK(r.feasible);
    CHECK(r.solution[0] == 1);
    CHECK(r.solution[1] == 0);

    // x + y = -1 with x,y >= 0 infeasible
    r = solve_equality_feasibility({{1, 1}}, {Rational(-1)});
    CHECK_FALSE(r.feasible);
    check_certificates({{1, 1}}, {Rational(-1)}, r);

    // 0x = 1 infeasible
    r = solve_equality_feasibility({{0}}, {Rational(1)});
    CHECK_FALSE(r.feasible);

    // redundant rows stay feasible
    r = solve_equality_feasibility({{1, 1}, {2, 2}}, {Rational(1), Rational(2)});
    CHECK(r.feasible);
}

TEST_CASE("random systems agree with the elimination oracle") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 120; ++trial) {
        const std::size_t rows = 1 + rng() % 4;
        const std::size_t cols = 1 + rng() % 5;
        std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
        std::vector<Rational> b(rows);
        for (auto& row : a) {
            for (auto& x : row) {
                x = Rational(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3));
            }
        }
        for (auto& x : b) {
            x = Rational(static_cast<int>(rng() % 7) - 3, 1 + static_cast<int>(rng() % 3));
        }
        const auto result = solve_equality_feasibility(a, b);
        CHECK(result.feasible == oracle::oracle_feasible(a, b));
        check_certificates(a, b, result);
    }
}
