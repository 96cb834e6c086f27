#include <catch_amalgamated.hpp>

#include <sqft/linalg.hpp>

#include "oracles.hpp"
#include "random_objects.hpp"

using namespace sqft;

namespace {

IntMatrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int lo = -3, int hi = 3)
{
    IntMatrix m(rows, std::vector<std::int64_t>(cols));
    for (auto& row : m) {
        for (auto& x : row) {
            x = testgen::uniform(rng, lo, hi);
        }
    }
    return m;
}

Integer brute_det(const IntMatrix& m)
{
    std::vector<std::size_t> perm(m.size());
    std::iota(perm.begin(), perm.end(), 0);
    Integer total = 0;
    do {
        int sign = 1;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            for (std::size_t j = i + 1; j < perm.size(); ++j) {
                if (perm[i] > perm[j]) {
                    sign = -sign;
                }
            }
        }
        Integer p = sign;
        for (std::size_t i = 0; i < perm.size(); ++i) {
            p *= m[i][perm[i]];
        }
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

/// Feasibility of {y >= 0, a y = b} by enumerating basic solutions.
bool brute_feasible(const IntMatrix& a, const std::vector<std::int64_t>& b)
{
    const std::size_t n = a[0].size();
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < n; ++c) {
            if (mask & (1u << c)) {
                cols.push_back(c);
            }
        }
        RatMatrix aug(a.size());
        for (std::size_t r = 0; r < a.size(); ++r) {
            for (auto c : cols) {
                aug[r].push_back(Rational(a[r][c]));
            }
            aug[r].push_back(Rational(b[r]));
        }
        auto piv = rref(aug);
        // the columns must be independent and b in their span
        if (piv.size() != cols.size() || (!piv.empty() && piv.back() == cols.size())) {
            continue;
        }
        bool ok = true;
        for (std::size_t r = 0; r < cols.size(); ++r) {
            ok = ok && aug[r][cols.size()] >= 0;
        }
        if (ok) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("exact rank and nullspace")
{
    std::mt19937 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t rows = testgen::uniform(rng, 1, 5), cols = testgen::uniform(rng, 1, 5);
        auto m = random_matrix(rng, rows, cols, trial % 2 ? -1 : -3, trial % 2 ? 1 : 3);
        REQUIRE(rank(m) == oracle::rank_mod_p(m));
        auto ns = nullspace(to_rational(m), cols);
        REQUIRE(ns.size() == cols - rank(m));
        for (const auto& v : ns) {
            for (const auto& row : m) {
                Rational s = 0;
                for (std::size_t c = 0; c < cols; ++c) {
                    s += row[c] * v[c];
                }
                REQUIRE(s == 0);
            }
        }
    }
}

TEST_CASE("Smith invariants")
{
    REQUIRE(smith_invariants({{2, 0}, {0, 3}}) == std::vector<Integer>{1, 6});
    REQUIRE(smith_invariants({{2, 4}, {6, 8}}) == std::vector<Integer>{2, 4});
    REQUIRE(smith_invariants({{0, 0}}).empty());
    REQUIRE(is_direct_summand_injection({{1}, {0}}, 1));
    REQUIRE_FALSE(is_direct_summand_injection({{2}, {0}}, 1));
    REQUIRE_FALSE(is_direct_summand_injection({{1, 1}, {1, 1}}, 2));
    REQUIRE(is_direct_summand_injection({}, 0));

    std::mt19937 rng(32);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = testgen::uniform(rng, 1, 4);
        auto m = random_matrix(rng, n, n);
        auto inv = smith_invariants(m);
        for (std::size_t k = 1; k < inv.size(); ++k) {
            REQUIRE(inv[k] % inv[k - 1] == 0);
        }
        REQUIRE(inv.size() == oracle::rank_mod_p(m));
        Integer det = brute_det(m);
        if (det != 0) {
            Integer prod = 1;
            for (const auto& x : inv) {
                prod *= x;
            }
            REQUIRE(prod == abs(det));
        }
        Integer g = 0;
        for (const auto& row : m) {
            for (auto x : row) {
                g = boost::multiprecision::gcd(g, Integer(x < 0 ? -x : x));
            }
        }
        if (g != 0) {
            REQUIRE(inv.front() == g);
        }
    }
}

TEST_CASE("simplex feasibility agrees with basic-solution enumeration")
{
    std::mt19937 rng(33);
    int feasible = 0;
    for (int trial = 0; trial < 400; ++trial) {
        std::size_t rows = testgen::uniform(rng, 1, 3), cols = testgen::uniform(rng, 1, 5);
        auto a = random_matrix(rng, rows, cols, -2, 2);
        std::vector<std::int64_t> b(rows);
        for (auto& x : b) {
            x = testgen::uniform(rng, -2, 2);
        }
        std::vector<Rational> rb(b.begin(), b.end());
        auto y = feasible_point(to_rational(a), rb);
        REQUIRE(y.has_value() == brute_feasible(a, b));
        if (y) {
            ++feasible;
            for (std::size_t r = 0; r < rows; ++r) {
                Rational s = 0;
                for (std::size_t c = 0; c < cols; ++c) {
                    REQUIRE((*y)[c] >= 0);
                    s += a[r][c] * (*y)[c];
                }
                REQUIRE(s == b[r]);
            }
        }
    }
    REQUIRE(feasible > 50);
}

TEST_CASE("clearing denominators")
{
    std::vector<Rational> v{Rational(1, 2), Rational(-1, 3), Rational(0)};
    REQUIRE(clear_denominators(v) == std::vector<Integer>{3, -2, 0});
    REQUIRE(clear_denominators({Rational(4), Rational(6)}) == std::vector<Integer>{2, 3});
}
