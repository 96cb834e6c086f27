#pragma once

// Exact linear algebra: rational elimination, Smith invariants and a small
// simplex feasibility solver.

#include <sqft/group_ring.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <optional>
#include <utility>
#include <vector>

namespace sqft {

using Rational = boost::multiprecision::cpp_rational;
using RatMatrix = std::vector<std::vector<Rational>>;

inline RatMatrix to_rational(const IntMatrix& m)
{
    RatMatrix out(m.size());
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (auto x : m[r]) {
            out[r].push_back(Rational(x));
        }
    }
    return out;
}

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(RatMatrix& m)
{
    std::vector<std::size_t> pivots;
    if (m.empty()) {
        return pivots;
    }
    const std::size_t cols = m[0].size();
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && m[p][c] == 0) {
            ++p;
        }
        if (p == m.size()) {
            continue;
        }
        std::swap(m[p], m[row]);
        Rational inv = 1 / m[row][c];
        for (auto& x : m[row]) {
            x *= inv;
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r != row && m[r][c] != 0) {
                Rational f = m[r][c];
                for (std::size_t k = 0; k < cols; ++k) {
                    m[r][k] -= f * m[row][k];
                }
            }
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

inline std::size_t rank(const IntMatrix& m)
{
    auto r = to_rational(m);
    return rref(r).size();
}

/// Basis of {x : m x = 0}, one vector per free column.
inline RatMatrix nullspace(const RatMatrix& m, std::size_t cols)
{
    RatMatrix a = m;
    auto pivots = rref(a);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) {
        is_pivot[p] = true;
    }
    RatMatrix out;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) {
            continue;
        }
        std::vector<Rational> v(cols, 0);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            v[pivots[r]] = -a[r][f];
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Nonzero invariant factors of an integer matrix (Smith normal form diagonal).
inline std::vector<Integer> smith_invariants(const IntMatrix& input)
{
    std::vector<std::vector<Integer>> m(input.size());
    for (std::size_t r = 0; r < input.size(); ++r) {
        for (auto x : input[r]) {
            m[r].push_back(Integer(x));
        }
    }
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::vector<Integer> out;
    for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
        // pivot: smallest nonzero absolute value in the remaining block
        while (true) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t r = t; r < rows; ++r) {
                for (std::size_t c = t; c < cols; ++c) {
                    if (m[r][c] != 0 && (!best || abs(m[r][c]) < abs(m[best->first][best->second]))) {
                        best = {{r, c}};
                    }
                }
            }
            if (!best) {
                return out;
            }
            std::swap(m[t], m[best->first]);
            for (auto& row : m) {
                std::swap(row[t], row[best->second]);
            }
            bool clean = true;
            for (std::size_t r = t + 1; r < rows; ++r) {
                Integer q = m[r][t] / m[t][t];
                for (std::size_t c = t; c < cols; ++c) {
                    m[r][c] -= q * m[t][c];
                }
                clean = clean && m[r][t] == 0;
            }
            for (std::size_t c = t + 1; c < cols; ++c) {
                Integer q = m[t][c] / m[t][t];
                for (std::size_t r = t; r < rows; ++r) {
                    m[r][c] -= q * m[r][t];
                }
                clean = clean && m[t][c] == 0;
            }
            if (!clean) {
                continue;
            }
            // divisibility: fold in any entry the pivot does not divide
            std::optional<std::size_t> bad;
            for (std::size_t r = t + 1; r < rows && !bad; ++r) {
                for (std::size_t c = t + 1; c < cols; ++c) {
                    if (m[r][c] % m[t][t] != 0) {
                        bad = r;
                        break;
                    }
                }
            }
            if (!bad) {
                break;
            }
            for (std::size_t c = t; c < cols; ++c) {
                m[t][c] += m[*bad][c];
            }
        }
        out.push_back(abs(m[t][t]));
    }
    return out;
}

/// Injective with image a direct summand: full column rank, unit invariants.
inline bool is_direct_summand_injection(const IntMatrix& m, std::size_t cols)
{
    if (cols == 0) {
        return true;
    }
    auto inv = smith_invariants(m);
    return inv.size() == cols && std::all_of(inv.begin(), inv.end(), [](const Integer& x) { return x == 1; });
}

/// A point of {y >= 0 : a y = b}, or nothing if the polyhedron is empty.
/// Two-phase simplex restricted to phase one, with Bland's rule.
inline std::optional<std::vector<Rational>> feasible_point(RatMatrix a, std::vector<Rational> b)
{
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    for (std::size_t r = 0; r < m; ++r) {
        if (b[r] < 0) {
            for (auto& x : a[r]) {
                x = -x;
            }
            b[r] = -b[r];
        }
    }
    // tableau columns: n originals, m artificials, rhs
    const std::size_t width = n + m + 1;
    RatMatrix t(m, std::vector<Rational>(width, 0));
    std::vector<std::size_t> basis(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            t[r][c] = a[r][c];
        }
        t[r][n + r] = 1;
        t[r][width - 1] = b[r];
        basis[r] = n + r;
    }
    // reduced costs for minimizing the sum of artificials
    std::vector<Rational> cost(width, 0);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < width; ++c) {
            if (c < n || c == width - 1) {
                cost[c] -= t[r][c];
            }
        }
    }
    while (true) {
        std::optional<std::size_t> enter;
        for (std::size_t c = 0; c + 1 < width; ++c) {
            if (cost[c] < 0) {
                enter = c;
                break;
            }
        }
        if (!enter) {
            break;
        }
        std::optional<std::size_t> leave;
        Rational best;
        for (std::size_t r = 0; r < m; ++r) {
            if (t[r][*enter] > 0) {
                Rational ratio = t[r][width - 1] / t[r][*enter];
                if (!leave || ratio < best || (ratio == best && basis[r] < basis[*leave])) {
                    leave = r;
                    best = ratio;
                }
            }
        }
        if (!leave) {
            break; // unbounded direction; cannot happen for phase one
        }
        const std::size_t pr = *leave;
        Rational piv = t[pr][*enter];
        for (auto& x : t[pr]) {
            x /= piv;
        }
        for (std::size_t r = 0; r < m; ++r) {
            if (r != pr && t[r][*enter] != 0) {
                Rational f = t[r][*enter];
                for (std::size_t c = 0; c < width; ++c) {
                    t[r][c] -= f * t[pr][c];
                }
            }
        }
        Rational f = cost[*enter];
        for (std::size_t c = 0; c < width; ++c) {
            cost[c] -= f * t[pr][c];
        }
        basis[pr] = *enter;
    }
    if (cost[width - 1] != 0) {
        return std::nullopt;
    }
    std::vector<Rational> y(n, 0);
    for (std::size_t r = 0; r < m; ++r) {
        if (basis[r] < n) {
            y[basis[r]] = t[r][width - 1];
        }
    }
    return y;
}

/// Scale a rational vector to a primitive integer vector with the same direction.
inline std::vector<Integer> clear_denominators(const std::vector<Rational>& v)
{
    Integer l = 1;
    for (const auto& x : v) {
        l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(x)));
    }
    std::vector<Integer> out;
    Integer g = 0;
    for (const auto& x : v) {
        Integer k = Integer(boost::multiprecision::numerator(x)) * (l / Integer(boost::multiprecision::denominator(x)));
        out.push_back(k);
        g = boost::multiprecision::gcd(g, abs(k));
    }
    if (g > 1) {
        for (auto& k : out) {
            k /= g;
        }
    }
    return out;
}

} // namespace sqft
