#pragma once

// Laurent polynomials with integer coefficients, i.e. the group ring Z[H]
// of a free abelian group H of finite rank.

#include <boost/multiprecision/cpp_int.hpp>

#include <sqft/error.hpp>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sqft {

using Integer = boost::multiprecision::cpp_int;
using Exponent = std::vector<std::int64_t>;
using IntMatrix = std::vector<std::vector<std::int64_t>>;

/// Free abelian group with named generators.
class HomologyLattice {
public:
    HomologyLattice() = default;
    explicit HomologyLattice(std::vector<std::string> labels) : labels_(std::move(labels))
    {
        std::set<std::string> seen(labels_.begin(), labels_.end());
        if (seen.size() != labels_.size()) {
            throw ValidationError("homology lattice labels must be distinct");
        }
    }

    std::size_t rank() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }

    friend bool operator==(const HomologyLattice&, const HomologyLattice&) = default;

private:
    std::vector<std::string> labels_;
};

using LatticePtr = std::shared_ptr<const HomologyLattice>;

inline LatticePtr make_lattice(std::vector<std::string> labels = {})
{
    return std::make_shared<const HomologyLattice>(std::move(labels));
}

/// Lattice with generators q1..qn.
inline LatticePtr make_lattice(std::size_t rank, const std::string& prefix = "q")
{
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < rank; ++i) {
        labels.push_back(prefix + std::to_string(i + 1));
    }
    return make_lattice(std::move(labels));
}

inline bool same_lattice(const LatticePtr& a, const LatticePtr& b)
{
    return a == b || (a && b && *a == *b);
}

class GroupRingElement {
public:
    using TermMap = std::map<Exponent, Integer>;

    GroupRingElement() : lattice_(make_lattice()) {}
    explicit GroupRingElement(LatticePtr lattice) : lattice_(std::move(lattice)) {}

    static GroupRingElement constant(LatticePtr lattice, const Integer& c)
    {
        return monomial(lattice, Exponent(lattice->rank(), 0), c);
    }

    static GroupRingElement monomial(LatticePtr lattice, Exponent exp, const Integer& c = 1)
    {
        if (exp.size() != lattice->rank()) {
            throw ValidationError("exponent length differs from lattice rank");
        }
        GroupRingElement r(std::move(lattice));
        if (c != 0) {
            r.terms_.emplace(std::move(exp), c);
        }
        return r;
    }

    /// The generator q_i raised to `power`.
    static GroupRingElement generator(LatticePtr lattice, std::size_t i, std::int64_t power = 1)
    {
        Exponent exp(lattice->rank(), 0);
        exp.at(i) = power;
        return monomial(std::move(lattice), std::move(exp));
    }

    const LatticePtr& lattice() const { return lattice_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds c * e^exp in place.
    void add_term(const Exponent& exp, const Integer& c)
    {
        if (exp.size() != lattice_->rank()) {
            throw ValidationError("exponent length differs from lattice rank");
        }
        if (c == 0) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(exp, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) {
                terms_.erase(it);
            }
        }
    }

    GroupRingElement& operator+=(const GroupRingElement& o)
    {
        check(o);
        for (const auto& [e, c] : o.terms_) {
            add_term(e, c);
        }
        return *this;
    }

    GroupRingElement& operator-=(const GroupRingElement& o)
    {
        check(o);
        for (const auto& [e, c] : o.terms_) {
            add_term(e, -c);
        }
        return *this;
    }

    GroupRingElement operator-() const
    {
        GroupRingElement r(lattice_);
        for (const auto& [e, c] : terms_) {
            r.terms_.emplace(e, -c);
        }
        return r;
    }

    friend GroupRingElement operator+(GroupRingElement a, const GroupRingElement& b) { return a += b; }
    friend GroupRingElement operator-(GroupRingElement a, const GroupRingElement& b) { return a -= b; }

    friend GroupRingElement operator*(const GroupRingElement& a, const GroupRingElement& b)
    {
        a.check(b);
        GroupRingElement r(a.lattice_);
        Exponent sum(a.lattice_->rank());
        for (const auto& [ea, ca] : a.terms_) {
            for (const auto& [eb, cb] : b.terms_) {
                for (std::size_t i = 0; i < sum.size(); ++i) {
                    sum[i] = ea[i] + eb[i];
                }
                r.add_term(sum, ca * cb);
            }
        }
        return r;
    }

    /// Equality of values; elements over different lattices are never equal.
    friend bool operator==(const GroupRingElement& a, const GroupRingElement& b)
    {
        return same_lattice(a.lattice_, b.lattice_) && a.terms_ == b.terms_;
    }

private:
    void check(const GroupRingElement& o) const
    {
        if (!same_lattice(lattice_, o.lattice_)) {
            throw LatticeMismatch();
        }
    }

    LatticePtr lattice_;
    TermMap terms_;
};

/// True iff a = +-e^A for some A.
inline bool is_unit(const GroupRingElement& a)
{
    if (a.terms().size() != 1) {
        return false;
    }
    const Integer& c = a.terms().begin()->second;
    return c == 1 || c == -1;
}

/// The inverse of a unit, or nothing.
inline std::optional<GroupRingElement> unit_inverse(const GroupRingElement& a)
{
    if (!is_unit(a)) {
        return std::nullopt;
    }
    const auto& [e, c] = *a.terms().begin();
    Exponent neg(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        neg[i] = -e[i];
    }
    return GroupRingElement::monomial(a.lattice(), neg, c);
}

/// The unit u with a = u*b, if one exists.
inline std::optional<GroupRingElement> unit_ratio(const GroupRingElement& a, const GroupRingElement& b)
{
    if (!same_lattice(a.lattice(), b.lattice())) {
        throw LatticeMismatch();
    }
    if (a.is_zero() || b.is_zero()) {
        if (a.is_zero() && b.is_zero()) {
            return GroupRingElement::constant(a.lattice(), 1);
        }
        return std::nullopt;
    }
    if (a.terms().size() != b.terms().size()) {
        return std::nullopt;
    }
    // Multiplying by a monomial shifts every exponent, so least terms correspond.
    const auto& [ea, ca] = *a.terms().begin();
    const auto& [eb, cb] = *b.terms().begin();
    Integer sign;
    if (ca == cb) {
        sign = 1;
    } else if (ca == -cb) {
        sign = -1;
    } else {
        return std::nullopt;
    }
    Exponent diff(ea.size());
    for (std::size_t i = 0; i < ea.size(); ++i) {
        diff[i] = ea[i] - eb[i];
    }
    auto u = GroupRingElement::monomial(a.lattice(), diff, sign);
    if (u * b == a) {
        return u;
    }
    return std::nullopt;
}

inline bool unit_orbit_eq(const GroupRingElement& a, const GroupRingElement& b)
{
    return unit_ratio(a, b).has_value();
}

/// Augmentation followed by reduction mod 2.
inline int reduce_mod2(const GroupRingElement& a)
{
    Integer sum = 0;
    for (const auto& [e, c] : a.terms()) {
        sum += c;
    }
    return abs(sum) % 2 == 0 ? 0 : 1;
}

/// Ring map Z[source] -> Z[target] induced by a homomorphism of lattices.
struct RingMap {
    LatticePtr source;
    LatticePtr target;
    IntMatrix matrix; // target.rank rows, source.rank columns

    RingMap(LatticePtr src, LatticePtr tgt, IntMatrix m)
        : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m))
    {
        if (matrix.size() != target->rank()) {
            throw ValidationError("ring map matrix row count differs from target rank");
        }
        for (const auto& row : matrix) {
            if (row.size() != source->rank()) {
                throw ValidationError("ring map matrix column count differs from source rank");
            }
        }
    }

    static RingMap identity(const LatticePtr& lattice)
    {
        IntMatrix m(lattice->rank(), std::vector<std::int64_t>(lattice->rank(), 0));
        for (std::size_t i = 0; i < m.size(); ++i) {
            m[i][i] = 1;
        }
        return RingMap(lattice, lattice, std::move(m));
    }

    Exponent apply(const Exponent& e) const
    {
        Exponent out(target->rank(), 0);
        for (std::size_t r = 0; r < out.size(); ++r) {
            for (std::size_t c = 0; c < e.size(); ++c) {
                out[r] += matrix[r][c] * e[c];
            }
        }
        return out;
    }
};

/// outer after inner.
inline RingMap compose(const RingMap& outer, const RingMap& inner)
{
    if (!same_lattice(outer.source, inner.target)) {
        throw LatticeMismatch();
    }
    IntMatrix m(outer.target->rank(), std::vector<std::int64_t>(inner.source->rank(), 0));
    for (std::size_t r = 0; r < m.size(); ++r) {
        for (std::size_t c = 0; c < m[r].size(); ++c) {
            for (std::size_t k = 0; k < inner.target->rank(); ++k) {
                m[r][c] += outer.matrix[r][k] * inner.matrix[k][c];
            }
        }
    }
    return RingMap(inner.source, outer.target, std::move(m));
}

inline GroupRingElement pushforward(const RingMap& f, const GroupRingElement& a)
{
    if (!same_lattice(f.source, a.lattice())) {
        throw LatticeMismatch();
    }
    GroupRingElement r(f.target);
    for (const auto& [e, c] : a.terms()) {
        r.add_term(f.apply(e), c);
    }
    return r;
}

/// Human-readable form such as "-q1^2*q2^-1 + 3".
inline std::string to_string(const GroupRingElement& a)
{
    if (a.is_zero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : a.terms()) {
        bool constant = true;
        for (auto x : e) {
            constant = constant && x == 0;
        }
        Integer mag = c < 0 ? Integer(-c) : c;
        if (first) {
            if (c < 0) {
                os << "-";
            }
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool need_star = false;
        if (constant || mag != 1) {
            os << mag;
            need_star = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) {
                continue;
            }
            if (need_star) {
                os << "*";
            }
            os << a.lattice()->labels()[i];
            if (e[i] != 1) {
                os << "^" << e[i];
            }
            need_star = true;
        }
    }
    return os.str();
}

} // namespace sqft
