#pragma once

// Free graded modules over the group ring with bitstring bases, and the
// mod-2 shadow with digital creation and annihilation operators.

#include <sqft/group_ring.hpp>
#include <sqft/quad_surface.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sqft {

using Bitstring = std::string;

inline int bit_grading(const Bitstring& b)
{
    int g = 0;
    for (char c : b) {
        g += c == '1' ? 1 : -1;
    }
    return g;
}

inline Integer binomial(long n, long k)
{
    if (k < 0 || k > n) {
        return 0;
    }
    Integer r = 1;
    for (long i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

struct SqftModule {
    LatticePtr lattice;
    int index = 0;

    Integer rank() const { return Integer(1) << index; }

    /// Rank of the summand in grading e.
    Integer graded_rank(int e) const
    {
        if (std::abs(e) > index || (index - e) % 2 != 0) {
            return 0;
        }
        return binomial(index, (index + e) / 2);
    }

    /// All bitstrings of length I, lexicographic.
    std::vector<Bitstring> basis() const
    {
        std::vector<Bitstring> out;
        if (index > 20) {
            throw Error("basis enumeration limited to index 20");
        }
        for (unsigned long m = 0; m < (1ul << index); ++m) {
            Bitstring b(index, '0');
            for (int i = 0; i < index; ++i) {
                if (m & (1ul << (index - 1 - i))) {
                    b[i] = '1';
                }
            }
            out.push_back(b);
        }
        return out;
    }

    bool contains(const Bitstring& b) const
    {
        return static_cast<int>(b.size()) == index &&
               std::all_of(b.begin(), b.end(), [](char c) { return c == '0' || c == '1'; });
    }

    friend bool operator==(const SqftModule& a, const SqftModule& b)
    {
        return a.index == b.index && same_lattice(a.lattice, b.lattice);
    }
};

inline SqftModule module_of(const QuadSurface& qs)
{
    auto st = stats(qs);
    return {h1_basis(qs).lattice, static_cast<int>(st.index)};
}

class SqftVector {
public:
    explicit SqftVector(SqftModule m) : module_(std::move(m)) {}

    static SqftVector basis_vector(const SqftModule& m, const Bitstring& b)
    {
        SqftVector v(m);
        v.add(b, GroupRingElement::constant(m.lattice, 1));
        return v;
    }

    const SqftModule& module() const { return module_; }
    const std::map<Bitstring, GroupRingElement>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Bitstring& b, const GroupRingElement& c)
    {
        if (!module_.contains(b)) {
            throw ValidationError("basis string '" + b + "' does not belong to a module of index " +
                                  std::to_string(module_.index));
        }
        if (!same_lattice(c.lattice(), module_.lattice)) {
            throw LatticeMismatch();
        }
        auto it = terms_.find(b);
        if (it == terms_.end()) {
            if (!c.is_zero()) {
                terms_.emplace(b, c);
            }
            return;
        }
        it->second += c;
        if (it->second.is_zero()) {
            terms_.erase(it);
        }
    }

    SqftVector& operator+=(const SqftVector& o)
    {
        if (!(o.module_ == module_)) {
            throw LatticeMismatch("vectors live in different modules");
        }
        for (const auto& [b, c] : o.terms_) {
            add(b, c);
        }
        return *this;
    }
    friend SqftVector operator+(SqftVector a, const SqftVector& b) { return a += b; }

    friend SqftVector operator*(const GroupRingElement& c, const SqftVector& v)
    {
        SqftVector r(v.module_);
        for (const auto& [b, x] : v.terms_) {
            r.add(b, c * x);
        }
        return r;
    }

    friend bool operator==(const SqftVector& a, const SqftVector& b)
    {
        return a.module_ == b.module_ && a.terms_ == b.terms_;
    }

private:
    SqftModule module_;
    std::map<Bitstring, GroupRingElement> terms_;
};

/// Common grading of the support; empty for the zero vector or a mixed support.
inline std::optional<int> grading(const SqftVector& v)
{
    std::optional<int> g;
    for (const auto& [b, c] : v.terms()) {
        int e = bit_grading(b);
        if (g && *g != e) {
            return std::nullopt;
        }
        g = e;
    }
    return g;
}

inline bool is_mixed(const SqftVector& v) { return !v.is_zero() && !grading(v); }

/// Positive (bit 1) or negative (bit 0) creation: append a tensor factor.
inline SqftVector create(const SqftVector& v, int sign, const SqftModule& target)
{
    if (target.index != v.module().index + 1) {
        throw ValidationError("creation target must have index one larger");
    }
    if (!same_lattice(target.lattice, v.module().lattice)) {
        throw LatticeMismatch();
    }
    SqftVector out(target);
    for (const auto& [b, c] : v.terms()) {
        out.add(b + (sign > 0 ? '1' : '0'), c);
    }
    return out;
}

inline SqftVector create(const SqftVector& v, int sign)
{
    return create(v, sign, SqftModule{v.module().lattice, v.module().index + 1});
}

/// Vector over GF(2): the set of basis strings with coefficient 1.
struct Mod2Vector {
    int index = 0;
    std::set<Bitstring> support;

    void flip(const Bitstring& b)
    {
        if (!support.erase(b)) {
            support.insert(b);
        }
    }

    Mod2Vector& operator+=(const Mod2Vector& o)
    {
        if (o.index != index) {
            throw ValidationError("mod-2 vectors of different index");
        }
        for (const auto& b : o.support) {
            flip(b);
        }
        return *this;
    }
    friend Mod2Vector operator+(Mod2Vector a, const Mod2Vector& b) { return a += b; }
    friend bool operator==(const Mod2Vector&, const Mod2Vector&) = default;

    static Mod2Vector basis_vector(const Bitstring& b)
    {
        return {static_cast<int>(b.size()), {b}};
    }
};

/// Common grading, as for SqftVector.
inline std::optional<int> grading(const Mod2Vector& v)
{
    std::optional<int> g;
    for (const auto& b : v.support) {
        if (g && *g != bit_grading(b)) {
            return std::nullopt;
        }
        g = bit_grading(b);
    }
    return g;
}

inline std::string to_string(const Mod2Vector& v)
{
    if (v.support.empty()) {
        return "0";
    }
    std::string out;
    for (const auto& b : v.support) {
        out += (out.empty() ? "|" : " + |") + b + ">";
    }
    return out;
}

inline std::string to_string(const SqftVector& v)
{
    if (v.is_zero()) {
        return "0";
    }
    std::string out;
    for (const auto& [b, c] : v.terms()) {
        if (!out.empty()) {
            out += " + ";
        }
        std::string coef = to_string(c);
        if (coef == "1") {
            out += "|" + b + ">";
        } else if (c.terms().size() > 1) {
            out += "(" + coef + ")|" + b + ">";
        } else {
            out += coef + "|" + b + ">";
        }
    }
    return out;
}

/// Coefficientwise mod-2 augmentation; the identity on basis strings.
inline Mod2Vector reduce_module(const SqftVector& v)
{
    Mod2Vector out{v.module().index, {}};
    for (const auto& [b, c] : v.terms()) {
        if (reduce_mod2(c) == 1) {
            out.support.insert(b);
        }
    }
    return out;
}

inline Mod2Vector create(const Mod2Vector& v, int sign)
{
    Mod2Vector out{v.index + 1, {}};
    for (const auto& b : v.support) {
        out.support.insert(b + (sign > 0 ? '1' : '0'));
    }
    return out;
}

/// Digital annihilation a_which at a tensor slot. If the slot holds `which`
/// the factor is deleted; otherwise it is deleted and one of the remaining
/// `which` bits is flipped, summed over all choices.
inline Mod2Vector annihilate(const Mod2Vector& v, int which, int slot)
{
    if (v.index < 1 || slot < 0 || slot >= v.index) {
        throw ValidationError("annihilation slot out of range");
    }
    const char keep = which == 1 ? '1' : '0';
    const char other = which == 1 ? '0' : '1';
    Mod2Vector out{v.index - 1, {}};
    for (const auto& b : v.support) {
        Bitstring rest = b.substr(0, slot) + b.substr(slot + 1);
        if (b[slot] == keep) {
            out.flip(rest);
            continue;
        }
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (rest[i] == keep) {
                Bitstring t = rest;
                t[i] = other;
                out.flip(t);
            }
        }
    }
    return out;
}

inline Mod2Vector annihilate(const SqftVector& v, int which, int slot)
{
    return annihilate(reduce_module(v), which, slot);
}

/// Graded homomorphism over a ring map; matrix rows follow the target basis.
struct GradedMap {
    SqftModule source;
    SqftModule target;
    RingMap ring;
    std::map<Bitstring, SqftVector> columns; // image of each source basis vector
    int degree = 0;

    SqftVector apply(const SqftVector& v) const
    {
        if (!(v.module() == source)) {
            throw LatticeMismatch("vector is not in the map's source module");
        }
        SqftVector out(target);
        for (const auto& [b, c] : v.terms()) {
            auto it = columns.find(b);
            if (it != columns.end()) {
                out += pushforward(ring, c) * it->second;
            }
        }
        return out;
    }
};

inline GradedMap compose(const GradedMap& outer, const GradedMap& inner)
{
    if (!(inner.target == outer.source)) {
        throw LatticeMismatch("graded maps do not compose");
    }
    GradedMap out{inner.source, outer.target, compose(outer.ring, inner.ring), {}, inner.degree + outer.degree};
    for (const auto& [b, col] : inner.columns) {
        out.columns.emplace(b, outer.apply(col));
    }
    return out;
}

/// Map induced by a standard gluing: the identity on basis strings over the
/// inclusion-induced ring map, degree 0.
inline GradedMap standard_gluing_map(const QuadSurface& source, const QuadSurface& target)
{
    if (source.square_count != target.square_count || source.vacuum_count != target.vacuum_count) {
        throw ValidationError("square mismatch between source and target");
    }
    auto ring = inclusion_map(source, target);
    SqftModule src{ring.source, source.square_count};
    SqftModule tgt{ring.target, target.square_count};
    GradedMap f{src, tgt, ring, {}, 0};
    for (const auto& b : src.basis()) {
        f.columns.emplace(b, SqftVector::basis_vector(tgt, b));
    }
    return f;
}

/// The unit u with v = u*w, if one exists.
inline std::optional<GroupRingElement> vector_unit_ratio(const SqftVector& v, const SqftVector& w)
{
    if (v.is_zero() || w.is_zero()) {
        if (v.is_zero() && w.is_zero()) {
            return GroupRingElement::constant(v.module().lattice, 1);
        }
        return std::nullopt;
    }
    const auto& [b, c] = *v.terms().begin();
    auto it = w.terms().find(b);
    if (it == w.terms().end()) {
        return std::nullopt;
    }
    auto u = unit_ratio(c, it->second);
    if (u && *u * w == v) {
        return u;
    }
    return std::nullopt;
}

/// v = u*w for a single unit u.
inline bool orbit_eq(const SqftVector& v, const SqftVector& w)
{
    if (!(v.module() == w.module())) {
        throw LatticeMismatch("vectors live in different modules");
    }
    if (v.is_zero() || w.is_zero()) {
        return v.is_zero() && w.is_zero();
    }
    return vector_unit_ratio(v, w).has_value();
}

/// Equality after multiplying each graded piece of g by its own unit.
inline bool equal_up_to_graded_units(const GradedMap& f, const GradedMap& g)
{
    if (!(f.source == g.source) || !(f.target == g.target) || f.degree != g.degree) {
        return false;
    }
    if (!same_lattice(f.ring.source, g.ring.source) || !same_lattice(f.ring.target, g.ring.target) ||
        f.ring.matrix != g.ring.matrix) {
        return false;
    }
    std::map<int, GroupRingElement> unit_of;
    for (const auto& b : f.source.basis()) {
        auto fb = f.columns.count(b) ? f.columns.at(b) : SqftVector(f.target);
        auto gb = g.columns.count(b) ? g.columns.at(b) : SqftVector(g.target);
        if (fb.is_zero() && gb.is_zero()) {
            continue;
        }
        auto u = vector_unit_ratio(fb, gb);
        if (!u) {
            return false;
        }
        auto [it, fresh] = unit_of.try_emplace(bit_grading(b), *u);
        if (!fresh && !(it->second * gb == fb)) {
            return false;
        }
    }
    return true;
}

} // namespace sqft
