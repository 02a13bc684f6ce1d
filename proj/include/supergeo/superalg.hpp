#pragma once

// Supercommutative Laurent-Grassmann algebra.
//
// An element is a finite sum of terms  c * z^e * theta_S  where c is an exact rational, e an
// integer exponent vector over the even variables (negative entries allowed) and S a strictly
// ascending subset of the odd variables. The ordering of the odd variables in the VarTable fixes
// the sign normal form: theta_S always means the product of the selected odd variables in
// ascending index order, and any reordering sign is absorbed into c.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "errors.hpp"

namespace supergeo {

using Rational = mpq_class;

/// Bitmask of odd-variable indices; bit i set means theta_i is a factor.
using OddSet = std::uint64_t;

inline constexpr std::size_t max_odd_variables = 64;

enum class Parity { even, odd };

inline Parity operator+(Parity a, Parity b) noexcept
{
    return a == b ? Parity::even : Parity::odd;
}

inline Parity parity_of(OddSet s) noexcept
{
    return (std::popcount(s) % 2 == 0) ? Parity::even : Parity::odd;
}

/// A variable of a VarTable, identified by parity and position.
struct Var {
    Parity parity;
    std::size_t index;

    friend bool operator==(const Var&, const Var&) = default;
};

/// Ordered names of the even and odd generators. Immutable once built.
class VarTable {
public:
    VarTable(std::vector<std::string> even_names, std::vector<std::string> odd_names)
        : even_(std::move(even_names)), odd_(std::move(odd_names))
    {
        if (odd_.size() > max_odd_variables) {
            throw error("VarTable: at most 64 odd variables are supported");
        }
        std::vector<std::string> all(even_);
        all.insert(all.end(), odd_.begin(), odd_.end());
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
            throw error("VarTable: variable names must be unique");
        }
        for (const auto& n : all) {
            if (n.empty()) {
                throw error("VarTable: empty variable name");
            }
        }
    }

    const std::vector<std::string>& even_names() const noexcept { return even_; }
    const std::vector<std::string>& odd_names() const noexcept { return odd_; }
    std::size_t num_even() const noexcept { return even_.size(); }
    std::size_t num_odd() const noexcept { return odd_.size(); }

    std::optional<Var> find(std::string_view name) const
    {
        for (std::size_t i = 0; i < even_.size(); ++i) {
            if (even_[i] == name) return Var{Parity::even, i};
        }
        for (std::size_t i = 0; i < odd_.size(); ++i) {
            if (odd_[i] == name) return Var{Parity::odd, i};
        }
        return std::nullopt;
    }

    Var at(std::string_view name) const
    {
        if (auto v = find(name)) return *v;
        throw unknown_variable("unknown variable '" + std::string(name) + "'");
    }

    const std::string& name(Var v) const
    {
        return v.parity == Parity::even ? even_.at(v.index) : odd_.at(v.index);
    }

    friend bool operator==(const VarTable&, const VarTable&) = default;

private:
    std::vector<std::string> even_;
    std::vector<std::string> odd_;
};

using TablePtr = std::shared_ptr<const VarTable>;

inline TablePtr make_table(std::vector<std::string> even_names, std::vector<std::string> odd_names)
{
    return std::make_shared<const VarTable>(std::move(even_names), std::move(odd_names));
}

inline bool same_table(const TablePtr& a, const TablePtr& b)
{
    return a == b || (a && b && *a == *b);
}

/// Key of a term: even exponent vector and odd subset.
struct TermKey {
    std::vector<int> exps;
    OddSet odd = 0;

    /// Lexicographic on the exponent vector, then on the ascending odd-index list.
    friend std::strong_ordering operator<=>(const TermKey& a, const TermKey& b)
    {
        if (auto c = a.exps <=> b.exps; c != 0) return c;
        OddSet x = a.odd;
        OddSet y = b.odd;
        while (x != 0 && y != 0) {
            const int i = std::countr_zero(x);
            const int j = std::countr_zero(y);
            if (i != j) return i <=> j;
            x &= x - 1;
            y &= y - 1;
        }
        if (x == y) return std::strong_ordering::equal;
        return x == 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    friend bool operator==(const TermKey&, const TermKey&) = default;

    int j_degree() const noexcept { return std::popcount(odd); }
};

/// A single canonical term, exposed for iteration.
struct SuperTerm {
    const TermKey& key;
    const Rational& coeff;
};

/// Sign of theta_S * theta_T rewritten as theta_{S u T}; S and T must be disjoint.
inline int merge_sign(OddSet s, OddSet t) noexcept
{
    int swaps = 0;
    while (t != 0) {
        const int i = std::countr_zero(t);
        // Every factor of S with a larger index must be passed by theta_i.
        const OddSet above = (i == 63) ? OddSet{0} : (s & ~((OddSet{2} << i) - 1));
        swaps += std::popcount(above);
        t &= t - 1;
    }
    return (swaps % 2 == 0) ? 1 : -1;
}

class SuperElem {
public:
    using TermMap = std::map<TermKey, Rational>;

    explicit SuperElem(TablePtr table) : table_(std::move(table))
    {
        if (!table_) throw error("SuperElem: null variable table");
    }

    static SuperElem zero(const TablePtr& table) { return SuperElem(table); }

    static SuperElem constant(const TablePtr& table, const Rational& c)
    {
        SuperElem r(table);
        if (c != 0) r.terms_.emplace(TermKey{std::vector<int>(table->num_even(), 0), 0}, c);
        return r;
    }

    static SuperElem one(const TablePtr& table) { return constant(table, 1); }

    static SuperElem variable(const TablePtr& table, Var v)
    {
        SuperElem r(table);
        TermKey k{std::vector<int>(table->num_even(), 0), 0};
        if (v.parity == Parity::even) {
            k.exps.at(v.index) = 1;
        } else {
            if (v.index >= table->num_odd()) throw unknown_variable("odd variable index out of range");
            k.odd = OddSet{1} << v.index;
        }
        r.terms_.emplace(std::move(k), Rational(1));
        return r;
    }

    static SuperElem variable(const TablePtr& table, std::string_view name)
    {
        return variable(table, table->at(name));
    }

    /// Single term c * z^exps * theta_odd, with the sign normal form already applied.
    static SuperElem monomial(const TablePtr& table, const Rational& c, std::vector<int> exps, OddSet odd = 0)
    {
        if (exps.size() != table->num_even()) throw dimension_error("monomial: exponent vector length mismatch");
        if (table->num_odd() < 64 && (odd >> table->num_odd()) != 0) {
            throw unknown_variable("monomial: odd index out of range");
        }
        SuperElem r(table);
        if (c != 0) r.terms_.emplace(TermKey{std::move(exps), odd}, c);
        return r;
    }

    const TablePtr& table() const noexcept { return table_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Even iff every term has an even number of odd factors. Zero is both even and odd.
    bool is_even() const
    {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& t) { return parity_of(t.first.odd) == Parity::even; });
    }

    bool is_odd() const
    {
        return std::all_of(terms_.begin(), terms_.end(),
                           [](const auto& t) { return parity_of(t.first.odd) == Parity::odd; });
    }

    bool is_homogeneous() const { return is_even() || is_odd(); }

    /// Parity of a homogeneous element; nullopt when mixed. Zero reports even.
    std::optional<Parity> parity() const
    {
        if (is_even()) return Parity::even;
        if (is_odd()) return Parity::odd;
        return std::nullopt;
    }

    /// Smallest J-degree among the terms (the J-adic filtration level); nullopt for zero.
    std::optional<int> min_j_degree() const
    {
        std::optional<int> m;
        for (const auto& [k, c] : terms_) {
            const int d = k.j_degree();
            if (!m || d < *m) m = d;
        }
        return m;
    }

    bool is_constant() const
    {
        if (terms_.empty()) return true;
        if (terms_.size() != 1) return false;
        const auto& k = terms_.begin()->first;
        return k.odd == 0 && std::all_of(k.exps.begin(), k.exps.end(), [](int e) { return e == 0; });
    }

    /// The constant coefficient (zero if absent).
    Rational constant_term() const
    {
        TermKey k{std::vector<int>(table_->num_even(), 0), 0};
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    Rational coefficient(const TermKey& k) const
    {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    /// Adds c * key in place, keeping the canonical form.
    void add_term(const TermKey& key, const Rational& c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(key, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    SuperElem& operator+=(const SuperElem& b)
    {
        check_table(b);
        for (const auto& [k, c] : b.terms_) add_term(k, c);
        return *this;
    }

    SuperElem& operator-=(const SuperElem& b)
    {
        check_table(b);
        for (const auto& [k, c] : b.terms_) add_term(k, -c);
        return *this;
    }

    SuperElem& operator*=(const Rational& s)
    {
        if (s == 0) {
            terms_.clear();
        } else {
            for (auto& [k, c] : terms_) c *= s;
        }
        return *this;
    }

    friend SuperElem operator+(SuperElem a, const SuperElem& b) { return a += b; }
    friend SuperElem operator-(SuperElem a, const SuperElem& b) { return a -= b; }
    friend SuperElem operator*(SuperElem a, const Rational& s) { return a *= s; }
    friend SuperElem operator*(const Rational& s, SuperElem a) { return a *= s; }

    friend SuperElem operator-(SuperElem a)
    {
        for (auto& [k, c] : a.terms_) c = -c;
        return a;
    }

    friend SuperElem operator*(const SuperElem& a, const SuperElem& b)
    {
        a.check_table(b);
        SuperElem r(a.table_);
        const std::size_t n = a.table_->num_even();
        TermKey k;
        k.exps.resize(n);
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                if ((ka.odd & kb.odd) != 0) continue;
                for (std::size_t i = 0; i < n; ++i) k.exps[i] = ka.exps[i] + kb.exps[i];
                k.odd = ka.odd | kb.odd;
                Rational c = ca * cb;
                if (merge_sign(ka.odd, kb.odd) < 0) c = -c;
                r.add_term(k, c);
            }
        }
        return r;
    }

    SuperElem& operator*=(const SuperElem& b) { return *this = *this * b; }

    friend bool operator==(const SuperElem& a, const SuperElem& b)
    {
        return same_table(a.table_, b.table_) && a.terms_ == b.terms_;
    }

private:
    void check_table(const SuperElem& b) const
    {
        if (!same_table(table_, b.table_)) throw table_mismatch("operands use different variable tables");
    }

    TablePtr table_;
    TermMap terms_;
};

inline SuperElem add(const SuperElem& a, const SuperElem& b) { return a + b; }
inline SuperElem mul(const SuperElem& a, const SuperElem& b) { return a * b; }

/// Rebuilds the element term by term. Elements are always kept canonical, so this is the
/// identity; it exists so the canonical-form invariant can be stated and tested.
inline SuperElem canonicalize(const SuperElem& a)
{
    SuperElem r(a.table());
    for (const auto& [k, c] : a.terms()) r.add_term(k, c);
    return r;
}

/// Drops every term of J-degree >= k.
inline SuperElem truncate_j(const SuperElem& a, int k)
{
    SuperElem r(a.table());
    for (const auto& [key, c] : a.terms()) {
        if (key.j_degree() < k) r.add_term(key, c);
    }
    return r;
}

/// Terms of J-degree exactly k.
inline SuperElem j_component(const SuperElem& a, int k)
{
    SuperElem r(a.table());
    for (const auto& [key, c] : a.terms()) {
        if (key.j_degree() == k) r.add_term(key, c);
    }
    return r;
}

/// The J-degree-0 part.
inline SuperElem body(const SuperElem& a) { return truncate_j(a, 1); }

/// Inverse of an element whose body is one nonzero Laurent term u: u^-1 * sum_j (-n/u)^j
/// with n = a - u nilpotent, so the series stops after at most (number of odd variables) steps.
inline SuperElem invert_unit(const SuperElem& a)
{
    const SuperElem b = body(a);
    if (b.size() != 1) {
        throw not_a_unit(b.is_zero() ? "element has no invertible body (it is nilpotent)"
                                     : "body is not a single Laurent monomial");
    }
    const auto& [key, c] = *b.terms().begin();
    std::vector<int> neg(key.exps.size());
    std::transform(key.exps.begin(), key.exps.end(), neg.begin(), [](int e) { return -e; });
    const Rational cinv = 1 / c;
    const SuperElem u_inv = SuperElem::monomial(a.table(), cinv, std::move(neg));

    const SuperElem step = -((a - b) * u_inv);
    SuperElem sum = SuperElem::one(a.table());
    SuperElem power = SuperElem::one(a.table());
    for (std::size_t j = 0; j < a.table()->num_odd(); ++j) {
        power = power * step;
        if (power.is_zero()) break;
        sum += power;
    }
    return u_inv * sum;
}

/// Integer power; negative exponents go through invert_unit.
inline SuperElem pow(const SuperElem& a, int e)
{
    SuperElem base = e < 0 ? invert_unit(a) : a;
    unsigned n = static_cast<unsigned>(e < 0 ? -static_cast<long>(e) : e);
    SuperElem r = SuperElem::one(a.table());
    while (n != 0) {
        if (n & 1u) r = r * base;
        n >>= 1;
        if (n != 0) base = base * base;
    }
    return r;
}

/// Images of every variable of `source` as elements over `target`.
struct Substitution {
    TablePtr source;
    TablePtr target;
    std::vector<SuperElem> even_images;
    std::vector<SuperElem> odd_images;

    Substitution(TablePtr src, TablePtr tgt) : source(std::move(src)), target(std::move(tgt)) {}

    Substitution(TablePtr src, TablePtr tgt, std::vector<SuperElem> even, std::vector<SuperElem> odd)
        : source(std::move(src)), target(std::move(tgt)), even_images(std::move(even)), odd_images(std::move(odd))
    {
    }

    /// Images in table order, even variables first.
    static Substitution from_images(const TablePtr& src, const TablePtr& tgt, const std::vector<SuperElem>& images)
    {
        if (images.size() != src->num_even() + src->num_odd()) {
            throw dimension_error("substitution: expected one image per source variable");
        }
        Substitution s(src, tgt);
        s.even_images.assign(images.begin(), images.begin() + static_cast<std::ptrdiff_t>(src->num_even()));
        s.odd_images.assign(images.begin() + static_cast<std::ptrdiff_t>(src->num_even()), images.end());
        return s;
    }

    void validate() const
    {
        if (even_images.size() != source->num_even() || odd_images.size() != source->num_odd()) {
            throw dimension_error("substitution: image count does not match source table");
        }
        for (std::size_t i = 0; i < even_images.size(); ++i) {
            if (!same_table(even_images[i].table(), target) ) throw table_mismatch("substitution: image over wrong table");
            if (!even_images[i].is_even()) {
                throw parity_error("substitution: image of even variable '" + source->even_names()[i] + "' is not even");
            }
        }
        for (std::size_t i = 0; i < odd_images.size(); ++i) {
            if (!same_table(odd_images[i].table(), target)) throw table_mismatch("substitution: image over wrong table");
            if (!odd_images[i].is_odd()) {
                throw parity_error("substitution: image of odd variable '" + source->odd_names()[i] + "' is not odd");
            }
        }
    }
};

/// Homomorphic image of `a`; theta_S maps to the product of the odd images in ascending S order.
/// Negative even exponents require the corresponding image to pass invert_unit.
inline SuperElem substitute(const SuperElem& a, const Substitution& sub)
{
    if (!same_table(a.table(), sub.source)) throw table_mismatch("substitute: element is not over the source table");
    sub.validate();

    const std::size_t n = sub.source->num_even();
    std::vector<std::map<int, SuperElem>> power_cache(n);
    std::vector<std::optional<SuperElem>> inverse_cache(n);

    auto power = [&](std::size_t var, int e) -> const SuperElem& {
        auto& cache = power_cache[var];
        if (auto it = cache.find(e); it != cache.end()) return it->second;
        SuperElem value = SuperElem::one(sub.target);
        if (e > 0) {
            value = pow(sub.even_images[var], e);
        } else if (e < 0) {
            if (!inverse_cache[var]) {
                try {
                    inverse_cache[var] = invert_unit(sub.even_images[var]);
                } catch (const not_a_unit& ex) {
                    throw not_a_unit("substitute: image of '" + sub.source->even_names()[var] +
                                     "' has no unit body: " + ex.what());
                }
            }
            value = pow(*inverse_cache[var], -e);
        }
        return cache.emplace(e, std::move(value)).first->second;
    };

    SuperElem r(sub.target);
    for (const auto& [key, c] : a.terms()) {
        SuperElem t = SuperElem::constant(sub.target, c);
        for (std::size_t i = 0; i < n; ++i) {
            if (key.exps[i] != 0) t = t * power(i, key.exps[i]);
        }
        for (OddSet s = key.odd; s != 0; s &= s - 1) {
            t = t * sub.odd_images[static_cast<std::size_t>(std::countr_zero(s))];
            if (t.is_zero()) break;
        }
        r += t;
    }
    return r;
}

/// d/dv on the Laurent exponents of an even variable.
inline SuperElem deriv_even(const SuperElem& a, Var v)
{
    if (v.parity != Parity::even || v.index >= a.table()->num_even()) {
        throw unknown_variable("deriv_even: not an even variable of this table");
    }
    SuperElem r(a.table());
    for (const auto& [key, c] : a.terms()) {
        const int e = key.exps[v.index];
        if (e == 0) continue;
        TermKey k = key;
        k.exps[v.index] = e - 1;
        r.add_term(k, c * e);
    }
    return r;
}

inline SuperElem deriv_even(const SuperElem& a, std::string_view name)
{
    return deriv_even(a, a.table()->at(name));
}

/// Left Grassmann derivative: d_t(theta_S) = (-1)^(position of t in S) theta_{S \ t}.
inline SuperElem deriv_odd_left(const SuperElem& a, Var t)
{
    if (t.parity != Parity::odd || t.index >= a.table()->num_odd()) {
        throw unknown_variable("deriv_odd_left: not an odd variable of this table");
    }
    const OddSet bit = OddSet{1} << t.index;
    SuperElem r(a.table());
    for (const auto& [key, c] : a.terms()) {
        if ((key.odd & bit) == 0) continue;
        const int position = std::popcount(key.odd & (bit - 1));
        TermKey k = key;
        k.odd &= ~bit;
        r.add_term(k, (position % 2 == 0) ? Rational(c) : Rational(-c));
    }
    return r;
}

inline SuperElem deriv_odd_left(const SuperElem& a, std::string_view name)
{
    return deriv_odd_left(a, a.table()->at(name));
}

/// Derivative along any variable; odd variables use the left derivative.
inline SuperElem deriv(const SuperElem& a, Var v)
{
    return v.parity == Parity::even ? deriv_even(a, v) : deriv_odd_left(a, v);
}

} // namespace supergeo
