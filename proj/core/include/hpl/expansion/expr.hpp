#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace hpl::expansion {

/// Exact rational coefficient. Everything in this module stays rational;
/// no floating point enters the derivation.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d);

    Rational operator+(const Rational& r) const;
    Rational operator*(const Rational& r) const;
    Rational operator-() const;
    bool operator==(const Rational& r) const = default;
    bool is_zero() const { return num == 0; }
    std::string str() const;

  private:
    void normalize();
};

enum class Var : uint8_t { t = 0, x = 1, y = 2, yt = 3 };
inline const char* var_name(Var v) {
    switch (v) {
        case Var::t: return "t";
        case Var::x: return "x";
        case Var::y: return "y";
        default: return "yt";
    }
}

enum class AtomKind : uint8_t { Inner, Layer, TraceInner, Coord, Named };

/// An atomic function symbol: an inner/layer expansion coefficient (field
/// u/v/p at order j), a wall trace of a y-derivative of an inner symbol, a
/// bare coordinate, or a named function with an explicit dependency mask.
struct Atom {
    AtomKind kind = AtomKind::Named;
    char field = 0;     // 'u', 'v', 'p' for the expansion families
    int order = -1;     // expansion index j
    int trace_dy = 0;   // TraceInner: y-derivative order under the bar
    Var coord = Var::t; // Coord kind
    std::string name;   // Named kind
    uint8_t depmask = 0;

    static Atom inner(char field, int j);
    static Atom layer(char field, int j);
    static Atom trace(char field, int j, int dy_order);
    static Atom coordinate(Var v);
    static Atom named(std::string name, std::initializer_list<Var> deps);

    bool depends_on(Var v) const { return depmask & (1u << static_cast<int>(v)); }
    auto key() const {
        return std::tie(kind, field, order, trace_dy, coord, name);
    }
    bool operator==(const Atom& o) const { return key() == o.key(); }
    bool operator<(const Atom& o) const { return key() < o.key(); }
    std::string str() const;
};

/// An atom with a derivative multi-index over (t, x, y, yt).
struct DerivedAtom {
    Atom atom;
    std::array<uint8_t, 4> d{0, 0, 0, 0};

    auto key() const { return std::make_tuple(atom.key(), d); }
    bool operator==(const DerivedAtom& o) const { return key() == o.key(); }
    bool operator<(const DerivedAtom& o) const { return key() < o.key(); }
    std::string str(bool rename_yt = false) const;
};

/// coeff * eps^eps_pow * product of derived atoms (sorted multiset).
struct Monomial {
    Rational coeff;
    int eps_pow = 0;
    std::vector<DerivedAtom> factors;

    auto key() const { return std::make_tuple(eps_pow, factors); }
    bool operator==(const Monomial& o) const {
        return coeff == o.coeff && eps_pow == o.eps_pow && factors == o.factors;
    }
    std::string str(bool rename_yt = false) const;
};

/// Canonical sparse sum of monomials: terms sorted by key, like terms merged
/// with exact coefficients, zero terms dropped. The canonical form is the
/// representation; `canon` re-normalizes any term list.
class Expr {
  public:
    Expr() = default;
    explicit Expr(Monomial m) : terms_{std::move(m)} { canon(); }

    static Expr atom(Atom a);
    static Expr constant(Rational c);
    static Expr eps(int power);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Expr operator+(const Expr& o) const;
    Expr operator-(const Expr& o) const;
    Expr operator*(const Expr& o) const;
    Expr scaled(const Rational& c) const;
    Expr shifted_eps(int delta) const;
    bool operator==(const Expr& o) const { return terms_ == o.terms_; }

    /// Partial derivative; the y-derivative of a layer symbol becomes
    /// eps^{-1} times the yt-derivative.
    Expr derivative(Var v) const;

    /// Replace every inner symbol f evaluated in the layer region by its
    /// wall Taylor form trace(f) + eps * yt * trace(dy f); only first order
    /// is implemented and higher orders are rejected.
    Expr taylor_match(int order) const;

    /// Drop every monomial containing (any derivative of) a matching atom.
    Expr without(const std::vector<Atom>& zero_atoms) const;

    /// Drop every monomial containing a Layer-kind factor.
    Expr without_layer_atoms() const;

    /// Replace a named atom by an expression (applying the stored derivative
    /// multi-index to the replacement).
    Expr substitute_named(const std::string& name, const Expr& replacement) const;

    /// Group terms by exact eps power, with the power factored out.
    std::map<int, Expr> collect_orders() const;

    std::string str(bool rename_yt = false) const;

    /// Re-normalizes an arbitrary term list (idempotent).
    static Expr canonical(std::vector<Monomial> terms);

  private:
    std::vector<Monomial> terms_;
    void canon();
};

}  // namespace hpl::expansion
