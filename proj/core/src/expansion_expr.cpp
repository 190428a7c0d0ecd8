#include "hpl/expansion/expr.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace hpl::expansion {

Rational::Rational(long long n, long long d) : num(n), den(d) { normalize(); }

void Rational::normalize() {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    if (num == 0) den = 1;
}

Rational Rational::operator+(const Rational& r) const {
    return Rational(num * r.den + r.num * den, den * r.den);
}

Rational Rational::operator*(const Rational& r) const {
    return Rational(num * r.num, den * r.den);
}

Rational Rational::operator-() const { return Rational(-num, den); }

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Atom Atom::inner(char field, int j) {
    Atom a;
    a.kind = AtomKind::Inner;
    a.field = field;
    a.order = j;
    a.depmask = (1u << static_cast<int>(Var::t)) |
                (1u << static_cast<int>(Var::x)) |
                (1u << static_cast<int>(Var::y));
    return a;
}

Atom Atom::layer(char field, int j) {
    Atom a;
    a.kind = AtomKind::Layer;
    a.field = field;
    a.order = j;
    a.depmask = (1u << static_cast<int>(Var::t)) |
                (1u << static_cast<int>(Var::x)) |
                (1u << static_cast<int>(Var::yt));
    return a;
}

Atom Atom::trace(char field, int j, int dy_order) {
    Atom a;
    a.kind = AtomKind::TraceInner;
    a.field = field;
    a.order = j;
    a.trace_dy = dy_order;
    a.depmask = (1u << static_cast<int>(Var::t)) |
                (1u << static_cast<int>(Var::x));
    return a;
}

Atom Atom::coordinate(Var v) {
    Atom a;
    a.kind = AtomKind::Coord;
    a.coord = v;
    a.depmask = 1u << static_cast<int>(v);
    return a;
}

Atom Atom::named(std::string name, std::initializer_list<Var> deps) {
    Atom a;
    a.kind = AtomKind::Named;
    a.name = std::move(name);
    for (Var v : deps) a.depmask |= 1u << static_cast<int>(v);
    return a;
}

std::string Atom::str() const {
    switch (kind) {
        case AtomKind::Inner:
            return std::string(1, field) + "I" + std::to_string(order);
        case AtomKind::Layer:
            return std::string(1, field) + "B" + std::to_string(order);
        case AtomKind::TraceInner: {
            std::string base = std::string(1, field) + "I" + std::to_string(order);
            if (trace_dy == 0) return "Tr[" + base + "]";
            if (trace_dy == 1) return "Tr[dy(" + base + ")]";
            return "Tr[dy^" + std::to_string(trace_dy) + "(" + base + ")]";
        }
        case AtomKind::Coord:
            return var_name(coord);
        default:
            return name;
    }
}

std::string DerivedAtom::str(bool rename_yt) const {
    std::string base = atom.str();
    if (rename_yt && atom.kind == AtomKind::Coord && atom.coord == Var::yt)
        base = "y";
    bool any = false;
    std::string ops;
    for (int v = 0; v < 4; ++v) {
        if (d[v] == 0) continue;
        if (any) ops += ",";
        any = true;
        std::string vn = var_name(static_cast<Var>(v));
        if (rename_yt && static_cast<Var>(v) == Var::yt) vn = "y";
        ops += vn;
        if (d[v] > 1) ops += "^" + std::to_string(static_cast<int>(d[v]));
    }
    if (!any) return base;
    return "D[" + ops + "](" + base + ")";
}

std::string Monomial::str(bool rename_yt) const {
    std::string out;
    const bool unit = coeff == Rational(1) || coeff == Rational(-1);
    if (coeff == Rational(-1) && !factors.empty())
        out += "-";
    else if (!unit || factors.empty())
        out += coeff.str();
    bool first = out.empty() || out == "-";
    if (!first && (eps_pow != 0 || !factors.empty())) out += "*";
    if (eps_pow != 0) {
        if (!first && out.back() != '*' && out.back() != '-') out += "*";
        out += "eps^" + std::to_string(eps_pow);
        first = false;
    }
    for (const auto& f : factors) {
        if (!first && out.back() != '*' && out.back() != '-') out += "*";
        out += f.str(rename_yt);
        first = false;
    }
    if (out.empty() || out == "-") out += coeff.str();
    return out;
}

Expr Expr::atom(Atom a) {
    Monomial m;
    m.coeff = Rational(1);
    m.factors.push_back(DerivedAtom{std::move(a), {0, 0, 0, 0}});
    return Expr(std::move(m));
}

Expr Expr::constant(Rational c) {
    if (c.is_zero()) return Expr();
    Monomial m;
    m.coeff = c;
    return Expr(std::move(m));
}

Expr Expr::eps(int power) {
    Monomial m;
    m.coeff = Rational(1);
    m.eps_pow = power;
    return Expr(std::move(m));
}

void Expr::canon() { *this = canonical(std::move(terms_)); }

Expr Expr::canonical(std::vector<Monomial> terms) {
    for (auto& m : terms)
        std::sort(m.factors.begin(), m.factors.end());
    std::sort(terms.begin(), terms.end(),
              [](const Monomial& a, const Monomial& b) { return a.key() < b.key(); });
    Expr out;
    for (auto& m : terms) {
        if (m.coeff.is_zero()) continue;
        if (!out.terms_.empty() && out.terms_.back().key() == m.key()) {
            out.terms_.back().coeff = out.terms_.back().coeff + m.coeff;
            if (out.terms_.back().coeff.is_zero()) out.terms_.pop_back();
        } else {
            out.terms_.push_back(std::move(m));
        }
    }
    return out;
}

Expr Expr::operator+(const Expr& o) const {
    std::vector<Monomial> all = terms_;
    all.insert(all.end(), o.terms_.begin(), o.terms_.end());
    return canonical(std::move(all));
}

Expr Expr::operator-(const Expr& o) const { return *this + o.scaled(Rational(-1)); }

Expr Expr::operator*(const Expr& o) const {
    std::vector<Monomial> prod;
    prod.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_) {
        for (const auto& b : o.terms_) {
            Monomial m;
            m.coeff = a.coeff * b.coeff;
            m.eps_pow = a.eps_pow + b.eps_pow;
            m.factors = a.factors;
            m.factors.insert(m.factors.end(), b.factors.begin(), b.factors.end());
            prod.push_back(std::move(m));
        }
    }
    return canonical(std::move(prod));
}

Expr Expr::scaled(const Rational& c) const {
    std::vector<Monomial> out = terms_;
    for (auto& m : out) m.coeff = m.coeff * c;
    return canonical(std::move(out));
}

Expr Expr::shifted_eps(int delta) const {
    std::vector<Monomial> out = terms_;
    for (auto& m : out) m.eps_pow += delta;
    return canonical(std::move(out));
}

Expr Expr::derivative(Var v) const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        for (size_t q = 0; q < m.factors.size(); ++q) {
            const DerivedAtom& f = m.factors[q];
            // A layer symbol depends on y through yt = y / eps.
            const bool layer_chain = f.atom.kind == AtomKind::Layer && v == Var::y;
            if (!f.atom.depends_on(v) && !layer_chain) continue;
            Monomial d;
            d.coeff = m.coeff;
            d.eps_pow = m.eps_pow;
            for (size_t r = 0; r < m.factors.size(); ++r)
                if (r != q) d.factors.push_back(m.factors[r]);

            if (f.atom.kind == AtomKind::Coord) {
                // d/dv of the bare coordinate: the factor becomes 1.
                if (f.atom.coord != v)
                    throw std::logic_error(
                        "expansion: unsupported coordinate derivative");
            } else if (f.atom.kind == AtomKind::Layer && v == Var::y) {
                // Chain rule for yt = y / eps.
                DerivedAtom g = f;
                ++g.d[static_cast<int>(Var::yt)];
                d.factors.push_back(std::move(g));
                d.eps_pow -= 1;
            } else {
                DerivedAtom g = f;
                ++g.d[static_cast<int>(v)];
                d.factors.push_back(std::move(g));
            }
            out.push_back(std::move(d));
        }
    }
    return canonical(std::move(out));
}

Expr Expr::taylor_match(int order) const {
    if (order != 1)
        throw std::invalid_argument(
            "taylor_match: only first-order matching is implemented (requested "
            "order " +
            std::to_string(order) + ")");
    Expr result;
    for (const auto& m : terms_) {
        // Expand each inner factor into trace + eps*yt*trace(dy .).
        std::vector<Expr> factor_exprs;
        Monomial base;
        base.coeff = m.coeff;
        base.eps_pow = m.eps_pow;
        for (const auto& f : m.factors) {
            if (f.atom.kind != AtomKind::Inner) {
                base.factors.push_back(f);
                continue;
            }
            const int c = f.d[static_cast<int>(Var::y)];
            DerivedAtom t0{Atom::trace(f.atom.field, f.atom.order, c),
                           {f.d[0], f.d[1], 0, 0}};
            DerivedAtom t1{Atom::trace(f.atom.field, f.atom.order, c + 1),
                           {f.d[0], f.d[1], 0, 0}};
            Monomial m0;
            m0.coeff = Rational(1);
            m0.factors.push_back(std::move(t0));
            Monomial m1;
            m1.coeff = Rational(1);
            m1.eps_pow = 1;
            m1.factors.push_back(DerivedAtom{Atom::coordinate(Var::yt), {}});
            m1.factors.push_back(std::move(t1));
            Expr e;
            e = Expr(std::move(m0)) + Expr(std::move(m1));
            factor_exprs.push_back(std::move(e));
        }
        Expr acc = Expr(std::move(base));
        for (const auto& fe : factor_exprs) acc = acc * fe;
        result = result + acc;
    }
    return result;
}

namespace {

bool atom_matches(const Atom& a, const Atom& tmpl) {
    if (a.kind != tmpl.kind) return false;
    switch (tmpl.kind) {
        case AtomKind::Inner:
        case AtomKind::Layer:
            return a.field == tmpl.field && a.order == tmpl.order;
        case AtomKind::TraceInner:
            return a.field == tmpl.field && a.order == tmpl.order &&
                   a.trace_dy == tmpl.trace_dy;
        case AtomKind::Coord:
            return a.coord == tmpl.coord;
        default:
            return a.name == tmpl.name;
    }
}

}  // namespace

Expr Expr::without(const std::vector<Atom>& zero_atoms) const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        bool killed = false;
        for (const auto& f : m.factors) {
            for (const auto& z : zero_atoms) {
                if (atom_matches(f.atom, z)) {
                    killed = true;
                    break;
                }
            }
            if (killed) break;
        }
        if (!killed) out.push_back(m);
    }
    return canonical(std::move(out));
}

Expr Expr::without_layer_atoms() const {
    std::vector<Monomial> out;
    for (const auto& m : terms_) {
        bool has_layer = false;
        for (const auto& f : m.factors)
            if (f.atom.kind == AtomKind::Layer) has_layer = true;
        if (!has_layer) out.push_back(m);
    }
    return canonical(std::move(out));
}

Expr Expr::substitute_named(const std::string& name, const Expr& replacement) const {
    Expr result;
    for (const auto& m : terms_) {
        Expr acc = Expr::constant(m.coeff).shifted_eps(m.eps_pow);
        for (const auto& f : m.factors) {
            if (f.atom.kind == AtomKind::Named && f.atom.name == name) {
                Expr rep = replacement;
                for (int v = 0; v < 4; ++v)
                    for (int q = 0; q < f.d[v]; ++q)
                        rep = rep.derivative(static_cast<Var>(v));
                acc = acc * rep;
            } else {
                Monomial single;
                single.coeff = Rational(1);
                single.factors.push_back(f);
                acc = acc * Expr(std::move(single));
            }
        }
        result = result + acc;
    }
    return result;
}

std::map<int, Expr> Expr::collect_orders() const {
    std::map<int, std::vector<Monomial>> buckets;
    for (const auto& m : terms_) {
        Monomial flat = m;
        flat.eps_pow = 0;
        buckets[m.eps_pow].push_back(std::move(flat));
    }
    std::map<int, Expr> out;
    for (auto& [n, terms] : buckets) out[n] = canonical(std::move(terms));
    return out;
}

std::string Expr::str(bool rename_yt) const {
    if (terms_.empty()) return "0";
    std::string out;
    for (size_t q = 0; q < terms_.size(); ++q) {
        std::string piece = terms_[q].str(rename_yt);
        if (q == 0) {
            out = piece;
        } else if (!piece.empty() && piece[0] == '-') {
            out += " - " + piece.substr(1);
        } else {
            out += " + " + piece;
        }
    }
    return out;
}

}  // namespace hpl::expansion
