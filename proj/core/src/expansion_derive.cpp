#include "hpl/expansion/derive.hpp"

#include <sstream>
#include <stdexcept>

namespace hpl::expansion {

const char* origin_name(Origin o) {
    switch (o) {
        case Origin::XMomentum: return "x-momentum";
        case Origin::YMomentum: return "y-momentum";
        case Origin::Divergence: return "divergence";
        case Origin::Boundary: return "boundary";
        default: return "taylor-matching";
    }
}

void OrderedSystem::add(int order, Origin origin, Expr e) {
    by_order[order].push_back(TaggedEquation{order, origin, std::move(e)});
}

const Expr* OrderedSystem::find(int order, Origin origin) const {
    auto it = by_order.find(order);
    if (it == by_order.end()) return nullptr;
    for (const auto& eq : it->second)
        if (eq.origin == origin) return &eq.expr;
    return nullptr;
}

Ansatz build_ansatz(int max_order) {
    if (max_order < 0)
        throw std::invalid_argument("build_ansatz: max_order must be >= 0");
    Ansatz a;
    a.max_order = max_order;
    for (int j = 0; j <= max_order; ++j) {
        const Expr ej = Expr::eps(j);
        a.u = a.u + ej * (Expr::atom(Atom::inner('u', j)) +
                          Expr::atom(Atom::layer('u', j)));
        a.v = a.v + ej * (Expr::atom(Atom::inner('v', j)) +
                          Expr::atom(Atom::layer('v', j)));
        a.p = a.p + ej * (Expr::atom(Atom::inner('p', j)) +
                          Expr::atom(Atom::layer('p', j)));
    }
    return a;
}

SubstitutedSystem substitute_ansatz(const Ansatz& a, bool drop_damping) {
    const Expr eps2 = Expr::eps(2);
    const Expr u_t = a.u.derivative(Var::t);
    const Expr v_t = a.v.derivative(Var::t);
    const Expr u_x = a.u.derivative(Var::x);
    const Expr v_x = a.v.derivative(Var::x);
    const Expr u_y = a.u.derivative(Var::y);
    const Expr v_y = a.v.derivative(Var::y);

    SubstitutedSystem s;
    s.x_momentum = u_t.derivative(Var::t) + a.u * u_x + a.v * u_y -
                   eps2 * (u_x.derivative(Var::x) + u_y.derivative(Var::y)) +
                   a.p.derivative(Var::x);
    s.y_momentum = v_t.derivative(Var::t) + a.u * v_x + a.v * v_y -
                   eps2 * (v_x.derivative(Var::x) + v_y.derivative(Var::y)) +
                   a.p.derivative(Var::y);
    if (!drop_damping) {
        s.x_momentum = s.x_momentum + u_t;
        s.y_momentum = s.y_momentum + v_t;
    }
    s.divergence = u_x + v_y;
    return s;
}

OrderedSystem collect_orders(const SubstitutedSystem& s) {
    OrderedSystem out;
    for (auto& [n, e] : s.x_momentum.collect_orders())
        out.add(n, Origin::XMomentum, e);
    for (auto& [n, e] : s.y_momentum.collect_orders())
        out.add(n, Origin::YMomentum, e);
    for (auto& [n, e] : s.divergence.collect_orders())
        out.add(n, Origin::Divergence, e);
    return out;
}

namespace {

// Orders the truncated ansatz resolves exactly: products miss cross terms
// involving expansion indices beyond max_order from eps^max_order on, and
// first-order Taylor matching leaves eps^2 remainders.
int trusted_order(int max_order) { return max_order - 1; }

struct Pipeline {
    DerivationOptions opts;
    std::vector<LogEntry> log;
    std::vector<Atom> facts;
    std::vector<std::string> fact_names;

    void note(std::string kind, std::string text) {
        log.push_back(LogEntry{std::move(kind), std::move(text)});
    }

    Expr reduced(const Expr& e) const { return e.without(facts); }

    // The equation must reduce to c * D[yt](X) for a single layer unknown X;
    // with decay as yt -> infinity this forces X == 0, which becomes a fact.
    void conclude_zero(const Expr& bucket, Origin origin, int order) {
        const Expr e = reduced(bucket);
        if (e.terms().size() != 1 || e.terms()[0].factors.size() != 1)
            throw std::logic_error(
                std::string("derivation: unexpected form at order ") +
                std::to_string(order) + " (" + origin_name(origin) +
                "): " + e.str());
        const DerivedAtom& f = e.terms()[0].factors[0];
        const bool pure_yt_derivative =
            f.atom.kind == AtomKind::Layer && f.d[0] == 0 && f.d[1] == 0 &&
            f.d[2] == 0 && f.d[3] == 1;
        if (!pure_yt_derivative)
            throw std::logic_error(
                std::string("derivation: expected a pure yt-derivative at "
                            "order ") +
                std::to_string(order) + " (" + origin_name(origin) +
                "): " + e.str());
        Atom zero = Atom::layer(f.atom.field, f.atom.order);
        note("decay-fact", std::string(origin_name(origin)) + " at order " +
                               std::to_string(order) + ": " + e.str() +
                               " = 0; with decay as yt->inf this gives " +
                               zero.str() + " == 0");
        fact_names.push_back(zero.str() + " == 0");
        facts.push_back(zero);
    }
};

std::string render_equation(const Expr& e) { return e.str() + " = 0"; }

// Structural difference rendered for humans: terms of `expect` missing from
// `got`, and terms of `got` not in `expect`.
std::string render_diff(const Expr& expect, const Expr& got) {
    const Expr d = expect - got;
    if (d.is_zero()) return {};
    std::string missing, extra;
    for (const auto& m : d.terms()) {
        Monomial abs = m;
        const bool positive = m.coeff.num > 0;
        if (!positive) abs.coeff = -abs.coeff;
        std::string& dst = positive ? missing : extra;
        if (!dst.empty()) dst += ", ";
        dst += abs.str();
    }
    std::string out;
    if (!missing.empty()) out += "missing terms: " + missing;
    if (!extra.empty()) {
        if (!out.empty()) out += "; ";
        out += "extra terms: " + extra;
    }
    return out;
}

}  // namespace

TargetSystem target_system() {
    const Expr u = Expr::atom(Atom::named("u", {Var::t, Var::x, Var::yt}));
    const Expr v = Expr::atom(Atom::named("v", {Var::t, Var::x, Var::yt}));
    const Expr uo = Expr::atom(Atom::named("U", {Var::t, Var::x}));
    const Expr po = Expr::atom(Atom::named("P", {Var::t, Var::x}));

    TargetSystem t;
    t.momentum = u.derivative(Var::t).derivative(Var::t) + u.derivative(Var::t) +
                 u * u.derivative(Var::x) + v * u.derivative(Var::yt) -
                 u.derivative(Var::yt).derivative(Var::yt) + po.derivative(Var::x);
    t.continuity = u.derivative(Var::x) + v.derivative(Var::yt);
    t.outer_law = uo.derivative(Var::t).derivative(Var::t) +
                  uo.derivative(Var::t) + uo * uo.derivative(Var::x) +
                  po.derivative(Var::x);
    return t;
}

Derivation derive_layer_system(const DerivationOptions& opts) {
    if (opts.max_order < 2)
        throw std::invalid_argument(
            "derive_layer_system: max_order must be >= 2");

    Pipeline pl;
    pl.opts = opts;
    Derivation d;

    const Ansatz ansatz = build_ansatz(opts.max_order);
    pl.note("ansatz", "u = " + ansatz.u.str());
    pl.note("ansatz", "v = " + ansatz.v.str());
    pl.note("ansatz", "p = " + ansatz.p.str());
    if (opts.drop_damping)
        pl.note("note", "mutation: first-order time derivative dropped");

    const SubstitutedSystem full = substitute_ansatz(ansatz, opts.drop_damping);

    // Region away from the wall: layer functions vanish as yt -> infinity.
    SubstitutedSystem outer;
    outer.x_momentum = full.x_momentum.without_layer_atoms();
    outer.y_momentum = full.y_momentum.without_layer_atoms();
    outer.divergence = full.divergence.without_layer_atoms();
    pl.note("note",
            "outer region: every layer symbol discarded (decays as yt->inf)");

    // Wall region: inner symbols Taylor-expanded to first order about y = 0.
    SubstitutedSystem matched;
    matched.x_momentum = full.x_momentum.taylor_match(1);
    matched.y_momentum = full.y_momentum.taylor_match(1);
    matched.divergence = full.divergence.taylor_match(1);
    pl.note("taylor", "inner symbols replaced by Tr[f] + eps*yt*Tr[dy(f)]");

    SubstitutedSystem outer_matched;
    outer_matched.x_momentum = outer.x_momentum.taylor_match(1);
    outer_matched.y_momentum = outer.y_momentum.taylor_match(1);
    outer_matched.divergence = outer.divergence.taylor_match(1);

    // Layer system = wall-region equations minus the (Taylor-expanded) outer
    // equations, which hold identically in y.
    SubstitutedSystem layer;
    layer.x_momentum = matched.x_momentum - outer_matched.x_momentum;
    layer.y_momentum = matched.y_momentum - outer_matched.y_momentum;
    layer.divergence = matched.divergence - outer_matched.divergence;

    // The outer buckets are complete through eps^max_order (higher orders
    // involve coefficients outside the truncated ansatz); the layer buckets
    // additionally lose one order to first-order Taylor matching.
    {
        OrderedSystem outer_all = collect_orders(outer);
        for (auto& [n, eqs] : outer_all.by_order) {
            if (n > opts.max_order) continue;
            for (auto& eq : eqs) d.outer.add(n, eq.origin, eq.expr);
        }
    }
    OrderedSystem layer_all = collect_orders(layer);
    OrderedSystem traced_outer = collect_orders(outer_matched);

    const int trust = trusted_order(opts.max_order);

    // Boundary conditions at the wall: inner trace plus layer value at yt=0.
    // The normal inner velocity vanishes at the wall, which seeds the facts.
    pl.note("boundary",
            "no-slip at y=0: Tr[uIj] + uBj(yt=0) = 0 and Tr[vIj] + vBj(yt=0) = 0");
    pl.note("boundary", "outer normal velocity at the wall: Tr[vI0] == 0");
    pl.facts.push_back(Atom::trace('v', 0, 0));
    for (int j = 0; j <= opts.max_order; ++j) {
        Expr bc_u = Expr::atom(Atom::trace('u', j, 0)) +
                    Expr::atom(Atom::layer('u', j));
        Expr bc_v = Expr::atom(Atom::trace('v', j, 0)) +
                    Expr::atom(Atom::layer('v', j));
        d.boundary.push_back(TaggedEquation{j, Origin::Boundary, bc_u});
        d.boundary.push_back(TaggedEquation{j, Origin::Boundary, bc_v});
    }

    // Decay facts in derivation order.
    const Expr* div_m1 = layer_all.find(-1, Origin::Divergence);
    if (!div_m1) throw std::logic_error("derivation: missing order -1 divergence");
    pl.conclude_zero(*div_m1, Origin::Divergence, -1);  // vB0 == 0

    const Expr* ym_m1 = layer_all.find(-1, Origin::YMomentum);
    if (!ym_m1) throw std::logic_error("derivation: missing order -1 y-momentum");
    pl.conclude_zero(*ym_m1, Origin::YMomentum, -1);  // pB0 == 0

    const Expr* ym_0 = layer_all.find(0, Origin::YMomentum);
    if (!ym_0) throw std::logic_error("derivation: missing order 0 y-momentum");
    pl.conclude_zero(*ym_0, Origin::YMomentum, 0);  // pB1 == 0

    // Reduced layer system with the facts applied, up to the trusted order.
    // Equations absorbed entirely by the facts are dropped.
    for (auto& [n, eqs] : layer_all.by_order) {
        if (n > trust) continue;
        for (auto& eq : eqs) {
            Expr r = pl.reduced(eq.expr);
            if (r.is_zero()) continue;
            d.layer.add(n, eq.origin, r);
            pl.note("equation", std::string("layer ") + origin_name(eq.origin) +
                                    " at order " + std::to_string(n) + ": " +
                                    render_equation(r));
        }
    }

    const Expr* layer_div0 = d.layer.find(0, Origin::Divergence);
    const Expr* layer_x0 = d.layer.find(0, Origin::XMomentum);
    const Expr* outer_x0 = traced_outer.find(0, Origin::XMomentum);
    const Expr* outer_div0 = traced_outer.find(0, Origin::Divergence);
    if (!layer_div0 || !layer_x0 || !outer_x0 || !outer_div0)
        throw std::logic_error("derivation: missing order-0 equations");

    const Expr traced_x0 = pl.reduced(*outer_x0);
    const Expr traced_div0 = pl.reduced(*outer_div0);

    // Combined unknowns evaluated in the wall region.
    const Expr u_def = Expr::atom(Atom::trace('u', 0, 0)) +
                       Expr::atom(Atom::layer('u', 0));
    const Expr v_def = Expr::atom(Atom::trace('v', 1, 0)) +
                       Expr::atom(Atom::layer('v', 1)) +
                       Expr::atom(Atom::coordinate(Var::yt)) *
                           Expr::atom(Atom::trace('v', 0, 1));
    pl.note("note", "combined unknowns: u = " + u_def.str() +
                        ", v = " + v_def.str());
    pl.note("note",
            "the normal combination uses the layer symbol vB1 obtained from "
            "the raw substitution");

    d.momentum = *layer_x0 + traced_x0;
    d.continuity = *layer_div0 + traced_div0;
    d.outer_law = traced_x0;

    const TargetSystem target = target_system();
    const Expr t_momentum = target.momentum
                                .substitute_named("u", u_def)
                                .substitute_named("v", v_def)
                                .substitute_named("P", Expr::atom(Atom::trace('p', 0, 0)));
    const Expr t_continuity = target.continuity.substitute_named("u", u_def)
                                  .substitute_named("v", v_def);
    const Expr t_outer = target.outer_law
                             .substitute_named("U", Expr::atom(Atom::trace('u', 0, 0)))
                             .substitute_named("P", Expr::atom(Atom::trace('p', 0, 0)));

    std::string diff;
    const std::string d1 = render_diff(t_momentum, d.momentum);
    const std::string d2 = render_diff(t_continuity, d.continuity);
    const std::string d3 = render_diff(t_outer, d.outer_law);
    if (!d1.empty()) diff += "momentum: " + d1;
    if (!d2.empty()) diff += (diff.empty() ? "" : "\n") + ("continuity: " + d2);
    if (!d3.empty()) diff += (diff.empty() ? "" : "\n") + ("outer law: " + d3);
    d.matches_target = diff.empty();
    d.diff = diff;

    const TargetSystem plain = target_system();
    d.final_rendered.push_back(plain.momentum.str(true) + " = 0");
    d.final_rendered.push_back(plain.continuity.str(true) + " = 0");
    d.final_rendered.push_back(plain.outer_law.str(true) + " = 0");
    d.final_rendered.push_back("u = 0, v = 0 at y = 0; u -> U as y -> inf");

    pl.note("check", d.matches_target
                         ? "derived order-0 system matches the target "
                           "boundary-layer equations"
                         : "MISMATCH against target:\n" + diff);

    d.facts = std::move(pl.fact_names);
    d.log = std::move(pl.log);
    return d;
}

namespace {

// Equation strings are plain ASCII without quotes or backslashes, so the
// escaping only needs to cover newlines from the diff text.
std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}

void append_records(std::ostringstream& os, const OrderedSystem& sys,
                    bool rename_yt, bool& first) {
    for (const auto& [n, eqs] : sys.by_order) {
        for (const auto& eq : eqs) {
            if (!first) os << ",\n";
            first = false;
            os << "    {\"order\": " << n << ", \"origin\": \""
               << origin_name(eq.origin) << "\", \"equation\": \""
               << json_escape(eq.expr.str(rename_yt) + " = 0") << "\"}";
        }
    }
}

}  // namespace

std::string derivation_json(const Derivation& d) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"records\": [\n";
    bool first = true;
    append_records(os, d.layer, false, first);
    for (const auto& eq : d.boundary) {
        if (!first) os << ",\n";
        first = false;
        os << "    {\"order\": " << eq.order << ", \"origin\": \""
           << origin_name(eq.origin) << "\", \"equation\": \""
           << json_escape(eq.expr.str() + " = 0 at yt = 0") << "\"}";
    }
    os << "\n  ],\n";
    os << "  \"outer\": [\n";
    first = true;
    append_records(os, d.outer, false, first);
    os << "\n  ],\n";
    os << "  \"facts\": [";
    for (size_t q = 0; q < d.facts.size(); ++q)
        os << (q ? ", " : "") << "\"" << json_escape(d.facts[q]) << "\"";
    os << "],\n";
    os << "  \"final_system\": [";
    for (size_t q = 0; q < d.final_rendered.size(); ++q)
        os << (q ? ", " : "") << "\"" << json_escape(d.final_rendered[q]) << "\"";
    os << "],\n";
    os << "  \"matches_target\": " << (d.matches_target ? "true" : "false");
    if (!d.diff.empty()) os << ",\n  \"diff\": \"" << json_escape(d.diff) << "\"";
    os << "\n}\n";
    return os.str();
}

std::string Derivation::log_text() const {
    std::ostringstream os;
    os << "boundary-layer derivation\n";
    os << "=========================\n";
    for (const auto& entry : log)
        os << "[" << entry.kind << "] " << entry.text << "\n";
    os << "\nfinal system (yt renamed to y):\n";
    for (const auto& line : final_rendered) os << "  " << line << "\n";
    os << "\nmatches target: " << (matches_target ? "yes" : "no") << "\n";
    if (!diff.empty()) os << diff << "\n";
    return os.str();
}

}  // namespace hpl::expansion
