#pragma once

#include <map>
#include <string>
#include <vector>

#include "hpl/expansion/expr.hpp"

namespace hpl::expansion {

enum class Origin { XMomentum, YMomentum, Divergence, Boundary, TaylorMatching };
const char* origin_name(Origin o);

struct TaggedEquation {
    int order = 0;
    Origin origin = Origin::XMomentum;
    Expr expr;  // equation expr = 0
};

/// Equations grouped by exact eps power.
struct OrderedSystem {
    std::map<int, std::vector<TaggedEquation>> by_order;

    void add(int order, Origin origin, Expr e);
    const Expr* find(int order, Origin origin) const;
};

/// Truncated multi-scale series for the velocity components and pressure:
/// sum_j eps^j (inner_j(t,x,y) + layer_j(t,x,yt)).
struct Ansatz {
    Expr u, v, p;
    int max_order = 0;
};

Ansatz build_ansatz(int max_order);

/// The three scaled equations (x-momentum, y-momentum, divergence) with the
/// ansatz substituted; drop_damping removes the first-order time derivative
/// (used by the mutation test).
struct SubstitutedSystem {
    Expr x_momentum;
    Expr y_momentum;
    Expr divergence;
};

SubstitutedSystem substitute_ansatz(const Ansatz& a, bool drop_damping = false);

/// Bucket a substituted system by eps order (pure partition, no rewriting).
OrderedSystem collect_orders(const SubstitutedSystem& s);

struct LogEntry {
    std::string kind;  // "ansatz", "taylor", "decay-fact", "boundary", "equation", "check", "note"
    std::string text;
};

struct DerivationOptions {
    int max_order = 2;
    bool drop_damping = false;
};

/// Full derivation result: the order-collected outer and layer systems, the
/// facts obtained from the decay rule, the composed boundary-layer system and
/// its structural comparison against the transcribed target equations.
struct Derivation {
    OrderedSystem outer;        // region away from the wall
    OrderedSystem layer;        // wall region, Taylor-matched, outer part removed
    std::vector<TaggedEquation> boundary;
    std::vector<std::string> facts;  // decay conclusions, e.g. "vB0 == 0"
    std::vector<LogEntry> log;

    // Composed system in the combined unknowns.
    Expr momentum;       // = 0
    Expr continuity;     // = 0
    Expr outer_law;      // = 0
    std::vector<std::string> final_rendered;  // target-form, yt renamed to y

    bool matches_target = false;
    std::string diff;  // empty when matches_target

    std::string log_text() const;
};

Derivation derive_layer_system(const DerivationOptions& opts = {});

/// The hard-coded transcription of the target boundary-layer system
/// (momentum, continuity, outer law) in the named unknowns u, v, U, P.
struct TargetSystem {
    Expr momentum;
    Expr continuity;
    Expr outer_law;
};
TargetSystem target_system();

/// JSON document with the flat (order, origin, equation) records plus the
/// facts, final system and match verdict.
std::string derivation_json(const Derivation& d);

}  // namespace hpl::expansion
