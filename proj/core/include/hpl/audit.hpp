#pragma once

#include <vector>

#include "hpl/gevrey.hpp"
#include "hpl/stepper.hpp"

namespace hpl {

/// Discrete evaluation of the order-m weighted energy balance over [0, t]:
/// instantaneous kinetic and gradient half-norms plus the time-integrated
/// damping norm on the left; initial data, the signed Leibniz transport
/// pairing and the signed weight-commutator pairing on the right. The
/// residual is reported, never folded away.
struct EnergyAudit {
    int m = 0;
    double t = 0.0;
    double lhs_kinetic = 0.0;       // 1/2 ||<y>^l dt dx^m u(t)||^2
    double lhs_gradient = 0.0;      // 1/2 ||<y>^l dy dx^m u(t)||^2
    double lhs_damping = 0.0;       // int_0^t ||<y>^l dt dx^m u||^2 ds
    double rhs_initial = 0.0;       // 1/2 ||<y>^l dx^m u1||^2 + 1/2 ||<y>^l dy dx^m u0||^2
    double rhs_leibniz = 0.0;       // - int_0^t sum_j C(m,j) (transport, <y>^2l dt dx^m u) ds
    double rhs_commutator = 0.0;    // - int_0^t (dy dx^m u, (dy <y>^2l) dt dx^m u) ds

    double lhs_total() const { return lhs_kinetic + lhs_gradient + lhs_damping; }
    double rhs_total() const { return rhs_initial + rhs_leibniz + rhs_commutator; }
    double residual() const { return lhs_total() - rhs_total(); }
};

/// Streaming evaluation: feed states at a uniform cadence (the first sample
/// supplies the initial data terms) and finalize at any sample.
class EnergyAuditAccumulator {
  public:
    EnergyAuditAccumulator(int m, double ell);

    void feed(const State& s);
    EnergyAudit current() const;
    long long samples() const { return count_; }

  private:
    int m_;
    double ell_;
    long long count_ = 0;
    double prev_t_ = 0.0;
    double prev_damping_ = 0.0;
    double prev_leibniz_ = 0.0;
    double prev_commutator_ = 0.0;
    EnergyAudit audit_;

    struct Integrands {
        double damping;
        double leibniz;
        double commutator;
        double kinetic_half;
        double gradient_half;
    };
    Integrands integrands(const State& s) const;
};

/// Audit over the snapshots stored in a RunResult. Requires at least two
/// snapshots at a uniform cadence.
EnergyAudit energy_audit(const RunResult& history, int m, double ell);

/// Leibniz transport pairing at a single state, evaluated by the explicit
/// product-rule sum. The `assembled` variant differentiates the assembled
/// product spectrally instead; the two agree on band-limited data.
double leibniz_pairing(const State& s, int m, double ell);
double leibniz_pairing_assembled(const State& s, int m, double ell);

struct LedgerPair {
    double rho = 0.0;
    double rho_tilde = 0.0;
};

struct LadderSample {
    double t = 0.0;
    Ladder ladder;
};

struct LedgerSeries {
    LedgerPair pair;
    std::vector<double> t;
    std::vector<double> lhs;   // |u(t)|^2_{rho,sigma}
    std::vector<double> i1;    // int (|u|^2 + |u|^3)_{rho,sigma} ds
    std::vector<double> i2;    // int |u|^2_{rho~,sigma} / (rho~ - rho) ds
    std::vector<double> chat;  // lhs / (c0 + i1 + cstar i2)
    double sup_chat = 0.0;
    double final_quarter_rel_change = 0.0;
    bool stabilized = false;
};

struct Ledger {
    double sigma = 0.0;
    double rho0 = 0.0;
    double cstar = 0.0;
    double c0 = 0.0;  // |u0|^2_{2 rho0, sigma} + |u1|^2_{2 rho0, sigma}
    std::vector<LedgerSeries> pairs;
};

/// Per-pair observed constant of the a priori inequality: for each sampled t,
/// Chat(t) = |u(t)|^2_{rho,sigma} / (C0 + I1(t) + Cstar I2(t)). A pair's
/// series is `stabilized` when the running sup of Chat changes by less than
/// 10% in relative terms over the final quarter of the run.
Ledger theorem_ledger(const std::vector<LadderSample>& history,
                      const Ladder& u0_ladder, const Ladder& u1_ladder,
                      const std::vector<LedgerPair>& pairs, double sigma,
                      double rho0 = 1.0, double cstar = 1.0);

}  // namespace hpl
