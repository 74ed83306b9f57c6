#pragma once

#include <array>
#include <string>
#include <string_view>

#include "qjump/core.hpp"

namespace qjump {

// Constants that recur in the closed-form expressions for the adaptive
// scheme. k is the exponent mu/(1-mu) * pi_e/pi_g governing the no-jump
// survival; a0, a1, a2 are the combinations appearing in the cascaded
// two-click formulas. Note a1 + a2 = k.
struct ClosedFormConstants {
    double k = 0.0;
    double a0 = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;

    static ClosedFormConstants from(const Params& p);
};

// Un-normalized no-jump density matrix of the adaptive scheme at time t:
//   rho_gg(t) = pi_g exp(-k (1 - exp(-gamma t)))
//   rho_ee(t) = pi_e exp(-k (1 - exp(-gamma t))) exp(-gamma t)
//   rho_ge(t) = sqrt(pi_e pi_g) exp(-k (1 - exp(-gamma t))) exp(-gamma t / 2)
UnnormalizedDensity nojump_density(double t, const Params& p);

// Absolute residual of the closed-form rho_gg in the second-order equation
// rho_gg'' = rho_gg'^2 / rho_gg - gamma rho_gg', evaluated with analytic
// derivatives.
double nojump_ode_residual(double t, const Params& p);

// Probability that no detector has clicked up to time t (trace of the
// no-jump density), and its t -> infinity limit pi_g exp(-k).
double p0_of_t(double t, const Params& p);
double p0(const Params& p);

// Probability that the first click ever is in detector A, i.e. the integral
// of the A-rate density mu gamma rho_ee^2 / rho_gg over all times.
// Evaluates the integral by adaptive quadrature to 1e-10 and cross-checks it
// against the re-derived closed form; disagreement beyond 1e-9 throws.
double p_a(const Params& p);

// Re-derived closed form: mu pi_e^2/pi_g * (k - 1 + exp(-k)) / k^2.
double p_a_closed_form(const Params& p);

// The published appendix formula evaluated literally, including its
// definition A = exp(k). Kept for adjudication; see adjudicate_p_a.
double p_a_printed_appendix(const Params& p);

// Closed form for a single B click followed by an A click, derived by
// integrating the A-click formula over the B-click time with the rebased
// initial condition. Cross-check for the nested quadrature.
double p_ba_closed_form(const Params& p);

// The published two-click appendix formula evaluated literally.
double p_ba_printed_appendix(const Params& p);

// Side-by-side evaluation of the integral (normative), the re-derived
// closed form, and the published formula.
struct AppendixReport {
    double quadrature = 0.0;
    double closed_form = 0.0;
    double printed = 0.0;

    double closed_form_deviation() const;
    double printed_deviation() const;
};

AppendixReport adjudicate_p_a(const Params& p);
AppendixReport adjudicate_p_ba(const Params& p);

// Parameters of the no-jump epoch that starts right after a detector B
// click at time t_b: the post-click state is again pure with real
// amplitudes, so the same closed forms apply with the rebased pi_e.
Params post_b_rebase(double t_b, const Params& p);

// Event sequence ending either in a heralding A click or in silence:
// b_jumps leading B clicks followed by A (ends_with_a) or by no further
// click at all. Labels are the compact strings "0", "A", "B0", "BA",
// "BB0", "BBA".
struct SequenceDescriptor {
    int b_jumps = 0;
    bool ends_with_a = false;

    static SequenceDescriptor parse(std::string_view label);
    std::string label() const;
};

// Probability of the given sequence under the adaptive scheme, by nested
// adaptive quadrature over the B-click times (absolute tolerance 1e-8).
// Each B click rebases the parameters via post_b_rebase; the innermost
// factor is p0 for silent sequences and the A-click integral otherwise.
// Sequences with more than two B clicks are not supported.
double p_sequence(const SequenceDescriptor& seq, const Params& p);

// One row of the sequence-probability table: the six supported sequences
// plus the cumulative success probabilities P_N = sum_{n<=N} P(B^n A) and
// exclusion bounds Q_M = 1 - sum_{m<=M} P(B^m 0), N, M = 0..2.
struct ProbabilityRow {
    double pi_e = 0.0;
    double mu = 0.0;
    double p0 = 0.0;
    double p_a = 0.0;
    double p_b0 = 0.0;
    double p_ba = 0.0;
    double p_bb0 = 0.0;
    double p_bba = 0.0;
    std::array<double, 3> p_n{};
    std::array<double, 3> q_m{};
};

// Computes a full row and enforces its ordering invariants
// (p_n nondecreasing, q_m nonincreasing, p_n <= q_m, p_n <= pi_e) within
// quadrature tolerance; violations throw.
ProbabilityRow accumulate(const Params& p);
void validate(const ProbabilityRow& row);

// Conditional excited population of the counting scheme given no click yet:
// pi_e exp(-gamma t) / (pi_g + pi_e exp(-gamma t)).
double counting_conditional_population(double t, const Params& p);

// Beam splitter transmissivity that maximizes p_a for the given initial
// excitation, found by bracketed maximization on [1e-4, 1-1e-4].
struct MuOptimum {
    double mu_star = 0.0;
    double p_a_star = 0.0;
};

MuOptimum optimize_mu(double pi_e, double gamma = 1.0);
MuOptimum grid_scan_mu(double pi_e, int n_points = 10000, double gamma = 1.0);

}  // namespace qjump
