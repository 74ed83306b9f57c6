#pragma once

#include <utility>

#include "qjump/core.hpp"

namespace qjump {

enum class Detector { A, B };

inline char detector_letter(Detector d) { return d == Detector::A ? 'A' : 'B'; }

// Click rates of the two output-port detectors, in units of gamma. For a
// normalized state they satisfy rate_a + rate_b = |alpha|^2 + gamma*|b|^2
// regardless of mu (the beam splitter is unitary).
struct RatePair {
    double rate_a = 0.0;
    double rate_b = 0.0;

    double total() const { return rate_a + rate_b; }
};

// Per-click record: which detector fired, the excited population just
// before and just after, and the squared norm of the un-normalized
// post-click state (the rate*dt weight of the event).
struct JumpOutcome {
    Detector detector;
    double pre_population;
    double post_population;
    double weight;
};

RatePair rates(const EmitterState& s, complexd alpha, const Params& p);

// Applies the click operator of the given detector and renormalizes.
// Requesting a jump whose rate vanishes is an error.
std::pair<JumpOutcome, EmitterState> apply_jump(const EmitterState& s, Detector detector,
                                                complexd alpha, const Params& p);

// Local oscillator amplitude that makes a detector A click project the
// emitter onto |e>: alpha = -sqrt(gamma) sqrt(mu/(1-mu)) b/a. Reports
// divergence when the ground population is below 1e-12.
complexd adaptive_alpha(const EmitterState& s, const Params& p);

struct NoJumpResult {
    EmitterState state;  // renormalized
    double survival;     // squared norm of the un-normalized evolved state
};

// Deterministic evolution conditioned on no click during dt, with alpha held
// constant across the step. Uses the exact per-step exponentials
// a -> a exp(-|alpha|^2 dt/2), b -> b exp(-(|alpha|^2+gamma) dt/2), so step
// size only discretizes jump times, never the no-jump dynamics. The |alpha|^2
// factor is common to both amplitudes and cancels under normalization; the
// survival probability keeps it.
NoJumpResult no_jump_step(const EmitterState& s, complexd alpha, const Params& p, double dt);

// Excited population after a detector B click under the adaptive scheme, as
// a function of the population x just before the click:
// x -> mu^2 x / (1 - x + mu^2 x). Strictly increasing in x and always below
// x on (0,1).
double b_jump_population_map(double x, double mu);

}  // namespace qjump
