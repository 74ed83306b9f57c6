#include "qjump/detection.hpp"

#include <cmath>
#include <stdexcept>

namespace qjump {

namespace {

// Un-normalized emitter state after a click, with the coherent local
// oscillator treated as an undepleted classical amplitude. Detector A
// carries beam splitter coefficients (sqrt(1-mu), sqrt(mu)), detector B
// (sqrt(mu), -sqrt(1-mu)); both apply sqrt(gamma)|g><e| to the emitter arm.
EmitterState click_state(const EmitterState& s, Detector detector, complexd alpha,
                         const Params& p) {
    const double root_gamma = std::sqrt(p.gamma);
    double c_lo, c_emit;
    if (detector == Detector::A) {
        c_lo = std::sqrt(1.0 - p.mu);
        c_emit = std::sqrt(p.mu) * root_gamma;
    } else {
        c_lo = std::sqrt(p.mu);
        c_emit = -std::sqrt(1.0 - p.mu) * root_gamma;
    }
    return {c_lo * alpha * s.a + c_emit * s.b, c_lo * alpha * s.b};
}

}  // namespace

RatePair rates(const EmitterState& s, complexd alpha, const Params& p) {
    return {click_state(s, Detector::A, alpha, p).norm2(),
            click_state(s, Detector::B, alpha, p).norm2()};
}

std::pair<JumpOutcome, EmitterState> apply_jump(const EmitterState& s, Detector detector,
                                                complexd alpha, const Params& p) {
    const EmitterState raw = click_state(s, detector, alpha, p);
    const double weight = raw.norm2();
    if (!(weight > 0.0))
        throw std::domain_error("apply_jump: requested jump has zero rate");
    const EmitterState post = normalize(raw).state;
    return {JumpOutcome{detector, s.excited_population(), post.excited_population(), weight},
            post};
}

complexd adaptive_alpha(const EmitterState& s, const Params& p) {
    const double ground_population = std::norm(s.a);
    if (ground_population < 1e-12)
        throw std::domain_error("adaptive_alpha: ground amplitude below the divergence floor");
    return -std::sqrt(p.gamma) * std::sqrt(p.mu / (1.0 - p.mu)) * (s.b / s.a);
}

NoJumpResult no_jump_step(const EmitterState& s, complexd alpha, const Params& p, double dt) {
    const double lo_flux = std::norm(alpha);
    const EmitterState raw{s.a * std::exp(-0.5 * lo_flux * dt),
                           s.b * std::exp(-0.5 * (lo_flux + p.gamma) * dt)};
    const auto [state, survival] = normalize(raw);
    return {state, survival};
}

double b_jump_population_map(double x, double mu) {
    return mu * mu * x / (1.0 - x + mu * mu * x);
}

}  // namespace qjump
