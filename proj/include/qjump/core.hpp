#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

namespace qjump {

using complexd = std::complex<double>;

// Model parameters. gamma is the spontaneous decay rate of the emitter;
// every time in this code is measured in units of 1/gamma unless a comment
// says otherwise. mu is the intensity transmission of the beam splitter
// that mixes the emitted field with the local oscillator, and pi_e is the
// initial excited state population.
//
// pi_e = 1 is rejected: the adaptive local oscillator amplitude scales with
// b/a and diverges when the ground amplitude vanishes. Pass 1 - 1e-9 when a
// near-fully excited initial state is wanted.
struct Params {
    double gamma = 1.0;
    double mu = 0.5;
    double pi_e = 0.5;

    Params() = default;
    Params(double pi_e_, double mu_, double gamma_ = 1.0)
        : gamma(gamma_), mu(mu_), pi_e(pi_e_) {
        validate();
    }

    double pi_g() const { return 1.0 - pi_e; }

    void validate() const {
        if (!(gamma > 0.0))
            throw std::domain_error("Params: gamma must be positive");
        if (!(mu > 0.0 && mu < 1.0))
            throw std::domain_error("Params: mu must lie strictly inside (0,1)");
        if (!(pi_e >= 0.0 && pi_e < 1.0))
            throw std::domain_error(
                "Params: pi_e must lie in [0,1); use 1-1e-9 for near-full excitation");
    }
};

// Pure state of the two-level emitter, a|g> + b|e>. Amplitudes are stored
// as complex numbers even though the protocols studied here keep them real;
// realness is then a checkable property instead of a baked-in assumption.
struct EmitterState {
    complexd a{1.0, 0.0};  // ground amplitude
    complexd b{0.0, 0.0};  // excited amplitude

    double norm2() const { return std::norm(a) + std::norm(b); }
    double excited_population() const { return std::norm(b); }
};

inline EmitterState from_populations(double pi_e) {
    if (!(pi_e >= 0.0 && pi_e < 1.0))
        throw std::domain_error("from_populations: pi_e must lie in [0,1)");
    return {complexd{std::sqrt(1.0 - pi_e), 0.0}, complexd{std::sqrt(pi_e), 0.0}};
}

struct Normalized {
    EmitterState state;
    double norm2;  // squared norm before rescaling, usable as a probability weight
};

inline Normalized normalize(const EmitterState& s) {
    const double n2 = s.norm2();
    if (!(n2 > 0.0))
        throw std::domain_error("normalize: zero-norm state");
    const double inv = 1.0 / std::sqrt(n2);
    return {{s.a * inv, s.b * inv}, n2};
}

// Un-normalized 2x2 density matrix of the no-jump evolution. The trace is
// the probability that no detector has clicked yet. rho_eg is the conjugate
// of rho_ge and is not stored.
struct UnnormalizedDensity {
    double rho_gg = 0.0;
    double rho_ee = 0.0;
    complexd rho_ge{0.0, 0.0};

    double trace() const { return rho_gg + rho_ee; }
    double excited_fraction() const { return rho_ee / trace(); }
};

// Which measurement is performed on the emitted light. Counting detects the
// bare field (alpha = 0), FixedLO interferes it with a constant coherent
// amplitude, AdaptiveLO recomputes the amplitude from the emitter state at
// every step so that a detector A click heralds the fully excited state.
struct DetectionScheme {
    enum class Kind { Counting, FixedLO, AdaptiveLO };

    Kind kind = Kind::Counting;
    complexd alpha{0.0, 0.0};  // used by FixedLO only

    static DetectionScheme counting() { return {Kind::Counting, {0.0, 0.0}}; }
    static DetectionScheme fixed_lo(complexd alpha) { return {Kind::FixedLO, alpha}; }
    static DetectionScheme adaptive_lo() { return {Kind::AdaptiveLO, {0.0, 0.0}}; }
};

}  // namespace qjump
