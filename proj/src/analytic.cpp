#include "qjump/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "qjump/detection.hpp"
#include "qjump/optimize.hpp"
#include "qjump/quadrature.hpp"

namespace qjump {

namespace {

double survival_exponent(const Params& p) {
    return p.mu / (1.0 - p.mu) * p.pi_e / p.pi_g();
}

// Integral of the A-rate density in the substitution u = exp(-gamma t):
// p_a = mu pi_e^2/pi_g * int_0^1 u exp(k(u-1)) du. The exponential is kept
// in the k(u-1) form so large k cannot overflow.
double p_a_quadrature(const Params& p, double abs_tol) {
    if (p.pi_e == 0.0) return 0.0;
    const double k = survival_exponent(p);
    const double scale = p.mu * p.pi_e * p.pi_e / p.pi_g();
    const double inner_tol = abs_tol / scale;
    return scale * integrate([k](double u) { return u * std::exp(k * (u - 1.0)); }, 0.0, 1.0,
                             inner_tol);
}

// int_0^1 exp(s u) du and int_0^1 u exp(s u) du.
double int_exp(double s) { return s == 0.0 ? 1.0 : std::expm1(s) / s; }
double int_u_exp(double s) {
    if (std::abs(s) < 1e-4) {
        // series of (exp(s)(s-1)+1)/s^2 around s = 0
        return 0.5 + s / 3.0 + s * s / 8.0 + s * s * s / 30.0;
    }
    return (std::exp(s) * (s - 1.0) + 1.0) / (s * s);
}

// Rebased parameters after a B click when the no-jump epoch has decayed to
// u = exp(-gamma t_b). Same map as post_b_rebase, expressed directly in u.
Params rebase_at_u(const Params& p, double u) {
    Params next = p;
    const double mu2 = p.mu * p.mu;
    next.pi_e = mu2 * p.pi_e * u / (p.pi_g() + mu2 * p.pi_e * u);
    return next;
}

double p_sequence_impl(int b_jumps, bool ends_with_a, const Params& p, double abs_tol) {
    if (p.pi_e == 0.0) return ends_with_a ? 0.0 : (b_jumps == 0 ? 1.0 : 0.0);
    if (b_jumps == 0) return ends_with_a ? p_a_quadrature(p, abs_tol) : p0(p);

    // Integrate the B-click density over the click time, u = exp(-gamma t_b).
    // The density gamma/(1-mu) rho_ee (1 + mu^2 rho_ee/rho_gg) dt becomes
    // pi_e/(1-mu) exp(-k(1-u)) (1 + mu^2 (pi_e/pi_g) u) du.
    const double k = survival_exponent(p);
    const double ratio = p.pi_e / p.pi_g();
    const double prefactor = p.pi_e / (1.0 - p.mu);
    const double mu2 = p.mu * p.mu;
    auto integrand = [&](double u) {
        const double density = prefactor * std::exp(-k * (1.0 - u)) * (1.0 + mu2 * ratio * u);
        return density * p_sequence_impl(b_jumps - 1, ends_with_a, rebase_at_u(p, u),
                                         abs_tol * 0.1);
    };
    return integrate(integrand, 0.0, 1.0, abs_tol);
}

}  // namespace

ClosedFormConstants ClosedFormConstants::from(const Params& p) {
    ClosedFormConstants c;
    const double ratio = p.pi_e / p.pi_g();
    c.k = p.mu / (1.0 - p.mu) * ratio;
    c.a1 = (p.mu + p.mu * p.mu) * ratio;
    c.a2 = p.mu * p.mu * p.mu / (1.0 - p.mu) * ratio;
    c.a0 = std::pow(p.mu, 5) / (1.0 - p.mu) * std::pow(p.pi_e, 3) / (p.pi_g() * p.pi_g()) *
           std::exp(-c.k);
    return c;
}

UnnormalizedDensity nojump_density(double t, const Params& p) {
    if (t < 0.0) throw std::domain_error("nojump_density: t must be nonnegative");
    const double u = std::exp(-p.gamma * t);
    const double envelope = std::exp(-survival_exponent(p) * (1.0 - u));
    return {p.pi_g() * envelope, p.pi_e * envelope * u,
            complexd{std::sqrt(p.pi_e * p.pi_g()) * envelope * std::sqrt(u), 0.0}};
}

double nojump_ode_residual(double t, const Params& p) {
    const double k = survival_exponent(p);
    const double u = std::exp(-p.gamma * t);
    const double rho = p.pi_g() * std::exp(-k * (1.0 - u));
    const double drho = -k * p.gamma * u * rho;
    const double ddrho = k * p.gamma * p.gamma * u * rho + (k * p.gamma * u) * (k * p.gamma * u) * rho;
    return std::abs(ddrho - (drho * drho / rho - p.gamma * drho));
}

double p0_of_t(double t, const Params& p) {
    if (t < 0.0) throw std::domain_error("p0_of_t: t must be nonnegative");
    const double u = std::exp(-p.gamma * t);
    return (p.pi_g() + p.pi_e * u) * std::exp(-survival_exponent(p) * (1.0 - u));
}

double p0(const Params& p) { return p.pi_g() * std::exp(-survival_exponent(p)); }

double p_a_closed_form(const Params& p) {
    if (p.pi_e == 0.0) return 0.0;
    const double k = survival_exponent(p);
    const double scale = p.mu * p.pi_e * p.pi_e / p.pi_g();
    if (k < 1e-4) {
        // series of (k - 1 + exp(-k))/k^2 around k = 0
        return scale * (0.5 - k / 6.0 + k * k / 24.0 - k * k * k / 120.0);
    }
    return scale * (k - 1.0 + std::exp(-k)) / (k * k);
}

double p_a(const Params& p) {
    p.validate();
    const double quadrature = p_a_quadrature(p, 1e-10);
    const double closed = p_a_closed_form(p);
    if (std::abs(quadrature - closed) > 1e-9)
        throw std::runtime_error("p_a: quadrature and closed form disagree");
    return quadrature;
}

double p_a_printed_appendix(const Params& p) {
    if (p.pi_e == 0.0) return 0.0;
    const double big_a = std::exp(survival_exponent(p));
    const double scale = p.mu * p.pi_e * p.pi_e / p.pi_g();
    return scale * (std::exp(big_a) / (big_a * big_a) +
                    (1.0 - std::exp(big_a)) / (big_a * big_a * big_a));
}

double p_ba_closed_form(const Params& p) {
    if (p.pi_e == 0.0) return 0.0;
    const auto c = ClosedFormConstants::from(p);
    const double s = c.a1 + c.a2;  // equals k
    return c.a0 / (c.a2 * c.a2) *
           (c.a2 * int_u_exp(s) - int_exp(s) + int_exp(c.a1));
}

double p_ba_printed_appendix(const Params& p) {
    if (p.pi_e == 0.0) return 0.0;
    const auto c = ClosedFormConstants::from(p);
    const double s = c.a1 + c.a2;
    auto bracket = [](double x) {
        return (1.0 - std::exp(x)) / (x * x) + std::exp(x) / x;
    };
    return c.a0 / c.a1 * (std::exp(c.a2) * bracket(c.a2) - bracket(s));
}

double AppendixReport::closed_form_deviation() const { return std::abs(closed_form - quadrature); }
double AppendixReport::printed_deviation() const { return std::abs(printed - quadrature); }

AppendixReport adjudicate_p_a(const Params& p) {
    return {p_a_quadrature(p, 1e-10), p_a_closed_form(p), p_a_printed_appendix(p)};
}

AppendixReport adjudicate_p_ba(const Params& p) {
    return {p_sequence_impl(1, true, p, 1e-10), p_ba_closed_form(p), p_ba_printed_appendix(p)};
}

Params post_b_rebase(double t_b, const Params& p) {
    if (t_b < 0.0) throw std::domain_error("post_b_rebase: t_b must be nonnegative");
    return rebase_at_u(p, std::exp(-p.gamma * t_b));
}

SequenceDescriptor SequenceDescriptor::parse(std::string_view label) {
    SequenceDescriptor seq;
    std::size_t i = 0;
    while (i < label.size() && label[i] == 'B') {
        ++seq.b_jumps;
        ++i;
    }
    if (i + 1 != label.size() || (label[i] != 'A' && label[i] != '0') || seq.b_jumps > 2)
        throw std::invalid_argument("unsupported sequence descriptor: " + std::string(label));
    seq.ends_with_a = label[i] == 'A';
    return seq;
}

std::string SequenceDescriptor::label() const {
    return std::string(static_cast<std::size_t>(b_jumps), 'B') + (ends_with_a ? "A" : "0");
}

double p_sequence(const SequenceDescriptor& seq, const Params& p) {
    p.validate();
    if (seq.b_jumps < 0 || seq.b_jumps > 2)
        throw std::invalid_argument("p_sequence: supported sequences have at most two B clicks");
    return p_sequence_impl(seq.b_jumps, seq.ends_with_a, p, 1e-8);
}

ProbabilityRow accumulate(const Params& p) {
    p.validate();
    ProbabilityRow row;
    row.pi_e = p.pi_e;
    row.mu = p.mu;
    row.p0 = p0(p);
    row.p_a = p_sequence_impl(0, true, p, 1e-8);
    row.p_b0 = p_sequence_impl(1, false, p, 1e-8);
    row.p_ba = p_sequence_impl(1, true, p, 1e-8);
    row.p_bb0 = p_sequence_impl(2, false, p, 1e-8);
    row.p_bba = p_sequence_impl(2, true, p, 1e-8);
    row.p_n = {row.p_a, row.p_a + row.p_ba, row.p_a + row.p_ba + row.p_bba};
    row.q_m = {1.0 - row.p0, 1.0 - row.p0 - row.p_b0, 1.0 - row.p0 - row.p_b0 - row.p_bb0};
    validate(row);
    return row;
}

void validate(const ProbabilityRow& row) {
    // Tolerance headroom for the 1e-8 quadratures feeding the row.
    constexpr double kSlack = 1e-7;
    auto in_unit = [](double v) { return v >= -kSlack && v <= 1.0 + kSlack; };
    const double entries[] = {row.p0,   row.p_a,    row.p_b0,  row.p_ba,  row.p_bb0, row.p_bba,
                              row.p_n[0], row.p_n[1], row.p_n[2], row.q_m[0], row.q_m[1], row.q_m[2]};
    for (double v : entries)
        if (!in_unit(v)) throw std::runtime_error("ProbabilityRow: entry outside [0,1]");
    for (int i = 0; i + 1 < 3; ++i) {
        if (row.p_n[i] > row.p_n[i + 1] + kSlack)
            throw std::runtime_error("ProbabilityRow: p_n must be nondecreasing");
        if (row.q_m[i] < row.q_m[i + 1] - kSlack)
            throw std::runtime_error("ProbabilityRow: q_m must be nonincreasing");
    }
    if (row.p_n[2] > row.q_m[2] + kSlack)
        throw std::runtime_error("ProbabilityRow: p_n must not exceed q_m");
    if (row.p_n[2] > row.pi_e + kSlack)
        throw std::runtime_error("ProbabilityRow: p_n must not exceed pi_e");
}

double counting_conditional_population(double t, const Params& p) {
    if (t < 0.0) throw std::domain_error("counting_conditional_population: t must be nonnegative");
    const double decayed = p.pi_e * std::exp(-p.gamma * t);
    return decayed / (p.pi_g() + decayed);
}

MuOptimum optimize_mu(double pi_e, double gamma) {
    if (!(pi_e > 0.0 && pi_e < 1.0))
        throw std::domain_error("optimize_mu: pi_e must lie in (0,1)");
    auto objective = [&](double mu) { return p_a_closed_form(Params(pi_e, mu, gamma)); };
    const auto best = maximize_scalar(objective, 1e-4, 1.0 - 1e-4, 1e-8);
    return {best.x, best.value};
}

MuOptimum grid_scan_mu(double pi_e, int n_points, double gamma) {
    if (!(pi_e > 0.0 && pi_e < 1.0))
        throw std::domain_error("grid_scan_mu: pi_e must lie in (0,1)");
    auto objective = [&](double mu) { return p_a_closed_form(Params(pi_e, mu, gamma)); };
    const auto best = grid_maximum(objective, 1e-4, 1.0 - 1e-4, n_points);
    return {best.x, best.value};
}

}  // namespace qjump
