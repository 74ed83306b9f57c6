#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qjump/core.hpp"
#include "qjump/detection.hpp"

namespace qjump {

// Simulation control. Steps are shrunk so the per-step click probability
// stays below p_jump_max, which bounds how coarsely click times and the
// adaptive local oscillator are discretized even when the oscillator is
// strong. The sampling grid covers [0, sample_t_max] with n_samples points
// thinned by record_stride; n_samples = 0 disables sampling (classification
// runs need none and run faster without the grid caps on the step size).
struct SimConfig {
    Params params;
    DetectionScheme scheme;
    double t_max = 20.0;
    double p_jump_max = 1e-3;
    long n_traj = 1;
    std::uint64_t master_seed = 0;
    double sample_t_max = 5.0;
    int n_samples = 501;
    int record_stride = 1;
    int n_threads = 0;  // 0 = hardware concurrency

    void validate() const;
    std::vector<double> sample_grid() const;
};

enum class Terminal {
    HeraldedExcited,  // adaptive run ended by a detector A click
    Decayed,          // reached t_max with no heralding click
};

struct Event {
    double t;
    Detector detector;
    double pre_population;
    double post_population;
};

struct Sample {
    double t;
    double population;
};

// One stochastic trajectory: grid samples of the conditional excited
// population, the exact click record, and the sequence classification.
// sequence_label concatenates the detector letters of all clicks and ends
// in '0' when the trajectory decayed unheralded ("A", "BB0", ...).
struct TrajectoryRecord {
    std::vector<Sample> samples;
    std::vector<Event> events;
    Terminal terminal = Terminal::Decayed;
    std::string sequence_label;
    double terminal_time = 0.0;
    double terminal_population = 0.0;
    double max_population = 0.0;  // largest population ever reached
};

// Deterministic function of (cfg, traj_index): the random stream is keyed
// by (master_seed, traj_index) only.
TrajectoryRecord run_trajectory(const SimConfig& cfg, long traj_index);

// Ensemble mean of the conditional excited population on the sampling grid,
// with the sample standard error. Trajectories are independent tasks; the
// reduction runs over fixed-size index blocks combined in index order, so
// results are bit-identical for any thread count. Under the adaptive scheme
// a heralded trajectory contributes its unobserved mean exp(-gamma (t-t_A))
// after the heralding click, which keeps the ensemble average comparable to
// the unconditional decay law.
struct EnsembleStats {
    std::vector<double> t;
    std::vector<double> mean_population;
    std::vector<double> standard_error;
    std::map<std::string, long> sequence_counts;
    long n_traj = 0;
};

EnsembleStats run_ensemble(const SimConfig& cfg);

// Empirical sequence statistics of the adaptive scheme. Decayed
// trajectories whose residual excited population still exceeds the
// truncation tolerance at t_max are counted as undecided rather than
// assigned to a sequence.
struct SequenceEstimate {
    long count = 0;
    double frequency = 0.0;
    double std_error = 0.0;
    double ci95_low = 0.0;
    double ci95_high = 0.0;
};

struct McSequenceTable {
    long n_traj = 0;
    long undecided = 0;
    double truncation_tolerance = 0.0;
    std::map<std::string, SequenceEstimate> sequences;

    // Estimate for a label, a zero-count entry when never observed.
    SequenceEstimate get(const std::string& label) const;
};

McSequenceTable classify_and_estimate(const SimConfig& cfg);

// Fraction of counting-scheme trajectories that contain at least one click.
double counting_jump_fraction(const SimConfig& cfg);

// Fraction of fixed-LO trajectories whose population ever reaches the
// threshold before t_max. Monte Carlo stand-in for the strong-oscillator
// full-excitation probability.
double strong_lo_excursion_probability(const SimConfig& cfg, double threshold = 0.99);

}  // namespace qjump
