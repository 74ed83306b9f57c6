#include "qjump/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "qjump/rng.hpp"

namespace qjump {

namespace {

// Residual population below which a trajectory that reached t_max without a
// heralding click is classified as having decayed to the ground state.
constexpr double kTruncationTolerance = 1e-6;

// Trajectories are processed in fixed-size index blocks and the per-block
// results are combined in block order, so the outcome does not depend on
// how blocks were scheduled across threads.
constexpr long kBlockSize = 256;

long block_count(long n_traj) { return (n_traj + kBlockSize - 1) / kBlockSize; }

void run_blocks(long n_traj, int n_threads,
                const std::function<void(long block, long lo, long hi)>& work) {
    const long blocks = block_count(n_traj);
    int threads = n_threads > 0 ? n_threads
                                : static_cast<int>(std::thread::hardware_concurrency());
    if (threads < 1) threads = 1;
    threads = static_cast<int>(std::min<long>(threads, blocks));

    auto span = [&](long b) {
        work(b, b * kBlockSize, std::min(n_traj, (b + 1) * kBlockSize));
    };
    if (threads == 1) {
        for (long b = 0; b < blocks; ++b) span(b);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) {
        pool.emplace_back([&] {
            try {
                for (long b; (b = next.fetch_add(1)) < blocks;) span(b);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace

void SimConfig::validate() const {
    params.validate();
    if (!(t_max > 0.0)) throw std::domain_error("SimConfig: t_max must be positive");
    if (!(p_jump_max > 0.0 && p_jump_max <= 0.05))
        throw std::domain_error("SimConfig: p_jump_max must lie in (0, 0.05]");
    if (n_traj < 1) throw std::domain_error("SimConfig: n_traj must be at least 1");
    if (n_samples < 0) throw std::domain_error("SimConfig: n_samples must be nonnegative");
    if (n_samples > 0) {
        if (!(sample_t_max > 0.0 && sample_t_max <= t_max))
            throw std::domain_error("SimConfig: sample grid must fit inside (0, t_max]");
        if (record_stride < 1) throw std::domain_error("SimConfig: record_stride must be >= 1");
    }
    if (scheme.kind == DetectionScheme::Kind::Counting && scheme.alpha != complexd{0.0, 0.0})
        throw std::domain_error("SimConfig: the counting scheme fixes alpha = 0");
}

std::vector<double> SimConfig::sample_grid() const {
    std::vector<double> grid;
    if (n_samples <= 0) return grid;
    if (n_samples == 1) return {0.0};
    const double step = sample_t_max / (n_samples - 1);
    for (int i = 0; i < n_samples; i += record_stride)
        grid.push_back(i == n_samples - 1 ? sample_t_max : i * step);
    if ((n_samples - 1) % record_stride != 0) grid.push_back(sample_t_max);
    return grid;
}

TrajectoryRecord run_trajectory(const SimConfig& cfg, long traj_index) {
    cfg.validate();
    const Params& p = cfg.params;
    const std::vector<double> grid = cfg.sample_grid();
    CounterRng rng(cfg.master_seed, static_cast<std::uint64_t>(traj_index));

    EmitterState state = from_populations(p.pi_e);
    TrajectoryRecord rec;
    rec.max_population = state.excited_population();

    std::size_t next_sample = 0;
    if (!grid.empty()) {
        rec.samples.push_back({0.0, state.excited_population()});
        next_sample = 1;
    }

    const bool adaptive = cfg.scheme.kind == DetectionScheme::Kind::AdaptiveLO;
    double t = 0.0;
    while (t < cfg.t_max) {
        complexd alpha{0.0, 0.0};
        if (cfg.scheme.kind == DetectionScheme::Kind::FixedLO) {
            alpha = cfg.scheme.alpha;
        } else if (adaptive && std::norm(state.b) > 0.0) {
            alpha = adaptive_alpha(state, p);
        }

        const RatePair rp = rates(state, alpha, p);
        const double total_rate = rp.total();

        // Step to whichever comes first: the jump-probability cap, the next
        // sampling grid point, or the end of the run. The step target is
        // assigned exactly so grid points are hit without rounding drift.
        double t_target = cfg.t_max;
        if (next_sample < grid.size()) t_target = std::min(t_target, grid[next_sample]);
        if (total_rate > 0.0)
            t_target = std::min(t_target, t + cfg.p_jump_max / total_rate);
        const double dt = t_target - t;

        // Click test: with alpha held over the step, the no-click probability
        // is exactly the squared norm of the un-normalized evolved state, so
        // the click statistics carry no first-order-in-dt bias. p_jump_max
        // only controls how finely click times and the adaptive alpha are
        // discretized.
        const NoJumpResult evolved = no_jump_step(state, alpha, p, dt);
        bool heralded = false;
        if (rng.uniform() >= evolved.survival) {
            const Detector detector =
                rng.uniform() * total_rate < rp.rate_a ? Detector::A : Detector::B;
            auto [outcome, post] = apply_jump(state, detector, alpha, p);
            state = post;
            rec.events.push_back({t_target, detector, outcome.pre_population,
                                  outcome.post_population});
            rec.max_population = std::max(rec.max_population, outcome.post_population);
            heralded = adaptive && detector == Detector::A;
        } else {
            state = evolved.state;
        }
        t = t_target;
        if (next_sample < grid.size() && t == grid[next_sample]) {
            rec.samples.push_back({t, state.excited_population()});
            ++next_sample;
        }
        if (heralded) {
            rec.terminal = Terminal::HeraldedExcited;
            break;
        }
    }

    rec.terminal_time = t;
    rec.terminal_population = state.excited_population();
    rec.sequence_label.reserve(rec.events.size() + 1);
    for (const Event& e : rec.events) rec.sequence_label.push_back(detector_letter(e.detector));
    if (rec.terminal == Terminal::Decayed) rec.sequence_label.push_back('0');
    return rec;
}

EnsembleStats run_ensemble(const SimConfig& cfg) {
    cfg.validate();
    const std::vector<double> grid = cfg.sample_grid();
    const std::size_t m = grid.size();
    const double gamma = cfg.params.gamma;

    struct Partial {
        std::vector<double> sum, sum_sq;
        std::map<std::string, long> counts;
    };
    std::vector<Partial> parts(static_cast<std::size_t>(block_count(cfg.n_traj)));
    run_blocks(cfg.n_traj, cfg.n_threads, [&](long block, long lo, long hi) {
        Partial part;
        part.sum.assign(m, 0.0);
        part.sum_sq.assign(m, 0.0);
        for (long i = lo; i < hi; ++i) {
            const TrajectoryRecord rec = run_trajectory(cfg, i);
            std::size_t j = 0;
            for (; j < rec.samples.size(); ++j) {
                const double v = rec.samples[j].population;
                part.sum[j] += v;
                part.sum_sq[j] += v * v;
            }
            if (j < m) {
                // Heralded trajectory: after the A click the excited emitter
                // is no longer monitored and its unobserved mean decays
                // exponentially from the heralding time.
                const Event& herald = rec.events.back();
                for (; j < m; ++j) {
                    const double v =
                        herald.post_population * std::exp(-gamma * (grid[j] - herald.t));
                    part.sum[j] += v;
                    part.sum_sq[j] += v * v;
                }
            }
            ++part.counts[rec.sequence_label];
        }
        parts[static_cast<std::size_t>(block)] = std::move(part);
    });

    EnsembleStats stats;
    stats.t = grid;
    stats.n_traj = cfg.n_traj;
    stats.mean_population.assign(m, 0.0);
    stats.standard_error.assign(m, 0.0);
    std::vector<double> sum(m, 0.0), sum_sq(m, 0.0);
    for (const Partial& part : parts) {
        for (std::size_t j = 0; j < m; ++j) {
            sum[j] += part.sum[j];
            sum_sq[j] += part.sum_sq[j];
        }
        for (const auto& [label, count] : part.counts) stats.sequence_counts[label] += count;
    }
    const double n = static_cast<double>(cfg.n_traj);
    for (std::size_t j = 0; j < m; ++j) {
        const double mean = sum[j] / n;
        stats.mean_population[j] = mean;
        if (cfg.n_traj > 1) {
            const double var = std::max(0.0, (sum_sq[j] - n * mean * mean) / (n - 1.0));
            stats.standard_error[j] = std::sqrt(var / n);
        }
    }
    return stats;
}

SequenceEstimate McSequenceTable::get(const std::string& label) const {
    const auto it = sequences.find(label);
    return it == sequences.end() ? SequenceEstimate{} : it->second;
}

McSequenceTable classify_and_estimate(const SimConfig& cfg) {
    if (cfg.scheme.kind != DetectionScheme::Kind::AdaptiveLO)
        throw std::invalid_argument("classify_and_estimate: requires the adaptive scheme");
    SimConfig run = cfg;
    run.n_samples = 0;  // label statistics need no sampling grid
    run.validate();

    struct Partial {
        std::map<std::string, long> counts;
        long undecided = 0;
    };
    std::vector<Partial> parts(static_cast<std::size_t>(block_count(run.n_traj)));
    run_blocks(run.n_traj, run.n_threads, [&](long block, long lo, long hi) {
        Partial part;
        for (long i = lo; i < hi; ++i) {
            const TrajectoryRecord rec = run_trajectory(run, i);
            if (rec.terminal == Terminal::Decayed &&
                rec.terminal_population > kTruncationTolerance) {
                ++part.undecided;
            } else {
                ++part.counts[rec.sequence_label];
            }
        }
        parts[static_cast<std::size_t>(block)] = std::move(part);
    });

    McSequenceTable table;
    table.n_traj = run.n_traj;
    table.truncation_tolerance = kTruncationTolerance;
    std::map<std::string, long> counts;
    for (const Partial& part : parts) {
        table.undecided += part.undecided;
        for (const auto& [label, count] : part.counts) counts[label] += count;
    }
    const double n = static_cast<double>(run.n_traj);
    for (const auto& [label, count] : counts) {
        SequenceEstimate est;
        est.count = count;
        est.frequency = static_cast<double>(count) / n;
        est.std_error = std::sqrt(est.frequency * (1.0 - est.frequency) / n);
        est.ci95_low = est.frequency - 1.96 * est.std_error;
        est.ci95_high = est.frequency + 1.96 * est.std_error;
        table.sequences.emplace(label, est);
    }
    return table;
}

double counting_jump_fraction(const SimConfig& cfg) {
    if (cfg.scheme.kind != DetectionScheme::Kind::Counting)
        throw std::invalid_argument("counting_jump_fraction: requires the counting scheme");
    SimConfig run = cfg;
    run.n_samples = 0;
    run.validate();

    std::vector<long> jumped(static_cast<std::size_t>(block_count(run.n_traj)), 0);
    run_blocks(run.n_traj, run.n_threads, [&](long block, long lo, long hi) {
        long local = 0;
        for (long i = lo; i < hi; ++i)
            if (!run_trajectory(run, i).events.empty()) ++local;
        jumped[static_cast<std::size_t>(block)] = local;
    });
    long total = 0;
    for (long c : jumped) total += c;
    return static_cast<double>(total) / static_cast<double>(run.n_traj);
}

double strong_lo_excursion_probability(const SimConfig& cfg, double threshold) {
    if (cfg.scheme.kind != DetectionScheme::Kind::FixedLO)
        throw std::invalid_argument("strong_lo_excursion_probability: requires a fixed LO");
    if (!(threshold > 0.0 && threshold <= 1.0))
        throw std::domain_error("strong_lo_excursion_probability: threshold must lie in (0,1]");
    SimConfig run = cfg;
    run.n_samples = 0;
    run.validate();

    std::vector<long> exceeded(static_cast<std::size_t>(block_count(run.n_traj)), 0);
    run_blocks(run.n_traj, run.n_threads, [&](long block, long lo, long hi) {
        long local = 0;
        for (long i = lo; i < hi; ++i)
            if (run_trajectory(run, i).max_population >= threshold) ++local;
        exceeded[static_cast<std::size_t>(block)] = local;
    });
    long total = 0;
    for (long c : exceeded) total += c;
    return static_cast<double>(total) / static_cast<double>(run.n_traj);
}

}  // namespace qjump
