#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "spde/solver.hpp"
#include "spde/verifier.hpp"

namespace spde {

/// Monte Carlo experiments tolerate a fraction of failed paths (reported);
/// acceptance configs set it to 0.
struct FailurePolicy {
    double max_failed_fraction = 0.1;
};

struct SeriesPoint {
    double t = 0.0;
    double mean = 0.0;
    double half_width = 0.0; // 95% CI of the paired drift mean(t) - mean(0)
};

struct ContractionResult {
    std::vector<SeriesPoint> series;
    int paths_succeeded = 0;
    std::vector<std::uint64_t> failed_paths;
    /// max over output times of mean(t) - mean(0); contraction holds when this
    /// stays below the tolerance model.
    double worst_drift = 0.0;
};

/// Coupled two-run experiment for E int (u1 - u2)+ dx: both runs share the
/// noise path per path index. Emits the series at every `output_every` steps.
ContractionResult contraction_experiment(const ProblemSpec& problem,
                                         const std::function<double(double)>& u01,
                                         const std::function<double(double)>& u02,
                                         const SolverConfig& config, int n_paths,
                                         std::uint64_t master_seed, int threads = 0,
                                         int output_every = 0,
                                         FailurePolicy policy = {});

/// Right-hand side of the Kato inequality for a trajectory pair (Young
/// measures collapsed to Dirac masses at the two computed solutions).
struct KatoReport {
    double time_term = 0.0;      // int (u-v)+ dt_psi
    double flux_term = 0.0;      // -int F+(u,v) grad psi
    double diffusion_term = 0.0; // int Phi+(u,v) lap psi
    double initial_term = 0.0;   // int (u0-v0)+ psi(0)
    double total() const {
        return time_term + flux_term + diffusion_term + initial_term;
    }
};

KatoReport kato_report(const Trajectory& u, const Trajectory& v,
                       const TestFunction& psi, const ProblemSpec& problem);

struct ConvergenceRow {
    double eps_hi = 0.0;
    double eps_lo = 0.0;
    double diff_p1 = 0.0; // mean over paths of ||u_hi - u_lo||_L1(K)
    double diff_p2 = 0.0; // same in L2
};

/// Interior space-time window for the convergence study (middle half of the
/// domain, full time range).
struct InteriorWindow {
    double x_lo_fraction = 0.25;
    double x_hi_fraction = 0.75;
};

/// Pairwise L^p differences of coupled viscous runs along a decreasing
/// viscosity sequence; rows follow consecutive (eps_i, eps_{i+1}) pairs.
std::vector<ConvergenceRow> viscosity_convergence(
    const ProblemSpec& problem, const std::vector<double>& eps_seq,
    const SolverConfig& config, int n_paths, std::uint64_t master_seed,
    int threads = 0, InteriorWindow window = {}, FailurePolicy policy = {});

/// A-priori statistics of an ensemble at one viscosity, streamed path by path.
AprioriStatistics apriori_experiment(const ProblemSpec& problem,
                                     const SolverConfig& config, int n_paths,
                                     std::uint64_t master_seed, int threads = 0);

} // namespace spde
