#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oscp/errors.hpp"

namespace oscp {

/// Smallest p with ceil((1-epsilon)(n+1)) = p and p <= n.
/// Throws InsufficientData (with the minimal sufficient n) when p > n.
int quantile_index(double epsilon, long long n);

/// Row-selection instance: row i is the normed-residual-series of one
/// calibration trajectory, column t a time step. p1 rows must be covered.
struct SelectionProblem {
    Eigen::MatrixXd E; // n1 x T, nonnegative
    int p1 = 1;

    Eigen::Index rows() const { return E.rows(); }
    Eigen::Index cols() const { return E.cols(); }
};

void validate_selection_problem(const SelectionProblem& problem);

/// Optimal per-time radii with the selected-row certificate.
/// Invariants: every selected row is componentwise <= r; r[t] is exactly the
/// columnwise max of the selected rows; cost = sum(r).
struct RadiusProfile {
    std::vector<double> r;
    std::vector<int> selected; // sorted ascending
    double cost = 0.0;
    bool provably_optimal = false;
};

/// Constraint-reduction sets:
///   S1 rows are componentwise <= the per-column p1-th order statistic
///   (always coverable), S2 rows exceed a feasible radius vector everywhere
///   (never part of an optimum). S is everything else.
struct PruneResult {
    std::vector<int> s1;
    std::vector<int> s2;
    std::vector<int> s;
    std::vector<double> r_feas;
    std::vector<double> coordinate_quantile;
};

struct SolveOptions {
    bool use_pruning = true;
    long long node_limit = 10'000'000;
};

struct SolveStats {
    long long nodes = 0;
    double millis = 0.0;
    bool node_limit_hit = false;
};

struct SolveResult {
    RadiusProfile profile;
    SolveStats stats;
    std::optional<PruneResult> prune; // present when pruning was used
};

/// Entry t is the p1-th smallest value of column t (1-indexed order statistic).
std::vector<double> coordinatewise_quantile(const Eigen::MatrixXd& E, int p1);

struct HeuristicSolution {
    std::vector<double> r_feas;
    std::vector<int> selected; // sorted ascending
};

/// Sort rows by TotalRes(i) = sum_t E(i,t) ascending (ties by row index),
/// take the first p1, set r_feas to their columnwise max. Always feasible.
HeuristicSolution heuristic_feasible(const SelectionProblem& problem);

/// S1/S2/S for the given feasible radius vector.
PruneResult compute_prune_sets(const SelectionProblem& problem, const std::vector<double>& r_feas);

/// Exact minimal-sum-of-radii solve via heuristic + S1/S2 reduction +
/// depth-first branch and bound. When the reduction alone certifies the
/// optimum (|S1| >= p1), the radii are the coordinatewise quantiles and the
/// certificate is the p1 smallest-index rows of S1. Cost ties are broken by
/// the lexicographically smallest sorted certificate within the searched
/// family; the result is deterministic.
/// On node-limit the best incumbent is returned with provably_optimal=false.
SolveResult solve_optimal_radii(const SelectionProblem& problem, const SolveOptions& options = {});

/// Independent oracle: enumerate all size-p1 subsets (lexicographic order),
/// same tie-break. Throws EnumerationCapExceeded when C(n1, p1) > cap.
RadiusProfile brute_force_radii(const SelectionProblem& problem, long long enumeration_cap = 2'000'000);

/// Emit the instance as a CPLEX-LP-format mixed-integer program (big-M
/// linearization) for cross-checking against external solvers. With
/// pruned=true the S1/S2-reduced program is written instead; in the
/// |S1| >= p1 corner case the radii are fixed to the coordinatewise
/// quantiles.
std::string export_milp(const SelectionProblem& problem, bool pruned);

} // namespace oscp
