#include "oscp/selector.hpp"

#include "oscp/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace oscp {

int quantile_index(double epsilon, long long n) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw InvalidArgument("epsilon must lie in (0, 1)");
    }
    if (n < 1) {
        throw InvalidArgument("n must be positive");
    }
    const double raw = std::ceil((1.0 - epsilon) * static_cast<double>(n + 1));
    const long long p = static_cast<long long>(raw);
    if (p > n) {
        long long m = std::max<long long>(1, static_cast<long long>(std::ceil(1.0 / epsilon)) - 2);
        while (static_cast<long long>(std::ceil((1.0 - epsilon) * static_cast<double>(m + 1))) > m) {
            ++m;
        }
        throw InsufficientData("quantile index " + std::to_string(p) + " exceeds sample count " +
                                   std::to_string(n) + " at epsilon " + std::to_string(epsilon) +
                                   "; need at least n = " + std::to_string(m),
                               m, n, epsilon);
    }
    return static_cast<int>(p);
}

void validate_selection_problem(const SelectionProblem& problem) {
    const Eigen::Index n1 = problem.rows();
    const Eigen::Index T = problem.cols();
    if (n1 < 1 || T < 1) {
        throw InvalidArgument("selection problem needs at least one row and one column");
    }
    if (problem.p1 < 1 || problem.p1 > n1) {
        throw InvalidArgument("p1 = " + std::to_string(problem.p1) + " outside [1, " +
                              std::to_string(n1) + "]");
    }
    check_finite(problem.E, "selection matrix");
    if ((problem.E.array() < 0.0).any()) {
        throw InvalidArgument("selection matrix entries must be nonnegative");
    }
}

std::vector<double> coordinatewise_quantile(const Eigen::MatrixXd& E, int p1) {
    const Eigen::Index T = E.cols();
    std::vector<double> q(static_cast<std::size_t>(T));
    std::vector<double> column(static_cast<std::size_t>(E.rows()));
    for (Eigen::Index t = 0; t < T; ++t) {
        for (Eigen::Index i = 0; i < E.rows(); ++i) column[static_cast<std::size_t>(i)] = E(i, t);
        auto nth = column.begin() + (p1 - 1);
        std::nth_element(column.begin(), nth, column.end());
        q[static_cast<std::size_t>(t)] = *nth;
    }
    return q;
}

namespace {

// Row order used by the heuristic: TotalRes ascending, ties by row index.
// `descending` flips the primary key (ties still ascending by index); the
// search decides high-impact rows first, which lets the bound engage near
// the root. The returned profile does not depend on this order: pruning is
// strict, so every optimal leaf survives and ties are resolved by the
// lexicographic rule after the search.
std::vector<int> total_res_order(const Eigen::MatrixXd& E, const std::vector<int>& rows,
                                 bool descending = false) {
    std::vector<double> total(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        double s = 0.0;
        for (Eigen::Index t = 0; t < E.cols(); ++t) s += E(rows[k], t);
        total[k] = s;
    }
    std::vector<int> order(rows.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (total[a] != total[b]) return descending ? total[a] > total[b] : total[a] < total[b];
        return rows[a] < rows[b];
    });
    std::vector<int> out(rows.size());
    for (std::size_t k = 0; k < rows.size(); ++k) out[k] = rows[order[k]];
    return out;
}

std::vector<double> columnwise_max(const Eigen::MatrixXd& E, const std::vector<int>& rows) {
    std::vector<double> r(static_cast<std::size_t>(E.cols()), 0.0);
    for (Eigen::Index t = 0; t < E.cols(); ++t) {
        double m = 0.0;
        for (int i : rows) m = std::max(m, E(i, t));
        r[static_cast<std::size_t>(t)] = m;
    }
    return r;
}

double sum_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

struct LocalSearchResult {
    std::vector<int> selected;
    double cost = 0.0;
};

// Deterministic first-improvement swap descent from the heuristic solution.
// The cost seeds the search's upper bound (never its certificate, so cost
// ties still resolve to the lexicographic minimum of the searched family);
// the subset itself only serves as a fallback when the node limit is hit.
LocalSearchResult improve_incumbent(const Eigen::MatrixXd& E, const std::vector<int>& heuristic_selected) {
    const Eigen::Index T = E.cols();
    std::vector<char> in_set(static_cast<std::size_t>(E.rows()), 0);
    for (int i : heuristic_selected) in_set[static_cast<std::size_t>(i)] = 1;
    std::vector<int> selected = heuristic_selected;
    double cost = sum_of(columnwise_max(E, selected));

    for (int pass = 0; pass < 8; ++pass) {
        bool improved = false;
        for (std::size_t slot = 0; slot < selected.size(); ++slot) {
            const int out_row = selected[slot];
            in_set[static_cast<std::size_t>(out_row)] = 0;
            std::vector<double> rest(static_cast<std::size_t>(T), 0.0);
            for (std::size_t other = 0; other < selected.size(); ++other) {
                if (other == slot) continue;
                for (Eigen::Index t = 0; t < T; ++t) {
                    rest[static_cast<std::size_t>(t)] =
                        std::max(rest[static_cast<std::size_t>(t)], E(selected[other], t));
                }
            }
            int best_row = out_row;
            double best_cost = cost;
            for (Eigen::Index cand = 0; cand < E.rows(); ++cand) {
                if (in_set[static_cast<std::size_t>(cand)]) continue;
                double c = 0.0;
                for (Eigen::Index t = 0; t < T; ++t) {
                    c += std::max(rest[static_cast<std::size_t>(t)], E(cand, t));
                }
                if (c < best_cost) {
                    best_cost = c;
                    best_row = static_cast<int>(cand);
                }
            }
            if (best_row != out_row) {
                selected[slot] = best_row;
                cost = best_cost;
                improved = true;
            }
            in_set[static_cast<std::size_t>(selected[slot])] = 1;
        }
        if (!improved) break;
    }
    std::sort(selected.begin(), selected.end());
    return {std::move(selected), cost};
}

RadiusProfile make_profile(const Eigen::MatrixXd& E, std::vector<int> selected, bool optimal) {
    std::sort(selected.begin(), selected.end());
    RadiusProfile profile;
    profile.r = columnwise_max(E, selected);
    profile.cost = sum_of(profile.r);
    profile.selected = std::move(selected);
    profile.provably_optimal = optimal;
    return profile;
}

// Per-column order statistics over candidate-list suffixes. Any k rows
// drawn from positions >= pos push the column-t maximum to at least the
// k-th smallest value of that suffix, which tightens the node bound far
// beyond the partial columnwise maxima alone. Built only when the table
// fits comfortably in memory; the search is exact either way.
class SuffixOrderStats {
public:
    SuffixOrderStats(const Eigen::MatrixXd& E, const std::vector<int>& candidates) {
        const std::size_t n = candidates.size();
        const std::size_t T = static_cast<std::size_t>(E.cols());

        // Runs of adjacent columns; residual norms of neighbouring time
        // steps correlate, so one row tends to dominate a whole run and the
        // k-th smallest run-sum is a nearly exact bound for it.
        const int group_size = std::max(1, static_cast<int>(std::lround(std::sqrt(static_cast<double>(T)))));
        for (int lo = 0; lo < static_cast<int>(T); lo += group_size) {
            groups_.emplace_back(lo, std::min(static_cast<int>(T), lo + group_size));
        }
        const std::size_t columns = T + groups_.size() + 1;

        if (n * n * columns / 2 > 20'000'000) {
            groups_.clear();
            return; // fall back to the plain bound
        }
        table_.resize(columns);
        for (std::size_t c = 0; c < columns; ++c) {
            table_[c].resize(n + 1);
            for (std::size_t pos = n; pos-- > 0;) {
                std::vector<double>& sorted = table_[c][pos];
                const std::vector<double>& prev = table_[c][pos + 1];
                double v;
                if (c < T) {
                    v = E(candidates[pos], static_cast<Eigen::Index>(c));
                } else if (c < T + groups_.size()) {
                    const auto [lo, hi] = groups_[c - T];
                    v = 0.0;
                    for (int t = lo; t < hi; ++t) v += E(candidates[pos], t);
                } else {
                    v = E.row(candidates[pos]).sum(); // TotalRes pseudo-column
                }
                sorted.reserve(prev.size() + 1);
                auto it = std::upper_bound(prev.begin(), prev.end(), v);
                sorted.insert(sorted.end(), prev.begin(), it);
                sorted.push_back(v);
                sorted.insert(sorted.end(), it, prev.end());
            }
        }
        T_ = static_cast<int>(T);
        enabled_ = true;
    }

    bool enabled() const { return enabled_; }

    const std::vector<std::pair<int, int>>& groups() const { return groups_; }

    /// k-th smallest (1-indexed) value at column t among positions >= pos.
    double kth(int pos, int t, int k) const {
        return table_[static_cast<std::size_t>(t)][static_cast<std::size_t>(pos)]
                     [static_cast<std::size_t>(k - 1)];
    }

    /// k-th smallest sum over group g among positions >= pos.
    double kth_group(int pos, int g, int k) const {
        return table_[static_cast<std::size_t>(T_ + g)][static_cast<std::size_t>(pos)]
                     [static_cast<std::size_t>(k - 1)];
    }

    /// k-th smallest TotalRes among positions >= pos.
    double kth_total(int pos, int k) const {
        return table_.back()[static_cast<std::size_t>(pos)][static_cast<std::size_t>(k - 1)];
    }

private:
    std::vector<std::vector<std::vector<double>>> table_;
    std::vector<std::pair<int, int>> groups_;
    int T_ = 0;
    bool enabled_ = false;
};

// Depth-first exact search: pick `need` rows from `candidates` (already in
// search order) on top of a fixed floor. Cost ties are resolved toward the
// lexicographically smallest sorted certificate, so a node is pruned only
// when its bound strictly exceeds the incumbent cost.
class ExactSelection {
public:
    ExactSelection(const Eigen::MatrixXd& E, std::vector<int> candidates, int need,
                   std::vector<double> floor_radii, std::vector<int> mandatory,
                   double incumbent_cost, long long node_limit)
        : E_(E),
          candidates_(std::move(candidates)),
          need_(need),
          floor_(std::move(floor_radii)),
          mandatory_(std::move(mandatory)),
          incumbent_cost_(incumbent_cost),
          node_limit_(node_limit),
          T_(static_cast<int>(E.cols())),
          stats_(E, candidates_) {
        max_stack_.assign(static_cast<std::size_t>(need_ + 1) * T_, 0.0);
        std::copy(floor_.begin(), floor_.end(), max_stack_.begin());
        chosen_.reserve(static_cast<std::size_t>(need_));
    }

    void run() {
        dfs(0, 0, sum_of(floor_));
    }

    bool found() const { return has_best_; }
    const std::vector<int>& best_set() const { return best_set_; }
    long long nodes() const { return nodes_; }
    bool limit_hit() const { return limit_hit_; }

private:
    // Lower bound over all completions choosing k rows from positions >= pos
    // on top of the maxima in `cur`. Per group of columns g the final maxima
    // satisfy both
    //   sum_{t in g} max_t >= sum_{t in g} max(cur_t, k-th smallest of pool at t)
    //   sum_{t in g} max_t >= max_{i chosen} sum_{t in g} e_it
    //                      >= k-th smallest group-sum of the pool,
    // and the group contributions add up because they charge disjoint
    // columns. The whole-row TotalRes statistic is the single-group variant;
    // the maximum of the two partitions is taken.
    double pool_bound(const double* cur, int pos, int k) const {
        double bound = 0.0;
        int g = 0;
        for (const auto& [lo, hi] : stats_.groups()) {
            double per_column = 0.0;
            for (int t = lo; t < hi; ++t) {
                per_column += std::max(cur[t], stats_.kth(pos, t, k));
            }
            bound += std::max(per_column, stats_.kth_group(pos, g, k));
            ++g;
        }
        return std::max(bound, stats_.kth_total(pos, k));
    }

    void dfs(int pos, int depth, double bound) {
        if (depth == need_) {
            take_leaf(bound);
            return;
        }
        const double* cur = &max_stack_[static_cast<std::size_t>(depth) * T_];
        double* next = &max_stack_[static_cast<std::size_t>(depth + 1) * T_];
        const int n = static_cast<int>(candidates_.size());
        const int k = need_ - depth;
        // The first included candidate may sit anywhere in [pos, p_hi].
        // pool_bound is non-decreasing in the start position (smaller pools
        // have larger order statistics), so the viable range is the prefix
        // [pos, p_start]; it is found by bisection. Scanning from p_start
        // downward tries exclusion-heavy branches first, which reach strong
        // incumbents early when a few expensive rows dominate the cost.
        int p_start = n - k;
        if (stats_.enabled()) {
            int lo = pos, hi = p_start;
            if (pool_bound(cur, lo, k) > incumbent_cost_) return;
            while (lo < hi) {
                const int mid = lo + (hi - lo + 1) / 2;
                if (pool_bound(cur, mid, k) > incumbent_cost_) {
                    hi = mid - 1;
                } else {
                    lo = mid;
                }
            }
            p_start = lo;
        }
        for (int p = p_start; p >= pos; --p) {
            if (limit_hit_) return;
            if (++nodes_ > node_limit_) {
                limit_hit_ = true;
                return;
            }
            const int row = candidates_[static_cast<std::size_t>(p)];
            double next_bound = 0.0;
            for (int t = 0; t < T_; ++t) {
                const double m = std::max(cur[t], E_(row, t));
                next[t] = m;
                next_bound += m;
            }
            if (next_bound > incumbent_cost_) continue;
            if (k > 1 && stats_.enabled() &&
                pool_bound(next, p + 1, k - 1) > incumbent_cost_) {
                continue;
            }
            chosen_.push_back(row);
            dfs(p + 1, depth + 1, next_bound);
            chosen_.pop_back();
            if (limit_hit_) return;
        }
        (void)bound;
    }

    void take_leaf(double cost) {
        std::vector<int> full = mandatory_;
        full.insert(full.end(), chosen_.begin(), chosen_.end());
        std::sort(full.begin(), full.end());
        if (!has_best_ || cost < incumbent_cost_ ||
            (cost == incumbent_cost_ &&
             std::lexicographical_compare(full.begin(), full.end(), best_set_.begin(), best_set_.end()))) {
            best_set_ = std::move(full);
            incumbent_cost_ = cost;
            has_best_ = true;
        }
    }

    const Eigen::MatrixXd& E_;
    std::vector<int> candidates_;
    int need_;
    std::vector<double> floor_;
    std::vector<int> mandatory_;
    double incumbent_cost_;
    long long node_limit_;
    int T_;
    long long nodes_ = 0;
    bool limit_hit_ = false;
    bool has_best_ = false;
    std::vector<int> best_set_;
    std::vector<int> chosen_;
    std::vector<double> max_stack_;
    SuffixOrderStats stats_;
};

} // namespace

HeuristicSolution heuristic_feasible(const SelectionProblem& problem) {
    validate_selection_problem(problem);
    std::vector<int> all(static_cast<std::size_t>(problem.rows()));
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> order = total_res_order(problem.E, all);
    HeuristicSolution sol;
    sol.selected.assign(order.begin(), order.begin() + problem.p1);
    std::sort(sol.selected.begin(), sol.selected.end());
    sol.r_feas = columnwise_max(problem.E, sol.selected);
    return sol;
}

PruneResult compute_prune_sets(const SelectionProblem& problem, const std::vector<double>& r_feas) {
    validate_selection_problem(problem);
    if (static_cast<Eigen::Index>(r_feas.size()) != problem.cols()) {
        throw DimensionMismatch("r_feas length does not match the number of time steps");
    }
    PruneResult result;
    result.r_feas = r_feas;
    result.coordinate_quantile = coordinatewise_quantile(problem.E, problem.p1);
    const Eigen::Index n1 = problem.rows();
    const Eigen::Index T = problem.cols();
    for (Eigen::Index i = 0; i < n1; ++i) {
        bool below_quantile = true;
        bool above_feasible = true;
        for (Eigen::Index t = 0; t < T; ++t) {
            const double e = problem.E(i, t);
            if (e > result.coordinate_quantile[static_cast<std::size_t>(t)]) below_quantile = false;
            if (e <= r_feas[static_cast<std::size_t>(t)]) above_feasible = false;
        }
        if (below_quantile) {
            result.s1.push_back(static_cast<int>(i));
        } else if (above_feasible) {
            result.s2.push_back(static_cast<int>(i));
        } else {
            result.s.push_back(static_cast<int>(i));
        }
    }
    return result;
}

SolveResult solve_optimal_radii(const SelectionProblem& problem, const SolveOptions& options) {
    validate_selection_problem(problem);
    const auto start = std::chrono::steady_clock::now();
    SolveResult result;

    const HeuristicSolution heur = heuristic_feasible(problem);
    const double heuristic_cost = sum_of(heur.r_feas);

    std::vector<int> candidates;
    std::vector<int> mandatory;
    std::vector<double> floor_radii(static_cast<std::size_t>(problem.cols()), 0.0);
    int need = problem.p1;

    if (options.use_pruning) {
        PruneResult prune = compute_prune_sets(problem, heur.r_feas);
        if (static_cast<int>(prune.s1.size()) >= problem.p1) {
            // Reduction already certifies the optimum: the coordinatewise
            // quantiles are optimal and any p1 rows of S1 witness them.
            std::vector<int> selected(prune.s1.begin(), prune.s1.begin() + problem.p1);
            result.profile = make_profile(problem.E, std::move(selected), true);
            result.prune = std::move(prune);
            result.stats.millis = std::chrono::duration<double, std::milli>(
                                      std::chrono::steady_clock::now() - start)
                                      .count();
            return result;
        }
        mandatory = prune.s1;
        candidates = total_res_order(problem.E, prune.s, true);
        floor_radii = columnwise_max(problem.E, mandatory);
        need = problem.p1 - static_cast<int>(mandatory.size());
        result.prune = std::move(prune);
    } else {
        std::vector<int> all(static_cast<std::size_t>(problem.rows()));
        std::iota(all.begin(), all.end(), 0);
        candidates = total_res_order(problem.E, all, true);
    }

    const LocalSearchResult local = improve_incumbent(problem.E, heur.selected);
    const double incumbent_cost = std::min(heuristic_cost, local.cost);
    ExactSelection search(problem.E, std::move(candidates), need, std::move(floor_radii),
                          mandatory, incumbent_cost, options.node_limit);
    search.run();

    result.stats.nodes = search.nodes();
    result.stats.node_limit_hit = search.limit_hit();
    if (search.found() && !search.limit_hit()) {
        result.profile = make_profile(problem.E, search.best_set(), true);
    } else {
        // Node limit: return the best known feasible certificate.
        RadiusProfile best = make_profile(problem.E, local.selected, false);
        if (search.found()) {
            RadiusProfile leaf = make_profile(problem.E, search.best_set(), false);
            if (leaf.cost < best.cost) best = std::move(leaf);
        }
        result.profile = std::move(best);
    }
    result.stats.millis =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return result;
}

RadiusProfile brute_force_radii(const SelectionProblem& problem, long long enumeration_cap) {
    validate_selection_problem(problem);
    const int n1 = static_cast<int>(problem.rows());
    const int p1 = problem.p1;

    double count = 1.0;
    for (int k = 1; k <= p1; ++k) {
        count *= static_cast<double>(n1 - p1 + k) / static_cast<double>(k);
        if (count > 1e18) break;
    }
    if (count > static_cast<double>(enumeration_cap)) {
        throw EnumerationCapExceeded("C(" + std::to_string(n1) + ", " + std::to_string(p1) +
                                     ") exceeds the enumeration cap of " +
                                     std::to_string(enumeration_cap) + " subsets");
    }

    std::vector<int> idx(static_cast<std::size_t>(p1));
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<int> best;
    double best_cost = 0.0;
    std::vector<double> maxes(static_cast<std::size_t>(problem.cols()));
    while (true) {
        std::fill(maxes.begin(), maxes.end(), 0.0);
        for (int i : idx) {
            for (Eigen::Index t = 0; t < problem.cols(); ++t) {
                maxes[static_cast<std::size_t>(t)] =
                    std::max(maxes[static_cast<std::size_t>(t)], problem.E(i, t));
            }
        }
        const double cost = sum_of(maxes);
        // Enumeration order is lexicographic, so keeping strict improvements
        // leaves the lexicographically smallest subset among cost ties.
        if (best.empty() || cost < best_cost) {
            best = idx;
            best_cost = cost;
        }
        int j = p1 - 1;
        while (j >= 0 && idx[static_cast<std::size_t>(j)] == n1 - p1 + j) --j;
        if (j < 0) break;
        ++idx[static_cast<std::size_t>(j)];
        for (int k = j + 1; k < p1; ++k) {
            idx[static_cast<std::size_t>(k)] = idx[static_cast<std::size_t>(k - 1)] + 1;
        }
    }
    return make_profile(problem.E, best, true);
}

namespace {

std::string fmt_full(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void wrap_terms(std::ostringstream& out, const std::vector<std::string>& terms) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
        if (k > 0 && k % 8 == 0) out << "\n   ";
        out << (k == 0 ? "" : " ") << terms[k];
    }
}

} // namespace

std::string export_milp(const SelectionProblem& problem, bool pruned) {
    validate_selection_problem(problem);
    const int n1 = static_cast<int>(problem.rows());
    const int T = static_cast<int>(problem.cols());
    const int p1 = problem.p1;

    std::ostringstream out;
    out << "\\ oscp selection instance n1=" << n1 << " T=" << T << " p1=" << p1 << "\n";

    std::vector<double> big_m(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) big_m[static_cast<std::size_t>(t)] = problem.E.col(t).maxCoeff();

    std::vector<std::string> objective_terms;
    for (int t = 0; t < T; ++t) objective_terms.push_back((t == 0 ? "r_" : "+ r_") + std::to_string(t));

    if (pruned) {
        const HeuristicSolution heur = heuristic_feasible(problem);
        const PruneResult prune = compute_prune_sets(problem, heur.r_feas);
        out << "\\ pruned reduction: |S1|=" << prune.s1.size() << " |S2|=" << prune.s2.size()
            << " |S|=" << prune.s.size() << "\n";

        if (static_cast<int>(prune.s1.size()) >= p1) {
            out << "\\ corner case |S1| >= p1: radii fixed to the coordinatewise quantiles\n";
            out << "Minimize\n obj: ";
            wrap_terms(out, objective_terms);
            out << "\nSubject To\n";
            for (int t = 0; t < T; ++t) {
                out << " fix_" << t << ": r_" << t << " = "
                    << fmt_full(prune.coordinate_quantile[static_cast<std::size_t>(t)]) << "\n";
            }
            out << "End\n";
            return out.str();
        }

        out << "Minimize\n obj: ";
        wrap_terms(out, objective_terms);
        out << "\nSubject To\n";
        for (int t = 0; t < T; ++t) {
            for (int i : prune.s) {
                const double m = big_m[static_cast<std::size_t>(t)];
                out << " cover_t" << t << "_i" << i << ": - r_" << t << " + " << fmt_full(m)
                    << " b_" << i << " <= " << fmt_full(m - problem.E(i, t)) << "\n";
            }
        }
        std::vector<std::string> card_terms;
        for (std::size_t k = 0; k < prune.s.size(); ++k) {
            card_terms.push_back((k == 0 ? "b_" : "+ b_") + std::to_string(prune.s[k]));
        }
        out << " card: ";
        wrap_terms(out, card_terms);
        out << " = " << (p1 - static_cast<int>(prune.s1.size())) << "\n";
        out << "Bounds\n";
        const std::vector<double> floor_radii = columnwise_max(problem.E, prune.s1);
        for (int t = 0; t < T; ++t) {
            out << " r_" << t << " >= " << fmt_full(floor_radii[static_cast<std::size_t>(t)]) << "\n";
        }
        out << "Binaries\n ";
        std::vector<std::string> bin_terms;
        for (int i : prune.s) bin_terms.push_back("b_" + std::to_string(i));
        wrap_terms(out, bin_terms);
        out << "\nEnd\n";
        return out.str();
    }

    out << "Minimize\n obj: ";
    wrap_terms(out, objective_terms);
    out << "\nSubject To\n";
    for (int t = 0; t < T; ++t) {
        for (int i = 0; i < n1; ++i) {
            const double m = big_m[static_cast<std::size_t>(t)];
            out << " cover_t" << t << "_i" << i << ": - r_" << t << " + " << fmt_full(m) << " b_" << i
                << " <= " << fmt_full(m - problem.E(i, t)) << "\n";
        }
    }
    std::vector<std::string> card_terms;
    for (int i = 0; i < n1; ++i) card_terms.push_back((i == 0 ? "b_" : "+ b_") + std::to_string(i));
    out << " card: ";
    wrap_terms(out, card_terms);
    out << " = " << p1 << "\n";
    out << "Binaries\n ";
    std::vector<std::string> bin_terms;
    for (int i = 0; i < n1; ++i) bin_terms.push_back("b_" + std::to_string(i));
    wrap_terms(out, bin_terms);
    out << "\nEnd\n";
    return out.str();
}

} // namespace oscp
