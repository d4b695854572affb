#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <queue>
#include <tuple>
#include <vector>

#include "covalign/errors.hpp"
#include "covalign/labeled_dag.hpp"
#include "covalign/strings.hpp"

namespace covalign {

enum class ObjectiveKind { Sum, Weighted, Lexicographic, MaxOfTwo };

struct Objective {
    ObjectiveKind kind = ObjectiveKind::Sum;
    long long alpha_red = 1;
    long long alpha_green = 1;
};

// Scalar for sum/weighted/max objectives, ordered pair for the
// lexicographic one.
struct ObjectiveValue {
    long long primary = 0;
    long long secondary = 0;
    bool is_pair = false;

    friend bool operator<(const ObjectiveValue& a, const ObjectiveValue& b) {
        return std::tie(a.primary, a.secondary) < std::tie(b.primary, b.secondary);
    }
    friend bool operator==(const ObjectiveValue& a, const ObjectiveValue& b) {
        return a.primary == b.primary && a.secondary == b.secondary && a.is_pair == b.is_pair;
    }
    friend bool operator!=(const ObjectiveValue& a, const ObjectiveValue& b) { return !(a == b); }
};

inline ObjectiveValue fold_objective(const Objective& obj, long long dist_red,
                                     long long dist_green) {
    switch (obj.kind) {
        case ObjectiveKind::Sum: return {dist_red + dist_green, 0, false};
        case ObjectiveKind::Weighted:
            return {obj.alpha_red * dist_red + obj.alpha_green * dist_green, 0, false};
        case ObjectiveKind::Lexicographic: return {dist_red, dist_green, true};
        case ObjectiveKind::MaxOfTwo: return {std::max(dist_red, dist_green), 0, false};
    }
    throw InvalidArgument("unknown objective kind");
}

inline void validate_objective(const Objective& obj) {
    if (obj.kind == ObjectiveKind::Weighted) {
        if (obj.alpha_red < 0 || obj.alpha_green < 0)
            throw InvalidArgument("weighted objective coefficients must be non-negative");
        if (obj.alpha_red == 0 && obj.alpha_green == 0)
            throw InvalidArgument("weighted objective coefficients must not both be zero");
    }
}

struct SolverOptions {
    Objective objective;
    bool disjoint_d1 = false;
    bool disjoint_d2 = false;
    bool source_to_sink_only = false;
    bool require_cover_d2 = true;
    std::size_t max_pairs_per_dag = 5'000'000;
    std::size_t max_combinations = 200'000'000;
};

struct CoverSolution {
    DagPath r1, g1;  // jointly cover the first DAG
    DagPath r2, g2;
    long long dist_red = 0;
    long long dist_green = 0;
    ObjectiveValue value;
};

inline constexpr std::size_t kCoverEnumMaxNodes = 2000;

// Exact number of admissible cover pairs, saturating at cap + 1. The
// colorings are Markovian in the frontier pair (last red node, last green
// node), whose topological maximum determines how many nodes are already
// assigned, so a quadratic DP counts them without materializing anything.
inline std::size_t count_cover_pairs(const LabeledDag& d, bool disjoint,
                                     bool source_to_sink_only, std::size_t cap) {
    const std::size_t n = d.size();
    if (n > kCoverEnumMaxNodes) return cap + 1;
    const NodeId none = NodeId(n);
    const std::vector<NodeId>& topo = d.topological_order();
    auto sat_add = [cap](std::size_t a, std::size_t b) { return std::min(a + b, cap + 1); };
    std::vector<std::size_t> count((n + 1) * (n + 1), 0);
    auto at = [&](NodeId u1, NodeId u2) -> std::size_t& { return count[u1 * (n + 1) + u2]; };
    at(none, none) = 1;
    std::vector<std::pair<NodeId, NodeId>> states;
    for (std::size_t k = 0; k < n; ++k) {
        NodeId w = topo[k];
        bool w_start_ok = !source_to_sink_only || d.in(w).empty();
        states.clear();
        if (k == 0) {
            states.emplace_back(none, none);
        } else {
            NodeId last = topo[k - 1];
            states.emplace_back(last, last);
            states.emplace_back(last, none);
            states.emplace_back(none, last);
            for (std::size_t j = 0; j + 1 < k; ++j) {
                states.emplace_back(last, topo[j]);
                states.emplace_back(topo[j], last);
            }
        }
        for (auto [u1, u2] : states) {
            std::size_t c = at(u1, u2);
            if (c == 0) continue;
            bool red_ok = u1 == none ? w_start_ok : d.has_arc(u1, w);
            bool green_ok = u2 == none ? w_start_ok : d.has_arc(u2, w);
            if (red_ok) at(w, u2) = sat_add(at(w, u2), c);
            if (green_ok) at(u1, w) = sat_add(at(u1, w), c);
            if (!disjoint && red_ok && green_ok) at(w, w) = sat_add(at(w, w), c);
        }
    }
    auto end_ok = [&](NodeId u) {
        return u != none && (!source_to_sink_only || d.out(u).empty());
    };
    NodeId last = topo[n - 1];
    std::size_t total = 0;
    states.clear();
    states.emplace_back(last, last);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        states.emplace_back(last, topo[j]);
        states.emplace_back(topo[j], last);
    }
    states.emplace_back(last, none);
    states.emplace_back(none, last);
    for (auto [u1, u2] : states)
        if (end_ok(u1) && end_ok(u2)) total = sat_add(total, at(u1, u2));
    return total;
}

// All ordered pairs (red, green) of paths that jointly cover the DAG,
// enumerated as node 2-colorings over the topological order: each node goes
// to red, green or (unless disjoint) both, and consecutive nodes of a color
// class must be joined by arcs. This is exhaustive: the nodes of any path,
// taken in topological order, are the path itself. Result is sorted
// lexicographically by (red, green) node sequences. The count is checked
// against the guard before anything is materialized.
// Hard memory budget for materialized enumerations, in stored node ids.
inline constexpr std::size_t kEnumStoredIdBudget = 50'000'000;

inline std::vector<CoverPair> enumerate_cover_pairs(const LabeledDag& d, bool disjoint,
                                                    bool source_to_sink_only,
                                                    std::size_t guard) {
    const std::vector<NodeId>& topo = d.topological_order();
    std::size_t n = d.size();
    if (n > kCoverEnumMaxNodes)
        throw InstanceTooLarge("DAG too large for cover pair enumeration");
    std::size_t total = count_cover_pairs(d, disjoint, source_to_sink_only, guard);
    if (total > guard) throw InstanceTooLarge("cover pair guard exceeded");
    std::vector<CoverPair> out;
    if (total == 0) return out;
    out.reserve(total);
    std::size_t stored_ids = 0;
    DagPath red, green;
    auto admissible_end = [&](const DagPath& p) {
        if (p.empty()) return false;
        if (!source_to_sink_only) return true;
        return d.in(p.front()).empty() && d.out(p.back()).empty();
    };
    auto dfs = [&](auto&& self, std::size_t k) -> void {
        if (k == n) {
            if (admissible_end(red) && admissible_end(green)) {
                if (out.size() >= guard) throw InstanceTooLarge("cover pair guard exceeded");
                stored_ids += red.size() + green.size();
                if (stored_ids > kEnumStoredIdBudget)
                    throw InstanceTooLarge("cover pair memory budget exceeded");
                out.push_back(CoverPair{red, green});
            }
            return;
        }
        NodeId w = topo[k];
        bool red_ok = red.empty() || d.has_arc(red.back(), w);
        bool green_ok = green.empty() || d.has_arc(green.back(), w);
        if (red_ok) {
            red.push_back(w);
            self(self, k + 1);
            red.pop_back();
        }
        if (green_ok) {
            green.push_back(w);
            self(self, k + 1);
            green.pop_back();
        }
        if (!disjoint && red_ok && green_ok) {
            red.push_back(w);
            green.push_back(w);
            self(self, k + 1);
            red.pop_back();
            green.pop_back();
        }
    };
    dfs(dfs, 0);
    std::sort(out.begin(), out.end(), [](const CoverPair& a, const CoverPair& b) {
        return std::tie(a.red, a.green) < std::tie(b.red, b.green);
    });
    return out;
}

inline std::vector<std::vector<long long>> distance_matrix(const std::vector<Str>& a,
                                                           const std::vector<Str>& b) {
    std::vector<std::vector<long long>> m(a.size(), std::vector<long long>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            m[i][j] = (long long)edit_distance(a[i], b[j]);
    return m;
}

inline bool paths_node_disjoint(const DagPath& a, const DagPath& b) {
    std::vector<NodeId> sa(a), sb(b);
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    std::size_t i = 0, j = 0;
    while (i < sa.size() && j < sb.size()) {
        if (sa[i] == sb[j]) return false;
        if (sa[i] < sb[j]) ++i; else ++j;
    }
    return true;
}

// Exhaustive Min-ED-2PC in every variant. The optimum is global over all
// admissible quadruples; the witness is the lexicographically least
// quadruple (r1, g1, r2, g2) by node sequences among the optima.
inline CoverSolution solve_bruteforce(const LabeledDag& d1, const LabeledDag& d2,
                                      const SolverOptions& opts) {
    validate_objective(opts.objective);
    if (d1.size() > kCoverEnumMaxNodes || d2.size() > kCoverEnumMaxNodes)
        throw InstanceTooLarge("DAG too large for exhaustive covering alignment");
    if (!two_path_coverable(d1)) throw NotCoverable("first DAG has width greater than 2");
    if (opts.require_cover_d2 && !two_path_coverable(d2))
        throw NotCoverable("second DAG has width greater than 2");

    // Size everything before materializing anything: the pair counts are
    // exact, so oversized instances are refused in quadratic time.
    std::size_t count1 = count_cover_pairs(d1, opts.disjoint_d1, opts.source_to_sink_only,
                                           opts.max_pairs_per_dag);
    if (count1 > opts.max_pairs_per_dag) throw InstanceTooLarge("cover pair guard exceeded");
    if (opts.require_cover_d2) {
        std::size_t count2 = count_cover_pairs(d2, opts.disjoint_d2, opts.source_to_sink_only,
                                               opts.max_pairs_per_dag);
        if (count2 > opts.max_pairs_per_dag) throw InstanceTooLarge("cover pair guard exceeded");
        if (count2 != 0 && count1 > opts.max_combinations / count2)
            throw InstanceTooLarge("cover pair combination guard exceeded");
    }

    std::vector<CoverPair> pairs1 =
        enumerate_cover_pairs(d1, opts.disjoint_d1, opts.source_to_sink_only,
                              opts.max_pairs_per_dag);
    if (pairs1.empty()) throw NotCoverable("no admissible cover pair in the first DAG");

    // Intern strand reads of the first DAG.
    std::map<Str, std::uint32_t> idx_r1, idx_g1;
    std::vector<Str> reads_r1, reads_g1;
    std::vector<std::uint32_t> rid1(pairs1.size()), gid1(pairs1.size());
    for (std::size_t i = 0; i < pairs1.size(); ++i) {
        Str rr = read(d1, pairs1[i].red), gg = read(d1, pairs1[i].green);
        auto [itr, insr] = idx_r1.emplace(rr, std::uint32_t(reads_r1.size()));
        if (insr) reads_r1.push_back(std::move(rr));
        rid1[i] = itr->second;
        auto [itg, insg] = idx_g1.emplace(gg, std::uint32_t(reads_g1.size()));
        if (insg) reads_g1.push_back(std::move(gg));
        gid1[i] = itg->second;
    }

    const Objective& obj = opts.objective;
    bool have = false;
    ObjectiveValue best_value;
    CoverSolution best;

    auto consider = [&](const ObjectiveValue& v, std::size_t i, long long dr, long long dg,
                        const DagPath& r2, const DagPath& g2) {
        if (!have || v < best_value) {
            have = true;
            best_value = v;
            best = CoverSolution{pairs1[i].red, pairs1[i].green, r2, g2, dr, dg, v};
        }
    };

    if (opts.require_cover_d2) {
        std::vector<CoverPair> pairs2 =
            enumerate_cover_pairs(d2, opts.disjoint_d2, opts.source_to_sink_only,
                                  opts.max_pairs_per_dag);
        if (pairs2.empty()) throw NotCoverable("no admissible cover pair in the second DAG");
        if (!pairs2.empty() && pairs1.size() > opts.max_combinations / pairs2.size())
            throw InstanceTooLarge("cover pair combination guard exceeded");
        std::map<Str, std::uint32_t> idx_r2, idx_g2;
        std::vector<Str> reads_r2, reads_g2;
        std::vector<std::uint32_t> rid2(pairs2.size()), gid2(pairs2.size());
        for (std::size_t j = 0; j < pairs2.size(); ++j) {
            Str rr = read(d2, pairs2[j].red), gg = read(d2, pairs2[j].green);
            auto [itr, insr] = idx_r2.emplace(rr, std::uint32_t(reads_r2.size()));
            if (insr) reads_r2.push_back(std::move(rr));
            rid2[j] = itr->second;
            auto [itg, insg] = idx_g2.emplace(gg, std::uint32_t(reads_g2.size()));
            if (insg) reads_g2.push_back(std::move(gg));
            gid2[j] = itg->second;
        }
        auto dist_r = distance_matrix(reads_r1, reads_r2);
        auto dist_g = distance_matrix(reads_g1, reads_g2);
        for (std::size_t i = 0; i < pairs1.size(); ++i) {
            const auto& dr_row = dist_r[rid1[i]];
            const auto& dg_row = dist_g[gid1[i]];
            for (std::size_t j = 0; j < pairs2.size(); ++j) {
                long long dr = dr_row[rid2[j]], dg = dg_row[gid2[j]];
                ObjectiveValue v = fold_objective(obj, dr, dg);
                if (!have || v < best_value)
                    consider(v, i, dr, dg, pairs2[j].red, pairs2[j].green);
            }
        }
    } else if (!opts.disjoint_d2 && obj.kind != ObjectiveKind::MaxOfTwo) {
        // The two unconstrained strands of the second DAG minimize
        // independently under the sum, weighted and lexicographic folds.
        // The witness strands are re-selected afterwards so the quadruple
        // stays the lexicographically least optimum even when a zero weight
        // leaves a strand free.
        std::vector<DagPath> paths2 =
            enumerate_paths(d2, opts.source_to_sink_only, opts.max_pairs_per_dag);
        if (paths2.empty()) throw NotCoverable("second DAG admits no path under these options");
        std::map<Str, std::uint32_t> idx2;
        std::vector<Str> reads2;
        std::vector<std::uint32_t> pid2(paths2.size());
        for (std::size_t j = 0; j < paths2.size(); ++j) {
            Str r = read(d2, paths2[j]);
            auto [it, ins] = idx2.emplace(r, std::uint32_t(reads2.size()));
            if (ins) reads2.push_back(std::move(r));
            pid2[j] = it->second;
        }
        auto dist_r = distance_matrix(reads_r1, reads2);
        auto dist_g = distance_matrix(reads_g1, reads2);
        auto row_min = [](const std::vector<long long>& row) {
            return *std::min_element(row.begin(), row.end());
        };
        std::vector<long long> min_r(reads_r1.size()), min_g(reads_g1.size());
        for (std::size_t k = 0; k < reads_r1.size(); ++k) min_r[k] = row_min(dist_r[k]);
        for (std::size_t k = 0; k < reads_g1.size(); ++k) min_g[k] = row_min(dist_g[k]);
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < pairs1.size(); ++i) {
            ObjectiveValue v = fold_objective(obj, min_r[rid1[i]], min_g[gid1[i]]);
            if (!have || v < best_value) {
                have = true;
                best_value = v;
                best_i = i;
            }
        }
        const auto& dr_row = dist_r[rid1[best_i]];
        const auto& dg_row = dist_g[gid1[best_i]];
        long long dg_star = min_g[gid1[best_i]];
        std::size_t jr = paths2.size(), jg = paths2.size();
        for (std::size_t j = 0; j < paths2.size() && jr == paths2.size(); ++j)
            if (fold_objective(obj, dr_row[pid2[j]], dg_star) == best_value) jr = j;
        long long dr_chosen = dr_row[pid2[jr]];
        for (std::size_t j = 0; j < paths2.size() && jg == paths2.size(); ++j)
            if (fold_objective(obj, dr_chosen, dg_row[pid2[j]]) == best_value) jg = j;
        best = CoverSolution{pairs1[best_i].red, pairs1[best_i].green,
                             paths2[jr],         paths2[jg],
                             dr_chosen,          dg_row[pid2[jg]],
                             best_value};
    } else {
        // Generic product over ordered second-DAG path pairs: needed for the
        // max objective, whose optimal strand choices are coupled, and for
        // the disjoint variant.
        std::vector<DagPath> paths2 =
            enumerate_paths(d2, opts.source_to_sink_only, opts.max_pairs_per_dag);
        std::vector<std::pair<std::size_t, std::size_t>> pairs2;
        for (std::size_t a = 0; a < paths2.size(); ++a)
            for (std::size_t b = 0; b < paths2.size(); ++b)
                if (!opts.disjoint_d2 || paths_node_disjoint(paths2[a], paths2[b]))
                    pairs2.emplace_back(a, b);
        if (pairs2.empty()) throw NotCoverable("second DAG admits no admissible path pair");
        if (!pairs2.empty() && pairs1.size() > opts.max_combinations / pairs2.size())
            throw InstanceTooLarge("cover pair combination guard exceeded");
        std::vector<Str> reads2(paths2.size());
        for (std::size_t a = 0; a < paths2.size(); ++a) reads2[a] = read(d2, paths2[a]);
        for (std::size_t i = 0; i < pairs1.size(); ++i) {
            std::map<std::uint32_t, long long> memo_r, memo_g;
            for (auto [a, b] : pairs2) {
                auto it_r = memo_r.find(std::uint32_t(a));
                if (it_r == memo_r.end())
                    it_r = memo_r.emplace(a, (long long)edit_distance(reads_r1[rid1[i]], reads2[a]))
                               .first;
                auto it_g = memo_g.find(std::uint32_t(b));
                if (it_g == memo_g.end())
                    it_g = memo_g.emplace(b, (long long)edit_distance(reads_g1[gid1[i]], reads2[b]))
                               .first;
                ObjectiveValue v = fold_objective(obj, it_r->second, it_g->second);
                if (!have || v < best_value)
                    consider(v, i, it_r->second, it_g->second, paths2[a], paths2[b]);
            }
        }
    }
    if (!have) throw NotCoverable("no admissible solution under the given options");
    return best;
}

// Recompute the objective of a proposed solution, validating every contract
// the options impose.
inline ObjectiveValue evaluate_solution(const LabeledDag& d1, const LabeledDag& d2,
                                        const CoverSolution& sol, const SolverOptions& opts) {
    validate_objective(opts.objective);
    Str rr1 = read(d1, sol.r1), gg1 = read(d1, sol.g1);
    Str rr2 = read(d2, sol.r2), gg2 = read(d2, sol.g2);
    if (!jointly_cover(d1, CoverPair{sol.r1, sol.g1}))
        throw CoverViolated("solution does not cover the first DAG");
    if (opts.require_cover_d2 && !jointly_cover(d2, CoverPair{sol.r2, sol.g2}))
        throw CoverViolated("solution does not cover the second DAG");
    if (opts.disjoint_d1 && !paths_node_disjoint(sol.r1, sol.g1))
        throw DisjointnessViolated("first DAG paths share a node");
    if (opts.disjoint_d2 && !paths_node_disjoint(sol.r2, sol.g2))
        throw DisjointnessViolated("second DAG paths share a node");
    long long dr = (long long)edit_distance(rr1, rr2);
    long long dg = (long long)edit_distance(gg1, gg2);
    return fold_objective(opts.objective, dr, dg);
}

namespace relaxed_detail {

struct Move {
    std::uint8_t type = 0;
    NodeId a = 0, b = 0;
};

enum : std::uint8_t {
    kMoveNone = 0,
    kMoveD2Red,        // a = consumed d2 node (insertion or epsilon advance)
    kMoveD2Green,
    kMoveAssignRedEps,    // a = d1 node
    kMoveAssignRedDel,    // a = d1 node
    kMoveAssignRedMatch,  // a = d1 node, b = d2 node
    kMoveAssignGreenEps,
    kMoveAssignGreenDel,
    kMoveAssignGreenMatch,
    kMoveAssignBothEps,    // a = d1 node
    kMoveAssignBothDel,    // red strand emission, enters pending phase
    kMoveAssignBothMatch,  // red strand emission, enters pending phase
    kMovePendingDel,       // green strand emission, leaves pending phase
    kMovePendingMatch,     // b = d2 node
};

}  // namespace relaxed_detail

// Polynomial solver for the relaxed variant: the two paths of the second
// DAG need not cover it. The state space is (red frontier in D1, green
// frontier in D1, red endpoint in D2, green endpoint in D2): processing D1
// nodes in topological order keeps the already-assigned prefix covered, and
// each assignment emits the node label against the strand's D2 alignment
// with match / delete moves, while insertions and epsilon hops advance
// within D2 between emissions. Solved as a shortest path over that graph.
inline CoverSolution solve_relaxed_dp(const LabeledDag& d1, const LabeledDag& d2,
                                      const SolverOptions& opts) {
    validate_objective(opts.objective);
    if (opts.require_cover_d2)
        throw UnsupportedOptions("the dp engine requires require_cover_d2 = false");
    if (opts.disjoint_d2)
        throw UnsupportedOptions("the dp engine does not support disjoint second-DAG paths");
    if (opts.objective.kind != ObjectiveKind::Sum && opts.objective.kind != ObjectiveKind::Weighted)
        throw UnsupportedOptions("the dp engine supports sum and weighted objectives only");
    for (const LabeledDag* d : {&d1, &d2})
        if (d->flavor() != LabelFlavor::Sigma && d->flavor() != LabelFlavor::SigmaEps)
            throw UnsupportedOptions("the dp engine requires sigma or sigmaeps labels");
    if (!two_path_coverable(d1)) throw NotCoverable("first DAG has width greater than 2");

    using namespace relaxed_detail;
    const std::size_t n1 = d1.size(), n2 = d2.size();
    const NodeId kNone1 = NodeId(n1), kNone2 = NodeId(n2);
    long long wr = 1, wg = 1;
    if (opts.objective.kind == ObjectiveKind::Weighted) {
        wr = opts.objective.alpha_red;
        wg = opts.objective.alpha_green;
    }
    std::size_t nsym = 0;
    for (NodeId v = 0; v < n1; ++v)
        for (Symbol c : d1.label(v)) nsym = std::max(nsym, std::size_t(c) + 1);
    const std::size_t phases = 1 + nsym;
    const std::size_t u_card = n1 + 1, v_card = n2 + 1;
    const std::size_t n_states = phases * u_card * u_card * v_card * v_card;
    if (n_states > 20'000'000) throw InstanceTooLarge("dp state space guard exceeded");

    auto pack = [&](std::size_t phase, NodeId u1, NodeId u2, NodeId v1, NodeId v2) {
        return (((phase * u_card + u1) * u_card + u2) * v_card + v1) * v_card + v2;
    };
    const std::vector<NodeId>& topo1 = d1.topological_order();
    auto progress = [&](NodeId u1, NodeId u2) {
        std::size_t k = 0;
        if (u1 != kNone1) k = std::max(k, d1.topo_index(u1) + 1);
        if (u2 != kNone1) k = std::max(k, d1.topo_index(u2) + 1);
        return k;
    };
    auto d1_is_source = [&](NodeId v) { return d1.in(v).empty(); };
    auto d2_is_source = [&](NodeId v) { return d2.in(v).empty(); };

    const long long kInf = std::numeric_limits<long long>::max() / 4;
    std::vector<long long> dist(n_states, kInf);
    std::vector<std::int64_t> parent(n_states, -1);
    std::vector<Move> parent_move(n_states);
    using QItem = std::pair<long long, std::size_t>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> queue;

    std::size_t start = pack(0, kNone1, kNone1, kNone2, kNone2);
    dist[start] = 0;
    queue.push({0, start});

    auto relax = [&](std::size_t from, std::size_t to, long long cost, Move m) {
        if (dist[from] + cost < dist[to]) {
            dist[to] = dist[from] + cost;
            parent[to] = std::int64_t(from);
            parent_move[to] = m;
            queue.push({dist[to], to});
        }
    };

    // D2 advance targets of an endpoint, respecting source starts if needed.
    auto d2_targets = [&](NodeId v) -> std::vector<NodeId> {
        if (v != kNone2) return d2.out(v);
        std::vector<NodeId> t;
        for (NodeId w = 0; w < n2; ++w)
            if (!opts.source_to_sink_only || d2_is_source(w)) t.push_back(w);
        return t;
    };

    while (!queue.empty()) {
        auto [cost, s] = queue.top();
        queue.pop();
        if (cost != dist[s]) continue;
        std::size_t rest = s;
        NodeId v2 = NodeId(rest % v_card);
        rest /= v_card;
        NodeId v1 = NodeId(rest % v_card);
        rest /= v_card;
        NodeId u2 = NodeId(rest % u_card);
        rest /= u_card;
        NodeId u1 = NodeId(rest % u_card);
        std::size_t phase = rest / u_card;

        // Advance within D2 only: insertions cost one per character,
        // epsilon nodes are free.
        for (NodeId w : d2_targets(v1))
            relax(s, pack(phase, u1, u2, w, v2), wr * (long long)d2.label(w).size(),
                  Move{kMoveD2Red, w, 0});
        for (NodeId w : d2_targets(v2))
            relax(s, pack(phase, u1, u2, v1, w), wg * (long long)d2.label(w).size(),
                  Move{kMoveD2Green, w, 0});

        if (phase != 0) {
            // Pending green-strand emission of character c.
            Symbol c = Symbol(phase - 1);
            relax(s, pack(0, u1, u2, v1, v2), wg, Move{kMovePendingDel, 0, 0});
            for (NodeId w : d2_targets(v2)) {
                if (d2.label(w).size() != 1) continue;
                long long sub = d2.label(w)[0] == c ? 0 : 1;
                relax(s, pack(0, u1, u2, v1, w), wg * sub, Move{kMovePendingMatch, 0, w});
            }
            continue;
        }

        std::size_t k = progress(u1, u2);
        if (k >= n1) continue;
        NodeId w = topo1[k];
        const Str& label = d1.label(w);
        bool red_ok = (u1 == kNone1) ? (!opts.source_to_sink_only || d1_is_source(w))
                                     : d1.has_arc(u1, w);
        bool green_ok = (u2 == kNone1) ? (!opts.source_to_sink_only || d1_is_source(w))
                                       : d1.has_arc(u2, w);
        if (red_ok) {
            if (label.empty()) {
                relax(s, pack(0, w, u2, v1, v2), 0, Move{kMoveAssignRedEps, w, 0});
            } else {
                relax(s, pack(0, w, u2, v1, v2), wr, Move{kMoveAssignRedDel, w, 0});
                for (NodeId t : d2_targets(v1)) {
                    if (d2.label(t).size() != 1) continue;
                    long long sub = d2.label(t)[0] == label[0] ? 0 : 1;
                    relax(s, pack(0, w, u2, t, v2), wr * sub, Move{kMoveAssignRedMatch, w, t});
                }
            }
        }
        if (green_ok) {
            if (label.empty()) {
                relax(s, pack(0, u1, w, v1, v2), 0, Move{kMoveAssignGreenEps, w, 0});
            } else {
                relax(s, pack(0, u1, w, v1, v2), wg, Move{kMoveAssignGreenDel, w, 0});
                for (NodeId t : d2_targets(v2)) {
                    if (d2.label(t).size() != 1) continue;
                    long long sub = d2.label(t)[0] == label[0] ? 0 : 1;
                    relax(s, pack(0, u1, w, v1, t), wg * sub, Move{kMoveAssignGreenMatch, w, t});
                }
            }
        }
        if (!opts.disjoint_d1 && red_ok && green_ok) {
            if (label.empty()) {
                relax(s, pack(0, w, w, v1, v2), 0, Move{kMoveAssignBothEps, w, 0});
            } else {
                std::size_t pending = 1 + std::size_t(label[0]);
                relax(s, pack(pending, w, w, v1, v2), wr, Move{kMoveAssignBothDel, w, 0});
                for (NodeId t : d2_targets(v1)) {
                    if (d2.label(t).size() != 1) continue;
                    long long sub = d2.label(t)[0] == label[0] ? 0 : 1;
                    relax(s, pack(pending, w, w, t, v2), wr * sub,
                          Move{kMoveAssignBothMatch, w, t});
                }
            }
        }
    }

    // Pick the best accepting state.
    long long best_cost = kInf;
    std::size_t best_state = 0;
    auto d1_is_sink = [&](NodeId v) { return d1.out(v).empty(); };
    auto d2_is_sink = [&](NodeId v) { return d2.out(v).empty(); };
    for (NodeId u1 = 0; u1 < n1; ++u1) {
        for (NodeId u2 = 0; u2 < n1; ++u2) {
            if (progress(u1, u2) != n1) continue;
            if (opts.source_to_sink_only && (!d1_is_sink(u1) || !d1_is_sink(u2))) continue;
            for (NodeId v1 = 0; v1 < n2; ++v1) {
                if (opts.source_to_sink_only && !d2_is_sink(v1)) continue;
                for (NodeId v2 = 0; v2 < n2; ++v2) {
                    if (opts.source_to_sink_only && !d2_is_sink(v2)) continue;
                    std::size_t s = pack(0, u1, u2, v1, v2);
                    if (dist[s] < best_cost) {
                        best_cost = dist[s];
                        best_state = s;
                    }
                }
            }
        }
    }
    if (best_cost >= kInf) throw NotCoverable("no admissible solution under the given options");

    // Replay the move sequence.
    std::vector<relaxed_detail::Move> moves;
    for (std::size_t s = best_state; parent[s] >= 0; s = std::size_t(parent[s]))
        moves.push_back(parent_move[s]);
    std::reverse(moves.begin(), moves.end());
    CoverSolution sol;
    for (const Move& m : moves) {
        switch (m.type) {
            case kMoveD2Red: sol.r2.push_back(m.a); break;
            case kMoveD2Green: sol.g2.push_back(m.a); break;
            case kMoveAssignRedEps:
            case kMoveAssignRedDel: sol.r1.push_back(m.a); break;
            case kMoveAssignRedMatch:
                sol.r1.push_back(m.a);
                sol.r2.push_back(m.b);
                break;
            case kMoveAssignGreenEps:
            case kMoveAssignGreenDel: sol.g1.push_back(m.a); break;
            case kMoveAssignGreenMatch:
                sol.g1.push_back(m.a);
                sol.g2.push_back(m.b);
                break;
            case kMoveAssignBothEps:
            case kMoveAssignBothDel:
                sol.r1.push_back(m.a);
                sol.g1.push_back(m.a);
                break;
            case kMoveAssignBothMatch:
                sol.r1.push_back(m.a);
                sol.g1.push_back(m.a);
                sol.r2.push_back(m.b);
                break;
            case kMovePendingDel: break;
            case kMovePendingMatch: sol.g2.push_back(m.b); break;
            default: throw ConstructionMismatch("unknown dp move");
        }
    }
    sol.dist_red = (long long)edit_distance(read(d1, sol.r1), read(d2, sol.r2));
    sol.dist_green = (long long)edit_distance(read(d1, sol.g1), read(d2, sol.g2));
    sol.value = fold_objective(opts.objective, sol.dist_red, sol.dist_green);
    return sol;
}

}  // namespace covalign
