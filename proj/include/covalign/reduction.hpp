#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "covalign/cover_solvers.hpp"
#include "covalign/diploid.hpp"
#include "covalign/errors.hpp"
#include "covalign/labeled_dag.hpp"
#include "covalign/rng.hpp"
#include "covalign/strings.hpp"

namespace covalign {

// ---------------------------------------------------------------------------
// Tab strings: binary separators whose fixed-length windows are all distinct,
// used to force alignments into phase.

inline bool all_substrings_distinct(const Str& s, std::size_t k) {
    if (k < 1) throw InvalidArgument("window length must be at least 1");
    if (s.size() < k) return true;
    std::set<Str> seen;
    for (std::size_t i = 0; i + k <= s.size(); ++i) {
        Str w(s.begin() + i, s.begin() + i + k);
        if (!seen.insert(std::move(w)).second) return false;
    }
    return true;
}

inline constexpr std::size_t kTabMaxAttempts = 1000;

// Rejection sampling of a binary string whose length-k windows are all
// distinct. Deterministic for a fixed seed; one rng bit per character.
inline Str generate_tab(std::size_t length, std::size_t k, std::uint64_t seed) {
    if (length < 1 || k < 1) throw InvalidArgument("tab length and window length must be positive");
    if (k < 64) {
        std::size_t windows = length >= k ? length - k + 1 : 0;
        if (windows > (std::size_t(1) << k))
            throw ImpossibleParameters("more windows than distinct binary k-mers");
    }
    Xorshift64Star rng(seed);
    for (std::size_t attempt = 0; attempt < kTabMaxAttempts; ++attempt) {
        Str s(length);
        for (std::size_t i = 0; i < length; ++i) s[i] = rng.next_bit() ? 1 : 0;
        if (all_substrings_distinct(s, k)) return s;
    }
    throw RetriesExhausted("no tab with distinct windows found within the attempt budget");
}

// ---------------------------------------------------------------------------
// Column metadata. Every node of a construction belongs to exactly one
// column; the column role drives the casting into a pairwise alignment.

enum class ColumnRole { Eps, Head, Tail, Tab, Char, Dsep };

inline const char* column_role_token(ColumnRole r) {
    switch (r) {
        case ColumnRole::Eps: return "eps";
        case ColumnRole::Head: return "head";
        case ColumnRole::Tail: return "tail";
        case ColumnRole::Tab: return "tab";
        case ColumnRole::Char: return "char";
        case ColumnRole::Dsep: return "dsep";
    }
    throw InvalidArgument("unknown column role");
}

inline ColumnRole column_role_from_token(const std::string& t) {
    if (t == "eps") return ColumnRole::Eps;
    if (t == "head") return ColumnRole::Head;
    if (t == "tail") return ColumnRole::Tail;
    if (t == "tab") return ColumnRole::Tab;
    if (t == "char") return ColumnRole::Char;
    if (t == "dsep") return ColumnRole::Dsep;
    throw ParseError("unknown column role '" + t + "'");
}

struct Column {
    ColumnRole role;
    std::vector<NodeId> nodes;   // 1 or 2 ids; char columns list the labeled node first
    std::uint32_t stage = 0;     // gadget stage for char/dsep, depth for tab, 0 otherwise
    std::uint32_t position = 0;  // 1-based position within the gadget string, 0 otherwise
};

// ---------------------------------------------------------------------------
// Reduction parameters.

enum class Scale { Paper, Desk };

struct ReductionParams {
    std::size_t n = 0;                // number of input strings
    std::size_t ell = 0;              // common string length
    std::size_t run_length = 0;       // separator run 0^D between gadget positions
    std::size_t stages = 0;           // N: number of gadget stages
    std::size_t separator_bound = 0;  // M: bound fed into the tab sizing
    std::size_t tab_length = 0;
    std::size_t tab_k = 0;            // distinct-window length of the tab
    std::uint64_t seed = 1;
};

// Smallest k with 2^k >= x.
inline std::size_t ceil_log2(std::uint64_t x) {
    std::size_t k = 0;
    while ((std::uint64_t(1) << k) < x) ++k;
    return k;
}

struct LcsInstance {
    std::vector<Str> strings;

    explicit LcsInstance(std::vector<Str> s) : strings(std::move(s)) {
        if (strings.size() < 2) throw ParseError("need at least two strings");
        std::size_t ell = strings[0].size();
        for (const Str& t : strings) {
            if (t.size() != ell) throw ParseError("strings must all have the same length");
            if (t.empty()) throw ParseError("strings must be non-empty");
            bool has0 = false, has1 = false;
            for (Symbol c : t) {
                if (c == 0) has0 = true;
                else if (c == 1) has1 = true;
                else throw ParseError("strings must be binary");
            }
            if (!has0 || !has1) throw ParseError("every string must contain both a 0 and a 1");
        }
    }

    std::size_t n() const { return strings.size(); }
    std::size_t ell() const { return strings[0].size(); }
};

// Paper scale follows the construction's own sizing; desk scale keeps the
// structure identical and shrinks the tab to something a brute-force solver
// can face. Desk defaults: tab_length 8 with window length 3.
inline ReductionParams default_params(const LcsInstance& inst, Scale scale,
                                      std::uint64_t seed = 1) {
    ReductionParams p;
    p.n = inst.n();
    p.ell = inst.ell();
    p.run_length = 2 * p.ell + 1;
    p.stages = p.n * p.n;
    p.separator_bound = 4 * p.ell * p.ell;
    p.seed = seed;
    if (scale == Scale::Paper) {
        std::uint64_t q = 2 * std::uint64_t(p.stages) + 1;
        std::uint64_t qm = q * p.separator_bound;
        p.tab_length = std::size_t(qm * ceil_log2(qm) + q * std::uint64_t(p.separator_bound) *
                                                            std::uint64_t(p.separator_bound));
        p.tab_k = ceil_log2(std::uint64_t(p.tab_length) * std::uint64_t(p.tab_length));
    } else {
        p.tab_length = 8;
        p.tab_k = 3;
    }
    return p;
}

// Default window length when only the tab length is chosen by hand.
inline std::size_t desk_tab_k(std::size_t tab_length) {
    return std::max<std::size_t>(1, std::min(tab_length, ceil_log2(tab_length)));
}

// ---------------------------------------------------------------------------
// Gadget: the per-string sub-DAG that splits a string into a green
// subsequence and its red complement padded with 0^D runs. Per position j
// there is a column {X_j labeled s[j], E_j labeled empty} followed by a
// column {Z_j labeled 0^D}; any traversal picks exactly one of X_j/E_j and
// may detour through Z_j.

namespace reduction_detail {

struct Builder {
    std::vector<Str> labels;
    std::vector<Arc> arcs;
    std::vector<Column> columns;

    NodeId add(Str label) {
        labels.push_back(std::move(label));
        return NodeId(labels.size() - 1);
    }
    void arc(NodeId u, NodeId v) { arcs.emplace_back(u, v); }
    Column& column(ColumnRole role, std::vector<NodeId> nodes, std::uint32_t stage = 0,
                   std::uint32_t position = 0) {
        columns.push_back(Column{role, std::move(nodes), stage, position});
        return columns.back();
    }
};

struct StageNodes {
    std::vector<NodeId> x, e, z;  // per position
};

inline StageNodes append_gadget(Builder& b, const Str& s, std::size_t run_length,
                                std::uint32_t stage) {
    StageNodes g;
    Str run(run_length, Symbol(0));
    for (std::size_t j = 0; j < s.size(); ++j) {
        NodeId x = b.add(Str{s[j]});
        NodeId e = b.add(Str{});
        NodeId z = b.add(run);
        b.column(ColumnRole::Char, {x, e}, stage, std::uint32_t(j + 1));
        b.column(ColumnRole::Dsep, {z}, stage, std::uint32_t(j + 1));
        b.arc(x, z);
        b.arc(e, z);
        if (j > 0) {
            for (NodeId prev : {g.x[j - 1], g.e[j - 1], g.z[j - 1]}) {
                b.arc(prev, x);
                b.arc(prev, e);
            }
        }
        g.x.push_back(x);
        g.e.push_back(e);
        g.z.push_back(z);
    }
    return g;
}

}  // namespace reduction_detail

struct Gadget {
    LabeledDag dag;
    std::vector<Column> columns;
};

inline Gadget build_gadget(const Str& s, std::size_t run_length) {
    if (s.empty()) throw InvalidArgument("gadget needs a non-empty string");
    if (run_length < 1) throw InvalidArgument("separator run must be non-empty");
    reduction_detail::Builder b;
    reduction_detail::append_gadget(b, s, run_length, 1);
    return Gadget{LabeledDag(LabelFlavor::SigmaStar, std::move(b.labels), std::move(b.arcs)),
                  std::move(b.columns)};
}

// ---------------------------------------------------------------------------
// The full two-DAG construction.
//
// First DAG: source, a head node spelling S_0 reachable only on the green
// lane, then for each stage a parallel tab pair followed by the gadget of
// the stage's string, then one final tab, then the sink. Second DAG is the
// mirror: one initial tab, stages each followed by a tab pair, then a tail
// node spelling S_1 on the green lane before the sink. Stage i carries the
// gadget of string i mod n, i = 1..N.

struct SideLayout {
    NodeId source = 0, sink = 0;
    NodeId anchor = 0;  // head node in the first DAG, tail node in the second
    std::vector<std::array<NodeId, 2>> tab_pairs;
    NodeId single_tab = 0;
    std::vector<reduction_detail::StageNodes> stages;
};

struct ReductionInstance {
    LcsInstance lcs;
    ReductionParams params;
    Str tab;
    LabeledDag dag_a, dag_b;
    std::vector<Column> columns_a, columns_b;
    SideLayout layout_a, layout_b;
};

inline ReductionInstance build_instance(const LcsInstance& inst, const ReductionParams& params) {
    if (params.n != inst.n() || params.ell != inst.ell())
        throw ParameterMismatch("parameters disagree with the instance");
    if (params.stages < 1 || params.run_length < 1)
        throw ParameterMismatch("stage count and run length must be positive");
    if (params.tab_length < params.tab_k || params.tab_k < 1)
        throw ParameterMismatch("tab length must be at least the window length");

    Str tab = generate_tab(params.tab_length, params.tab_k, params.seed);
    const std::size_t n = params.n, N = params.stages;

    using reduction_detail::Builder;
    // First DAG.
    Builder a;
    SideLayout la;
    la.source = a.add(Str{});
    a.column(ColumnRole::Eps, {la.source});
    la.anchor = a.add(inst.strings[0]);
    a.column(ColumnRole::Head, {la.anchor});
    std::vector<NodeId> prev_exits;  // nodes wired into the next tab layer
    for (std::size_t i = 1; i <= N; ++i) {
        NodeId tg = a.add(tab), tr = a.add(tab);
        a.column(ColumnRole::Tab, {tg, tr}, std::uint32_t(i));
        if (i == 1) {
            for (NodeId t : {tg, tr}) {
                a.arc(la.source, t);
                a.arc(la.anchor, t);
            }
        } else {
            for (NodeId u : prev_exits)
                for (NodeId t : {tg, tr}) a.arc(u, t);
        }
        la.tab_pairs.push_back({tg, tr});
        auto g = reduction_detail::append_gadget(a, inst.strings[i % n], params.run_length,
                                                 std::uint32_t(i));
        for (NodeId t : {tg, tr}) {
            a.arc(t, g.x[0]);
            a.arc(t, g.e[0]);
        }
        prev_exits = {g.x.back(), g.e.back(), g.z.back()};
        la.stages.push_back(std::move(g));
    }
    la.single_tab = a.add(tab);
    a.column(ColumnRole::Tab, {la.single_tab}, std::uint32_t(N + 1));
    for (NodeId u : prev_exits) a.arc(u, la.single_tab);
    la.sink = a.add(Str{});
    a.column(ColumnRole::Eps, {la.sink});
    a.arc(la.single_tab, la.sink);

    // Second DAG.
    Builder b;
    SideLayout lb;
    lb.source = b.add(Str{});
    b.column(ColumnRole::Eps, {lb.source});
    lb.single_tab = b.add(tab);
    b.column(ColumnRole::Tab, {lb.single_tab}, 1);
    b.arc(lb.source, lb.single_tab);
    std::vector<NodeId> entry_tabs = {lb.single_tab};
    for (std::size_t i = 1; i <= N; ++i) {
        auto g = reduction_detail::append_gadget(b, inst.strings[i % n], params.run_length,
                                                 std::uint32_t(i));
        for (NodeId t : entry_tabs) {
            b.arc(t, g.x[0]);
            b.arc(t, g.e[0]);
        }
        NodeId tg = b.add(tab), tr = b.add(tab);
        b.column(ColumnRole::Tab, {tg, tr}, std::uint32_t(i + 1));
        for (NodeId u : {g.x.back(), g.e.back(), g.z.back()})
            for (NodeId t : {tg, tr}) b.arc(u, t);
        lb.tab_pairs.push_back({tg, tr});
        lb.stages.push_back(std::move(g));
        entry_tabs = {tg, tr};
    }
    lb.anchor = b.add(inst.strings[1]);
    b.column(ColumnRole::Tail, {lb.anchor});
    lb.sink = b.add(Str{});
    b.column(ColumnRole::Eps, {lb.sink});
    for (NodeId t : entry_tabs) {
        b.arc(t, lb.anchor);
        b.arc(t, lb.sink);  // direct lane past the tail
    }
    b.arc(lb.anchor, lb.sink);

    return ReductionInstance{
        inst,
        params,
        std::move(tab),
        LabeledDag(LabelFlavor::SigmaStar, std::move(a.labels), std::move(a.arcs)),
        LabeledDag(LabelFlavor::SigmaStar, std::move(b.labels), std::move(b.arcs)),
        std::move(a.columns),
        std::move(b.columns),
        std::move(la),
        std::move(lb)};
}

struct ExpandedReduction {
    ExpandResult a, b;
};

inline ExpandedReduction expand_instance(const ReductionInstance& ri) {
    return ExpandedReduction{expand_with_map(ri.dag_a), expand_with_map(ri.dag_b)};
}

// ---------------------------------------------------------------------------
// Constructive witness: given a common subsequence S', four disjoint
// covering paths of the expanded DAGs whose red reads are identical and
// whose green reads are S_0 (T S')^N and (S' T)^N S_1.

struct WitnessPaths {
    DagPath a_red, a_green, b_red, b_green;  // paths in the expanded DAGs
    std::size_t delta = 0;                   // ell - |S'|
};

namespace reduction_detail {

inline std::vector<bool> leftmost_embedding(const Str& sub, const Str& sup) {
    std::vector<bool> green(sup.size(), false);
    std::size_t i = 0;
    for (std::size_t j = 0; j < sup.size() && i < sub.size(); ++j) {
        if (sup[j] == sub[i]) {
            green[j] = true;
            ++i;
        }
    }
    if (i != sub.size()) throw NotCommonSubsequence("string does not embed");
    return green;
}

inline DagPath expand_path(const ExpandResult& er, const DagPath& original) {
    DagPath out;
    for (NodeId v : original) {
        const auto& chain = er.chains[v];
        out.insert(out.end(), chain.begin(), chain.end());
    }
    return out;
}

inline bool node_sets_disjoint(const DagPath& a, const DagPath& b) {
    return paths_node_disjoint(a, b);
}

}  // namespace reduction_detail

inline WitnessPaths lemma1_witness(const ReductionInstance& ri, const Str& s_prime) {
    const std::size_t n = ri.params.n, N = ri.params.stages, ell = ri.params.ell;
    for (const Str& s : ri.lcs.strings)
        if (!is_subsequence(s_prime, s))
            throw NotCommonSubsequence("not a common subsequence of every input string");

    std::vector<std::vector<bool>> greens(n);
    for (std::size_t r = 0; r < n; ++r)
        greens[r] = reduction_detail::leftmost_embedding(s_prime, ri.lcs.strings[r]);

    auto green_stage = [&](const reduction_detail::StageNodes& g, std::size_t residue,
                           DagPath& out) {
        for (std::size_t j = 0; j < ell; ++j)
            out.push_back(greens[residue][j] ? g.x[j] : g.e[j]);
    };
    auto red_stage = [&](const reduction_detail::StageNodes& g, std::size_t residue,
                         DagPath& out) {
        for (std::size_t j = 0; j < ell; ++j) {
            out.push_back(greens[residue][j] ? g.e[j] : g.x[j]);
            out.push_back(g.z[j]);
        }
    };

    DagPath a_red{ri.layout_a.source}, a_green{ri.layout_a.anchor};
    for (std::size_t i = 1; i <= N; ++i) {
        std::size_t residue = i % n;
        a_green.push_back(ri.layout_a.tab_pairs[i - 1][0]);
        green_stage(ri.layout_a.stages[i - 1], residue, a_green);
        a_red.push_back(ri.layout_a.tab_pairs[i - 1][1]);
        red_stage(ri.layout_a.stages[i - 1], residue, a_red);
    }
    a_red.push_back(ri.layout_a.single_tab);
    a_red.push_back(ri.layout_a.sink);

    DagPath b_red{ri.layout_b.source, ri.layout_b.single_tab}, b_green;
    for (std::size_t i = 1; i <= N; ++i) {
        std::size_t residue = i % n;
        green_stage(ri.layout_b.stages[i - 1], residue, b_green);
        b_green.push_back(ri.layout_b.tab_pairs[i - 1][0]);
        red_stage(ri.layout_b.stages[i - 1], residue, b_red);
        b_red.push_back(ri.layout_b.tab_pairs[i - 1][1]);
    }
    b_green.push_back(ri.layout_b.anchor);
    b_red.push_back(ri.layout_b.sink);

    ExpandedReduction er = expand_instance(ri);
    WitnessPaths w;
    w.a_red = reduction_detail::expand_path(er.a, a_red);
    w.a_green = reduction_detail::expand_path(er.a, a_green);
    w.b_red = reduction_detail::expand_path(er.b, b_red);
    w.b_green = reduction_detail::expand_path(er.b, b_green);
    w.delta = ell - s_prime.size();

    // Loud self-checks: any divergence here is a construction bug.
    if (!er.a.dag.is_valid_path(w.a_red) || !er.a.dag.is_valid_path(w.a_green) ||
        !er.b.dag.is_valid_path(w.b_red) || !er.b.dag.is_valid_path(w.b_green))
        throw ConstructionMismatch("witness is not a path");
    if (!reduction_detail::node_sets_disjoint(w.a_red, w.a_green) ||
        !reduction_detail::node_sets_disjoint(w.b_red, w.b_green))
        throw ConstructionMismatch("witness paths are not disjoint");
    if (!jointly_cover(er.a.dag, CoverPair{w.a_red, w.a_green}) ||
        !jointly_cover(er.b.dag, CoverPair{w.b_red, w.b_green}))
        throw ConstructionMismatch("witness paths do not cover");

    Str read_a_red = read(er.a.dag, w.a_red), read_b_red = read(er.b.dag, w.b_red);
    if (read_a_red != read_b_red) throw ConstructionMismatch("red reads differ");
    Str expect_a_green = ri.lcs.strings[0];
    Str expect_b_green;
    for (std::size_t i = 1; i <= N; ++i) {
        expect_a_green.insert(expect_a_green.end(), ri.tab.begin(), ri.tab.end());
        expect_a_green.insert(expect_a_green.end(), s_prime.begin(), s_prime.end());
        expect_b_green.insert(expect_b_green.end(), s_prime.begin(), s_prime.end());
        expect_b_green.insert(expect_b_green.end(), ri.tab.begin(), ri.tab.end());
    }
    expect_b_green.insert(expect_b_green.end(), ri.lcs.strings[1].begin(),
                          ri.lcs.strings[1].end());
    if (read(er.a.dag, w.a_green) != expect_a_green)
        throw ConstructionMismatch("first green read diverges from its closed form");
    if (read(er.b.dag, w.b_green) != expect_b_green)
        throw ConstructionMismatch("second green read diverges from its closed form");
    return w;
}

// ---------------------------------------------------------------------------
// Extraction: scan for a window of n consecutive stages on which the green
// strands of both DAGs make identical choices and spell the same string per
// stage; the window covers every residue class, so that string is a common
// subsequence of all inputs.

inline Str lemma2_extract(const ReductionInstance& ri, const CoverSolution& sol) {
    const std::size_t n = ri.params.n, N = ri.params.stages;
    ExpandedReduction er = expand_instance(ri);
    if (!jointly_cover(er.a.dag, CoverPair{sol.r1, sol.g1}) ||
        !jointly_cover(er.b.dag, CoverPair{sol.r2, sol.g2}))
        throw CoverViolated("solution paths do not jointly cover");

    // Expanded ids of the stage nodes, per side.
    struct SideInfo {
        const ExpandResult* er;
        const SideLayout* layout;
    };
    SideInfo sides[2] = {{&er.a, &ri.layout_a}, {&er.b, &ri.layout_b}};

    auto visited_set = [](const DagPath& p, std::size_t size) {
        std::vector<bool> v(size, false);
        for (NodeId x : p) v[x] = true;
        return v;
    };
    std::vector<bool> vis[4] = {
        visited_set(sol.r1, er.a.dag.size()), visited_set(sol.g1, er.a.dag.size()),
        visited_set(sol.r2, er.b.dag.size()), visited_set(sol.g2, er.b.dag.size())};

    // Green colouring of one stage under one candidate green path, or
    // nullopt-like failure flag when the path is not in canonical form there.
    auto stage_colouring = [&](int side, const std::vector<bool>& green_vis, std::size_t stage,
                               std::vector<bool>& out) -> bool {
        const auto& info = sides[side];
        const auto& g = info.layout->stages[stage - 1];
        std::size_t ell = ri.params.ell;
        out.assign(ell, false);
        for (std::size_t j = 0; j < ell; ++j) {
            bool on_x = green_vis[info.er->chains[g.x[j]][0]];
            bool on_e = green_vis[info.er->chains[g.e[j]][0]];
            if (on_x == on_e) return false;  // skipped the stage or took both lanes
            for (NodeId part : info.er->chains[g.z[j]])
                if (green_vis[part]) return false;  // a separator detour is never green
            out[j] = on_x;
        }
        return true;
    };

    Str best;
    bool have = false;
    // Candidate role labelings, tried in a fixed order; the as-given labels
    // first, then the jointly swapped ones, then the mixed ones.
    const std::pair<int, int> candidates[4] = {{1, 3}, {0, 2}, {1, 2}, {0, 3}};
    for (auto [ga, gb] : candidates) {
        if (N < n) break;
        for (std::size_t t = 1; t + n - 1 <= N; ++t) {
            bool ok = true;
            Str window_read;
            for (std::size_t s = t; s < t + n && ok; ++s) {
                std::vector<bool> ca, cb;
                ok = stage_colouring(0, vis[ga], s, ca) && stage_colouring(1, vis[gb], s, cb) &&
                     ca == cb;
                if (!ok) break;
                Str w;
                const Str& src = ri.lcs.strings[s % n];
                for (std::size_t j = 0; j < ca.size(); ++j)
                    if (ca[j]) w.push_back(src[j]);
                if (s == t) {
                    window_read = std::move(w);
                } else if (w != window_read) {
                    ok = false;
                }
            }
            if (!ok) continue;
            if (!have || window_read.size() > best.size() ||
                (window_read.size() == best.size() && window_read < best)) {
                best = std::move(window_read);
                have = true;
            }
        }
    }
    if (!have)
        throw NoCanonicalInterval("no stage window with identical green strands");
    for (const Str& s : ri.lcs.strings)
        if (!is_subsequence(best, s))
            throw ConstructionMismatch("extracted string is not a common subsequence");
    return best;
}

// ---------------------------------------------------------------------------
// Casting into the diploid alignment problem over {0,1,d,t}.

inline ScoringScheme corollary_scheme(long long run_length) {
    if (run_length < 1) throw InvalidArgument("separator penalty must be positive");
    Alphabet alpha = Alphabet::corollary();
    const Score z = Score::of(0), one = Score::of(-1), run = Score::of(-run_length),
                bot = Score::neg_infinity();
    // rows/columns in order 0, 1, d, t, gap
    std::vector<Score> t = {
        z,   one, run, bot, one,  //
        one, z,   run, bot, one,  //
        run, run, z,   bot, run,  //
        bot, bot, bot, z,   bot,  //
        one, one, run, bot, z,    //
    };
    return ScoringScheme(std::move(alpha), std::move(t));
}

namespace reduction_detail {

inline void append_blocks(const LabeledDag& dag, const std::vector<Column>& columns,
                          GappedRow& top, GappedRow& bottom) {
    const Symbol kSep = 2, kTab = 3;  // 'd' and 't' in the 01dt alphabet
    for (const Column& col : columns) {
        switch (col.role) {
            case ColumnRole::Eps: break;  // empty labels leave no trace in the reads
            case ColumnRole::Head:
            case ColumnRole::Tail:
                for (Symbol c : dag.label(col.nodes[0])) {
                    top.push_back(c);
                    bottom.push_back(c);
                }
                break;
            case ColumnRole::Tab:
                top.push_back(kTab);
                bottom.push_back(col.nodes.size() == 2 ? kTab : kGap);
                break;
            case ColumnRole::Char: {
                Symbol c = 0;
                bool found = false;
                for (NodeId v : col.nodes) {
                    if (!dag.label(v).empty()) {
                        c = dag.label(v)[0];
                        found = true;
                    }
                }
                if (!found) throw MissingColumnMetadata("char column without a labeled node");
                top.push_back(c);
                bottom.push_back(kGap);
                break;
            }
            case ColumnRole::Dsep:
                top.push_back(kSep);
                bottom.push_back(kGap);
                break;
        }
    }
}

}  // namespace reduction_detail

inline DiploidInstance corollary_encode(const ReductionInstance& ri) {
    if (ri.columns_a.empty() || ri.columns_b.empty())
        throw MissingColumnMetadata("instance carries no column metadata");
    GappedRow a_top, a_bottom, b_top, b_bottom;
    reduction_detail::append_blocks(ri.dag_a, ri.columns_a, a_top, a_bottom);
    reduction_detail::append_blocks(ri.dag_b, ri.columns_b, b_top, b_bottom);
    return DiploidInstance(PairwiseAlignment(std::move(a_top), std::move(a_bottom)),
                           PairwiseAlignment(std::move(b_top), std::move(b_bottom)),
                           corollary_scheme((long long)ri.params.run_length));
}

struct CorollaryReport {
    long long diploid_score = 0;       // maximized recombination alignment score
    long long v1 = 0;                  // -diploid_score - 2*ell
    long long v2 = 0;                  // covering alignment optimum
    bool oracles_equal = false;
    Str lcs;
    long long witness_bound = 0;       // 2 * (ell - |lcs|)
    bool upper_bound_holds = false;    // v2 <= witness_bound
    DiploidSolution diploid_solution{SwapMask{}, SwapMask{}, Score::neg_infinity()};
    CoverSolution cover_solution;
};

// Runs both exact oracles on the same instance: the diploid brute force on
// the cast alignment pair, and the covering-alignment brute force on the
// expanded DAGs (sum objective, disjoint paths, both DAGs covered). Reports
// whether -score - 2*ell matches the covering optimum.
inline CorollaryReport corollary_verify(const ReductionInstance& ri,
                                        std::size_t diploid_guard = kDiploidEnumGuard,
                                        SolverOptions cover_opts = SolverOptions{}) {
    CorollaryReport rep;
    DiploidInstance di = corollary_encode(ri);
    rep.diploid_solution = solve_diploid_bruteforce(di, diploid_guard);
    rep.diploid_score = rep.diploid_solution.value.value();
    rep.v1 = -rep.diploid_score - 2 * (long long)ri.params.ell;

    cover_opts.objective.kind = ObjectiveKind::Sum;
    cover_opts.disjoint_d1 = cover_opts.disjoint_d2 = true;
    cover_opts.require_cover_d2 = true;
    cover_opts.source_to_sink_only = false;
    ExpandedReduction er = expand_instance(ri);
    rep.cover_solution = solve_bruteforce(er.a.dag, er.b.dag, cover_opts);
    rep.v2 = rep.cover_solution.value.primary;
    rep.oracles_equal = rep.v1 == rep.v2;

    rep.lcs = lcs_multi(ri.lcs.strings);
    rep.witness_bound = 2 * ((long long)ri.params.ell - (long long)rep.lcs.size());
    rep.upper_bound_holds = rep.v2 <= rep.witness_bound;
    return rep;
}

}  // namespace covalign
