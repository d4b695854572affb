#include "doctest.h"

#include <set>

#include "covalign/cover_solvers.hpp"
#include "test_util.hpp"

using namespace covalign;

namespace {
const Alphabet kBin = Alphabet::binary();

Str s(const char* text) { return kBin.parse(text); }

SolverOptions sum_opts() { return SolverOptions{}; }

// Reference enumeration of cover pairs: all ordered path pairs, filtered.
std::set<std::pair<DagPath, DagPath>> cover_pairs_by_filtering(const LabeledDag& d, bool disjoint,
                                                               bool st_only) {
    std::set<std::pair<DagPath, DagPath>> out;
    auto paths = enumerate_paths(d, false);
    for (const auto& p : paths) {
        for (const auto& q : paths) {
            if (!jointly_cover(d, CoverPair{p, q})) continue;
            if (disjoint && !paths_node_disjoint(p, q)) continue;
            if (st_only) {
                auto st = [&](const DagPath& x) {
                    return d.in(x.front()).empty() && d.out(x.back()).empty();
                };
                if (!st(p) || !st(q)) continue;
            }
            out.emplace(p, q);
        }
    }
    return out;
}
}  // namespace

TEST_CASE("cover pair enumeration matches the filtering definition") {
    Xorshift64Star rng(67);
    for (int it = 0; it < 60; ++it) {
        std::size_t n = 1 + rng.next_below(6);
        LabeledDag d = testutil::random_dag(rng, n, 20 + unsigned(rng.next_below(60)), 2, true);
        for (bool disjoint : {false, true}) {
            for (bool st : {false, true}) {
                auto fast = enumerate_cover_pairs(d, disjoint, st, 1'000'000);
                std::set<std::pair<DagPath, DagPath>> got;
                for (const auto& cp : fast) got.emplace(cp.red, cp.green);
                CHECK(got.size() == fast.size());
                CHECK(got == cover_pairs_by_filtering(d, disjoint, st));
                // The pre-count is exact below its cap.
                CHECK(count_cover_pairs(d, disjoint, st, 1'000'000) == fast.size());
                if (fast.size() > 1)
                    CHECK(count_cover_pairs(d, disjoint, st, 1) == 2);  // saturated
            }
        }
    }
}

TEST_CASE("identical DAGs align at zero cost") {
    Xorshift64Star rng(71);
    for (int it = 0; it < 10; ++it) {
        LabeledDag d = testutil::random_dag(rng, 1 + rng.next_below(5), 60, 2, true);
        if (!two_path_coverable(d)) continue;
        CoverSolution sol = solve_bruteforce(d, d, sum_opts());
        CHECK(sol.value.primary == 0);
        CHECK(evaluate_solution(d, d, sol, sum_opts()).primary == 0);
    }
}

TEST_CASE("line 01 against line 0") {
    LabeledDag d1 = line_dag(s("01"));
    LabeledDag d2 = line_dag(s("0"));
    CoverSolution sol = solve_bruteforce(d1, d2, sum_opts());
    CHECK(sol.value.primary == 1);
    // Lexicographically least witness quadruple.
    CHECK(sol.r1 == DagPath{0});
    CHECK(sol.g1 == DagPath{0, 1});
    CHECK(sol.r2 == DagPath{0});
    CHECK(sol.g2 == DagPath{0});
}

TEST_CASE("relaxing the second cover changes the optimum") {
    LabeledDag d1(LabelFlavor::Sigma, {s("0")}, {});
    LabeledDag d2 = line_dag(s("01"));
    SolverOptions relaxed = sum_opts();
    relaxed.require_cover_d2 = false;
    CHECK(solve_bruteforce(d1, d2, relaxed).value.primary == 0);
    CHECK(solve_bruteforce(d1, d2, sum_opts()).value.primary == 1);
}

TEST_CASE("uncoverable inputs are rejected") {
    LabeledDag wide(LabelFlavor::Sigma, {s("0"), s("1"), s("0")}, {});
    LabeledDag line = line_dag(s("0"));
    CHECK_FALSE(two_path_coverable(wide));
    CHECK_THROWS_AS(solve_bruteforce(wide, line, sum_opts()), NotCoverable);
    CHECK_THROWS_AS(solve_bruteforce(line, wide, sum_opts()), NotCoverable);
    SolverOptions disjoint = sum_opts();
    disjoint.disjoint_d1 = true;
    // A single node cannot host two disjoint non-empty paths.
    CHECK_THROWS_AS(solve_bruteforce(line, line, disjoint), NotCoverable);
}

TEST_CASE("evaluate_solution recomputes and validates") {
    LabeledDag d1 = line_dag(s("01"));
    LabeledDag d2 = line_dag(s("0"));
    CoverSolution sol = solve_bruteforce(d1, d2, sum_opts());
    CHECK(evaluate_solution(d1, d2, sol, sum_opts()) == sol.value);

    CoverSolution bad = sol;
    bad.g1 = DagPath{1};
    bad.r1 = DagPath{1};
    CHECK_THROWS_AS(evaluate_solution(d1, d2, bad, sum_opts()), CoverViolated);
    CoverSolution invalid = sol;
    invalid.r1 = DagPath{1, 0};
    CHECK_THROWS_AS(evaluate_solution(d1, d2, invalid, sum_opts()), InvalidPath);
    SolverOptions disjoint = sum_opts();
    disjoint.disjoint_d2 = true;
    CoverSolution overlapping = sol;  // r2 == g2 == {0}
    CHECK_THROWS_AS(evaluate_solution(d1, d2, overlapping, disjoint), DisjointnessViolated);
}

TEST_CASE("sum objective is symmetric in the strands") {
    Xorshift64Star rng(73);
    for (int it = 0; it < 20; ++it) {
        LabeledDag d1 = testutil::random_dag(rng, 1 + rng.next_below(5), 60, 2, true);
        LabeledDag d2 = testutil::random_dag(rng, 1 + rng.next_below(5), 60, 2, true);
        if (!two_path_coverable(d1) || !two_path_coverable(d2)) continue;
        CoverSolution sol = solve_bruteforce(d1, d2, sum_opts());
        CoverSolution swapped{sol.g1, sol.r1, sol.g2, sol.r2, 0, 0, {}};
        CHECK(evaluate_solution(d1, d2, swapped, sum_opts()).primary == sol.value.primary);
    }
}

TEST_CASE("lexicographic and max objectives fold as declared") {
    LabeledDag d1 = line_dag(s("01"));
    LabeledDag d2 = line_dag(s("0"));
    SolverOptions lex = sum_opts();
    lex.objective.kind = ObjectiveKind::Lexicographic;
    CoverSolution sol = solve_bruteforce(d1, d2, lex);
    CHECK(sol.value.is_pair);
    CHECK(sol.value.primary == 0);  // red strand can always be made exact here
    CHECK(sol.value.secondary == 1);

    SolverOptions mx = sum_opts();
    mx.objective.kind = ObjectiveKind::MaxOfTwo;
    CHECK(solve_bruteforce(d1, d2, mx).value.primary == 1);

    SolverOptions weighted = sum_opts();
    weighted.objective.kind = ObjectiveKind::Weighted;
    weighted.objective.alpha_red = 2;
    weighted.objective.alpha_green = 3;
    CoverSolution w = solve_bruteforce(d1, d2, weighted);
    CHECK(w.value.primary == 2 * w.dist_red + 3 * w.dist_green);
}

TEST_CASE("requiring more makes the optimum no better") {
    Xorshift64Star rng(79);
    int checked = 0;
    for (int it = 0; it < 40 && checked < 15; ++it) {
        LabeledDag d1 = testutil::random_dag(rng, 2 + rng.next_below(4), 60, 2, true);
        LabeledDag d2 = testutil::random_dag(rng, 2 + rng.next_below(4), 60, 2, true);
        if (!two_path_coverable(d1) || !two_path_coverable(d2)) continue;
        SolverOptions base = sum_opts();
        SolverOptions relaxed = base;
        relaxed.require_cover_d2 = false;
        long long full = solve_bruteforce(d1, d2, base).value.primary;
        long long part = solve_bruteforce(d1, d2, relaxed).value.primary;
        CHECK(full >= part);

        SolverOptions tight = base;
        tight.disjoint_d1 = tight.disjoint_d2 = true;
        try {
            long long disjoint = solve_bruteforce(d1, d2, tight).value.primary;
            CHECK(disjoint >= full);
        } catch (const NotCoverable&) {
            // Tightening may remove every admissible solution.
        }
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("dp engine on the encoded alignment example") {
    const Alphabet ab("ab");
    PairwiseAlignment a(ab.parse_gapped("a-"), ab.parse_gapped("-b"));
    LabeledDag d1 = encode_diploid(a);
    LabeledDag d2 = line_dag(ab.parse("ab"));
    SolverOptions relaxed = sum_opts();
    relaxed.require_cover_d2 = false;
    CoverSolution dp = solve_relaxed_dp(d1, d2, relaxed);
    CHECK(dp.value.primary == 0);
    CHECK(solve_bruteforce(d1, d2, relaxed).value.primary == 0);
    CHECK(evaluate_solution(d1, d2, dp, relaxed) == dp.value);
}

TEST_CASE("dp engine equals brute force on random instances") {
    Xorshift64Star rng(83);
    int checked = 0;
    for (int it = 0; it < 120 && checked < 40; ++it) {
        LabeledDag d1 = testutil::random_dag(rng, 1 + rng.next_below(6), 50, 2, true);
        LabeledDag d2 = testutil::random_dag(rng, 1 + rng.next_below(5), 50, 2, true);
        if (!two_path_coverable(d1)) continue;
        SolverOptions opts = sum_opts();
        opts.require_cover_d2 = false;
        opts.disjoint_d1 = rng.next_below(2) == 0;
        CoverSolution brute;
        try {
            brute = solve_bruteforce(d1, d2, opts);
        } catch (const NotCoverable&) {
            CHECK_THROWS_AS(solve_relaxed_dp(d1, d2, opts), NotCoverable);
            continue;
        }
        CoverSolution dp = solve_relaxed_dp(d1, d2, opts);
        CHECK(dp.value.primary == brute.value.primary);
        CHECK(evaluate_solution(d1, d2, dp, opts) == dp.value);
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("dp engine handles endpoint restriction and degenerate weights") {
    Xorshift64Star rng(87);
    int checked = 0;
    for (int it = 0; it < 120 && checked < 30; ++it) {
        LabeledDag d1 = testutil::random_dag(rng, 1 + rng.next_below(5), 50, 2, true);
        LabeledDag d2 = testutil::random_dag(rng, 1 + rng.next_below(5), 50, 2, true);
        if (!two_path_coverable(d1)) continue;
        SolverOptions opts = sum_opts();
        opts.require_cover_d2 = false;
        opts.source_to_sink_only = rng.next_below(2) == 0;
        if (rng.next_below(2) == 0) {
            opts.objective.kind = ObjectiveKind::Weighted;
            opts.objective.alpha_red = (long long)rng.next_below(3);  // zero allowed
            opts.objective.alpha_green = opts.objective.alpha_red == 0
                                             ? 1 + (long long)rng.next_below(3)
                                             : (long long)rng.next_below(3);
        }
        CoverSolution brute;
        try {
            brute = solve_bruteforce(d1, d2, opts);
        } catch (const NotCoverable&) {
            CHECK_THROWS_AS(solve_relaxed_dp(d1, d2, opts), NotCoverable);
            continue;
        }
        CoverSolution dp = solve_relaxed_dp(d1, d2, opts);
        CHECK(dp.value == brute.value);
        CHECK(evaluate_solution(d1, d2, dp, opts) == dp.value);
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("dp engine rejects unsupported options") {
    LabeledDag d = line_dag(s("01"));
    SolverOptions covered = sum_opts();
    CHECK_THROWS_AS(solve_relaxed_dp(d, d, covered), UnsupportedOptions);
    SolverOptions lex = sum_opts();
    lex.require_cover_d2 = false;
    lex.objective.kind = ObjectiveKind::Lexicographic;
    CHECK_THROWS_AS(solve_relaxed_dp(d, d, lex), UnsupportedOptions);
    SolverOptions disjoint2 = sum_opts();
    disjoint2.require_cover_d2 = false;
    disjoint2.disjoint_d2 = true;
    CHECK_THROWS_AS(solve_relaxed_dp(d, d, disjoint2), UnsupportedOptions);
    LabeledDag star(LabelFlavor::SigmaStar, {kBin.parse("01")}, {});
    SolverOptions ok = sum_opts();
    ok.require_cover_d2 = false;
    CHECK_THROWS_AS(solve_relaxed_dp(star, d, ok), UnsupportedOptions);
}

TEST_CASE("source-to-sink restriction is honored") {
    LabeledDag d1 = line_dag(s("01"));
    LabeledDag d2 = line_dag(s("0"));
    SolverOptions st = sum_opts();
    st.source_to_sink_only = true;
    CoverSolution sol = solve_bruteforce(d1, d2, st);
    CHECK(sol.r1 == DagPath{0, 1});
    CHECK(sol.g1 == DagPath{0, 1});
    CHECK(sol.value.primary == 2);  // both strands read "01" against "0"
    SolverOptions st_dp = st;
    st_dp.require_cover_d2 = false;
    CHECK(solve_relaxed_dp(d1, d2, st_dp).value.primary ==
          solve_bruteforce(d1, d2, st_dp).value.primary);
}

namespace {

// Fully independent reference: scan every ordered path quadruple directly.
// Shares nothing with the solver beyond path enumeration and the distance
// primitive.
bool naive_best(const LabeledDag& d1, const LabeledDag& d2, const SolverOptions& opts,
                CoverSolution& out) {
    auto st_ok = [](const LabeledDag& d, const DagPath& p) {
        return d.in(p.front()).empty() && d.out(p.back()).empty();
    };
    auto paths1 = enumerate_paths(d1, false);
    auto paths2 = enumerate_paths(d2, false);
    bool have = false;
    for (const auto& r1 : paths1) {
        for (const auto& g1 : paths1) {
            if (!jointly_cover(d1, CoverPair{r1, g1})) continue;
            if (opts.disjoint_d1 && !paths_node_disjoint(r1, g1)) continue;
            if (opts.source_to_sink_only && (!st_ok(d1, r1) || !st_ok(d1, g1))) continue;
            for (const auto& r2 : paths2) {
                for (const auto& g2 : paths2) {
                    if (opts.require_cover_d2 && !jointly_cover(d2, CoverPair{r2, g2})) continue;
                    if (opts.disjoint_d2 && !paths_node_disjoint(r2, g2)) continue;
                    if (opts.source_to_sink_only && (!st_ok(d2, r2) || !st_ok(d2, g2))) continue;
                    long long dr = (long long)edit_distance(read(d1, r1), read(d2, r2));
                    long long dg = (long long)edit_distance(read(d1, g1), read(d2, g2));
                    ObjectiveValue v = fold_objective(opts.objective, dr, dg);
                    bool better =
                        !have || v < out.value ||
                        (v == out.value && std::tie(r1, g1, r2, g2) <
                                               std::tie(out.r1, out.g1, out.r2, out.g2));
                    if (better) {
                        out = CoverSolution{r1, g1, r2, g2, dr, dg, v};
                        have = true;
                    }
                }
            }
        }
    }
    return have;
}

}  // namespace

TEST_CASE("solver matches the naive quadruple scan on every option combination") {
    Xorshift64Star rng(91);
    const ObjectiveKind kinds[] = {ObjectiveKind::Sum, ObjectiveKind::Weighted,
                                   ObjectiveKind::Lexicographic, ObjectiveKind::MaxOfTwo};
    int agreements = 0;
    for (int it = 0; it < 12; ++it) {
        LabeledDag d1 = testutil::random_dag(rng, 1 + rng.next_below(4), 60, 2, true);
        LabeledDag d2 = testutil::random_dag(rng, 1 + rng.next_below(4), 60, 2, true);
        for (ObjectiveKind kind : kinds) {
            for (int flags = 0; flags < 16; ++flags) {
                SolverOptions opts;
                opts.objective.kind = kind;
                if (kind == ObjectiveKind::Weighted) {
                    opts.objective.alpha_red = (long long)rng.next_below(3);  // zero allowed
                    opts.objective.alpha_green = 1 + (long long)rng.next_below(3);
                }
                opts.disjoint_d1 = flags & 1;
                opts.disjoint_d2 = flags & 2;
                opts.require_cover_d2 = flags & 4;
                opts.source_to_sink_only = flags & 8;
                CoverSolution expected;
                bool feasible = two_path_coverable(d1) &&
                                (!opts.require_cover_d2 || two_path_coverable(d2)) &&
                                naive_best(d1, d2, opts, expected);
                if (!feasible) {
                    CHECK_THROWS_AS(solve_bruteforce(d1, d2, opts), NotCoverable);
                    continue;
                }
                CoverSolution got = solve_bruteforce(d1, d2, opts);
                CHECK(got.value == expected.value);
                CHECK(got.r1 == expected.r1);
                CHECK(got.g1 == expected.g1);
                CHECK(got.r2 == expected.r2);
                CHECK(got.g2 == expected.g2);
                CHECK(evaluate_solution(d1, d2, got, opts) == got.value);
                ++agreements;
            }
        }
    }
    CHECK(agreements > 300);
}

TEST_CASE("guards reject oversized enumerations") {
    Xorshift64Star rng(89);
    LabeledDag d = testutil::random_dag(rng, 6, 80, 2, false);
    SolverOptions tiny = sum_opts();
    tiny.max_pairs_per_dag = 2;
    CHECK_THROWS_AS(solve_bruteforce(d, d, tiny), InstanceTooLarge);
}
