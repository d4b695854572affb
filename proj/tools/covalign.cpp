// Command-line surface for the covering-alignment library: pairwise scoring,
// covering alignment of labeled DAGs, diploid encodings, construction of
// LCS-derived instances and their verification.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "covalign/covalign.hpp"

namespace {

using namespace covalign;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;
constexpr int kExitCheckFailed = 4;

struct CheckFailure : Error {
    using Error::Error;
};

Str remap(const Alphabet& from, const Str& s, const Alphabet& to) {
    return to.parse(from.format(s));
}

Objective parse_objective(const std::string& spec) {
    Objective obj;
    if (spec == "sum") {
        obj.kind = ObjectiveKind::Sum;
    } else if (spec == "lex") {
        obj.kind = ObjectiveKind::Lexicographic;
    } else if (spec == "max") {
        obj.kind = ObjectiveKind::MaxOfTwo;
    } else if (spec.rfind("weighted:", 0) == 0) {
        obj.kind = ObjectiveKind::Weighted;
        std::string rest = spec.substr(9);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw ParseError("expected weighted:aR,aG");
        obj.alpha_red = (long long)parse_number(rest.substr(0, comma));
        obj.alpha_green = (long long)parse_number(rest.substr(comma + 1));
        validate_objective(obj);
    } else {
        throw ParseError("unknown objective '" + spec + "'");
    }
    return obj;
}

const char* objective_token(ObjectiveKind k) {
    switch (k) {
        case ObjectiveKind::Sum: return "sum";
        case ObjectiveKind::Weighted: return "weighted";
        case ObjectiveKind::Lexicographic: return "lex";
        case ObjectiveKind::MaxOfTwo: return "max";
    }
    return "?";
}

int run_align(const std::string& file_a, const std::string& file_b, const std::string& scheme_spec,
              long long dsep, bool witness) {
    StringFile a = parse_string_lines(read_text_file(file_a), 1, 1);
    StringFile b = parse_string_lines(read_text_file(file_b), 1, 1);
    if (a.alphabet != b.alphabet) throw ParseError("the two files declare different alphabets");

    ScoringScheme scheme = [&]() {
        if (scheme_spec == "unit") return ScoringScheme::unit(a.alphabet);
        if (scheme_spec == "corollary") return corollary_scheme(dsep);
        return parse_scheme_file(read_text_file(scheme_spec));
    }();
    Str s = remap(a.alphabet, a.strings[0], scheme.alphabet());
    Str t = remap(b.alphabet, b.strings[0], scheme.alphabet());

    std::cout << "distance: " << edit_distance(s, t) << "\n";
    Score score = global_alignment_score(s, t, scheme);
    std::cout << "score: " << (score.finite() ? std::to_string(score.value()) : "-inf") << "\n";
    if (witness && score.finite()) {
        AlignmentWitness w = global_alignment_witness(s, t, scheme);
        std::cout << "witness_a: " << scheme.alphabet().format_row(w.row_a) << "\n";
        std::cout << "witness_b: " << scheme.alphabet().format_row(w.row_b) << "\n";
    }
    return kExitOk;
}

int run_cover_align(const std::string& file_d1, const std::string& file_d2,
                    const std::string& objective_spec, bool disjoint1, bool disjoint2,
                    bool no_cover_d2, bool source_sink, const std::string& engine,
                    std::size_t max_pairs, std::size_t max_combos) {
    std::string text1 = read_text_file(file_d1), text2 = read_text_file(file_d2);
    std::string chars = dag_file_label_chars(text1 + text2);
    if (chars.empty()) chars = "01";
    Alphabet alpha(chars);
    LabeledDag d1 = parse_dag_file(text1, alpha);
    LabeledDag d2 = parse_dag_file(text2, alpha);

    SolverOptions opts;
    opts.objective = parse_objective(objective_spec);
    opts.disjoint_d1 = disjoint1;
    opts.disjoint_d2 = disjoint2;
    opts.require_cover_d2 = !no_cover_d2;
    opts.source_to_sink_only = source_sink;
    opts.max_pairs_per_dag = max_pairs;
    opts.max_combinations = max_combos;
    if (engine == "dp" &&
        (opts.require_cover_d2 || (opts.objective.kind != ObjectiveKind::Sum &&
                                   opts.objective.kind != ObjectiveKind::Weighted)))
        throw ParseError("the dp engine needs --no-cover-d2 and a sum or weighted objective");

    CoverSolution sol =
        engine == "dp" ? solve_relaxed_dp(d1, d2, opts) : solve_bruteforce(d1, d2, opts);
    std::cout << "objective: " << objective_token(opts.objective.kind) << "\n";
    std::cout << "engine: " << engine << "\n";
    std::cout << "dist_red: " << sol.dist_red << "\n";
    std::cout << "dist_green: " << sol.dist_green << "\n";
    std::cout << format_solution(sol);
    return kExitOk;
}

int run_encode_diploid(const std::string& alignment_file) {
    AlignmentFile f = parse_alignment_file(read_text_file(alignment_file));
    if (f.alignments.size() != 1)
        throw ParseError("encode-diploid expects a file with exactly one alignment");
    LabeledDag d = encode_diploid(f.alignments[0]);
    std::cout << format_dag_file(d, f.alphabet);
    return kExitOk;
}

int run_reduce(const std::string& lcs_file, const std::string& out_dir,
               const std::string& scale_token, std::uint64_t seed, std::uint64_t stages_override,
               std::uint64_t tab_length_override, std::uint64_t tab_k_override,
               std::uint64_t max_bundle_bytes) {
    StringFile f = parse_string_lines(read_text_file(lcs_file), 1, 1000);
    if (f.alphabet != Alphabet::binary()) throw ParseError("LCS instances use the 01 alphabet");
    LcsInstance inst(f.strings);
    Scale scale = scale_token == "paper" ? Scale::Paper : Scale::Desk;
    ReductionParams params = default_params(inst, scale, seed);
    if (stages_override != 0) params.stages = std::size_t(stages_override);
    if (tab_length_override != 0) {
        params.tab_length = std::size_t(tab_length_override);
        params.tab_k = scale == Scale::Paper
                           ? ceil_log2(std::uint64_t(params.tab_length) *
                                       std::uint64_t(params.tab_length))
                           : desk_tab_k(params.tab_length);
    }
    if (tab_k_override != 0) params.tab_k = std::size_t(tab_k_override);

    // Refuse obviously oversized bundles before building anything.
    std::uint64_t label_estimate =
        std::uint64_t(2 * params.stages + 1) * params.tab_length +
        std::uint64_t(params.stages) * params.ell * (params.run_length + 4) + 4 * params.ell;
    if (2 * label_estimate + 65536 > max_bundle_bytes)
        throw InstanceTooLarge("bundle would exceed the size cap");

    ReductionInstance ri = build_instance(inst, params);
    write_bundle(out_dir, ri);
    std::cout << "n: " << params.n << "\n";
    std::cout << "ell: " << params.ell << "\n";
    std::cout << "run: " << params.run_length << "\n";
    std::cout << "stages: " << params.stages << "\n";
    std::cout << "sep_bound: " << params.separator_bound << "\n";
    std::cout << "tab_length: " << params.tab_length << "\n";
    std::cout << "tab_k: " << params.tab_k << "\n";
    std::cout << "seed: " << params.seed << "\n";
    std::cout << "tab: " << Alphabet::binary().format(ri.tab) << "\n";
    std::cout << "tab_distinct: "
              << (all_substrings_distinct(ri.tab, params.tab_k) ? "yes" : "no") << "\n";
    std::cout << "bundle: " << out_dir << "\n";
    return kExitOk;
}

struct VerifyOutcome {
    bool failed = false;
};

void verify_lemma1(const ReductionInstance& ri, VerifyOutcome& out) {
    Str lcs = lcs_multi(ri.lcs.strings);
    WitnessPaths w = lemma1_witness(ri, lcs);
    ExpandedReduction er = expand_instance(ri);
    long long d_red = (long long)edit_distance(read(er.a.dag, w.a_red), read(er.b.dag, w.b_red));
    long long d_green =
        (long long)edit_distance(read(er.a.dag, w.a_green), read(er.b.dag, w.b_green));
    bool pass = d_red == 0 && d_green == 2 * (long long)w.delta;
    std::cout << "mode: lemma1\n";
    std::cout << "s_prime: " << Alphabet::binary().format(lcs) << "\n";
    std::cout << "delta: " << w.delta << "\n";
    std::cout << "dist_red: " << d_red << "\n";
    std::cout << "dist_green: " << d_green << "\n";
    std::cout << "lemma1: " << (pass ? "PASS" : "FAIL") << "\n";
    if (!pass) out.failed = true;
}

void verify_lemma2(const ReductionInstance& ri, std::size_t max_pairs, std::size_t max_combos,
                   VerifyOutcome& out) {
    SolverOptions opts;
    opts.objective.kind = ObjectiveKind::Sum;
    opts.disjoint_d1 = opts.disjoint_d2 = true;
    opts.require_cover_d2 = true;
    opts.max_pairs_per_dag = max_pairs;
    opts.max_combinations = max_combos;
    ExpandedReduction er = expand_instance(ri);
    CoverSolution sol = solve_bruteforce(er.a.dag, er.b.dag, opts);
    Str extracted = lemma2_extract(ri, sol);
    bool subseq = true;
    for (const Str& s : ri.lcs.strings) subseq = subseq && is_subsequence(extracted, s);
    long long value = sol.value.primary;
    long long slack = 2 * ((long long)ri.params.ell - (long long)extracted.size());
    bool bound = slack <= value;
    Str lcs = lcs_multi(ri.lcs.strings);
    long long two_delta = 2 * ((long long)ri.params.ell - (long long)lcs.size());
    std::cout << "mode: lemma2\n";
    std::cout << "value: " << value << "\n";
    std::cout << "s_prime: " << Alphabet::binary().format(extracted) << "\n";
    std::cout << "subsequence_check: " << (subseq ? "PASS" : "FAIL") << "\n";
    std::cout << "bound_check: " << (bound ? "PASS" : "FAIL") << "\n";
    std::cout << "optimum_equals_2delta: " << (value == two_delta ? "yes" : "no") << "\n";
    if (!subseq || !bound) out.failed = true;
}

void verify_corollary(const ReductionInstance& ri, std::size_t max_pairs, std::size_t max_combos,
                      std::size_t diploid_guard, VerifyOutcome& out) {
    SolverOptions opts;
    opts.max_pairs_per_dag = max_pairs;
    opts.max_combinations = max_combos;
    CorollaryReport rep = corollary_verify(ri, diploid_guard, opts);
    std::cout << "mode: corollary\n";
    std::cout << "diploid_score: " << rep.diploid_score << "\n";
    std::cout << "v1: " << rep.v1 << "\n";
    std::cout << "v2: " << rep.v2 << "\n";
    std::cout << "oracles_equal: " << (rep.oracles_equal ? "yes" : "no") << "\n";
    std::cout << "lcs: " << Alphabet::binary().format(rep.lcs) << "\n";
    std::cout << "upper_bound_check: " << (rep.upper_bound_holds ? "PASS" : "FAIL") << "\n";
    if (!rep.upper_bound_holds) out.failed = true;
}

constexpr std::size_t kVerifyMaxExpandedNodes = 200'000;

std::size_t expanded_size(const LabeledDag& d) {
    std::size_t total = 0;
    for (NodeId v = 0; v < d.size(); ++v) total += std::max<std::size_t>(1, d.label(v).size());
    return total;
}

int run_verify(const std::string& bundle_dir, const std::string& mode, std::size_t max_pairs,
               std::size_t max_combos, std::size_t diploid_guard) {
    if (diploid_guard > kDiploidEnumGuard)
        std::cerr << "warning: diploid enumeration guard raised above " << kDiploidEnumGuard
                  << "; the search may not terminate soon\n";
    ReductionInstance ri = read_bundle(bundle_dir);
    if (expanded_size(ri.dag_a) + expanded_size(ri.dag_b) > kVerifyMaxExpandedNodes)
        throw InstanceTooLarge("bundle too large for desk-scale verification");
    VerifyOutcome out;
    if (mode == "lemma1" || mode == "full") verify_lemma1(ri, out);
    if (mode == "lemma2" || mode == "full") verify_lemma2(ri, max_pairs, max_combos, out);
    if (mode == "corollary" || mode == "full")
        verify_corollary(ri, max_pairs, max_combos, diploid_guard, out);
    return out.failed ? kExitCheckFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"covering alignment of labeled DAGs and diploid alignment"};
    app.require_subcommand(1);

    auto* align = app.add_subcommand("align", "edit distance and scored alignment of two strings");
    std::string align_a, align_b, align_scheme = "unit";
    long long align_dsep = 3;
    bool align_witness = false;
    align->add_option("--a", align_a, "first string file")->required();
    align->add_option("--b", align_b, "second string file")->required();
    align->add_option("--scheme", align_scheme, "unit | corollary | scheme file");
    align->add_option("--dsep", align_dsep, "separator penalty used by the corollary scheme");
    align->add_flag("--witness", align_witness, "print one optimal alignment");

    auto* cover = app.add_subcommand("cover-align", "covering alignment of two labeled DAGs");
    std::string cov_d1, cov_d2, cov_objective = "sum", cov_engine = "brute";
    bool cov_disjoint1 = false, cov_disjoint2 = false, cov_no_cover_d2 = false,
         cov_source_sink = false;
    std::size_t cov_max_pairs = 5'000'000, cov_max_combos = 200'000'000;
    cover->add_option("--d1", cov_d1, "first DAG file")->required();
    cover->add_option("--d2", cov_d2, "second DAG file")->required();
    cover->add_option("--objective", cov_objective, "sum | weighted:aR,aG | lex | max");
    cover->add_flag("--disjoint1", cov_disjoint1, "require disjoint paths in the first DAG");
    cover->add_flag("--disjoint2", cov_disjoint2, "require disjoint paths in the second DAG");
    cover->add_flag("--no-cover-d2", cov_no_cover_d2, "drop the cover requirement on the second DAG");
    cover->add_flag("--source-sink", cov_source_sink, "restrict to source-to-sink paths");
    cover->add_option("--engine", cov_engine, "brute | dp");
    cover->add_option("--max-pairs", cov_max_pairs, "per-DAG enumeration guard");
    cover->add_option("--max-combos", cov_max_combos, "combination guard");

    auto* encode = app.add_subcommand("encode-diploid", "encode an alignment as a labeled DAG");
    std::string enc_alignment;
    encode->add_option("--alignment", enc_alignment, "alignment file")->required();

    auto* reduce = app.add_subcommand("reduce", "build a covering-alignment instance from strings");
    std::string red_lcs, red_out, red_scale = "desk";
    std::uint64_t red_seed = 1, red_stages = 0, red_tab_length = 0, red_tab_k = 0;
    std::uint64_t red_max_bytes = 16ULL * 1024 * 1024;
    reduce->add_option("--lcs", red_lcs, "instance file, one binary string per line")->required();
    reduce->add_option("--out", red_out, "output bundle directory")->required();
    reduce->add_option("--scale", red_scale, "paper | desk")
        ->check(CLI::IsMember({"paper", "desk"}));
    reduce->add_option("--seed", red_seed, "tab generator seed");
    reduce->add_option("--N", red_stages, "override the stage count (0 keeps the default)");
    reduce->add_option("--tab-length", red_tab_length, "override the tab length (0 keeps the default)");
    reduce->add_option("--tab-k", red_tab_k, "override the tab window length (0 keeps the default)");
    reduce->add_option("--max-bundle-bytes", red_max_bytes, "size cap for the bundle");

    auto* verify = app.add_subcommand("verify", "check a bundle against its contracts");
    std::string ver_bundle, ver_mode = "full";
    std::size_t ver_max_pairs = 5'000'000, ver_max_combos = 400'000'000, ver_diploid_guard = 12;
    verify->add_option("--bundle", ver_bundle, "bundle directory")->required();
    verify->add_option("--mode", ver_mode, "lemma1 | lemma2 | corollary | full")
        ->check(CLI::IsMember({"lemma1", "lemma2", "corollary", "full"}));
    verify->add_option("--max-pairs", ver_max_pairs, "per-DAG enumeration guard");
    verify->add_option("--max-combos", ver_max_combos, "combination guard");
    verify->add_option("--diploid-guard", ver_diploid_guard, "diploid enumeration guard");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (align->parsed())
            return run_align(align_a, align_b, align_scheme, align_dsep, align_witness);
        if (cover->parsed())
            return run_cover_align(cov_d1, cov_d2, cov_objective, cov_disjoint1, cov_disjoint2,
                                   cov_no_cover_d2, cov_source_sink, cov_engine, cov_max_pairs,
                                   cov_max_combos);
        if (encode->parsed()) return run_encode_diploid(enc_alignment);
        if (reduce->parsed())
            return run_reduce(red_lcs, red_out, red_scale, red_seed, red_stages, red_tab_length,
                              red_tab_k, red_max_bytes);
        if (verify->parsed())
            return run_verify(ver_bundle, ver_mode, ver_max_pairs, ver_max_combos,
                              ver_diploid_guard);
    } catch (const InstanceTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitGuard;
    } catch (const NoCanonicalInterval& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const ConstructionMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const RetriesExhausted& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCheckFailed;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitInput;
}
