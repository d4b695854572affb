#include "doctest.h"

#include <filesystem>

#include "covalign/io.hpp"
#include "test_util.hpp"

using namespace covalign;

namespace {
const Alphabet kBin = Alphabet::binary();

Str s(const char* text) { return kBin.parse(text); }

std::filesystem::path scratch_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "covalign_io_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}
}  // namespace

TEST_CASE("string files round-trip") {
    std::string text = format_string_lines(kBin, {s("01"), s("10")});
    CHECK(text == "alphabet 01\n01\n10\n");
    StringFile f = parse_string_lines(text, 1, 10);
    CHECK(f.alphabet == kBin);
    CHECK(f.strings == std::vector<Str>{s("01"), s("10")});
    CHECK(format_string_lines(f.alphabet, f.strings) == text);

    CHECK_THROWS_AS(parse_string_lines("", 1, 10), ParseError);
    CHECK_THROWS_AS(parse_string_lines("alphabet 01\n", 1, 10), ParseError);
    CHECK_THROWS_AS(parse_string_lines("alphabet 01\n02\n", 1, 10), ParseError);
    CHECK_THROWS_AS(parse_string_lines("alpha 01\n0\n", 1, 10), ParseError);
}

TEST_CASE("alignment files round-trip, single and paired") {
    Alphabet ab("ab");
    PairwiseAlignment one(ab.parse_gapped("a-"), ab.parse_gapped("-b"));
    PairwiseAlignment two(ab.parse_gapped("ab"), ab.parse_gapped("ba"));
    std::string single = format_alignment_file(ab, {one});
    CHECK(single == "alphabet ab\na-\n-b\n");
    AlignmentFile f1 = parse_alignment_file(single);
    CHECK(f1.alignments.size() == 1);
    CHECK(f1.alignments[0] == one);

    std::string paired_text = format_alignment_file(ab, {one, two});
    AlignmentFile f2 = parse_alignment_file(paired_text);
    CHECK(f2.alignments.size() == 2);
    CHECK(f2.alignments[1] == two);
    CHECK(format_alignment_file(f2.alphabet, f2.alignments) == paired_text);

    CHECK_THROWS_AS(parse_alignment_file("alphabet ab\na-\n"), ParseError);
    CHECK_THROWS_AS(parse_alignment_file("alphabet ab\na-\nb\n"), LengthMismatch);
    CHECK_THROWS_AS(parse_alignment_file("alphabet ab\na\nb\n\n"), ParseError);
}

TEST_CASE("dag files round-trip") {
    LabeledDag d(LabelFlavor::SigmaStar, {s("01"), Str{}, s("1")}, {{0, 1}, {0, 2}, {1, 2}});
    std::string text = format_dag_file(d, kBin);
    CHECK(text ==
          "dag sigmastar 3\n"
          "node 0 \"01\"\n"
          "node 1 \"\"\n"
          "node 2 \"1\"\n"
          "edge 0 1\n"
          "edge 0 2\n"
          "edge 1 2\n");
    LabeledDag back = parse_dag_file(text, kBin);
    CHECK(back.flavor() == d.flavor());
    CHECK(back.labels() == d.labels());
    CHECK(back.arcs() == d.arcs());
    CHECK(dag_file_label_chars(text) == "01");

    CHECK_THROWS_AS(parse_dag_file("dag sigmastar 2\nnode 0 \"0\"\n", kBin), ParseError);
    CHECK_THROWS_AS(parse_dag_file("dag nosuch 1\nnode 0 \"0\"\n", kBin), ParseError);
    // edge to a nonexistent node
    CHECK_THROWS_AS(
        parse_dag_file("dag sigma 1\nnode 0 \"0\"\nedge 0 3\n", kBin), ParseError);
    // cycle
    CHECK_THROWS_AS(
        parse_dag_file("dag sigma 2\nnode 0 \"0\"\nnode 1 \"1\"\nedge 0 1\nedge 1 0\n", kBin),
        CyclicGraph);
}

TEST_CASE("scheme files round-trip") {
    ScoringScheme unit = ScoringScheme::unit(kBin);
    std::string text = format_scheme_file(unit);
    ScoringScheme back = parse_scheme_file(text);
    CHECK(format_scheme_file(back) == text);
    ScoringScheme cor = corollary_scheme(5);
    ScoringScheme cor_back = parse_scheme_file(format_scheme_file(cor));
    CHECK(format_scheme_file(cor_back) == format_scheme_file(cor));
    CHECK(cor_back.at(3, 0) == Score::neg_infinity());

    CHECK_THROWS_AS(parse_scheme_file("scheme 01\ns 0 0 0\n"), ParseError);
}

TEST_CASE("solution serialization") {
    CoverSolution sol;
    sol.r1 = {0};
    sol.g1 = {0, 1};
    sol.r2 = {0};
    sol.g2 = {0};
    sol.value = {1, 0, false};
    CHECK(format_solution(sol) ==
          "value 1\n"
          "path r1 0\n"
          "path g1 0 1\n"
          "path r2 0\n"
          "path g2 0\n");
    sol.value = {0, 2, true};
    CHECK(format_solution(sol).rfind("value 0 2\n", 0) == 0);
}

TEST_CASE("bundles are byte-stable and self-checking") {
    LcsInstance inst({s("01"), s("10")});
    ReductionParams p = default_params(inst, Scale::Desk, 7);
    p.stages = 2;
    p.tab_length = 4;
    p.tab_k = 2;
    ReductionInstance ri = build_instance(inst, p);

    auto dir = scratch_dir("bundle");
    write_bundle(dir, ri);
    ReductionInstance back = read_bundle(dir);
    CHECK(back.tab == ri.tab);
    CHECK(back.dag_a.labels() == ri.dag_a.labels());
    CHECK(back.dag_b.arcs() == ri.dag_b.arcs());
    CHECK(format_meta(back) == format_meta(ri));

    // Writing again is byte-identical.
    std::string a_before = read_text_file(dir / "a.dag");
    std::string meta_before = read_text_file(dir / "meta.txt");
    write_bundle(dir, ri);
    CHECK(read_text_file(dir / "a.dag") == a_before);
    CHECK(read_text_file(dir / "meta.txt") == meta_before);

    // Corruption: an edge to a nonexistent node must be rejected on load.
    std::string a_text = read_text_file(dir / "a.dag");
    write_text_file(dir / "a.dag", a_text + "edge 0 9999\n");
    CHECK_THROWS_AS(read_bundle(dir), ParseError);
    write_text_file(dir / "a.dag", a_text);
    CHECK_NOTHROW(read_bundle(dir));

    // Tampered parameters are caught by the rebuild cross-check.
    std::string meta = read_text_file(dir / "meta.txt");
    auto pos = meta.find("seed 7");
    REQUIRE(pos != std::string::npos);
    std::string tampered = meta;
    tampered.replace(pos, 6, "seed 8");
    write_text_file(dir / "meta.txt", tampered);
    CHECK_THROWS_AS(read_bundle(dir), ParseError);
}

TEST_CASE("line splitting is strict") {
    CHECK_THROWS_AS(split_lines("a\r\nb"), ParseError);
    CHECK(split_lines("a\nb\n") == std::vector<std::string>{"a", "b"});
    CHECK(split_lines("a\nb") == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(split_tokens("a  b"), ParseError);
    CHECK_THROWS_AS(split_tokens(" a"), ParseError);
    CHECK(parse_number("042") == 42);
    CHECK_THROWS_AS(parse_number("4x"), ParseError);
    CHECK_THROWS_AS(parse_number(""), ParseError);
}
