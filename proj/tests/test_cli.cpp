#include "doctest.h"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include "covalign/io.hpp"

using namespace covalign;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
};

std::string cli_binary() {
    const char* env = std::getenv("COVALIGN_CLI");
    REQUIRE_MESSAGE(env != nullptr, "COVALIGN_CLI must point at the built binary");
    return env;
}

CliResult run_cli(const std::string& args) {
    std::string cmd = "'" + cli_binary() + "' " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
    int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path scratch_dir(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "covalign_cli_tests" / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("align command") {
    auto dir = scratch_dir("align");
    write_text_file(dir / "x.str", "alphabet 01\n01\n");
    write_text_file(dir / "y.str", "alphabet 01\n10\n");
    write_text_file(dir / "bad.str", "alphabet 01\n02\n");
    write_text_file(dir / "other.str", "alphabet 012\n01\n");

    CliResult same = run_cli("align --a " + (dir / "x.str").string() + " --b " +
                             (dir / "x.str").string());
    CHECK(same.exit_code == 0);
    CHECK(same.out.find("distance: 0\n") != std::string::npos);
    CHECK(same.out.find("score: 0\n") != std::string::npos);

    CliResult diff = run_cli("align --a " + (dir / "x.str").string() + " --b " +
                             (dir / "y.str").string() + " --witness");
    CHECK(diff.exit_code == 0);
    CHECK(diff.out.find("distance: 2\n") != std::string::npos);
    CHECK(diff.out.find("score: -2\n") != std::string::npos);
    CHECK(diff.out.find("witness_a: ") != std::string::npos);

    CHECK(run_cli("align --a " + (dir / "bad.str").string() + " --b " + (dir / "x.str").string())
              .exit_code == 2);
    CHECK(run_cli("align --a " + (dir / "other.str").string() + " --b " +
                  (dir / "x.str").string())
              .exit_code == 2);
    CHECK(run_cli("align --a " + (dir / "x.str").string()).exit_code == 2);
}

TEST_CASE("align with a scheme file") {
    auto dir = scratch_dir("schemes");
    write_text_file(dir / "x.str", "alphabet 01\n01\n");
    write_text_file(dir / "y.str", "alphabet 01\n10\n");
    write_text_file(dir / "unit.scheme", format_scheme_file(ScoringScheme::unit(Alphabet::binary())));
    CliResult r = run_cli("align --a " + (dir / "x.str").string() + " --b " +
                          (dir / "y.str").string() + " --scheme " + (dir / "unit.scheme").string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("score: -2\n") != std::string::npos);
    CHECK(run_cli("align --a " + (dir / "x.str").string() + " --b " + (dir / "y.str").string() +
                  " --scheme " + (dir / "missing.scheme").string())
              .exit_code == 2);
    CHECK(run_cli("align --a " + (dir / "x.str").string() + " --b " + (dir / "y.str").string() +
                  " --scheme corollary --dsep 0")
              .exit_code == 2);
}

TEST_CASE("cover-align command") {
    auto dir = scratch_dir("cover");
    write_text_file(dir / "line01.dag",
                    "dag sigma 2\nnode 0 \"0\"\nnode 1 \"1\"\nedge 0 1\n");
    write_text_file(dir / "line0.dag", "dag sigma 1\nnode 0 \"0\"\n");
    write_text_file(dir / "wide.dag", "dag sigma 3\nnode 0 \"0\"\nnode 1 \"1\"\nnode 2 \"0\"\n");

    CliResult self = run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                             (dir / "line01.dag").string());
    CHECK(self.exit_code == 0);
    CHECK(self.out.find("value 0\n") != std::string::npos);

    CliResult fixture = run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                                (dir / "line0.dag").string());
    CHECK(fixture.exit_code == 0);
    CHECK(fixture.out.find("value 1\n") != std::string::npos);
    CHECK(fixture.out.find("path r1 0\n") != std::string::npos);
    CHECK(fixture.out.find("path g1 0 1\n") != std::string::npos);

    // dp engine demands the relaxed variant
    CHECK(run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                  (dir / "line0.dag").string() + " --engine dp")
              .exit_code == 2);
    CliResult dp = run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                           (dir / "line0.dag").string() + " --engine dp --no-cover-d2");
    CHECK(dp.exit_code == 0);
    CHECK(dp.out.find("value 1\n") != std::string::npos);

    // width 3 first DAG is not coverable
    CHECK(run_cli("cover-align --d1 " + (dir / "wide.dag").string() + " --d2 " +
                  (dir / "line0.dag").string())
              .exit_code == 2);
    // guard exceeded
    CHECK(run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                  (dir / "line0.dag").string() + " --max-pairs 1")
              .exit_code == 3);

    CliResult weighted = run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                                 (dir / "line0.dag").string() + " --objective weighted:2,3");
    CHECK(weighted.exit_code == 0);
    CHECK(weighted.out.find("objective: weighted\n") != std::string::npos);
    CHECK(run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                  (dir / "line0.dag").string() + " --objective nonsense")
              .exit_code == 2);
    CHECK(run_cli("cover-align --d1 " + (dir / "line01.dag").string() + " --d2 " +
                  (dir / "line0.dag").string() + " --objective weighted:0,0")
              .exit_code == 2);
}

TEST_CASE("encode-diploid command") {
    auto dir = scratch_dir("encode");
    write_text_file(dir / "pair.aln", "alphabet ab\na-\n-b\n");
    write_text_file(dir / "one.aln", "alphabet ab\na\nb\n");
    write_text_file(dir / "empty.aln", "");

    CliResult enc = run_cli("encode-diploid --alignment " + (dir / "pair.aln").string());
    CHECK(enc.exit_code == 0);
    CHECK(enc.out ==
          "dag sigmaeps 6\n"
          "node 0 \"\"\n"
          "node 1 \"a\"\n"
          "node 2 \"\"\n"
          "node 3 \"\"\n"
          "node 4 \"b\"\n"
          "node 5 \"\"\n"
          "edge 0 1\n"
          "edge 0 2\n"
          "edge 1 3\n"
          "edge 1 4\n"
          "edge 2 3\n"
          "edge 2 4\n"
          "edge 3 5\n"
          "edge 4 5\n");

    CliResult one = run_cli("encode-diploid --alignment " + (dir / "one.aln").string());
    CHECK(one.exit_code == 0);
    CHECK(one.out.find("dag sigmaeps 4\n") == 0);

    CHECK(run_cli("encode-diploid --alignment " + (dir / "empty.aln").string()).exit_code == 2);
}

TEST_CASE("reduce and verify commands") {
    auto dir = scratch_dir("reduce");
    write_text_file(dir / "inst.lcs", "alphabet 01\n01\n10\n");
    write_text_file(dir / "allzero.lcs", "alphabet 01\n00\n10\n");
    std::string bundle = (dir / "bundle").string();

    std::string reduce_args = "reduce --lcs " + (dir / "inst.lcs").string() + " --out " + bundle +
                              " --seed 7 --N 2 --tab-length 4 --tab-k 2";
    CliResult red = run_cli(reduce_args);
    CHECK(red.exit_code == 0);
    CHECK(red.out.find("tab_distinct: yes\n") != std::string::npos);
    CHECK(red.out.find("stages: 2\n") != std::string::npos);

    // Byte-identical on rerun: stdout and every bundle file.
    std::string a_dag = read_text_file(dir / "bundle" / "a.dag");
    std::string meta = read_text_file(dir / "bundle" / "meta.txt");
    CliResult again = run_cli(reduce_args);
    CHECK(again.exit_code == 0);
    CHECK(again.out == red.out);
    CHECK(read_text_file(dir / "bundle" / "a.dag") == a_dag);
    CHECK(read_text_file(dir / "bundle" / "meta.txt") == meta);

    CHECK(run_cli("reduce --lcs " + (dir / "allzero.lcs").string() + " --out " + bundle)
              .exit_code == 2);
    CHECK(run_cli(reduce_args + " --max-bundle-bytes 100").exit_code == 3);

    CliResult full = run_cli("verify --bundle " + bundle + " --mode full");
    CHECK(full.exit_code == 0);
    CHECK(full.out.find("lemma1: PASS\n") != std::string::npos);
    CHECK(full.out.find("subsequence_check: PASS\n") != std::string::npos);
    CHECK(full.out.find("bound_check: PASS\n") != std::string::npos);
    CHECK(full.out.find("optimum_equals_2delta: yes\n") != std::string::npos);
    CHECK(full.out.find("oracles_equal: yes\n") != std::string::npos);
    CHECK(full.out.find("upper_bound_check: PASS\n") != std::string::npos);

    CliResult l1 = run_cli("verify --bundle " + bundle + " --mode lemma1");
    CHECK(l1.exit_code == 0);
    CHECK(l1.out.find("dist_red: 0\n") != std::string::npos);
    CliResult l1_again = run_cli("verify --bundle " + bundle + " --mode lemma1");
    CHECK(l1_again.out == l1.out);

    // Corrupt the bundle: edge to a nonexistent node.
    std::string tampered = a_dag + "edge 0 9999\n";
    write_text_file(dir / "bundle" / "a.dag", tampered);
    CHECK(run_cli("verify --bundle " + bundle + " --mode lemma1").exit_code == 2);
    write_text_file(dir / "bundle" / "a.dag", a_dag);
    CHECK(run_cli("verify --bundle " + bundle + " --mode lemma1").exit_code == 0);
}

TEST_CASE("oversized bundles are refused without blowing up") {
    auto dir = scratch_dir("guards");
    write_text_file(dir / "inst.lcs", "alphabet 01\n01\n10\n");
    std::string bundle = (dir / "bundle").string();
    // Default desk parameters: witness checks stay cheap, but the cover pair
    // space is far beyond the enumeration guard.
    CHECK(run_cli("reduce --lcs " + (dir / "inst.lcs").string() + " --out " + bundle + " --seed 1")
              .exit_code == 0);
    CHECK(run_cli("verify --bundle " + bundle + " --mode lemma1").exit_code == 0);
    auto t0 = std::chrono::steady_clock::now();
    CHECK(run_cli("verify --bundle " + bundle + " --mode lemma2").exit_code == 3);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
    CHECK(elapsed < 5000);  // refusal comes from the pre-count, not enumeration
}
