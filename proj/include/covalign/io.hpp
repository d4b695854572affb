#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "covalign/cover_solvers.hpp"
#include "covalign/diploid.hpp"
#include "covalign/errors.hpp"
#include "covalign/labeled_dag.hpp"
#include "covalign/reduction.hpp"
#include "covalign/strings.hpp"

namespace covalign {

// ---------------------------------------------------------------------------
// Low-level helpers. All emitted files are LF-terminated.

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c == '\r') {
            throw ParseError("carriage returns are not allowed");
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : line) {
        if (c == ' ') {
            if (cur.empty()) throw ParseError("malformed spacing in '" + line + "'");
            tokens.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (cur.empty()) throw ParseError("malformed spacing in '" + line + "'");
    tokens.push_back(cur);
    return tokens;
}

inline std::uint64_t parse_number(const std::string& token) {
    if (token.empty() || token.size() > 19) throw ParseError("bad number '" + token + "'");
    std::uint64_t v = 0;
    for (char c : token) {
        if (c < '0' || c > '9') throw ParseError("bad number '" + token + "'");
        v = v * 10 + std::uint64_t(c - '0');
    }
    return v;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// One-string files and LCS instances: `alphabet <chars>` header, then one
// string per line.

struct StringFile {
    Alphabet alphabet;
    std::vector<Str> strings;
};

inline StringFile parse_string_lines(const std::string& text, std::size_t min_count,
                                     std::size_t max_count) {
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty file");
    auto header = split_tokens(lines[0]);
    if (header.size() != 2 || header[0] != "alphabet")
        throw ParseError("expected 'alphabet <chars>' header");
    Alphabet alpha(header[1]);
    std::vector<Str> strings;
    for (std::size_t i = 1; i < lines.size(); ++i) strings.push_back(alpha.parse(lines[i]));
    if (strings.size() < min_count || strings.size() > max_count)
        throw ParseError("unexpected number of strings");
    return StringFile{std::move(alpha), std::move(strings)};
}

inline std::string format_string_lines(const Alphabet& alpha, const std::vector<Str>& strings) {
    std::string out = "alphabet " + alpha.chars() + "\n";
    for (const Str& s : strings) out += alpha.format(s) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Alignment files: `alphabet <chars>` header, two gapped rows; a diploid
// instance file carries a second row pair separated by one blank line.

struct AlignmentFile {
    Alphabet alphabet;
    std::vector<PairwiseAlignment> alignments;  // one or two
};

inline AlignmentFile parse_alignment_file(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.size() < 3) throw ParseError("alignment file needs a header and two rows");
    auto header = split_tokens(lines[0]);
    if (header.size() != 2 || header[0] != "alphabet")
        throw ParseError("expected 'alphabet <chars>' header");
    Alphabet alpha(header[1]);
    std::vector<PairwiseAlignment> alignments;
    std::size_t i = 1;
    while (i < lines.size()) {
        if (i + 1 >= lines.size()) throw ParseError("dangling alignment row");
        PairwiseAlignment a(alpha.parse_gapped(lines[i]), alpha.parse_gapped(lines[i + 1]));
        alignments.push_back(std::move(a));
        i += 2;
        if (i == lines.size()) break;
        if (!lines[i].empty()) throw ParseError("expected a blank line between alignments");
        ++i;
        if (i == lines.size()) throw ParseError("trailing blank line");
    }
    if (alignments.empty() || alignments.size() > 2)
        throw ParseError("alignment file must hold one or two alignments");
    return AlignmentFile{std::move(alpha), std::move(alignments)};
}

inline std::string format_alignment_file(const Alphabet& alpha,
                                         const std::vector<PairwiseAlignment>& alignments) {
    std::string out = "alphabet " + alpha.chars() + "\n";
    for (std::size_t i = 0; i < alignments.size(); ++i) {
        if (i > 0) out += "\n";
        out += alpha.format_row(alignments[i].row_a) + "\n";
        out += alpha.format_row(alignments[i].row_b) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------
// DAG files: `dag <flavor> <node-count>`, then `node <id> "<label>"` lines in
// id order, then `edge <u> <v>` lines. Ids are dense and 0-based; the arc
// relation must be acyclic (checked on construction).

inline LabeledDag parse_dag_file(const std::string& text, const Alphabet& alpha) {
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty DAG file");
    auto header = split_tokens(lines[0]);
    if (header.size() != 3 || header[0] != "dag") throw ParseError("expected 'dag' header");
    LabelFlavor flavor = flavor_from_token(header[1]);
    std::size_t n = std::size_t(parse_number(header[2]));
    if (lines.size() < 1 + n) throw ParseError("missing node lines");
    std::vector<Str> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::string& line = lines[1 + i];
        std::string prefix = "node " + std::to_string(i) + " ";
        if (line.compare(0, prefix.size(), prefix) != 0)
            throw ParseError("bad node line '" + line + "'");
        std::string rest = line.substr(prefix.size());
        if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"')
            throw ParseError("node label must be quoted");
        labels[i] = alpha.parse(rest.substr(1, rest.size() - 2));
    }
    std::vector<Arc> arcs;
    for (std::size_t i = 1 + n; i < lines.size(); ++i) {
        auto tokens = split_tokens(lines[i]);
        if (tokens.size() != 3 || tokens[0] != "edge")
            throw ParseError("bad edge line '" + lines[i] + "'");
        std::uint64_t u = parse_number(tokens[1]), v = parse_number(tokens[2]);
        if (u >= n || v >= n) throw ParseError("edge endpoint is not a node");
        arcs.emplace_back(NodeId(u), NodeId(v));
    }
    return LabeledDag(flavor, std::move(labels), std::move(arcs));
}

inline std::string format_dag_file(const LabeledDag& d, const Alphabet& alpha) {
    std::string out = "dag ";
    out += flavor_token(d.flavor());
    out += " " + std::to_string(d.size()) + "\n";
    for (NodeId v = 0; v < d.size(); ++v)
        out += "node " + std::to_string(v) + " \"" + alpha.format(d.label(v)) + "\"\n";
    for (auto [u, v] : d.arcs())
        out += "edge " + std::to_string(u) + " " + std::to_string(v) + "\n";
    return out;
}

// Characters appearing in the labels of a DAG file, sorted ascending; used
// to infer a working alphabet for standalone DAG inputs.
inline std::string dag_file_label_chars(const std::string& text) {
    std::set<char> chars;
    for (const std::string& line : split_lines(text)) {
        if (line.compare(0, 5, "node ") != 0) continue;
        auto open = line.find('"');
        auto close = line.rfind('"');
        if (open == std::string::npos || close <= open) continue;
        for (std::size_t i = open + 1; i < close; ++i) chars.insert(line[i]);
    }
    return std::string(chars.begin(), chars.end());
}

// ---------------------------------------------------------------------------
// Scoring scheme files: `scheme <chars>` header, then one `s <r> <c> <value>`
// line per pair in row-major order over the alphabet followed by the gap.

inline ScoringScheme parse_scheme_file(const std::string& text) {
    auto lines = split_lines(text);
    if (lines.empty()) throw ParseError("empty scheme file");
    auto header = split_tokens(lines[0]);
    if (header.size() != 2 || header[0] != "scheme")
        throw ParseError("expected 'scheme <chars>' header");
    Alphabet alpha(header[1]);
    std::size_t k = alpha.size() + 1;
    if (lines.size() != 1 + k * k) throw ParseError("scheme file has the wrong number of entries");
    auto char_at = [&](std::size_t idx) {
        return idx == alpha.size() ? kGapChar : alpha.chars()[idx];
    };
    std::vector<Score> table(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            auto tokens = split_tokens(lines[1 + i * k + j]);
            if (tokens.size() != 4 || tokens[0] != "s" || tokens[1].size() != 1 ||
                tokens[2].size() != 1 || tokens[1][0] != char_at(i) || tokens[2][0] != char_at(j))
                throw ParseError("bad scheme line '" + lines[1 + i * k + j] + "'");
            if (tokens[3] == "-inf") {
                table[i * k + j] = Score::neg_infinity();
            } else {
                std::string t = tokens[3];
                bool neg = !t.empty() && t[0] == '-';
                std::uint64_t mag = parse_number(neg ? t.substr(1) : t);
                table[i * k + j] = Score::of(neg ? -(long long)mag : (long long)mag);
            }
        }
    }
    return ScoringScheme(std::move(alpha), std::move(table));
}

inline std::string format_scheme_file(const ScoringScheme& scheme) {
    const Alphabet& alpha = scheme.alphabet();
    std::size_t k = alpha.size() + 1;
    auto symbol_at = [&](std::size_t idx) { return idx == alpha.size() ? kGap : Symbol(idx); };
    auto char_at = [&](std::size_t idx) {
        return idx == alpha.size() ? kGapChar : alpha.chars()[idx];
    };
    std::string out = "scheme " + alpha.chars() + "\n";
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Score s = scheme.at(symbol_at(i), symbol_at(j));
            out += std::string("s ") + char_at(i) + " " + char_at(j) + " " +
                   (s.finite() ? std::to_string(s.value()) : std::string("-inf")) + "\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Solver solutions: a value line, then one path line per strand.

inline std::string format_solution(const CoverSolution& sol) {
    std::string out = "value " + std::to_string(sol.value.primary);
    if (sol.value.is_pair) out += " " + std::to_string(sol.value.secondary);
    out += "\n";
    auto path_line = [](const char* name, const DagPath& p) {
        std::string line = std::string("path ") + name;
        for (NodeId v : p) line += " " + std::to_string(v);
        return line + "\n";
    };
    out += path_line("r1", sol.r1);
    out += path_line("g1", sol.g1);
    out += path_line("r2", sol.r2);
    out += path_line("g2", sol.g2);
    return out;
}

// ---------------------------------------------------------------------------
// Reduction bundles: a directory holding a.dag, b.dag, meta.txt and
// instance.lcs, byte-stable for a fixed seed. meta.txt records every
// parameter, the tab string and the per-DAG column tables; loading rebuilds
// the construction from instance.lcs and cross-checks all files against it.

inline std::string format_meta(const ReductionInstance& ri) {
    std::string out;
    const ReductionParams& p = ri.params;
    out += "n " + std::to_string(p.n) + "\n";
    out += "ell " + std::to_string(p.ell) + "\n";
    out += "run " + std::to_string(p.run_length) + "\n";
    out += "stages " + std::to_string(p.stages) + "\n";
    out += "sep_bound " + std::to_string(p.separator_bound) + "\n";
    out += "tab_length " + std::to_string(p.tab_length) + "\n";
    out += "tab_k " + std::to_string(p.tab_k) + "\n";
    out += "seed " + std::to_string(p.seed) + "\n";
    out += "tab " + Alphabet::binary().format(ri.tab) + "\n";
    auto col_table = [&out](const char* header, const std::vector<Column>& cols) {
        out += std::string(header) + " " + std::to_string(cols.size()) + "\n";
        for (std::size_t i = 0; i < cols.size(); ++i) {
            out += "col " + std::to_string(i) + " " + column_role_token(cols[i].role);
            for (NodeId v : cols[i].nodes) out += " " + std::to_string(v);
            out += "\n";
        }
    };
    col_table("cols_a", ri.columns_a);
    col_table("cols_b", ri.columns_b);
    return out;
}

inline void write_bundle(const std::filesystem::path& dir, const ReductionInstance& ri) {
    std::filesystem::create_directories(dir);
    Alphabet binary = Alphabet::binary();
    write_text_file(dir / "a.dag", format_dag_file(ri.dag_a, binary));
    write_text_file(dir / "b.dag", format_dag_file(ri.dag_b, binary));
    write_text_file(dir / "meta.txt", format_meta(ri));
    write_text_file(dir / "instance.lcs", format_string_lines(binary, ri.lcs.strings));
}

inline ReductionInstance read_bundle(const std::filesystem::path& dir) {
    Alphabet binary = Alphabet::binary();
    std::string lcs_text = read_text_file(dir / "instance.lcs");
    StringFile lcs_file = parse_string_lines(lcs_text, 2, 1000);
    if (lcs_file.alphabet != binary) throw ParseError("instance alphabet must be 01");
    LcsInstance inst(lcs_file.strings);

    std::string meta = read_text_file(dir / "meta.txt");
    auto lines = split_lines(meta);
    ReductionParams p;
    std::size_t i = 0;
    auto expect_number = [&](const char* key) {
        if (i >= lines.size()) throw ParseError("meta.txt is truncated");
        auto tokens = split_tokens(lines[i]);
        if (tokens.size() != 2 || tokens[0] != key)
            throw ParseError(std::string("expected '") + key + "' in meta.txt");
        ++i;
        return parse_number(tokens[1]);
    };
    p.n = std::size_t(expect_number("n"));
    p.ell = std::size_t(expect_number("ell"));
    p.run_length = std::size_t(expect_number("run"));
    p.stages = std::size_t(expect_number("stages"));
    p.separator_bound = std::size_t(expect_number("sep_bound"));
    p.tab_length = std::size_t(expect_number("tab_length"));
    p.tab_k = std::size_t(expect_number("tab_k"));
    p.seed = expect_number("seed");

    ReductionInstance ri = build_instance(inst, p);

    // Cross-check every stored artifact against the rebuilt construction.
    if (i >= lines.size()) throw ParseError("meta.txt is truncated");
    auto tab_tokens = split_tokens(lines[i]);
    if (tab_tokens.size() != 2 || tab_tokens[0] != "tab" ||
        binary.parse(tab_tokens[1]) != ri.tab)
        throw ParseError("bundle tab differs from the seeded construction");
    std::string expected_meta = format_meta(ri);
    if (meta != expected_meta) throw ParseError("meta.txt differs from the seeded construction");
    if (read_text_file(dir / "a.dag") != format_dag_file(ri.dag_a, binary))
        throw ParseError("a.dag differs from the seeded construction");
    if (read_text_file(dir / "b.dag") != format_dag_file(ri.dag_b, binary))
        throw ParseError("b.dag differs from the seeded construction");
    return ri;
}

}  // namespace covalign
