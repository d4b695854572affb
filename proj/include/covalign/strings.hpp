#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "covalign/errors.hpp"

namespace covalign {

// A symbol is an index into an Alphabet. kGap is reserved for the gap
// character of alignment rows and never appears in a gap-free string.
using Symbol = std::uint8_t;
inline constexpr Symbol kGap = 0xFF;
inline constexpr char kGapChar = '-';

// Gap-free string over some alphabet.
using Str = std::vector<Symbol>;
// Alignment row: may contain kGap.
using GappedRow = std::vector<Symbol>;

class Alphabet {
public:
    explicit Alphabet(std::string_view chars) : chars_(chars) {
        if (chars_.empty()) throw InvalidArgument("alphabet must not be empty");
        if (chars_.size() >= kGap) throw InvalidArgument("alphabet too large");
        for (std::size_t i = 0; i < chars_.size(); ++i) {
            char c = chars_[i];
            if (c == kGapChar || c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r')
                throw InvalidArgument("alphabet contains a reserved character");
            for (std::size_t j = i + 1; j < chars_.size(); ++j)
                if (chars_[j] == c) throw InvalidArgument("alphabet contains a duplicate character");
        }
    }

    static Alphabet binary() { return Alphabet("01"); }
    // Alphabet of the diploid encoding: binary data symbols plus the run
    // separator 'd' and the tab symbol 't'.
    static Alphabet corollary() { return Alphabet("01dt"); }

    std::size_t size() const { return chars_.size(); }
    const std::string& chars() const { return chars_; }

    bool contains(char c) const { return chars_.find(c) != std::string::npos; }

    Symbol code_of(char c) const {
        auto pos = chars_.find(c);
        if (pos == std::string::npos)
            throw ParseError(std::string("character '") + c + "' is not in the alphabet");
        return static_cast<Symbol>(pos);
    }

    char char_of(Symbol s) const {
        if (s == kGap) return kGapChar;
        if (s >= chars_.size()) throw InvalidArgument("symbol code outside alphabet");
        return chars_[s];
    }

    Str parse(std::string_view text) const {
        Str out;
        out.reserve(text.size());
        for (char c : text) {
            if (c == kGapChar) throw ParseError("gap character in a plain string");
            out.push_back(code_of(c));
        }
        return out;
    }

    GappedRow parse_gapped(std::string_view text) const {
        GappedRow out;
        out.reserve(text.size());
        for (char c : text) out.push_back(c == kGapChar ? kGap : code_of(c));
        return out;
    }

    std::string format(const Str& s) const {
        std::string out;
        out.reserve(s.size());
        for (Symbol x : s) out.push_back(char_of(x));
        return out;
    }

    std::string format_row(const GappedRow& r) const { return format(r); }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.chars_ == b.chars_; }
    friend bool operator!=(const Alphabet& a, const Alphabet& b) { return !(a == b); }

private:
    std::string chars_;
};

// Integer score extended with an absorbing minus-infinity.
class Score {
public:
    constexpr Score() = default;

    static constexpr Score of(long long v) {
        Score s;
        s.value_ = v;
        s.finite_ = true;
        return s;
    }
    static constexpr Score neg_infinity() {
        Score s;
        s.finite_ = false;
        return s;
    }

    constexpr bool finite() const { return finite_; }

    long long value() const {
        if (!finite_) throw InvalidArgument("minus-infinity score has no integer value");
        return value_;
    }

    friend constexpr Score operator+(Score a, Score b) {
        if (!a.finite_ || !b.finite_) return neg_infinity();
        return of(a.value_ + b.value_);
    }

    // minus-infinity is smaller than every integer.
    friend constexpr bool operator<(Score a, Score b) {
        if (a.finite_ != b.finite_) return !a.finite_;
        if (!a.finite_) return false;
        return a.value_ < b.value_;
    }
    friend constexpr bool operator==(Score a, Score b) {
        if (a.finite_ != b.finite_) return false;
        return !a.finite_ || a.value_ == b.value_;
    }
    friend constexpr bool operator!=(Score a, Score b) { return !(a == b); }
    friend constexpr bool operator>(Score a, Score b) { return b < a; }
    friend constexpr bool operator<=(Score a, Score b) { return !(b < a); }
    friend constexpr bool operator>=(Score a, Score b) { return !(a < b); }

    static constexpr Score max(Score a, Score b) { return a < b ? b : a; }

private:
    long long value_ = 0;
    bool finite_ = true;
};

// Symbol-pair score table over an alphabet extended with the gap symbol.
class ScoringScheme {
public:
    ScoringScheme(Alphabet alphabet, std::vector<Score> table)
        : alphabet_(std::move(alphabet)), table_(std::move(table)) {
        std::size_t k = alphabet_.size() + 1;
        if (table_.size() != k * k) throw InvalidArgument("scoring table has the wrong size");
        Score gg = table_[(k - 1) * k + (k - 1)];
        // A positive gap-gap score would make the supremum over alignments
        // unbounded (gap-gap columns can be inserted freely).
        if (gg.finite() && gg.value() > 0)
            throw InvalidArgument("gap-gap score must not be positive");
    }

    const Alphabet& alphabet() const { return alphabet_; }

    Score at(Symbol a, Symbol b) const {
        std::size_t k = alphabet_.size() + 1;
        std::size_t ia = index_of(a), ib = index_of(b);
        return table_[ia * k + ib];
    }

    // Match 0, mismatch -1, gap -1, gap-gap 0: the scheme whose maximization
    // is the negated edit distance.
    static ScoringScheme unit(const Alphabet& alphabet) {
        std::size_t k = alphabet.size() + 1;
        std::vector<Score> t(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) t[i * k + j] = Score::of(i == j ? 0 : -1);
        t[(k - 1) * k + (k - 1)] = Score::of(0);
        return ScoringScheme(alphabet, std::move(t));
    }

private:
    std::size_t index_of(Symbol s) const {
        if (s == kGap) return alphabet_.size();
        if (s >= alphabet_.size()) throw InvalidArgument("symbol code outside scheme alphabet");
        return s;
    }

    Alphabet alphabet_;
    std::vector<Score> table_;
};

inline Str remove_gaps(const GappedRow& row) {
    Str out;
    out.reserve(row.size());
    for (Symbol s : row)
        if (s != kGap) out.push_back(s);
    return out;
}

// Minimum number of single-symbol insertions, deletions and substitutions
// converting s into t. Two-row rolling table.
inline std::size_t edit_distance(const Str& s, const Str& t) {
    std::size_t n = s.size(), m = t.size();
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= m; ++j) {
            std::size_t sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Maximum column-score sum over all pairwise alignments of s and t.
// Returns minus-infinity only when every alignment hits a forbidden pair.
inline Score global_alignment_score(const Str& s, const Str& t, const ScoringScheme& scheme) {
    std::size_t n = s.size(), m = t.size();
    std::vector<Score> prev(m + 1), cur(m + 1);
    prev[0] = Score::of(0);
    for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + scheme.at(kGap, t[j - 1]);
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = prev[0] + scheme.at(s[i - 1], kGap);
        for (std::size_t j = 1; j <= m; ++j) {
            Score diag = prev[j - 1] + scheme.at(s[i - 1], t[j - 1]);
            Score up = prev[j] + scheme.at(s[i - 1], kGap);
            Score left = cur[j - 1] + scheme.at(kGap, t[j - 1]);
            cur[j] = Score::max(diag, Score::max(up, left));
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

// Scored alignment with a traceback witness. The full table is kept only
// here; the plain scoring entry point above stays two-row.
struct AlignmentWitness {
    GappedRow row_a, row_b;
    Score score;
};

inline AlignmentWitness global_alignment_witness(const Str& s, const Str& t,
                                                 const ScoringScheme& scheme) {
    std::size_t n = s.size(), m = t.size();
    std::vector<Score> dp((n + 1) * (m + 1));
    auto cell = [m](std::size_t i, std::size_t j) { return i * (m + 1) + j; };
    dp[cell(0, 0)] = Score::of(0);
    for (std::size_t i = 1; i <= n; ++i)
        dp[cell(i, 0)] = dp[cell(i - 1, 0)] + scheme.at(s[i - 1], kGap);
    for (std::size_t j = 1; j <= m; ++j)
        dp[cell(0, j)] = dp[cell(0, j - 1)] + scheme.at(kGap, t[j - 1]);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            Score diag = dp[cell(i - 1, j - 1)] + scheme.at(s[i - 1], t[j - 1]);
            Score up = dp[cell(i - 1, j)] + scheme.at(s[i - 1], kGap);
            Score left = dp[cell(i, j - 1)] + scheme.at(kGap, t[j - 1]);
            dp[cell(i, j)] = Score::max(diag, Score::max(up, left));
        }
    }
    AlignmentWitness w;
    w.score = dp[cell(n, m)];
    if (!w.score.finite()) return w;  // no admissible alignment to report
    std::size_t i = n, j = m;
    GappedRow ra, rb;
    while (i > 0 || j > 0) {
        Score here = dp[cell(i, j)];
        if (i > 0 && j > 0 &&
            here == dp[cell(i - 1, j - 1)] + scheme.at(s[i - 1], t[j - 1])) {
            ra.push_back(s[i - 1]);
            rb.push_back(t[j - 1]);
            --i, --j;
        } else if (i > 0 && here == dp[cell(i - 1, j)] + scheme.at(s[i - 1], kGap)) {
            ra.push_back(s[i - 1]);
            rb.push_back(kGap);
            --i;
        } else {
            ra.push_back(kGap);
            rb.push_back(t[j - 1]);
            --j;
        }
    }
    std::reverse(ra.begin(), ra.end());
    std::reverse(rb.begin(), rb.end());
    w.row_a = std::move(ra);
    w.row_b = std::move(rb);
    return w;
}

inline bool is_subsequence(const Str& sub, const Str& sup) {
    std::size_t i = 0;
    for (Symbol s : sup) {
        if (i < sub.size() && sub[i] == s) ++i;
    }
    return i == sub.size();
}

// |sup| - |sub| deletions turn sup into sub; cross-checked against the DP.
inline std::size_t subsequence_edit_identity(const Str& sub, const Str& sup) {
    if (!is_subsequence(sub, sup)) throw NotASubsequence("sub is not a subsequence of sup");
    std::size_t diff = sup.size() - sub.size();
    if (edit_distance(sub, sup) != diff)
        throw ConstructionMismatch("subsequence edit identity violated");
    return diff;
}

inline constexpr std::size_t kLcsMaxFirstLength = 20;
inline constexpr std::size_t kLcsMaxStrings = 6;

// Exhaustive multi-string LCS: every subsequence of the first string is
// tested against the rest. A verification oracle, not a solver; the guard
// keeps it at desk scale. Witness is the lexicographically least maximizer.
inline Str lcs_multi(const std::vector<Str>& strings) {
    if (strings.empty()) throw InvalidArgument("lcs_multi needs at least one string");
    if (strings[0].size() > kLcsMaxFirstLength || strings.size() > kLcsMaxStrings)
        throw InstanceTooLarge("lcs_multi guard exceeded");
    const Str& first = strings[0];
    std::size_t n = first.size();
    Str best;
    bool have_best = false;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        Str cand;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1ULL << i)) cand.push_back(first[i]);
        if (have_best) {
            if (cand.size() < best.size()) continue;
            if (cand.size() == best.size() && !(cand < best)) continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < strings.size() && ok; ++k)
            ok = is_subsequence(cand, strings[k]);
        if (ok) {
            best = std::move(cand);
            have_best = true;
        }
    }
    return best;
}

}  // namespace covalign
