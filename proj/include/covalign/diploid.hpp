#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "covalign/errors.hpp"
#include "covalign/strings.hpp"

namespace covalign {

// Two equal-length gapped rows. Removing the gaps from each row recovers the
// underlying haplotype sequences; the row pairing stores their
// synchronization, i.e. where a crossover is possible.
struct PairwiseAlignment {
    GappedRow row_a, row_b;

    PairwiseAlignment() = default;
    PairwiseAlignment(GappedRow a, GappedRow b) : row_a(std::move(a)), row_b(std::move(b)) {
        if (row_a.size() != row_b.size())
            throw LengthMismatch("alignment rows differ in length");
    }

    std::size_t length() const { return row_a.size(); }

    friend bool operator==(const PairwiseAlignment& x, const PairwiseAlignment& y) {
        return x.row_a == y.row_a && x.row_b == y.row_b;
    }
    friend bool operator<(const PairwiseAlignment& x, const PairwiseAlignment& y) {
        return std::tie(x.row_a, x.row_b) < std::tie(y.row_a, y.row_b);
    }
};

// Exchange the row suffixes after column i (1-based crossover point; i = 0
// swaps everything, i = L is the identity).
inline PairwiseAlignment recombine(const PairwiseAlignment& a, std::size_t i) {
    std::size_t L = a.length();
    if (i > L) throw IndexOutOfRange("crossover point past the end of the alignment");
    PairwiseAlignment out = a;
    for (std::size_t c = i; c < L; ++c) std::swap(out.row_a[c], out.row_b[c]);
    return out;
}

// Column-wise exchange pattern. Any series of recombinations collapses to
// one mask: column j ends up exchanged iff an odd number of crossover points
// lie strictly before it.
using SwapMask = std::vector<bool>;

inline PairwiseAlignment apply_mask(const PairwiseAlignment& a, const SwapMask& m) {
    if (m.size() != a.length()) throw LengthMismatch("mask length differs from alignment length");
    PairwiseAlignment out = a;
    for (std::size_t c = 0; c < m.size(); ++c)
        if (m[c]) std::swap(out.row_a[c], out.row_b[c]);
    return out;
}

inline constexpr std::size_t kRecombinationEnumGuard = 16;

// Every alignment reachable by some series of recombinations, deduplicated
// by value and sorted.
inline std::vector<PairwiseAlignment> reachable_recombinations(
    const PairwiseAlignment& a, std::size_t guard = kRecombinationEnumGuard) {
    std::size_t L = a.length();
    if (L > guard) throw InstanceTooLarge("recombination closure guard exceeded");
    std::vector<PairwiseAlignment> out;
    out.reserve(std::size_t(1) << L);
    SwapMask mask(L, false);
    for (std::uint64_t bits = 0; bits < (1ULL << L); ++bits) {
        for (std::size_t c = 0; c < L; ++c) mask[c] = (bits >> c) & 1;
        out.push_back(apply_mask(a, mask));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline bool validate_alignment(const PairwiseAlignment& a, const Str& underlying_a,
                               const Str& underlying_b) {
    if (remove_gaps(a.row_a) != underlying_a) return false;
    if (remove_gaps(a.row_b) != underlying_b) return false;
    std::size_t L = a.length();
    std::size_t gaps_a = L - underlying_a.size();
    std::size_t gaps_b = L - underlying_b.size();
    std::size_t count_a = 0, count_b = 0;
    for (Symbol s : a.row_a) count_a += (s == kGap);
    for (Symbol s : a.row_b) count_b += (s == kGap);
    return count_a == gaps_a && count_b == gaps_b;
}

struct DiploidInstance {
    PairwiseAlignment first;   // (A', B')
    PairwiseAlignment second;  // (C', D')
    ScoringScheme scheme;

    DiploidInstance(PairwiseAlignment f, PairwiseAlignment s, ScoringScheme sch)
        : first(std::move(f)), second(std::move(s)), scheme(std::move(sch)) {
        check_rows(first);
        check_rows(second);
    }

private:
    void check_rows(const PairwiseAlignment& a) const {
        for (const GappedRow* row : {&a.row_a, &a.row_b})
            for (Symbol s : *row)
                if (s != kGap && s >= scheme.alphabet().size())
                    throw ParseError("alignment symbol outside the scheme alphabet");
    }
};

struct DiploidSolution {
    SwapMask mask_first, mask_second;
    Score value;
};

inline constexpr std::size_t kDiploidEnumGuard = 12;

// Exact search over all recombination choices of both alignments, maximizing
// S(r(A''), r(C'')) + S(r(B''), r(D'')). Columns whose two entries are equal
// are swap-invariant, so only the differing columns are enumerated; the
// guard counts those. Witness masks are the lexicographically least optimum
// (false-before-true, column 0 most significant).
inline DiploidSolution solve_diploid_bruteforce(const DiploidInstance& inst,
                                                std::size_t guard = kDiploidEnumGuard) {
    auto effective_columns = [](const PairwiseAlignment& a) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < a.length(); ++c)
            if (a.row_a[c] != a.row_b[c]) cols.push_back(c);
        return cols;
    };
    std::vector<std::size_t> eff1 = effective_columns(inst.first);
    std::vector<std::size_t> eff2 = effective_columns(inst.second);
    if (eff1.size() > guard || eff2.size() > guard)
        throw InstanceTooLarge("diploid enumeration guard exceeded");

    auto mask_for = [](const PairwiseAlignment& a, const std::vector<std::size_t>& eff,
                       std::uint64_t bits) {
        SwapMask m(a.length(), false);
        std::size_t e = eff.size();
        for (std::size_t j = 0; j < e; ++j)
            if (bits & (1ULL << (e - 1 - j))) m[eff[j]] = true;  // first column = MSB
        return m;
    };

    DiploidSolution best;
    best.value = Score::neg_infinity();
    bool have = false;
    std::uint64_t count1 = 1ULL << eff1.size(), count2 = 1ULL << eff2.size();
    for (std::uint64_t b1 = 0; b1 < count1; ++b1) {
        SwapMask m1 = mask_for(inst.first, eff1, b1);
        PairwiseAlignment first = apply_mask(inst.first, m1);
        Str ra = remove_gaps(first.row_a), rb = remove_gaps(first.row_b);
        for (std::uint64_t b2 = 0; b2 < count2; ++b2) {
            SwapMask m2 = mask_for(inst.second, eff2, b2);
            PairwiseAlignment second = apply_mask(inst.second, m2);
            Score v = global_alignment_score(ra, remove_gaps(second.row_a), inst.scheme) +
                      global_alignment_score(rb, remove_gaps(second.row_b), inst.scheme);
            if (!have || best.value < v) {
                best = DiploidSolution{m1, m2, v};
                have = true;
            }
        }
    }
    return best;
}

}  // namespace covalign
