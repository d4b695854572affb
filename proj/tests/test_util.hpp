#pragma once

// Shared generators and independent oracles for the test suites. Oracles
// here deliberately avoid the library's own algorithms.

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

#include "covalign/covalign.hpp"

namespace testutil {

using namespace covalign;

// Plain recursion over all edit scripts; exponential on purpose.
inline std::size_t naive_edit_distance(const Str& s, const Str& t, std::size_t i = 0,
                                       std::size_t j = 0) {
    if (i == s.size()) return t.size() - j;
    if (j == t.size()) return s.size() - i;
    std::size_t del = naive_edit_distance(s, t, i + 1, j) + 1;
    std::size_t ins = naive_edit_distance(s, t, i, j + 1) + 1;
    std::size_t sub = naive_edit_distance(s, t, i + 1, j + 1) + (s[i] == t[j] ? 0 : 1);
    return std::min({del, ins, sub});
}

inline Str random_str(Xorshift64Star& rng, std::size_t max_len, std::size_t alphabet_size) {
    std::size_t len = std::size_t(rng.next_below(max_len + 1));
    Str s(len);
    for (auto& c : s) c = Symbol(rng.next_below(alphabet_size));
    return s;
}

inline GappedRow random_row(Xorshift64Star& rng, std::size_t len, std::size_t alphabet_size) {
    GappedRow r(len);
    for (auto& c : r) {
        std::uint64_t v = rng.next_below(alphabet_size + 1);
        c = v == alphabet_size ? kGap : Symbol(v);
    }
    return r;
}

inline PairwiseAlignment random_alignment(Xorshift64Star& rng, std::size_t len,
                                          std::size_t alphabet_size) {
    return PairwiseAlignment(random_row(rng, len, alphabet_size),
                             random_row(rng, len, alphabet_size));
}

// Random DAG whose node ids are already topologically sorted; arcs go from
// lower to higher id with the given per-pair density (percent).
inline LabeledDag random_dag(Xorshift64Star& rng, std::size_t nodes, unsigned density_percent,
                             std::size_t alphabet_size, bool allow_empty_labels) {
    std::vector<Str> labels(nodes);
    for (auto& l : labels) {
        if (allow_empty_labels && rng.next_below(4) == 0) continue;
        l.push_back(Symbol(rng.next_below(alphabet_size)));
    }
    std::vector<Arc> arcs;
    for (NodeId u = 0; u < nodes; ++u)
        for (NodeId v = u + 1; v < nodes; ++v)
            if (rng.next_below(100) < density_percent) arcs.emplace_back(u, v);
    LabelFlavor flavor = allow_empty_labels ? LabelFlavor::SigmaEps : LabelFlavor::Sigma;
    return LabeledDag(flavor, std::move(labels), std::move(arcs));
}

// Exhaustive two-path cover decision: try all ordered path pairs.
inline bool coverable_by_path_pairs(const LabeledDag& d) {
    auto paths = enumerate_paths(d, false);
    for (const auto& p : paths)
        for (const auto& q : paths)
            if (jointly_cover(d, CoverPair{p, q})) return true;
    return false;
}

inline std::set<std::pair<Str, Str>> mask_read_pairs(const PairwiseAlignment& a) {
    std::set<std::pair<Str, Str>> out;
    for (const PairwiseAlignment& x : reachable_recombinations(a))
        out.emplace(remove_gaps(x.row_a), remove_gaps(x.row_b));
    return out;
}

}  // namespace testutil
