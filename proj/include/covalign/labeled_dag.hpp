#pragma once

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "covalign/diploid.hpp"
#include "covalign/errors.hpp"
#include "covalign/strings.hpp"

namespace covalign {

using NodeId = std::uint32_t;
using Arc = std::pair<NodeId, NodeId>;

// Non-empty node sequence; consecutive nodes must be joined by arcs.
using DagPath = std::vector<NodeId>;

// Label restriction flavors: single characters, at most one character,
// arbitrary strings, non-empty strings.
enum class LabelFlavor { Sigma, SigmaEps, SigmaStar, SigmaPlus };

inline const char* flavor_token(LabelFlavor f) {
    switch (f) {
        case LabelFlavor::Sigma: return "sigma";
        case LabelFlavor::SigmaEps: return "sigmaeps";
        case LabelFlavor::SigmaStar: return "sigmastar";
        case LabelFlavor::SigmaPlus: return "sigmaplus";
    }
    throw InvalidArgument("unknown flavor");
}

inline LabelFlavor flavor_from_token(const std::string& t) {
    if (t == "sigma") return LabelFlavor::Sigma;
    if (t == "sigmaeps") return LabelFlavor::SigmaEps;
    if (t == "sigmastar") return LabelFlavor::SigmaStar;
    if (t == "sigmaplus") return LabelFlavor::SigmaPlus;
    throw ParseError("unknown DAG flavor '" + t + "'");
}

// DAG with one string label per node. Immutable after construction; arc
// lists are kept sorted so every traversal in the library is deterministic.
class LabeledDag {
public:
    LabeledDag(LabelFlavor flavor, std::vector<Str> labels, std::vector<Arc> arcs)
        : flavor_(flavor), labels_(std::move(labels)) {
        std::size_t n = labels_.size();
        if (n == 0) throw EmptyString("a labeled DAG needs at least one node");
        for (const Str& l : labels_) check_label(flavor_, l);
        out_.assign(n, {});
        in_.assign(n, {});
        std::sort(arcs.begin(), arcs.end());
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            auto [u, v] = arcs[i];
            if (u >= n || v >= n) throw ParseError("arc endpoint is not a node");
            if (u == v) throw CyclicGraph("self arc");
            if (i > 0 && arcs[i] == arcs[i - 1]) throw ParseError("duplicate arc");
            out_[u].push_back(v);
            in_[v].push_back(u);
        }
        arcs_ = std::move(arcs);
        compute_topo();
    }

    LabelFlavor flavor() const { return flavor_; }
    std::size_t size() const { return labels_.size(); }
    const Str& label(NodeId v) const { return labels_[v]; }
    const std::vector<Str>& labels() const { return labels_; }
    const std::vector<NodeId>& out(NodeId v) const { return out_[v]; }
    const std::vector<NodeId>& in(NodeId v) const { return in_[v]; }
    const std::vector<Arc>& arcs() const { return arcs_; }

    bool has_arc(NodeId u, NodeId v) const {
        return std::binary_search(out_[u].begin(), out_[u].end(), v);
    }

    // Deterministic topological order (Kahn's algorithm, smallest id first).
    const std::vector<NodeId>& topological_order() const { return topo_; }
    std::size_t topo_index(NodeId v) const { return topo_index_[v]; }

    std::vector<NodeId> sources() const {
        std::vector<NodeId> s;
        for (NodeId v = 0; v < size(); ++v)
            if (in_[v].empty()) s.push_back(v);
        return s;
    }
    std::vector<NodeId> sinks() const {
        std::vector<NodeId> s;
        for (NodeId v = 0; v < size(); ++v)
            if (out_[v].empty()) s.push_back(v);
        return s;
    }

    bool is_valid_path(const DagPath& p) const {
        if (p.empty()) return false;
        for (NodeId v : p)
            if (v >= size()) return false;
        for (std::size_t i = 1; i < p.size(); ++i)
            if (!has_arc(p[i - 1], p[i])) return false;
        return true;
    }

    // reach[u][v] true iff v is reachable from u (including u itself).
    std::vector<std::vector<bool>> reachability() const {
        std::size_t n = size();
        std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            NodeId u = *it;
            reach[u][u] = true;
            for (NodeId w : out_[u])
                for (std::size_t v = 0; v < n; ++v)
                    if (reach[w][v]) reach[u][v] = true;
        }
        return reach;
    }

private:
    static void check_label(LabelFlavor f, const Str& l) {
        switch (f) {
            case LabelFlavor::Sigma:
                if (l.size() != 1) throw ParseError("sigma flavor requires single-character labels");
                break;
            case LabelFlavor::SigmaEps:
                if (l.size() > 1) throw ParseError("sigmaeps flavor allows at most one character");
                break;
            case LabelFlavor::SigmaPlus:
                if (l.empty()) throw ParseError("sigmaplus flavor forbids empty labels");
                break;
            case LabelFlavor::SigmaStar: break;
        }
    }

    void compute_topo() {
        std::size_t n = size();
        std::vector<std::size_t> indeg(n);
        for (NodeId v = 0; v < n; ++v) indeg[v] = in_[v].size();
        std::priority_queue<NodeId, std::vector<NodeId>, std::greater<NodeId>> ready;
        for (NodeId v = 0; v < n; ++v)
            if (indeg[v] == 0) ready.push(v);
        topo_.reserve(n);
        while (!ready.empty()) {
            NodeId v = ready.top();
            ready.pop();
            topo_.push_back(v);
            for (NodeId w : out_[v])
                if (--indeg[w] == 0) ready.push(w);
        }
        if (topo_.size() != n) throw CyclicGraph("arc relation contains a cycle");
        topo_index_.assign(n, 0);
        for (std::size_t i = 0; i < n; ++i) topo_index_[topo_[i]] = i;
    }

    LabelFlavor flavor_;
    std::vector<Str> labels_;
    std::vector<std::vector<NodeId>> out_, in_;
    std::vector<Arc> arcs_;
    std::vector<NodeId> topo_;
    std::vector<std::size_t> topo_index_;
};

// Concatenation of the labels along the path; empty labels contribute nothing.
inline Str read(const LabeledDag& d, const DagPath& p) {
    if (!d.is_valid_path(p)) throw InvalidPath("not a path of this DAG");
    Str out;
    for (NodeId v : p) {
        const Str& l = d.label(v);
        out.insert(out.end(), l.begin(), l.end());
    }
    return out;
}

// Width-1 DAG spelling s along its single maximal path.
inline LabeledDag line_dag(const Str& s) {
    if (s.empty()) throw EmptyString("line DAG of the empty string");
    std::vector<Str> labels;
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < s.size(); ++i) {
        labels.push_back(Str{s[i]});
        if (i + 1 < s.size()) arcs.emplace_back(NodeId(i), NodeId(i + 1));
    }
    return LabeledDag(LabelFlavor::Sigma, std::move(labels), std::move(arcs));
}

// Same nodes and labels as line_dag, arcs between all forward pairs.
inline LabeledDag transitive_closure_dag(const Str& s) {
    if (s.empty()) throw EmptyString("transitive closure DAG of the empty string");
    std::vector<Str> labels;
    std::vector<Arc> arcs;
    for (std::size_t i = 0; i < s.size(); ++i) {
        labels.push_back(Str{s[i]});
        for (std::size_t j = i + 1; j < s.size(); ++j) arcs.emplace_back(NodeId(i), NodeId(j));
    }
    return LabeledDag(LabelFlavor::Sigma, std::move(labels), std::move(arcs));
}

inline LabelFlavor widen_flavor(LabelFlavor a, LabelFlavor b) {
    if (a == b) return a;
    auto rank = [](LabelFlavor f) { return f == LabelFlavor::Sigma ? 0 : f == LabelFlavor::SigmaStar ? 2 : 1; };
    if (rank(a) == 1 && rank(b) == 1) return LabelFlavor::SigmaStar;  // eps + plus
    return rank(a) > rank(b) ? a : b;
}

// Disjoint union plus one bridging arc from d1's unique sink to d2's unique
// source. Reads of full paths concatenate accordingly.
inline LabeledDag concat(const LabeledDag& d1, const LabeledDag& d2) {
    auto sinks = d1.sinks();
    if (sinks.size() != 1) throw NonUniqueSink("left operand must have a unique sink");
    auto sources = d2.sources();
    if (sources.size() != 1) throw NonUniqueSource("right operand must have a unique source");
    std::vector<Str> labels = d1.labels();
    labels.insert(labels.end(), d2.labels().begin(), d2.labels().end());
    NodeId shift = NodeId(d1.size());
    std::vector<Arc> arcs = d1.arcs();
    for (auto [u, v] : d2.arcs()) arcs.emplace_back(u + shift, v + shift);
    arcs.emplace_back(sinks[0], sources[0] + shift);
    return LabeledDag(widen_flavor(d1.flavor(), d2.flavor()), std::move(labels), std::move(arcs));
}

// Expansion of multi-character nodes into single-character chains. chains[v]
// lists the expanded ids of original node v in order; origin maps back.
struct ExpandResult {
    LabeledDag dag;
    std::vector<std::vector<NodeId>> chains;
    std::vector<NodeId> origin;
};

inline ExpandResult expand_with_map(const LabeledDag& d) {
    std::vector<Str> labels;
    std::vector<std::vector<NodeId>> chains(d.size());
    std::vector<NodeId> origin;
    bool any_empty = false;
    for (NodeId v = 0; v < d.size(); ++v) {
        const Str& l = d.label(v);
        if (l.empty()) {
            any_empty = true;
            chains[v].push_back(NodeId(labels.size()));
            origin.push_back(v);
            labels.push_back(Str{});
        } else {
            for (Symbol c : l) {
                chains[v].push_back(NodeId(labels.size()));
                origin.push_back(v);
                labels.push_back(Str{c});
            }
        }
    }
    std::vector<Arc> arcs;
    for (NodeId v = 0; v < d.size(); ++v)
        for (std::size_t i = 1; i < chains[v].size(); ++i)
            arcs.emplace_back(chains[v][i - 1], chains[v][i]);
    for (auto [u, v] : d.arcs()) arcs.emplace_back(chains[u].back(), chains[v].front());
    LabelFlavor f = any_empty ? LabelFlavor::SigmaEps : LabelFlavor::Sigma;
    return ExpandResult{LabeledDag(f, std::move(labels), std::move(arcs)), std::move(chains),
                        std::move(origin)};
}

inline LabeledDag expand(const LabeledDag& d) { return expand_with_map(d).dag; }

struct CoverPair {
    DagPath red, green;
};

// True iff every node lies on at least one of the two paths.
inline bool jointly_cover(const LabeledDag& d, const CoverPair& c) {
    if (!d.is_valid_path(c.red) || !d.is_valid_path(c.green))
        throw InvalidPath("cover pair contains an invalid path");
    std::vector<bool> covered(d.size(), false);
    for (NodeId v : c.red) covered[v] = true;
    for (NodeId v : c.green) covered[v] = true;
    return std::find(covered.begin(), covered.end(), false) == covered.end();
}

// Width test: the maximum antichain under reachability has size <= 2 iff the
// minimum chain cover has size <= 2 (computed by matching on the transitive
// closure); each chain then extends to a path through intermediate nodes, so
// this is exactly two-path coverability.
inline bool two_path_coverable(const LabeledDag& d) {
    std::size_t n = d.size();
    if (n <= 2) return true;
    auto reach = d.reachability();
    // Kuhn's matching on the strict closure.
    std::vector<int> match_right(n, -1);
    std::vector<bool> used;
    auto try_kuhn = [&](auto&& self, NodeId u) -> bool {
        for (std::size_t v = 0; v < n; ++v) {
            if (u == v || !reach[u][v] || used[v]) continue;
            used[v] = true;
            if (match_right[v] < 0 || self(self, NodeId(match_right[v]))) {
                match_right[v] = int(u);
                return true;
            }
        }
        return false;
    };
    std::size_t matching = 0;
    for (NodeId u = 0; u < n; ++u) {
        used.assign(n, false);
        if (try_kuhn(try_kuhn, u)) ++matching;
    }
    return n - matching <= 2;
}

inline constexpr std::size_t kPathEnumGuard = 1'000'000;
inline constexpr std::size_t kPathEnumStoredIdBudget = 50'000'000;

// All directed paths of d, or only source-to-sink paths. Order is
// lexicographic by node id sequence.
inline std::vector<DagPath> enumerate_paths(const LabeledDag& d, bool source_to_sink_only,
                                            std::size_t guard = kPathEnumGuard) {
    std::vector<DagPath> out;
    std::size_t stored_ids = 0;
    DagPath cur;
    auto dfs = [&](auto&& self, NodeId v) -> void {
        cur.push_back(v);
        bool at_sink = d.out(v).empty();
        if (!source_to_sink_only || at_sink) {
            if (out.size() >= guard) throw InstanceTooLarge("path enumeration guard exceeded");
            stored_ids += cur.size();
            if (stored_ids > kPathEnumStoredIdBudget)
                throw InstanceTooLarge("path enumeration memory budget exceeded");
            out.push_back(cur);
        }
        for (NodeId w : d.out(v)) self(self, w);
        cur.pop_back();
    };
    if (source_to_sink_only) {
        for (NodeId v : d.sources()) dfs(dfs, v);
    } else {
        for (NodeId v = 0; v < d.size(); ++v) dfs(dfs, v);
    }
    return out;
}

// Encoding of a pairwise alignment as a two-path-coverable sigmaeps DAG:
// column i contributes nodes for both rows (empty label where the row has a
// gap), with straight and crossing arcs between consecutive columns, plus an
// empty-labeled source and sink. Node ids: source 0, row-A node of column i
// at 2i-1, row-B node at 2i, sink 2L+1.
inline LabeledDag encode_diploid(const PairwiseAlignment& a) {
    std::size_t L = a.length();
    if (L == 0) throw EmptyAlignment("cannot encode an empty alignment");
    std::vector<Str> labels;
    labels.push_back(Str{});  // source
    for (std::size_t i = 0; i < L; ++i) {
        labels.push_back(a.row_a[i] == kGap ? Str{} : Str{a.row_a[i]});
        labels.push_back(a.row_b[i] == kGap ? Str{} : Str{a.row_b[i]});
    }
    labels.push_back(Str{});  // sink
    auto node_a = [](std::size_t i) { return NodeId(2 * i + 1); };
    auto node_b = [](std::size_t i) { return NodeId(2 * i + 2); };
    NodeId source = 0, sink = NodeId(2 * L + 1);
    std::vector<Arc> arcs;
    arcs.emplace_back(source, node_a(0));
    arcs.emplace_back(source, node_b(0));
    for (std::size_t i = 0; i + 1 < L; ++i) {
        arcs.emplace_back(node_a(i), node_a(i + 1));
        arcs.emplace_back(node_a(i), node_b(i + 1));
        arcs.emplace_back(node_b(i), node_b(i + 1));
        arcs.emplace_back(node_b(i), node_a(i + 1));
    }
    arcs.emplace_back(node_a(L - 1), sink);
    arcs.emplace_back(node_b(L - 1), sink);
    return LabeledDag(LabelFlavor::SigmaEps, std::move(labels), std::move(arcs));
}

}  // namespace covalign
