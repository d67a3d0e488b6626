#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sepk/error.hpp"
#include "sepk/graph.hpp"
#include "sepk/graph_io.hpp"

namespace sepk {

inline constexpr std::size_t default_vertex_budget = 1'000'000;

// The vertex v(x_1, ..., x_k) added over `base` by a multiresolution.
struct GeneratedVertex {
    std::string base;
    std::vector<std::string> coords;    // one edge from each group of C_base, in group order
    std::vector<std::size_t> positions; // position of each coordinate inside its group

    std::string id() const {
        std::string s = base + "|";
        for (std::size_t i = 0; i < coords.size(); ++i) s += (i ? "," : "") + coords[i];
        return s;
    }

    // at least two coordinates that are not the first element of their group
    bool in_complement() const {
        std::size_t non_first = 0;
        for (auto p : positions) non_first += p > 0;
        return non_first >= 2;
    }
};

// Name of alpha^{x_i}(x_1, ..., x_{i-1}, x_{i+1}, ..., x_k).
inline std::string generated_edge_id(const std::vector<std::string>& coords, std::size_t i) {
    std::string s = "a^" + coords[i] + "|";
    bool first = true;
    for (std::size_t j = 0; j < coords.size(); ++j) {
        if (j == i) continue;
        s += (first ? "" : ",") + coords[j];
        first = false;
    }
    return s;
}

namespace detail {

struct Expansion {
    std::vector<GeneratedVertex> vertices;
    std::vector<Edge> edges;
    // X(x) for every edge x in r^{-1}(V), in lexicographic order
    std::unordered_map<std::size_t, std::vector<std::string>> group_of_edge;
    std::vector<std::string> complement; // W
};

inline std::size_t checked_product(const GraphIndex& ix, std::size_t u, std::size_t cap) {
    std::size_t prod = 1;
    for (const auto& grp : ix.groups[u]) {
        if (grp.empty()) return 0;
        if (prod > cap / grp.size()) return cap + 1;
        prod *= grp.size();
    }
    return prod;
}

// Enumerates all generated vertices and arrows of the multiresolution at the
// given vertices (in E^0 order). Tuples run in lexicographic order with the
// first coordinate most significant.
inline Expansion expand(const GraphIndex& ix, const std::vector<std::size_t>& at, std::size_t budget,
                        int completed_layer) {
    std::size_t total = 0;
    for (auto u : at) {
        std::size_t m = checked_product(ix, u, budget);
        if (m > budget || total > budget - m)
            throw BudgetExceeded("multiresolution would generate more than " + std::to_string(budget) +
                                     " vertices",
                                 completed_layer);
        total += m;
    }

    const auto& g = *ix.graph;
    Expansion out;
    out.vertices.reserve(total);
    for (auto u : at) {
        const auto& groups = ix.groups[u];
        const std::size_t k = groups.size();
        for (const auto& grp : groups)
            for (auto e : grp) out.group_of_edge[e];
        std::vector<std::size_t> pos(k, 0);
        for (;;) {
            GeneratedVertex gv;
            gv.base = g.vertices[u];
            gv.positions = pos;
            for (std::size_t i = 0; i < k; ++i) gv.coords.push_back(g.edges[groups[i][pos[i]]].id);
            const std::string vid = gv.id();
            for (std::size_t i = 0; i < k; ++i) {
                const std::size_t xi = groups[i][pos[i]];
                Edge a{generated_edge_id(gv.coords, i), vid, g.edges[xi].src};
                out.group_of_edge[xi].push_back(a.id);
                out.edges.push_back(std::move(a));
            }
            if (gv.in_complement()) out.complement.push_back(vid);
            out.vertices.push_back(std::move(gv));
            // odometer, last coordinate fastest
            bool done = true;
            for (std::size_t i = k; i-- > 0;) {
                if (++pos[i] < groups[i].size()) {
                    done = false;
                    break;
                }
                pos[i] = 0;
            }
            if (done) break;
        }
    }
    return out;
}

} // namespace detail

struct MultiresolutionResult {
    SeparatedGraph graph;
    std::vector<GeneratedVertex> generated;
    std::vector<std::string> complement; // W
};

inline MultiresolutionResult multiresolve(const SeparatedGraph& g, const std::vector<std::string>& at,
                                          std::size_t budget = default_vertex_budget) {
    require_valid(g);
    GraphIndex ix(g);
    std::set<std::size_t> vset;
    for (const auto& v : at) {
        auto it = ix.vertex_pos.find(v);
        if (it == ix.vertex_pos.end())
            throw Error(ErrorKind::Precondition, "multiresolution vertex '" + v + "' is not in the graph");
        if (ix.groups[it->second].empty())
            throw Error(ErrorKind::Precondition, "vertex '" + v + "' has no groups (C_v is empty)");
        vset.insert(it->second);
    }
    for (std::size_t e = 0; e < ix.num_edges(); ++e)
        if (vset.count(ix.dst[e]) && vset.count(ix.src[e]))
            throw Error(ErrorKind::Precondition, "edge '" + g.edges[e].id + "' joins two vertices of the set");

    const std::vector<std::size_t> order(vset.begin(), vset.end());
    auto ex = detail::expand(ix, order, budget, 0);

    MultiresolutionResult out;
    auto& h = out.graph;
    h.vertices = g.vertices;
    for (const auto& gv : ex.vertices) h.vertices.push_back(gv.id());
    h.edges = g.edges;
    h.edges.insert(h.edges.end(), ex.edges.begin(), ex.edges.end());
    h.separation = g.separation;
    for (std::size_t w = 0; w < ix.num_vertices(); ++w) {
        for (auto x : ix.out_edges[w]) {
            auto it = ex.group_of_edge.find(x);
            if (it == ex.group_of_edge.end()) continue;
            h.separation[g.vertices[w]].push_back(Group{it->second, {}});
        }
    }
    out.generated = std::move(ex.vertices);
    out.complement = std::move(ex.complement);
    return out;
}

inline SeparatedGraph multiresolution_at(const SeparatedGraph& g, const std::vector<std::string>& at,
                                         std::size_t budget = default_vertex_budget) {
    return multiresolve(g, at, budget).graph;
}

// |W| = sum over u of (prod |X_i| - sum |X_i| + k_u - 1).
inline std::size_t complement_rank_formula(const SeparatedGraph& g, const std::vector<std::string>& at) {
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& u : at) {
        if (!seen.insert(u).second) continue;
        const auto& groups = g.groups_at(u);
        std::size_t prod = 1, sum = 0;
        for (const auto& grp : groups) {
            prod *= grp.edges.size();
            sum += grp.edges.size();
        }
        total += prod + groups.size() - sum - 1;
    }
    return total;
}

struct StepResult {
    SeparatedGraph graph;
    std::vector<GeneratedVertex> generated;
    std::vector<std::string> complement;   // W_{n+2}
    std::vector<std::string> group_origin; // per column of the new graph: x with group X(x)
};

inline StepResult canonical_step_detail(const SeparatedGraph& g, std::size_t budget = default_vertex_budget,
                                        int completed_layer = 0) {
    require_valid(g);
    const auto split = require_bipartite(g);
    GraphIndex ix(g);
    std::vector<std::size_t> at;
    for (const auto& u : split.layer0) at.push_back(ix.vertex(u));
    std::sort(at.begin(), at.end());
    auto ex = detail::expand(ix, at, budget, completed_layer);

    StepResult out;
    auto& h = out.graph;
    BipartiteSplit next{split.layer1, {}};
    h.vertices = split.layer1;
    for (const auto& gv : ex.vertices) {
        h.vertices.push_back(gv.id());
        next.layer1.push_back(gv.id());
    }
    h.edges = std::move(ex.edges);
    for (const auto& w : split.layer1) {
        const std::size_t wi = ix.vertex(w);
        auto& groups = h.separation[w];
        for (auto x : ix.out_edges[wi]) {
            groups.push_back(Group{ex.group_of_edge.at(x), {}});
            out.group_origin.push_back(g.edges[x].id);
        }
    }
    h.bipartite = std::move(next);
    out.generated = std::move(ex.vertices);
    out.complement = std::move(ex.complement);
    return out;
}

inline SeparatedGraph canonical_step(const SeparatedGraph& g, std::size_t budget = default_vertex_budget) {
    return canonical_step_detail(g, budget).graph;
}

struct CanonicalSequence {
    std::vector<SeparatedGraph> graphs;                 // (E_n, C^n), n = 0..depth
    std::vector<std::vector<std::string>> layers;       // D_n, n = 0..depth+1
    std::vector<std::vector<std::string>> complements;  // complements[j] = W_{j+2}
    std::vector<std::map<std::string, std::string>> roots; // roots[n] = r_n : D_n -> D_{n-2}, n >= 2
    std::vector<std::vector<std::string>> group_origin; // group_origin[n] for n >= 1

    int depth() const { return static_cast<int>(graphs.size()) - 1; }
};

inline CanonicalSequence canonical_sequence(const SeparatedGraph& g, int depth,
                                            std::size_t budget = default_vertex_budget) {
    if (depth < 0) throw Error(ErrorKind::Range, "depth must be >= 0");
    require_valid(g);
    auto split = require_bipartite(g);
    CanonicalSequence seq;
    seq.graphs.push_back(g);
    if (!seq.graphs[0].bipartite) seq.graphs[0].bipartite = split;
    seq.layers.push_back(split.layer0);
    seq.layers.push_back(split.layer1);
    seq.roots.resize(2);
    seq.group_origin.emplace_back();
    for (int n = 0; n < depth; ++n) {
        auto step = canonical_step_detail(seq.graphs.back(), budget, n);
        std::map<std::string, std::string> root;
        for (const auto& gv : step.generated) root.emplace(gv.id(), gv.base);
        seq.layers.push_back(step.graph.bipartite->layer1);
        seq.complements.push_back(std::move(step.complement));
        seq.roots.push_back(std::move(root));
        seq.group_origin.push_back(std::move(step.group_origin));
        seq.graphs.push_back(std::move(step.graph));
    }
    return seq;
}

// Root of v in D_from, pushed down to D_to (same parity, to <= from).
inline std::string root_of(const CanonicalSequence& seq, const std::string& v, int from, int to) {
    if (to > from || to < 0) throw Error(ErrorKind::Range, "root target layer must satisfy 0 <= m <= n");
    if ((from - to) % 2 != 0) throw Error(ErrorKind::Range, "root layers must have the same parity");
    if (from >= static_cast<int>(seq.layers.size()))
        throw Error(ErrorKind::Range, "layer " + std::to_string(from) + " was not computed");
    const auto& layer = seq.layers[from];
    if (std::find(layer.begin(), layer.end(), v) == layer.end())
        throw Error(ErrorKind::Invalid, "vertex '" + v + "' is not in D_" + std::to_string(from));
    std::string cur = v;
    for (int n = from; n > to; n -= 2) cur = seq.roots[n].at(cur);
    return cur;
}

inline ordered_json to_json(const CanonicalSequence& seq) {
    ordered_json out;
    out["graphs"] = ordered_json::array();
    for (const auto& g : seq.graphs) out["graphs"].push_back(to_json(g));
    ordered_json meta;
    meta["depth"] = seq.depth();
    meta["layers"] = seq.layers;
    ordered_json w = ordered_json::object();
    for (std::size_t j = 0; j < seq.complements.size(); ++j) w[std::to_string(j + 2)] = seq.complements[j];
    meta["W"] = std::move(w);
    ordered_json roots = ordered_json::object();
    for (std::size_t n = 2; n < seq.roots.size(); ++n) {
        ordered_json table = ordered_json::object();
        for (const auto& v : seq.layers[n]) table[v] = seq.roots[n].at(v);
        roots[std::to_string(n)] = std::move(table);
    }
    meta["roots"] = std::move(roots);
    out["metadata"] = std::move(meta);
    return out;
}

// (E~, C~): two copies v_0, v_1 of every vertex, arrows h(v): v_1 -> v_0 and
// e_0: s(e)_1 -> r(e)_0, with C~_{v_0} = [X~ for X in C_v] ++ [{h(v)}].
inline SeparatedGraph bipartite_companion(const SeparatedGraph& g) {
    require_valid(g);
    auto copy = [](const std::string& v, int i) { return v + "_" + std::to_string(i); };
    auto hname = [](const std::string& v) { return "h(" + v + ")"; };
    auto ename = [](const std::string& e) { return e + "_0"; };
    SeparatedGraph h;
    BipartiteSplit split;
    for (const auto& v : g.vertices) split.layer0.push_back(copy(v, 0));
    for (const auto& v : g.vertices) split.layer1.push_back(copy(v, 1));
    h.vertices = split.layer0;
    h.vertices.insert(h.vertices.end(), split.layer1.begin(), split.layer1.end());
    for (const auto& v : g.vertices) h.edges.push_back({hname(v), copy(v, 1), copy(v, 0)});
    for (const auto& e : g.edges) h.edges.push_back({ename(e.id), copy(e.src, 1), copy(e.dst, 0)});
    for (const auto& v : g.vertices) {
        auto& groups = h.separation[copy(v, 0)];
        for (const auto& grp : g.groups_at(v)) {
            Group t{{}, grp.name};
            for (const auto& e : grp.edges) t.edges.push_back(ename(e));
            groups.push_back(std::move(t));
        }
        groups.push_back(Group{{hname(v)}, {}});
    }
    h.bipartite = std::move(split);
    return h;
}

} // namespace sepk
