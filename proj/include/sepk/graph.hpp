#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "sepk/error.hpp"

namespace sepk {

struct Edge {
    std::string id;
    std::string src;
    std::string dst;

    bool operator==(const Edge&) const = default;
};

// One set X of C_v. The list order of `edges` is the total order on X.
// `name` is optional; unnamed groups are labelled "v.k" (k-th group of C_v).
struct Group {
    std::vector<std::string> edges;
    std::string name;

    bool operator==(const Group&) const = default;
};

struct BipartiteSplit {
    std::vector<std::string> layer0; // ranges, E^{0,0}
    std::vector<std::string> layer1; // sources, E^{0,1}

    bool operator==(const BipartiteSplit&) const = default;
};

// A finitely separated graph (E, C). All list orders are significant: the
// order of C_v, of each group, and of the edge list (which fixes the order of
// every s^{-1}(w)) make up the order structure used by the transformations.
struct SeparatedGraph {
    std::vector<std::string> vertices;
    std::vector<Edge> edges;
    std::map<std::string, std::vector<Group>> separation;
    std::optional<BipartiteSplit> bipartite;

    bool operator==(const SeparatedGraph&) const = default;

    const std::vector<Group>& groups_at(const std::string& v) const {
        static const std::vector<Group> none;
        auto it = separation.find(v);
        return it == separation.end() ? none : it->second;
    }
};

inline std::string group_label(const std::string& vertex, std::size_t k, const Group& group) {
    if (!group.name.empty()) return group.name;
    return vertex + "." + std::to_string(k + 1);
}

struct Violation {
    std::string invariant;
    std::string subject;

    bool operator==(const Violation&) const = default;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool ok() const { return violations.empty(); }

    bool has(const std::string& invariant) const {
        return std::any_of(violations.begin(), violations.end(),
                           [&](const Violation& v) { return v.invariant == invariant; });
    }
};

inline ValidationReport validate(const SeparatedGraph& g) {
    ValidationReport rep;
    auto add = [&](std::string inv, std::string subject) {
        rep.violations.push_back({std::move(inv), std::move(subject)});
    };

    std::unordered_set<std::string> vset;
    for (const auto& v : g.vertices)
        if (!vset.insert(v).second) add("duplicate vertex id", v);

    std::unordered_map<std::string, const Edge*> eset;
    for (const auto& e : g.edges) {
        if (!eset.emplace(e.id, &e).second) add("duplicate edge id", e.id);
        if (!vset.count(e.src)) add("unknown source vertex", e.id + " -> " + e.src);
        if (!vset.count(e.dst)) add("unknown range vertex", e.id + " -> " + e.dst);
    }

    std::unordered_map<std::string, std::string> owner; // edge -> group label
    std::set<std::string> labels;
    for (const auto& [v, groups] : g.separation) {
        if (!vset.count(v)) add("separation at unknown vertex", v);
        for (std::size_t k = 0; k < groups.size(); ++k) {
            const auto label = group_label(v, k, groups[k]);
            if (!labels.insert(label).second) add("duplicate group label", label);
            if (groups[k].edges.empty()) add("empty group", label);
            for (const auto& id : groups[k].edges) {
                auto it = eset.find(id);
                if (it == eset.end()) {
                    add("group references unknown edge", label + ": " + id);
                    continue;
                }
                if (it->second->dst != v) {
                    add("edge grouped under wrong range vertex", label + ": " + id);
                    continue;
                }
                if (!owner.emplace(id, label).second) add("groups not disjoint", id);
            }
        }
    }
    for (const auto& e : g.edges) {
        if (!owner.count(e.id) && vset.count(e.dst)) add("partition not covering", e.dst + ": " + e.id);
    }

    if (g.bipartite) {
        const auto& split = *g.bipartite;
        std::unordered_set<std::string> l0(split.layer0.begin(), split.layer0.end());
        std::unordered_set<std::string> l1(split.layer1.begin(), split.layer1.end());
        for (const auto& v : split.layer0) {
            if (!vset.count(v)) add("bipartite layer names unknown vertex", v);
            if (l1.count(v)) add("bipartite layers overlap", v);
        }
        for (const auto& v : split.layer1)
            if (!vset.count(v)) add("bipartite layer names unknown vertex", v);
        std::unordered_set<std::string> has_in, has_out;
        for (const auto& e : g.edges) {
            has_in.insert(e.dst);
            has_out.insert(e.src);
            if (!l0.count(e.dst)) add("bipartite edge range not in layer0", e.id);
            if (!l1.count(e.src)) add("bipartite edge source not in layer1", e.id);
        }
        for (const auto& v : g.vertices)
            if (!l0.count(v) && !l1.count(v)) add("bipartite layers not covering", v);
        for (const auto& v : split.layer0)
            if (!has_in.count(v)) add("bipartite layer0 vertex without incoming edge", v);
        for (const auto& v : split.layer1)
            if (!has_out.count(v)) add("bipartite layer1 vertex without outgoing edge", v);
    }
    return rep;
}

inline void require_valid(const SeparatedGraph& g) {
    auto rep = validate(g);
    if (!rep.ok()) {
        const auto& v = rep.violations.front();
        throw Error(ErrorKind::Invalid, v.invariant + " (" + v.subject + ")");
    }
}

// Integer view of a validated graph. Columns of the incidence matrices are
// the groups of C listed vertex by vertex, groups in C_v order.
struct GraphIndex {
    struct Column {
        std::size_t vertex;
        std::size_t k;
    };

    const SeparatedGraph* graph = nullptr;
    std::unordered_map<std::string, std::size_t> vertex_pos;
    std::unordered_map<std::string, std::size_t> edge_pos;
    std::vector<std::size_t> src, dst;
    std::vector<std::vector<std::vector<std::size_t>>> groups; // groups[v][k] = edge indices
    std::vector<std::vector<std::size_t>> out_edges;           // s^{-1}(v) in edge order
    std::vector<std::vector<std::size_t>> in_edges;            // r^{-1}(v) in edge order
    std::vector<Column> columns;
    std::vector<std::vector<std::size_t>> column_of; // column_of[v][k]
    std::vector<std::size_t> edge_column;            // column of the group containing the edge
    std::vector<std::size_t> edge_rank;              // position of the edge inside its group
    std::vector<std::string> column_labels;

    explicit GraphIndex(const SeparatedGraph& g) : graph(&g) {
        const std::size_t nv = g.vertices.size(), ne = g.edges.size();
        for (std::size_t i = 0; i < nv; ++i) vertex_pos.emplace(g.vertices[i], i);
        src.resize(ne);
        dst.resize(ne);
        out_edges.resize(nv);
        in_edges.resize(nv);
        for (std::size_t i = 0; i < ne; ++i) {
            const auto& e = g.edges[i];
            edge_pos.emplace(e.id, i);
            src[i] = vertex(e.src);
            dst[i] = vertex(e.dst);
            out_edges[src[i]].push_back(i);
            in_edges[dst[i]].push_back(i);
        }
        groups.resize(nv);
        column_of.resize(nv);
        edge_column.assign(ne, 0);
        edge_rank.assign(ne, 0);
        for (std::size_t v = 0; v < nv; ++v) {
            const auto& gs = g.groups_at(g.vertices[v]);
            for (std::size_t k = 0; k < gs.size(); ++k) {
                std::vector<std::size_t> ids;
                ids.reserve(gs[k].edges.size());
                const std::size_t col = columns.size();
                for (std::size_t t = 0; t < gs[k].edges.size(); ++t) {
                    const std::size_t e = edge(gs[k].edges[t]);
                    ids.push_back(e);
                    edge_column[e] = col;
                    edge_rank[e] = t;
                }
                groups[v].push_back(std::move(ids));
                column_of[v].push_back(col);
                columns.push_back({v, k});
                column_labels.push_back(group_label(g.vertices[v], k, gs[k]));
            }
        }
    }

    std::size_t vertex(const std::string& id) const {
        auto it = vertex_pos.find(id);
        if (it == vertex_pos.end()) throw Error(ErrorKind::DanglingEndpoint, "unknown vertex '" + id + "'");
        return it->second;
    }

    std::size_t edge(const std::string& id) const {
        auto it = edge_pos.find(id);
        if (it == edge_pos.end()) throw Error(ErrorKind::DanglingEndpoint, "unknown edge '" + id + "'");
        return it->second;
    }

    std::size_t num_vertices() const { return graph->vertices.size(); }
    std::size_t num_edges() const { return graph->edges.size(); }
    std::size_t num_columns() const { return columns.size(); }

    std::size_t column(const std::string& label) const {
        for (std::size_t c = 0; c < column_labels.size(); ++c)
            if (column_labels[c] == label) return c;
        throw Error(ErrorKind::Invalid, "unknown group '" + label + "'");
    }

    const std::vector<std::size_t>& column_edges(std::size_t c) const {
        return groups[columns[c].vertex][columns[c].k];
    }
};

// The bipartite split of g: the declared one, or the unique split
// (ranges, sources) when every vertex is exactly one of them.
inline std::optional<BipartiteSplit> bipartite_split(const SeparatedGraph& g) {
    if (g.bipartite) {
        if (!validate(g).ok()) return std::nullopt;
        return g.bipartite;
    }
    std::unordered_set<std::string> ranges, sources;
    for (const auto& e : g.edges) {
        ranges.insert(e.dst);
        sources.insert(e.src);
    }
    BipartiteSplit split;
    for (const auto& v : g.vertices) {
        const bool r = ranges.count(v) > 0, s = sources.count(v) > 0;
        if (r == s) return std::nullopt;
        (r ? split.layer0 : split.layer1).push_back(v);
    }
    return split;
}

inline bool is_bipartite(const SeparatedGraph& g) { return bipartite_split(g).has_value(); }

inline BipartiteSplit require_bipartite(const SeparatedGraph& g) {
    auto split = bipartite_split(g);
    if (!split) throw Error(ErrorKind::NotBipartite, "expected a bipartite separated graph");
    return *split;
}

// E(m,n): vertices v, w; n arrows a1..an in X and m arrows b1..bm in Y, all w -> v.
inline SeparatedGraph make_emn(int m, int n) {
    if (!(1 < m && m <= n))
        throw Error(ErrorKind::Range, "E(m,n) requires 1 < m <= n, got m=" + std::to_string(m) +
                                          ", n=" + std::to_string(n));
    SeparatedGraph g;
    g.vertices = {"v", "w"};
    Group x{{}, "X"}, y{{}, "Y"};
    for (int i = 1; i <= n; ++i) {
        g.edges.push_back({"a" + std::to_string(i), "w", "v"});
        x.edges.push_back("a" + std::to_string(i));
    }
    for (int j = 1; j <= m; ++j) {
        g.edges.push_back({"b" + std::to_string(j), "w", "v"});
        y.edges.push_back("b" + std::to_string(j));
    }
    g.separation["v"] = {x, y};
    g.bipartite = BipartiteSplit{{"v"}, {"w"}};
    return g;
}

// Lamplighter graph: v, w1..wp; a_i, b_i from w_i to v; C_v = {X = {a_i}, Y = {b_i}}.
inline SeparatedGraph make_lamplighter(int p) {
    if (p < 2) throw Error(ErrorKind::Range, "lamplighter(p) requires p >= 2, got p=" + std::to_string(p));
    SeparatedGraph g;
    g.vertices.push_back("v");
    BipartiteSplit split{{"v"}, {}};
    for (int i = 1; i <= p; ++i) {
        g.vertices.push_back("w" + std::to_string(i));
        split.layer1.push_back("w" + std::to_string(i));
    }
    Group x{{}, "X"}, y{{}, "Y"};
    for (int i = 1; i <= p; ++i) {
        g.edges.push_back({"a" + std::to_string(i), "w" + std::to_string(i), "v"});
        x.edges.push_back("a" + std::to_string(i));
    }
    for (int i = 1; i <= p; ++i) {
        g.edges.push_back({"b" + std::to_string(i), "w" + std::to_string(i), "v"});
        y.edges.push_back("b" + std::to_string(i));
    }
    g.separation["v"] = {x, y};
    g.bipartite = split;
    return g;
}

inline SeparatedGraph builtin(const std::string& name, const std::vector<int>& params) {
    if (name == "E") {
        if (params.size() != 2) throw Error(ErrorKind::Range, "E(m,n) takes two parameters");
        return make_emn(params[0], params[1]);
    }
    if (name == "lamplighter") {
        if (params.size() != 1) throw Error(ErrorKind::Range, "lamplighter(p) takes one parameter");
        return make_lamplighter(params[0]);
    }
    throw Error(ErrorKind::Range, "unknown built-in graph '" + name + "'");
}

// Parses "E(3,3)" or "lamplighter(2)".
inline SeparatedGraph builtin(const std::string& spec) {
    static const std::regex re(R"(\s*([A-Za-z_]+)\s*\(\s*(-?\d+(?:\s*,\s*-?\d+)*)\s*\)\s*)");
    std::smatch m;
    if (!std::regex_match(spec, m, re)) throw Error(ErrorKind::Range, "cannot parse built-in '" + spec + "'");
    std::vector<int> params;
    std::string args = m[2];
    std::size_t pos = 0;
    while (pos <= args.size()) {
        auto comma = args.find(',', pos);
        params.push_back(std::stoi(args.substr(pos, comma - pos)));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return builtin(m[1], params);
}

} // namespace sepk
