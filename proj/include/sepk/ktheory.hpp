#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "sepk/error.hpp"
#include "sepk/graph.hpp"
#include "sepk/int_matrix.hpp"
#include "sepk/transform.hpp"

namespace sepk {

// Integer vector over a labelled basis (the groups of C, or the vertices).
struct LabeledVector {
    std::vector<std::string> labels;
    IntVector coeffs;

    bool operator==(const LabeledVector&) const = default;

    bool is_zero() const {
        return std::all_of(coeffs.begin(), coeffs.end(), [](const Integer& x) { return x == 0; });
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < coeffs.size(); ++i) {
            const auto& c = coeffs[i];
            if (c == 0) continue;
            Integer mag = abs(c);
            if (s.empty()) s += c < 0 ? "-" : "";
            else s += c < 0 ? " - " : " + ";
            if (mag != 1) s += mag.get_str() + " ";
            s += labels[i];
        }
        return s.empty() ? "0" : s;
    }
};

// x = sum n_X delta_X, an element of Z^(C).
using KernelElement = LabeledVector;

struct IncidencePair {
    IntMatrix one_c;     // 1_C
    IntMatrix adjacency; // A_(E,C)

    IntMatrix difference() const { return one_c - adjacency; }
};

inline IncidencePair incidence(const SeparatedGraph& g) {
    require_valid(g);
    GraphIndex ix(g);
    IncidencePair p{IntMatrix(g.vertices, ix.column_labels), IntMatrix(g.vertices, ix.column_labels)};
    for (std::size_t c = 0; c < ix.num_columns(); ++c) {
        p.one_c(ix.columns[c].vertex, c) = 1;
        // a_X(w, v) = number of arrows of X from w
        for (auto e : ix.column_edges(c)) p.adjacency(ix.src[e], c) += 1;
    }
    return p;
}

inline KernelElement zero_element(const SeparatedGraph& g) {
    GraphIndex ix(g);
    return {ix.column_labels, IntVector(ix.num_columns())};
}

// Parses "X:+1,Y:-1" over the group labels of g. Labels may themselves contain
// commas; a token only ends at ",<label>:<int>" boundaries.
inline KernelElement parse_element(const SeparatedGraph& g, const std::string& text) {
    GraphIndex ix(g);
    KernelElement x{ix.column_labels, IntVector(ix.num_columns())};
    static const std::regex term(R"(^(.*):\s*([+-]?\d+)\s*$)");
    std::vector<std::string> pieces;
    std::string cur;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        std::string piece = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        cur = cur.empty() ? piece : cur + "," + piece;
        if (std::regex_match(cur, term)) {
            pieces.push_back(cur);
            cur.clear();
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (!cur.empty() && cur.find_first_not_of(" \t") != std::string::npos)
        throw Error(ErrorKind::Parse, "element term '" + cur + "' is not of the form label:coefficient");
    std::vector<bool> seen(ix.num_columns(), false);
    for (const auto& p : pieces) {
        std::smatch m;
        std::regex_match(p, m, term);
        std::string label = m[1];
        label.erase(0, label.find_first_not_of(" \t"));
        label.erase(label.find_last_not_of(" \t") + 1);
        const std::size_t c = ix.column(label);
        if (seen[c]) throw Error(ErrorKind::Parse, "group '" + label + "' listed twice");
        seen[c] = true;
        std::string num = m[2];
        if (!num.empty() && num[0] == '+') num.erase(0, 1);
        x.coeffs[c] = Integer(num);
    }
    return x;
}

inline IntVector kernel_residual(const SeparatedGraph& g, const KernelElement& x) {
    auto d = incidence(g).difference();
    if (x.coeffs.size() != d.cols()) throw Error(ErrorKind::Invalid, "element has the wrong number of coordinates");
    return d.apply(x.coeffs);
}

inline void require_in_kernel(const SeparatedGraph& g, const KernelElement& x) {
    auto res = kernel_residual(g, x);
    if (std::all_of(res.begin(), res.end(), [](const Integer& v) { return v == 0; })) return;
    LabeledVector r{g.vertices, res};
    throw Error(ErrorKind::NotInKernel, "(1_C - A) x = " + r.to_string());
}

struct KGroups {
    AbelianGroupInvariants k0;
    std::vector<KernelElement> k1_basis;

    std::size_t k1_rank() const { return k1_basis.size(); }

    AbelianGroupInvariants k1() const { return {k1_basis.size(), {}}; }
};

inline std::vector<KernelElement> k1_basis(const SeparatedGraph& g) {
    auto d = incidence(g).difference();
    std::vector<KernelElement> out;
    for (auto& v : kernel_basis(d)) out.push_back({d.col_labels(), std::move(v)});
    return out;
}

// K_0 = coker(1_C - A), K_1 = ker(1_C - A) for C*(E, C).
inline KGroups k_groups_full(const SeparatedGraph& g) {
    auto d = incidence(g).difference();
    KGroups out;
    out.k0 = cokernel_invariants(d);
    for (auto& v : kernel_basis(d)) out.k1_basis.push_back({d.col_labels(), std::move(v)});
    return out;
}

// K_1 of the tame algebra; the projection C*(E,C) -> O(E,C) is a K_1-isomorphism.
inline std::vector<KernelElement> k1_tame(const SeparatedGraph& g) { return k1_basis(g); }

// Universal group of M(E,C): Z^{E^0} modulo a_v = sum_{e in X} a_{s(e)}.
inline AbelianGroupInvariants monoid_universal_group(const SeparatedGraph& g) {
    require_valid(g);
    std::unordered_map<std::string, std::size_t> pos;
    for (std::size_t i = 0; i < g.vertices.size(); ++i) pos[g.vertices[i]] = i;
    std::unordered_map<std::string, std::string> source;
    for (const auto& e : g.edges) source[e.id] = e.src;
    std::vector<IntVector> relations;
    for (const auto& v : g.vertices)
        for (const auto& grp : g.groups_at(v)) {
            IntVector r(g.vertices.size());
            r[pos[v]] += 1;
            for (const auto& e : grp.edges) r[pos[source[e]]] -= 1;
            relations.push_back(std::move(r));
        }
    IntMatrix rel(relations.size(), g.vertices.size());
    for (std::size_t i = 0; i < relations.size(); ++i)
        for (std::size_t j = 0; j < g.vertices.size(); ++j) rel(i, j) = relations[i][j];
    // relations are rows here: quotient of Z^{E^0} by the row span
    auto snf = smith_normal_form(rel);
    AbelianGroupInvariants out;
    out.rank = g.vertices.size() - snf.rank;
    for (std::size_t i = 0; i < snf.rank; ++i)
        if (snf.D(i, i) > 1) out.factors.push_back(snf.D(i, i));
    return out;
}

struct TameK0Result {
    AbelianGroupInvariants base;              // K_0(C*(E,C))
    std::vector<std::size_t> layer_ranks;     // |W_2|, ..., |W_{depth+1}| by enumeration
    std::vector<std::size_t> formula_ranks;   // same, from the closed formula
    int depth = 0;
    bool truncated = true;
    bool via_companion = false;

    std::size_t complement_rank() const {
        return std::accumulate(layer_ranks.begin(), layer_ranks.end(), std::size_t{0});
    }

    AbelianGroupInvariants truncated_group() const { return base.plus_free(complement_rank()); }

    std::string to_string() const {
        std::string s = base.to_string();
        for (auto r : layer_ranks) s += " ⊕ Z^" + std::to_string(r);
        if (truncated) s += " (truncated)";
        return s;
    }
};

inline TameK0Result k0_tame(const SeparatedGraph& g, int depth, std::size_t budget = default_vertex_budget) {
    require_valid(g);
    TameK0Result out;
    out.depth = depth;
    out.base = cokernel_invariants(incidence(g).difference());
    SeparatedGraph bip = g;
    if (!is_bipartite(g)) {
        bip = bipartite_companion(g);
        out.via_companion = true;
    }
    auto seq = canonical_sequence(bip, depth, budget);
    for (int n = 0; n < depth; ++n) {
        out.layer_ranks.push_back(seq.complements[n].size());
        out.formula_ranks.push_back(complement_rank_formula(seq.graphs[n], seq.layers[n]));
    }
    return out;
}

// Kernel transport along one canonical step: delta_X(e) receives
// sum_{i>=2} n_i for e in X_1 and -n_i for e in X_i, i >= 2.
inline KernelElement phi_transport(const SeparatedGraph& g, const StepResult& step, const KernelElement& x) {
    require_in_kernel(g, x);
    const auto split = require_bipartite(g);
    GraphIndex ix(g);
    GraphIndex next(step.graph);
    std::unordered_map<std::string, std::size_t> column_of_origin;
    for (std::size_t c = 0; c < step.group_origin.size(); ++c) column_of_origin[step.group_origin[c]] = c;
    KernelElement out{next.column_labels, IntVector(next.num_columns())};
    for (const auto& uid : split.layer0) {
        const std::size_t u = ix.vertex(uid);
        const auto& groups = ix.groups[u];
        if (groups.empty()) continue;
        Integer rest = 0;
        for (std::size_t i = 1; i < groups.size(); ++i) {
            const auto& n = x.coeffs[ix.column_of[u][i]];
            rest += n;
            for (auto e : groups[i]) out.coeffs[column_of_origin.at(g.edges[e].id)] -= n;
        }
        for (auto e : groups[0]) out.coeffs[column_of_origin.at(g.edges[e].id)] += rest;
    }
    return out;
}

inline KernelElement phi_transport(const SeparatedGraph& g, const KernelElement& x) {
    return phi_transport(g, canonical_step_detail(g), x);
}

// sum over the positive support of n_X (s(X) - delta_{r(X)}), s(X) = sum_{e in X} delta_{s(e)}.
inline LabeledVector connecting_map_image(const SeparatedGraph& g, const KernelElement& x) {
    require_bipartite(g);
    require_in_kernel(g, x);
    GraphIndex ix(g);
    LabeledVector out{g.vertices, IntVector(g.vertices.size())};
    for (std::size_t c = 0; c < ix.num_columns(); ++c) {
        const auto& n = x.coeffs[c];
        if (n <= 0) continue;
        for (auto e : ix.column_edges(c)) out.coeffs[ix.src[e]] += n;
        out.coeffs[ix.columns[c].vertex] -= n;
    }
    return out;
}

using CharacterAssignment = std::map<std::string, std::complex<double>>;

inline constexpr double unit_tolerance = 1e-12;
inline constexpr double relation_tolerance = 1e-9;

// max |lambda(v) - prod_{x in X} lambda(s(x))| over all v and X in C_v
inline double character_residual(const SeparatedGraph& g, const CharacterAssignment& lambda) {
    std::unordered_map<std::string, std::string> source;
    for (const auto& e : g.edges) source[e.id] = e.src;
    double worst = 0;
    for (const auto& v : g.vertices)
        for (const auto& grp : g.groups_at(v)) {
            std::complex<double> prod = 1;
            for (const auto& e : grp.edges) prod *= lambda.at(source[e]);
            worst = std::max(worst, std::abs(lambda.at(v) - prod));
        }
    return worst;
}

namespace detail {

inline void require_unit(const std::string& v, std::complex<double> z) {
    if (std::abs(std::abs(z) - 1.0) > unit_tolerance)
        throw Error(ErrorKind::Precondition, "character value at '" + v + "' is not of modulus one");
}

} // namespace detail

// Extends a character of K_0(C*(E,C)) to the multiresolution at `at`, given
// arbitrary unit values on the complement W.
inline CharacterAssignment extend_character(const SeparatedGraph& g, const std::vector<std::string>& at,
                                            const CharacterAssignment& base, const CharacterAssignment& free) {
    require_valid(g);
    for (const auto& v : g.vertices) {
        auto it = base.find(v);
        if (it == base.end()) throw Error(ErrorKind::Precondition, "base character misses vertex '" + v + "'");
        detail::require_unit(v, it->second);
    }
    if (base.size() != g.vertices.size())
        throw Error(ErrorKind::Precondition, "base character assigns values to unknown vertices");
    std::unordered_map<std::string, std::string> source;
    for (const auto& e : g.edges) source[e.id] = e.src;
    for (const auto& v : g.vertices) {
        const auto& groups = g.groups_at(v);
        for (std::size_t k = 0; k < groups.size(); ++k) {
            std::complex<double> prod = 1;
            for (const auto& e : groups[k].edges) prod *= base.at(source[e]);
            if (std::abs(base.at(v) - prod) > relation_tolerance)
                throw Error(ErrorKind::Precondition,
                            "base character violates the relation of group " + group_label(v, k, groups[k]));
        }
    }

    auto res = multiresolve(g, at);
    std::set<std::string> wset(res.complement.begin(), res.complement.end());
    for (const auto& w : res.complement) {
        auto it = free.find(w);
        if (it == free.end()) throw Error(ErrorKind::Precondition, "missing free value for '" + w + "'");
        detail::require_unit(w, it->second);
    }
    for (const auto& [v, z] : free)
        if (!wset.count(v)) throw Error(ErrorKind::Precondition, "free value given for '" + v + "', which is not in W");

    CharacterAssignment out = base;
    const auto& gen = res.generated;
    std::size_t begin = 0;
    while (begin < gen.size()) {
        std::size_t end = begin;
        while (end < gen.size() && gen[end].base == gen[begin].base) ++end;
        const std::size_t k = gen[begin].coords.size();
        std::optional<std::size_t> all_first;
        for (std::size_t j = begin; j < end; ++j) {
            std::size_t non_first = 0;
            for (auto p : gen[j].positions) non_first += p > 0;
            if (non_first >= 2) out[gen[j].id()] = free.at(gen[j].id());
            if (non_first == 0) all_first = j;
        }
        // exactly one non-first coordinate i: lambda(s(x_i)) / prod over the rest of X(x_i)
        for (std::size_t j = begin; j < end; ++j) {
            const auto& pj = gen[j].positions;
            std::size_t non_first = 0, axis = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (pj[i] > 0) {
                    ++non_first;
                    axis = i;
                }
            if (non_first != 1) continue;
            std::complex<double> prod = 1;
            for (std::size_t l = begin; l < end; ++l)
                if (l != j && gen[l].positions[axis] == pj[axis]) prod *= out.at(gen[l].id());
            out[gen[j].id()] = base.at(source.at(gen[j].coords[axis])) / prod;
        }
        if (all_first) {
            std::complex<double> prod = 1;
            for (std::size_t l = begin; l < end; ++l)
                if (l != *all_first) prod *= out.at(gen[l].id());
            out[gen[*all_first].id()] = base.at(gen[begin].base) / prod;
        }
        begin = end;
    }
    return out;
}

} // namespace sepk
