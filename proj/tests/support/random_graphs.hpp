#pragma once

#include <algorithm>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sepk/graph.hpp"
#include "sepk/ktheory.hpp"

namespace sepk::support {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct RandomGraphShape {
    int max_ranges = 5;      // range vertices r1..
    int max_sources = 4;     // pure source vertices s1..
    int max_groups = 3;      // groups per range vertex
    int max_group_size = 3;
    double range_to_range = 0.25; // chance that an arrow starts at a range vertex
};

// A finitely separated graph; every range vertex gets 0..max_groups groups.
inline SeparatedGraph random_separated_graph(Rng& rng, const RandomGraphShape& shape = {}) {
    SeparatedGraph g;
    const int nr = uniform(rng, 1, shape.max_ranges);
    const int ns = uniform(rng, 1, shape.max_sources);
    for (int i = 1; i <= nr; ++i) g.vertices.push_back("r" + std::to_string(i));
    for (int i = 1; i <= ns; ++i) g.vertices.push_back("s" + std::to_string(i));
    std::bernoulli_distribution from_range(shape.range_to_range);
    int edge_no = 0;
    for (int i = 1; i <= nr; ++i) {
        const std::string v = "r" + std::to_string(i);
        const int k = uniform(rng, 0, shape.max_groups);
        for (int x = 0; x < k; ++x) {
            Group grp;
            const int size = uniform(rng, 1, shape.max_group_size);
            for (int t = 0; t < size; ++t) {
                const std::string src = from_range(rng) ? "r" + std::to_string(uniform(rng, 1, nr))
                                                        : "s" + std::to_string(uniform(rng, 1, ns));
                const std::string id = "e" + std::to_string(++edge_no);
                g.edges.push_back({id, src, v});
                grp.edges.push_back(id);
            }
            g.separation[v].push_back(std::move(grp));
        }
    }
    return g;
}

// Vertices with C_u nonempty and no arrow between two chosen vertices.
inline std::vector<std::string> random_admissible_set(Rng& rng, const SeparatedGraph& g) {
    std::vector<std::string> candidates;
    for (const auto& v : g.vertices)
        if (!g.groups_at(v).empty()) candidates.push_back(v);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    std::vector<std::string> chosen;
    for (const auto& v : candidates) {
        if (uniform(rng, 0, 2) == 0 && !chosen.empty()) continue;
        bool clash = false;
        for (const auto& e : g.edges) {
            const bool src_in = e.src == v || std::find(chosen.begin(), chosen.end(), e.src) != chosen.end();
            const bool dst_in = e.dst == v || std::find(chosen.begin(), chosen.end(), e.dst) != chosen.end();
            if (src_in && dst_in && (e.src == v || e.dst == v)) clash = true;
        }
        if (!clash) chosen.push_back(v);
    }
    // keep E^0 order so results do not depend on the shuffle
    std::vector<std::string> out;
    for (const auto& v : g.vertices)
        if (std::find(chosen.begin(), chosen.end(), v) != chosen.end()) out.push_back(v);
    return out;
}

// A finite bipartite separated graph with layers u1.. and w1..; every w has an arrow.
inline SeparatedGraph random_bipartite(Rng& rng, int max_ranges = 3, int max_sources = 3, int max_groups = 3,
                                       int max_group_size = 3) {
    for (;;) {
        SeparatedGraph g;
        const int nu = uniform(rng, 1, max_ranges);
        const int nw = uniform(rng, 1, max_sources);
        BipartiteSplit split;
        for (int i = 1; i <= nu; ++i) split.layer0.push_back("u" + std::to_string(i));
        for (int i = 1; i <= nw; ++i) split.layer1.push_back("w" + std::to_string(i));
        g.vertices = split.layer0;
        g.vertices.insert(g.vertices.end(), split.layer1.begin(), split.layer1.end());
        int edge_no = 0;
        std::vector<bool> used(nw + 1, false);
        for (const auto& u : split.layer0) {
            const int k = uniform(rng, 1, max_groups);
            for (int x = 0; x < k; ++x) {
                Group grp;
                const int size = uniform(rng, 1, max_group_size);
                for (int t = 0; t < size; ++t) {
                    const int w = uniform(rng, 1, nw);
                    used[w] = true;
                    const std::string id = "e" + std::to_string(++edge_no);
                    g.edges.push_back({id, "w" + std::to_string(w), u});
                    grp.edges.push_back(id);
                }
                g.separation[u].push_back(std::move(grp));
            }
        }
        if (std::all_of(used.begin() + 1, used.end(), [](bool b) { return b; })) {
            g.bipartite = std::move(split);
            return g;
        }
    }
}

struct BipartiteWithKernel {
    SeparatedGraph graph;
    KernelElement x;
};

// Rejection-samples a bipartite graph with nonzero kernel and returns a random
// nonzero integer combination of its kernel basis.
inline BipartiteWithKernel random_bipartite_with_kernel(Rng& rng) {
    for (;;) {
        auto g = random_bipartite(rng);
        auto basis = k1_basis(g);
        if (basis.empty()) continue;
        KernelElement x = zero_element(g);
        while (x.is_zero()) {
            for (const auto& b : basis) {
                const int c = uniform(rng, -2, 2);
                for (std::size_t i = 0; i < x.coeffs.size(); ++i) x.coeffs[i] += c * b.coeffs[i];
            }
        }
        return {std::move(g), std::move(x)};
    }
}

// A character of K_0: lambda = exp(2 pi i theta) with theta a random real
// combination of the left kernel of 1_C - A.
inline CharacterAssignment random_character(Rng& rng, const SeparatedGraph& g) {
    const auto left = kernel_basis(incidence(g).difference().transpose());
    std::uniform_real_distribution<double> coef(0.0, 1.0);
    std::vector<double> theta(g.vertices.size(), 0.0);
    for (const auto& b : left) {
        const double c = coef(rng);
        for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += c * b[i].get_d();
    }
    CharacterAssignment out;
    for (std::size_t i = 0; i < theta.size(); ++i) out[g.vertices[i]] = std::polar(1.0, 2 * std::numbers::pi * theta[i]);
    return out;
}

inline CharacterAssignment random_free_values(Rng& rng, const std::vector<std::string>& w) {
    std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
    CharacterAssignment out;
    for (const auto& v : w) out[v] = std::polar(1.0, angle(rng));
    return out;
}

} // namespace sepk::support
