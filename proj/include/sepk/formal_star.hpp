#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sepk/error.hpp"
#include "sepk/graph.hpp"
#include "sepk/int_matrix.hpp"
#include "sepk/ktheory.hpp"

namespace sepk {

// Words of length <= 2 in vertices, edges and edge adjoints, reduced modulo
// (V), (E), (SCK1) and (SCK2).

struct Letter {
    enum class Kind : std::uint8_t { Vertex, Edge, Adjoint };
    Kind kind;
    std::size_t index; // vertex index for Vertex, edge index otherwise

    auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

struct WordOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

inline constexpr std::size_t max_word_length = 2;

class StarContext {
public:
    explicit StarContext(SeparatedGraph g)
        : graph_(std::make_shared<const SeparatedGraph>(std::move(g))), index_(std::make_shared<GraphIndex>(*graph_)) {
        require_valid(*graph_);
    }

    const SeparatedGraph& graph() const { return *graph_; }
    const GraphIndex& index() const { return *index_; }

    Letter vertex(const std::string& id) const { return {Letter::Kind::Vertex, index_->vertex(id)}; }
    Letter edge(const std::string& id) const { return {Letter::Kind::Edge, index_->edge(id)}; }
    Letter adjoint(const std::string& id) const { return {Letter::Kind::Adjoint, index_->edge(id)}; }

    // a letter L satisfies L = left(L) L right(L)
    std::size_t left(const Letter& l) const {
        switch (l.kind) {
        case Letter::Kind::Vertex: return l.index;
        case Letter::Kind::Edge: return index_->dst[l.index];
        case Letter::Kind::Adjoint: return index_->src[l.index];
        }
        return 0;
    }

    std::size_t right(const Letter& l) const {
        switch (l.kind) {
        case Letter::Kind::Vertex: return l.index;
        case Letter::Kind::Edge: return index_->src[l.index];
        case Letter::Kind::Adjoint: return index_->dst[l.index];
        }
        return 0;
    }

    std::string name(const Letter& l) const {
        switch (l.kind) {
        case Letter::Kind::Vertex: return graph_->vertices[l.index];
        case Letter::Kind::Edge: return graph_->edges[l.index].id;
        case Letter::Kind::Adjoint: return graph_->edges[l.index].id + "*";
        }
        return {};
    }

    std::string to_string(const Word& w) const {
        std::string s;
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (i > 0 && w[i - 1].kind != Letter::Kind::Adjoint) s += " ";
            s += name(w[i]);
        }
        return s;
    }

private:
    std::shared_ptr<const SeparatedGraph> graph_;
    std::shared_ptr<GraphIndex> index_;
};

class FormalExpr {
public:
    using Terms = std::map<Word, Integer, WordOrder>;

    FormalExpr() = default;

    static FormalExpr term(Word w, Integer c = 1) {
        FormalExpr e;
        if (c != 0) e.terms_.emplace(std::move(w), std::move(c));
        return e;
    }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add(const Word& w, const Integer& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(w, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    FormalExpr& operator+=(const FormalExpr& o) {
        for (const auto& [w, c] : o.terms_) add(w, c);
        return *this;
    }

    FormalExpr& operator-=(const FormalExpr& o) {
        for (const auto& [w, c] : o.terms_) add(w, -c);
        return *this;
    }

    friend FormalExpr operator+(FormalExpr a, const FormalExpr& b) { return a += b; }
    friend FormalExpr operator-(FormalExpr a, const FormalExpr& b) { return a -= b; }

    FormalExpr scaled(const Integer& k) const {
        FormalExpr out;
        if (k == 0) return out;
        for (const auto& [w, c] : terms_) out.terms_.emplace(w, c * k);
        return out;
    }

    bool operator==(const FormalExpr&) const = default;

    // the vertex index if this is c * v for a single vertex v
    std::optional<std::pair<std::size_t, Integer>> as_vertex_multiple() const {
        if (terms_.size() != 1) return std::nullopt;
        const auto& [w, c] = *terms_.begin();
        if (w.size() != 1 || w[0].kind != Letter::Kind::Vertex) return std::nullopt;
        return std::make_pair(w[0].index, c);
    }

private:
    Terms terms_;
};

// Checks that consecutive letters compose.
inline Word make_word(const StarContext& ctx, std::vector<Letter> letters) {
    if (letters.empty()) throw Error(ErrorKind::MalformedExpression, "empty word");
    for (std::size_t i = 0; i + 1 < letters.size(); ++i)
        if (ctx.right(letters[i]) != ctx.left(letters[i + 1]))
            throw Error(ErrorKind::MalformedExpression,
                        "'" + ctx.name(letters[i]) + "' does not compose with '" + ctx.name(letters[i + 1]) + "'");
    return letters;
}

namespace detail {

// Reduces a composable word with (V), (E) and (SCK1). Returns nullopt for zero.
inline std::optional<Word> reduce_word(const StarContext& ctx, const Word& w) {
    const auto& ix = ctx.index();
    Word out;
    for (const auto& l : w) {
        if (!out.empty() && ctx.right(out.back()) != ctx.left(l)) {
            const auto& prev = out.back();
            // e* f with r(e) != r(f) is zero; any other mismatch means the word was not composable
            if (prev.kind == Letter::Kind::Adjoint && l.kind == Letter::Kind::Edge) return std::nullopt;
            throw Error(ErrorKind::MalformedExpression,
                        "'" + ctx.name(prev) + "' does not compose with '" + ctx.name(l) + "'");
        }
        if (l.kind == Letter::Kind::Vertex) {
            if (out.empty()) out.push_back(l);
            continue;
        }
        if (!out.empty() && out.back().kind == Letter::Kind::Vertex) out.pop_back();
        if (!out.empty() && out.back().kind == Letter::Kind::Adjoint && l.kind == Letter::Kind::Edge &&
            ix.edge_column[out.back().index] == ix.edge_column[l.index]) {
            if (out.back().index != l.index) return std::nullopt;
            const std::size_t s = ix.src[l.index];
            out.pop_back();
            if (out.empty()) out.push_back({Letter::Kind::Vertex, s});
            continue;
        }
        out.push_back(l);
    }
    if (out.size() > max_word_length)
        throw Error(ErrorKind::Unsupported, "word '" + ctx.to_string(out) + "' is longer than " +
                                                std::to_string(max_word_length) + " letters");
    return out;
}

} // namespace detail

// (SCK1) on every word, then (SCK2): a complete sum c * sum_{e in X} e e* becomes c * r(X).
inline FormalExpr normalize(const StarContext& ctx, const FormalExpr& x) {
    const auto& ix = ctx.index();
    FormalExpr out;
    for (const auto& [w, c] : x.terms())
        if (auto r = detail::reduce_word(ctx, w)) out.add(*r, c);

    for (std::size_t col = 0; col < ix.num_columns(); ++col) {
        const auto& group = ix.column_edges(col);
        if (group.empty()) continue;
        std::vector<Integer> coef;
        for (auto e : group) {
            Word w{{Letter::Kind::Edge, e}, {Letter::Kind::Adjoint, e}};
            auto it = out.terms().find(w);
            if (it == out.terms().end()) break;
            coef.push_back(it->second);
        }
        if (coef.size() != group.size()) continue;
        const int sign = sgn(coef[0]);
        if (!std::all_of(coef.begin(), coef.end(), [&](const Integer& c) { return sgn(c) == sign; })) continue;
        Integer m = abs(coef[0]);
        for (const auto& c : coef) m = std::min<Integer>(m, abs(c));
        const Integer take = sign * m;
        for (auto e : group) out.add({{Letter::Kind::Edge, e}, {Letter::Kind::Adjoint, e}}, -take);
        out.add({{Letter::Kind::Vertex, ix.columns[col].vertex}}, take);
    }
    return out;
}

inline FormalExpr multiply(const StarContext& ctx, const FormalExpr& a, const FormalExpr& b) {
    FormalExpr raw;
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [wb, cb] : b.terms()) {
            if (ctx.right(wa.back()) != ctx.left(wb.front())) continue;
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            raw.add(w, ca * cb);
        }
    return normalize(ctx, raw);
}

inline Word adjoint(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& l : out) {
        if (l.kind == Letter::Kind::Edge) l.kind = Letter::Kind::Adjoint;
        else if (l.kind == Letter::Kind::Adjoint) l.kind = Letter::Kind::Edge;
    }
    return out;
}

inline FormalExpr adjoint(const FormalExpr& x) {
    FormalExpr out;
    for (const auto& [w, c] : x.terms()) out.add(adjoint(w), c);
    return out;
}

inline std::string to_string(const StarContext& ctx, const FormalExpr& x) {
    std::string s;
    for (const auto& [w, c] : x.terms()) {
        Integer mag = abs(c);
        if (s.empty()) s += c < 0 ? "-" : "";
        else s += c < 0 ? " - " : " + ";
        if (mag != 1) s += mag.get_str() + " ";
        s += ctx.to_string(w);
    }
    return s.empty() ? "0" : s;
}

class FormalMatrix {
public:
    FormalMatrix() = default;
    FormalMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels)
        : rows_(std::move(row_labels)), cols_(std::move(col_labels)), data_(rows_.size() * cols_.size()) {}

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_.size(); }
    const std::vector<std::string>& row_labels() const { return rows_; }
    const std::vector<std::string>& col_labels() const { return cols_; }

    FormalExpr& operator()(std::size_t i, std::size_t j) { return data_[i * cols_.size() + j]; }
    const FormalExpr& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_.size() + j]; }

    bool operator==(const FormalMatrix& o) const {
        return rows() == o.rows() && cols() == o.cols() && data_ == o.data_;
    }

    std::string to_string(const StarContext& ctx) const {
        std::vector<std::vector<std::string>> cells(rows() + 1, std::vector<std::string>(cols() + 1));
        for (std::size_t j = 0; j < cols(); ++j) cells[0][j + 1] = cols_[j];
        for (std::size_t i = 0; i < rows(); ++i) {
            cells[i + 1][0] = rows_[i];
            for (std::size_t j = 0; j < cols(); ++j) cells[i + 1][j + 1] = sepk::to_string(ctx, (*this)(i, j));
        }
        return render_grid(cells);
    }

private:
    std::vector<std::string> rows_, cols_;
    std::vector<FormalExpr> data_;
};

inline FormalMatrix multiply(const StarContext& ctx, const FormalMatrix& a, const FormalMatrix& b) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::Invalid, "matrix shapes " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                            " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()) +
                                            " do not compose");
    FormalMatrix c(a.row_labels(), b.col_labels());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            FormalExpr raw;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const auto& x = a(i, k);
                const auto& y = b(k, j);
                for (const auto& [wa, ca] : x.terms())
                    for (const auto& [wb, cb] : y.terms()) {
                        if (ctx.right(wa.back()) != ctx.left(wb.front())) continue;
                        Word w = wa;
                        w.insert(w.end(), wb.begin(), wb.end());
                        raw.add(w, ca * cb);
                    }
            }
            c(i, j) = normalize(ctx, raw);
        }
    return c;
}

inline FormalMatrix adjoint(const FormalMatrix& m) {
    FormalMatrix t(m.col_labels(), m.row_labels());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = adjoint(m(i, j));
    return t;
}

// diag(v_1, ..., v_n) with the given labels
inline FormalMatrix vertex_diagonal(const std::vector<std::string>& labels, const std::vector<std::size_t>& vertices) {
    FormalMatrix d(labels, labels);
    for (std::size_t i = 0; i < vertices.size(); ++i) d(i, i) = FormalExpr::term({{Letter::Kind::Vertex, vertices[i]}});
    return d;
}

// Row label (X, t) and column label (X, t, w, s) of the generator matrices.
struct RowLabel {
    std::size_t group; // column index of X in the incidence matrices
    std::size_t t;     // 1-based copy
};

struct ColumnLabel {
    std::size_t group;
    std::size_t t;
    std::size_t w;    // source vertex
    std::size_t s;    // 1-based position among the arrows of X from w
    std::size_t edge; // z_s
};

struct GeneratorMatrices {
    StarContext ctx;
    KernelElement x;
    std::vector<RowLabel> rows1, rows2;
    std::vector<ColumnLabel> cols1, cols2;
    FormalMatrix Z, T;
    std::vector<std::size_t> sigma1; // rows1 index -> rows2 index
    std::vector<std::size_t> sigma2; // cols1 index -> cols2 index
    FormalMatrix sigma_T;
    FormalMatrix U; // Z sigma(T)^*

    std::string row_name(const RowLabel& r) const {
        return "(" + ctx.index().column_labels[r.group] + "," + std::to_string(r.t) + ")";
    }

    std::string column_name(const ColumnLabel& c) const {
        return "(" + ctx.index().column_labels[c.group] + "," + std::to_string(c.t) + "," +
               ctx.graph().vertices[c.w] + "," + std::to_string(c.s) + ")";
    }
};

namespace detail {

inline void generator_labels(const GraphIndex& ix, const IntVector& n, std::vector<RowLabel>& rows,
                             std::vector<ColumnLabel>& cols) {
    for (std::size_t g = 0; g < n.size(); ++g)
        for (std::size_t t = 1; t <= n[g].get_ui(); ++t) rows.push_back({g, t});
    for (std::size_t g = 0; g < n.size(); ++g) {
        if (n[g] == 0) continue;
        const auto& edges = ix.column_edges(g);
        std::vector<std::size_t> sources;
        for (auto e : edges) sources.push_back(ix.src[e]);
        std::sort(sources.begin(), sources.end());
        sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
        for (std::size_t t = 1; t <= n[g].get_ui(); ++t)
            for (auto w : sources) {
                std::size_t s = 0;
                for (auto e : edges)
                    if (ix.src[e] == w) cols.push_back({g, t, w, ++s, e});
            }
    }
}

inline FormalMatrix generator_matrix(const GeneratorMatrices& gm, const std::vector<RowLabel>& rows,
                                     const std::vector<ColumnLabel>& cols) {
    std::vector<std::string> rl, cl;
    for (const auto& r : rows) rl.push_back(gm.row_name(r));
    for (const auto& c : cols) cl.push_back(gm.column_name(c));
    FormalMatrix m(rl, cl);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (rows[i].group == cols[j].group && rows[i].t == cols[j].t)
                m(i, j) = FormalExpr::term({{Letter::Kind::Edge, cols[j].edge}});
    return m;
}

// Pairs the items of `from` and `to` that share a key; order-preserving within a key,
// or shuffled with `rng` when given.
template <class A, class B, class KeyA, class KeyB>
std::vector<std::size_t> blockwise_bijection(const std::vector<A>& from, const std::vector<B>& to, KeyA key_a,
                                             KeyB key_b, std::mt19937_64* rng, const char* what) {
    std::map<std::size_t, std::vector<std::size_t>> targets;
    for (std::size_t j = 0; j < to.size(); ++j) targets[key_b(to[j])].push_back(j);
    if (rng)
        for (auto& [k, v] : targets) std::shuffle(v.begin(), v.end(), *rng);
    std::map<std::size_t, std::size_t> used;
    std::vector<std::size_t> out(from.size());
    for (std::size_t i = 0; i < from.size(); ++i) {
        const auto k = key_a(from[i]);
        auto& slot = used[k];
        auto it = targets.find(k);
        if (it == targets.end() || slot >= it->second.size())
            throw Error(ErrorKind::NotInKernel, std::string("no bijection of ") + what + " labels");
        out[i] = it->second[slot++];
    }
    if (from.size() != to.size()) throw Error(ErrorKind::NotInKernel, std::string("no bijection of ") + what + " labels");
    return out;
}

} // namespace detail

// sigma(T)_{r,c} = T_{sigma1(r), sigma2(c)}
inline FormalMatrix apply_sigma(const GeneratorMatrices& gm) {
    FormalMatrix st(gm.Z.row_labels(), gm.Z.col_labels());
    for (std::size_t i = 0; i < gm.rows1.size(); ++i)
        for (std::size_t j = 0; j < gm.cols1.size(); ++j) st(i, j) = gm.T(gm.sigma1[i], gm.sigma2[j]);
    return st;
}

// Recomputes sigma(T) and U after sigma1 or sigma2 changed.
inline void refresh(GeneratorMatrices& gm) {
    gm.sigma_T = apply_sigma(gm);
    gm.U = multiply(gm.ctx, gm.Z, adjoint(gm.sigma_T));
}

// Z, T, sigma(T) and U_x = Z sigma(T)^* for a nonzero kernel element of a bipartite graph.
// sigma1 and sigma2 are order-preserving per vertex unless a seed is given.
inline GeneratorMatrices build_generator_matrices(const SeparatedGraph& g, const KernelElement& x,
                                                  std::optional<std::uint64_t> seed = std::nullopt) {
    require_bipartite(g);
    require_in_kernel(g, x);
    if (x.is_zero()) throw Error(ErrorKind::Precondition, "the zero element has no generator");
    GeneratorMatrices gm{StarContext(g), x, {}, {}, {}, {}, {}, {}, {}, {}, {}, {}};
    const auto& ix = gm.ctx.index();
    IntVector pos(x.coeffs.size()), neg(x.coeffs.size());
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (x.coeffs[i] > 0) pos[i] = x.coeffs[i];
        else neg[i] = -x.coeffs[i];
    }
    detail::generator_labels(ix, pos, gm.rows1, gm.cols1);
    detail::generator_labels(ix, neg, gm.rows2, gm.cols2);
    gm.Z = detail::generator_matrix(gm, gm.rows1, gm.cols1);
    gm.T = detail::generator_matrix(gm, gm.rows2, gm.cols2);

    std::optional<std::mt19937_64> rng;
    if (seed) rng.emplace(*seed);
    auto range_of = [&](const RowLabel& r) { return ix.columns[r.group].vertex; };
    auto source_of = [](const ColumnLabel& c) { return c.w; };
    gm.sigma1 = detail::blockwise_bijection(gm.rows1, gm.rows2, range_of, range_of, rng ? &*rng : nullptr, "row");
    gm.sigma2 = detail::blockwise_bijection(gm.cols1, gm.cols2, source_of, source_of, rng ? &*rng : nullptr, "column");
    refresh(gm);
    return gm;
}

struct IdentityCheck {
    std::string name;
    bool holds = true;
    std::vector<std::string> mismatches; // "(row, col): got ..., expected ..."
    std::string error;                   // set when the product could not be formed
};

struct VerificationReport {
    std::vector<IdentityCheck> checks;
    LabeledVector zz_star_class;  // diagonal of ZZ^* in K_0(C(E^0))
    LabeledVector z_star_z_class; // diagonal of Z^*Z

    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.holds; });
    }

    // [Z^*Z] - [ZZ^*]
    LabeledVector boundary() const {
        LabeledVector d = z_star_z_class;
        for (std::size_t i = 0; i < d.coeffs.size(); ++i) d.coeffs[i] -= zz_star_class.coeffs[i];
        return d;
    }

    std::string to_string() const {
        std::string s;
        for (const auto& c : checks) {
            s += (c.holds ? "ok   " : "FAIL ") + c.name + "\n";
            if (!c.error.empty()) s += "     " + c.error + "\n";
            for (const auto& m : c.mismatches) s += "     " + m + "\n";
        }
        s += "[ZZ*] = " + zz_star_class.to_string() + "\n";
        s += "[Z*Z] = " + z_star_z_class.to_string() + "\n";
        return s;
    }
};

namespace detail {

inline IdentityCheck compare(const StarContext& ctx, std::string name, const std::function<FormalMatrix()>& compute,
                             const FormalMatrix& expected) {
    IdentityCheck c{std::move(name), true, {}, {}};
    FormalMatrix got;
    try {
        got = compute();
    } catch (const Error& e) {
        c.holds = false;
        c.error = e.what();
        return c;
    }
    if (got.rows() != expected.rows() || got.cols() != expected.cols()) {
        c.holds = false;
        c.error = "shape " + std::to_string(got.rows()) + "x" + std::to_string(got.cols()) + ", expected " +
                  std::to_string(expected.rows()) + "x" + std::to_string(expected.cols());
        return c;
    }
    for (std::size_t i = 0; i < got.rows(); ++i)
        for (std::size_t j = 0; j < got.cols(); ++j)
            if (!(got(i, j) == expected(i, j))) {
                c.holds = false;
                c.mismatches.push_back("(" + got.row_labels()[i] + ", " + got.col_labels()[j] +
                                       "): got " + to_string(ctx, got(i, j)) + ", expected " +
                                       to_string(ctx, expected(i, j)));
            }
    return c;
}

inline LabeledVector diagonal_class(const StarContext& ctx, const FormalMatrix& m) {
    LabeledVector v{ctx.graph().vertices, IntVector(ctx.graph().vertices.size())};
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i)
        if (auto vm = m(i, i).as_vertex_multiple()) v.coeffs[vm->first] += vm->second;
    return v;
}

} // namespace detail

// ZZ^* = TT^* = sigma(T)sigma(T)^* = UU^* = U^*U = diag(r(X)) and
// Z^*Z = T^*T = sigma(T)^*sigma(T) = diag(w), all by formal multiplication.
inline VerificationReport verify_partial_unitary(const GeneratorMatrices& gm) {
    const auto& ctx = gm.ctx;
    const auto& ix = ctx.index();
    auto range_diag = [&](const std::vector<RowLabel>& rows, const FormalMatrix& m) {
        std::vector<std::size_t> vs;
        for (const auto& r : rows) vs.push_back(ix.columns[r.group].vertex);
        return vertex_diagonal(m.row_labels(), vs);
    };
    auto source_diag = [&](const std::vector<ColumnLabel>& cols, const FormalMatrix& m) {
        std::vector<std::size_t> vs;
        for (const auto& c : cols) vs.push_back(c.w);
        return vertex_diagonal(m.col_labels(), vs);
    };
    const auto r1 = range_diag(gm.rows1, gm.Z);
    const auto r2 = range_diag(gm.rows2, gm.T);
    const auto c1 = source_diag(gm.cols1, gm.Z);
    const auto c2 = source_diag(gm.cols2, gm.T);

    VerificationReport rep;
    auto check = [&](const char* name, std::function<FormalMatrix()> f, const FormalMatrix& expected) {
        rep.checks.push_back(detail::compare(ctx, name, f, expected));
    };
    check("ZZ* = diag r(X)", [&] { return multiply(ctx, gm.Z, adjoint(gm.Z)); }, r1);
    check("TT* = diag r(X)", [&] { return multiply(ctx, gm.T, adjoint(gm.T)); }, r2);
    check("σ(T)σ(T)* = diag r(X)", [&] { return multiply(ctx, gm.sigma_T, adjoint(gm.sigma_T)); }, r1);
    check("Z*Z = diag s", [&] { return multiply(ctx, adjoint(gm.Z), gm.Z); }, c1);
    check("T*T = diag s", [&] { return multiply(ctx, adjoint(gm.T), gm.T); }, c2);
    check("σ(T)*σ(T) = diag s", [&] { return multiply(ctx, adjoint(gm.sigma_T), gm.sigma_T); }, c1);
    check("UU* = diag r(X)", [&] { return multiply(ctx, gm.U, adjoint(gm.U)); }, r1);
    check("U*U = diag r(X)", [&] { return multiply(ctx, adjoint(gm.U), gm.U); }, r1);

    rep.zz_star_class = detail::diagonal_class(ctx, multiply(ctx, gm.Z, adjoint(gm.Z)));
    rep.z_star_z_class = detail::diagonal_class(ctx, multiply(ctx, adjoint(gm.Z), gm.Z));
    return rep;
}

} // namespace sepk
