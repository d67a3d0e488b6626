#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "sepk/error.hpp"

namespace sepk {

using Integer = mpz_class;
using IntVector = std::vector<Integer>;

// Dense matrix of arbitrary-precision integers with labelled rows and columns.
// Right-aligned text grid; every row has the same number of cells.
inline std::string render_grid(const std::vector<std::vector<std::string>>& cells) {
    if (cells.empty()) return {};
    const std::size_t n = cells[0].size();
    std::vector<std::size_t> width(n, 0);
    for (const auto& r : cells)
        for (std::size_t j = 0; j < n; ++j) width[j] = std::max(width[j], r[j].size());
    std::ostringstream out;
    for (const auto& r : cells) {
        for (std::size_t j = 0; j < n; ++j) {
            if (j) out << "  ";
            out << std::string(width[j] - r[j].size(), ' ') << r[j];
        }
        out << "\n";
    }
    return out.str();
}

class IntMatrix {
public:
    IntMatrix() = default;

    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
        for (std::size_t i = 0; i < rows; ++i) row_labels_.push_back(std::to_string(i + 1));
        for (std::size_t j = 0; j < cols; ++j) col_labels_.push_back(std::to_string(j + 1));
    }

    IntMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels)
        : rows_(row_labels.size()), cols_(col_labels.size()), data_(rows_ * cols_),
          row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)) {
        check_labels(row_labels_);
        check_labels(col_labels_);
    }

    IntMatrix(std::initializer_list<std::initializer_list<long>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        *this = IntMatrix(rows_, cols_);
        std::size_t i = 0;
        for (const auto& r : rows) {
            if (r.size() != cols_) throw Error(ErrorKind::Invalid, "ragged matrix literal");
            std::size_t j = 0;
            for (long x : r) at(i, j++) = x;
            ++i;
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    Integer& operator()(std::size_t i, std::size_t j) { return at(i, j); }
    const Integer& operator()(std::size_t i, std::size_t j) const { return at(i, j); }

    const std::vector<std::string>& row_labels() const { return row_labels_; }
    const std::vector<std::string>& col_labels() const { return col_labels_; }

    void set_labels(std::vector<std::string> rows, std::vector<std::string> cols) {
        if (rows.size() != rows_ || cols.size() != cols_) throw Error(ErrorKind::Invalid, "label count mismatch");
        check_labels(rows);
        check_labels(cols);
        row_labels_ = std::move(rows);
        col_labels_ = std::move(cols);
    }

    IntVector row(std::size_t i) const { return IntVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

    IntVector column(std::size_t j) const {
        IntVector c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = at(i, j);
        return c;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
    }

    IntMatrix transpose() const {
        IntMatrix t(col_labels_, row_labels_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntVector apply(const IntVector& x) const {
        if (x.size() != cols_) throw Error(ErrorKind::Invalid, "dimension mismatch in matrix-vector product");
        IntVector y(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if (at(i, j) != 0 && x[j] != 0) y[i] += at(i, j) * x[j];
        return y;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.rows_) throw Error(ErrorKind::Invalid, "dimension mismatch in matrix product");
        IntMatrix c(a.row_labels_, b.col_labels_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& aik = a.at(i, k);
                if (aik == 0) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b.at(k, j) != 0) c.at(i, j) += aik * b.at(k, j);
            }
        return c;
    }

    friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::Invalid, "dimension mismatch");
        IntMatrix c = a;
        for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
        return c;
    }

    // entries only; labels are metadata
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    std::string to_string() const {
        std::vector<std::vector<std::string>> cells(rows_ + 1, std::vector<std::string>(cols_ + 1));
        for (std::size_t j = 0; j < cols_; ++j) cells[0][j + 1] = col_labels_[j];
        for (std::size_t i = 0; i < rows_; ++i) {
            cells[i + 1][0] = row_labels_[i];
            for (std::size_t j = 0; j < cols_; ++j) cells[i + 1][j + 1] = at(i, j).get_str();
        }
        return render_grid(cells);
    }

private:
    static void check_labels(const std::vector<std::string>& labels) {
        std::set<std::string> seen;
        for (const auto& l : labels)
            if (!seen.insert(l).second) throw Error(ErrorKind::DuplicateId, "matrix label '" + l + "'");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> data_;
    std::vector<std::string> row_labels_, col_labels_;
};

// Z^rank ⊕ Z/d1 ⊕ ... ⊕ Z/ds with d1 | d2 | ... | ds, every di >= 2.
struct AbelianGroupInvariants {
    std::size_t rank = 0;
    std::vector<Integer> factors;

    bool operator==(const AbelianGroupInvariants&) const = default;

    bool trivial() const { return rank == 0 && factors.empty(); }

    AbelianGroupInvariants plus_free(std::size_t r) const {
        auto out = *this;
        out.rank += r;
        return out;
    }

    std::string to_string() const {
        if (trivial()) return "0";
        std::vector<std::string> parts;
        if (rank == 1) parts.push_back("Z");
        else if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
        for (const auto& d : factors) parts.push_back("Z/" + d.get_str());
        std::string s;
        for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " ⊕ " : "") + parts[i];
        return s;
    }
};

inline bool divisibility_chain_holds(const AbelianGroupInvariants& g) {
    for (std::size_t i = 0; i < g.factors.size(); ++i) {
        if (g.factors[i] < 2) return false;
        if (i + 1 < g.factors.size() && g.factors[i + 1] % g.factors[i] != 0) return false;
    }
    return true;
}

struct SmithForm {
    IntMatrix U, D, V; // U * M * V == D
    IntMatrix V_inverse;
    std::size_t rank = 0;

    std::vector<Integer> diagonal() const {
        std::vector<Integer> d;
        for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
        return d;
    }
};

namespace detail {

// In-place Smith reduction tracking the unimodular transforms.
class SmithWorker {
public:
    SmithWorker(const IntMatrix& m, bool track)
        : m_(m.rows()), n_(m.cols()), track_(track), a_(m) {
        if (track_) {
            u_ = IntMatrix::identity(m_);
            v_ = IntMatrix::identity(n_);
            vi_ = IntMatrix::identity(n_);
        }
    }

    SmithForm run() {
        std::size_t t = 0;
        const std::size_t lim = std::min(m_, n_);
        for (; t < lim; ++t) {
            if (!reduce_at(t)) break;
            if (a_(t, t) < 0) negate_row(t);
        }
        SmithForm out;
        out.rank = t;
        out.D = a_;
        if (track_) {
            out.U = std::move(u_);
            out.V = std::move(v_);
            out.V_inverse = std::move(vi_);
        }
        return out;
    }

private:
    bool find_pivot(std::size_t t, std::size_t& pi, std::size_t& pj) const {
        bool found = false;
        Integer best;
        for (std::size_t i = t; i < m_; ++i)
            for (std::size_t j = t; j < n_; ++j) {
                const Integer& x = a_(i, j);
                if (x == 0) continue;
                if (!found || mpz_cmpabs(x.get_mpz_t(), best.get_mpz_t()) < 0) {
                    best = x;
                    pi = i;
                    pj = j;
                    found = true;
                    if (best == 1 || best == -1) return true;
                }
            }
        return found;
    }

    bool reduce_at(std::size_t t) {
        for (;;) {
            std::size_t pi = 0, pj = 0;
            if (!find_pivot(t, pi, pj)) return false;
            if (pi != t) swap_rows(pi, t);
            if (pj != t) swap_cols(pj, t);
            bool clean = true;
            for (std::size_t i = t + 1; i < m_; ++i) {
                if (a_(i, t) == 0) continue;
                Integer q = a_(i, t) / a_(t, t);
                if (q != 0) add_row(i, t, q);
                if (a_(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n_; ++j) {
                if (a_(t, j) == 0) continue;
                Integer q = a_(t, j) / a_(t, t);
                if (q != 0) add_col(j, t, q);
                if (a_(t, j) != 0) clean = false;
            }
            if (!clean) continue;
            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < m_ && !bad; ++i)
                for (std::size_t j = t + 1; j < n_; ++j)
                    if (a_(i, j) % a_(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (!bad) return true;
            add_row(t, *bad, -1);
        }
    }

    void swap_rows(std::size_t i, std::size_t j) {
        for (std::size_t c = 0; c < n_; ++c) std::swap(a_(i, c), a_(j, c));
        if (track_)
            for (std::size_t c = 0; c < m_; ++c) std::swap(u_(i, c), u_(j, c));
    }

    void swap_cols(std::size_t i, std::size_t j) {
        for (std::size_t r = 0; r < m_; ++r) std::swap(a_(r, i), a_(r, j));
        if (track_) {
            for (std::size_t r = 0; r < n_; ++r) std::swap(v_(r, i), v_(r, j));
            for (std::size_t c = 0; c < n_; ++c) std::swap(vi_(i, c), vi_(j, c));
        }
    }

    // row dst -= q * row src
    void add_row(std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t c = 0; c < n_; ++c)
            if (a_(src, c) != 0) a_(dst, c) -= q * a_(src, c);
        if (track_)
            for (std::size_t c = 0; c < m_; ++c)
                if (u_(src, c) != 0) u_(dst, c) -= q * u_(src, c);
    }

    // col dst -= q * col src; the inverse transform adds q * row dst to row src
    void add_col(std::size_t dst, std::size_t src, const Integer& q) {
        for (std::size_t r = 0; r < m_; ++r)
            if (a_(r, src) != 0) a_(r, dst) -= q * a_(r, src);
        if (track_) {
            for (std::size_t r = 0; r < n_; ++r)
                if (v_(r, src) != 0) v_(r, dst) -= q * v_(r, src);
            for (std::size_t c = 0; c < n_; ++c)
                if (vi_(dst, c) != 0) vi_(src, c) += q * vi_(dst, c);
        }
    }

    void negate_row(std::size_t i) {
        for (std::size_t c = 0; c < n_; ++c) a_(i, c) = -a_(i, c);
        if (track_)
            for (std::size_t c = 0; c < m_; ++c) u_(i, c) = -u_(i, c);
    }

    std::size_t m_, n_;
    bool track_;
    IntMatrix a_, u_, v_, vi_;
};

} // namespace detail

inline SmithForm smith_normal_form(const IntMatrix& m) {
    auto out = detail::SmithWorker(m, true).run();
    out.D.set_labels(m.row_labels(), m.col_labels());
    return out;
}

inline AbelianGroupInvariants cokernel_invariants(const IntMatrix& m) {
    auto snf = detail::SmithWorker(m, false).run();
    AbelianGroupInvariants g;
    g.rank = m.rows() - snf.rank;
    for (std::size_t i = 0; i < snf.rank; ++i)
        if (snf.D(i, i) > 1) g.factors.push_back(snf.D(i, i));
    return g;
}

// Fraction-free (Bareiss) determinant.
inline Integer determinant(const IntMatrix& m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::Invalid, "determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    IntMatrix a = m;
    Integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t c = 0; c < n; ++c) std::swap(a(k, c), a(p, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

// Row-style Hermite normal form: nonzero rows in echelon form with positive
// pivots, entries above each pivot reduced into [0, pivot). Zero rows dropped.
inline std::vector<IntVector> hermite_normal_form(std::vector<IntVector> rows, std::size_t n) {
    std::vector<IntVector> out;
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < rows.size(); ++c) {
        // gcd-combine every row >= r into row r at column c
        for (std::size_t i = r + 1; i < rows.size(); ++i) {
            if (rows[i][c] == 0) continue;
            if (rows[r][c] == 0) {
                std::swap(rows[r], rows[i]);
                continue;
            }
            Integer g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), rows[r][c].get_mpz_t(), rows[i][c].get_mpz_t());
            Integer a = rows[r][c] / g, b = rows[i][c] / g;
            for (std::size_t j = c; j < n; ++j) {
                Integer x = rows[r][j], y = rows[i][j];
                rows[r][j] = s * x + t * y;
                rows[i][j] = a * y - b * x;
            }
        }
        if (rows[r][c] == 0) continue;
        if (rows[r][c] < 0)
            for (std::size_t j = c; j < n; ++j) rows[r][j] = -rows[r][j];
        for (std::size_t i = 0; i < r; ++i) {
            Integer q;
            mpz_fdiv_q(q.get_mpz_t(), rows[i][c].get_mpz_t(), rows[r][c].get_mpz_t());
            if (q != 0)
                for (std::size_t j = c; j < n; ++j) rows[i][j] -= q * rows[r][j];
        }
        ++r;
    }
    rows.resize(r);
    return rows;
}

// Membership of v in the lattice spanned by rows already in Hermite form.
inline bool lattice_contains(const std::vector<IntVector>& hnf, IntVector v) {
    for (const auto& row : hnf) {
        std::size_t p = 0;
        while (p < row.size() && row[p] == 0) ++p;
        if (p == row.size()) continue;
        if (v[p] % row[p] != 0) return false;
        Integer q = v[p] / row[p];
        if (q != 0)
            for (std::size_t j = p; j < v.size(); ++j) v[j] -= q * row[j];
    }
    return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

namespace detail {

using SparseRow = std::vector<std::pair<std::size_t, Integer>>;

inline void make_primitive(SparseRow& row) {
    Integer g = 0;
    for (const auto& [c, x] : row) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) return;
    }
    if (g > 1)
        for (auto& [c, x] : row) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

// a * row - b * other, dropping zeros; both rows sorted by column.
inline SparseRow combine(const SparseRow& row, const Integer& a, const SparseRow& other, const Integer& b) {
    SparseRow out;
    out.reserve(row.size() + other.size());
    std::size_t i = 0, j = 0;
    while (i < row.size() || j < other.size()) {
        if (j == other.size() || (i < row.size() && row[i].first < other[j].first)) {
            out.emplace_back(row[i].first, a * row[i].second);
            ++i;
        } else if (i == row.size() || other[j].first < row[i].first) {
            out.emplace_back(other[j].first, -b * other[j].second);
            ++j;
        } else {
            Integer x = a * row[i].second - b * other[j].second;
            if (x != 0) out.emplace_back(row[i].first, std::move(x));
            ++i;
            ++j;
        }
    }
    return out;
}

// Sparse fraction-free echelon form; rows keyed by pivot column. The row space
// over Q, hence the integer kernel, is that of the input.
inline std::map<std::size_t, SparseRow> sparse_echelon(const IntMatrix& m) {
    std::set<SparseRow> distinct;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        SparseRow r;
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (m(i, j) != 0) r.emplace_back(j, m(i, j));
        if (r.empty()) continue;
        make_primitive(r);
        if (r.front().second < 0)
            for (auto& e : r) e.second = -e.second;
        distinct.insert(std::move(r));
    }
    std::vector<SparseRow> input(distinct.begin(), distinct.end());
    std::stable_sort(input.begin(), input.end(),
                     [](const SparseRow& a, const SparseRow& b) { return a.size() < b.size(); });
    std::map<std::size_t, SparseRow> pivots;
    for (auto& row : input) {
        while (!row.empty()) {
            auto it = pivots.find(row.front().first);
            if (it == pivots.end()) {
                pivots.emplace(row.front().first, std::move(row));
                break;
            }
            const auto& p = it->second;
            Integer g = gcd(p.front().second, row.front().second);
            Integer a = p.front().second / g, b = row.front().second / g;
            row = combine(row, a, p, b);
            make_primitive(row);
        }
    }
    return pivots;
}

} // namespace detail

// Rank over Q (equivalently over Z).
inline std::size_t rank(const IntMatrix& m) { return detail::sparse_echelon(m).size(); }

// Z-basis of {x : M x = 0} in Hermite normal form. The kernel over Z is the
// saturation of the kernel over Q, which is what is computed here.
inline std::vector<IntVector> kernel_basis(const IntMatrix& m) {
    const std::size_t n = m.cols();
    auto pivots = detail::sparse_echelon(m);

    // reduce to RREF-shape: each pivot row keeps its pivot and free columns only
    for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
        auto& row = it->second;
        for (;;) {
            bool changed = false;
            for (std::size_t k = 1; k < row.size(); ++k) {
                auto p = pivots.find(row[k].first);
                if (p == pivots.end()) continue;
                const auto& prow = p->second;
                Integer g = gcd(prow.front().second, row[k].second);
                Integer a = prow.front().second / g, b = row[k].second / g;
                row = detail::combine(row, a, prow, b);
                detail::make_primitive(row);
                changed = true;
                break;
            }
            if (!changed) break;
        }
    }

    std::vector<bool> is_pivot(n, false);
    for (const auto& [c, row] : pivots) is_pivot[c] = true;
    std::vector<IntVector> basis;
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        Integer scale = 1;
        for (const auto& [c, row] : pivots)
            for (const auto& [j, x] : row)
                if (j == f) {
                    Integer d = row.front().second / gcd(row.front().second, x);
                    scale = lcm(scale, d);
                }
        IntVector x(n);
        x[f] = scale;
        for (const auto& [c, row] : pivots)
            for (const auto& [j, e] : row)
                if (j == f) x[c] = -(scale * e) / row.front().second;
        basis.push_back(std::move(x));
    }
    if (basis.empty()) return {};

    // saturate: rows of V^{-1} from the Smith form span the same Q-space
    IntMatrix b(basis.size(), n);
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) b(i, j) = basis[i][j];
    auto snf = smith_normal_form(b);
    std::vector<IntVector> saturated;
    for (std::size_t i = 0; i < snf.rank; ++i) saturated.push_back(snf.V_inverse.row(i));
    return hermite_normal_form(std::move(saturated), n);
}

} // namespace sepk
