#include <gtest/gtest.h>

#include <random>

#include "sepk/graph.hpp"
#include "sepk/int_matrix.hpp"
#include "sepk/ktheory.hpp"

using namespace sepk;

namespace {

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int lo, int hi) {
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
    return m;
}

// cofactor expansion, independent of the Bareiss code path
Integer cofactor_det(const IntMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 0) return 1;
    if (n == 1) return m(0, 0);
    Integer total = 0;
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = m(i, k);
        const Integer term = m(0, j) * cofactor_det(minor);
        total += (j % 2 == 0) ? term : Integer(-term);
    }
    return total;
}

void expect_valid_smith(const IntMatrix& m, const SmithForm& s) {
    EXPECT_EQ(s.U * m * s.V, s.D);
    EXPECT_EQ(s.V * s.V_inverse, IntMatrix::identity(m.cols()));
    const Integer du = determinant(s.U), dv = determinant(s.V);
    EXPECT_TRUE(du == 1 || du == -1);
    EXPECT_TRUE(dv == 1 || dv == -1);
    for (std::size_t i = 0; i < s.D.rows(); ++i)
        for (std::size_t j = 0; j < s.D.cols(); ++j)
            if (i != j) {
                EXPECT_EQ(s.D(i, j), 0);
            }
    const auto diag = s.diagonal();
    for (std::size_t i = 0; i < diag.size(); ++i) {
        EXPECT_GE(diag[i], 0);
        if (i + 1 == diag.size()) continue;
        if (diag[i] != 0) {
            EXPECT_EQ(diag[i + 1] % diag[i], 0);
        } else {
            EXPECT_EQ(diag[i + 1], 0);
        }
    }
}

} // namespace

TEST(Smith, SpecExamples) {
    IntMatrix a{{1, 1}, {-3, -2}};
    auto sa = smith_normal_form(a);
    expect_valid_smith(a, sa);
    EXPECT_EQ(sa.diagonal(), (IntVector{1, 1}));

    IntMatrix b{{1, 1}, {-3, -3}};
    auto sb = smith_normal_form(b);
    expect_valid_smith(b, sb);
    EXPECT_EQ(sb.diagonal(), (IntVector{1, 0}));

    IntMatrix z(2, 3);
    auto sz = smith_normal_form(z);
    EXPECT_EQ(sz.D, z);
    EXPECT_EQ(sz.U, IntMatrix::identity(2));
    EXPECT_EQ(sz.V, IntMatrix::identity(3));
}

TEST(Smith, RandomMatricesSatisfyContract) {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<int> dim(1, 5);
        auto m = random_matrix(rng, dim(rng), dim(rng), -6, 6);
        expect_valid_smith(m, smith_normal_form(m));
    }
}

TEST(Smith, LargeEntriesStayExact) {
    IntMatrix m{{0, 2}, {0, 4}};
    m(0, 0) = Integer("123456789012345678901");
    m(1, 0) = Integer("98765432109876543210");
    auto s = smith_normal_form(m);
    expect_valid_smith(m, s);
    EXPECT_EQ(s.diagonal()[0] * s.diagonal()[1], abs(determinant(m)));
}

TEST(Determinant, AgreesWithCofactorExpansion) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = std::uniform_int_distribution<int>(1, 5)(rng);
        auto m = random_matrix(rng, n, n, -5, 5);
        EXPECT_EQ(determinant(m), cofactor_det(m));
    }
}

TEST(Cokernel, SpecExamples) {
    EXPECT_TRUE(cokernel_invariants(incidence(make_emn(2, 3)).difference()).trivial());
    EXPECT_EQ(cokernel_invariants(incidence(make_emn(3, 3)).difference()), (AbelianGroupInvariants{1, {}}));
    auto two = cokernel_invariants(IntMatrix{{2}});
    EXPECT_EQ(two.rank, 0u);
    EXPECT_EQ(two.factors, (IntVector{2}));
    EXPECT_EQ(two.to_string(), "Z/2");
}

TEST(Cokernel, OrderEqualsDeterminant) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = std::uniform_int_distribution<int>(1, 4)(rng);
        auto m = random_matrix(rng, n, n, -4, 4);
        const auto inv = cokernel_invariants(m);
        const Integer det = determinant(m);
        if (det == 0) {
            EXPECT_GE(inv.rank, 1u);
        } else {
            EXPECT_EQ(inv.rank, 0u);
            Integer order = 1;
            for (const auto& f : inv.factors) order *= f;
            EXPECT_EQ(order, abs(det));
        }
        EXPECT_TRUE(divisibility_chain_holds(inv));
    }
}

TEST(Invariants, Printing) {
    EXPECT_EQ((AbelianGroupInvariants{0, {}}).to_string(), "0");
    EXPECT_EQ((AbelianGroupInvariants{1, {}}).to_string(), "Z");
    EXPECT_EQ((AbelianGroupInvariants{3, {}}).to_string(), "Z^3");
    EXPECT_EQ((AbelianGroupInvariants{1, {2, 6}}).to_string(), "Z ⊕ Z/2 ⊕ Z/6");
}

TEST(Kernel, SpecExamples) {
    auto k33 = kernel_basis(incidence(make_emn(3, 3)).difference());
    ASSERT_EQ(k33.size(), 1u);
    EXPECT_EQ(k33[0], (IntVector{1, -1}));
    EXPECT_TRUE(kernel_basis(incidence(make_emn(2, 3)).difference()).empty());
    EXPECT_TRUE(kernel_basis(IntMatrix::identity(4)).empty());
}

TEST(Kernel, BasisIsSaturatedAndAnnihilated) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<int> dim(1, 5);
        auto m = random_matrix(rng, dim(rng), dim(rng), -3, 3);
        auto basis = kernel_basis(m);
        EXPECT_EQ(basis.size(), m.cols() - rank(m));
        for (const auto& b : basis)
            for (const auto& x : m.apply(b)) EXPECT_EQ(x, 0);
        if (basis.empty()) continue;
        // saturated: the basis matrix has a unimodular completion, i.e. SNF diagonal all ones
        IntMatrix b(basis.size(), m.cols());
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) b(i, j) = basis[i][j];
        for (const auto& d : smith_normal_form(b).diagonal()) EXPECT_EQ(d, 1);
    }
}

TEST(Hermite, Canonical) {
    auto h = hermite_normal_form({{2, 4, 6}, {1, 2, 4}}, 3);
    ASSERT_EQ(h.size(), 2u);
    // pivots positive, entries above a pivot reduced
    EXPECT_EQ(h[0], (IntVector{1, 2, 0}));
    EXPECT_EQ(h[1], (IntVector{0, 0, 2}));
    EXPECT_TRUE(lattice_contains(h, {3, 6, 10}));
    EXPECT_FALSE(lattice_contains(h, {0, 0, 1}));
    EXPECT_FALSE(lattice_contains(h, {0, 1, 0}));
}

TEST(Hermite, InvariantUnderRowOperations) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 100; ++t) {
        auto m = random_matrix(rng, 3, 4, -4, 4);
        std::vector<IntVector> rows, mixed;
        for (std::size_t i = 0; i < 3; ++i) rows.push_back(m.row(i));
        mixed = rows;
        for (std::size_t j = 0; j < 4; ++j) mixed[0][j] += 3 * mixed[2][j];
        std::swap(mixed[1], mixed[2]);
        for (auto& x : mixed[1]) x = -x;
        EXPECT_EQ(hermite_normal_form(rows, 4), hermite_normal_form(mixed, 4));
    }
}

TEST(IntMatrix, LabelsAndPrinting) {
    IntMatrix m({"v", "w"}, {"X", "Y"});
    m(0, 0) = 1;
    m(1, 1) = -12;
    const auto s = m.to_string();
    EXPECT_NE(s.find("X"), std::string::npos);
    EXPECT_NE(s.find("-12"), std::string::npos);
    EXPECT_THROW(IntMatrix({"a", "a"}, {"b"}), Error);
}
