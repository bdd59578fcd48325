#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <didq/error.hpp>
#include <didq/typicality.hpp>

#include "support.hpp"

using namespace didq;

TEST(Constants, KAndEta)
{
    EXPECT_NEAR(k_constant(2), 2.51210, 1e-5);
    EXPECT_NEAR(k_constant(3), std::pow(std::log2(3.0), 2), 1e-15);
    EXPECT_NEAR(k_constant(8), 9.0, 1e-12);
    EXPECT_NEAR(typicality_eta(2.0, 2), 2.0 * std::exp2(-4.0 / (36.0 * std::pow(std::log2(3.0), 2))), 1e-15);
}

// diag(3/4, 1/4)^{x4} at delta = 0.2: the window is S +- 0.4 around
// S = 4 h(1/4), which only the words with exactly one small eigenvalue reach.
TEST(TypicalProjector, BruteForceFixture)
{
    const ProductState w(std::vector<ComplexMatrix>(4, test::diag2(0.75)));
    const TypicalProjector pi = typical_projector(w, 0.2);

    const double s = w.entropy();
    std::vector<std::uint64_t> expected;
    double mass = 0.0;
    for (std::uint64_t m = 0; m < 16; ++m) {
        double surprisal = 0.0, prob = 1.0;
        for (int i = 0; i < 4; ++i) {
            const bool small = (m >> (3 - i)) & 1u;
            const double p = small ? 0.25 : 0.75;
            surprisal -= std::log2(p);
            prob *= p;
        }
        if (std::abs(surprisal - s) <= 0.2 * 2.0 + 1e-12) {
            expected.push_back(m);
            mass += prob;
        }
    }
    // eigenvalues of diag(0.75, 0.25) sort ascending: index 0 is 0.25
    std::vector<std::uint64_t> got(pi.members().begin(), pi.members().end());
    std::vector<std::uint64_t> remapped;
    for (std::uint64_t m : expected) remapped.push_back(m ^ 0xFu);
    std::sort(remapped.begin(), remapped.end());
    EXPECT_EQ(got, remapped);
    EXPECT_EQ(pi.rank(), 4u);
    EXPECT_NEAR(typ_mass(pi), 4 * 0.75 * 0.75 * 0.75 * 0.25, 1e-15);
    EXPECT_NEAR(typ_mass(pi), mass, 1e-15);
}

TEST(TypicalProjector, EigenvaluesInsideWindow)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ComplexMatrix> letters;
        for (int i = 0; i < 5; ++i) letters.push_back(test::random_state(2, rng));
        const ProductState w(letters);
        const double delta = 0.5 + trial % 3 * 0.5;
        const TypicalProjector pi = typical_projector(w, delta);
        const double width = delta * std::sqrt(5.0);
        for (std::uint64_t m : pi.members()) {
            const double l = pi.log2_eigenvalue(m);
            EXPECT_GE(l, -w.entropy() - width - 1e-12);
            EXPECT_LE(l, -w.entropy() + width + 1e-12);
        }
    }
}

TEST(TypicalProjector, MaterializedProjectorProperties)
{
    std::mt19937_64 rng(4);
    std::vector<ComplexMatrix> letters;
    for (int i = 0; i < 4; ++i) letters.push_back(test::random_state(2, rng));
    const ProductState w(letters);
    const TypicalProjector pi = typical_projector(w, 1.0);
    const ComplexMatrix p = projector_matrix(pi);
    const ComplexMatrix full = w.materialize();
    EXPECT_LT(max_abs_diff(p * p, p), 1e-12);
    EXPECT_LT(max_abs_diff(p * full, full * p), 1e-12);
    EXPECT_NEAR(trace(p).real(), static_cast<double>(pi.rank()), 1e-10);
    EXPECT_NEAR(trace_product(full, p).real(), typ_mass(pi), 1e-12);
    EXPECT_LT(max_abs_diff(truncated_state(pi), p * full * p), 1e-12);
    EXPECT_GE(min_eig(full - truncated_state(pi)), -1e-10);
}

TEST(CrossMass, MatchesMaterializedTrace)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ComplexMatrix> a, b;
        for (int i = 0; i < 4; ++i) {
            a.push_back(test::random_state(2, rng));
            b.push_back(test::random_state(2, rng));
        }
        const ProductState wa(a), wb(b);
        const TypicalProjector pi = typical_projector(wa, 0.2 + 0.18 * trial);
        EXPECT_NEAR(cross_mass(pi, wb), trace_product(wb.materialize(), projector_matrix(pi)).real(), 1e-12);
    }
}

TEST(CrossMass, DegenerateBasisRotationInvariance)
{
    std::mt19937_64 rng(6);
    const ComplexMatrix flat = test::diag2(0.5);
    HermitianEig rotated;
    rotated.values = {0.5, 0.5};
    const double c = std::cos(0.3), s = std::sin(0.3);
    rotated.basis = ComplexMatrix{{c, -s}, {s, c}};

    const std::vector<ComplexMatrix> letters{flat, test::diag2(0.8), flat};
    const ProductState standard(letters);
    const ProductState turned(letters, {rotated, herm_eig(letters[1]), rotated});
    std::vector<ComplexMatrix> other;
    for (int i = 0; i < 3; ++i) other.push_back(test::random_state(2, rng));
    const ProductState w(other);
    for (double delta : {0.3, 0.7, 1.5}) {
        EXPECT_NEAR(cross_mass(typical_projector(standard, delta), w), cross_mass(typical_projector(turned, delta), w),
                    1e-12);
    }
}

TEST(TypicalProjector, FlatSpectrumFullWindow)
{
    for (std::size_t n : {2u, 4u, 6u}) {
        const ProductState w(std::vector<ComplexMatrix>(n, test::diag2(0.5)));
        const TypicalProjector pi = typical_projector(w, std::sqrt(static_cast<double>(n)));
        EXPECT_EQ(typ_mass(pi), 1.0);
        EXPECT_EQ(pi.rank(), std::size_t{1} << n);
    }
}

TEST(TypicalProjector, PureWordIsRankOne)
{
    std::mt19937_64 rng(7);
    std::vector<ComplexMatrix> letters;
    for (int i = 0; i < 3; ++i) letters.push_back(test::random_pure(2, rng));
    const ProductState w(letters);
    const TypicalProjector pi = typical_projector(w, 0.5);
    EXPECT_EQ(pi.rank(), 1u);
    EXPECT_NEAR(typ_mass(pi), 1.0, 1e-12);
}

TEST(TypicalProjector, Validation)
{
    const ProductState w(std::vector<ComplexMatrix>(4, test::diag2(0.3)));
    EXPECT_THROW(typical_projector(w, 0.0), ValidationError);
    EXPECT_THROW(typical_projector(w, 2.0 + 1e-6), ValidationError);
    EXPECT_NO_THROW(typical_projector(w, 2.0));
    EXPECT_THROW(typical_projector(w, 1.0, 8), CapExceeded);
    const ProductState shorter(std::vector<ComplexMatrix>(3, test::diag2(0.3)));
    EXPECT_THROW(cross_mass(typical_projector(w, 1.0), shorter), ValidationError);
}
