#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <didq/error.hpp>
#include <didq/linalg.hpp>

#include "support.hpp"

using namespace didq;

namespace {

// Eigenvalues of a Hermitian 3x3 matrix from its characteristic polynomial,
// solved with the trigonometric form of the cubic.
std::vector<double> cubic_eigenvalues(const ComplexMatrix& a)
{
    const double c2 = trace(a).real();
    const double c1 = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                       a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                          .real();
    const double c0 = (a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                       a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                       a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
                          .real();
    const double shift = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c1 * c2 / 3.0 - c0;
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    std::vector<double> out;
    for (int k = 0; k < 3; ++k) out.push_back(shift + m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0));
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

TEST(HermEig, ReconstructsRandomMatrices)
{
    std::mt19937_64 rng(1);
    for (std::size_t d : {1u, 2u, 3u, 5u, 8u, 16u}) {
        const ComplexMatrix h = test::random_hermitian(d, rng);
        const HermitianEig e = herm_eig(h);
        EXPECT_LT(max_abs_diff(reconstruct(e), h), 1e-12 * std::max(1.0, hs_norm(h)));
        EXPECT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
        const ComplexMatrix gram = e.basis.adjoint() * e.basis;
        EXPECT_LT(max_abs_diff(gram, ComplexMatrix::identity(d)), 1e-12);
    }
}

TEST(HermEig, EigenvectorPhaseConvention)
{
    std::mt19937_64 rng(2);
    const HermitianEig e = herm_eig(test::random_hermitian(4, rng));
    for (std::size_t j = 0; j < e.dim(); ++j) {
        const auto v = e.vector(j);
        const auto first = std::find_if(v.begin(), v.end(), [](Complex x) { return std::abs(x) > 1e-10; });
        ASSERT_NE(first, v.end());
        EXPECT_GT(first->real(), 0.0);
        EXPECT_NEAR(first->imag(), 0.0, 1e-15);
    }
}

TEST(HermEig, PauliSpectrum)
{
    const ComplexMatrix y{{0.0, Complex(0, -1)}, {Complex(0, 1), 0.0}};
    const HermitianEig e = herm_eig(y);
    EXPECT_NEAR(e.values[0], -1.0, 1e-14);
    EXPECT_NEAR(e.values[1], 1.0, 1e-14);
}

TEST(HermEig, MatchesCharacteristicPolynomialIn3D)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix h = test::random_hermitian(3, rng);
        const auto expected = cubic_eigenvalues(h);
        const HermitianEig e = herm_eig(h);
        for (int k = 0; k < 3; ++k) EXPECT_NEAR(e.values[k], expected[k], 1e-9);
    }
}

TEST(HermEig, RejectsBadInput)
{
    EXPECT_THROW(herm_eig(ComplexMatrix()), ValidationError);
    const ComplexMatrix skew{{0.0, 1.0}, {0.0, 0.0}};
    EXPECT_THROW(herm_eig(skew), ValidationError);
    ComplexMatrix bad = ComplexMatrix::identity(2);
    bad(0, 0) = std::nan("");
    EXPECT_THROW(herm_eig(bad), ValidationError);
}

TEST(TraceNorm, TwoByTwoClosedForm)
{
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = test::random_hermitian(2, rng);
        const double a = h(0, 0).real(), b = h(1, 1).real();
        const double disc = std::sqrt((a - b) * (a - b) + 4.0 * std::norm(h(0, 1)));
        const double l1 = 0.5 * (a + b - disc), l2 = 0.5 * (a + b + disc);
        EXPECT_NEAR(trace_norm(h), std::abs(l1) + std::abs(l2), 1e-12);
    }
}

TEST(TraceNorm, ThreeByThreeCharacteristicPolynomial)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexMatrix h = test::random_hermitian(3, rng);
        double expected = 0.0;
        for (double l : cubic_eigenvalues(h)) expected += std::abs(l);
        EXPECT_NEAR(trace_norm(h), expected, 1e-9);
    }
}

TEST(MatSqrt, SquaresBack)
{
    std::mt19937_64 rng(6);
    for (std::size_t d : {2u, 3u, 4u}) {
        const ComplexMatrix p = test::random_state(d, rng);
        const ComplexMatrix s = mat_sqrt(p);
        EXPECT_LT(max_abs_diff(s * s, p), 1e-12);
        EXPECT_GE(min_eig(s), -1e-12);
        EXPECT_LT(hermiticity_defect(s), 1e-14);
    }
}

TEST(MatSqrt, RankOneIsItself)
{
    std::mt19937_64 rng(7);
    const ComplexMatrix psi = test::random_pure(3, rng);
    EXPECT_LT(max_abs_diff(mat_sqrt(psi), psi), 1e-7);
}

TEST(MatSqrt, ClampsRoundoffAndRejectsNegative)
{
    const double tiny[2] = {-1e-9, 1.0};
    const ComplexMatrix s = mat_sqrt(ComplexMatrix::diagonal(tiny));
    EXPECT_EQ(s(0, 0), Complex(0.0));
    const double neg[2] = {-1e-6, 1.0};
    EXPECT_THROW(mat_sqrt(ComplexMatrix::diagonal(neg)), ValidationError);
}

TEST(Kron, EntriesAndCap)
{
    const ComplexMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    const ComplexMatrix b{{0.0, 1.0}, {1.0, 0.0}};
    const ComplexMatrix k = kron(a, b);
    ASSERT_EQ(k.dim(), 4u);
    EXPECT_EQ(k(0, 1), Complex(1.0));
    EXPECT_EQ(k(1, 2), Complex(2.0));
    EXPECT_EQ(k(3, 2), Complex(4.0));
    EXPECT_EQ(k(2, 2), Complex(0.0));
    EXPECT_THROW(kron(a, b, 3), CapExceeded);
    const std::vector<ComplexMatrix> three{a, b, a};
    EXPECT_EQ(kron_all(three).dim(), 8u);
    EXPECT_THROW(kron_all(three, 4), CapExceeded);
}

TEST(Trace, ProductAndExpectation)
{
    std::mt19937_64 rng(8);
    const ComplexMatrix a = test::random_hermitian(3, rng);
    const ComplexMatrix b = test::random_hermitian(3, rng);
    EXPECT_NEAR(std::abs(trace_product(a, b) - trace(a * b)), 0.0, 1e-12);
    const std::vector<Complex> e0{1.0, 0.0, 0.0};
    EXPECT_NEAR(std::abs(expectation(a, e0) - a(0, 0)), 0.0, 1e-15);
}

TEST(Norms, HilbertSchmidtAndMinEig)
{
    const double v[3] = {-2.0, 0.5, 1.0};
    const ComplexMatrix d = ComplexMatrix::diagonal(v);
    EXPECT_NEAR(hs_norm(d), std::sqrt(4.0 + 0.25 + 1.0), 1e-15);
    EXPECT_NEAR(trace_norm(d), 3.5, 1e-14);
    EXPECT_NEAR(min_eig(d), -2.0, 1e-14);
}
