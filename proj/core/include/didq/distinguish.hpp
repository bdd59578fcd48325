#pragma once

// Two-state discrimination: trace distance, the Helstrom test, the
// square-root Hilbert-Schmidt metric, and the hypothesis-testing bound for
// typical projectors.

#include <cstddef>

#include "didq/channel.hpp"
#include "didq/linalg.hpp"
#include "didq/typicality.hpp"

namespace didq {

/// Eigenvalues of rho - sigma in [-kHelstromKernelTol, 0] count as
/// nonnegative when building the Helstrom projector.
inline constexpr double kHelstromKernelTol = 1e-12;

/// Trace distance at or above 1 - kUnitDistanceTol is treated as exactly 1.
inline constexpr double kUnitDistanceTol = 1e-14;

struct HelstromTest {
    /// Projector onto the nonnegative eigenspace of rho - sigma.
    ComplexMatrix projector;
    /// 1 - (1/2)||rho - sigma||_1
    double epsilon = 0.0;
    /// Tr rho (1 - S)
    double alpha_err = 0.0;
    /// Tr sigma S
    double beta_err = 0.0;
};

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Trace distance of the materialized tensor products. Throws CapExceeded when
/// d^n > cap.
double product_trace_distance(const ProductState& a, const ProductState& b, std::size_t cap = kDefaultDimCap);

/// sqrt(1 - prod_i Tr(a_i b_i)), valid when every letter of both words is pure.
double pure_product_trace_distance(const ProductState& a, const ProductState& b);

HelstromTest helstrom(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// || sqrt(rho) - sqrt(sigma) ||_2
double sqrt_hs_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma);

/// Both sides of -ln(1 - T) >= (1/4) sum_i ||sqrt(a_i) - sqrt(b_i)||_2^2.
/// Natural logarithm on the left, as the inequality is stated; lhs is
/// +infinity when T = 1.
struct EuclidSum {
    double lhs = 0.0;
    double rhs = 0.0;
    double trace_distance = 0.0;

    bool holds(double slack = 1e-9) const noexcept { return lhs >= rhs - slack; }
};

/// (1/4) sum_i ||sqrt(a_i) - sqrt(b_i)||_2^2 only; needs no materialization.
double letterwise_sqrt_sum(const ProductState& a, const ProductState& b);

EuclidSum euclid_sum_check(const ProductState& a, const ProductState& b, std::size_t cap = kDefaultDimCap);

/// Minimum eigenvalue of 2 S Pi S + 2 (1-S) Pi (1-S) - Pi.
double pinching_check(const ComplexMatrix& pi, const ComplexMatrix& s);

/// eta + 2 eps (1 + 2^{2 delta sqrt(n) + S_x - S_xp}),
/// eta = 2 * 2^{-delta^2 / (36 K(d))}. Throws ValidationError for eps outside
/// [0, 1] or delta <= 0.
double lemma2_rhs(double epsilon, double delta, std::size_t n, double entropy_x, double entropy_xp, std::size_t d);

} // namespace didq
