#include "didq/distinguish.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "didq/error.hpp"

namespace didq {

double trace_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma)
{
    if (rho.dim() != sigma.dim()) throw ValidationError("trace_distance: dimension mismatch");
    return std::clamp(0.5 * trace_norm(rho - sigma), 0.0, 1.0);
}

double product_trace_distance(const ProductState& a, const ProductState& b, std::size_t cap)
{
    if (a.length() != b.length() || a.letter_dim() != b.letter_dim())
        throw ValidationError("product_trace_distance: shape mismatch");
    return trace_distance(a.materialize(cap), b.materialize(cap));
}

double pure_product_trace_distance(const ProductState& a, const ProductState& b)
{
    if (a.length() != b.length() || a.letter_dim() != b.letter_dim())
        throw ValidationError("pure_product_trace_distance: shape mismatch");
    double fidelity = 1.0;
    for (std::size_t i = 0; i < a.length(); ++i)
        fidelity *= std::max(0.0, trace_product(a.letters()[i], b.letters()[i]).real());
    return std::sqrt(std::max(0.0, 1.0 - fidelity));
}

HelstromTest helstrom(const ComplexMatrix& rho, const ComplexMatrix& sigma)
{
    if (rho.dim() != sigma.dim()) throw ValidationError("helstrom: dimension mismatch");
    const std::size_t d = rho.dim();
    const HermitianEig eig = herm_eig(rho - sigma);

    HelstromTest out;
    out.projector = ComplexMatrix(d);
    double norm1 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        const double lam = eig.values[k];
        norm1 += std::abs(lam);
        if (lam < -kHelstromKernelTol) continue;
        const auto v = eig.vector(k);
        for (std::size_t r = 0; r < d; ++r)
            for (std::size_t c = 0; c < d; ++c) out.projector(r, c) += v[r] * std::conj(v[c]);
    }
    out.epsilon = std::clamp(1.0 - 0.5 * norm1, 0.0, 1.0);
    const ComplexMatrix complement = ComplexMatrix::identity(d) - out.projector;
    out.alpha_err = std::max(0.0, trace_product(rho, complement).real());
    out.beta_err = std::max(0.0, trace_product(sigma, out.projector).real());
    return out;
}

double sqrt_hs_distance(const ComplexMatrix& rho, const ComplexMatrix& sigma)
{
    if (rho.dim() != sigma.dim()) throw ValidationError("sqrt_hs_distance: dimension mismatch");
    return hs_norm(mat_sqrt(rho) - mat_sqrt(sigma));
}

double letterwise_sqrt_sum(const ProductState& a, const ProductState& b)
{
    if (a.length() != b.length() || a.letter_dim() != b.letter_dim())
        throw ValidationError("letterwise_sqrt_sum: shape mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.length(); ++i) {
        const double dist = sqrt_hs_distance(a.letters()[i], b.letters()[i]);
        s += dist * dist;
    }
    return 0.25 * s;
}

EuclidSum euclid_sum_check(const ProductState& a, const ProductState& b, std::size_t cap)
{
    EuclidSum out;
    out.rhs = letterwise_sqrt_sum(a, b);
    out.trace_distance = product_trace_distance(a, b, cap);
    if (out.trace_distance >= 1.0 - kUnitDistanceTol) {
        out.lhs = std::numeric_limits<double>::infinity();
    } else {
        out.lhs = -std::log1p(-out.trace_distance);
    }
    return out;
}

double pinching_check(const ComplexMatrix& pi, const ComplexMatrix& s)
{
    if (pi.dim() != s.dim()) throw ValidationError("pinching_check: dimension mismatch");
    const ComplexMatrix comp = ComplexMatrix::identity(s.dim()) - s;
    ComplexMatrix m = 2.0 * (s * pi * s) + 2.0 * (comp * pi * comp) - pi;
    return min_eig(m);
}

double lemma2_rhs(double epsilon, double delta, std::size_t n, double entropy_x, double entropy_xp, std::size_t d)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ValidationError("lemma2_rhs: epsilon must lie in [0, 1]");
    if (!(delta > 0.0)) throw ValidationError("lemma2_rhs: delta must be positive");
    const double eta = typicality_eta(delta, d);
    const double exponent = 2.0 * delta * std::sqrt(static_cast<double>(n)) + entropy_x - entropy_xp;
    return eta + 2.0 * epsilon * (1.0 + std::exp2(exponent));
}

} // namespace didq
