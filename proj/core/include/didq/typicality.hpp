#pragma once

// Entropy-typical projectors of product states.
//
// The projector of W = W_1 (x) ... (x) W_n at width delta spans the product
// eigenvectors e_{k_1} (x) ... (x) e_{k_n} whose surprisal
// -sum_i log2 lambda_{k_i}(W_i) lies in [S - delta sqrt(n), S + delta sqrt(n)],
// S the von Neumann entropy of W. It is kept implicit as the list of typical
// multi-indices; nothing of size d^n x d^n is formed unless asked for.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "didq/channel.hpp"
#include "didq/linalg.hpp"

namespace didq {

inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;
/// Eigenvalues below this are exact zeros (infinite surprisal, never typical).
inline constexpr double kZeroEigenvalue = 1e-15;
/// Symmetric slack on the closed typicality window.
inline constexpr double kWindowSlack = 1e-12;

/// K(d) = (log2 max{d, 3})^2
double k_constant(std::size_t d);
/// eta = 2 * 2^{-delta^2 / (36 K(d))}, the typicality deficit bound.
double typicality_eta(double delta, std::size_t d);

class TypicalProjector {
public:
    const ProductState& word() const noexcept { return word_; }
    double delta() const noexcept { return delta_; }
    double entropy() const noexcept { return word_.entropy(); }
    double window_lo() const noexcept { return window_lo_; }
    double window_hi() const noexcept { return window_hi_; }

    /// Typical multi-indices as mixed-radix integers (letter 0 most
    /// significant), ascending.
    std::span<const std::uint64_t> members() const noexcept { return members_; }
    std::size_t rank() const noexcept { return members_.size(); }

    /// Multi-index (k_1, ..., k_n) of a member.
    std::vector<std::size_t> decode(std::uint64_t member) const;
    /// sum_i log2 lambda_{k_i}
    double log2_eigenvalue(std::uint64_t member) const;

private:
    friend TypicalProjector typical_projector(const ProductState&, double, std::size_t);

    explicit TypicalProjector(ProductState word) : word_(std::move(word)) {}

    ProductState word_;
    double delta_ = 0.0;
    double window_lo_ = 0.0;
    double window_hi_ = 0.0;
    std::vector<std::uint64_t> members_;
};

/// Exhaustive (pruned depth-first) enumeration. Throws ValidationError if
/// delta is outside (0, sqrt(n) log2 d] and CapExceeded if d^n > cap.
TypicalProjector typical_projector(const ProductState& state, double delta,
                                   std::size_t cap = kDefaultEnumerationCap);

/// Tr W Pi
double typ_mass(const TypicalProjector& pi);

/// Tr W' Pi from per-letter overlap tables <e_k| W'_i |e_k>. Throws
/// ValidationError on a length or dimension mismatch.
double cross_mass(const TypicalProjector& pi, const ProductState& other);

/// Pi as a d^n x d^n matrix.
ComplexMatrix projector_matrix(const TypicalProjector& pi, std::size_t cap = kDefaultDimCap);

/// Pi W Pi, materialized.
ComplexMatrix truncated_state(const TypicalProjector& pi, std::size_t cap = kDefaultDimCap);

} // namespace didq
