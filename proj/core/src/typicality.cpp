#include "didq/typicality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "didq/error.hpp"

namespace didq {

double k_constant(std::size_t d)
{
    const double l = std::log2(static_cast<double>(std::max<std::size_t>(d, 3)));
    return l * l;
}

double typicality_eta(double delta, std::size_t d)
{
    return 2.0 * std::exp2(-delta * delta / (36.0 * k_constant(d)));
}

namespace {

std::uint64_t checked_space_size(std::size_t d, std::size_t n, std::size_t cap)
{
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > cap / d)
            throw CapExceeded("typical_projector: enumeration size " + std::to_string(d) + "^" + std::to_string(n) +
                              " exceeds cap " + std::to_string(cap));
        total *= d;
    }
    return total;
}

struct Enumerator {
    std::size_t n;
    std::size_t d;
    double lo;
    double hi;
    // surprisal[i][k], +inf for zero eigenvalues
    std::vector<std::vector<double>> surprisal;
    std::vector<double> min_rest;
    std::vector<double> max_rest;
    std::vector<std::uint64_t>* out;

    void run(std::size_t i, double partial, std::uint64_t index)
    {
        if (partial + min_rest[i] > hi || partial + max_rest[i] < lo) return;
        if (i == n) {
            out->push_back(index);
            return;
        }
        for (std::size_t k = 0; k < d; ++k) {
            const double s = surprisal[i][k];
            if (!std::isfinite(s)) continue;
            run(i + 1, partial + s, index * d + k);
        }
    }
};

} // namespace

std::vector<std::size_t> TypicalProjector::decode(std::uint64_t member) const
{
    const std::size_t n = word_.length();
    const std::size_t d = word_.letter_dim();
    std::vector<std::size_t> k(n);
    for (std::size_t i = n; i-- > 0;) {
        k[i] = static_cast<std::size_t>(member % d);
        member /= d;
    }
    return k;
}

double TypicalProjector::log2_eigenvalue(std::uint64_t member) const
{
    const auto k = decode(member);
    double s = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) s += std::log2(word_.eigs()[i].values[k[i]]);
    return s;
}

TypicalProjector typical_projector(const ProductState& state, double delta, std::size_t cap)
{
    const std::size_t n = state.length();
    const std::size_t d = state.letter_dim();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double delta_max = sqrt_n * std::log2(static_cast<double>(d));
    if (!(delta > 0.0) || delta > delta_max + kWindowSlack)
        throw ValidationError("typical_projector: delta " + std::to_string(delta) + " outside (0, " +
                              std::to_string(delta_max) + "]");
    checked_space_size(d, n, cap);

    TypicalProjector pi(state);
    pi.delta_ = delta;
    pi.window_lo_ = state.entropy() - delta * sqrt_n;
    pi.window_hi_ = state.entropy() + delta * sqrt_n;

    Enumerator e{n, d, pi.window_lo_ - kWindowSlack, pi.window_hi_ + kWindowSlack, {}, {}, {}, &pi.members_};
    e.surprisal.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        e.surprisal[i].resize(d);
        for (std::size_t k = 0; k < d; ++k) {
            const double lam = state.eigs()[i].values[k];
            e.surprisal[i][k] = lam < kZeroEigenvalue ? std::numeric_limits<double>::infinity() : -std::log2(lam);
        }
    }
    e.min_rest.assign(n + 1, 0.0);
    e.max_rest.assign(n + 1, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double mn = std::numeric_limits<double>::infinity();
        double mx = -std::numeric_limits<double>::infinity();
        for (double s : e.surprisal[i]) {
            if (!std::isfinite(s)) continue;
            mn = std::min(mn, s);
            mx = std::max(mx, s);
        }
        e.min_rest[i] = e.min_rest[i + 1] + mn;
        e.max_rest[i] = e.max_rest[i + 1] + mx;
    }
    e.run(0, 0.0, 0);
    return pi;
}

double typ_mass(const TypicalProjector& pi)
{
    const auto& eigs = pi.word().eigs();
    double total = 0.0;
    for (std::uint64_t m : pi.members()) {
        const auto k = pi.decode(m);
        double p = 1.0;
        for (std::size_t i = 0; i < k.size(); ++i) p *= eigs[i].values[k[i]];
        total += p;
    }
    return std::clamp(total, 0.0, 1.0);
}

double cross_mass(const TypicalProjector& pi, const ProductState& other)
{
    const ProductState& word = pi.word();
    if (other.length() != word.length())
        throw ValidationError("cross_mass: word lengths differ (" + std::to_string(word.length()) + " vs " +
                              std::to_string(other.length()) + ")");
    if (other.letter_dim() != word.letter_dim()) throw ValidationError("cross_mass: letter dimensions differ");

    const std::size_t n = word.length();
    const std::size_t d = word.letter_dim();
    std::vector<std::vector<double>> overlap(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < d; ++k) {
            const auto e = word.eigs()[i].vector(k);
            overlap[i][k] = std::max(0.0, expectation(other.letters()[i], e).real());
        }

    double total = 0.0;
    for (std::uint64_t m : pi.members()) {
        const auto k = pi.decode(m);
        double p = 1.0;
        for (std::size_t i = 0; i < n; ++i) p *= overlap[i][k[i]];
        total += p;
    }
    return std::clamp(total, 0.0, 1.0);
}

ComplexMatrix projector_matrix(const TypicalProjector& pi, std::size_t cap)
{
    const ProductState& word = pi.word();
    const std::size_t n = word.length();
    const std::size_t d = word.letter_dim();
    std::size_t dim = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (dim > cap / d) throw CapExceeded("projector_matrix: dimension exceeds cap " + std::to_string(cap));
        dim *= d;
    }

    ComplexMatrix out(dim);
    std::vector<Complex> v;
    std::vector<Complex> next;
    for (std::uint64_t m : pi.members()) {
        const auto k = pi.decode(m);
        v.assign(1, Complex{1.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            const auto& basis = word.eigs()[i].basis;
            next.assign(v.size() * d, Complex{});
            for (std::size_t a = 0; a < v.size(); ++a)
                for (std::size_t b = 0; b < d; ++b) next[a * d + b] = v[a] * basis(b, k[i]);
            v.swap(next);
        }
        for (std::size_t r = 0; r < dim; ++r) {
            if (v[r] == Complex{}) continue;
            for (std::size_t c = 0; c < dim; ++c) out(r, c) += v[r] * std::conj(v[c]);
        }
    }
    return out;
}

ComplexMatrix truncated_state(const TypicalProjector& pi, std::size_t cap)
{
    const ComplexMatrix p = projector_matrix(pi, cap);
    const ComplexMatrix w = pi.word().materialize(cap);
    return p * w * p;
}

} // namespace didq
