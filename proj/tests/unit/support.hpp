#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <didq/linalg.hpp>

namespace didq::test {

inline ComplexMatrix random_hermitian(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(d);
    for (std::size_t r = 0; r < d; ++r) {
        a(r, r) = g(rng);
        for (std::size_t c = r + 1; c < d; ++c) {
            a(r, c) = Complex(g(rng), g(rng));
            a(c, r) = std::conj(a(r, c));
        }
    }
    return a;
}

// Ginibre-induced random density matrix
inline ComplexMatrix random_state(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix a(d);
    for (auto& x : a.data()) x = Complex(g(rng), g(rng));
    ComplexMatrix rho = a * a.adjoint();
    return (1.0 / trace(rho).real()) * rho;
}

inline ComplexMatrix random_pure(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> v(d);
    double norm = 0.0;
    for (auto& x : v) {
        x = Complex(g(rng), g(rng));
        norm += std::norm(x);
    }
    for (auto& x : v) x /= std::sqrt(norm);
    return ComplexMatrix::outer(v);
}

inline ComplexMatrix ket_state(Complex a, Complex b)
{
    const std::vector<Complex> v{a, b};
    return ComplexMatrix::outer(v);
}

inline ComplexMatrix diag2(double p)
{
    const double v[2] = {p, 1.0 - p};
    return ComplexMatrix::diagonal(v);
}

} // namespace didq::test
