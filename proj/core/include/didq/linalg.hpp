#pragma once

// Dense complex Hermitian linear algebra: just enough for operators on
// small tensor-product spaces (states, projectors, POVM effects).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace didq {

using Complex = std::complex<double>;

/// Largest dimension any kron / materialization may produce unless the caller
/// passes a different cap.
inline constexpr std::size_t kDefaultDimCap = 4096;

/// Tolerance for Hermiticity checks (max |H - H^dagger| entry).
inline constexpr double kHermitianTol = 1e-10;

/// Negative eigenvalues above this are roundoff and get clamped in PSD
/// operations.
inline constexpr double kPsdClampTol = 1e-10;

/// mat_sqrt rejects inputs with an eigenvalue below -kPsdHardTol.
inline constexpr double kPsdHardTol = 1e-8;

/// Square complex matrix, row-major.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix zeros(std::size_t dim) { return ComplexMatrix(dim); }
    static ComplexMatrix diagonal(std::span<const double> values);
    /// |v><v|
    static ComplexMatrix outer(std::span<const Complex> v);

    std::size_t dim() const noexcept { return dim_; }
    bool empty() const noexcept { return dim_ == 0; }

    Complex& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * dim_ + c]; }

    std::span<Complex> data() noexcept { return data_; }
    std::span<const Complex> data() const noexcept { return data_; }

    ComplexMatrix adjoint() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scalar);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool all_finite() const noexcept;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

/// Eigen-decomposition of a Hermitian matrix. Values ascending; column j of
/// `basis` is the eigenvector for values[j].
struct HermitianEig {
    std::vector<double> values;
    ComplexMatrix basis;

    std::size_t dim() const noexcept { return values.size(); }
    std::vector<Complex> vector(std::size_t j) const;
};

/// max_{ij} |A_ij - conj(A_ji)|
double hermiticity_defect(const ComplexMatrix& a);
/// max_{ij} |A_ij - B_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Cyclic complex Jacobi. Throws ValidationError for dim 0 or non-Hermitian
/// input; NumericalError if 100 sweeps do not converge.
HermitianEig herm_eig(const ComplexMatrix& h);
/// Same sweeps without accumulating eigenvectors; ascending.
std::vector<double> herm_eigenvalues(const ComplexMatrix& h);

/// basis * diag(values) * basis^dagger
ComplexMatrix reconstruct(const HermitianEig& eig);

/// Applies f to the spectrum of a Hermitian matrix.
template <class F>
ComplexMatrix spectral_map(const HermitianEig& eig, F&& f);

/// Principal square root of a PSD matrix. Negative eigenvalues in
/// [-kPsdHardTol, 0) are clamped; anything lower throws ValidationError.
ComplexMatrix mat_sqrt(const ComplexMatrix& p);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap = kDefaultDimCap);
/// Left-to-right tensor product of all factors.
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors, std::size_t cap = kDefaultDimCap);

Complex trace(const ComplexMatrix& a);
/// Tr(A B) without forming the product.
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
/// Schatten-2 (Hilbert-Schmidt / Frobenius) norm.
double hs_norm(const ComplexMatrix& a);
/// Sum of |eigenvalues| of a Hermitian matrix.
double trace_norm(const ComplexMatrix& h);
double min_eig(const ComplexMatrix& h);

/// <u| A |u>
Complex expectation(const ComplexMatrix& a, std::span<const Complex> u);

// --- implementation of templates ---

template <class F>
ComplexMatrix spectral_map(const HermitianEig& eig, F&& f)
{
    const std::size_t n = eig.dim();
    ComplexMatrix out(n);
    std::vector<double> mapped(n);
    for (std::size_t k = 0; k < n; ++k) mapped[k] = f(eig.values[k]);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r; c < n; ++c) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                if (mapped[k] == 0.0) continue;
                acc += mapped[k] * eig.basis(r, k) * std::conj(eig.basis(c, k));
            }
            out(r, c) = acc;
            out(c, r) = std::conj(acc);
        }
        out(r, r) = out(r, r).real();
    }
    return out;
}

} // namespace didq
