#include "didq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "didq/error.hpp"

namespace didq {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, Complex{0.0, 0.0}) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries))
{
    if (data_.size() != dim_ * dim_)
        throw ValidationError("ComplexMatrix: expected " + std::to_string(dim_ * dim_) + " entries, got " +
                              std::to_string(data_.size()));
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) : dim_(rows.size())
{
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw ValidationError("ComplexMatrix: rows must form a square matrix");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim)
{
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values)
{
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const Complex> v)
{
    ComplexMatrix m(v.size());
    for (std::size_t r = 0; r < v.size(); ++r)
        for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other)
{
    if (other.dim_ != dim_) throw ValidationError("ComplexMatrix +: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other)
{
    if (other.dim_ != dim_) throw ValidationError("ComplexMatrix -: dimension mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar)
{
    for (auto& x : data_) x *= scalar;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) throw ValidationError("ComplexMatrix *: dimension mismatch");
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

bool ComplexMatrix::all_finite() const noexcept
{
    return std::all_of(data_.begin(), data_.end(),
                       [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

std::vector<Complex> HermitianEig::vector(std::size_t j) const
{
    std::vector<Complex> v(dim());
    for (std::size_t r = 0; r < dim(); ++r) v[r] = basis(r, j);
    return v;
}

double hermiticity_defect(const ComplexMatrix& a)
{
    double worst = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = r; c < a.dim(); ++c) worst = std::max(worst, std::abs(a(r, c) - std::conj(a(c, r))));
    return worst;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) throw ValidationError("max_abs_diff: dimension mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
    return worst;
}

namespace {

constexpr double kJacobiOffTol = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_mass(const ComplexMatrix& a)
{
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

// One complex Jacobi rotation annihilating a(p,q): a <- J^dagger a J and, when
// given, v <- v J. Only rows p and q are computed; the columns follow by
// Hermitian symmetry.
void rotate(ComplexMatrix& a, ComplexMatrix* v, std::size_t p, std::size_t q)
{
    const Complex b = a(p, q);
    const double beta = std::abs(b);
    if (beta == 0.0) return;
    const Complex phase = b / beta; // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();

    const double theta = (aqq - app) / (2.0 * beta);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    // std::complex products go through the NaN-recovering libgcc helper;
    // inputs are validated finite, so plain real arithmetic is used instead.
    const double sr = s * phase.real(), si = s * phase.imag();
    const double cr = c * phase.real(), ci = c * phase.imag();
    const std::size_t n = a.dim();

    // rows: x' = c x - s e^{i phi} y, y' = s x + c e^{i phi} y
    Complex* rp = &a(p, 0);
    Complex* rq = &a(q, 0);
    for (std::size_t col = 0; col < n; ++col) {
        const double xr = rp[col].real(), xi = rp[col].imag(), yr = rq[col].real(), yi = rq[col].imag();
        rp[col] = Complex(c * xr - (sr * yr - si * yi), c * xi - (sr * yi + si * yr));
        rq[col] = Complex(s * xr + (cr * yr - ci * yi), s * xi + (cr * yi + ci * yr));
    }
    for (std::size_t r = 0; r < n; ++r) {
        a(r, p) = std::conj(rp[r]);
        a(r, q) = std::conj(rq[r]);
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = app - t * beta;
    a(q, q) = aqq + t * beta;

    if (!v) return;
    // columns of v: x' = c x - s e^{-i phi} y, y' = s x + c e^{-i phi} y
    for (std::size_t r = 0; r < n; ++r) {
        Complex& x = (*v)(r, p);
        Complex& y = (*v)(r, q);
        const double xr = x.real(), xi = x.imag(), yr = y.real(), yi = y.imag();
        x = Complex(c * xr - (sr * yr + si * yi), c * xi - (sr * yi - si * yr));
        y = Complex(s * xr + (cr * yr + ci * yi), s * xi + (cr * yi - ci * yr));
    }
}

// Diagonalizes a in place; accumulates the rotations into v when given.
void jacobi(ComplexMatrix& a, ComplexMatrix* v, const ComplexMatrix& h)
{
    const std::size_t n = h.dim();
    if (n == 0) throw ValidationError("herm_eig: dimension 0");
    if (!h.all_finite()) throw ValidationError("herm_eig: non-finite entries");
    const double defect = hermiticity_defect(h);
    if (defect > kHermitianTol)
        throw ValidationError("herm_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");

    a = ComplexMatrix(n);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (h(r, c) + std::conj(h(c, r)));
    if (v) *v = ComplexMatrix::identity(n);

    const double scale = std::max(1.0, hs_norm(a));
    bool converged = off_diagonal_mass(a) < kJacobiOffTol * scale;
    for (int sweep = 0; sweep < kJacobiMaxSweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
        converged = off_diagonal_mass(a) < kJacobiOffTol * scale;
    }
    if (!converged) throw NumericalError("herm_eig: Jacobi did not converge in 100 sweeps");
}

} // namespace

HermitianEig herm_eig(const ComplexMatrix& h)
{
    const std::size_t n = h.dim();
    ComplexMatrix a, v;
    jacobi(a, &v, h);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    HermitianEig out;
    out.values.resize(n);
    out.basis = ComplexMatrix(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src).real();
        // fix the global phase: first non-negligible component real positive
        Complex fix = 1.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double mag = std::abs(v(r, src));
            if (mag > 1e-10) {
                fix = std::conj(v(r, src)) / mag;
                break;
            }
        }
        for (std::size_t r = 0; r < n; ++r) out.basis(r, j) = v(r, src) * fix;
    }
    return out;
}

ComplexMatrix reconstruct(const HermitianEig& eig)
{
    return spectral_map(eig, [](double x) { return x; });
}

ComplexMatrix mat_sqrt(const ComplexMatrix& p)
{
    const HermitianEig eig = herm_eig(p);
    if (eig.values.front() < -kPsdHardTol)
        throw ValidationError("mat_sqrt: input is not PSD (min eigenvalue " + std::to_string(eig.values.front()) + ")");
    return spectral_map(eig, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b, std::size_t cap)
{
    const std::size_t da = a.dim();
    const std::size_t db = b.dim();
    if (da == 0 || db == 0) throw ValidationError("kron: empty factor");
    if (da > cap / db)
        throw CapExceeded("kron: dimension " + std::to_string(da) + "x" + std::to_string(db) + " exceeds cap " +
                          std::to_string(cap));
    const std::size_t n = da * db;
    ComplexMatrix out(n);
    for (std::size_t ar = 0; ar < da; ++ar)
        for (std::size_t ac = 0; ac < da; ++ac) {
            const Complex x = a(ar, ac);
            if (x == Complex{}) continue;
            for (std::size_t br = 0; br < db; ++br)
                for (std::size_t bc = 0; bc < db; ++bc) out(ar * db + br, ac * db + bc) = x * b(br, bc);
        }
    return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors, std::size_t cap)
{
    if (factors.empty()) throw ValidationError("kron_all: no factors");
    ComplexMatrix acc = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) acc = kron(acc, factors[i], cap);
    return acc;
}

Complex trace(const ComplexMatrix& a)
{
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += a(i, i);
    return s;
}

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.dim() != b.dim()) throw ValidationError("trace_product: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = 0; c < a.dim(); ++c) s += a(r, c) * b(c, r);
    return s;
}

double hs_norm(const ComplexMatrix& a)
{
    double s = 0.0;
    for (const auto& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

std::vector<double> herm_eigenvalues(const ComplexMatrix& h)
{
    ComplexMatrix a;
    jacobi(a, nullptr, h);
    std::vector<double> values(h.dim());
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = a(k, k).real();
    std::sort(values.begin(), values.end());
    return values;
}

double trace_norm(const ComplexMatrix& h)
{
    double s = 0.0;
    for (double x : herm_eigenvalues(h)) s += std::abs(x);
    return s;
}

double min_eig(const ComplexMatrix& h)
{
    return herm_eigenvalues(h).front();
}

Complex expectation(const ComplexMatrix& a, std::span<const Complex> u)
{
    if (u.size() != a.dim()) throw ValidationError("expectation: dimension mismatch");
    Complex s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r) {
        Complex row = 0.0;
        for (std::size_t c = 0; c < a.dim(); ++c) row += a(r, c) * u[c];
        s += std::conj(u[r]) * row;
    }
    return s;
}

} // namespace didq
