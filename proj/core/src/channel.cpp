#include "didq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "didq/error.hpp"

namespace didq {

namespace {

constexpr double kDomainSlack = 1e-12;

ComplexMatrix pure_qubit(Complex a, Complex b)
{
    const std::vector<Complex> v{a, b};
    return ComplexMatrix::outer(v);
}

double grid_point(const Interval& iv, std::size_t res, std::size_t k)
{
    if (res <= 1) return iv.lo;
    const double span = iv.hi - iv.lo;
    if (iv.closed_hi) return iv.lo + span * static_cast<double>(k) / static_cast<double>(res - 1);
    return iv.lo + span * static_cast<double>(k) / static_cast<double>(res);
}

double cantor_point(int depth, std::size_t index)
{
    double c = 0.0;
    double scale = 1.0;
    for (int level = depth - 1; level >= 0; --level) {
        scale /= 3.0;
        if ((index >> level) & 1U) c += 2.0 * scale;
    }
    return c;
}

} // namespace

std::string to_string(const Letter& letter)
{
    std::ostringstream os;
    os.precision(17);
    if (const auto* idx = std::get_if<std::size_t>(&letter)) {
        os << *idx;
    } else {
        const auto& p = std::get<std::vector<double>>(letter);
        os << '(';
        for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
        os << ')';
    }
    return os.str();
}

std::string to_string(FamilyId id)
{
    switch (id) {
    case FamilyId::FiniteTable: return "finite_table";
    case FamilyId::BlochCircle: return "bloch_circle";
    case FamilyId::BlochCap: return "bloch_cap";
    case FamilyId::CantorCircle: return "cantor_circle";
    case FamilyId::MixedSegment: return "mixed_segment";
    case FamilyId::Measured: return "measured";
    }
    return "unknown";
}

bool Interval::contains(double x) const noexcept
{
    if (!std::isfinite(x)) return false;
    if (x < lo - kDomainSlack) return false;
    if (closed_hi) return x <= hi + kDomainSlack;
    return x < hi;
}

CqChannel CqChannel::finite_table(std::vector<ComplexMatrix> states)
{
    if (states.empty()) throw ValidationError("finite_table: no states");
    const std::size_t d = states.front().dim();
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].dim() != d)
            throw ValidationError("finite_table: state " + std::to_string(i) + " has dimension " +
                                  std::to_string(states[i].dim()) + ", expected " + std::to_string(d));
        validate_state(states[i], "state " + std::to_string(i));
    }
    CqChannel ch;
    ch.family_ = FamilyId::FiniteTable;
    ch.candidates_ = Candidates::Table;
    ch.dim_ = d;
    ch.states_ = std::move(states);
    ch.table_count_ = ch.states_.size();
    ch.eval_ = [states = ch.states_](const Letter& x) { return states[std::get<std::size_t>(x)]; };
    ch.label_ = "finite_table[" + std::to_string(ch.states_.size()) + "]";
    return ch;
}

CqChannel CqChannel::bloch_circle(Interval theta)
{
    if (!(theta.hi > theta.lo)) throw ValidationError("bloch_circle: empty interval");
    CqChannel ch;
    ch.family_ = FamilyId::BlochCircle;
    ch.candidates_ = Candidates::UniformGrid;
    ch.dim_ = 2;
    ch.domain_ = {theta};
    ch.eval_ = [](const Letter& x) {
        const double t = std::get<std::vector<double>>(x)[0];
        return pure_qubit(std::cos(t), std::sin(t));
    };
    ch.label_ = "bloch_circle";
    return ch;
}

CqChannel CqChannel::bloch_cap(double cap_angle)
{
    if (!(cap_angle > 0.0 && cap_angle <= std::numbers::pi))
        throw ValidationError("bloch_cap: cap angle must lie in (0, pi]");
    CqChannel ch;
    ch.family_ = FamilyId::BlochCap;
    ch.candidates_ = Candidates::UniformGrid;
    ch.dim_ = 2;
    ch.domain_ = {Interval{0.0, cap_angle, true}, Interval{0.0, 2.0 * std::numbers::pi, false}};
    ch.eval_ = [](const Letter& x) {
        const auto& p = std::get<std::vector<double>>(x);
        const double half = 0.5 * p[0];
        return pure_qubit(std::cos(half), std::polar(std::sin(half), p[1]));
    };
    ch.label_ = "bloch_cap";
    return ch;
}

CqChannel CqChannel::cantor_circle(int depth)
{
    if (depth < 1 || depth > 24) throw ValidationError("cantor_circle: depth must lie in [1, 24]");
    CqChannel ch;
    ch.family_ = FamilyId::CantorCircle;
    ch.candidates_ = Candidates::Cantor;
    ch.dim_ = 2;
    ch.domain_ = {Interval{0.0, 1.0, true}};
    ch.cantor_depth_ = depth;
    ch.eval_ = [](const Letter& x) {
        const double t = std::get<std::vector<double>>(x)[0] * std::numbers::pi / 4.0;
        return pure_qubit(std::cos(t), std::sin(t));
    };
    ch.label_ = "cantor_circle(depth=" + std::to_string(depth) + ")";
    return ch;
}

CqChannel CqChannel::mixed_segment(Interval p)
{
    if (p.lo < 0.0 || p.hi > 1.0 || !(p.hi > p.lo)) throw ValidationError("mixed_segment: interval must lie in [0, 1]");
    CqChannel ch;
    ch.family_ = FamilyId::MixedSegment;
    ch.candidates_ = Candidates::UniformGrid;
    ch.dim_ = 2;
    ch.domain_ = {p};
    ch.eval_ = [](const Letter& x) {
        const double q = std::get<std::vector<double>>(x)[0];
        const double diag[2] = {q, 1.0 - q};
        return ComplexMatrix::diagonal(diag);
    };
    ch.label_ = "mixed_segment";
    return ch;
}

bool CqChannel::contains(const Letter& x) const
{
    if (candidates_ == Candidates::Table) {
        const auto* idx = std::get_if<std::size_t>(&x);
        return idx != nullptr && *idx < table_count_;
    }
    const auto* p = std::get_if<std::vector<double>>(&x);
    if (p == nullptr || p->size() != domain_.size()) return false;
    for (std::size_t i = 0; i < domain_.size(); ++i)
        if (!domain_[i].contains((*p)[i])) return false;
    return true;
}

ComplexMatrix CqChannel::evaluate(const Letter& x) const
{
    if (!contains(x)) throw ValidationError(label_ + ": letter " + to_string(x) + " is outside the domain");
    return eval_(x);
}

void CqChannel::check_grid(const Grid& grid) const
{
    if (candidates_ != Candidates::UniformGrid) return;
    if (grid.resolution.size() != domain_.size())
        throw ValidationError(label_ + ": grid needs " + std::to_string(domain_.size()) + " resolution entries");
    for (std::size_t r : grid.resolution)
        if (r == 0) throw ValidationError(label_ + ": grid resolution must be positive");
}

std::size_t CqChannel::candidate_count(const Grid& grid) const
{
    switch (candidates_) {
    case Candidates::Table: return table_count_;
    case Candidates::Cantor: return std::size_t{1} << cantor_depth_;
    case Candidates::UniformGrid: {
        check_grid(grid);
        std::size_t total = 1;
        for (std::size_t r : grid.resolution) total *= r;
        return total;
    }
    }
    return 0;
}

Letter CqChannel::candidate(const Grid& grid, std::size_t i) const
{
    switch (candidates_) {
    case Candidates::Table: return i;
    case Candidates::Cantor: return std::vector<double>{cantor_point(cantor_depth_, i)};
    case Candidates::UniformGrid: {
        std::vector<double> p(domain_.size());
        // last axis varies fastest
        for (std::size_t axis = domain_.size(); axis-- > 0;) {
            const std::size_t res = grid.resolution[axis];
            p[axis] = grid_point(domain_[axis], res, i % res);
            i /= res;
        }
        return p;
    }
    }
    return i;
}

std::vector<Letter> CqChannel::resolution_partners(const Grid& grid, std::size_t i) const
{
    std::vector<Letter> out;
    switch (candidates_) {
    case Candidates::Table: break;
    case Candidates::Cantor: {
        const double c = cantor_point(cantor_depth_, i) + std::pow(3.0, -cantor_depth_);
        out.emplace_back(std::vector<double>{std::min(c, 1.0)});
        break;
    }
    case Candidates::UniformGrid: {
        std::size_t stride = 1;
        for (std::size_t axis = domain_.size(); axis-- > 0;) {
            const std::size_t res = grid.resolution[axis];
            const std::size_t coord = (i / stride) % res;
            if (coord + 1 < res) out.push_back(candidate(grid, i + stride));
            stride *= res;
        }
        break;
    }
    }
    return out;
}

CqChannel CqChannel::measured(const Povm& povm) const
{
    if (povm.dim() != dim_) throw ValidationError("measured: POVM dimension does not match channel output");
    CqChannel ch = *this;
    ch.family_ = FamilyId::Measured;
    ch.dim_ = povm.outcomes();
    ch.states_.clear();
    ch.table_count_ = table_count_;
    ClassicalChannel classical(*this, povm);
    ch.eval_ = [classical](const Letter& x) {
        const std::vector<double> row = classical.row(x);
        return ComplexMatrix::diagonal(row);
    };
    ch.label_ = label_ + "+povm[" + std::to_string(povm.outcomes()) + "]";
    return ch;
}

std::string CqChannel::describe() const
{
    return label_;
}

void validate_state(const ComplexMatrix& rho, const std::string& what)
{
    if (rho.empty()) throw ValidationError(what + ": empty matrix");
    if (!rho.all_finite()) throw ValidationError(what + ": non-finite entries");
    const double defect = hermiticity_defect(rho);
    if (defect > kStateTol) throw ValidationError(what + ": not Hermitian (defect " + std::to_string(defect) + ")");
    const Complex tr = trace(rho);
    if (std::abs(tr - Complex{1.0, 0.0}) > kStateTol)
        throw ValidationError(what + ": trace " + std::to_string(tr.real()) + " differs from 1");
    const double lo = min_eig(rho);
    if (lo < -kStateTol) throw ValidationError(what + ": not PSD (min eigenvalue " + std::to_string(lo) + ")");
}

bool is_pure(const ComplexMatrix& rho, double tol)
{
    return herm_eig(rho).values.back() >= 1.0 - tol;
}

double entropy_from_spectrum(std::span<const double> values)
{
    double s = 0.0;
    for (double p : values)
        if (p > 0.0) s -= p * std::log2(p);
    return std::max(s, 0.0);
}

double von_neumann_entropy(const ComplexMatrix& rho)
{
    validate_state(rho);
    return entropy_from_spectrum(herm_eig(rho).values);
}

ProductState::ProductState(std::vector<ComplexMatrix> letters) : letters_(std::move(letters))
{
    if (letters_.empty()) throw ValidationError("ProductState: empty word");
    eigs_.reserve(letters_.size());
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        validate_state(letters_[i], "letter " + std::to_string(i));
        eigs_.push_back(herm_eig(letters_[i]));
    }
    finish();
}

ProductState::ProductState(std::vector<ComplexMatrix> letters, std::vector<HermitianEig> eigs)
    : letters_(std::move(letters)), eigs_(std::move(eigs))
{
    if (letters_.empty()) throw ValidationError("ProductState: empty word");
    if (eigs_.size() != letters_.size()) throw ValidationError("ProductState: one eigen-decomposition per letter");
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        validate_state(letters_[i], "letter " + std::to_string(i));
        if (eigs_[i].dim() != letters_[i].dim() || max_abs_diff(reconstruct(eigs_[i]), letters_[i]) > 1e-9)
            throw ValidationError("ProductState: eigen-decomposition " + std::to_string(i) +
                                  " does not reconstruct its letter");
    }
    finish();
}

void ProductState::finish()
{
    const std::size_t d = letters_.front().dim();
    entropy_ = 0.0;
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (letters_[i].dim() != d) throw ValidationError("ProductState: letters have different dimensions");
        entropy_ += entropy_from_spectrum(eigs_[i].values);
    }
}

ComplexMatrix ProductState::materialize(std::size_t cap) const
{
    return kron_all(letters_, cap);
}

ProductState word_state(const CqChannel& channel, const InputWord& word)
{
    if (word.empty()) throw ValidationError("word_state: empty word");
    std::vector<ComplexMatrix> letters;
    letters.reserve(word.size());
    for (const auto& x : word) letters.push_back(channel.evaluate(x));
    return ProductState(std::move(letters));
}

Povm::Povm(std::vector<ComplexMatrix> effects) : effects_(std::move(effects))
{
    if (effects_.empty()) throw ValidationError("Povm: no effects");
    const std::size_t d = effects_.front().dim();
    ComplexMatrix sum(d);
    for (std::size_t y = 0; y < effects_.size(); ++y) {
        const auto& e = effects_[y];
        if (e.dim() != d) throw ValidationError("Povm: effect " + std::to_string(y) + " has the wrong dimension");
        if (hermiticity_defect(e) > kStateTol)
            throw ValidationError("Povm: effect " + std::to_string(y) + " is not Hermitian");
        if (min_eig(e) < -kStateTol) throw ValidationError("Povm: effect " + std::to_string(y) + " is not PSD");
        sum += e;
    }
    if (max_abs_diff(sum, ComplexMatrix::identity(d)) > kStateTol)
        throw ValidationError("Povm: effects do not sum to the identity");
}

Povm Povm::computational_basis(std::size_t dim)
{
    std::vector<ComplexMatrix> effects;
    for (std::size_t y = 0; y < dim; ++y) {
        ComplexMatrix e(dim);
        e(y, y) = 1.0;
        effects.push_back(std::move(e));
    }
    return Povm(std::move(effects));
}

Povm Povm::trivial(std::size_t dim)
{
    return Povm({ComplexMatrix::identity(dim)});
}

ClassicalChannel::ClassicalChannel(CqChannel channel, Povm povm) : channel_(std::move(channel)), povm_(std::move(povm))
{
    if (povm_.dim() != channel_.output_dim())
        throw ValidationError("concat_povm: POVM dimension " + std::to_string(povm_.dim()) +
                              " does not match channel output dimension " + std::to_string(channel_.output_dim()));
}

std::vector<double> ClassicalChannel::row(const Letter& x) const
{
    const ComplexMatrix w = channel_.evaluate(x);
    std::vector<double> p(povm_.outcomes());
    double sum = 0.0;
    for (std::size_t y = 0; y < p.size(); ++y) {
        double v = trace_product(w, povm_.effects()[y]).real();
        if (v < 0.0) {
            if (v < -1e-12) throw NumericalError("concat_povm: negative probability " + std::to_string(v));
            v = 0.0;
        }
        p[y] = v;
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStateTol) throw NumericalError("concat_povm: row does not sum to 1");
    return p;
}

ClassicalChannel concat_povm(const CqChannel& channel, const Povm& povm)
{
    return ClassicalChannel(channel, povm);
}

} // namespace didq
