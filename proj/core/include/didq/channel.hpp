#pragma once

// Classical-quantum channels x -> W_x, product-word states and POVM
// concatenation.

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "didq/linalg.hpp"

namespace didq {

inline constexpr double kStateTol = 1e-10;

/// Input letter: an index into a finite table, or a parameter tuple for a
/// parametrized family.
using Letter = std::variant<std::size_t, std::vector<double>>;

std::string to_string(const Letter& letter);

/// A length-n input word.
using InputWord = std::vector<Letter>;

enum class FamilyId { FiniteTable, BlochCircle, BlochCap, CantorCircle, MixedSegment, Measured };

std::string to_string(FamilyId id);

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool closed_hi = true;

    bool contains(double x) const noexcept;
};

/// Points per parameter axis of a uniform grid over a family's domain.
struct Grid {
    std::vector<std::size_t> resolution;
};

class Povm;

class CqChannel {
public:
    using Evaluator = std::function<ComplexMatrix(const Letter&)>;

    /// Placeholder with no outputs; assign a real channel before use.
    CqChannel() = default;

    /// Validates every state; throws ValidationError naming the first bad index.
    static CqChannel finite_table(std::vector<ComplexMatrix> states);
    /// theta in the interval -> cos(theta)|0> + sin(theta)|1>.
    static CqChannel bloch_circle(Interval theta = {0.0, 3.14159265358979323846, false});
    /// (polar, azimuth) in [0, cap_angle] x [0, 2pi) ->
    /// cos(polar/2)|0> + e^{i azimuth} sin(polar/2)|1>.
    static CqChannel bloch_cap(double cap_angle);
    /// Cantor parameter c -> theta = c pi/4, pure. Candidates are the 2^depth
    /// left endpoints of the depth-level middle-thirds intervals.
    static CqChannel cantor_circle(int depth = 7);
    /// p -> diag(p, 1-p).
    static CqChannel mixed_segment(Interval p = {0.0, 1.0, true});

    FamilyId family() const noexcept { return family_; }
    std::size_t output_dim() const noexcept { return dim_; }
    /// Number of parameters per letter (0 for finite tables).
    std::size_t parameter_count() const noexcept { return domain_.size(); }
    const std::vector<Interval>& domain() const noexcept { return domain_; }
    int cantor_depth() const noexcept { return cantor_depth_; }
    std::size_t table_size() const noexcept { return table_count_; }
    /// States of a finite table (empty for parametrized families).
    const std::vector<ComplexMatrix>& table_states() const noexcept { return states_; }

    bool contains(const Letter& x) const;
    /// Throws ValidationError for out-of-domain letters.
    ComplexMatrix evaluate(const Letter& x) const;

    /// Candidate letters used by packings. Finite tables enumerate every index
    /// and Cantor families their 2^depth points; both ignore the grid.
    std::size_t candidate_count(const Grid& grid) const;
    Letter candidate(const Grid& grid, std::size_t i) const;
    /// Throws ValidationError when the grid does not match the domain arity.
    void check_grid(const Grid& grid) const;
    /// Letters one resolution step away from candidate i (the next grid point
    /// along each axis; c + 3^-depth for Cantor families; none for tables).
    /// The largest distance to these bounds how far a domain point can sit
    /// from the candidate set.
    std::vector<Letter> resolution_partners(const Grid& grid, std::size_t i) const;

    /// W composed with the measurement: x -> diag(Tr W_x T_y). Same letters
    /// and candidate structure as this channel.
    CqChannel measured(const Povm& povm) const;

    /// Short human-readable description used in reports.
    std::string describe() const;

private:
    enum class Candidates { Table, UniformGrid, Cantor };

    FamilyId family_ = FamilyId::FiniteTable;
    Candidates candidates_ = Candidates::Table;
    std::size_t dim_ = 0;
    std::vector<ComplexMatrix> states_;
    std::vector<Interval> domain_;
    int cantor_depth_ = 0;
    std::size_t table_count_ = 0;
    Evaluator eval_;
    std::string label_;
};

/// Throws ValidationError unless rho is Hermitian, PSD and unit trace within
/// kStateTol.
void validate_state(const ComplexMatrix& rho, const std::string& what = "state");

/// True if rho is rank one within tol (largest eigenvalue >= 1 - tol).
bool is_pure(const ComplexMatrix& rho, double tol = kStateTol);

/// Von Neumann entropy in bits, 0 log 0 := 0.
double von_neumann_entropy(const ComplexMatrix& rho);
/// Same, from an eigen-decomposition.
double entropy_from_spectrum(std::span<const double> values);

/// W_{x_1} (x) ... (x) W_{x_n} kept in factored form with per-letter
/// eigen-decompositions.
class ProductState {
public:
    explicit ProductState(std::vector<ComplexMatrix> letters);
    /// Uses the supplied eigen-decompositions (e.g. a rotated basis inside a
    /// degenerate eigenspace). Each must reconstruct its letter within 1e-9.
    ProductState(std::vector<ComplexMatrix> letters, std::vector<HermitianEig> eigs);

    std::size_t length() const noexcept { return letters_.size(); }
    std::size_t letter_dim() const noexcept { return letters_.front().dim(); }
    const std::vector<ComplexMatrix>& letters() const noexcept { return letters_; }
    const std::vector<HermitianEig>& eigs() const noexcept { return eigs_; }
    /// Sum of per-letter von Neumann entropies, bits.
    double entropy() const noexcept { return entropy_; }

    /// Full tensor product; throws CapExceeded above cap.
    ComplexMatrix materialize(std::size_t cap = kDefaultDimCap) const;

private:
    void finish();

    std::vector<ComplexMatrix> letters_;
    std::vector<HermitianEig> eigs_;
    double entropy_ = 0.0;
};

ProductState word_state(const CqChannel& channel, const InputWord& word);

class Povm {
public:
    /// Validates PSD effects summing to the identity within kStateTol.
    explicit Povm(std::vector<ComplexMatrix> effects);

    static Povm computational_basis(std::size_t dim);
    static Povm trivial(std::size_t dim);

    std::size_t dim() const noexcept { return effects_.front().dim(); }
    std::size_t outcomes() const noexcept { return effects_.size(); }
    const std::vector<ComplexMatrix>& effects() const noexcept { return effects_; }

private:
    std::vector<ComplexMatrix> effects_;
};

/// x -> (Tr W_x T_y)_y, evaluated lazily per letter.
class ClassicalChannel {
public:
    ClassicalChannel(CqChannel channel, Povm povm);

    std::size_t outcomes() const noexcept { return povm_.outcomes(); }
    const CqChannel& source() const noexcept { return channel_; }
    const Povm& povm() const noexcept { return povm_; }
    /// Probability vector; entries >= -1e-12 clamped to 0, sum checked to 1e-10.
    std::vector<double> row(const Letter& x) const;

private:
    CqChannel channel_;
    Povm povm_;
};

/// Throws ValidationError on dimension mismatch.
ClassicalChannel concat_povm(const CqChannel& channel, const Povm& povm);

} // namespace didq
