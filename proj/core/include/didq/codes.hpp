#pragma once

// Hamming-distance codes over packing alphabets, entropy binning and the two
// identification-code pipelines (typical-projector and pure-state decoders).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "didq/channel.hpp"
#include "didq/geometry.hpp"

namespace didq {

/// Equal-length words over {0, ..., q-1}, stored flat.
class WordList {
public:
    WordList() = default;
    WordList(std::size_t length, std::size_t q) : n_(length), q_(q) {}

    std::size_t length() const noexcept { return n_; }
    std::size_t alphabet_size() const noexcept { return q_; }
    std::size_t size() const noexcept { return n_ == 0 ? 0 : symbols_.size() / n_; }
    bool empty() const noexcept { return size() == 0; }

    std::span<const std::uint32_t> operator[](std::size_t i) const { return {symbols_.data() + i * n_, n_}; }
    void push_back(std::span<const std::uint32_t> word);
    /// Appends the word whose base-q digits (first symbol most significant)
    /// spell `key`.
    void push_key(std::uint64_t key);
    /// Base-q value of word i; lexicographic order equals key order.
    std::uint64_t key(std::size_t i) const;

    std::span<const std::uint32_t> symbols() const noexcept { return symbols_; }

private:
    std::size_t n_ = 0;
    std::size_t q_ = 0;
    std::vector<std::uint32_t> symbols_;
};

std::size_t hamming_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

/// sum_{i <= radius} C(n, i) (q-1)^i, in floating point.
double hamming_ball_volume(std::size_t q, std::size_t n, std::size_t radius);

/// ceil(t n), with t n within 1e-9 of an integer rounded to it.
std::size_t min_distance_for(double t, std::size_t n);

struct HammingCode {
    std::size_t q = 0;
    std::size_t n = 0;
    double t = 0.0;
    std::size_t min_dist = 0;
    WordList words;
    /// q^n / Vol(n, min_dist - 1)
    double gv_bound = 0.0;
    /// built by random-sampling greedy (q^n above the enumeration cap)
    bool sampled = false;
};

struct GvOptions {
    std::size_t cap = 10'000'000;
    bool allow_sampling = false;
    std::uint64_t seed = 0;
    std::size_t sample_trials = 200'000;
};

/// Greedy code with minimum Hamming distance ceil(t n). Exhaustive
/// lexicographic first-fit when q^n <= cap; otherwise random first-fit
/// (allow_sampling) or CapExceeded.
HammingCode gv_code(std::size_t q, std::size_t n, double t, const GvOptions& options = {});

struct BinningResult {
    /// indices into the input sequence, ascending
    std::vector<std::size_t> selected;
    /// chosen s; members have entropy in [s-1, s]
    std::size_t bin = 1;
    /// ceil(n log2 d)
    std::size_t bins = 1;
    std::vector<std::size_t> bin_sizes;
};

/// Splits words by entropy into [s-1, s], s = 1..ceil(n log2 d), and keeps the
/// largest bin (smallest s on ties).
BinningResult entropy_binning(std::span<const double> entropies, std::size_t n, std::size_t d);
BinningResult entropy_binning(const std::vector<InputWord>& words, const CqChannel& channel);

enum class DecoderKind { TypicalProjector, PureProjector };

std::string to_string(DecoderKind k);
DecoderKind decoder_from_string(const std::string& name);

struct CodeParams {
    std::size_t n = 0;
    double alpha = 0.0;
    double t = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
};

/// Identification code: codewords over a letter alphabet plus the decoder
/// rule. Typical-projector codes decode message j with the typical projector
/// of W_{u_j} at width params.delta; pure-projector codes with W_{u_j} itself.
struct DICode {
    CqChannel channel;
    std::vector<Letter> alphabet;
    WordList codewords;
    DecoderKind decoder = DecoderKind::TypicalProjector;
    CodeParams params;

    std::size_t size() const noexcept { return codewords.size(); }
    std::size_t length() const noexcept { return codewords.length(); }
    InputWord word(std::size_t j) const;
    ProductState state(std::size_t j) const;
};

/// Throws ValidationError if a pure-projector code uses a mixed letter or a
/// codeword symbol is outside the alphabet.
void validate_code(const DICode& code);

/// Premise certification for the typical-projector construction: every pair
/// must satisfy 1 - T <= 2^{-3 delta sqrt(n)}. Through
/// -ln(1 - T) >= (1/4) sum_i ||sqrt(W_i) - sqrt(W'_i)||_2^2 a pair is
/// certified at exponent rhs * log2(e) bits; a position with orthogonal
/// outputs makes T = 1 and the exponent infinite.
struct Certification {
    bool certified = true;
    /// 3 delta sqrt(n)
    double required_bits = 0.0;
    /// min over pairs of certified exponent minus required_bits (+inf if every
    /// pair is exactly orthogonal or there are no pairs)
    double margin_bits = std::numeric_limits<double>::infinity();
    std::size_t pairs = 0;
    std::size_t uncertified_pairs = 0;
    /// certified epsilon bound per unordered pair (j < k), row-major upper
    /// triangle; kept only for codes of at most kMaxPairTable codewords
    std::vector<double> epsilon;
};

inline constexpr std::size_t kMaxPairTable = 1024;

Certification certify_premise(const DICode& code, double delta);
/// Certified epsilon of pair (j, k) from a Certification with a pair table.
double certified_epsilon(const Certification& cert, std::size_t n_codewords, std::size_t j, std::size_t k);

/// Re-check of the hypothesis-testing bound on an assembled code:
/// Tr W_{u_k} Pi_{u_j} <= lemma2_rhs(certified eps, delta, n, S_j, S_k, d).
struct BoundRecheck {
    std::size_t pairs_checked = 0;
    std::size_t violations = 0;
    /// max over checked pairs of lhs - rhs
    double worst_gap = -std::numeric_limits<double>::infinity();
};

struct Assembly {
    DICode code;
    Packing packing;
    HammingCode hamming;
    std::optional<BinningResult> binning;
    std::optional<Certification> certification;
    std::optional<BoundRecheck> recheck;
    double claimed_lambda1 = 0.0;
    double claimed_lambda2 = 0.0;
    /// a claimed bound exceeds 1
    bool vacuous = false;
    /// empty when the construction's premise holds
    std::string infeasibility;

    bool feasible() const noexcept { return infeasibility.empty(); }
};

struct AssemblyOptions {
    /// candidate grid; chosen with auto_grid at the packing scale when unset
    std::optional<Grid> grid;
    GvOptions gv;
    std::size_t enumeration_cap = 10'000'000;
};

/// Packing at n^-alpha (sqrt_hs) -> gv_code -> entropy binning -> typical
/// projector decoders at width delta. Premise failures are reported in
/// Assembly::infeasibility, never thrown.
Assembly assemble_thm4(const CqChannel& channel, std::size_t n, double alpha, double t, double delta,
                       const AssemblyOptions& options = {});

/// Packing at n^{-(1-gamma)/2} -> gv_code -> pure projector decoders
/// E_j = W_{u_j}. Throws ValidationError if a packing letter has a mixed
/// output.
Assembly assemble_pure(const CqChannel& channel, std::size_t n, double gamma, double t,
                       const AssemblyOptions& options = {});

} // namespace didq
