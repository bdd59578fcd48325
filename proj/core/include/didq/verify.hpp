#pragma once

// Exact error measurement for identification codes, the bound checks for the
// two constructions and rate accounting.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "didq/codes.hpp"
#include "didq/geometry.hpp"
#include "didq/typicality.hpp"

namespace didq {

/// Cross-trace matrices are only kept for codes up to this size.
inline constexpr std::size_t kMaxCrossMatrix = 512;

struct ErrorReport {
    std::size_t codewords = 0;
    /// max_j (1 - Tr W_{u_j} E_j)
    double lambda1 = 0.0;
    /// max_{j != k} Tr W_{u_k} E_j; 0 for a single codeword
    double lambda2 = 0.0;
    std::size_t lambda1_argmax = 0;
    /// (j, k) = (decoder, sent codeword); unset for a single codeword. Ties go
    /// to the lexicographically smallest pair.
    std::optional<std::pair<std::size_t, std::size_t>> lambda2_argmax;
    /// Tr W_{u_k} E_j at [j * N + k], when requested
    std::vector<double> cross;
};

/// Exact errors: typical-projector decoders via cross_mass, pure-projector
/// decoders via products of letter overlaps. Throws ValidationError when the
/// decoder does not suit the channel.
ErrorReport measure_errors(const DICode& code, bool keep_matrix = false,
                           std::size_t cap = kDefaultEnumerationCap);

/// Oracle: builds every W_{u_k} and E_j as d^n x d^n matrices. Throws
/// CapExceeded above cap.
ErrorReport materialized_errors(const DICode& code, std::size_t cap = kDefaultDimCap);

/// Symmetric q x q table of Tr(W_a W_b), clamped to [0, 1].
std::vector<double> overlap_table(const DICode& code);

struct OverlapMax {
    bool found = false;
    double value = 0.0;
    std::size_t j = 0;
    std::size_t k = 0;
};

/// max over ordered pairs j != k of prod_i table[u_j,i][u_k,i], with the
/// lexicographically smallest maximizing pair. Branch and bound over the word
/// space with codeword lookups; runs in roughly N times the number of words
/// whose partial products stay above the running best.
OverlapMax max_product_overlap(std::span<const double> table, const WordList& words);
/// O(N^2 n) reference for the same quantity.
OverlapMax max_product_overlap_bruteforce(std::span<const double> table, const WordList& words);

struct BoundCheck {
    bool passed = false;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double bound1 = 0.0;
    double bound2 = 0.0;
    /// bound - measured
    double margin1 = 0.0;
    double margin2 = 0.0;
    /// a bound above 1 holds trivially
    bool vacuous1 = false;
    bool vacuous2 = false;

    bool vacuous() const noexcept { return vacuous1 || vacuous2; }
};

/// lambda1 <= eta and lambda2 <= eta + 6 * 2^{-delta sqrt(n)}. Throws
/// ValidationError when certify_premise fails for the code at this delta.
BoundCheck check_thm3(const DICode& code, const ErrorReport& report, double delta, std::size_t d);

/// lambda1 = 0 within 1e-12 and lambda2 <= 2^{-n^gamma t / 4} + 1e-12. Throws
/// ValidationError for a non-pure decoder.
BoundCheck check_thm5(const DICode& code, const ErrorReport& report, double gamma, double t);

struct RateReport {
    std::size_t n = 0;
    std::size_t codewords = 0;
    /// log2 N / (n log2 n)
    double rate = 0.0;
    double dimension = 0.0;
    /// dimension / 4 and dimension / 2
    double lower_target = 0.0;
    double upper_target = 0.0;
    /// every letter pure: the square-root map leaves the dimension unchanged
    bool sqrt_dimension_preserving = false;
};

/// Throws ValidationError for n = 1 or an empty code.
RateReport rate_report(const DICode& code, const DimensionEstimate& estimate);

} // namespace didq
