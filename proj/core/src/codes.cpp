#include "didq/codes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <unordered_set>

#include "didq/distinguish.hpp"
#include "didq/error.hpp"
#include "didq/typicality.hpp"

namespace didq {

void WordList::push_back(std::span<const std::uint32_t> word)
{
    if (word.size() != n_) throw ValidationError("WordList: word length mismatch");
    for (std::uint32_t s : word)
        if (s >= q_) throw ValidationError("WordList: symbol " + std::to_string(s) + " outside the alphabet");
    symbols_.insert(symbols_.end(), word.begin(), word.end());
}

void WordList::push_key(std::uint64_t key)
{
    const std::size_t base = symbols_.size();
    symbols_.resize(base + n_);
    for (std::size_t i = n_; i-- > 0;) {
        symbols_[base + i] = static_cast<std::uint32_t>(key % q_);
        key /= q_;
    }
}

std::uint64_t WordList::key(std::size_t i) const
{
    std::uint64_t k = 0;
    for (std::uint32_t s : (*this)[i]) k = k * q_ + s;
    return k;
}

std::size_t hamming_distance(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b)
{
    if (a.size() != b.size()) throw ValidationError("hamming_distance: length mismatch");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

double hamming_ball_volume(std::size_t q, std::size_t n, std::size_t radius)
{
    double vol = 0.0;
    double binom = 1.0;
    double power = 1.0;
    for (std::size_t i = 0; i <= std::min(radius, n); ++i) {
        vol += binom * power;
        binom = binom * static_cast<double>(n - i) / static_cast<double>(i + 1);
        power *= static_cast<double>(q - 1);
    }
    return vol;
}

std::size_t min_distance_for(double t, std::size_t n)
{
    const double tn = t * static_cast<double>(n);
    const double r = std::round(tn);
    const double c = std::abs(tn - r) < 1e-9 ? r : std::ceil(tn);
    return std::max<std::size_t>(1, static_cast<std::size_t>(c));
}

namespace {

// Exact q^n, or 0 if it does not fit in 64 bits.
std::uint64_t word_space_size(std::size_t q, std::size_t n)
{
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > UINT64_MAX / q) return 0;
        total *= q;
    }
    return total;
}

// Visits every word within a Hamming radius of a center, by base-q key.
class HammingBall {
public:
    HammingBall(std::size_t q, std::size_t n) : q_(q), n_(n), place_(n), digits_(n)
    {
        std::uint64_t p = 1;
        for (std::size_t i = n; i-- > 0;) {
            place_[i] = p;
            p *= q;
        }
    }

    /// Calls visit(key) for the center and its neighbours; stops early and
    /// returns true once visit returns true.
    template <class F>
    bool any(std::uint64_t center, std::size_t radius, F&& visit)
    {
        std::uint64_t k = center;
        for (std::size_t i = n_; i-- > 0;) {
            digits_[i] = static_cast<std::uint32_t>(k % q_);
            k /= q_;
        }
        if (visit(center)) return true;
        return radius > 0 && recurse(center, 0, radius, visit);
    }

private:
    template <class F>
    bool recurse(std::uint64_t key, std::size_t start, std::size_t radius, F& visit)
    {
        for (std::size_t pos = start; pos < n_; ++pos) {
            const std::uint64_t base = key - digits_[pos] * place_[pos];
            for (std::uint32_t b = 0; b < q_; ++b) {
                if (b == digits_[pos]) continue;
                const std::uint64_t k2 = base + b * place_[pos];
                if (visit(k2)) return true;
                if (radius > 1 && recurse(k2, pos + 1, radius - 1, visit)) return true;
            }
        }
        return false;
    }

    std::size_t q_;
    std::size_t n_;
    std::vector<std::uint64_t> place_;
    std::vector<std::uint32_t> digits_;
};

// Bitmaps up to this many words are used in sampling mode.
constexpr std::uint64_t kSamplingBitmapLimit = std::uint64_t{1} << 28;

} // namespace

HammingCode gv_code(std::size_t q, std::size_t n, double t, const GvOptions& options)
{
    if (q == 0) throw ValidationError("gv_code: empty alphabet");
    if (n == 0) throw ValidationError("gv_code: length must be at least 1");
    if (!(t > 0.0 && t <= 1.0)) throw ValidationError("gv_code: t must lie in (0, 1]");

    HammingCode code;
    code.q = q;
    code.n = n;
    code.t = t;
    code.min_dist = min_distance_for(t, n);
    code.words = WordList(n, q);
    code.gv_bound =
        std::pow(static_cast<double>(q), static_cast<double>(n)) / hamming_ball_volume(q, n, code.min_dist - 1);
    if (q == 1) {
        code.words.push_key(0);
        return code;
    }

    const std::uint64_t space = word_space_size(q, n);
    const std::size_t radius = code.min_dist - 1;

    if (space != 0 && space <= options.cap) {
        std::vector<bool> covered(space, false);
        HammingBall ball(q, n);
        for (std::uint64_t key = 0; key < space; ++key) {
            if (covered[key]) continue;
            code.words.push_key(key);
            ball.any(key, radius, [&](std::uint64_t k) {
                covered[k] = true;
                return false;
            });
        }
        return code;
    }

    if (!options.allow_sampling)
        throw CapExceeded("gv_code: q^n = " + std::to_string(std::pow(double(q), double(n))) +
                          " exceeds the enumeration cap " + std::to_string(options.cap) +
                          "; enable sampling for a randomized greedy code");

    code.sampled = true;
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::uint32_t> digit(0, static_cast<std::uint32_t>(q - 1));
    const bool use_bitmap = space != 0 && space <= kSamplingBitmapLimit;
    std::vector<bool> covered(use_bitmap ? space : 0, false);
    std::unordered_set<std::uint64_t> taken;
    const bool lookup_ball = space != 0 && hamming_ball_volume(q, n, radius) <= 1e5;
    HammingBall ball(q, n);
    std::vector<std::uint32_t> word(n);
    std::vector<std::uint64_t> keys;
    WordList accepted(n, q);

    for (std::size_t trial = 0; trial < options.sample_trials; ++trial) {
        std::uint64_t key = 0;
        for (auto& s : word) {
            s = digit(rng);
            key = key * q + s;
        }
        if (use_bitmap) {
            if (covered[key]) continue;
            ball.any(key, radius, [&](std::uint64_t k) {
                covered[k] = true;
                return false;
            });
        } else if (lookup_ball) {
            if (ball.any(key, radius, [&](std::uint64_t k) { return taken.count(k) > 0; })) continue;
            taken.insert(key);
        } else {
            bool fits = true;
            for (std::size_t i = 0; i < accepted.size() && fits; ++i)
                fits = hamming_distance(word, accepted[i]) >= code.min_dist;
            if (!fits) continue;
        }
        accepted.push_back(word);
        keys.push_back(key);
    }

    // store in lexicographic order like the exhaustive mode
    std::vector<std::size_t> order(keys.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    for (std::size_t i : order) code.words.push_back(accepted[i]);
    return code;
}

BinningResult entropy_binning(std::span<const double> entropies, std::size_t n, std::size_t d)
{
    if (entropies.empty()) throw ValidationError("entropy_binning: no words");
    if (d == 0 || n == 0) throw ValidationError("entropy_binning: n and d must be positive");

    BinningResult out;
    const double total_bits = static_cast<double>(n) * std::log2(static_cast<double>(d));
    out.bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(total_bits - 1e-9)));
    out.bin_sizes.assign(out.bins, 0);

    std::vector<std::size_t> bin_of(entropies.size());
    for (std::size_t i = 0; i < entropies.size(); ++i) {
        const double e = entropies[i];
        if (!std::isfinite(e) || e < -1e-9) throw ValidationError("entropy_binning: invalid entropy");
        auto s = static_cast<std::ptrdiff_t>(std::ceil(e - 1e-12));
        s = std::clamp<std::ptrdiff_t>(s, 1, static_cast<std::ptrdiff_t>(out.bins));
        bin_of[i] = static_cast<std::size_t>(s);
        ++out.bin_sizes[bin_of[i] - 1];
    }
    // max_element returns the first maximum: smallest s wins ties
    const auto best = std::max_element(out.bin_sizes.begin(), out.bin_sizes.end());
    out.bin = static_cast<std::size_t>(best - out.bin_sizes.begin()) + 1;
    for (std::size_t i = 0; i < entropies.size(); ++i)
        if (bin_of[i] == out.bin) out.selected.push_back(i);
    return out;
}

BinningResult entropy_binning(const std::vector<InputWord>& words, const CqChannel& channel)
{
    if (words.empty()) throw ValidationError("entropy_binning: no words");
    std::vector<double> entropies;
    entropies.reserve(words.size());
    for (const InputWord& w : words) {
        double s = 0.0;
        for (const Letter& x : w) s += von_neumann_entropy(channel.evaluate(x));
        entropies.push_back(s);
    }
    return entropy_binning(entropies, words.front().size(), channel.output_dim());
}

std::string to_string(DecoderKind k)
{
    return k == DecoderKind::TypicalProjector ? "typical_projector" : "pure_projector";
}

DecoderKind decoder_from_string(const std::string& name)
{
    if (name == "typical_projector") return DecoderKind::TypicalProjector;
    if (name == "pure_projector") return DecoderKind::PureProjector;
    throw ValidationError("unknown decoder '" + name + "' (expected typical_projector or pure_projector)");
}

InputWord DICode::word(std::size_t j) const
{
    InputWord w;
    w.reserve(length());
    for (std::uint32_t s : codewords[j]) w.push_back(alphabet.at(s));
    return w;
}

ProductState DICode::state(std::size_t j) const
{
    return word_state(channel, word(j));
}

void validate_code(const DICode& code)
{
    if (code.codewords.alphabet_size() > code.alphabet.size())
        throw ValidationError("DICode: codewords use symbols beyond the alphabet");
    if (code.size() == 0) throw ValidationError("DICode: no codewords");
    for (std::size_t a = 0; a < code.alphabet.size(); ++a) {
        const ComplexMatrix w = code.channel.evaluate(code.alphabet[a]);
        if (code.decoder == DecoderKind::PureProjector && !is_pure(w))
            throw ValidationError("DICode: pure-projector decoder but letter " + std::to_string(a) + " (" +
                                  to_string(code.alphabet[a]) + ") has a mixed output");
    }
}

namespace {

struct LetterTables {
    std::size_t q = 0;
    std::vector<double> sqrt_hs_sq;
    std::vector<bool> orthogonal;

    double dist_sq(std::uint32_t a, std::uint32_t b) const { return sqrt_hs_sq[a * q + b]; }
    bool orth(std::uint32_t a, std::uint32_t b) const { return orthogonal[a * q + b]; }
};

// Outputs with Tr(W_a W_b) at or below this have orthogonal supports.
constexpr double kOrthogonalOverlap = 1e-14;

LetterTables letter_tables(const DICode& code)
{
    LetterTables t;
    t.q = code.alphabet.size();
    std::vector<ComplexMatrix> w, root;
    for (const Letter& x : code.alphabet) {
        w.push_back(code.channel.evaluate(x));
        root.push_back(mat_sqrt(w.back()));
    }
    t.sqrt_hs_sq.assign(t.q * t.q, 0.0);
    t.orthogonal.assign(t.q * t.q, false);
    for (std::size_t a = 0; a < t.q; ++a) {
        for (std::size_t b = 0; b < t.q; ++b) {
            if (a == b) continue;
            const double h = hs_norm(root[a] - root[b]);
            t.sqrt_hs_sq[a * t.q + b] = h * h;
            t.orthogonal[a * t.q + b] = trace_product(w[a], w[b]).real() <= kOrthogonalOverlap;
        }
    }
    return t;
}

} // namespace

Certification certify_premise(const DICode& code, double delta)
{
    if (!(delta > 0.0)) throw ValidationError("certify_premise: delta must be positive");
    const std::size_t n = code.length();
    const std::size_t count = code.size();
    const LetterTables tables = letter_tables(code);

    Certification c;
    c.required_bits = 3.0 * delta * std::sqrt(static_cast<double>(n));
    const bool keep = count <= kMaxPairTable;
    if (keep) c.epsilon.assign(count * count, 1.0);

    for (std::size_t j = 0; j < count; ++j) {
        const auto uj = code.codewords[j];
        for (std::size_t k = j + 1; k < count; ++k) {
            const auto uk = code.codewords[k];
            double rhs = 0.0;
            bool orthogonal = false;
            for (std::size_t i = 0; i < n; ++i) {
                rhs += tables.dist_sq(uj[i], uk[i]);
                orthogonal = orthogonal || tables.orth(uj[i], uk[i]);
            }
            rhs *= 0.25;
            // -ln(1 - T) >= rhs, so 1 - T <= e^{-rhs} = 2^{-rhs log2 e}
            const double bits = orthogonal ? std::numeric_limits<double>::infinity() : rhs * std::numbers::log2e;
            const double eps = orthogonal ? 0.0 : std::exp(-rhs);
            ++c.pairs;
            const double margin = bits - c.required_bits;
            c.margin_bits = std::min(c.margin_bits, margin);
            if (margin < -1e-12) ++c.uncertified_pairs;
            if (keep) {
                c.epsilon[j * count + k] = eps;
                c.epsilon[k * count + j] = eps;
            }
        }
    }
    c.certified = c.uncertified_pairs == 0;
    return c;
}

double certified_epsilon(const Certification& cert, std::size_t n_codewords, std::size_t j, std::size_t k)
{
    if (cert.epsilon.size() != n_codewords * n_codewords)
        throw ValidationError("certified_epsilon: no pair table for this code");
    if (j >= n_codewords || k >= n_codewords || j == k) throw ValidationError("certified_epsilon: bad pair");
    return cert.epsilon[j * n_codewords + k];
}

namespace {

Grid packing_grid(const CqChannel& channel, double scale, const AssemblyOptions& options)
{
    return options.grid ? *options.grid : auto_grid(channel, Metric::SqrtHs, scale);
}

DICode code_from(const CqChannel& channel, const Packing& packing, const HammingCode& h, DecoderKind kind,
                 const CodeParams& params)
{
    DICode code{channel, packing.points, WordList(params.n, std::max<std::size_t>(1, packing.size())), kind, params};
    for (std::size_t i = 0; i < h.words.size(); ++i) code.codewords.push_back(h.words[i]);
    return code;
}

} // namespace

Assembly assemble_thm4(const CqChannel& channel, std::size_t n, double alpha, double t, double delta,
                       const AssemblyOptions& options)
{
    if (!(alpha > 0.0 && alpha <= 0.25)) throw ValidationError("assemble_thm4: alpha must lie in (0, 1/4]");
    if (n == 0) throw ValidationError("assemble_thm4: n must be at least 1");
    const std::size_t d = channel.output_dim();
    const double delta_max = std::sqrt(static_cast<double>(n)) * std::log2(static_cast<double>(d));
    if (!(delta > 0.0 && delta <= delta_max + 1e-12))
        throw ValidationError("assemble_thm4: delta must lie in (0, sqrt(n) log2 d]");

    const double scale = std::pow(static_cast<double>(n), -alpha);
    Assembly out;
    out.packing = greedy_packing(channel, packing_grid(channel, scale, options), scale, Metric::SqrtHs);
    out.hamming = gv_code(out.packing.size(), n, t, options.gv);

    // entropy of each Hamming word from per-letter entropies
    std::vector<double> letter_entropy;
    for (const Letter& x : out.packing.points) letter_entropy.push_back(von_neumann_entropy(channel.evaluate(x)));
    std::vector<double> entropies;
    entropies.reserve(out.hamming.words.size());
    for (std::size_t i = 0; i < out.hamming.words.size(); ++i) {
        double s = 0.0;
        for (std::uint32_t a : out.hamming.words[i]) s += letter_entropy[a];
        entropies.push_back(s);
    }
    out.binning = entropy_binning(entropies, n, d);

    CodeParams params{n, alpha, t, delta, 0.0};
    HammingCode kept = out.hamming;
    kept.words = WordList(n, out.hamming.words.alphabet_size());
    for (std::size_t i : out.binning->selected) kept.words.push_back(out.hamming.words[i]);
    out.code = code_from(channel, out.packing, kept, DecoderKind::TypicalProjector, params);

    out.claimed_lambda1 = typicality_eta(delta, d);
    out.claimed_lambda2 = out.claimed_lambda1 + 6.0 * std::exp2(-delta * std::sqrt(static_cast<double>(n)));
    out.vacuous = out.claimed_lambda1 > 1.0 || out.claimed_lambda2 > 1.0;

    out.certification = certify_premise(out.code, delta);
    const Certification& cert = *out.certification;
    if (!cert.certified) {
        out.infeasibility = std::to_string(cert.uncertified_pairs) + " of " + std::to_string(cert.pairs) +
                            " codeword pairs are not certified: need " + std::to_string(cert.required_bits) +
                            " bits, worst pair short by " + std::to_string(-cert.margin_bits) + " bits";
        return out;
    }

    const std::size_t count = out.code.size();
    if (count > kMaxPairTable) return out;
    std::vector<TypicalProjector> projectors;
    std::vector<ProductState> states;
    for (std::size_t j = 0; j < count; ++j) {
        states.push_back(out.code.state(j));
        projectors.push_back(typical_projector(states.back(), delta, options.enumeration_cap));
    }
    BoundRecheck recheck;
    for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t k = 0; k < count; ++k) {
            if (j == k) continue;
            const double lhs = cross_mass(projectors[j], states[k]);
            const double rhs = lemma2_rhs(certified_epsilon(cert, count, j, k), delta, n, states[j].entropy(),
                                          states[k].entropy(), d);
            ++recheck.pairs_checked;
            recheck.worst_gap = std::max(recheck.worst_gap, lhs - rhs);
            if (lhs > rhs + 1e-9) ++recheck.violations;
        }
    }
    out.recheck = recheck;
    return out;
}

Assembly assemble_pure(const CqChannel& channel, std::size_t n, double gamma, double t,
                       const AssemblyOptions& options)
{
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("assemble_pure: gamma must lie in (0, 1)");
    if (n == 0) throw ValidationError("assemble_pure: n must be at least 1");

    const double scale = std::pow(static_cast<double>(n), -(1.0 - gamma) / 2.0);
    Assembly out;
    out.packing = greedy_packing(channel, packing_grid(channel, scale, options), scale, Metric::SqrtHs);
    for (std::size_t a = 0; a < out.packing.size(); ++a) {
        if (!is_pure(channel.evaluate(out.packing.points[a])))
            throw ValidationError("assemble_pure: output at " + to_string(out.packing.points[a]) + " is not pure");
    }
    out.hamming = gv_code(out.packing.size(), n, t, options.gv);

    CodeParams params{n, 0.0, t, 0.0, gamma};
    out.code = code_from(channel, out.packing, out.hamming, DecoderKind::PureProjector, params);
    out.claimed_lambda1 = 0.0;
    out.claimed_lambda2 = std::exp2(-std::pow(static_cast<double>(n), gamma) * t / 4.0);
    out.vacuous = false;
    return out;
}

} // namespace didq
