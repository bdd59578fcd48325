#include "didq/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "didq/error.hpp"

namespace didq {

std::vector<double> overlap_table(const DICode& code)
{
    const std::size_t q = code.alphabet.size();
    std::vector<ComplexMatrix> w;
    for (const Letter& x : code.alphabet) w.push_back(code.channel.evaluate(x));
    std::vector<double> t(q * q, 0.0);
    for (std::size_t a = 0; a < q; ++a) {
        for (std::size_t b = a; b < q; ++b) {
            const double v = std::clamp(trace_product(w[a], w[b]).real(), 0.0, 1.0);
            t[a * q + b] = v;
            t[b * q + a] = v;
        }
    }
    return t;
}

namespace {

double pair_product(std::span<const double> table, std::size_t q, std::span<const std::uint32_t> a,
                    std::span<const std::uint32_t> b)
{
    double p = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) p *= table[a[i] * q + b[i]];
    return p;
}

class OverlapSearch {
public:
    OverlapSearch(std::span<const double> table, const WordList& words)
        : table_(table), words_(words), q_(words.alphabet_size()), n_(words.length())
    {
        index_.reserve(words.size());
        for (std::size_t i = 0; i < words.size(); ++i) index_.emplace_back(words.key(i), i);
        std::sort(index_.begin(), index_.end());
        // children in decreasing overlap so good pairs are met early
        order_.resize(q_);
        for (std::size_t a = 0; a < q_; ++a) {
            order_[a].resize(q_);
            std::iota(order_[a].begin(), order_[a].end(), 0u);
            std::stable_sort(order_[a].begin(), order_[a].end(), [&](std::uint32_t x, std::uint32_t y) {
                return table_[a * q_ + x] > table_[a * q_ + y];
            });
        }
    }

    OverlapMax run()
    {
        OverlapMax out;
        if (words_.size() < 2) return out;

        // value: strict improvements only
        best_ = -1.0;
        for (j_ = 0; j_ < words_.size(); ++j_) descend(0, 1.0, 0, false);
        out.found = true;
        out.value = best_;
        if (best_ <= 0.0) {
            // every pair attains the maximum
            out.j = 0;
            out.k = 1;
            return out;
        }
        // smallest pair attaining it
        for (j_ = 0; j_ < words_.size(); ++j_) {
            hit_ = std::numeric_limits<std::size_t>::max();
            descend(0, 1.0, 0, true);
            if (hit_ != std::numeric_limits<std::size_t>::max()) {
                out.j = j_;
                out.k = hit_;
                return out;
            }
        }
        throw NumericalError("max_product_overlap: maximizing pair not found again");
    }

private:
    void descend(std::size_t pos, double partial, std::uint64_t key, bool ties)
    {
        if (ties ? partial < best_ : partial <= best_) return;
        const auto uj = words_[j_];
        if (pos == n_) {
            auto [lo, hi] = std::equal_range(index_.begin(), index_.end(), std::pair<std::uint64_t, std::size_t>{key, 0},
                                             [](const auto& a, const auto& b) { return a.first < b.first; });
            for (auto it = lo; it != hi; ++it) {
                if (it->second == j_) continue;
                if (ties) {
                    if (partial == best_) hit_ = std::min(hit_, it->second);
                } else {
                    best_ = partial;
                    return;
                }
            }
            return;
        }
        const std::uint32_t a = uj[pos];
        for (std::uint32_t b : order_[a])
            descend(pos + 1, partial * table_[a * q_ + b], key * q_ + b, ties);
    }

    std::span<const double> table_;
    const WordList& words_;
    std::size_t q_;
    std::size_t n_;
    std::vector<std::pair<std::uint64_t, std::size_t>> index_;
    std::vector<std::vector<std::uint32_t>> order_;
    std::size_t j_ = 0;
    double best_ = -1.0;
    std::size_t hit_ = 0;
};

void check_table(std::span<const double> table, const WordList& words)
{
    if (table.size() != words.alphabet_size() * words.alphabet_size())
        throw ValidationError("max_product_overlap: table size does not match the alphabet");
}

} // namespace

OverlapMax max_product_overlap(std::span<const double> table, const WordList& words)
{
    check_table(table, words);
    return OverlapSearch(table, words).run();
}

OverlapMax max_product_overlap_bruteforce(std::span<const double> table, const WordList& words)
{
    check_table(table, words);
    OverlapMax out;
    const std::size_t q = words.alphabet_size();
    for (std::size_t j = 0; j < words.size(); ++j) {
        for (std::size_t k = 0; k < words.size(); ++k) {
            if (j == k) continue;
            const double v = pair_product(table, q, words[j], words[k]);
            if (!out.found || v > out.value) out = {true, v, j, k};
        }
    }
    return out;
}

ErrorReport measure_errors(const DICode& code, bool keep_matrix, std::size_t cap)
{
    validate_code(code);
    const std::size_t count = code.size();
    ErrorReport r;
    r.codewords = count;
    const bool keep = keep_matrix && count <= kMaxCrossMatrix;
    if (keep) r.cross.assign(count * count, 0.0);

    if (code.decoder == DecoderKind::PureProjector) {
        const std::vector<double> table = overlap_table(code);
        const std::size_t q = code.alphabet.size();
        for (std::size_t j = 0; j < count; ++j) {
            const double own = pair_product(table, q, code.codewords[j], code.codewords[j]);
            const double err = std::clamp(1.0 - own, 0.0, 1.0);
            if (j == 0 || err > r.lambda1) {
                r.lambda1 = err;
                r.lambda1_argmax = j;
            }
        }
        if (keep) {
            for (std::size_t j = 0; j < count; ++j)
                for (std::size_t k = 0; k < count; ++k)
                    r.cross[j * count + k] = pair_product(table, q, code.codewords[j], code.codewords[k]);
        }
        const OverlapMax m = max_product_overlap(table, code.codewords);
        if (m.found) {
            r.lambda2 = m.value;
            r.lambda2_argmax = std::make_pair(m.j, m.k);
        }
        return r;
    }

    std::vector<ProductState> states;
    std::vector<TypicalProjector> projectors;
    states.reserve(count);
    projectors.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        states.push_back(code.state(j));
        projectors.push_back(typical_projector(states.back(), code.params.delta, cap));
    }
    for (std::size_t j = 0; j < count; ++j) {
        const double err = std::clamp(1.0 - typ_mass(projectors[j]), 0.0, 1.0);
        if (j == 0 || err > r.lambda1) {
            r.lambda1 = err;
            r.lambda1_argmax = j;
        }
        for (std::size_t k = 0; k < count; ++k) {
            const double v = j == k ? 1.0 - err : std::clamp(cross_mass(projectors[j], states[k]), 0.0, 1.0);
            if (keep) r.cross[j * count + k] = v;
            if (j == k) continue;
            if (!r.lambda2_argmax || v > r.lambda2) {
                r.lambda2 = v;
                r.lambda2_argmax = std::make_pair(j, k);
            }
        }
    }
    return r;
}

ErrorReport materialized_errors(const DICode& code, std::size_t cap)
{
    validate_code(code);
    const std::size_t count = code.size();
    std::vector<ComplexMatrix> w, e;
    for (std::size_t j = 0; j < count; ++j) {
        const ProductState s = code.state(j);
        w.push_back(s.materialize(cap));
        if (code.decoder == DecoderKind::PureProjector) {
            e.push_back(w.back());
        } else {
            e.push_back(projector_matrix(typical_projector(s, code.params.delta), cap));
        }
    }
    ErrorReport r;
    r.codewords = count;
    r.cross.assign(count * count, 0.0);
    for (std::size_t j = 0; j < count; ++j) {
        for (std::size_t k = 0; k < count; ++k) {
            const double v = trace_product(w[k], e[j]).real();
            r.cross[j * count + k] = v;
            if (j == k) {
                const double err = 1.0 - v;
                if (j == 0 || err > r.lambda1) {
                    r.lambda1 = err;
                    r.lambda1_argmax = j;
                }
            } else if (!r.lambda2_argmax || v > r.lambda2) {
                r.lambda2 = v;
                r.lambda2_argmax = std::make_pair(j, k);
            }
        }
    }
    return r;
}

namespace {

void finish(BoundCheck& c)
{
    c.margin1 = c.bound1 - c.lambda1;
    c.margin2 = c.bound2 - c.lambda2;
    c.vacuous1 = c.bound1 > 1.0;
    c.vacuous2 = c.bound2 > 1.0;
}

} // namespace

BoundCheck check_thm3(const DICode& code, const ErrorReport& report, double delta, std::size_t d)
{
    const Certification cert = certify_premise(code, delta);
    if (!cert.certified)
        throw ValidationError("check_thm3: premise not certified (" + std::to_string(cert.uncertified_pairs) +
                              " pairs short, worst by " + std::to_string(-cert.margin_bits) + " bits)");
    BoundCheck c;
    c.lambda1 = report.lambda1;
    c.lambda2 = report.lambda2;
    c.bound1 = typicality_eta(delta, d);
    c.bound2 = c.bound1 + 6.0 * std::exp2(-delta * std::sqrt(static_cast<double>(code.length())));
    finish(c);
    c.passed = c.lambda1 <= c.bound1 && c.lambda2 <= c.bound2;
    return c;
}

BoundCheck check_thm5(const DICode& code, const ErrorReport& report, double gamma, double t)
{
    if (code.decoder != DecoderKind::PureProjector) throw ValidationError("check_thm5: decoder is not pure");
    if (!(gamma > 0.0 && gamma < 1.0)) throw ValidationError("check_thm5: gamma must lie in (0, 1)");
    BoundCheck c;
    c.lambda1 = report.lambda1;
    c.lambda2 = report.lambda2;
    c.bound1 = 0.0;
    c.bound2 = std::exp2(-std::pow(static_cast<double>(code.length()), gamma) * t / 4.0);
    finish(c);
    c.passed = c.lambda1 <= 1e-12 && c.lambda2 <= c.bound2 + 1e-12;
    return c;
}

RateReport rate_report(const DICode& code, const DimensionEstimate& estimate)
{
    const std::size_t n = code.length();
    if (n <= 1) throw ValidationError("rate_report: n must be at least 2 (log n = 0)");
    if (code.size() == 0) throw ValidationError("rate_report: empty code");
    RateReport r;
    r.n = n;
    r.codewords = code.size();
    const double nn = static_cast<double>(n);
    r.rate = std::log2(static_cast<double>(code.size())) / (nn * std::log2(nn));
    r.dimension = estimate.lower;
    r.lower_target = 0.25 * estimate.lower;
    r.upper_target = 0.5 * estimate.lower;
    r.sqrt_dimension_preserving = std::all_of(code.alphabet.begin(), code.alphabet.end(),
                                              [&](const Letter& x) { return is_pure(code.channel.evaluate(x)); });
    return r;
}

} // namespace didq
