#include "didq/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "didq/distinguish.hpp"
#include "didq/error.hpp"

namespace didq {

std::string to_string(Metric m)
{
    return m == Metric::SqrtHs ? "sqrt_hs" : "trace";
}

Metric metric_from_string(const std::string& name)
{
    if (name == "sqrt_hs") return Metric::SqrtHs;
    if (name == "trace") return Metric::Trace;
    throw ValidationError("unknown metric '" + name + "' (expected sqrt_hs or trace)");
}

std::string to_string(DimensionMode m)
{
    return m == DimensionMode::Liminf ? "liminf" : "limsup";
}

DimensionMode mode_from_string(const std::string& name)
{
    if (name == "liminf") return DimensionMode::Liminf;
    if (name == "limsup") return DimensionMode::Limsup;
    throw ValidationError("unknown dimension mode '" + name + "' (expected liminf or limsup)");
}

namespace {

// Trace norm of a 2x2 Hermitian matrix in closed form.
double trace_norm_2x2(Complex m00, Complex m01, Complex m11)
{
    const double tr = m00.real() + m11.real();
    const double diff = m00.real() - m11.real();
    const double disc = std::sqrt(diff * diff + 4.0 * std::norm(m01));
    return std::max(std::abs(tr), disc);
}

} // namespace

PointCloud::PointCloud(const CqChannel& channel, const Grid& grid, Metric metric, double scale)
    : channel_(channel), grid_(grid), metric_(metric), scale_(scale)
{
    if (!(scale > 0.0)) throw ValidationError("PointCloud: scale must be positive");
    channel_.check_grid(grid_);
    count_ = channel_.candidate_count(grid_);
    const std::size_t d = channel_.output_dim();
    stride_ = d * d;
    embedded_.resize(count_ * stride_);
    for (std::size_t i = 0; i < count_; ++i) embed(channel_.evaluate(letter(i)), &embedded_[i * stride_]);

    std::vector<Complex> partner(stride_);
    for (std::size_t i = 0; i < count_; ++i) {
        for (const Letter& x : channel_.resolution_partners(grid_, i)) {
            embed(channel_.evaluate(x), partner.data());
            spacing_ = std::max(spacing_, embedded_distance(&embedded_[i * stride_], partner.data()));
        }
    }
}

void PointCloud::embed(const ComplexMatrix& w, Complex* out) const
{
    const ComplexMatrix m = metric_ == Metric::SqrtHs ? mat_sqrt(w) : w;
    std::copy(m.data().begin(), m.data().end(), out);
}

double PointCloud::embedded_distance(const Complex* a, const Complex* b) const
{
    const std::size_t d = channel_.output_dim();
    if (metric_ == Metric::SqrtHs) {
        double s = 0.0;
        for (std::size_t k = 0; k < stride_; ++k) s += std::norm(a[k] - b[k]);
        return scale_ * std::sqrt(s);
    }
    if (d == 2) return scale_ * 0.5 * trace_norm_2x2(a[0] - b[0], a[1] - b[1], a[3] - b[3]);
    ComplexMatrix diff(d);
    for (std::size_t k = 0; k < stride_; ++k) diff.data()[k] = a[k] - b[k];
    return scale_ * 0.5 * trace_norm(diff);
}

double PointCloud::distance(std::size_t i, std::size_t j) const
{
    return embedded_distance(&embedded_[i * stride_], &embedded_[j * stride_]);
}

double letter_distance(const CqChannel& channel, const Letter& a, const Letter& b, Metric metric)
{
    const ComplexMatrix wa = channel.evaluate(a);
    const ComplexMatrix wb = channel.evaluate(b);
    return metric == Metric::SqrtHs ? sqrt_hs_distance(wa, wb) : trace_distance(wa, wb);
}

Packing greedy_packing(const PointCloud& cloud, double delta)
{
    if (!(delta > 0.0)) throw ValidationError("greedy_packing: delta must be positive");
    if (cloud.spacing() > delta / kGridFineness)
        throw ValidationError("greedy_packing: grid spacing " + std::to_string(cloud.spacing()) +
                              " is not 10x finer than delta " + std::to_string(delta));

    Packing out;
    out.metric = cloud.metric();
    out.delta = delta;
    out.scale = cloud.scale();
    out.grid = cloud.grid();
    out.candidate_count = cloud.size();

    auto& chosen = out.candidate_indices;
    const double threshold = delta - kPackingSlack;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        bool fits = true;
        // newest first: along a curve the conflict is almost always recent
        for (auto it = chosen.rbegin(); it != chosen.rend(); ++it) {
            if (cloud.distance(i, *it) < threshold) {
                fits = false;
                break;
            }
        }
        if (fits) chosen.push_back(i);
    }
    out.points.reserve(chosen.size());
    for (std::size_t i : chosen) out.points.push_back(cloud.letter(i));
    return out;
}

Packing greedy_packing(const CqChannel& channel, const Grid& grid, double delta, Metric metric, double scale)
{
    return greedy_packing(PointCloud(channel, grid, metric, scale), delta);
}

Grid auto_grid(const CqChannel& channel, Metric metric, double finest_delta, std::size_t max_points)
{
    if (!(finest_delta > 0.0)) throw ValidationError("auto_grid: delta must be positive");
    const std::size_t axes = channel.parameter_count();
    if (axes == 0 || channel.family() == FamilyId::CantorCircle) return Grid{std::vector<std::size_t>(axes, 1)};

    // the spacing check in PointCloud samples every candidate, so probe with
    // growing grids until one passes
    for (std::size_t per_axis = 16;; per_axis *= 2) {
        std::size_t total = 1;
        for (std::size_t a = 0; a < axes; ++a) total *= per_axis;
        if (total > max_points)
            throw ValidationError("auto_grid: no grid below " + std::to_string(max_points) +
                                  " points resolves delta " + std::to_string(finest_delta));
        Grid g{std::vector<std::size_t>(axes, per_axis)};
        if (PointCloud(channel, g, metric).spacing() <= finest_delta / kGridFineness) return g;
    }
}

PackingAudit audit_packing(const PointCloud& cloud, const Packing& packing)
{
    PackingAudit a;
    const auto& idx = packing.candidate_indices;
    a.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < idx.size(); ++x)
        for (std::size_t y = x + 1; y < idx.size(); ++y)
            a.min_separation = std::min(a.min_separation, cloud.distance(idx[x], idx[y]));
    a.separated = a.min_separation >= packing.delta - kPackingSlack;
    a.covers = true;
    for (std::size_t i = 0; i < cloud.size() && a.covers; ++i) {
        bool near = false;
        for (std::size_t j : idx) {
            if (cloud.distance(i, j) < packing.delta) {
                near = true;
                break;
            }
        }
        a.covers = near;
    }
    return a;
}

std::vector<double> Schedule::scales() const
{
    std::vector<double> out(steps);
    double s = delta0;
    for (std::size_t k = 0; k < steps; ++k) {
        out[k] = s;
        s *= ratio;
    }
    return out;
}

DimensionEstimate minkowski_estimate(const PointCloud& cloud, const Schedule& schedule, DimensionMode mode)
{
    if (schedule.steps < 4) throw ValidationError("minkowski_estimate: schedule needs at least 4 steps");
    if (!(schedule.ratio > 0.0 && schedule.ratio < 1.0))
        throw ValidationError("minkowski_estimate: ratio must lie in (0, 1)");
    if (!(schedule.delta0 > 0.0)) throw ValidationError("minkowski_estimate: delta0 must be positive");
    if (!(schedule.tail_fraction > 0.0 && schedule.tail_fraction <= 1.0))
        throw ValidationError("minkowski_estimate: tail fraction must lie in (0, 1]");

    DimensionEstimate est;
    est.metric = cloud.metric();
    est.mode = mode;
    est.tail_fraction = schedule.tail_fraction;
    est.scales = schedule.scales();
    if (cloud.spacing() > est.scales.back() / kGridFineness)
        throw ValidationError("minkowski_estimate: grid spacing " + std::to_string(cloud.spacing()) +
                              " is too coarse for the smallest scale " + std::to_string(est.scales.back()));

    for (double delta : est.scales) est.counts.push_back(greedy_packing(cloud, delta).size());

    const std::size_t nslopes = est.counts.size() - 1;
    for (std::size_t k = 0; k < nslopes; ++k) {
        const double num = std::log(static_cast<double>(est.counts[k + 1]) / static_cast<double>(est.counts[k]));
        est.slopes.push_back(num / std::log(est.scales[k] / est.scales[k + 1]));
    }
    const auto tail_len = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::ceil(schedule.tail_fraction * static_cast<double>(nslopes))));
    est.tail_start = nslopes - std::min(tail_len, nslopes);

    est.flat = std::all_of(est.counts.begin(), est.counts.end(), [&](std::size_t c) { return c == est.counts[0]; });
    if (est.flat) {
        est.lower = 0.0;
        est.upper = 0.0;
        return est;
    }
    const auto tail_begin = est.slopes.begin() + static_cast<std::ptrdiff_t>(est.tail_start);
    est.lower = *std::min_element(tail_begin, est.slopes.end());
    est.upper = *std::max_element(tail_begin, est.slopes.end());
    return est;
}

DimensionEstimate minkowski_estimate(const CqChannel& channel, const Grid& grid, const Schedule& schedule,
                                     Metric metric, DimensionMode mode, double scale)
{
    return minkowski_estimate(PointCloud(channel, grid, metric, scale), schedule, mode);
}

} // namespace didq
