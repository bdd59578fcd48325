#pragma once

// Greedy metric packings of channel output families and box-counting
// (Minkowski) dimension estimates built from them.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "didq/channel.hpp"
#include "didq/linalg.hpp"

namespace didq {

/// Distances between single-letter outputs.
enum class Metric {
    SqrtHs, ///< || sqrt(W_x) - sqrt(W_x') ||_2
    Trace,  ///< (1/2) || W_x - W_x' ||_1
};

std::string to_string(Metric m);
Metric metric_from_string(const std::string& name);

/// Grid candidates of a family with their outputs pre-embedded for fast
/// distance evaluation. `scale` multiplies every distance.
class PointCloud {
public:
    PointCloud(const CqChannel& channel, const Grid& grid, Metric metric, double scale = 1.0);

    std::size_t size() const noexcept { return count_; }
    Metric metric() const noexcept { return metric_; }
    double scale() const noexcept { return scale_; }
    const Grid& grid() const noexcept { return grid_; }
    const CqChannel& channel() const noexcept { return channel_; }

    Letter letter(std::size_t i) const { return channel_.candidate(grid_, i); }
    double distance(std::size_t i, std::size_t j) const;
    /// Largest distance between a candidate and its resolution partners: how
    /// coarse the candidate set is in the metric.
    double spacing() const noexcept { return spacing_; }

private:
    double embedded_distance(const Complex* a, const Complex* b) const;
    void embed(const ComplexMatrix& w, Complex* out) const;

    CqChannel channel_;
    Grid grid_;
    Metric metric_;
    double scale_;
    std::size_t count_ = 0;
    std::size_t stride_ = 0;
    std::vector<Complex> embedded_;
    double spacing_ = 0.0;
};

/// Distance between two letters under a metric (scale 1).
double letter_distance(const CqChannel& channel, const Letter& a, const Letter& b, Metric metric);

struct Packing {
    Metric metric = Metric::SqrtHs;
    double delta = 0.0;
    double scale = 1.0;
    Grid grid;
    std::size_t candidate_count = 0;
    std::vector<std::size_t> candidate_indices;
    std::vector<Letter> points;

    std::size_t size() const noexcept { return points.size(); }
};

/// Grid resolution must be at least this many times finer than the packing
/// scale.
inline constexpr double kGridFineness = 10.0;
/// Pairwise separations may fall short of delta by this much.
inline constexpr double kPackingSlack = 1e-12;

/// First-fit greedy over the cloud's candidate order. Throws ValidationError
/// when cloud.spacing() > delta / kGridFineness or delta <= 0.
Packing greedy_packing(const PointCloud& cloud, double delta);
Packing greedy_packing(const CqChannel& channel, const Grid& grid, double delta, Metric metric, double scale = 1.0);

/// Smallest grid (doubling from 16 points per axis) whose spacing satisfies
/// the fineness requirement at `finest_delta`. Throws ValidationError if none
/// exists below max_points candidates.
Grid auto_grid(const CqChannel& channel, Metric metric, double finest_delta, std::size_t max_points = 4'000'000);

/// Brute-force re-check: pairwise separation and that every candidate lies
/// within delta of a chosen point.
struct PackingAudit {
    double min_separation = 0.0;
    bool separated = false;
    bool covers = false;
};
PackingAudit audit_packing(const PointCloud& cloud, const Packing& packing);

enum class DimensionMode { Liminf, Limsup };

std::string to_string(DimensionMode m);
DimensionMode mode_from_string(const std::string& name);

struct Schedule {
    double delta0 = 0.5;
    double ratio = 0.5;
    std::size_t steps = 8;
    double tail_fraction = 0.5;

    std::vector<double> scales() const;
};

struct DimensionEstimate {
    Metric metric = Metric::SqrtHs;
    DimensionMode mode = DimensionMode::Liminf;
    std::vector<double> scales;
    std::vector<std::size_t> counts;
    /// log(N_{k+1} / N_k) / log(delta_k / delta_{k+1})
    std::vector<double> slopes;
    double tail_fraction = 0.5;
    /// index of the first slope in the tail
    std::size_t tail_start = 0;
    double lower = 0.0;
    double upper = 0.0;
    /// every count equal: dimension reported as 0
    bool flat = false;

    /// lower in liminf mode, upper in limsup mode
    double value() const noexcept { return mode == DimensionMode::Liminf ? lower : upper; }
};

/// Throws ValidationError for fewer than 4 steps, ratio outside (0,1) or a grid
/// too coarse for the smallest scale.
DimensionEstimate minkowski_estimate(const PointCloud& cloud, const Schedule& schedule, DimensionMode mode);
DimensionEstimate minkowski_estimate(const CqChannel& channel, const Grid& grid, const Schedule& schedule,
                                     Metric metric, DimensionMode mode, double scale = 1.0);

} // namespace didq
