#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <didq/error.hpp>
#include <didq/geometry.hpp>

#include "support.hpp"

using namespace didq;

TEST(Metric, Axioms)
{
    const CqChannel ch = CqChannel::bloch_cap(std::numbers::pi);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> polar(0.0, std::numbers::pi), az(0.0, 2.0 * std::numbers::pi);
    for (Metric m : {Metric::SqrtHs, Metric::Trace}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Letter a = std::vector<double>{polar(rng), az(rng)};
            const Letter b = std::vector<double>{polar(rng), az(rng)};
            const Letter c = std::vector<double>{polar(rng), az(rng)};
            const double ab = letter_distance(ch, a, b, m);
            EXPECT_NEAR(ab, letter_distance(ch, b, a, m), 1e-12);
            EXPECT_NEAR(letter_distance(ch, a, a, m), 0.0, 1e-7);
            EXPECT_LE(letter_distance(ch, a, c, m), ab + letter_distance(ch, b, c, m) + 1e-9);
        }
    }
}

TEST(PointCloud, MatchesLetterDistance)
{
    const CqChannel ch = CqChannel::mixed_segment();
    for (Metric m : {Metric::SqrtHs, Metric::Trace}) {
        const PointCloud cloud(ch, Grid{{11}}, m);
        for (std::size_t i = 0; i < 11; i += 3)
            for (std::size_t j = 0; j < 11; j += 2)
                EXPECT_NEAR(cloud.distance(i, j), letter_distance(ch, cloud.letter(i), cloud.letter(j), m), 1e-12);
    }
}

TEST(GreedyPacking, SeparatedAndMaximal)
{
    const CqChannel ch = CqChannel::bloch_circle();
    const PointCloud cloud(ch, Grid{{512}}, Metric::SqrtHs);
    for (double delta : {0.8, 0.3, 0.1}) {
        const Packing p = greedy_packing(cloud, delta);
        const PackingAudit a = audit_packing(cloud, p);
        EXPECT_TRUE(a.separated) << delta;
        EXPECT_TRUE(a.covers) << delta;
        EXPECT_EQ(p.candidate_indices.front(), 0u);
    }
}

TEST(GreedyPacking, ScaleInvariance)
{
    const CqChannel ch = CqChannel::bloch_circle();
    const Grid g{{1024}};
    const Packing unit = greedy_packing(ch, g, 0.25, Metric::SqrtHs, 1.0);
    const Packing doubled = greedy_packing(ch, g, 0.5, Metric::SqrtHs, 2.0);
    EXPECT_EQ(unit.candidate_indices, doubled.candidate_indices);
}

TEST(GreedyPacking, RejectsCoarseGrid)
{
    const CqChannel ch = CqChannel::bloch_circle();
    EXPECT_THROW(greedy_packing(ch, Grid{{16}}, 0.05, Metric::SqrtHs), ValidationError);
    EXPECT_THROW(greedy_packing(ch, Grid{{1024}}, 0.0, Metric::SqrtHs), ValidationError);
}

TEST(GreedyPacking, OrthogonalPairHasTwoPoints)
{
    const CqChannel ch = CqChannel::finite_table({test::ket_state(1.0, 0.0), test::ket_state(0.0, 1.0)});
    const Packing p = greedy_packing(ch, Grid{}, 1.0, Metric::SqrtHs);
    EXPECT_EQ(p.size(), 2u);
    const Packing q = greedy_packing(ch, Grid{}, 1.5, Metric::SqrtHs);
    EXPECT_EQ(q.size(), 1u);
}

TEST(AutoGrid, MeetsFinenessRequirement)
{
    const CqChannel ch = CqChannel::bloch_circle();
    const Grid g = auto_grid(ch, Metric::SqrtHs, 0.01);
    EXPECT_LE(PointCloud(ch, g, Metric::SqrtHs).spacing(), 0.001);
    EXPECT_THROW(auto_grid(ch, Metric::SqrtHs, 1e-9, 1000), ValidationError);
}

TEST(Minkowski, CantorSetAtMatchedRatio)
{
    const CqChannel ch = CqChannel::cantor_circle(9);
    const Schedule s{0.5, 1.0 / 3.0, 6, 0.5};
    const DimensionEstimate e = minkowski_estimate(PointCloud(ch, Grid{{1}}, Metric::SqrtHs), s, DimensionMode::Liminf);
    EXPECT_NEAR(e.lower, std::log(2.0) / std::log(3.0), 0.06);
    EXPECT_FALSE(e.flat);
    EXPECT_EQ(e.slopes.size(), 5u);
    EXPECT_EQ(e.tail_start, 2u);
}

TEST(Minkowski, SinglePointIsFlat)
{
    const CqChannel ch = CqChannel::finite_table({test::diag2(0.4)});
    const DimensionEstimate e =
        minkowski_estimate(PointCloud(ch, Grid{}, Metric::SqrtHs), Schedule{}, DimensionMode::Limsup);
    EXPECT_TRUE(e.flat);
    EXPECT_EQ(e.value(), 0.0);
}

TEST(Minkowski, ScheduleValidation)
{
    const PointCloud cloud(CqChannel::bloch_circle(), Grid{{4096}}, Metric::SqrtHs);
    EXPECT_THROW(minkowski_estimate(cloud, Schedule{0.5, 0.5, 3, 0.5}, DimensionMode::Liminf), ValidationError);
    EXPECT_THROW(minkowski_estimate(cloud, Schedule{0.5, 1.0, 6, 0.5}, DimensionMode::Liminf), ValidationError);
    EXPECT_THROW(minkowski_estimate(cloud, Schedule{0.5, 0.5, 12, 0.5}, DimensionMode::Liminf), ValidationError);
}

TEST(Minkowski, LiminfAndLimsupFromSameCounts)
{
    const PointCloud cloud(CqChannel::bloch_circle(), Grid{{16384}}, Metric::SqrtHs);
    const DimensionEstimate lo = minkowski_estimate(cloud, Schedule{}, DimensionMode::Liminf);
    const DimensionEstimate hi = minkowski_estimate(cloud, Schedule{}, DimensionMode::Limsup);
    EXPECT_EQ(lo.counts, hi.counts);
    EXPECT_LE(lo.value(), hi.value());
    EXPECT_NEAR(lo.value(), 1.0, 0.1);
}
