#include <gtest/gtest.h>

#include <cmath>

#include "gaugechain/capacitance.hpp"
#include "gaugechain/contour.hpp"
#include "gaugechain/rng.hpp"
#include "gaugechain/winding.hpp"

using namespace gaugechain;

TEST(Linspace, Endpoints)
{
	const auto x = linspace(-1.0, 2.0, 4);
	ASSERT_EQ(x.size(), 4u);
	EXPECT_EQ(x.front(), -1.0);
	EXPECT_EQ(x.back(), 2.0);
	EXPECT_DOUBLE_EQ(x[1], 0.0);
	EXPECT_EQ(linspace(3.0, 5.0, 1).front(), 3.0);
}

TEST(MarchingSquares, CircleLevelSet)
{
	const auto g = evaluate_grid({-2, 2}, {-2, 2}, 81, 81, 1, [](std::complex<double> z) { return std::norm(z) - 1.0; });
	const auto c = marching_squares(g);
	ASSERT_EQ(c.lines.size(), 1u);
	EXPECT_TRUE(c.lines[0].closed);
	for (auto z : c.lines[0].points) EXPECT_NEAR(std::abs(z), 1.0, 5e-3);
	EXPECT_TRUE(point_in_polygon(c.lines[0].points, {0.0, 0.0}));
	EXPECT_FALSE(point_in_polygon(c.lines[0].points, {1.5, 0.0}));
}

TEST(MarchingSquares, OpenLineAcrossTheGrid)
{
	const auto g = evaluate_grid({0, 1}, {0, 1}, 11, 11, 1, [](std::complex<double> z) { return z.real() - 0.33; });
	const auto c = marching_squares(g);
	ASSERT_EQ(c.lines.size(), 1u);
	EXPECT_FALSE(c.lines[0].closed);
	EXPECT_EQ(c.lines[0].points.size(), 11u);
	for (auto z : c.lines[0].points) EXPECT_NEAR(z.real(), 0.33, 1e-14);
}

TEST(MarchingSquares, SaddleGivesTwoLines)
{
	const auto g = evaluate_grid({-1, 1}, {-1, 1}, 10, 10, 1,
	                             [](std::complex<double> z) { return z.real() * z.imag() + 0.01; });
	const auto c = marching_squares(g);
	EXPECT_EQ(c.lines.size(), 2u);
}

TEST(MarchingSquares, RejectsTinyGrids)
{
	ComplexGrid g{{0.0}, {0.0, 1.0}, {1.0, -1.0}};
	EXPECT_THROW(marching_squares(g), std::invalid_argument);
}

TEST(EdgeContour, HermitianChainHasNoContour)
{
	const auto chain = sample_chain(standard_blocks(0.0), 100, 1);
	const auto c = edge_contour(chain, {0.0, 4.0}, {0.2, 1.0}, 20, 10);
	EXPECT_TRUE(c.lines.empty());
	EXPECT_THROW(edge_contour(chain, {0, 1}, {0, 1}, 4, 20), std::invalid_argument);
}

TEST(EdgeContour, VerticesNearZero)
{
	const auto chain = sample_chain(standard_blocks(1.0, 0.1), 100, 1);
	const auto c = edge_contour(chain, {-0.5, 4.0}, {-1.0, 1.0}, 46, 21);
	ASSERT_FALSE(c.lines.empty());
	for (const auto& line : c.lines)
		for (auto z : line.points) EXPECT_LE(std::abs(total_lyapunov(chain, z).L), c.vertex_tolerance);
}

TEST(EdgeContour, LowMonomerDensityEnclosesTheSpectrum)
{
	const auto chain = sample_chain(standard_blocks(1.0, 0.1), 100, 2);
	const auto c = edge_contour(chain, {-0.5, 4.0}, {-1.0, 1.0}, 91, 41);
	const auto ev = spectrum(chain, {.vectors = false, .lambda_max = std::nullopt}).eigenvalues;
	for (double l : ev) {
		if (l < 1e-9) continue; // the constant mode sits on L = 0
		bool inside = false;
		for (const auto& line : c.lines)
			if (line.closed && point_in_polygon(line.points, {l, 0.0})) inside = true;
		EXPECT_TRUE(inside) << "eigenvalue " << l;
	}
}

TEST(EdgeContour, HighMonomerDensityLeavesSomeModesOutside)
{
	const auto lib = standard_blocks(1.0, 0.45);
	const auto chain = sample_chain(lib, 100, derive_seed(3, 1));
	const auto c = edge_contour(chain, {-0.5, 4.0}, {-1.0, 1.0}, 91, 41);
	int outside = 0;
	for (double l : spectrum(chain, {.vectors = false, .lambda_max = std::nullopt}).eigenvalues) {
		if (classify(lib.blocks(), l).region != Region::Hybridisation || total_lyapunov(chain, l).L <= 0.0) continue;
		bool inside = false;
		for (const auto& line : c.lines)
			if (line.closed && point_in_polygon(line.points, {l, 0.0})) inside = true;
		outside += inside ? 0 : 1;
	}
	EXPECT_GT(outside, 0);
}

TEST(LyapunovGrid, ThreadCountDoesNotChangeValues)
{
	const auto chain = sample_chain(standard_blocks(1.0), 80, 5);
	const auto a = lyapunov_grid(chain, {0, 3}, {-1, 1}, 17, 9, 1);
	const auto b = lyapunov_grid(chain, {0, 3}, {-1, 1}, 17, 9, 4);
	EXPECT_EQ(a.values, b.values);
}
