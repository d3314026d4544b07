#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "gaugechain/capacitance.hpp"
#include "gaugechain/propagation.hpp"
#include "gaugechain/zeta.hpp"
#include "support.hpp"

using namespace gaugechain;
using namespace testing_support;

TEST(Zeta, RemovableSingularity)
{
	EXPECT_EQ(zeta(0.0), 1.0);
	EXPECT_NEAR(zeta(1e-12), 1.0, 1e-12);
	EXPECT_NEAR(zeta(-1e-12), 1.0, 1e-12);
}

TEST(Zeta, MatchesOracleAcrossThreshold)
{
	for (double z : {-50.0, -10.0, -1.0, -1e-3, -1.01e-4, -0.99e-4, -1e-7, 1e-7, 0.99e-4, 1.01e-4, 1e-3, 0.5, 2.0, 10.0, 50.0})
		EXPECT_NEAR(zeta(z), zeta_oracle(z), 1e-15 * std::max(1.0, std::abs(z))) << "z=" << z;
}

TEST(Zeta, ReflectionIdentities)
{
	for (double z : {0.1, 1.0, 10.0}) EXPECT_NEAR(zeta(z) - zeta(-z), z, 1e-14 * std::max(1.0, z));
	EXPECT_NEAR(zeta(-2.0) / zeta(2.0), std::exp(-2.0), 1e-15);
}

TEST(Zeta, LogIsStableForLargeArguments)
{
	EXPECT_NEAR(log_zeta(800.0), std::log(800.0), 1e-12);
	EXPECT_NEAR(log_zeta(-800.0), std::log(800.0) - 800.0, 1e-9);
	EXPECT_TRUE(std::isfinite(log_zeta(-1e5)));
	for (double z : {-3.0, -0.2, 0.0, 0.2, 3.0}) EXPECT_NEAR(log_zeta(z), std::log(zeta_oracle(z)), 1e-14);
}

TEST(Capacitance, MatchesDenseOracle)
{
	Rng rng{101};
	for (int trial = 0; trial < 50; ++trial) {
		const auto res = random_resonators(rng, random_size(rng, 2, 25));
		const auto chain = chain_from_resonators(res);
		const auto c = gauge_capacitance(chain).dense();
		const auto oracle = capacitance_oracle(res);
		EXPECT_LT(max_abs(c - oracle), 1e-13 * max_abs(oracle));
	}
}

TEST(Capacitance, RowsSumToZero)
{
	Rng rng{5};
	const auto chain = chain_from_resonators(random_resonators(rng, 17));
	const auto c = gauge_capacitance(chain).dense();
	EXPECT_LT(c.rowwise().sum().cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Capacitance, HermitianLimitIsWeightedLaplacian)
{
	const auto chain = assemble_chain(standard_blocks(0.0), BlockSequence{{1, 1}, 0});
	const auto c = gauge_capacitance(chain);
	// s = (1, 2, 1, 2)
	EXPECT_DOUBLE_EQ(c.diag[0], 1.0);
	EXPECT_DOUBLE_EQ(c.diag[1], 1.0 + 0.5);
	EXPECT_DOUBLE_EQ(c.diag[2], 0.5 + 1.0);
	EXPECT_DOUBLE_EQ(c.diag[3], 1.0);
	const double off[] = {-1.0, -0.5, -1.0};
	for (std::size_t i = 0; i < 3; ++i) {
		EXPECT_DOUBLE_EQ(c.upper[i], off[i]);
		EXPECT_DOUBLE_EQ(c.lower[i], off[i]);
	}
}

TEST(Capacitance, SingleResonatorHasNoGap)
{
	const auto chain = assemble_chain(standard_blocks(1.0), BlockSequence{{0}, 0});
	const auto c = gauge_capacitance(chain);
	ASSERT_EQ(c.size(), 1u);
	EXPECT_EQ(c.diag[0], 0.0);
	const auto sd = spectrum(chain);
	ASSERT_EQ(sd.size(), 1u);
	EXPECT_NEAR(sd.eigenvalues[0], 0.0, 1e-15);
}

TEST(MaterialMatrix, Values)
{
	const auto chain = assemble_chain(standard_blocks(1.0), BlockSequence{{0, 1}, 0});
	const auto v = material_matrix(chain);
	EXPECT_DOUBLE_EQ(v[0], 0.5);
	EXPECT_DOUBLE_EQ(v[1], 1.0);
	EXPECT_DOUBLE_EQ(v[2], 1.0);
	EXPECT_DOUBLE_EQ(material_matrix(chain_from_resonators({{2.0, 4.0, 1.0, 0.0}}))[0], 1.0);
}

TEST(Symmetrise, SimilarityHoldsDensely)
{
	Rng rng{77};
	for (int trial = 0; trial < 30; ++trial) {
		const auto res = random_resonators(rng, random_size(rng, 2, 20));
		const auto chain = chain_from_resonators(res);
		const auto sys = symmetrise(chain);
		const auto j = sys.matrix().dense();
		const Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(sys.logr.data(), static_cast<Eigen::Index>(sys.size())).array().exp();
		const Eigen::MatrixXd sim = r.cwiseInverse().asDiagonal() * capacitance_oracle(res) * r.asDiagonal();
		EXPECT_LT(max_abs(sim - j), 1e-10 * max_abs(j));
		EXPECT_LT(max_abs(j - j.transpose()), 1e-15 * max_abs(j));
	}
}

TEST(Symmetrise, HermitianLimit)
{
	Rng rng{8};
	const auto chain = chain_from_resonators(random_resonators(rng, 12, 0.0, 0.0));
	const auto sys = symmetrise(chain);
	for (double l : sys.logr) EXPECT_EQ(l, 0.0);
	const auto c = gauge_capacitance(chain).dense();
	EXPECT_LT(max_abs(sys.matrix().dense() - c), 1e-15);
}

TEST(Symmetrise, DecaySlope)
{
	const double gamma = 0.8;
	const auto chain = sample_chain(standard_blocks(gamma), 400, 3);
	const auto sys = symmetrise(chain);
	double sum_ell = 0.0;
	for (std::size_t i = 0; i + 1 < chain.N(); ++i) sum_ell += chain[i].ell;
	const double expected = -0.5 * gamma * sum_ell;
	// Boundary zeta factors contribute O(1).
	EXPECT_NEAR(sys.logr.back() - sys.logr.front(), expected, 2.0);
	EXPECT_TRUE(std::isfinite(sys.logr.back()));
}

TEST(Spectrum, HermitianMatchesDenseSymmetricSolve)
{
	Rng rng{9};
	for (int trial = 0; trial < 20; ++trial) {
		const auto res = random_resonators(rng, random_size(rng, 1, 30), 0.0, 0.0);
		const auto chain = chain_from_resonators(res);
		const Eigen::VectorXd v = material_oracle(res);
		const Eigen::VectorXd vs = v.cwiseSqrt();
		const Eigen::MatrixXd sym = vs.asDiagonal() * capacitance_oracle(res) * vs.asDiagonal();
		Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
		const auto sd = spectrum(chain, {.vectors = false, .lambda_max = std::nullopt});
		ASSERT_EQ(sd.size(), res.size());
		for (std::size_t k = 0; k < sd.size(); ++k)
			EXPECT_NEAR(sd.eigenvalues[k], es.eigenvalues()(static_cast<Eigen::Index>(k)), 1e-9);
	}
}

TEST(Spectrum, NonreciprocalMatchesDenseGeneralSolve)
{
	Rng rng{10};
	for (int trial = 0; trial < 20; ++trial) {
		const auto res = random_resonators(rng, random_size(rng, 1, 30), 1.0, 1.0);
		const Eigen::MatrixXd vc = material_oracle(res).asDiagonal() * capacitance_oracle(res);
		Eigen::EigenSolver<Eigen::MatrixXd> es(vc, false);
		ASSERT_EQ(es.info(), Eigen::Success);
		std::vector<double> oracle;
		for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
			EXPECT_LT(std::abs(es.eigenvalues()(k).imag()), 1e-8);
			oracle.push_back(es.eigenvalues()(k).real());
		}
		std::sort(oracle.begin(), oracle.end());
		const auto sd = spectrum(chain_from_resonators(res), {.vectors = false, .lambda_max = std::nullopt});
		for (std::size_t k = 0; k < oracle.size(); ++k) EXPECT_NEAR(sd.eigenvalues[k], oracle[k], 1e-8);
	}
}

TEST(Spectrum, GaugeVectorsSolveTheGeneralisedProblem)
{
	Rng rng{12};
	const auto res = random_resonators(rng, 25);
	const auto chain = chain_from_resonators(res);
	const auto sd = spectrum(chain);
	const Eigen::MatrixXd vc = material_oracle(res).asDiagonal() * capacitance_oracle(res);
	for (std::size_t k = 0; k < sd.size(); ++k) {
		Eigen::VectorXd u(static_cast<Eigen::Index>(res.size()));
		for (std::size_t j = 0; j < res.size(); ++j) u(static_cast<Eigen::Index>(j)) = sd.gauge[k].value(j);
		EXPECT_NEAR(u.cwiseAbs().maxCoeff(), 1.0, 1e-14);
		EXPECT_LT((vc * u - sd.eigenvalues[k] * u).cwiseAbs().maxCoeff(), 1e-9 * std::max(1.0, sd.eigenvalues[k]));
	}
}

TEST(Spectrum, ZeroModeIsConstant)
{
	const auto chain = sample_chain(standard_blocks(1.0), 50, 4);
	const auto sd = spectrum(chain);
	EXPECT_NEAR(sd.eigenvalues.front(), 0.0, 1e-12);
	for (double l : sd.gauge.front().logmag) EXPECT_NEAR(l, 0.0, 1e-8);
}

TEST(Spectrum, LongChainsStayFinite)
{
	const auto chain = sample_chain(standard_blocks(1.0), 1500, 6);
	const auto sd = spectrum(chain);
	ASSERT_EQ(sd.size(), chain.N());
	EXPECT_TRUE(sd.symvectors.allFinite());
	for (const auto& u : sd.gauge) {
		EXPECT_EQ(u.max_logmag(), 0.0);
		for (double l : u.logmag) EXPECT_FALSE(std::isnan(l));
	}
	EXPECT_TRUE(std::is_sorted(sd.eigenvalues.begin(), sd.eigenvalues.end()));
}

TEST(Spectrum, UpperBoundFiltersAndSturmAgrees)
{
	const auto chain = sample_chain(standard_blocks(1.0), 200, 8);
	const auto sys = symmetrise(chain);
	const auto all = spectrum(sys, {.vectors = false, .lambda_max = std::nullopt});
	const auto cut = spectrum(sys, {.vectors = true, .lambda_max = 1.5});
	const auto below = static_cast<std::size_t>(std::upper_bound(all.eigenvalues.begin(), all.eigenvalues.end(), 1.5) - all.eigenvalues.begin());
	EXPECT_EQ(cut.size(), below);
	EXPECT_EQ(cut.gauge.size(), below);
	EXPECT_EQ(static_cast<std::size_t>(cut.symvectors.cols()), below);
	for (double x : {-0.5, 0.1, 1.0, 1.5, 2.4, 3.0, 10.0}) {
		const auto expect = static_cast<std::size_t>(
		    std::lower_bound(all.eigenvalues.begin(), all.eigenvalues.end(), x) - all.eigenvalues.begin());
		EXPECT_EQ(eigenvalue_count_below(sys, x), expect) << "x=" << x;
	}
}

TEST(ModeProfile, ConstantsAndRamps)
{
	const auto chain = chain_from_resonators({{1, 1, 2, 0}, {1, 1, 2, 0}, {1, 1, 2, 0}});
	LogVector ones{{1, 1, 1}, {0.0, 0.0, 0.0}};
	const auto p = mode_profile(chain, ones, 1.0);
	for (double x : {-1.0, 0.0, 0.5, 1.7, 4.2, 7.0, 9.0}) EXPECT_DOUBLE_EQ(p(x), 1.0);

	const auto two = chain_from_resonators({{1, 1, 2, 0}, {1, 1, 2, 0}});
	LogVector ramp{{1, 0}, {0.0, -std::numeric_limits<double>::infinity()}};
	const auto q = mode_profile(two, ramp, 0.5);
	EXPECT_DOUBLE_EQ(q(0.5), 1.0);
	EXPECT_DOUBLE_EQ(q(1.0), 1.0);
	EXPECT_DOUBLE_EQ(q(1.5), 0.75);
	EXPECT_DOUBLE_EQ(q(2.0), 0.5);
	EXPECT_DOUBLE_EQ(q(3.0), 0.0);
	EXPECT_DOUBLE_EQ(q(10.0), 0.0);
	EXPECT_THROW(mode_profile(chain, ramp, 0.1), std::invalid_argument);
}

TEST(ModeProfile, EdgeModeSitsAtTheLeftEdge)
{
	// Low monomer density: the top mode has a negative Lyapunov exponent.
	const auto chain = sample_chain(standard_blocks(1.0, 0.1), 200, 2);
	const auto sd = spectrum(chain);
	ASSERT_LT(total_lyapunov(chain, sd.eigenvalues.back()).L, 0.0);
	const auto p = mode_profile(chain, sd, sd.size() - 1, 0.0);
	const double span = chain.x_right(chain.N() - 1);
	double best_x = 0.0, best = -1.0;
	for (std::size_t i = 0; i < p.x.size(); ++i)
		if (std::abs(p.u[i]) > best) {
			best = std::abs(p.u[i]);
			best_x = p.x[i];
		}
	EXPECT_LT(best_x, 0.25 * span);
	EXPECT_THROW(mode_profile(chain, sd, sd.size(), 0.0), std::out_of_range);
}

TEST(Tridiagonal, RejectsMalformedInput)
{
	EXPECT_THROW(symmetric_tridiagonal_eigen({}, {}), std::invalid_argument);
	EXPECT_THROW(symmetric_tridiagonal_eigen({1.0, 2.0}, {}), std::invalid_argument);
	const auto r = symmetric_tridiagonal_eigen({2.0, 2.0}, {-1.0});
	EXPECT_NEAR(r.values[0], 1.0, 1e-15);
	EXPECT_NEAR(r.values[1], 3.0, 1e-15);
}
