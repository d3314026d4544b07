#pragma once

// Tridiagonal storage and the symmetric tridiagonal eigensolver.
//
// Eigenpairs come from LAPACK's dstevr (multiple relatively robust
// representations), O(N^2) for the full spectrum with vectors.

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace gaugechain {

/// Raised when a numerical kernel fails to produce a trustworthy result.
class NumericalError : public std::runtime_error {
public:
	using std::runtime_error::runtime_error;
};

struct TridiagonalMatrix {
	std::vector<double> diag;
	std::vector<double> lower; ///< entry (i+1, i)
	std::vector<double> upper; ///< entry (i, i+1)

	[[nodiscard]] std::size_t size() const noexcept { return diag.size(); }

	[[nodiscard]] Eigen::MatrixXd dense() const
	{
		const auto n = static_cast<Eigen::Index>(diag.size());
		Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
		for (Eigen::Index i = 0; i < n; ++i) {
			m(i, i) = diag[static_cast<std::size_t>(i)];
			if (i + 1 < n) {
				m(i + 1, i) = lower[static_cast<std::size_t>(i)];
				m(i, i + 1) = upper[static_cast<std::size_t>(i)];
			}
		}
		return m;
	}
};

struct SymmetricTridiagonalEigen {
	std::vector<double> values;  ///< ascending
	Eigen::MatrixXd vectors;     ///< column k belongs to values[k]; empty if not requested
};

struct EigenRequest {
	bool vectors = true;
	std::optional<double> upper_bound; ///< keep only eigenvalues <= bound
};

/// Eigenpairs of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e`.
inline SymmetricTridiagonalEigen symmetric_tridiagonal_eigen(std::vector<double> d, std::vector<double> e,
                                                             const EigenRequest& request = {})
{
	const auto n = static_cast<lapack_int>(d.size());
	if (n == 0) throw std::invalid_argument("symmetric_tridiagonal_eigen: empty matrix");
	if (e.size() + 1 != d.size()) throw std::invalid_argument("symmetric_tridiagonal_eigen: size mismatch");
	e.push_back(0.0); // dstevr uses e as workspace of length n

	SymmetricTridiagonalEigen out;
	std::vector<double> w(static_cast<std::size_t>(n));
	std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
	lapack_int found = 0;
	const char jobz = request.vectors ? 'V' : 'N';
	if (request.vectors) out.vectors.resize(n, n); // column-major, as LAPACK expects
	const lapack_int info = LAPACKE_dstevr(LAPACK_COL_MAJOR, jobz, 'A', n, d.data(), e.data(), 0.0, 0.0, 0, 0, 0.0,
	                                       &found, w.data(), request.vectors ? out.vectors.data() : nullptr,
	                                       request.vectors ? n : 1, isuppz.data());
	if (info != 0) throw NumericalError("dstevr failed with info = " + std::to_string(info));

	// A value window is applied afterwards: for these matrices dstevr's
	// windowed path (bisection) is slower than the full MRRR solve.
	if (request.upper_bound) {
		const auto stop = std::upper_bound(w.begin(), w.begin() + found, *request.upper_bound);
		found = static_cast<lapack_int>(stop - w.begin());
	}
	w.resize(static_cast<std::size_t>(found));
	out.values = std::move(w);
	if (request.vectors) out.vectors.conservativeResize(n, found);
	return out;
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
inline std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x)
{
	std::size_t count = 0;
	double q = 1.0;
	constexpr double tiny = 1e-300;
	for (std::size_t i = 0; i < d.size(); ++i) {
		const double e2 = i == 0 ? 0.0 : e[i - 1] * e[i - 1];
		q = d[i] - x - (i == 0 ? 0.0 : e2 / q);
		if (q == 0.0) q = -tiny;
		if (q < 0.0) ++count;
	}
	return count;
}

} // namespace gaugechain
