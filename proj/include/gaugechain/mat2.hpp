#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <type_traits>

namespace gaugechain {

template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};

/// 2x2 matrix over double or std::complex<double>.
template <typename T>
struct Mat2 {
	T a11{1}, a12{0}, a21{0}, a22{1};

	static constexpr Mat2 identity() { return {T(1), T(0), T(0), T(1)}; }

	[[nodiscard]] T det() const { return a11 * a22 - a12 * a21; }
	[[nodiscard]] T trace() const { return a11 + a22; }

	[[nodiscard]] Mat2 inverse() const
	{
		const T d = det();
		return {a22 / d, -a12 / d, -a21 / d, a11 / d};
	}

	[[nodiscard]] std::array<T, 2> operator*(const std::array<T, 2>& x) const
	{
		return {a11 * x[0] + a12 * x[1], a21 * x[0] + a22 * x[1]};
	}

	Mat2& operator*=(const T& s)
	{
		a11 *= s;
		a12 *= s;
		a21 *= s;
		a22 *= s;
		return *this;
	}

	friend Mat2 operator*(const Mat2& x, const Mat2& y)
	{
		return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
		        x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
	}
	friend Mat2 operator*(const T& s, Mat2 m) { return m *= s; }
	friend Mat2 operator-(const Mat2& x, const Mat2& y)
	{
		return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
	}

	template <typename U>
	[[nodiscard]] Mat2<U> cast() const
	{
		return {U(a11), U(a12), U(a21), U(a22)};
	}
};

using RealMat2 = Mat2<double>;
using ComplexMat2 = Mat2<std::complex<double>>;

template <typename T>
double abs2(const T& x)
{
	if constexpr (is_complex<T>::value) return std::norm(x);
	else return x * x;
}

template <typename T>
double max_abs_entry(const Mat2<T>& m)
{
	using std::abs;
	return std::max({abs(m.a11), abs(m.a12), abs(m.a21), abs(m.a22)});
}

/// Largest singular value, via sigma_max^2 = (F^2 + sqrt(F^4 - 4|det|^2)) / 2.
template <typename T>
double spectral_norm(const Mat2<T>& m)
{
	const double f2 = abs2(m.a11) + abs2(m.a12) + abs2(m.a21) + abs2(m.a22);
	const double d2 = abs2(m.det());
	const double disc = std::max(0.0, f2 * f2 - 4.0 * d2);
	return std::sqrt(0.5 * (f2 + std::sqrt(disc)));
}

/// Both eigenvalues, ordered by increasing modulus.
template <typename T>
std::array<std::complex<double>, 2> eigenvalues(const Mat2<T>& m)
{
	using C = std::complex<double>;
	const C tr = C(m.trace());
	const C dt = C(m.det());
	const C root = std::sqrt(tr * tr - 4.0 * dt);
	// Avoid cancellation: compute the larger root first, the smaller from det.
	C big = std::abs(tr + root) >= std::abs(tr - root) ? 0.5 * (tr + root) : 0.5 * (tr - root);
	C small = big != C(0) ? dt / big : C(0);
	return {small, big};
}

template <typename T>
double spectral_radius(const Mat2<T>& m)
{
	return std::abs(eigenvalues(m)[1]);
}

} // namespace gaugechain
