#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "lightstore/detail/fft.hpp"
#include "lightstore/detail/quadrature.hpp"
#include "lightstore/units.hpp"

namespace {

using cplx = std::complex<double>;
using lightstore::pi;

// O(n^2) reference transform, written independently of the fft.
std::vector<cplx> dft_reference(const std::vector<cplx>& x) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t m = 0; m < n; ++m)
      out[k] += x[m] * std::polar(1.0, -2.0 * pi * static_cast<double>(k) *
                                           static_cast<double>(m) / static_cast<double>(n));
  return out;
}

std::vector<cplx> random_signal(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<cplx> x(n);
  for (auto& v : x) v = {u(rng), u(rng)};
  return x;
}

}  // namespace

TEST_CASE("fft matches the direct transform") {
  const auto x = random_signal(16, 12345);
  const auto fast = lightstore::detail::fft(x);
  const auto slow = dft_reference(x);
  for (std::size_t k = 0; k < x.size(); ++k)
    REQUIRE(std::abs(fast[k] - slow[k]) < 1e-12);
}

TEST_CASE("a positive-frequency tone lands in its own bin") {
  // x_n = exp(+2 pi i m n / N) must produce X_m = N: the forward transform
  // analyses with exp(-i w t). Everything downstream assumes this sign.
  const std::size_t n = 32, m = 3;
  std::vector<cplx> x(n);
  for (std::size_t i = 0; i < n; ++i)
    x[i] = std::polar(1.0, 2.0 * pi * static_cast<double>(m * i) / static_cast<double>(n));
  const auto X = lightstore::detail::fft(x);
  REQUIRE(std::abs(X[m] - cplx(static_cast<double>(n), 0.0)) < 1e-10);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == m) continue;
    REQUIRE(std::abs(X[k]) < 1e-10);
  }
}

TEST_CASE("inverse undoes forward") {
  const auto x = random_signal(64, 999);
  const auto back = lightstore::detail::ifft(lightstore::detail::fft(x));
  for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(std::abs(back[i] - x[i]) < 1e-13);
}

TEST_CASE("transform preserves energy") {
  const auto x = random_signal(128, 7);
  const auto X = lightstore::detail::fft(x);
  double ex = 0.0, eX = 0.0;
  for (const auto& v : x) ex += std::norm(v);
  for (const auto& v : X) eX += std::norm(v);
  REQUIRE(eX / static_cast<double>(x.size()) == Catch::Approx(ex).epsilon(1e-12));
}

TEST_CASE("non power-of-two lengths are refused") {
  std::vector<cplx> x(12, 1.0);
  REQUIRE_THROWS_AS(lightstore::detail::fft_radix2(x, true), std::invalid_argument);
}

TEST_CASE("kronrod panel is exact on polynomials") {
  const auto quartic = [](double t) { return cplx(t * t * t * t, 0.0); };
  const auto r = lightstore::detail::gauss_kronrod_15(quartic, 0.0, 1.0);
  REQUIRE(r.value.real() == Catch::Approx(0.2).epsilon(1e-14));
  REQUIRE(std::abs(r.value.imag()) < 1e-15);
  REQUIRE(r.error < 1e-12);
}

TEST_CASE("adaptive integration hits known values") {
  const auto sine = [](double t) { return cplx(std::sin(t), 0.0); };
  const auto rs = lightstore::detail::adaptive_integrate(sine, {0.0, pi}, 1e-12);
  REQUIRE(rs.converged);
  REQUIRE(rs.value.real() == Catch::Approx(2.0).epsilon(1e-12));

  const auto gauss = [](double t) { return cplx(std::exp(-t * t), 0.0); };
  const auto rg = lightstore::detail::adaptive_integrate(gauss, {-8.0, 0.0, 8.0}, 1e-13);
  REQUIRE(rg.converged);
  REQUIRE(rg.value.real() == Catch::Approx(std::sqrt(pi)).epsilon(1e-13));

  const auto osc = [](double t) { return std::polar(1.0, t); };  // e^{i t}
  const auto ro = lightstore::detail::adaptive_integrate(osc, {0.0, 1.0}, 1e-13);
  REQUIRE(ro.value.real() == Catch::Approx(std::sin(1.0)).epsilon(1e-12));
  REQUIRE(ro.value.imag() == Catch::Approx(1.0 - std::cos(1.0)).epsilon(1e-12));
}

TEST_CASE("a kink between breakpoints still converges") {
  const auto vee = [](double t) { return cplx(std::abs(t), 0.0); };
  const auto r = lightstore::detail::adaptive_integrate(vee, {-1.0, 1.0}, 1e-10);
  REQUIRE(r.converged);
  REQUIRE(r.value.real() == Catch::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("an integrable singularity at shallow depth reports non-convergence") {
  const auto spike = [](double t) { return cplx(1.0 / std::sqrt(std::abs(t - 0.3)), 0.0); };
  const auto r = lightstore::detail::adaptive_integrate(spike, {0.0, 1.0}, 1e-12, 4);
  REQUIRE_FALSE(r.converged);
  REQUIRE(r.error > 1e-12);
}
