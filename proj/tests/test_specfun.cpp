#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

#include "jackmc/jack.hpp"
#include "jackmc/partitions.hpp"
#include "jackmc/specfun.hpp"

using jackmc::cplx;
using jackmc::HypergeomParams;
using jackmc::Partition;
using jackmc::RatioIdentity;
using jackmc::SphericalKind;

namespace {

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

double rel_err(cplx got, cplx want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

cplx ipow(cplx base, int e) {
  cplx acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

// ---------------------------------------------------------------------------
// Quadrature oracles.  All multi-dimensional integrals run over the ordered
// region x_1 <= ... <= x_n (times n!) with the substitution x = y^2 followed
// by increment coordinates y_j = tau_1 + ... + tau_j, which keeps the
// integrands smooth for every weight exponent used below (including -1/2).
// ---------------------------------------------------------------------------

struct GaussLegendreRule {
  std::vector<double> node;    // on [0, 1]
  std::vector<double> weight;
};

GaussLegendreRule gauss_legendre(int n) {
  GaussLegendreRule rule;
  rule.node.resize(n);
  rule.weight.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = t;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-15) break;
    }
    rule.node[i] = 0.5 * (t + 1.0);
    rule.weight[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // = (2/((1-t^2)P'^2))/2
  }
  return rule;
}

using ExtraFactor = std::function<double(const std::vector<double>&)>;

// W_{beta,n}(a) with an optional extra factor:
//   int_{[0,inf)^n} prod x^a e^{-x} prod_{j<k} |x_k - x_j|^beta extra(x) dx.
double selberg_quad(double beta, int n, double a, const ExtraFactor& extra,
                    int pts) {
  const GaussLegendreRule rule = gauss_legendre(pts);
  std::vector<int> idx(n, 0);
  std::vector<double> y(n);
  std::vector<double> x(n);
  double total = 0.0;
  for (;;) {
    double jac = 1.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double sigma = rule.node[idx[j]];
      const double tau = -2.0 * std::log1p(-sigma);  // increment of y
      jac *= rule.weight[idx[j]] * 2.0 / (1.0 - sigma);
      acc += tau;
      y[j] = acc;
      x[j] = acc * acc;
    }
    double f = jac;
    for (int j = 0; j < n; ++j)
      f *= 2.0 * std::pow(y[j], 2.0 * a + 1.0) * std::exp(-x[j]);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) f *= std::pow(x[k] - x[j], beta);
    if (extra) f *= extra(x);
    total += f;
    int carry = 0;
    while (carry < n && ++idx[carry] == pts) idx[carry++] = 0;
    if (carry == n) break;
  }
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  return nfact * total;
}

// int_{[0,inf)^n} prod x^{b1} (1+x)^{-p} prod |x_k - x_j|^beta extra(x) dx,
// heavy-tailed weight; increments mapped through tau = v/(1-v).
double jacobi_heavy_quad(double beta, int n, double b1, double p,
                         const ExtraFactor& extra, int pts) {
  const GaussLegendreRule rule = gauss_legendre(pts);
  std::vector<int> idx(n, 0);
  std::vector<double> y(n);
  std::vector<double> x(n);
  double total = 0.0;
  for (;;) {
    double jac = 1.0;
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      const double v = rule.node[idx[j]];
      const double tau = v / (1.0 - v);
      jac *= rule.weight[idx[j]] / ((1.0 - v) * (1.0 - v));
      acc += tau;
      y[j] = acc;
      x[j] = acc * acc;
    }
    double f = jac;
    for (int j = 0; j < n; ++j)
      f *= 2.0 * std::pow(y[j], 2.0 * b1 + 1.0) *
           std::pow(1.0 + x[j], -p);
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) f *= std::pow(x[k] - x[j], beta);
    if (extra) f *= extra(x);
    total += f;
    int carry = 0;
    while (carry < n && ++idx[carry] == pts) idx[carry++] = 0;
    if (carry == n) break;
  }
  double nfact = 1.0;
  for (int i = 2; i <= n; ++i) nfact *= i;
  return nfact * total;
}

// int_{[0,1]^n} prod x^{a1} (1-x)^{a2} prod |x_k - x_j|^beta extra(x) dx for
// n <= 2, via the ordered simplex map x_2 = xi_2, x_1 = xi_1 xi_2 (a1 >= 0).
double jacobi01_quad(double beta, int n, double a1, double a2,
                     const ExtraFactor& extra, int pts) {
  REQUIRE(a1 >= 0.0);
  REQUIRE(n <= 2);
  const GaussLegendreRule rule = gauss_legendre(pts);
  double total = 0.0;
  if (n == 1) {
    for (int i = 0; i < pts; ++i) {
      const double x = rule.node[i];
      double f = rule.weight[i] * std::pow(x, a1) * std::pow(1.0 - x, a2);
      if (extra) {
        std::vector<double> xv{x};
        f *= extra(xv);
      }
      total += f;
    }
    return total;
  }
  for (int i = 0; i < pts; ++i) {
    for (int j = 0; j < pts; ++j) {
      const double xi1 = rule.node[i];
      const double xi2 = rule.node[j];
      const double x1 = xi1 * xi2;
      const double x2 = xi2;
      double f = rule.weight[i] * rule.weight[j] * xi2;  // Jacobian
      f *= std::pow(x1, a1) * std::pow(1.0 - x1, a2);
      f *= std::pow(x2, a1) * std::pow(1.0 - x2, a2);
      f *= std::pow(x2 - x1, beta);
      if (extra) {
        std::vector<double> xv{x1, x2};
        f *= extra(xv);
      }
      total += f;
    }
  }
  return 2.0 * total;
}

double jack_C_real(const Partition& kappa, double alpha,
                   const std::vector<double>& x) {
  std::vector<cplx> xc(x.begin(), x.end());
  return jackmc::jack_C(kappa, alpha, xc).real();
}

// Classical terminating Gauss series sum_{m=0}^k (a)_m (b)_m / ((c)_m m!) s^m.
cplx gauss_2f1_scalar(int k, double a2, double b1, cplx s) {
  cplx sum = 1.0;
  cplx term = 1.0;
  for (int m = 0; m < k; ++m) {
    term *= (static_cast<double>(-k) + m) * (a2 + m) / ((b1 + m) * (m + 1));
    term *= s;
    sum += term;
  }
  return sum;
}

// Direct 2F1 term sum over an enlarged box; used to confirm that the
// termination box in the library is not clipping nonzero terms.
cplx hypergeom_manual(double a1, double a2, double b1, double alpha, cplx s,
                      int N, int box_part) {
  cplx sum = 0.0;
  for (const Partition& kappa : jackmc::enumerate_in_box(box_part, N)) {
    const int d = jackmc::weight(kappa);
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    const double num = jackmc::pochhammer_general(a1, kappa, alpha) *
                       jackmc::pochhammer_general(a2, kappa, alpha);
    if (num == 0.0) continue;
    const double den = jackmc::pochhammer_general(b1, kappa, alpha);
    sum += num / den / fact * ipow(s, d) *
           jackmc::jack_C_at_ones(kappa, alpha, N);
  }
  return sum;
}

// The alternative spherical evaluation through <C_kappa(Z Z^dagger)> Jack
// averages (valid for the symmetric and self-dual kinds):
//   s^{kN} sum_kappa (([-k]_kappa)^2 / |kappa|!) s^{-|kappa|}
//     jacobi_type_jack_average(kappa, alpha, N, 0, b2) / [u]_kappa,
// with (alpha, b2, u) = (2, K-1, (N+1)/2) or (1/2, 2K+2, 2N-1).
double spherical_via_jack_average(SphericalKind kind, int N, int K, int k,
                                  double s) {
  const bool sym = (kind == SphericalKind::kSymmetric);
  const double alpha = sym ? 2.0 : 0.5;
  const double b2 = sym ? static_cast<double>(K - 1) : 2.0 * K + 2.0;
  const double u = sym ? (N + 1.0) / 2.0 : 2.0 * N - 1.0;
  double sum = 0.0;
  for (const Partition& kappa : jackmc::enumerate_in_box(k, N)) {
    const int d = jackmc::weight(kappa);
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    const double pk = jackmc::pochhammer_general(static_cast<double>(-k),
                                                 kappa, alpha);
    if (pk == 0.0) continue;
    sum += pk * pk / fact * std::pow(s, -d) *
           jackmc::jacobi_type_jack_average(kappa, alpha, N, 0.0, b2) /
           jackmc::pochhammer_general(u, kappa, alpha);
  }
  return std::pow(s, k * N) * sum;
}

}  // namespace

TEST_CASE("truncated exponential") {
  CHECK(jackmc::truncated_exp(0, 3.7) == 1.0);
  CHECK(rel_err(jackmc::truncated_exp(2, 1.0), 2.5) < 1e-15);
  CHECK(std::abs(jackmc::truncated_exp(30, 1.0) - std::exp(1.0)) < 1e-12);
  const cplx x(0.3, 0.4);
  const cplx direct = 1.0 + x + x * x / 2.0 + x * x * x / 6.0;
  CHECK(rel_err(jackmc::truncated_exp(3, x), direct) < 1e-15);
  CHECK_THROWS_AS(jackmc::truncated_exp(-1, 1.0), std::invalid_argument);
}

TEST_CASE("pair averages: closed forms at small N") {
  const std::vector<cplx> ys{cplx(0.15), cplx(0.5, -0.3), cplx(-0.2, 0.7)};
  for (cplx y : ys) {
    CHECK(rel_err(jackmc::gs_pair_exact(1, y), 1.0 + y) < 1e-14);
    CHECK(rel_err(jackmc::gs_pair_exact(2, y),
                  1.0 + 4.0 / 3.0 * y + 2.0 / 3.0 * y * y) < 1e-14);
    CHECK(rel_err(jackmc::gqa_pair_exact(1, y), 1.0 + 2.0 * y + y * y / 2.0) <
          1e-14);
    for (int N = 1; N <= 4; ++N)
      CHECK(rel_err(jackmc::ginue_pair_exact(N, y),
                    jackmc::truncated_exp(N, y)) == 0.0);
  }
  CHECK(jackmc::pair_normalization_gs(1) == 1.0);
  CHECK(jackmc::pair_normalization_gs(2) == 1.5);
  CHECK(jackmc::pair_normalization_gs(3) == 3.0);
  CHECK(jackmc::pair_normalization_gqa(1) == 2.0);
  CHECK(jackmc::pair_normalization_gqa(2) == 24.0);
  CHECK(jackmc::pair_normalization_ginue(3) == 6.0);
  CHECK_THROWS_AS(jackmc::gs_pair_exact(0, cplx(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(jackmc::gqa_pair_exact(0, cplx(0.1)), std::invalid_argument);
}

TEST_CASE("hypergeometric 2F1 of matrix argument") {
  SUBCASE("N = 1 reduces to the classical Gauss series for every alpha") {
    const cplx s(0.4, -0.3);
    for (double alpha : {0.5, 1.0, 2.0}) {
      for (int k = 1; k <= 3; ++k) {
        const cplx got = jackmc::hypergeom_2f1_jack(
            HypergeomParams{-static_cast<double>(k), 1.7, -5.3, alpha, s, 1});
        CHECK(rel_err(got, gauss_2f1_scalar(k, 1.7, -5.3, s)) < 1e-13);
      }
    }
  }
  SUBCASE("a1 = 0 gives 1, non-integer a1 is rejected") {
    CHECK(jackmc::hypergeom_2f1_jack(
              HypergeomParams{0.0, 2.0, 3.0, 1.0, cplx(0.7), 3}) == cplx(1.0));
    CHECK_THROWS_AS(jackmc::hypergeom_2f1_jack(
                        HypergeomParams{-1.5, 2.0, 3.0, 1.0, cplx(0.7), 3}),
                    std::invalid_argument);
  }
  SUBCASE("termination: enlarging the box does not change the value") {
    const cplx s(0.6, 0.2);
    const cplx got = jackmc::hypergeom_2f1_jack(
        HypergeomParams{-2.0, -4.5, -9.0, 2.0, s, 2});
    const cplx manual = hypergeom_manual(-2.0, -4.5, -9.0, 2.0, s, 2, 4);
    CHECK(rel_err(got, manual) < 1e-13);
  }
  SUBCASE("vanishing denominator Pochhammer inside the box throws") {
    CHECK_THROWS_AS(jackmc::hypergeom_2f1_jack(
                        HypergeomParams{-2.0, -5.7, 0.5, 2.0, cplx(0.3), 2}),
                    std::domain_error);
  }
  SUBCASE("matches the Jacobi ensemble average it resums") {
    // 2F1^(2)(-r, -b; -c; (s)^N) = <prod_l (1 - x_l s)^N> over
    // ME_{4,r}[x^{a1}(1-x)^{a2}], a1 = -1+(b-r+1)*2, a2 = -1+(c-b-r+1)*2.
    const int r = 2;
    const int b = 2;
    const int c = 8;
    const double a1 = -1.0 + (b - r + 1) * 2.0;
    const double a2 = -1.0 + (c - b - r + 1) * 2.0;
    const double norm = jacobi01_quad(4.0, r, a1, a2, nullptr, 96);
    for (int N = 1; N <= 3; ++N) {
      for (double s : {0.3, -0.7}) {
        const ExtraFactor f = [&](const std::vector<double>& x) {
          double v = 1.0;
          for (double xl : x) v *= std::pow(1.0 - xl * s, N);
          return v;
        };
        const double quad = jacobi01_quad(4.0, r, a1, a2, f, 96) / norm;
        const cplx sum = jackmc::hypergeom_2f1_jack(HypergeomParams{
            -static_cast<double>(r), -static_cast<double>(b),
            -static_cast<double>(c), 2.0, cplx(s), N});
        CHECK(rel_err(sum, cplx(quad)) < 1e-8);
      }
    }
  }
}

TEST_CASE("Jack averages over the Laguerre gas match quadrature") {
  const std::vector<Partition> kappas{{1}, {2}, {1, 1}, {2, 1}};
  for (double beta : {1.0, 2.0, 4.0}) {
    const double alpha = 2.0 / beta;
    for (double a : {0.0, 1.0, -0.5}) {
      const double norm = selberg_quad(beta, 2, a, nullptr, 96);
      for (const Partition& kappa : kappas) {
        const ExtraFactor f = [&](const std::vector<double>& x) {
          return jack_C_real(kappa, alpha, x);
        };
        const double quad = selberg_quad(beta, 2, a, f, 96) / norm;
        const double formula = jackmc::laguerre_jack_average(kappa, alpha, 2, a);
        CHECK(rel_err(quad, formula) < 1e-6);
      }
    }
  }
  // One three-variable case.
  {
    const double norm = selberg_quad(1.0, 3, 0.0, nullptr, 64);
    const ExtraFactor f = [](const std::vector<double>& x) {
      return x[0] + x[1] + x[2];
    };
    const double quad = selberg_quad(1.0, 3, 0.0, f, 64) / norm;
    CHECK(rel_err(quad, jackmc::laguerre_jack_average({1}, 2.0, 3, 0.0)) <
          1e-5);
  }
  // N = 1: the average reduces to a gamma-function moment ratio.
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (double a : {0.0, 1.0, -0.5}) {
      for (int m = 1; m <= 4; ++m) {
        const double want =
            jackmc::jack_C_at_ones({m}, alpha, 1) *
            std::exp(std::lgamma(a + 1.0 + m) - std::lgamma(a + 1.0));
        CHECK(rel_err(jackmc::laguerre_jack_average({m}, alpha, 1, a), want) <
              1e-12);
      }
    }
  }
}

TEST_CASE("Jack averages over the heavy-tailed Jacobi gas match quadrature") {
  // Weight lambda^{b1} (1+lambda)^{-b1-b2-2-2(N-1)/alpha}.
  for (double alpha : {0.5, 2.0}) {
    const double beta = 2.0 / alpha;
    const double b1 = 0.0;
    const double b2 = 9.0;
    const int N = 2;
    const double p = b1 + b2 + 2.0 + 2.0 * (N - 1) / alpha;
    const double norm = jacobi_heavy_quad(beta, N, b1, p, nullptr, 96);
    for (const Partition& kappa : {Partition{1}, Partition{2}, Partition{1, 1}}) {
      const ExtraFactor f = [&](const std::vector<double>& x) {
        return jack_C_real(kappa, alpha, x);
      };
      const double quad = jacobi_heavy_quad(beta, N, b1, p, f, 96) / norm;
      const double formula =
          jackmc::jacobi_type_jack_average(kappa, alpha, N, b1, b2);
      CHECK(rel_err(quad, formula) < 1e-6);
    }
  }
  // N = 1 closed form: <x^m> = Gamma ratios of the beta-prime density.
  for (double b2 : {8.0, 11.5}) {
    for (int m = 1; m <= 3; ++m) {
      const double b1 = 0.7;
      const double want =
          std::exp(std::lgamma(b1 + 1.0 + m) - std::lgamma(b1 + 1.0) +
                   std::lgamma(b2 + 1.0 - m) - std::lgamma(b2 + 1.0));
      const double got = jackmc::jacobi_type_jack_average({m}, 1.3, 1, b1, b2) /
                         jackmc::jack_C_at_ones({m}, 1.3, 1);
      CHECK(rel_err(got, want) < 1e-12);
    }
  }
  CHECK_THROWS_AS(jackmc::jacobi_type_jack_average({2}, 1.0, 2, 0.0, 1.0),
                  std::domain_error);
}

TEST_CASE("Selberg integral: gamma product vs quadrature") {
  CHECK(rel_err(jackmc::selberg_laguerre(2.0, 2, 0.0), 2.0) < 1e-13);
  CHECK(rel_err(jackmc::selberg_laguerre(4.0, 2, 0.0),
                12.0 * std::tgamma(1.0) * std::tgamma(3.0)) < 1e-13);
  CHECK(rel_err(jackmc::selberg_laguerre(4.0, 2, 1.0),
                12.0 * std::tgamma(2.0) * std::tgamma(4.0)) < 1e-13);
  for (double beta : {1.0, 2.0, 4.0}) {
    for (int n : {1, 2, 3}) {
      for (double a : {0.0, 1.0, -0.5}) {
        const int pts = (n == 3) ? 64 : 96;
        const double quad = selberg_quad(beta, n, a, nullptr, pts);
        CHECK(rel_err(jackmc::selberg_laguerre(beta, n, a), quad) < 1e-6);
      }
    }
  }
  CHECK_THROWS_AS(jackmc::selberg_laguerre(2.0, 2, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(jackmc::selberg_laguerre(-1.0, 2, 0.0),
                  std::invalid_argument);
}

TEST_CASE("determinantal Laguerre averages") {
  SUBCASE("k = 1 against the exact binomial/gamma expansion") {
    for (int N : {1, 3, 5}) {
      for (double beta : {1.0, 2.0, 4.0}) {
        for (double a : {0.0, 1.0, -0.5}) {
          for (double s : {0.0, 0.3, 2.0}) {
            double want = 0.0;
            double binom = 1.0;
            for (int j = 0; j <= N; ++j) {
              if (j > 0) binom *= static_cast<double>(N - j + 1) / j;
              want += binom * std::pow(s, N - j) *
                      std::exp(std::lgamma(a + 1.0 + j) - std::lgamma(a + 1.0));
            }
            const double got = jackmc::det_average_laguerre(1, N, beta, a, s);
            CHECK(rel_err(got, want) < 1e-12);
          }
        }
      }
    }
  }
  SUBCASE("rate parameter c rescales the gamma moments") {
    for (double c : {0.5, 2.0}) {
      const int N = 3;
      const double a = 1.0;
      const double s = 0.7;
      double want = 0.0;
      double binom = 1.0;
      for (int j = 0; j <= N; ++j) {
        if (j > 0) binom *= static_cast<double>(N - j + 1) / j;
        want += binom * std::pow(s, N - j) *
                std::exp(std::lgamma(a + 1.0 + j) - std::lgamma(a + 1.0)) /
                std::pow(c, j);
      }
      CHECK(rel_err(jackmc::det_average_laguerre(1, N, 2.0, a, s, c), want) <
            1e-12);
    }
  }
  SUBCASE("k = 2 against two-dimensional quadrature") {
    for (double beta : {1.0, 2.0, 4.0}) {
      for (double a : {0.0, -0.5}) {
        const double norm = selberg_quad(beta, 2, a, nullptr, 96);
        for (int N : {2, 3}) {
          for (double s : {0.4, 1.3}) {
            const ExtraFactor f = [&](const std::vector<double>& x) {
              return std::pow((s + x[0]) * (s + x[1]), N);
            };
            const double quad = selberg_quad(beta, 2, a, f, 96) / norm;
            const double got = jackmc::det_average_laguerre(2, N, beta, a, s);
            CHECK(rel_err(got, quad) < 1e-6);
          }
        }
      }
    }
  }
  SUBCASE("s = 0 collapses to a Selberg-integral ratio") {
    for (int k : {1, 2, 3}) {
      for (int N : {1, 2, 5, 20}) {
        for (double beta : {1.0, 2.0, 4.0}) {
          for (double a : {0.0, 1.0, -0.5}) {
            const double want =
                std::exp(jackmc::log_selberg_laguerre(beta, k, a + N) -
                         jackmc::log_selberg_laguerre(beta, k, a));
            const double got = jackmc::det_average_laguerre(k, N, beta, a, 0.0);
            CHECK(rel_err(got, want) < 1e-11);
          }
        }
      }
    }
  }
  SUBCASE("large s: monic leading behavior") {
    const double s = 1e8;
    const double got = jackmc::det_average_laguerre(2, 2, 4.0, 0.0, s);
    CHECK(std::abs(got / std::pow(s, 4) - 1.0) < 1e-5);
  }
  CHECK_THROWS_AS(jackmc::det_average_laguerre(0, 1, 2.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(jackmc::det_average_laguerre(1, 1, 2.0, -1.5, 1.0),
                  std::invalid_argument);
}

TEST_CASE("duality sums reproduce the exact pair averages at k = 1") {
  const cplx z(0.5, 0.2);
  const cplx w(0.3, -0.4);
  const cplx y = z * std::conj(w);
  for (int N = 1; N <= 3; ++N) {
    const cplx want =
        jackmc::pair_normalization_gs(N) * jackmc::gs_pair_exact(N, y);
    const cplx got = jackmc::duality_rhs_jack_sum_gs({z}, {w}, N);
    CHECK(rel_err(got, want) < 1e-11);
  }
  for (int N = 1; N <= 3; ++N) {
    // k = 1 half-power pair average: duplicated arguments below give the
    // full-power closed form; here first check with real positive y against
    // the k = 1 expansion sum_{m} y^{N-m} C(N,m) (2m)!/(2^m m!).
    const cplx zr(0.7);
    const cplx wr(0.6);
    const cplx yr = zr * std::conj(wr);
    cplx want = 0.0;
    double binom = 1.0;
    double fct = 1.0;  // (2m)!/(2^m m!)
    for (int m = 0; m <= N; ++m) {
      if (m > 0) {
        binom *= static_cast<double>(N - m + 1) / m;
        fct *= (2.0 * m - 1.0);
      }
      want += ipow(yr, N - m) * binom * fct;
    }
    const cplx got = jackmc::duality_rhs_jack_sum_gqa({zr}, {wr}, N);
    CHECK(rel_err(got, want) < 1e-12);
  }
}

TEST_CASE("self-dual duality sum: duplicated arguments give full powers") {
  // det(z - Z) = det^(1/2)(z - Z)^2 on a doubly degenerate spectrum, so the
  // 2k-argument sum with duplicated lists is the full-power pair average,
  // whose closed form is (2N)! gqa_pair_exact.
  const cplx z(0.45, 0.15);
  const cplx w(0.25, -0.35);
  const cplx y = z * std::conj(w);
  for (int N = 1; N <= 2; ++N) {
    const cplx want =
        jackmc::pair_normalization_gqa(N) * jackmc::gqa_pair_exact(N, y);
    const cplx got = jackmc::duality_rhs_jack_sum_gqa({z, z}, {w, w}, N);
    CHECK(rel_err(got, want) < 1e-9);
  }
}

TEST_CASE("duality sums: symmetry and zero arguments") {
  SUBCASE("permutation invariance in both argument lists") {
    const std::vector<cplx> z{{0.5, 0.1}, {-0.3, 0.4}, {0.2, -0.6}};
    const std::vector<cplx> w{{0.7, -0.2}, {0.1, 0.3}, {-0.4, -0.1}};
    const std::vector<cplx> zp{z[2], z[0], z[1]};
    const std::vector<cplx> wp{w[1], w[2], w[0]};
    const cplx a = jackmc::duality_rhs_jack_sum_gs(z, w, 2);
    const cplx b = jackmc::duality_rhs_jack_sum_gs(zp, wp, 2);
    CHECK(rel_err(a, b) < 1e-12);
    const cplx c = jackmc::duality_rhs_jack_sum_gqa(z, w, 2);
    const cplx d = jackmc::duality_rhs_jack_sum_gqa(zp, wp, 2);
    CHECK(rel_err(c, d) < 1e-12);
  }
  SUBCASE("all-zero arguments recover the normalization constants") {
    for (int N = 1; N <= 3; ++N) {
      const cplx gs = jackmc::duality_rhs_jack_sum_gs({cplx(0.0)}, {cplx(0.0)}, N);
      CHECK(rel_err(gs, cplx(jackmc::pair_normalization_gs(N))) < 1e-9);
    }
    for (int N = 1; N <= 2; ++N) {
      const cplx gqa = jackmc::duality_rhs_jack_sum_gqa({cplx(0.0), cplx(0.0)},
                                                        {cplx(0.0), cplx(0.0)}, N);
      CHECK(rel_err(gqa, cplx(jackmc::pair_normalization_gqa(N))) < 1e-9);
    }
  }
  SUBCASE("partial zeros agree with an explicit shifted extrapolation") {
    const std::vector<cplx> z{{0.4, 0.1}, {0.0, 0.0}};
    const std::vector<cplx> w{{0.2, 0.0}, {-0.3, 0.2}};
    const cplx got = jackmc::duality_rhs_jack_sum_gs(z, w, 1);
    const double h = 1e-4;
    const auto at = [&](double shift) {
      std::vector<cplx> zs = z;
      zs[1] = cplx(shift);
      return jackmc::duality_rhs_jack_sum_gs(zs, w, 1);
    };
    const cplx manual = 3.0 * at(h) - 3.0 * at(2 * h) + at(3 * h);
    CHECK(rel_err(got, manual) < 1e-8);
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(jackmc::duality_rhs_jack_sum_gs({cplx(1.0)}, {}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(jackmc::duality_rhs_jack_sum_gs({cplx(1.0)}, {cplx(1.0)}, 0),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        jackmc::duality_rhs_jack_sum_gs(std::vector<cplx>(5, cplx(1.0)),
                                        std::vector<cplx>(5, cplx(1.0)), 5),
        std::domain_error);
  }
}

TEST_CASE("spherical moments: closed forms, cross-checks, and validation") {
  SUBCASE("k = 1, N = 1 closed forms for all four kinds") {
    for (int K : {6, 9, 14}) {
      for (double s : {0.3, 1.0, 2.4}) {
        CHECK(rel_err(jackmc::spherical_moment_exact(SphericalKind::kSymmetric,
                                                     1, K, 1, s),
                      s + 1.0 / (K - 1.0)) < 1e-12);
        CHECK(rel_err(jackmc::spherical_moment_exact(SphericalKind::kSelfDual,
                                                     1, K, 1, s),
                      s + 1.0 / (2.0 * K + 2.0)) < 1e-12);
        CHECK(rel_err(jackmc::spherical_moment_exact(SphericalKind::kReal, 1,
                                                     K, 1, s),
                      s + 1.0 / (2.0 * K - 1.0)) < 1e-12);
        CHECK(rel_err(jackmc::spherical_moment_exact(
                          SphericalKind::kQuaternion, 1, K, 1, s),
                      s + 2.0 / (2.0 * K + 1.0)) < 1e-12);
      }
    }
  }
  SUBCASE("agrees with the Jack-average route for symmetric and self-dual") {
    for (SphericalKind kind :
         {SphericalKind::kSymmetric, SphericalKind::kSelfDual}) {
      for (int k : {1, 2}) {
        for (int N : {1, 2, 3}) {
          for (double s : {0.5, 1.7}) {
            const double a = jackmc::spherical_moment_exact(kind, N, 9, k, s);
            const double b = spherical_via_jack_average(kind, N, 9, k, s);
            CHECK(rel_err(a, b) < 1e-10);
          }
        }
      }
    }
  }
  SUBCASE("s = 0 values are positive and the moment grows with s") {
    for (SphericalKind kind :
         {SphericalKind::kSymmetric, SphericalKind::kSelfDual,
          SphericalKind::kReal, SphericalKind::kQuaternion}) {
      const double v0 = jackmc::spherical_moment_exact(kind, 2, 10, 1, 0.0);
      const double v1 = jackmc::spherical_moment_exact(kind, 2, 10, 1, 0.8);
      const double v2 = jackmc::spherical_moment_exact(kind, 2, 10, 1, 1.9);
      CHECK(v0 > 0.0);
      CHECK(v1 > v0);
      CHECK(v2 > v1);
    }
  }
  SUBCASE("K too small for the requested k throws") {
    CHECK_THROWS_AS(
        jackmc::spherical_moment_exact(SphericalKind::kSymmetric, 2, 2, 2, 0.5),
        std::domain_error);
  }
  SUBCASE("log evaluator agrees with the direct one where both are finite") {
    for (SphericalKind kind :
         {SphericalKind::kSymmetric, SphericalKind::kSelfDual,
          SphericalKind::kReal, SphericalKind::kQuaternion}) {
      for (double s : {0.0, 0.6, 2.5}) {
        const double direct =
            jackmc::spherical_moment_exact(kind, 40, 12, 1, s);
        const double via_log = std::exp(
            jackmc::spherical_moment_exact_log(kind, 40, 12, 1, s));
        CHECK(rel_err(via_log, direct) < 1e-12);
      }
    }
  }
  SUBCASE("spherical ratio exponents emerge at large N") {
    // At N = 1000 the moment itself overflows a double for s near 2.5, so
    // the slope must be taken in log space.
    const int K = 12;
    const int N = 1000;
    const double s1 = 0.5;
    const double s2 = 2.5;
    const auto slope = [&](SphericalKind num, SphericalKind den) {
      const double l1 =
          jackmc::spherical_moment_exact_log(num, N, K, 1, s1) -
          jackmc::spherical_moment_exact_log(den, N, K, 1, s1);
      const double l2 =
          jackmc::spherical_moment_exact_log(num, N, K, 1, s2) -
          jackmc::spherical_moment_exact_log(den, N, K, 1, s2);
      return (l2 - l1) / std::log((1.0 + s2) / (1.0 + s1));
    };
    CHECK(std::abs(slope(SphericalKind::kSymmetric, SphericalKind::kReal) -
                   (-2.0)) < 0.1);
    CHECK(std::abs(slope(SphericalKind::kSelfDual, SphericalKind::kQuaternion) -
                   1.0) < 0.1);
  }
}

TEST_CASE("asymptotic ratio predictions") {
  using jackmc::asymptotic_ratio_prediction;
  SUBCASE("explicit constants for the Gaussian ratios") {
    const auto k1 = asymptotic_ratio_prediction(RatioIdentity::kK1, 1, 0.5, 0);
    CHECK(k1.constant_known);
    CHECK(rel_err(k1.constant, 1.0) < 1e-12);
    CHECK(rel_err(k1.value, 0.75) < 1e-12);
    const auto k1b = asymptotic_ratio_prediction(RatioIdentity::kK1, 2, 0.0, 0);
    CHECK(rel_err(k1b.constant, 1.0 / 3.0) < 1e-12);
    const auto k2 = asymptotic_ratio_prediction(RatioIdentity::kK2, 1, 0.0, 0);
    CHECK(rel_err(k2.constant, 1.0 / std::sqrt(3.14159265358979323846)) <
          1e-12);
    CHECK(k2.exponent == -0.5);
    const auto ge = asymptotic_ratio_prediction(RatioIdentity::kGE1, 1, 0.3, 0);
    CHECK(ge.value == 1.0);
    CHECK_THROWS_AS(asymptotic_ratio_prediction(RatioIdentity::kK1, 1, 1.0, 0),
                    std::domain_error);
  }
  SUBCASE("spherical ratios expose only the exponent") {
    const auto k1x =
        asymptotic_ratio_prediction(RatioIdentity::kK1x, 2, 0.6, 12);
    CHECK_FALSE(k1x.constant_known);
    CHECK(std::isnan(k1x.constant));
    CHECK(k1x.exponent == -4.0);
    CHECK(k1x.base == doctest::Approx(1.36).epsilon(1e-12));
    const auto k2x =
        asymptotic_ratio_prediction(RatioIdentity::kK2x, 3, 0.0, 12);
    CHECK(k2x.exponent == 3.0);
  }
  SUBCASE("GE1 is an exact identity at k = 1") {
    for (int N : {1, 5, 20, 40}) {
      for (double s : {0.0, 0.25, 0.64}) {
        const double num =
            jackmc::det_average_laguerre(1, N, 4.0, 0.0, N * s);
        const double den =
            jackmc::det_average_laguerre(1, N, 2.0, 0.0, N * s);
        CHECK(rel_err(num / den, 1.0) < 1e-12);
      }
    }
  }
  SUBCASE("compensated K1/K2 ratios approach the predictions") {
    for (double z : {0.0, 0.5}) {
      const int N = 50;
      const double s = z * z;
      const double k1 = jackmc::det_average_laguerre(1, N, 4.0, 1.0, N * s) /
                        jackmc::det_average_laguerre(1, N, 4.0, 0.0, N * s) / N;
      const auto p1 = asymptotic_ratio_prediction(RatioIdentity::kK1, 1, z, 0);
      CHECK(std::abs(k1 / p1.value - 1.0) < 0.05);
      const double k2 = std::sqrt(static_cast<double>(N)) *
                        jackmc::det_average_laguerre(1, N, 1.0, -0.5, N * s) /
                        jackmc::det_average_laguerre(1, N, 1.0, 0.0, N * s);
      const auto p2 = asymptotic_ratio_prediction(RatioIdentity::kK2, 1, z, 0);
      CHECK(std::abs(k2 / p2.value - 1.0) < 0.08);
    }
  }
}
