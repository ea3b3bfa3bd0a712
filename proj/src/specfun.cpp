#include "jackmc/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace jackmc {
namespace {

cplx ipow(cplx base, int e) {
  cplx acc = 1.0;
  cplx b = base;
  for (int n = e; n > 0; n >>= 1) {
    if (n & 1) acc *= b;
    b *= b;
  }
  return acc;
}

void kahan_add(cplx& sum, cplx& comp, cplx term) {
  const cplx y = term - comp;
  const cplx t = sum + y;
  comp = (t - sum) - y;
  sum = t;
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Magnitude/sign split of the generalized Pochhammer product, for the
// log-space sums below (individual factors can be negative at terminating
// parameters; an exact zero is reported as sign 0).
struct LogPoch {
  double log_abs;
  int sign;
};

LogPoch log_abs_pochhammer(double u, const Partition& kappa, double alpha) {
  LogPoch out{0.0, 1};
  for (std::size_t j = 0; j < kappa.size(); ++j) {
    const double base = u - static_cast<double>(j) / alpha;
    for (int i = 0; i < kappa[j]; ++i) {
      const double f = base + i;
      if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
      if (f < 0.0) out.sign = -out.sign;
      out.log_abs += std::log(std::abs(f));
    }
  }
  return out;
}

// log C_kappa^(alpha)((1)^N) = 2|kappa| log(alpha) + log |kappa|!
//   + log [N/alpha]_kappa - log h'_kappa - log h_kappa;  requires
// length(kappa) <= N (all factors are then positive).
double log_jack_C_at_ones(const Partition& kappa, double alpha, int N) {
  if (length(kappa) > N) return -std::numeric_limits<double>::infinity();
  const int d = weight(kappa);
  double log_hooks = 0.0;
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    for (int j = 1; j <= kappa[i]; ++j) {
      const int a = arm_length(kappa, static_cast<int>(i) + 1, j);
      const int l = leg_length(kappa, static_cast<int>(i) + 1, j);
      log_hooks += std::log(alpha * (a + 1) + l);  // h'
      log_hooks += std::log(alpha * a + l + 1);    // h
    }
  }
  const LogPoch pn = log_abs_pochhammer(static_cast<double>(N) / alpha, kappa,
                                        alpha);
  return 2.0 * d * std::log(alpha) + std::lgamma(d + 1.0) + pn.log_abs -
         log_hooks;
}

double logsumexp(const std::vector<double>& logs) {
  if (logs.empty()) return -std::numeric_limits<double>::infinity();
  double m = logs.front();
  for (double v : logs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;
  double acc = 0.0;
  for (double v : logs) acc += std::exp(v - m);
  return m + std::log(acc);
}

}  // namespace

double truncated_exp(int N, double x) {
  if (N < 0) throw std::invalid_argument("truncated_exp: N >= 0 required");
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j <= N; ++j) {
    term *= x / j;
    sum += term;
  }
  return sum;
}

cplx truncated_exp(int N, cplx x) {
  if (N < 0) throw std::invalid_argument("truncated_exp: N >= 0 required");
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int j = 1; j <= N; ++j) {
    term *= x / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

cplx gs_pair_exact(int N, cplx y) {
  if (N < 1) throw std::invalid_argument("gs_pair_exact: N >= 1 required");
  const cplx two_y = 2.0 * y;
  return truncated_exp(N, two_y) -
         two_y / static_cast<double>(N + 1) * truncated_exp(N - 1, two_y);
}

cplx gqa_pair_exact(int N, cplx y) {
  if (N < 1) throw std::invalid_argument("gqa_pair_exact: N >= 1 required");
  double pref = 1.0;  // N!/(2N)!
  for (int i = N + 1; i <= 2 * N; ++i) pref /= i;
  cplx sum = 0.0;
  double ratio = 1.0;  // (2j)!/j!
  for (int j = 0; j <= N; ++j) {
    if (j > 0) ratio *= 2.0 * (2 * j - 1);
    sum += ratio * ipow(2.0 * y, N - j) * truncated_exp(2 * j, y);
  }
  return pref * sum;
}

cplx ginue_pair_exact(int N, cplx y) {
  if (N < 1) throw std::invalid_argument("ginue_pair_exact: N >= 1 required");
  return truncated_exp(N, y);
}

double pair_normalization_gs(int N) {
  if (N < 1) throw std::invalid_argument("pair_normalization_gs: N >= 1");
  double v = 1.0;
  for (int i = 2; i <= N + 1; ++i) v *= i;
  return v / std::pow(2.0, N);
}

double pair_normalization_gqa(int N) {
  if (N < 1) throw std::invalid_argument("pair_normalization_gqa: N >= 1");
  return factorial(2 * N);
}

double pair_normalization_ginue(int N) {
  if (N < 1) throw std::invalid_argument("pair_normalization_ginue: N >= 1");
  return factorial(N);
}

cplx hypergeom_2f1_jack(const HypergeomParams& p) {
  if (p.N < 1) throw std::invalid_argument("hypergeom_2f1_jack: N >= 1");
  if (!(p.alpha > 0.0))
    throw std::invalid_argument("hypergeom_2f1_jack: alpha > 0 required");
  const double k_real = -p.a1;
  const int k = static_cast<int>(std::llround(k_real));
  if (k < 0 || std::abs(k_real - k) > 1e-9)
    throw std::invalid_argument(
        "hypergeom_2f1_jack: a1 must be a nonpositive integer "
        "(terminating series)");
  if (k == 0) return 1.0;
  if (k * p.N > 64)
    throw std::domain_error(
        "hypergeom_2f1_jack: termination box larger than direct double "
        "summation supports (|a1| * N <= 64)");
  cplx total = 0.0;
  cplx comp = 0.0;
  for (const Partition& kappa : enumerate_in_box(k, p.N)) {
    const int d = weight(kappa);
    const double num = pochhammer_general(p.a1, kappa, p.alpha) *
                       pochhammer_general(p.a2, kappa, p.alpha);
    const double den = pochhammer_general(p.b1, kappa, p.alpha);
    if (den == 0.0) {
      if (num != 0.0)
        throw std::domain_error(
            "hypergeom_2f1_jack: [b1]_kappa vanishes inside the termination "
            "box at kappa = " +
            to_string(kappa));
      continue;
    }
    if (num == 0.0) continue;
    const cplx term = (num / den / factorial(d)) * ipow(p.s, d) *
                      jack_C_at_ones(kappa, p.alpha, p.N);
    kahan_add(total, comp, term);
  }
  return total;
}

double laguerre_jack_average(const Partition& kappa, double alpha, int N,
                             double a) {
  if (!is_partition(kappa))
    throw std::invalid_argument("laguerre_jack_average: not a partition");
  if (N < 1 || !(alpha > 0.0))
    throw std::invalid_argument("laguerre_jack_average: need N >= 1, alpha > 0");
  return jack_C_at_ones(kappa, alpha, N) *
         pochhammer_general(a + 1.0 + (N - 1) / alpha, kappa, alpha);
}

double jacobi_type_jack_average(const Partition& kappa, double alpha, int N,
                                double b1, double b2) {
  if (!is_partition(kappa))
    throw std::invalid_argument("jacobi_type_jack_average: not a partition");
  if (N < 1 || !(alpha > 0.0))
    throw std::invalid_argument(
        "jacobi_type_jack_average: need N >= 1, alpha > 0");
  const double den = pochhammer_general(-b2, kappa, alpha);
  if (den == 0.0)
    throw std::domain_error(
        "jacobi_type_jack_average: [-b2]_kappa vanishes at kappa = " +
        to_string(kappa));
  const double sign = (weight(kappa) % 2 == 0) ? 1.0 : -1.0;
  return sign * jack_C_at_ones(kappa, alpha, N) *
         pochhammer_general(b1 + 1.0 + (N - 1) / alpha, kappa, alpha) / den;
}

double log_selberg_laguerre(double beta, int n, double a) {
  if (n < 1) throw std::invalid_argument("selberg_laguerre: n >= 1 required");
  if (!(beta > 0.0))
    throw std::invalid_argument("selberg_laguerre: beta > 0 required");
  if (!(a > -1.0))
    throw std::invalid_argument("selberg_laguerre: a > -1 required");
  const double half_beta = 0.5 * beta;
  double log_w = 0.0;
  for (int j = 0; j < n; ++j) {
    log_w += std::lgamma(1.0 + half_beta + j * half_beta) +
             std::lgamma(a + 1.0 + j * half_beta) -
             std::lgamma(1.0 + half_beta);
  }
  return log_w;
}

double selberg_laguerre(double beta, int n, double a) {
  return std::exp(log_selberg_laguerre(beta, n, a));
}

double det_average_laguerre(int k, int N, double beta, double a, double s,
                            double c) {
  if (k < 1) throw std::invalid_argument("det_average_laguerre: k >= 1");
  if (N < 0) throw std::invalid_argument("det_average_laguerre: N >= 0");
  if (!(beta > 0.0))
    throw std::invalid_argument("det_average_laguerre: beta > 0 required");
  if (!(a > -1.0))
    throw std::invalid_argument("det_average_laguerre: a > -1 required");
  if (s < 0.0)
    throw std::invalid_argument("det_average_laguerre: s >= 0 required");
  if (!(c > 0.0))
    throw std::invalid_argument("det_average_laguerre: c > 0 required");
  if (N == 0) return 1.0;
  const double alpha = 2.0 / beta;
  const double sigma = c * s;
  const double log_sigma = sigma > 0.0 ? std::log(sigma) : 0.0;
  const double u = a + 1.0 + (k - 1) / alpha;
  const int full = k * N;
  std::vector<double> logs;
  for (const Partition& kappa : enumerate_in_box(N, k)) {
    const int d = weight(kappa);
    if (sigma == 0.0 && d < full) continue;
    const LogPoch pn =
        log_abs_pochhammer(static_cast<double>(-N), kappa, alpha);
    const LogPoch pu = log_abs_pochhammer(u, kappa, alpha);
    if (pn.sign == 0 || pu.sign == 0) continue;
    logs.push_back((full - d) * log_sigma + pn.log_abs +
                   log_jack_C_at_ones(kappa, alpha, k) + pu.log_abs -
                   std::lgamma(d + 1.0));
  }
  return std::exp(logsumexp(logs) - full * std::log(c));
}

namespace {

// Shared core of the two duality sums over the (N)^k box:
//   prod_l (z_l conj(w_l))^N * sum_kappa P_kappa^(ap)(1/z) P_kappa^(ap)(1/wbar)
//     * P_{kappa'}^(1/ap)((1)^N) * 2^(two_sign |kappa|) * [u]_kappa^(ap)
//     / P_kappa^(ap)((1)^k)
// with (ap, two_sign, u) = (1/2, -1, 2k) for the symmetric ensemble and
// (2, +1, k/2) for the self-dual one.
cplx duality_sum_direct(const std::vector<cplx>& z, const std::vector<cplx>& w,
                        int N, double alpha_p, int two_sign) {
  const int k = static_cast<int>(z.size());
  std::vector<cplx> inv_z(k);
  std::vector<cplx> inv_wbar(k);
  cplx pref = 1.0;
  for (int l = 0; l < k; ++l) {
    const cplx wbar = std::conj(w[l]);
    inv_z[l] = 1.0 / z[l];
    inv_wbar[l] = 1.0 / wbar;
    pref *= ipow(z[l] * wbar, N);
  }
  const double u = (two_sign < 0) ? 2.0 * k : 0.5 * k;
  cplx total = 0.0;
  cplx comp = 0.0;
  for (const Partition& kappa : enumerate_in_box(N, k)) {
    const int d = weight(kappa);
    const double scale = jack_at_ones(conjugate(kappa), 1.0 / alpha_p, N) *
                         std::pow(2.0, two_sign * d) *
                         pochhammer_general(u, kappa, alpha_p) /
                         jack_at_ones(kappa, alpha_p, k);
    const cplx term = scale * jack_eval(kappa, alpha_p, inv_z) *
                      jack_eval(kappa, alpha_p, inv_wbar);
    kahan_add(total, comp, term);
  }
  return pref * total;
}

cplx duality_sum(const std::vector<cplx>& z, const std::vector<cplx>& w, int N,
                 double alpha_p, int two_sign) {
  if (z.size() != w.size() || z.empty())
    throw std::invalid_argument(
        "duality_rhs_jack_sum: z and w must be nonempty and equally sized");
  if (N < 1) throw std::invalid_argument("duality_rhs_jack_sum: N >= 1");
  const int k = static_cast<int>(z.size());
  if (N * k > kJackDegreeCap)
    throw std::domain_error(
        "duality_rhs_jack_sum: N * k exceeds the supported Jack degree (" +
        std::to_string(kJackDegreeCap) + ")");
  bool has_zero = false;
  for (int l = 0; l < k; ++l)
    if (z[l] == cplx(0.0) || w[l] == cplx(0.0)) has_zero = true;
  if (!has_zero) return duality_sum_direct(z, w, N, alpha_p, two_sign);
  // The sum is a polynomial in any single argument; shift every zero entry by
  // a common real h and remove the shift with a 3-point extrapolation (exact
  // through h^2, so the residual error is O(h^3) with h = 1e-6).
  const auto shifted = [&](double h) {
    std::vector<cplx> zs = z;
    std::vector<cplx> ws = w;
    for (int l = 0; l < k; ++l) {
      if (zs[l] == cplx(0.0)) zs[l] = h;
      if (ws[l] == cplx(0.0)) ws[l] = h;
    }
    return duality_sum_direct(zs, ws, N, alpha_p, two_sign);
  };
  const double h = 1e-6;
  return 3.0 * shifted(h) - 3.0 * shifted(2.0 * h) + shifted(3.0 * h);
}

}  // namespace

cplx duality_rhs_jack_sum_gs(const std::vector<cplx>& z,
                             const std::vector<cplx>& w, int N) {
  return duality_sum(z, w, N, 0.5, -1);
}

cplx duality_rhs_jack_sum_gqa(const std::vector<cplx>& z,
                              const std::vector<cplx>& w, int N) {
  return duality_sum(z, w, N, 2.0, +1);
}

namespace {

// Split log-magnitude accumulation of the terminating spherical sum: returns
// log-sum-exp of the positive and negative term groups separately.
struct SignedLogSum {
  double log_pos;
  double log_neg;
};

SignedLogSum spherical_moment_signed_logs(SphericalKind kind, int N, int K,
                                          int k, double s) {
  if (N < 1 || K < 1 || k < 1)
    throw std::invalid_argument(
        "spherical_moment_exact: N, K, k >= 1 required");
  if (s < 0.0)
    throw std::invalid_argument("spherical_moment_exact: s >= 0 required");
  double alpha = 0.0;
  double a2 = 0.0;
  double b = 0.0;
  switch (kind) {
    case SphericalKind::kSymmetric:
      alpha = 2.0;
      a2 = -k;
      b = -K + 1.0;
      break;
    case SphericalKind::kSelfDual:
      alpha = 0.5;
      a2 = -k;
      b = -2.0 * K - 2.0;
      break;
    case SphericalKind::kReal:
      alpha = 2.0;
      a2 = -k + 0.5;
      b = -K + 0.5;
      break;
    case SphericalKind::kQuaternion:
      alpha = 0.5;
      a2 = -k - 1.0;
      b = -2.0 * K - 1.0;
      break;
  }
  const double a1 = -k;
  const int full = k * N;
  const double log_s = s > 0.0 ? std::log(s) : 0.0;
  std::vector<double> pos;
  std::vector<double> neg;
  for (const Partition& kappa : enumerate_in_box(k, N)) {
    const int d = weight(kappa);
    if (s == 0.0 && d < full) continue;
    const LogPoch p1 = log_abs_pochhammer(a1, kappa, alpha);
    const LogPoch p2 = log_abs_pochhammer(a2, kappa, alpha);
    const LogPoch pb = log_abs_pochhammer(b, kappa, alpha);
    if (pb.sign == 0) {
      if (p1.sign != 0 && p2.sign != 0)
        throw std::domain_error(
            "spherical_moment_exact: denominator Pochhammer vanishes at "
            "kappa = " +
            to_string(kappa) + " (K too small for this k)");
      continue;
    }
    if (p1.sign == 0 || p2.sign == 0) continue;
    const int sign =
        ((d % 2 == 0) ? 1 : -1) * p1.sign * p2.sign * pb.sign;
    const double log_term = (full - d) * log_s + p1.log_abs + p2.log_abs -
                            pb.log_abs + log_jack_C_at_ones(kappa, alpha, N) -
                            std::lgamma(d + 1.0);
    (sign > 0 ? pos : neg).push_back(log_term);
  }
  return {logsumexp(pos), logsumexp(neg)};
}

}  // namespace

double spherical_moment_exact(SphericalKind kind, int N, int K, int k,
                              double s) {
  const SignedLogSum sl = spherical_moment_signed_logs(kind, N, K, k, s);
  const double lp = sl.log_pos;
  const double ln = sl.log_neg;
  if (ln == -std::numeric_limits<double>::infinity()) return std::exp(lp);
  if (lp == -std::numeric_limits<double>::infinity()) return -std::exp(ln);
  if (lp >= ln) return std::exp(lp) * (1.0 - std::exp(ln - lp));
  return -std::exp(ln) * (1.0 - std::exp(lp - ln));
}

double spherical_moment_exact_log(SphericalKind kind, int N, int K, int k,
                                  double s) {
  const SignedLogSum sl = spherical_moment_signed_logs(kind, N, K, k, s);
  if (sl.log_neg != -std::numeric_limits<double>::infinity())
    throw std::domain_error(
        "spherical_moment_exact_log: sum is not term-wise nonnegative for "
        "these parameters");
  return sl.log_pos;
}

RatioPrediction asymptotic_ratio_prediction(RatioIdentity id, int k,
                                            double z_abs, int K) {
  if (k < 1)
    throw std::invalid_argument("asymptotic_ratio_prediction: k >= 1");
  if (z_abs < 0.0)
    throw std::invalid_argument("asymptotic_ratio_prediction: |z| >= 0");
  (void)K;  // part of the call signature for the spherical ratios; the
            // predicted exponent does not depend on it
  const double s = z_abs * z_abs;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  RatioPrediction out{nan, false, 0.0, 0.0, nan};
  switch (id) {
    case RatioIdentity::kK1:
    case RatioIdentity::kK2:
    case RatioIdentity::kGE1:
      if (z_abs >= 1.0)
        throw std::domain_error(
            "asymptotic_ratio_prediction: |z| < 1 required for the Gaussian "
            "ratios");
      out.base = 1.0 - s;
      out.constant_known = true;
      if (id == RatioIdentity::kK1) {
        out.constant = std::exp(log_selberg_laguerre(4.0, k, 0.0) -
                                log_selberg_laguerre(4.0, k, 1.0));
        out.exponent = k;
      } else if (id == RatioIdentity::kK2) {
        out.constant = std::exp(log_selberg_laguerre(1.0, k, 0.0) -
                                log_selberg_laguerre(1.0, k, -0.5));
        out.exponent = -0.5 * k;
      } else {
        out.constant = 1.0;
        out.exponent = 0.0;
      }
      out.value = out.constant * std::pow(out.base, out.exponent);
      break;
    case RatioIdentity::kK1x:
      out.base = 1.0 + s;
      out.exponent = -2.0 * k;
      break;
    case RatioIdentity::kK2x:
      out.base = 1.0 + s;
      out.exponent = k;
      break;
  }
  return out;
}

}  // namespace jackmc
