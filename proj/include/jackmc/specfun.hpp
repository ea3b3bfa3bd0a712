#pragma once

#include <complex>
#include <vector>

#include "jackmc/jack.hpp"
#include "jackmc/partitions.hpp"

namespace jackmc {

// Truncated exponential E_N(x) = sum_{j=0}^N x^j / j!.
double truncated_exp(int N, double x);
cplx truncated_exp(int N, cplx x);

// Exact pair averages <det(z I - X) det(conj(w) I - conj(X))> / C(N) as
// functions of y = z * conj(w), normalized so the value at y = 0 is 1:
//   complex symmetric:  E_N(2y) - (2y/(N+1)) E_{N-1}(2y)
//   complex self-dual:  (N!/(2N)!) sum_j ((2j)!/j!) (2y)^{N-j} E_{2j}(y)
//   complex Ginibre:    E_N(y)
cplx gs_pair_exact(int N, cplx y);
cplx gqa_pair_exact(int N, cplx y);
cplx ginue_pair_exact(int N, cplx y);

// The normalizations C(N) removed above: the averages at z = w = 0.
double pair_normalization_gs(int N);     // (N+1)!/2^N
double pair_normalization_gqa(int N);    // (2N)!
double pair_normalization_ginue(int N);  // N!

// Hypergeometric function of matrix argument (s, ..., s) (N copies),
//   2F1^(alpha)(a1, a2; b1; (s)^N)
//     = sum_kappa [a1]_kappa [a2]_kappa / [b1]_kappa * C_kappa((s)^N) / |kappa|!,
// restricted to terminating series: a1 must be a nonpositive integer -k, which
// confines the sum to kappa_1 <= k, length <= N.
struct HypergeomParams {
  double a1;
  double a2;
  double b1;
  double alpha;
  cplx s;
  int N;
};
cplx hypergeom_2f1_jack(const HypergeomParams& p);

// <C_kappa^(alpha)(x)> over the Laguerre-type eigenvalue gas
// ME_{2/alpha,N}[lambda^a e^{-lambda}]:
//   C_kappa((1)^N) [a + 1 + (N-1)/alpha]_kappa.
double laguerre_jack_average(const Partition& kappa, double alpha, int N,
                             double a);

// <C_kappa^(alpha)(x)> over the heavy-tailed Jacobi-type gas
// ME_{2/alpha,N}[lambda^{b1} (1+lambda)^{-b1-b2-2-2(N-1)/alpha}]:
//   C_kappa((-1)^N) [b1 + 1 + (N-1)/alpha]_kappa / [-b2]_kappa.
double jacobi_type_jack_average(const Partition& kappa, double alpha, int N,
                                double b1, double b2);

// Laguerre Selberg integral
//   W_{beta,n}(a) = int_{[0,inf)^n} prod x^a e^{-x} prod_{j<k} |x_k-x_j|^beta
// via its gamma-product evaluation.
double selberg_laguerre(double beta, int n, double a);
double log_selberg_laguerre(double beta, int n, double a);

// <prod_{l=1}^k (s + x_l)^N> over ME_{beta,k}[lambda^a e^{-c lambda}], as the
// terminating Jack expansion, evaluated in log space term by term:
//   c^{-kN} sum_{kappa in (N)^k} sigma^{kN-|kappa|} (-1)^|kappa| [-N]_kappa
//     C_kappa((1)^k) [a+1+(k-1)/alpha]_kappa / |kappa|!,  sigma = c s,
// with alpha = 2/beta.  All terms are nonnegative for a > -1.
double det_average_laguerre(int k, int N, double beta, double a, double s,
                            double c = 1.0);

// Exact finite-sum right-hand sides of the pair duality for products of
// k = z.size() characteristic polynomial pairs:
//   gs:  <prod_l det(z_l I - Z) det(conj(w_l) I - conj(Z))>  over the Gaussian
//        complex symmetric N x N ensemble,
//   gqa: <prod_l det^(1/2)(z_l I - Z) det^(1/2)(conj(w_l) I - conj(Z))> over
//        the Gaussian complex self-dual 2N x 2N ensemble,
// as prod_l (z_l conj(w_l))^N times a Jack-polynomial sum over the (N)^k box.
// w is passed plainly; the conjugation is applied internally.  Zero arguments
// are handled by a short polynomial extrapolation in a real shift h.
cplx duality_rhs_jack_sum_gs(const std::vector<cplx>& z,
                             const std::vector<cplx>& w, int N);
cplx duality_rhs_jack_sum_gqa(const std::vector<cplx>& z,
                              const std::vector<cplx>& w, int N);

// Exact spherical-ensemble moments of |det(z I - Z)|^(2k) (symmetric, real)
// and |det(z I_{2N} - Z)|^k (self-dual, quaternion) as terminating 2F1 sums;
// s = |z|^2.  The terminating parameter sets are
//   symmetric : alpha = 2,   (-k, -k;     -K + 1)
//   selfdual  : alpha = 1/2, (-k, -k;     -2K - 2)
//   real      : alpha = 2,   (-k, -k+1/2; -K + 1/2)   (ensemble SrOE_{N,2K})
//   quaternion: alpha = 1/2, (-k, -k-1;   -2K - 1)    (ensemble SrSE_{N,K})
// and the returned value is s^{kN} 2F1^(alpha)(a1, a2; b; (-1/s)^N).
enum class SphericalKind { kSymmetric, kSelfDual, kReal, kQuaternion };
double spherical_moment_exact(SphericalKind kind, int N, int K, int k,
                              double s);

// log of the same moment, usable at N in the thousands where the value
// itself overflows; requires parameters for which every term of the
// terminating sum is nonnegative (any K large enough for normalizability).
double spherical_moment_exact_log(SphericalKind kind, int N, int K, int k,
                                  double s);

// Large-N predictions for the moment ratios between beta-pair ensembles.
// For K1/K2/GE1 the constant is an explicit Selberg-integral ratio and |z|<1
// is required; for the spherical ratios K1x/K2x only the power of the base
// (1+|z|^2) is predicted and the constant must be fitted, never asserted.
enum class RatioIdentity { kK1, kK2, kK1x, kK2x, kGE1 };
struct RatioPrediction {
  double constant;      // NaN when constant_known is false
  bool constant_known;
  double base;          // 1 - |z|^2 (Gaussian) or 1 + |z|^2 (spherical)
  double exponent;
  double value;         // constant * base^exponent; NaN when unknown
};
RatioPrediction asymptotic_ratio_prediction(RatioIdentity id, int k,
                                            double z_abs, int K);

}  // namespace jackmc
