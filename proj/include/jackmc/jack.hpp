#pragma once

#include <complex>
#include <map>
#include <vector>

#include "jackmc/partitions.hpp"

namespace jackmc {

using cplx = std::complex<double>;

// Hard cap on |kappa| for monomial-table construction; the duality sums used
// downstream stay well below this.
inline constexpr int kJackDegreeCap = 24;

// Monomial-basis expansion of the Jack polynomial P_kappa^(alpha):
//   P_kappa = m_kappa + sum_{mu < kappa} c_{kappa,mu} m_mu,
// triangular with respect to dominance order, monic in m_kappa.
struct JackCoefficientTable {
  Partition kappa;
  double alpha;
  // Keyed by mu with |mu| = |kappa| and mu <= kappa in dominance; the entry
  // for kappa itself is exactly 1.
  std::map<Partition, double> coeffs;
};

// Build (and memoize, thread-safe) the coefficient table.  The coefficients
// are independent of the number of variables; they are obtained from the
// triangular linear system that makes P_kappa an eigenfunction of the Jack
// differential operator acting on |kappa| variables.
const JackCoefficientTable& jack_in_monomials(const Partition& kappa,
                                              double alpha);

// Monomial symmetric polynomial m_mu(x): sum over distinct permutations of
// the exponent vector.  Returns 0 when length(mu) > #variables.
cplx monomial_eval(const Partition& mu, const std::vector<cplx>& x);

// P_kappa^(alpha)(x);0 when length(kappa) > #variables.
cplx jack_eval(const Partition& kappa, double alpha,
               const std::vector<cplx>& x);

// P_kappa^(alpha) at N repeated ones via the closed product formula
//   P_kappa((1)^N) = alpha^|kappa| [N/alpha]_kappa / h_kappa,
// which vanishes automatically for N < length(kappa).
double jack_at_ones(const Partition& kappa, double alpha, int N);

// C-normalization: C_kappa = alpha^|kappa| |kappa|! / h'_kappa * P_kappa.
cplx jack_C(const Partition& kappa, double alpha, const std::vector<cplx>& x);
double jack_C_at_ones(const Partition& kappa, double alpha, int N);

// Generalized Pochhammer symbol
//   [u]_kappa = prod_{j>=1} prod_{i=0}^{kappa_j - 1} (u - (j-1)/alpha + i),
// computed as a rising-factorial product (entire in u; exact zeros at
// terminating parameters).  Zero parts contribute factor 1, so padding the
// partition does not change the value; n_pad >= length(kappa) is validated
// when supplied.
double pochhammer_general(double u, const Partition& kappa, double alpha,
                          int n_pad = -1);
cplx pochhammer_general(cplx u, const Partition& kappa, double alpha,
                        int n_pad = -1);

// |LHS - RHS| / max(|LHS|, |RHS|, 1) of the dual Cauchy identity
//   prod_{k<=N, l<=p} (1 - x_k y_l)
//     = sum_{kappa: l(kappa)<=N, kappa_1<=p} (-1)^|kappa|
//         P_kappa^(alpha)(x) P_{kappa'}^(1/alpha)(y).
double dual_cauchy_residual(const std::vector<cplx>& x,
                            const std::vector<cplx>& y, double alpha);

// The Jack eigenoperator acting on a weight-homogeneous monomial expansion in
// nvars variables (exposed so tests can verify the eigenfunction property at
// variable counts different from the one used in the solve):
//   sum_j x_j^2 d^2/dx_j^2
//   + (2/alpha) sum_{j<k} (x_j^2 d/dx_j - x_k^2 d/dx_k)/(x_j - x_k).
std::map<Partition, double> apply_jack_operator(
    const std::map<Partition, double>& expansion, double alpha, int nvars);

// Its eigenvalue on P_kappa in nvars variables:
//   sum_i kappa_i(kappa_i - 1) + (2/alpha) sum_i (nvars - i) kappa_i.
double jack_operator_eigenvalue(const Partition& kappa, double alpha,
                                int nvars);

}  // namespace jackmc
