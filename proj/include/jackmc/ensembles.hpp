#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "jackmc/rng.hpp"

namespace jackmc {

using cplx = std::complex<double>;

// The matrix ensembles the library averages over.  Gaussian kinds are sampled
// directly; the spherical symmetric/self-dual measures have no direct
// construction and are sampled by MCMC (see SphericalMcmc below).
enum class EnsembleKind {
  kGinOE,  // N x N real Ginibre, i.i.d. N(0,1)
  kGinUE,  // N x N complex Ginibre, i.i.d. CN(0,1)
  kGinSE,  // quaternion Ginibre, stored as its 2N x 2N complex representation
  kGS,     // complex symmetric Gaussian, density prop. to e^{-Tr X X^dagger}
  kGQA,    // complex self-dual Gaussian 2N x 2N, prop. to e^{-Tr X X^dagger/2}
  kSrOE,   // spherical real: (A^T A)^{-1/2} B with A of size (N+K) x N
  kSrSE,   // spherical quaternion analogue, 2N x 2N complex representation
  kSS,     // spherical complex symmetric, prop. to det(I + X X^dagger)^{-N-K}
  kSQA,    // spherical self-dual 2N x 2N, prop. to det(I + X X^dagger)^{-2N-K}
};

bool is_spherical_kind(EnsembleKind kind);

// Side length of the stored complex matrix (2N for quaternion-doubled kinds).
int sample_dimension(EnsembleKind kind, int N);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGinUE;
  int N = 1;
  double scaling = 1.0;  // global scale applied to every sample
  int K = 0;             // spherical kinds only

  // Throws std::invalid_argument on N < 1, scaling <= 0, or a K that is
  // missing/meaningless for the kind.
  void validate() const;
};

// RNG provenance: which (master seed, stream) pair produced a sample.
struct SeedPath {
  std::uint64_t master_seed = 0;
  std::uint64_t stream = 0;
};

struct MatrixSample {
  Eigen::MatrixXcd entries;
  EnsembleSpec ensemble;
  SeedPath seed_path;
};

struct McmcConfig {
  double proposal_scale = 0.3;  // initial global scale, adapted during burn-in
  int burn_in = 2000;
  int thinning = 5;
  int chains = 4;
  int batch_count = 32;  // batch-means error estimation

  void validate() const;  // throws std::invalid_argument
};

enum class GinibreField { kReal, kComplex, kQuaternion };
enum class SphericalField { kReal, kQuaternion };
enum class SphericalMatrixKind { kSymmetric, kSelfDual };

// Q_{2N} = I_N (x) [[0,-1],[1,0]]: the antisymmetric structure matrix behind
// the self-dual condition Q M^T Q^T = M.
Eigen::MatrixXcd quaternion_structure_matrix(int n_pairs);

// Largest violation of the 2x2-block quaternion structure
// [[alpha, beta], [-conj(beta), conj(alpha)]]; zero for exact samples.
double quaternion_structure_residual(const Eigen::MatrixXcd& m);

// i.i.d. Gaussian samplers.  The optional provenance is recorded verbatim in
// the returned sample; the caller owns the (seed, stream) bookkeeping.
MatrixSample sample_ginibre(GinibreField field, int N, Rng& rng,
                            const SeedPath& provenance = {});
MatrixSample sample_gs(int N, Rng& rng, const SeedPath& provenance = {});
MatrixSample sample_gqa(int N, Rng& rng, const SeedPath& provenance = {});

// n x n complex antisymmetric Gaussian with strictly-upper entries CN(0,1)
// (density prop. to e^{-Tr X X^dagger / 2}): the inner ensemble of the GinOE
// product duality, and the A-factor of sample_gqa.
Eigen::MatrixXcd sample_antisymmetric_gaussian(int n, Rng& rng);

// Spherical ensembles with a direct construction: X = (A^dagger A)^{-1/2} B,
// A Gaussian of size (N+K) x N (doubled for the quaternion field), B Gaussian
// N x N.  Requires K >= 1 so that A^dagger A is a.s. invertible with an
// integrable inverse square root.
MatrixSample sample_spherical_direct(SphericalField field, int N, int K,
                                     Rng& rng,
                                     const SeedPath& provenance = {});

// One sample per spec (kind dispatch + spec.scaling).  MCMC-only kinds
// (kSS, kSQA) have no one-shot sampler and throw std::invalid_argument.
MatrixSample sample_ensemble(const EnsembleSpec& spec, Rng& rng,
                             const SeedPath& provenance = {});

// Random-walk Metropolis on the free entries of the spherical complex
// symmetric / self-dual measures.  The proposal scale adapts toward ~0.3
// acceptance during burn-in only and is frozen afterwards, preserving
// detailed balance for every emitted state.
class SphericalMcmc {
 public:
  SphericalMcmc(SphericalMatrixKind kind, int N, int K, const McmcConfig& cfg,
                const SeedPath& seed);

  // Advances `thinning` Metropolis steps and returns the resulting state
  // (burn-in is consumed by the constructor).
  MatrixSample next();

  // Acceptance fraction over post-burn-in steps (NaN before the first step).
  double acceptance_rate() const;
  // True when the post-burn-in acceptance rate left [0.1, 0.6]: the chain
  // still mixes, but the proposal scale deserves a look.
  bool tuning_warning() const;
  double proposal_scale() const { return scale_; }

 private:
  void step();
  double log_density(const Eigen::MatrixXcd& free_entries) const;
  Eigen::MatrixXcd assemble(const Eigen::MatrixXcd& free_entries) const;

  SphericalMatrixKind kind_;
  int n_ = 0;
  int k_ = 0;
  McmcConfig cfg_;
  SeedPath seed_;
  Rng rng_;
  double scale_ = 0.3;
  Eigen::MatrixXcd state_;  // free entries; assemble() builds the matrix
  double state_log_density_ = 0.0;
  long long accepted_ = 0;
  long long proposed_ = 0;
};

// Eigenvalue weights w(x) for the beta-ensemble gases ME_{beta,N}[w].
enum class MEWeightKind { kLaguerre, kJacobi01, kCauchyLike };

struct MEWeightSpec {
  double beta = 2.0;
  MEWeightKind weight_kind = MEWeightKind::kLaguerre;
  double a = 0.0;         // laguerre: x^a e^{-x} on (0, inf)
  double a1 = 0.0;        // jacobi01: x^{a1} (1-x)^{a2} on (0, 1)
  double a2 = 0.0;
  double exponent = 0.0;  // cauchy_like: (1+x)^{-exponent} on (0, inf)
  int N = 1;

  // log w(x); -infinity outside the support.
  double log_weight(double x) const;
  // Throws std::invalid_argument when the weight is not normalizable for
  // (beta, N) or N < 1.
  void validate() const;
};

// Metropolis sampler for the joint eigenvalue density
//   prod_l w(x_l) * prod_{j<k} |x_k - x_j|^beta.
class EigenGasMcmc {
 public:
  EigenGasMcmc(const MEWeightSpec& weight, const McmcConfig& cfg,
               const SeedPath& seed);

  std::vector<double> next();
  double acceptance_rate() const;
  bool tuning_warning() const;

 private:
  void step();
  double log_density(const std::vector<double>& x) const;

  MEWeightSpec weight_;
  McmcConfig cfg_;
  Rng rng_;
  double scale_ = 0.3;
  std::vector<double> state_;
  double state_log_density_ = 0.0;
  long long accepted_ = 0;
  long long proposed_ = 0;
};

// Exact sampler for ME_{beta,N}[x^a e^{-x}] via the bidiagonal beta-ensemble
// construction (chi-distributed entries); returns the N eigenvalues,
// ascending.  Requires beta > 0 and a > -1.
std::vector<double> sample_laguerre_beta(double beta, int N, double a,
                                         Rng& rng);

// Split-R-hat convergence diagnostic over per-chain scalar traces; chains
// must share a common length >= 4.  Values near 1 indicate mixing.
double split_r_hat(const std::vector<std::vector<double>>& chains);

}  // namespace jackmc
