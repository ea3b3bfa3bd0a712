#include "jackmc/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jackmc {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Cholesky-based log det(I + S S^dagger); the argument matrix is Hermitian
// positive definite by construction, so LLT never fails for finite input.
double log_det_one_plus_gram(const Eigen::MatrixXcd& s) {
  const Eigen::Index n = s.rows();
  Eigen::MatrixXcd gram =
      Eigen::MatrixXcd::Identity(n, n) + s * s.adjoint();
  const Eigen::LLT<Eigen::MatrixXcd> llt(gram);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "log_det_one_plus_gram: Cholesky failed on non-finite input");
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    log_det += std::log(std::real(llt.matrixLLT()(i, i)));
  return 2.0 * log_det;
}

// Hermitian inverse square root via the spectral decomposition.
Eigen::MatrixXcd inverse_sqrt_hermitian(const Eigen::MatrixXcd& g,
                                        const char* caller) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g);
  if (es.info() != Eigen::Success)
    throw std::runtime_error(std::string(caller) +
                             ": eigensolver failed on the Gram matrix");
  const Eigen::VectorXd evals = es.eigenvalues();
  if (evals(0) <= 0.0)
    throw std::runtime_error(std::string(caller) +
                             ": Gram matrix is numerically singular");
  return es.eigenvectors() *
         evals.array().rsqrt().matrix().asDiagonal() *
         es.eigenvectors().adjoint();
}

// Snaps a matrix onto the exact 2x2-block quaternion form
// [[alpha, beta], [-conj(beta), conj(alpha)]].  Used after floating-point
// operations that preserve the structure only up to roundoff.
void project_quaternion_structure(Eigen::MatrixXcd& m) {
  const Eigen::Index pairs = m.rows() / 2;
  for (Eigen::Index i = 0; i < pairs; ++i) {
    for (Eigen::Index j = 0; j < m.cols() / 2; ++j) {
      const cplx alpha =
          0.5 * (m(2 * i, 2 * j) + std::conj(m(2 * i + 1, 2 * j + 1)));
      const cplx beta =
          0.5 * (m(2 * i, 2 * j + 1) - std::conj(m(2 * i + 1, 2 * j)));
      m(2 * i, 2 * j) = alpha;
      m(2 * i, 2 * j + 1) = beta;
      m(2 * i + 1, 2 * j) = -std::conj(beta);
      m(2 * i + 1, 2 * j + 1) = std::conj(alpha);
    }
  }
}

// Fills a 2x2-block quaternion Gaussian with E|alpha|^2 = E|beta|^2 = 1/2,
// i.e. i.i.d. standard quaternion entries of unit second moment.
Eigen::MatrixXcd quaternion_gaussian(int rows_q, int cols_q, Rng& rng) {
  Eigen::MatrixXcd m(2 * rows_q, 2 * cols_q);
  for (int i = 0; i < rows_q; ++i) {
    for (int j = 0; j < cols_q; ++j) {
      const cplx alpha = rng.complex_normal() * kInvSqrt2;
      const cplx beta = rng.complex_normal() * kInvSqrt2;
      m(2 * i, 2 * j) = alpha;
      m(2 * i, 2 * j + 1) = beta;
      m(2 * i + 1, 2 * j) = -std::conj(beta);
      m(2 * i + 1, 2 * j + 1) = std::conj(alpha);
    }
  }
  return m;
}

MatrixSample make_sample(Eigen::MatrixXcd entries, EnsembleKind kind, int N,
                         int K, const SeedPath& provenance) {
  MatrixSample sample;
  sample.entries = std::move(entries);
  sample.ensemble.kind = kind;
  sample.ensemble.N = N;
  sample.ensemble.scaling = 1.0;
  sample.ensemble.K = K;
  sample.seed_path = provenance;
  return sample;
}

}  // namespace

bool is_spherical_kind(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kSrOE:
    case EnsembleKind::kSrSE:
    case EnsembleKind::kSS:
    case EnsembleKind::kSQA:
      return true;
    default:
      return false;
  }
}

int sample_dimension(EnsembleKind kind, int N) {
  switch (kind) {
    case EnsembleKind::kGinSE:
    case EnsembleKind::kGQA:
    case EnsembleKind::kSrSE:
    case EnsembleKind::kSQA:
      return 2 * N;
    default:
      return N;
  }
}

void EnsembleSpec::validate() const {
  if (N < 1) throw std::invalid_argument("EnsembleSpec: N >= 1 required");
  if (!(scaling > 0.0) || !std::isfinite(scaling))
    throw std::invalid_argument("EnsembleSpec: scaling > 0 required");
  if (is_spherical_kind(kind)) {
    if (K < 1)
      throw std::invalid_argument(
          "EnsembleSpec: spherical kinds require K >= 1");
  } else if (K != 0) {
    throw std::invalid_argument(
        "EnsembleSpec: K is only meaningful for spherical kinds");
  }
}

void McmcConfig::validate() const {
  if (!(proposal_scale > 0.0))
    throw std::invalid_argument("McmcConfig: proposal_scale > 0 required");
  if (burn_in < 1 || thinning < 1 || chains < 1 || batch_count < 1)
    throw std::invalid_argument("McmcConfig: counts must be positive");
}

Eigen::MatrixXcd quaternion_structure_matrix(int n_pairs) {
  if (n_pairs < 1)
    throw std::invalid_argument(
        "quaternion_structure_matrix: n_pairs >= 1 required");
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(2 * n_pairs, 2 * n_pairs);
  for (int i = 0; i < n_pairs; ++i) {
    q(2 * i, 2 * i + 1) = cplx(-1.0, 0.0);
    q(2 * i + 1, 2 * i) = cplx(1.0, 0.0);
  }
  return q;
}

double quaternion_structure_residual(const Eigen::MatrixXcd& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0)
    throw std::invalid_argument(
        "quaternion_structure_residual: even dimensions required");
  double worst = 0.0;
  for (Eigen::Index i = 0; i < m.rows() / 2; ++i) {
    for (Eigen::Index j = 0; j < m.cols() / 2; ++j) {
      worst = std::max(
          worst, std::abs(m(2 * i + 1, 2 * j + 1) - std::conj(m(2 * i, 2 * j))));
      worst = std::max(
          worst, std::abs(m(2 * i + 1, 2 * j) + std::conj(m(2 * i, 2 * j + 1))));
    }
  }
  return worst;
}

MatrixSample sample_ginibre(GinibreField field, int N, Rng& rng,
                            const SeedPath& provenance) {
  if (N < 1) throw std::invalid_argument("sample_ginibre: N >= 1 required");
  switch (field) {
    case GinibreField::kReal: {
      Eigen::MatrixXcd m(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = cplx(rng.normal(), 0.0);
      return make_sample(std::move(m), EnsembleKind::kGinOE, N, 0, provenance);
    }
    case GinibreField::kComplex: {
      Eigen::MatrixXcd m(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) m(i, j) = rng.complex_normal();
      return make_sample(std::move(m), EnsembleKind::kGinUE, N, 0, provenance);
    }
    case GinibreField::kQuaternion: {
      return make_sample(quaternion_gaussian(N, N, rng), EnsembleKind::kGinSE,
                         N, 0, provenance);
    }
  }
  throw std::invalid_argument("sample_ginibre: unknown field");
}

MatrixSample sample_gs(int N, Rng& rng, const SeedPath& provenance) {
  if (N < 1) throw std::invalid_argument("sample_gs: N >= 1 required");
  // e^{-Tr X X^dagger} = e^{-sum_j |X_jj|^2 - 2 sum_{j<k} |X_jk|^2}, so the
  // diagonal is CN(0,1) and the off-diagonal CN(0,1/2).
  Eigen::MatrixXcd m(N, N);
  for (int j = 0; j < N; ++j) {
    m(j, j) = rng.complex_normal();
    for (int k = j + 1; k < N; ++k) {
      const cplx entry = rng.complex_normal() * kInvSqrt2;
      m(j, k) = entry;
      m(k, j) = entry;
    }
  }
  return make_sample(std::move(m), EnsembleKind::kGS, N, 0, provenance);
}

Eigen::MatrixXcd sample_antisymmetric_gaussian(int n, Rng& rng) {
  if (n < 1)
    throw std::invalid_argument(
        "sample_antisymmetric_gaussian: n >= 1 required");
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const cplx entry = rng.complex_normal();
      a(j, k) = entry;
      a(k, j) = -entry;
    }
  }
  return a;
}

MatrixSample sample_gqa(int N, Rng& rng, const SeedPath& provenance) {
  if (N < 1) throw std::invalid_argument("sample_gqa: N >= 1 required");
  const Eigen::MatrixXcd a = sample_antisymmetric_gaussian(2 * N, rng);
  // M = Q_{2N} A realized as exact signed row swaps, so self-duality holds
  // bit-for-bit on every sample.
  Eigen::MatrixXcd m(2 * N, 2 * N);
  for (int i = 0; i < N; ++i) {
    m.row(2 * i) = -a.row(2 * i + 1);
    m.row(2 * i + 1) = a.row(2 * i);
  }
  return make_sample(std::move(m), EnsembleKind::kGQA, N, 0, provenance);
}

MatrixSample sample_spherical_direct(SphericalField field, int N, int K,
                                     Rng& rng, const SeedPath& provenance) {
  if (N < 1 || K < 1)
    throw std::invalid_argument(
        "sample_spherical_direct: N >= 1 and K >= 1 required");
  switch (field) {
    case SphericalField::kReal: {
      Eigen::MatrixXd a(N + K, N);
      for (int i = 0; i < N + K; ++i)
        for (int j = 0; j < N; ++j) a(i, j) = rng.normal();
      Eigen::MatrixXd b(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) b(i, j) = rng.normal();
      const Eigen::MatrixXcd gram = (a.transpose() * a).cast<cplx>();
      const Eigen::MatrixXcd x =
          inverse_sqrt_hermitian(gram, "sample_spherical_direct") *
          b.cast<cplx>();
      return make_sample(x, EnsembleKind::kSrOE, N, K, provenance);
    }
    case SphericalField::kQuaternion: {
      const Eigen::MatrixXcd a = quaternion_gaussian(N + K, N, rng);
      const Eigen::MatrixXcd b = quaternion_gaussian(N, N, rng);
      Eigen::MatrixXcd x =
          inverse_sqrt_hermitian(a.adjoint() * a,
                                 "sample_spherical_direct") *
          b;
      // (A^dagger A)^{-1/2} B is quaternion-structured in exact arithmetic;
      // snap away the roundoff so the structural invariant holds exactly.
      project_quaternion_structure(x);
      return make_sample(std::move(x), EnsembleKind::kSrSE, N, K, provenance);
    }
  }
  throw std::invalid_argument("sample_spherical_direct: unknown field");
}

MatrixSample sample_ensemble(const EnsembleSpec& spec, Rng& rng,
                             const SeedPath& provenance) {
  spec.validate();
  MatrixSample sample;
  switch (spec.kind) {
    case EnsembleKind::kGinOE:
      sample = sample_ginibre(GinibreField::kReal, spec.N, rng, provenance);
      break;
    case EnsembleKind::kGinUE:
      sample = sample_ginibre(GinibreField::kComplex, spec.N, rng, provenance);
      break;
    case EnsembleKind::kGinSE:
      sample =
          sample_ginibre(GinibreField::kQuaternion, spec.N, rng, provenance);
      break;
    case EnsembleKind::kGS:
      sample = sample_gs(spec.N, rng, provenance);
      break;
    case EnsembleKind::kGQA:
      sample = sample_gqa(spec.N, rng, provenance);
      break;
    case EnsembleKind::kSrOE:
      sample = sample_spherical_direct(SphericalField::kReal, spec.N, spec.K,
                                       rng, provenance);
      break;
    case EnsembleKind::kSrSE:
      sample = sample_spherical_direct(SphericalField::kQuaternion, spec.N,
                                       spec.K, rng, provenance);
      break;
    case EnsembleKind::kSS:
    case EnsembleKind::kSQA:
      throw std::invalid_argument(
          "sample_ensemble: spherical symmetric/self-dual kinds are "
          "MCMC-only; use SphericalMcmc");
  }
  if (spec.scaling != 1.0) sample.entries *= spec.scaling;
  sample.ensemble = spec;
  return sample;
}

SphericalMcmc::SphericalMcmc(SphericalMatrixKind kind, int N, int K,
                             const McmcConfig& cfg, const SeedPath& seed)
    : kind_(kind),
      n_(N),
      k_(K),
      cfg_(cfg),
      seed_(seed),
      rng_(seed.master_seed, seed.stream),
      scale_(cfg.proposal_scale) {
  cfg_.validate();
  if (N < 1 || K < 1)
    throw std::invalid_argument("SphericalMcmc: N >= 1 and K >= 1 required");
  const int dim = (kind == SphericalMatrixKind::kSymmetric) ? N : 2 * N;
  state_ = Eigen::MatrixXcd::Zero(dim, dim);
  state_log_density_ = log_density(state_);
  // Burn-in with adaptation of the global proposal scale toward ~0.3
  // acceptance; the scale is frozen afterwards to preserve detailed balance.
  const int window = 50;
  int window_accepts = 0;
  for (int i = 1; i <= cfg_.burn_in; ++i) {
    const long long before = accepted_;
    step();
    window_accepts += static_cast<int>(accepted_ - before);
    if (i % window == 0) {
      const double rate = static_cast<double>(window_accepts) / window;
      scale_ = std::clamp(scale_ * std::exp(rate - 0.3), 1e-4, 1e2);
      window_accepts = 0;
    }
  }
  // Frozen-scale calibration window: makes acceptance_rate() meaningful
  // before the first emitted sample and extends burn-in slightly.
  accepted_ = 0;
  proposed_ = 0;
  for (int i = 0; i < 200; ++i) step();
}

double SphericalMcmc::log_density(const Eigen::MatrixXcd& free_entries) const {
  // For the self-dual kind the state is the antisymmetric factor A of
  // M = Q A; since Q is unitary, det(I + M M^dagger) = det(I + A A^dagger).
  const double exponent = (kind_ == SphericalMatrixKind::kSymmetric)
                              ? n_ + k_
                              : 2.0 * n_ + k_;
  return -exponent * log_det_one_plus_gram(free_entries);
}

Eigen::MatrixXcd SphericalMcmc::assemble(
    const Eigen::MatrixXcd& free_entries) const {
  if (kind_ == SphericalMatrixKind::kSymmetric) return free_entries;
  Eigen::MatrixXcd m(2 * n_, 2 * n_);
  for (int i = 0; i < n_; ++i) {
    m.row(2 * i) = -free_entries.row(2 * i + 1);
    m.row(2 * i + 1) = free_entries.row(2 * i);
  }
  return m;
}

void SphericalMcmc::step() {
  Eigen::MatrixXcd proposal = state_;
  if (kind_ == SphericalMatrixKind::kSymmetric) {
    for (int j = 0; j < n_; ++j) {
      proposal(j, j) += scale_ * rng_.complex_normal();
      for (int k = j + 1; k < n_; ++k) {
        const cplx bump = scale_ * kInvSqrt2 * rng_.complex_normal();
        proposal(j, k) += bump;
        proposal(k, j) += bump;
      }
    }
  } else {
    for (int j = 0; j < 2 * n_; ++j) {
      for (int k = j + 1; k < 2 * n_; ++k) {
        const cplx bump = scale_ * rng_.complex_normal();
        proposal(j, k) += bump;
        proposal(k, j) -= bump;
      }
    }
  }
  const double proposal_log_density = log_density(proposal);
  ++proposed_;
  if (std::log(rng_.uniform_pos()) <
      proposal_log_density - state_log_density_) {
    state_ = std::move(proposal);
    state_log_density_ = proposal_log_density;
    ++accepted_;
  }
}

MatrixSample SphericalMcmc::next() {
  for (int i = 0; i < cfg_.thinning; ++i) step();
  const EnsembleKind kind = (kind_ == SphericalMatrixKind::kSymmetric)
                                ? EnsembleKind::kSS
                                : EnsembleKind::kSQA;
  return make_sample(assemble(state_), kind, n_, k_, seed_);
}

double SphericalMcmc::acceptance_rate() const {
  if (proposed_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

bool SphericalMcmc::tuning_warning() const {
  const double rate = acceptance_rate();
  return !(rate >= 0.1 && rate <= 0.6);
}

double MEWeightSpec::log_weight(double x) const {
  constexpr double kMinusInf = -std::numeric_limits<double>::infinity();
  switch (weight_kind) {
    case MEWeightKind::kLaguerre:
      if (x <= 0.0) return kMinusInf;
      return a * std::log(x) - x;
    case MEWeightKind::kJacobi01:
      if (x <= 0.0 || x >= 1.0) return kMinusInf;
      return a1 * std::log(x) + a2 * std::log1p(-x);
    case MEWeightKind::kCauchyLike:
      if (x <= 0.0) return kMinusInf;
      return -exponent * std::log1p(x);
  }
  return kMinusInf;
}

void MEWeightSpec::validate() const {
  if (N < 1) throw std::invalid_argument("MEWeightSpec: N >= 1 required");
  if (beta < 0.0)
    throw std::invalid_argument("MEWeightSpec: beta >= 0 required");
  switch (weight_kind) {
    case MEWeightKind::kLaguerre:
      if (a <= -1.0)
        throw std::invalid_argument("MEWeightSpec: laguerre needs a > -1");
      break;
    case MEWeightKind::kJacobi01:
      if (a1 <= -1.0 || a2 <= -1.0)
        throw std::invalid_argument(
            "MEWeightSpec: jacobi01 needs a1, a2 > -1");
      break;
    case MEWeightKind::kCauchyLike:
      if (exponent <= beta * (N - 1) + 1.0)
        throw std::invalid_argument(
            "MEWeightSpec: cauchy_like needs exponent > beta (N-1) + 1 for "
            "normalizability");
      break;
  }
}

EigenGasMcmc::EigenGasMcmc(const MEWeightSpec& weight, const McmcConfig& cfg,
                           const SeedPath& seed)
    : weight_(weight),
      cfg_(cfg),
      rng_(seed.master_seed, seed.stream),
      scale_(cfg.proposal_scale) {
  weight_.validate();
  cfg_.validate();
  state_.resize(weight_.N);
  for (int i = 0; i < weight_.N; ++i) {
    state_[i] = (weight_.weight_kind == MEWeightKind::kJacobi01)
                    ? (i + 1.0) / (weight_.N + 1.0)
                    : i + 1.0;
  }
  state_log_density_ = log_density(state_);
  const int window = 50;
  int window_accepts = 0;
  for (int i = 1; i <= cfg_.burn_in; ++i) {
    const long long before = accepted_;
    step();
    window_accepts += static_cast<int>(accepted_ - before);
    if (i % window == 0) {
      const double rate = static_cast<double>(window_accepts) / window;
      scale_ = std::clamp(scale_ * std::exp(rate - 0.3), 1e-4, 1e2);
      window_accepts = 0;
    }
  }
  accepted_ = 0;
  proposed_ = 0;
  for (int i = 0; i < 200; ++i) step();
}

double EigenGasMcmc::log_density(const std::vector<double>& x) const {
  double log_dens = 0.0;
  for (double coordinate : x) log_dens += weight_.log_weight(coordinate);
  if (weight_.beta > 0.0) {
    for (std::size_t j = 0; j < x.size(); ++j)
      for (std::size_t k = j + 1; k < x.size(); ++k)
        log_dens += weight_.beta * std::log(std::abs(x[k] - x[j]));
  }
  return log_dens;
}

void EigenGasMcmc::step() {
  std::vector<double> proposal = state_;
  for (double& coordinate : proposal) coordinate += scale_ * rng_.normal();
  const double proposal_log_density = log_density(proposal);
  ++proposed_;
  if (std::log(rng_.uniform_pos()) <
      proposal_log_density - state_log_density_) {
    state_ = std::move(proposal);
    state_log_density_ = proposal_log_density;
    ++accepted_;
  }
}

std::vector<double> EigenGasMcmc::next() {
  for (int i = 0; i < cfg_.thinning; ++i) step();
  return state_;
}

double EigenGasMcmc::acceptance_rate() const {
  if (proposed_ == 0) return std::numeric_limits<double>::quiet_NaN();
  return static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

bool EigenGasMcmc::tuning_warning() const {
  const double rate = acceptance_rate();
  return !(rate >= 0.1 && rate <= 0.6);
}

std::vector<double> sample_laguerre_beta(double beta, int N, double a,
                                         Rng& rng) {
  if (beta <= 0.0 || N < 1 || a <= -1.0)
    throw std::invalid_argument(
        "sample_laguerre_beta: beta > 0, N >= 1, a > -1 required");
  // Bidiagonal beta-ensemble model for ME_{beta,N}[x^a e^{-x}]: lower
  // bidiagonal B with chi-distributed entries, eigenvalues of B B^T / 2.
  const double a_prime = a + 1.0 + 0.5 * beta * (N - 1);
  Eigen::VectorXd diag(N);
  for (int i = 0; i < N; ++i) diag(i) = rng.chi(2.0 * a_prime - beta * i);
  Eigen::VectorXd sub(std::max(N - 1, 0));
  for (int i = 0; i + 1 < N; ++i) sub(i) = rng.chi(beta * (N - 1 - i));
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    b(i, i) = diag(i);
    if (i + 1 < N) b(i + 1, i) = sub(i);
  }
  const Eigen::MatrixXd tridiag = 0.5 * b * b.transpose();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tridiag);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("sample_laguerre_beta: eigensolver failed");
  std::vector<double> eigenvalues(N);
  for (int i = 0; i < N; ++i) eigenvalues[i] = es.eigenvalues()(i);
  return eigenvalues;
}

double split_r_hat(const std::vector<std::vector<double>>& chains) {
  if (chains.empty())
    throw std::invalid_argument("split_r_hat: at least one chain required");
  std::size_t min_len = chains.front().size();
  for (const auto& chain : chains) min_len = std::min(min_len, chain.size());
  const std::size_t half = min_len / 2;
  if (half < 2)
    throw std::invalid_argument(
        "split_r_hat: chains of length >= 4 required");
  std::vector<double> means;
  std::vector<double> vars;
  for (const auto& chain : chains) {
    for (int part = 0; part < 2; ++part) {
      const std::size_t begin = part * half;
      double mean = 0.0;
      for (std::size_t i = 0; i < half; ++i) mean += chain[begin + i];
      mean /= static_cast<double>(half);
      double var = 0.0;
      for (std::size_t i = 0; i < half; ++i) {
        const double d = chain[begin + i] - mean;
        var += d * d;
      }
      var /= static_cast<double>(half - 1);
      means.push_back(mean);
      vars.push_back(var);
    }
  }
  const auto m = static_cast<double>(means.size());
  const auto len = static_cast<double>(half);
  double grand_mean = 0.0;
  for (double v : means) grand_mean += v;
  grand_mean /= m;
  double between = 0.0;
  for (double v : means) between += (v - grand_mean) * (v - grand_mean);
  between *= len / (m - 1.0);
  double within = 0.0;
  for (double v : vars) within += v;
  within /= m;
  if (within == 0.0) return between == 0.0 ? 1.0 :
      std::numeric_limits<double>::infinity();
  const double var_plus = (len - 1.0) / len * within + between / len;
  return std::sqrt(var_plus / within);
}

}  // namespace jackmc
