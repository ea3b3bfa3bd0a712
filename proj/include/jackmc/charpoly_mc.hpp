#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "jackmc/ensembles.hpp"
#include "jackmc/partitions.hpp"
#include "jackmc/specfun.hpp"

namespace jackmc {

// ---------------------------------------------------------------------------
// Determinant primitives
// ---------------------------------------------------------------------------

// det(z I - M) via partially pivoted LU; the permutation sign is exact.
cplx char_poly_value(cplx z, const Eigen::MatrixXcd& m);

// Thrown when a spectrum that must consist of exactly coincident pairs fails
// to pair up numerically (a broken structural sampler upstream).
struct DegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Half power of det(z I - M) for matrices whose spectrum is doubly
// degenerate: computes all eigenvalues, pairs them greedily (nearest
// neighbour after lexicographic sort), and returns the product of (z - r)
// over one representative r per pair (the pair midpoint).  No square root of
// a complex number is ever taken, so the result is branch-free.  The pairing
// tolerance is 1e-6 (1 + ||M||_F); a larger intra-pair gap throws
// DegeneracyError.
cplx sqrt_det_shifted(cplx z, const Eigen::MatrixXcd& m);

// Pfaffian of an even-dimensional complex antisymmetric matrix by the
// Parlett-Reid tridiagonalization with pivoting; Pf(A)^2 = det(A).
cplx pfaffian(const Eigen::MatrixXcd& m);

// ---------------------------------------------------------------------------
// Monte Carlo estimators
// ---------------------------------------------------------------------------

// Thrown when a sample budget is too small to resolve a standard error
// (fewer than kMinSamplesPerStream draws per stream, or fewer than one
// batch per MCMC batch slot).  Reported, never silently passed.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EstimatorKind { kIid, kBatchMeans };

struct MCEstimate {
  cplx mean{0.0, 0.0};
  double std_error = 0.0;
  long long n_samples = 0;
  SeedPath seed_path;  // master seed + first stream index used
  EstimatorKind estimator_kind = EstimatorKind::kIid;
};

// Fixed number of independent substreams an i.i.d. budget is split across;
// results are merged in stream order with compensated summation, so the
// estimate is identical regardless of execution schedule.
inline constexpr int kNumStreams = 8;
inline constexpr long long kMinSamplesPerStream = 16;

// z-score acceptance thresholds: plain i.i.d. sampling vs paths that go
// through an eigensolver (half powers) or MCMC (batch-means error bars).
inline constexpr double kIidThreshold = 4.0;
inline constexpr double kMcmcThreshold = 5.0;

// |a - b| / sqrt(sa^2 + sb^2); infinity when both error bars vanish but the
// values differ.
double z_score_between(cplx a, double sa, cplx b, double sb);

// Generic engine: average draw(rng) over n_samples split across kNumStreams
// substreams of the master seed.  Deterministic in (draw, n, seed).
MCEstimate estimate_iid_average(const std::function<cplx(Rng&)>& draw,
                                long long n_samples,
                                std::uint64_t master_seed);

// Generic MCMC engine: chains[c]() yields consecutive draws of chain c; each
// chain contributes batch_count batch means, and the standard error is the
// spread of all batch means.  n_samples is a total budget across chains.
MCEstimate estimate_chain_average(
    const std::vector<std::function<cplx()>>& chains, long long n_samples,
    int batch_count, std::uint64_t master_seed);

// Sample mean of prod_l det(z_l I - Z) conj(det(w_l I - Z)) over the given
// ensemble; the conjugated factor realizes det(conj(w) I - conj(Z)).  In
// half mode each det is replaced by its branch-free half power (doubly
// degenerate ensembles only: the complex self-dual Gaussian and spherical
// kinds).  normalize divides by the exact z = w = 0 value (pair averages,
// k = 1 only).  Spherical S_S / S_QA kinds require an MCMC config and
// produce batch-means error bars.  Products with total degree above
// kLogAccumulationDegree are accumulated in log space factor by factor.
enum class PowerMode { kFull, kHalf };
inline constexpr int kLogAccumulationDegree = 40;

MCEstimate estimate_product_average(
    const EnsembleSpec& spec, const std::vector<cplx>& z,
    const std::vector<cplx>& w, PowerMode mode, long long n_samples,
    std::uint64_t master_seed, bool normalize = false,
    const std::optional<McmcConfig>& mcmc = std::nullopt);

// Right-hand sides of the duality identities that trade an N x N average for
// a k x k (or 2k x 2k) one.  z and w enter exactly as in
// estimate_product_average (w conjugated on assembly).  Shapes:
//   6.V    det[[diag(z), -Y], [Y^dag, diag(conj(w))]]^N,        Y GinUE_k
//   6.0v+  det[[diag(z)ox I2, -Y], [Y^dag, diag(conj(w))ox I2]]^(N/2),
//          Y GinSE_k (4k x 4k, doubly degenerate: half power via pairs)
//   6.0w+  det[[diag(z), -Y], [Y^dag, diag(conj(w))]]^N,        Y GinOE_k
//   6.0W   6.0w+ with every z_l, w_l duplicated and Y GinOE_{2k}
//   5.47   ((-1)^k Pf[[X, D], [-D, X^dag]])^N,  X antisymmetric Gaussian
//          of size 2k, D = diag(z) with z of even length 2k, w empty
//   5.48   det[[X, D], [-D, X^dag]]^N, X complex symmetric Gaussian of size
//          2k; z of even length 2k, w empty
enum class BlockIdentity { k6V, k60vPlus, k60wPlus, k60W, k547, k548 };

MCEstimate estimate_block_rhs(BlockIdentity identity,
                              const std::vector<cplx>& z,
                              const std::vector<cplx>& w, int N,
                              long long n_samples, std::uint64_t master_seed);

// ---------------------------------------------------------------------------
// Identity verification
// ---------------------------------------------------------------------------

// One bag of parameters for every supported identity; unused fields are
// ignored by identities that do not read them.
struct VerifyParams {
  int N = 1;             // outer matrix size parameter
  int k = 1;             // number of characteristic-polynomial pairs / power
  int K = 0;             // spherical weight parameter
  std::vector<cplx> z;   // shift list (length k unless stated otherwise)
  std::vector<cplx> w;   // conjugated-shift list
  double scaling = 1.0;  // global matrix scale
  double alpha = 2.0;    // Jack parameter (SM2, 7.X1, W)
  double a = 0.0;        // Laguerre weight exponent (7.X1)
  double b1 = 0.0;       // Jacobi-type weight exponents (W); b1 must be 0
  double b2 = 0.0;       //   since the gas weight implements (1+x)^-exponent
  int p = 2;             // second variable count (SM2)
  Partition kappa;       // Jack-average identities (7.X1, 16.jlX, t.1, W)
  Partition mu;          // second partition (t.1)
  std::string variant;   // sub-case selector: 7.U3 takes "ginoe" / "ginse"
  std::uint64_t master_seed = 0;
  McmcConfig mcmc;       // used by MCMC-backed sides (7.V1, 7.V2, W)
};

struct DualityReport {
  std::string identity_id;
  VerifyParams params;
  std::optional<cplx> exact_value;
  std::optional<MCEstimate> lhs_mc;
  std::optional<MCEstimate> rhs_mc;
  std::vector<std::string> z_score_labels;  // parallel to z_scores
  std::vector<double> z_scores;
  double threshold = kIidThreshold;
  bool pass = false;
  std::string detail;  // one human-readable summary line
};

// The identity catalogue accepted by verify_identity.
const std::vector<std::string>& supported_identities();

// Computes every side of the named identity that has an exact evaluator
// exactly, every other side by Monte Carlo with the given sample budget, and
// z-scores all pairings.  Residual-mode identities (SM2) perform a
// deterministic check and store the residual in exact_value.  Throws
// std::invalid_argument for unknown ids or inconsistent parameters and
// BudgetError when the budget cannot resolve an error bar.
DualityReport verify_identity(const std::string& identity_id,
                              const VerifyParams& params, long long budget);

// ---------------------------------------------------------------------------
// Exact finite-N ratio convergence experiments
// ---------------------------------------------------------------------------

// One row of a convergence table: the finite-N moment ratio under the global
// scalings (matrices scaled by sqrt(2/N), 1/sqrt(N) or sqrt(1/(2N)) as the
// identity dictates), the large-N prediction, and their relative deviation.
// Both sides are exact evaluations; no Monte Carlo noise enters.
struct RatioRow {
  int N;
  double z_abs;  // |z| for Gaussian ratios, the grid value z for spherical
  double finite_n_ratio;
  double prediction;
  double rel_err;
};

// K1 / K2 / GE1: z_grid values must satisfy |z| < 1 and rows carry the
// explicit Selberg-ratio prediction.  K1x / K2x: rows are spherical moment
// ratios at parameter K, and the prediction is C (1+z^2)^e with the exponent
// pinned to -2k (K1x) or +k (K2x) and the constant C least-squares fitted
// per N over the grid -- fitted, never asserted.
std::vector<RatioRow> ratio_convergence_experiment(
    RatioIdentity identity, int k, const std::vector<double>& z_grid,
    const std::vector<int>& n_schedule, int K = 12);

// Unconstrained least-squares fit of log(ratio) = c + e log(1 + z^2) over
// the grid, for checking the spherical ratio exponents.
struct RatioFit {
  double exponent;
  double log_constant;
};
RatioFit fit_spherical_ratio_exponent(RatioIdentity identity, int k, int K,
                                      int N, const std::vector<double>& z_grid);

}  // namespace jackmc
