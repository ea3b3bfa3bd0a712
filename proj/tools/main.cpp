// jackmc command line: verify duality identities, run exact ratio
// convergence experiments, and evaluate the exact special functions.
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jackmc/charpoly_mc.hpp"
#include "jackmc/ensembles.hpp"
#include "jackmc/jack.hpp"
#include "jackmc/partitions.hpp"
#include "jackmc/report.hpp"
#include "jackmc/specfun.hpp"

namespace {

using jackmc::cplx;

cplx parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    size_t used = 0;
    const std::string re_part = text.substr(0, comma);
    const double re = std::stod(re_part, &used);
    if (used != re_part.size()) throw std::invalid_argument(text);
    double im = 0.0;
    if (comma != std::string::npos) {
      const std::string im_part = text.substr(comma + 1);
      im = std::stod(im_part, &used);
      if (used != im_part.size()) throw std::invalid_argument(text);
    }
    return {re, im};
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse '" + text +
                                "' as a complex number; expected re or re,im");
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, sep)) out.push_back(item);
  return out;
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  if (text.empty()) return out;
  for (const std::string& item : split(text, ';'))
    out.push_back(parse_complex(item));
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  if (text.empty()) return out;
  for (const std::string& item : split(text, ';')) {
    size_t used = 0;
    try {
      out.push_back(std::stod(item, &used));
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size())
      throw std::invalid_argument("cannot parse '" + item +
                                  "' as a real number");
  }
  return out;
}

jackmc::Partition parse_partition(const std::string& text) {
  std::vector<int> parts;
  if (text.empty()) return {};
  for (const std::string& item : split(text, ',')) {
    size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size())
      throw std::invalid_argument("cannot parse partition part '" + item +
                                  "'");
    parts.push_back(value);
  }
  return jackmc::make_partition(parts);
}

jackmc::RatioIdentity parse_ratio_identity(const std::string& name) {
  if (name == "K1") return jackmc::RatioIdentity::kK1;
  if (name == "K2") return jackmc::RatioIdentity::kK2;
  if (name == "K1x") return jackmc::RatioIdentity::kK1x;
  if (name == "K2x") return jackmc::RatioIdentity::kK2x;
  if (name == "GE1") return jackmc::RatioIdentity::kGE1;
  throw std::invalid_argument("unknown ratio identity '" + name +
                              "'; expected K1, K2, K1x, K2x, or GE1");
}

std::string config_hash_of(CLI::App* sub) {
  return jackmc::hex64(
      jackmc::fnv1a64(sub->get_name() + "\n" + sub->config_to_str(true)));
}

// Section-form dump of one subcommand's resolved options; feeding it back
// through --config reproduces the run.
void dump_config(CLI::App* sub) {
  std::cout << '[' << sub->get_name() << "]\n" << sub->config_to_str(true);
}

void emit(const std::string& csv_text, const jackmc::ordered_json& document,
          bool as_json, const std::string& out_path) {
  if (as_json)
    std::cout << document.dump(2) << '\n';
  else
    std::cout << csv_text;
  if (!out_path.empty())
    jackmc::write_text_atomic(out_path, document.dump(2) + "\n");
}

// --- verify ---

struct VerifyOptions {
  std::string identity;
  int N = 1, k = 1, K = 0, p = 2;
  std::string z_text, w_text, kappa_text, mu_text, variant;
  double scaling = 1.0, alpha = 2.0, a = 0.0, b1 = 0.0, b2 = 0.0;
  long long samples = 200000;
  std::uint64_t seed = 0;
  jackmc::McmcConfig mcmc;
  std::string out_path;
  bool as_json = false;
  bool dump_config = false;
};

int run_verify(CLI::App* sub, const VerifyOptions& o) {
  if (o.dump_config) {
    dump_config(sub);
    return 0;
  }
  jackmc::VerifyParams params;
  params.N = o.N;
  params.k = o.k;
  params.K = o.K;
  params.p = o.p;
  params.z = parse_complex_list(o.z_text);
  params.w = parse_complex_list(o.w_text);
  params.kappa = parse_partition(o.kappa_text);
  params.mu = parse_partition(o.mu_text);
  params.variant = o.variant;
  params.scaling = o.scaling;
  params.alpha = o.alpha;
  params.a = o.a;
  params.b1 = o.b1;
  params.b2 = o.b2;
  params.master_seed = o.seed;
  params.mcmc = o.mcmc;
  const jackmc::DualityReport report =
      jackmc::verify_identity(o.identity, params, o.samples);
  const std::string hash = config_hash_of(sub);
  emit(jackmc::report_csv(report, hash),
       jackmc::report_document(report, hash), o.as_json, o.out_path);
  if (!report.pass) std::cerr << report.detail << '\n';
  return report.pass ? 0 : 1;
}

// --- ratio ---

struct RatioOptions {
  std::string identity;
  int k = 1;
  std::string z_text;
  int n_max = 0;
  int K = 12;
  std::string out_path;
  bool as_json = false;
  bool dump_config = false;
};

std::vector<int> gaussian_schedule(int n_max) {
  std::vector<int> schedule;
  for (int n = 5; n < n_max; n *= 2) schedule.push_back(n);
  if (schedule.empty() || schedule.back() != n_max)
    schedule.push_back(n_max);
  return schedule;
}

int run_ratio(CLI::App* sub, const RatioOptions& o) {
  if (o.dump_config) {
    dump_config(sub);
    return 0;
  }
  const jackmc::RatioIdentity identity = parse_ratio_identity(o.identity);
  const bool spherical = identity == jackmc::RatioIdentity::kK1x ||
                         identity == jackmc::RatioIdentity::kK2x;
  std::vector<double> grid = parse_real_list(o.z_text);
  if (grid.empty())
    grid = spherical ? std::vector<double>{0.4, 0.8, 1.2, 1.6}
                     : std::vector<double>{0.0, 0.5};
  const int n_max = o.n_max > 0 ? o.n_max : (spherical ? 2000 : 50);
  const std::vector<int> schedule =
      spherical ? std::vector<int>{n_max} : gaussian_schedule(n_max);
  const std::vector<jackmc::RatioRow> rows =
      jackmc::ratio_convergence_experiment(identity, o.k, grid, schedule, o.K);
  std::optional<jackmc::RatioFit> fit;
  if (spherical && grid.size() >= 2)
    fit = jackmc::fit_spherical_ratio_exponent(identity, o.k, o.K, n_max,
                                               grid);
  const std::string hash = config_hash_of(sub);
  emit(jackmc::ratio_csv(rows, hash, fit),
       jackmc::ratio_document(rows, hash, fit), o.as_json, o.out_path);
  return 0;
}

// --- eval ---

void print_value(cplx v) {
  if (v.imag() == 0.0)
    std::cout << jackmc::format_full(v.real()) << '\n';
  else
    std::cout << jackmc::format_complex(v) << '\n';
}

struct EvalOptions {
  int N = 1;
  int n = 1;
  std::string x_text = "0";
  std::string kappa_text;
  std::string u_text = "0";
  std::string s_text = "0";
  double alpha = 2.0, a = 0.0, a1 = 0.0, a2 = 0.0, b1 = 0.0, beta = 2.0;
};

void run_eval_en(const EvalOptions& o) {
  const cplx x = parse_complex(o.x_text);
  print_value(jackmc::truncated_exp(o.N, x));
  std::cout << "# truncated_exp terms=0.." << o.N << '\n';
}

void run_eval_jack(const EvalOptions& o) {
  const jackmc::Partition kappa = parse_partition(o.kappa_text);
  std::vector<cplx> x;
  for (const std::string& item : split(o.x_text, ','))
    x.push_back(parse_complex(item));
  print_value(jackmc::jack_eval(kappa, o.alpha, x));
  std::cout << "# jack_eval monomial expansion, weight=" << jackmc::weight(kappa)
            << " nvars=" << x.size() << '\n';
  bool all_ones = true;
  for (cplx v : x)
    if (std::abs(v - cplx(1.0, 0.0)) > 1e-12) all_ones = false;
  if (all_ones)
    std::cout << "# at_ones_closed_form="
              << jackmc::format_full(
                     jackmc::jack_at_ones(kappa, o.alpha,
                                          static_cast<int>(x.size())))
              << '\n';
}

void run_eval_hypergeom(const EvalOptions& o) {
  jackmc::HypergeomParams params;
  params.a1 = o.a1;
  params.a2 = o.a2;
  params.b1 = o.b1;
  params.alpha = o.alpha;
  params.s = parse_complex(o.s_text);
  params.N = o.N;
  print_value(jackmc::hypergeom_2f1_jack(params));
  std::cout << "# terminating box: kappa_1 <= " << static_cast<int>(-o.a1)
            << ", length <= " << o.N << '\n';
}

void run_eval_selberg(const EvalOptions& o) {
  print_value(jackmc::selberg_laguerre(o.beta, o.n, o.a));
  std::cout << "# gamma-product evaluation, n=" << o.n << '\n';
}

void run_eval_pochhammer(const EvalOptions& o) {
  const jackmc::Partition kappa = parse_partition(o.kappa_text);
  print_value(
      jackmc::pochhammer_general(parse_complex(o.u_text), kappa, o.alpha));
  std::cout << "# generalized Pochhammer, length=" << jackmc::length(kappa)
            << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duality checks for characteristic polynomial averages"};
  app.set_version_flag("--version", jackmc::kLibraryVersion);
  app.require_subcommand(1);
  // One root-level config file; a [verify] or [ratio] section both selects
  // and configures the subcommand.  Unknown keys are errors.
  app.set_config("--config");
  app.allow_config_extras(CLI::config_extras_mode::error);

  // verify
  VerifyOptions vo;
  CLI::App* verify = app.add_subcommand(
      "verify", "Monte Carlo + exact verification of one identity");
  verify->configurable(true);
  verify->add_option("--identity", vo.identity, "identity id, e.g. A.3a")
      ->required()
      ->capture_default_str();
  verify->add_option("--N,--Nvars", vo.N, "matrix size / variable count")
      ->capture_default_str();
  verify->add_option("--k", vo.k, "number of characteristic polynomial pairs")
      ->capture_default_str();
  verify->add_option("--K", vo.K, "spherical ensemble K parameter")
      ->capture_default_str();
  verify->add_option("--p", vo.p, "second variable count (SM2)")
      ->capture_default_str();
  verify->add_option("--z", vo.z_text, "z shifts: re,im pairs separated by ;")
      ->capture_default_str();
  verify->add_option("--w", vo.w_text, "w shifts: re,im pairs separated by ;")
      ->capture_default_str();
  verify->add_option("--kappa", vo.kappa_text, "partition, e.g. 2,1")
      ->capture_default_str();
  verify->add_option("--mu", vo.mu_text, "second partition (t.1)")
      ->capture_default_str();
  verify->add_option("--variant", vo.variant, "identity variant (7.U3)")
      ->capture_default_str();
  verify->add_option("--scaling", vo.scaling, "global sample scaling")
      ->capture_default_str();
  verify->add_option("--alpha", vo.alpha, "Jack parameter")
      ->capture_default_str();
  verify->add_option("--a", vo.a, "Laguerre weight exponent")
      ->capture_default_str();
  verify->add_option("--b1", vo.b1, "Jacobi-type weight exponent b1")
      ->capture_default_str();
  verify->add_option("--b2", vo.b2, "Jacobi-type weight exponent b2")
      ->capture_default_str();
  verify->add_option("--samples", vo.samples, "Monte Carlo budget")
      ->capture_default_str();
  verify->add_option("--seed", vo.seed, "master RNG seed")
      ->envname("JACKMC_SEED")
      ->capture_default_str();
  verify->add_option("--chains", vo.mcmc.chains, "MCMC chains")
      ->capture_default_str();
  verify->add_option("--burn-in", vo.mcmc.burn_in, "MCMC burn-in steps")
      ->capture_default_str();
  verify->add_option("--thinning", vo.mcmc.thinning, "MCMC thinning")
      ->capture_default_str();
  verify->add_option("--proposal-scale", vo.mcmc.proposal_scale,
                     "MCMC proposal scale")
      ->capture_default_str();
  verify->add_option("--batch-count", vo.mcmc.batch_count,
                     "batch-means batches per chain")
      ->capture_default_str();
  verify->add_option("--out", vo.out_path, "write the JSON report here")
      ->capture_default_str();
  verify->add_flag("--json", vo.as_json, "print JSON instead of CSV")
      ->capture_default_str();
  verify->add_flag("--dump-config", vo.dump_config,
                   "print the resolved config and exit")
      ->capture_default_str();

  // ratio
  RatioOptions ro;
  CLI::App* ratio = app.add_subcommand(
      "ratio", "exact finite-N ratio convergence tables");
  ratio->configurable(true);
  ratio->add_option("--identity", ro.identity, "K1, K2, K1x, K2x, or GE1")
      ->required()
      ->capture_default_str();
  ratio->add_option("--k", ro.k, "moment power parameter")
      ->capture_default_str();
  ratio->add_option("--z", ro.z_text, "real |z| grid, ; separated")
      ->capture_default_str();
  ratio->add_option("--Nmax", ro.n_max, "largest matrix size")
      ->capture_default_str();
  ratio->add_option("--K", ro.K, "spherical ensemble K parameter")
      ->capture_default_str();
  ratio->add_option("--out", ro.out_path, "write the JSON table here")
      ->capture_default_str();
  ratio->add_flag("--json", ro.as_json, "print JSON instead of CSV")
      ->capture_default_str();
  ratio->add_flag("--dump-config", ro.dump_config,
                  "print the resolved config and exit")
      ->capture_default_str();

  // eval
  EvalOptions eo;
  CLI::App* eval = app.add_subcommand("eval", "evaluate one special function");
  eval->require_subcommand(1);
  CLI::App* en = eval->add_subcommand("EN", "truncated exponential E_N(x)");
  en->add_option("--N", eo.N, "truncation order");
  en->add_option("--x", eo.x_text, "argument (re or re,im)");
  CLI::App* jack =
      eval->add_subcommand("jack", "Jack polynomial P_kappa^(alpha)(x)");
  jack->add_option("--kappa", eo.kappa_text, "partition")->required();
  jack->add_option("--alpha", eo.alpha, "Jack parameter");
  jack->add_option("--x", eo.x_text, "variables, comma separated")->required();
  CLI::App* hyp = eval->add_subcommand(
      "hypergeom", "terminating 2F1 of matrix argument");
  hyp->add_option("--a1", eo.a1, "numerator parameter (nonpositive integer)")
      ->required();
  hyp->add_option("--a2", eo.a2, "numerator parameter")->required();
  hyp->add_option("--b1", eo.b1, "denominator parameter")->required();
  hyp->add_option("--alpha", eo.alpha, "Jack parameter");
  hyp->add_option("--s", eo.s_text, "scalar matrix argument (re or re,im)");
  hyp->add_option("--N", eo.N, "number of variables");
  CLI::App* selberg =
      eval->add_subcommand("selberg", "Laguerre Selberg integral W_beta,n(a)");
  selberg->add_option("--beta", eo.beta, "Dyson index");
  selberg->add_option("--n", eo.n, "number of variables");
  selberg->add_option("--a", eo.a, "weight exponent");
  CLI::App* poch = eval->add_subcommand(
      "pochhammer", "generalized Pochhammer [u]_kappa^(alpha)");
  poch->add_option("--u", eo.u_text, "base (re or re,im)")->required();
  poch->add_option("--kappa", eo.kappa_text, "partition")->required();
  poch->add_option("--alpha", eo.alpha, "Jack parameter");

  int result = 0;
  verify->callback([&]() { result = run_verify(verify, vo); });
  ratio->callback([&]() { result = run_ratio(ratio, ro); });
  en->callback([&]() { run_eval_en(eo); });
  jack->callback([&]() { run_eval_jack(eo); });
  hyp->callback([&]() { run_eval_hypergeom(eo); });
  selberg->callback([&]() { run_eval_selberg(eo); });
  poch->callback([&]() { run_eval_pochhammer(eo); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const jackmc::BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return result;
}
