#include "jackmc/report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace jackmc {

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= static_cast<std::uint64_t>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream os;
  os << "0x" << std::hex << std::setfill('0') << std::setw(16) << value;
  return os.str();
}

std::string format_full(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string format_complex(cplx v) {
  return format_full(v.real()) + "," + format_full(v.imag());
}

namespace {

ordered_json complex_json(cplx v) {
  return ordered_json::array({v.real(), v.imag()});
}

ordered_json complex_list_json(const std::vector<cplx>& v) {
  ordered_json out = ordered_json::array();
  for (cplx x : v) out.push_back(complex_json(x));
  return out;
}

}  // namespace

ordered_json to_json(const MCEstimate& est) {
  ordered_json j;
  j["mean"] = complex_json(est.mean);
  j["std_error"] = est.std_error;
  j["n_samples"] = est.n_samples;
  j["seed"] = {{"master_seed", est.seed_path.master_seed},
               {"stream", est.seed_path.stream}};
  j["estimator"] =
      est.estimator_kind == EstimatorKind::kIid ? "iid" : "batch_means";
  return j;
}

ordered_json to_json(const DualityReport& report) {
  ordered_json j;
  j["identity"] = report.identity_id;
  ordered_json params;
  params["N"] = report.params.N;
  params["k"] = report.params.k;
  params["K"] = report.params.K;
  params["z"] = complex_list_json(report.params.z);
  params["w"] = complex_list_json(report.params.w);
  params["scaling"] = report.params.scaling;
  params["alpha"] = report.params.alpha;
  params["a"] = report.params.a;
  params["b1"] = report.params.b1;
  params["b2"] = report.params.b2;
  params["p"] = report.params.p;
  params["kappa"] = report.params.kappa;
  params["mu"] = report.params.mu;
  params["variant"] = report.params.variant;
  params["master_seed"] = report.params.master_seed;
  params["mcmc"] = {{"proposal_scale", report.params.mcmc.proposal_scale},
                    {"burn_in", report.params.mcmc.burn_in},
                    {"thinning", report.params.mcmc.thinning},
                    {"chains", report.params.mcmc.chains},
                    {"batch_count", report.params.mcmc.batch_count}};
  j["params"] = params;
  j["exact_value"] = report.exact_value.has_value()
                         ? complex_json(*report.exact_value)
                         : ordered_json(nullptr);
  j["lhs_mc"] = report.lhs_mc.has_value() ? to_json(*report.lhs_mc)
                                          : ordered_json(nullptr);
  j["rhs_mc"] = report.rhs_mc.has_value() ? to_json(*report.rhs_mc)
                                          : ordered_json(nullptr);
  ordered_json scores = ordered_json::array();
  for (size_t i = 0; i < report.z_scores.size(); ++i)
    scores.push_back({{"label", report.z_score_labels[i]},
                      {"z", report.z_scores[i]}});
  j["z_scores"] = scores;
  j["threshold"] = report.threshold;
  j["pass"] = report.pass;
  j["detail"] = report.detail;
  return j;
}

namespace {

ordered_json envelope(const std::string& kind, const std::string& config_hash) {
  ordered_json j;
  j["schema"] = kReportSchemaVersion;
  j["version"] = kLibraryVersion;
  j["kind"] = kind;
  j["config_hash"] = config_hash;
  return j;
}

}  // namespace

ordered_json report_document(const DualityReport& report,
                             const std::string& config_hash) {
  ordered_json j = envelope("duality_report", config_hash);
  j["report"] = to_json(report);
  return j;
}

ordered_json ratio_document(const std::vector<RatioRow>& rows,
                            const std::string& config_hash,
                            const std::optional<RatioFit>& fit) {
  ordered_json j = envelope("ratio_table", config_hash);
  ordered_json table = ordered_json::array();
  for (const RatioRow& row : rows)
    table.push_back({{"N", row.N},
                     {"z_abs", row.z_abs},
                     {"finite_N_ratio", row.finite_n_ratio},
                     {"prediction", row.prediction},
                     {"rel_err", row.rel_err}});
  j["rows"] = table;
  if (fit.has_value())
    j["fit"] = {{"exponent", fit->exponent},
                {"log_constant", fit->log_constant}};
  else
    j["fit"] = nullptr;
  return j;
}

namespace {

std::string csv_header_comment(const std::string& config_hash) {
  return std::string("# jackmc ") + kLibraryVersion + " schema=" +
         std::to_string(kReportSchemaVersion) + " config=" + config_hash +
         "\n";
}

void append_optional_estimate(std::ostringstream& os,
                              const std::optional<MCEstimate>& est) {
  if (est.has_value())
    os << ',' << format_full(est->mean.real()) << ','
       << format_full(est->mean.imag()) << ',' << format_full(est->std_error);
  else
    os << ",,,";
}

}  // namespace

std::string report_csv(const DualityReport& report,
                       const std::string& config_hash) {
  std::ostringstream os;
  os << csv_header_comment(config_hash);
  os << "identity,pass,threshold,max_abs_z,exact_re,exact_im,"
        "lhs_re,lhs_im,lhs_se,rhs_re,rhs_im,rhs_se,n_samples\n";
  double max_z = 0.0;
  for (double z : report.z_scores) max_z = std::max(max_z, std::abs(z));
  os << report.identity_id << ',' << (report.pass ? 1 : 0) << ','
     << format_full(report.threshold) << ',' << format_full(max_z);
  if (report.exact_value.has_value())
    os << ',' << format_full(report.exact_value->real()) << ','
       << format_full(report.exact_value->imag());
  else
    os << ",,";
  append_optional_estimate(os, report.lhs_mc);
  append_optional_estimate(os, report.rhs_mc);
  os << ',' << (report.lhs_mc.has_value() ? report.lhs_mc->n_samples : 0)
     << '\n';
  return os.str();
}

std::string ratio_csv(const std::vector<RatioRow>& rows,
                      const std::string& config_hash,
                      const std::optional<RatioFit>& fit) {
  std::ostringstream os;
  os << csv_header_comment(config_hash);
  os << "N,|z|,finite_N_ratio,prediction,rel_err\n";
  for (const RatioRow& row : rows)
    os << row.N << ',' << format_full(row.z_abs) << ','
       << format_full(row.finite_n_ratio) << ',' << format_full(row.prediction)
       << ',' << format_full(row.rel_err) << '\n';
  if (fit.has_value())
    os << "# fitted_exponent=" << format_full(fit->exponent)
       << " fitted_log_constant=" << format_full(fit->log_constant) << '\n';
  return os.str();
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw std::runtime_error("write_text_atomic: cannot open " + tmp);
    out << text;
    out.flush();
    if (!out)
      throw std::runtime_error("write_text_atomic: short write to " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("write_text_atomic: rename to " + path +
                             " failed");
  }
}

}  // namespace jackmc
