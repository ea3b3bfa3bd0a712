#include "jackmc/partitions.hpp"

#include <numeric>
#include <stdexcept>

namespace jackmc {

Partition make_partition(std::vector<int> parts) {
  while (!parts.empty() && parts.back() == 0) parts.pop_back();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0)
      throw std::invalid_argument("partition parts must be positive");
    if (i + 1 < parts.size() && parts[i] < parts[i + 1])
      throw std::invalid_argument("partition parts must be weakly decreasing");
  }
  return parts;
}

bool is_partition(const Partition& kappa) {
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (kappa[i] <= 0) return false;
    if (i + 1 < kappa.size() && kappa[i] < kappa[i + 1]) return false;
  }
  return true;
}

int weight(const Partition& kappa) {
  return std::accumulate(kappa.begin(), kappa.end(), 0);
}

int length(const Partition& kappa) { return static_cast<int>(kappa.size()); }

Partition conjugate(const Partition& kappa) {
  Partition out;
  if (kappa.empty()) return out;
  out.resize(kappa[0]);
  for (int j = 1; j <= kappa[0]; ++j) {
    int count = 0;
    for (int part : kappa)
      if (part >= j) ++count;
    out[j - 1] = count;
  }
  return out;
}

bool dominance_leq(const Partition& mu, const Partition& kappa) {
  if (weight(mu) != weight(kappa)) return false;
  int sum_mu = 0, sum_kappa = 0;
  std::size_t n = std::max(mu.size(), kappa.size());
  for (std::size_t i = 0; i < n; ++i) {
    sum_mu += i < mu.size() ? mu[i] : 0;
    sum_kappa += i < kappa.size() ? kappa[i] : 0;
    if (sum_mu > sum_kappa) return false;
  }
  return true;
}

namespace {
void check_cell(const Partition& kappa, int i, int j) {
  if (i < 1 || i > length(kappa) || j < 1 || j > kappa[i - 1])
    throw std::invalid_argument("cell (" + std::to_string(i) + "," +
                                std::to_string(j) +
                                ") outside diagram of " + to_string(kappa));
}
}  // namespace

int arm_length(const Partition& kappa, int i, int j) {
  check_cell(kappa, i, j);
  return kappa[i - 1] - j;
}

int leg_length(const Partition& kappa, int i, int j) {
  check_cell(kappa, i, j);
  int count = 0;
  for (int r = i + 1; r <= length(kappa); ++r)
    if (kappa[r - 1] >= j) ++count;
  return count;
}

HookProducts hook_products(const Partition& kappa, double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("hook_products: alpha <= 0");
  HookProducts hp{1.0, 1.0};
  for (int i = 1; i <= length(kappa); ++i) {
    for (int j = 1; j <= kappa[i - 1]; ++j) {
      double a = arm_length(kappa, i, j);
      double l = leg_length(kappa, i, j);
      hp.h_upper *= alpha * (a + 1.0) + l;
      hp.h_lower *= alpha * a + l + 1.0;
    }
  }
  return hp;
}

namespace {
// Emit partitions of weight w, parts <= max_part, at most max_parts parts,
// in lexicographically descending order (largest first part first).
void emit_weight(int w, int max_part, int max_parts, Partition& prefix,
                 std::vector<Partition>& out) {
  if (w == 0) {
    out.push_back(prefix);
    return;
  }
  if (max_parts == 0) return;
  for (int p = std::min(max_part, w); p >= 1; --p) {
    // Remaining weight must fit in (max_parts - 1) parts each <= p.
    if (w - p > p * (max_parts - 1)) continue;
    prefix.push_back(p);
    emit_weight(w - p, p, max_parts - 1, prefix, out);
    prefix.pop_back();
  }
}
}  // namespace

std::vector<Partition> enumerate_weight_in_box(int w, int max_part,
                                               int max_parts) {
  if (w < 0 || max_part < 0 || max_parts < 0)
    throw std::invalid_argument("enumerate_weight_in_box: negative argument");
  std::vector<Partition> out;
  Partition prefix;
  emit_weight(w, max_part, max_parts, prefix, out);
  return out;
}

std::vector<Partition> enumerate_in_box(int max_part, int max_parts) {
  if (max_part < 0 || max_parts < 0)
    throw std::invalid_argument("enumerate_in_box: negative argument");
  std::vector<Partition> out;
  for (int w = 0; w <= max_part * max_parts; ++w) {
    auto level = enumerate_weight_in_box(w, max_part, max_parts);
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

std::string to_string(const Partition& kappa) {
  std::string s = "(";
  for (std::size_t i = 0; i < kappa.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(kappa[i]);
  }
  s += ")";
  return s;
}

}  // namespace jackmc
