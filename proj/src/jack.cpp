#include "jackmc/jack.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace jackmc {

namespace {

std::vector<int> padded(const Partition& p, int n) {
  if (n < static_cast<int>(p.size()))
    throw std::logic_error("padded: would truncate partition");
  std::vector<int> t(p.begin(), p.end());
  t.resize(static_cast<std::size_t>(n), 0);
  return t;
}

cplx ipow(cplx base, int e) {
  cplx r = 1.0;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

double diag_eigenvalue(const std::vector<int>& t, double alpha) {
  // t is the exponent vector sorted descending (a padded partition).
  double e = 0.0;
  int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    e += static_cast<double>(t[i]) * (t[i] - 1);
    e += (2.0 / alpha) * static_cast<double>(n - 1 - i) * t[i];
  }
  return e;
}

Partition sorted_stripped(std::vector<int> v) {
  std::sort(v.begin(), v.end(), std::greater<int>());
  while (!v.empty() && v.back() == 0) v.pop_back();
  return v;
}

// Off-diagonal matrix elements of the pairwise part of the operator, indexed
// target-side: sources[nu] holds the coefficient of m_mu in T m_nu (without
// the 2/alpha prefactor).  Derived from the action on a symmetrized pair of
// exponents (a, b), a > b:
//   T [x^a y^b + x^b y^a] = a (x^a y^b + x^b y^a)
//                           + (a-b) sum_{i=1}^{a-b-1} x^{b+i} y^{a-i},
// so the monomial x^t at positions (j,k) with values (c,d) receives weight
// (a-b) from each source pair (a, b) = (a, c+d-a), a = c+1, ..., c+d.
std::map<Partition, double> offdiag_sources(const Partition& mu, int nvars) {
  std::map<Partition, double> sources;
  std::vector<int> t = padded(mu, nvars);
  int n = static_cast<int>(t.size());
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      int c = t[j], d = t[k];
      for (int a = c + 1; a <= c + d; ++a) {
        int b = c + d - a;
        std::vector<int> v = t;
        v[j] = a;
        v[k] = b;
        sources[sorted_stripped(std::move(v))] += static_cast<double>(a - b);
      }
    }
  }
  return sources;
}

struct TableKey {
  Partition kappa;
  double alpha;
  bool operator<(const TableKey& o) const {
    if (kappa != o.kappa) return kappa < o.kappa;
    return alpha < o.alpha;
  }
};

std::map<TableKey, std::unique_ptr<JackCoefficientTable>> g_tables;
std::shared_mutex g_tables_mutex;

std::unique_ptr<JackCoefficientTable> build_table(const Partition& kappa,
                                                  double alpha) {
  int d = weight(kappa);
  // The coefficients do not depend on the variable count, so solve with the
  // smallest count that exposes every partition of weight d.
  int nvars = std::max(d, 1);

  auto table = std::make_unique<JackCoefficientTable>();
  table->kappa = kappa;
  table->alpha = alpha;

  // Dominance ideal of kappa at weight d, in graded-lex (here: lex-descending)
  // order; kappa is its own lex maximum, so it comes first.
  std::vector<Partition> ideal;
  for (const auto& mu : enumerate_weight_in_box(d, d, d))
    if (dominance_leq(mu, kappa)) ideal.push_back(mu);

  double e_kappa = diag_eigenvalue(padded(kappa, nvars), alpha);
  table->coeffs[kappa] = 1.0;
  for (const auto& mu : ideal) {
    if (mu == kappa) continue;
    double rhs = 0.0;
    for (const auto& [nu, weight_nu] : offdiag_sources(mu, nvars)) {
      auto it = table->coeffs.find(nu);
      if (it != table->coeffs.end()) rhs += weight_nu * it->second;
    }
    rhs *= 2.0 / alpha;
    double gap = e_kappa - diag_eigenvalue(padded(mu, nvars), alpha);
    // gap > 0 for alpha > 0 whenever mu < kappa strictly in dominance
    table->coeffs[mu] = rhs / gap;
  }
  return table;
}

}  // namespace

const JackCoefficientTable& jack_in_monomials(const Partition& kappa,
                                              double alpha) {
  if (!(alpha > 0.0))
    throw std::invalid_argument("jack_in_monomials: alpha <= 0");
  if (!is_partition(kappa))
    throw std::invalid_argument("jack_in_monomials: not a partition");
  if (weight(kappa) > kJackDegreeCap)
    throw std::invalid_argument("jack_in_monomials: degree cap exceeded for " +
                                to_string(kappa));
  TableKey key{kappa, alpha};
  {
    std::shared_lock lock(g_tables_mutex);
    auto it = g_tables.find(key);
    if (it != g_tables.end()) return *it->second;
  }
  auto built = build_table(kappa, alpha);
  std::unique_lock lock(g_tables_mutex);
  auto [it, inserted] = g_tables.emplace(key, std::move(built));
  return *it->second;
}

cplx monomial_eval(const Partition& mu, const std::vector<cplx>& x) {
  int n = static_cast<int>(x.size());
  if (length(mu) > n) return 0.0;
  if (mu.empty()) return 1.0;

  // Group equal parts: (value, multiplicity), values descending.
  std::vector<std::pair<int, int>> blocks;
  for (int part : mu) {
    if (!blocks.empty() && blocks.back().first == part)
      ++blocks.back().second;
    else
      blocks.emplace_back(part, 1);
  }

  // Sum over assignments of disjoint position subsets to each value block.
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  std::function<cplx(std::size_t)> go = [&](std::size_t bi) -> cplx {
    if (bi == blocks.size()) return 1.0;
    auto [value, count] = blocks[bi];
    std::vector<int> free_pos;
    for (int i = 0; i < n; ++i)
      if (!used[i]) free_pos.push_back(i);
    if (static_cast<int>(free_pos.size()) < count) return 0.0;
    cplx total = 0.0;
    std::vector<int> pick(static_cast<std::size_t>(count));
    std::function<void(int, int, cplx)> choose = [&](int from, int chosen,
                                                     cplx prod) {
      if (chosen == count) {
        for (int p : pick) used[p] = 1;
        total += prod * go(bi + 1);
        for (int p : pick) used[p] = 0;
        return;
      }
      for (int idx = from;
           idx <= static_cast<int>(free_pos.size()) - (count - chosen);
           ++idx) {
        pick[chosen] = free_pos[idx];
        choose(idx + 1, chosen + 1, prod * ipow(x[free_pos[idx]], value));
      }
    };
    choose(0, 0, 1.0);
    return total;
  };
  return go(0);
}

cplx jack_eval(const Partition& kappa, double alpha,
               const std::vector<cplx>& x) {
  if (length(kappa) > static_cast<int>(x.size())) return 0.0;
  const auto& table = jack_in_monomials(kappa, alpha);
  cplx sum = 0.0, comp = 0.0;  // Kahan
  for (const auto& [mu, c] : table.coeffs) {
    if (length(mu) > static_cast<int>(x.size())) continue;
    cplx term = c * monomial_eval(mu, x) - comp;
    cplx t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  return sum;
}

double pochhammer_general(double u, const Partition& kappa, double alpha,
                          int n_pad) {
  if (n_pad >= 0 && n_pad < length(kappa))
    throw std::invalid_argument("pochhammer_general: n_pad < length(kappa)");
  double prod = 1.0;
  for (int j = 1; j <= length(kappa); ++j)
    for (int i = 0; i < kappa[j - 1]; ++i)
      prod *= u - (j - 1) / alpha + i;
  return prod;
}

cplx pochhammer_general(cplx u, const Partition& kappa, double alpha,
                        int n_pad) {
  if (n_pad >= 0 && n_pad < length(kappa))
    throw std::invalid_argument("pochhammer_general: n_pad < length(kappa)");
  cplx prod = 1.0;
  for (int j = 1; j <= length(kappa); ++j)
    for (int i = 0; i < kappa[j - 1]; ++i)
      prod *= u - cplx((j - 1) / alpha - i, 0.0);
  return prod;
}

double jack_at_ones(const Partition& kappa, double alpha, int N) {
  if (N < 0) throw std::invalid_argument("jack_at_ones: N < 0");
  if (length(kappa) > N) return 0.0;
  double numer = std::pow(alpha, weight(kappa)) *
                 pochhammer_general(static_cast<double>(N) / alpha, kappa, alpha);
  return numer / hook_products(kappa, alpha).h_lower;
}

namespace {
double c_norm_factor(const Partition& kappa, double alpha) {
  double fact = 1.0;
  for (int i = 2; i <= weight(kappa); ++i) fact *= i;
  return std::pow(alpha, weight(kappa)) * fact /
         hook_products(kappa, alpha).h_upper;
}
}  // namespace

cplx jack_C(const Partition& kappa, double alpha, const std::vector<cplx>& x) {
  return c_norm_factor(kappa, alpha) * jack_eval(kappa, alpha, x);
}

double jack_C_at_ones(const Partition& kappa, double alpha, int N) {
  return c_norm_factor(kappa, alpha) * jack_at_ones(kappa, alpha, N);
}

double dual_cauchy_residual(const std::vector<cplx>& x,
                            const std::vector<cplx>& y, double alpha) {
  int N = static_cast<int>(x.size());
  int p = static_cast<int>(y.size());
  if (N * p > kJackDegreeCap)
    throw std::invalid_argument("dual_cauchy_residual: degree cap exceeded");
  cplx lhs = 1.0;
  for (const auto& xv : x)
    for (const auto& yv : y) lhs *= 1.0 - xv * yv;
  cplx rhs = 0.0, comp = 0.0;
  for (const auto& kappa : enumerate_in_box(p, N)) {
    double sign = weight(kappa) % 2 == 0 ? 1.0 : -1.0;
    cplx term = sign * jack_eval(kappa, alpha, x) *
                    jack_eval(conjugate(kappa), 1.0 / alpha, y) -
                comp;
    cplx t = rhs + term;
    comp = (t - rhs) - term;
    rhs = t;
  }
  double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
  return std::abs(lhs - rhs) / scale;
}

std::map<Partition, double> apply_jack_operator(
    const std::map<Partition, double>& expansion, double alpha, int nvars) {
  if (expansion.empty()) return {};
  int d = weight(expansion.begin()->first);
  for (const auto& [mu, c] : expansion) {
    (void)c;
    if (weight(mu) != d)
      throw std::invalid_argument("apply_jack_operator: mixed weights");
    if (length(mu) > nvars)
      throw std::invalid_argument("apply_jack_operator: too few variables");
  }
  std::map<Partition, double> out;
  for (const auto& mu : enumerate_weight_in_box(d, d, nvars)) {
    double val = 0.0;
    auto self = expansion.find(mu);
    if (self != expansion.end())
      val += diag_eigenvalue(padded(mu, nvars), alpha) * self->second;
    for (const auto& [nu, w] : offdiag_sources(mu, nvars)) {
      auto it = expansion.find(nu);
      if (it != expansion.end()) val += (2.0 / alpha) * w * it->second;
    }
    if (val != 0.0) out[mu] = val;
  }
  return out;
}

double jack_operator_eigenvalue(const Partition& kappa, double alpha,
                                int nvars) {
  return diag_eigenvalue(padded(kappa, nvars), alpha);
}

}  // namespace jackmc
