#pragma once

#include <string>
#include <vector>

namespace jackmc {

// An integer partition, stored canonically: weakly decreasing positive parts,
// no trailing zeros.  The empty vector is the empty partition.
using Partition = std::vector<int>;

// Canonicalize: checks the parts are weakly decreasing and nonnegative,
// strips trailing zeros.  Throws std::invalid_argument otherwise.
Partition make_partition(std::vector<int> parts);

bool is_partition(const Partition& kappa);

int weight(const Partition& kappa);  // |kappa|
int length(const Partition& kappa);  // number of nonzero parts

// Conjugate (transpose) partition: kappa'_j = #{ i : kappa_i >= j }.
Partition conjugate(const Partition& kappa);

// Dominance partial order on partitions of equal weight:
// mu <= kappa  iff  sum_{i<=s} mu_i <= sum_{i<=s} kappa_i for all s.
// Returns false when the weights differ (incomparable here by convention).
bool dominance_leq(const Partition& mu, const Partition& kappa);

// Arm and leg lengths of cell s=(i,j) in the diagram of kappa (1-based;
// rows i=1..length, columns j=1..kappa_i).  Throws if outside the diagram.
//   arm: cells strictly right of s in its row,  a(s) = kappa_i - j
//   leg: cells strictly below   s in its column, l(s) = kappa'_j - i
int arm_length(const Partition& kappa, int i, int j);
int leg_length(const Partition& kappa, int i, int j);

// Hook products
//   h_upper = h'_kappa = prod_s ( alpha*(a(s)+1) + l(s) )
//   h_lower = h_kappa  = prod_s ( alpha*a(s) + l(s) + 1 )
// Empty partition gives (1, 1).  Requires alpha > 0.
struct HookProducts {
  double h_upper;
  double h_lower;
};
HookProducts hook_products(const Partition& kappa, double alpha);

// All partitions fitting in the (max_part)^(max_parts) box: every part at most
// max_part, at most max_parts parts.  Ordering is graded (weight ascending)
// with lexicographic descent inside each weight class, which refines dominance
// downward: whenever mu < kappa in dominance, kappa is listed before mu.
std::vector<Partition> enumerate_in_box(int max_part, int max_parts);

// Partitions of fixed weight w inside the same box, lexicographically
// descending ((w) first when it fits, (1,1,...,1) last).
std::vector<Partition> enumerate_weight_in_box(int w, int max_part,
                                               int max_parts);

// Compact display form, e.g. "(3,1,1)"; the empty partition prints "()".
std::string to_string(const Partition& kappa);

}  // namespace jackmc
