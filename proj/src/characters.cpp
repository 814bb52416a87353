// Partitions, symmetric-group characters and the dimension formulas.

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <set>

#include "qdf/error.hpp"
#include "qdf/symmetry.hpp"

namespace qdf {
namespace {

void partitions_rec(int remaining, int max_part, int max_parts, std::vector<int>& cur,
                    std::vector<Partition>& out) {
  if (remaining == 0) {
    out.emplace_back(cur);
    return;
  }
  if (max_parts > 0 && static_cast<int>(cur.size()) >= max_parts) return;
  for (int p = std::min(remaining, max_part); p >= 1; --p) {
    cur.push_back(p);
    partitions_rec(remaining - p, p, max_parts, cur, out);
    cur.pop_back();
  }
}

// Beta-set of a partition padded to r parts: beta_i = lambda_i + (r - 1 - i).
std::vector<int> beta_set(const std::vector<int>& parts, int r) {
  std::vector<int> beta(r);
  for (int i = 0; i < r; ++i) {
    const int li = i < static_cast<int>(parts.size()) ? parts[i] : 0;
    beta[i] = li + (r - 1 - i);
  }
  return beta;
}

std::vector<int> from_beta_set(std::vector<int> beta) {
  std::sort(beta.begin(), beta.end(), std::greater<>());
  const int r = static_cast<int>(beta.size());
  std::vector<int> parts;
  for (int i = 0; i < r; ++i) {
    const int li = beta[i] - (r - 1 - i);
    if (li > 0) parts.push_back(li);
  }
  return parts;
}

using CharacterKey = std::pair<std::vector<int>, std::vector<int>>;

std::int64_t mn_character(const std::vector<int>& lambda, const std::vector<int>& mu,
                          std::map<CharacterKey, std::int64_t>& memo) {
  if (mu.empty()) return lambda.empty() ? 1 : 0;
  CharacterKey key{lambda, mu};
  if (auto it = memo.find(key); it != memo.end()) return it->second;

  // Remove every rim hook of length k = mu[0]; a hook is a move beta -> beta - k
  // into an unoccupied position, with sign (-1)^(occupied positions jumped over).
  const int k = mu.front();
  const std::vector<int> rest(mu.begin() + 1, mu.end());
  const int r = static_cast<int>(lambda.size());
  const std::vector<int> beta = beta_set(lambda, r);
  const std::set<int> occupied(beta.begin(), beta.end());

  std::int64_t value = 0;
  for (int i = 0; i < r; ++i) {
    const int target = beta[i] - k;
    if (target < 0 || occupied.count(target)) continue;
    int jumped = 0;
    for (int b : beta) {
      if (b > target && b < beta[i]) ++jumped;
    }
    std::vector<int> moved = beta;
    moved[i] = target;
    const std::int64_t sub = mn_character(from_beta_set(moved), rest, memo);
    value += (jumped % 2 == 0 ? sub : -sub);
  }
  memo.emplace(std::move(key), value);
  return value;
}

std::mutex g_character_mutex;
std::map<CharacterKey, std::int64_t> g_character_memo;

}  // namespace

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i] <= 0) throw InvalidArgument("partition parts must be positive");
    if (i > 0 && parts_[i] > parts_[i - 1]) {
      throw InvalidArgument("partition parts must be weakly decreasing");
    }
  }
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::vector<Partition> partitions_of(int l, int max_parts) {
  if (l < 0) throw InvalidArgument("partitions_of: negative size");
  std::vector<Partition> out;
  std::vector<int> cur;
  partitions_rec(l, l, max_parts, cur, out);
  return out;
}

std::int64_t sym_group_character(const Partition& lambda, const Partition& cycle_type) {
  if (lambda.size() != cycle_type.size()) {
    throw InvalidArgument("sym_group_character: |lambda| = " + std::to_string(lambda.size()) +
                          " but |cycle type| = " + std::to_string(cycle_type.size()));
  }
  std::lock_guard lock(g_character_mutex);
  return mn_character(lambda.parts(), cycle_type.parts(), g_character_memo);
}

std::int64_t hook_length_dimension(const Partition& lambda) {
  const int l = lambda.size();
  // Conjugate partition gives column lengths for the leg of each hook.
  std::vector<int> columns(lambda.length() ? lambda[0] : 0, 0);
  for (int p : lambda.parts()) {
    for (int j = 0; j < p; ++j) ++columns[j];
  }
  long double value = 1.0L;
  for (int k = 2; k <= l; ++k) value *= k;
  for (int i = 0; i < lambda.length(); ++i) {
    for (int j = 0; j < lambda[i]; ++j) {
      const int hook = (lambda[i] - j - 1) + (columns[j] - i - 1) + 1;
      value /= hook;
    }
  }
  return static_cast<std::int64_t>(std::llround(value));
}

std::int64_t weyl_dimension(const Partition& lambda, int n) {
  if (lambda.length() > n) return 0;
  std::int64_t num = 1, den = 1;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      num *= lambda[i] - lambda[j] + (j - i);
      den *= (j - i);
      const std::int64_t g = std::gcd(num, den);
      num /= g;
      den /= g;
    }
  }
  return num / den;
}

}  // namespace qdf
