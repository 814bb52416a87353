#include "qdf/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "qdf/error.hpp"

namespace qdf {
namespace {

Eigen::Index ipow(Eigen::Index base, int e) {
  Eigen::Index r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

void require_degree(int l, const char* what) {
  if (l < 0 || l > kMaxSymmetricDegree) {
    throw InvalidArgument(std::string(what) + ": degree " + std::to_string(l) +
                          " outside the enumeration bound 0.." +
                          std::to_string(kMaxSymmetricDegree));
  }
}

// map(i) = j with j_{sigma(k)} = i_k, digits of i in base n, slot 0 most significant.
std::vector<Eigen::Index> slot_map(int n, const LegPermutation& sigma) {
  const int l = sigma.size();
  const Eigen::Index size = ipow(n, l);
  std::vector<Eigen::Index> weight(l);
  for (int k = 0; k < l; ++k) weight[k] = ipow(n, l - 1 - k);
  std::vector<Eigen::Index> out(size);
  for (Eigen::Index i = 0; i < size; ++i) {
    Eigen::Index rem = i, j = 0;
    for (int k = 0; k < l; ++k) {
      const Eigen::Index digit = rem / weight[k];
      rem %= weight[k];
      j += digit * weight[sigma(k)];
    }
    out[i] = j;
  }
  return out;
}

// Index map on the full operator space for permuting legs [first, first + l).
std::vector<Eigen::Index> full_map(const LeggedOperator& x, const LegPermutation& sigma,
                                   int first) {
  const auto& legs = x.legs();
  const int l = sigma.size();
  Eigen::Index pre = 1, post = 1;
  for (int i = 0; i < first; ++i) pre *= legs[i];
  for (std::size_t i = first + l; i < legs.size(); ++i) post *= legs[i];
  const int n = l ? legs[first] : 1;
  const std::vector<Eigen::Index> inner = slot_map(n, sigma);
  const Eigen::Index mid = static_cast<Eigen::Index>(inner.size());
  std::vector<Eigen::Index> out(x.side());
  for (Eigen::Index a = 0; a < pre; ++a) {
    for (Eigen::Index i = 0; i < mid; ++i) {
      for (Eigen::Index b = 0; b < post; ++b) {
        out[(a * mid + i) * post + b] = (a * mid + inner[i]) * post + b;
      }
    }
  }
  return out;
}

int check_range(const LeggedOperator& x, int first, int count, const char* what) {
  const auto& legs = x.legs();
  if (first < 0) first = static_cast<int>(legs.size()) - count;
  if (first < 0 || first + count > static_cast<int>(legs.size())) {
    throw InvalidArgument(std::string(what) + ": permutation of " + std::to_string(count) +
                          " legs does not fit an operator with " + std::to_string(legs.size()) +
                          " legs");
  }
  for (int k = 1; k < count; ++k) {
    if (legs[first + k] != legs[first]) {
      throw InvalidArgument(std::string(what) + ": permuted legs must share one dimension");
    }
  }
  return first;
}

Matrix apply_map(const Matrix& x, const std::vector<Eigen::Index>& map) {
  const Eigen::Index n = x.rows();
  Matrix out(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = 0; r < n; ++r) out(r, c) = x(map[r], map[c]);
  }
  return out;
}

// Two-pass classical Gram-Schmidt over the columns of m, keeping columns whose
// residual norm exceeds tol.
Matrix orthonormal_columns(const Matrix& m, double tol = 1e-8) {
  std::vector<Eigen::VectorXcd> basis;
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::VectorXcd v = m.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) v -= b * b.dot(v);
    }
    const double norm = v.norm();
    if (norm > tol) basis.push_back(v / norm);
  }
  Matrix out(m.rows(), static_cast<Eigen::Index>(basis.size()));
  for (std::size_t k = 0; k < basis.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = basis[k];
  return out;
}

// All permutations of {0..l-1} that map each block of `blocks` onto itself.
std::vector<LegPermutation> block_preserving(int l, const std::vector<std::vector<int>>& blocks) {
  std::vector<std::vector<int>> acc{std::vector<int>(l)};
  std::iota(acc.front().begin(), acc.front().end(), 0);
  for (const auto& block : blocks) {
    std::vector<int> keys = block;
    std::sort(keys.begin(), keys.end());
    std::vector<int> arrangement = keys;
    std::vector<std::vector<int>> next;
    do {
      for (const auto& base : acc) {
        std::vector<int> images = base;
        for (std::size_t k = 0; k < keys.size(); ++k) images[keys[k]] = arrangement[k];
        next.push_back(std::move(images));
      }
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    acc = std::move(next);
  }
  std::vector<LegPermutation> out;
  out.reserve(acc.size());
  for (auto& images : acc) out.emplace_back(std::move(images));
  return out;
}

struct ProjectorKey {
  int n;
  std::vector<int> parts;
  int copy;
  auto operator<=>(const ProjectorKey&) const = default;
};

std::mutex g_cache_mutex;
std::map<ProjectorKey, Matrix> g_projector_cache;
std::map<ProjectorKey, Matrix> g_basis_cache;

void require_projector_size(int n, int l) {
  require_degree(l, "isotypic projector");
  if (n <= 0) throw InvalidArgument("isotypic projector: n must be positive");
  if (ipow(n, l) > kMaxProjectorSide) {
    throw InvalidArgument("isotypic projector: n^l = " + std::to_string(ipow(n, l)) +
                          " exceeds the supported side " + std::to_string(kMaxProjectorSide));
  }
}

Matrix young_symmetrizer(int n, const Partition& lambda, const std::vector<int>& tableau) {
  const int l = lambda.size();
  std::vector<std::vector<int>> rows, cols(lambda.length() ? lambda[0] : 0);
  int box = 0;
  for (int i = 0; i < lambda.length(); ++i) {
    std::vector<int> row;
    for (int j = 0; j < lambda[i]; ++j, ++box) {
      row.push_back(tableau[box]);
      cols[j].push_back(tableau[box]);
    }
    rows.push_back(std::move(row));
  }
  const Eigen::Index side = ipow(n, l);
  Matrix row_sum = Matrix::Zero(side, side);
  for (const auto& r : block_preserving(l, rows)) row_sum += slot_permutation_matrix(n, r);
  Matrix col_sum = Matrix::Zero(side, side);
  for (const auto& c : block_preserving(l, cols)) {
    col_sum += static_cast<double>(c.sign()) * slot_permutation_matrix(n, c);
  }
  return col_sum * row_sum;
}

}  // namespace

LegPermutation::LegPermutation(std::vector<int> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (int v : images_) {
    if (v < 0 || v >= static_cast<int>(images_.size()) || seen[v]) {
      throw InvalidArgument("LegPermutation: images are not a bijection");
    }
    seen[v] = true;
  }
}

LegPermutation LegPermutation::identity(int l) {
  std::vector<int> images(l);
  std::iota(images.begin(), images.end(), 0);
  return LegPermutation(std::move(images));
}

LegPermutation LegPermutation::inverse() const {
  std::vector<int> inv(images_.size());
  for (std::size_t k = 0; k < images_.size(); ++k) inv[images_[k]] = static_cast<int>(k);
  return LegPermutation(std::move(inv));
}

Partition LegPermutation::cycle_type() const {
  std::vector<bool> seen(images_.size(), false);
  std::vector<int> lengths;
  for (std::size_t s = 0; s < images_.size(); ++s) {
    if (seen[s]) continue;
    int len = 0;
    for (std::size_t k = s; !seen[k]; k = images_[k]) {
      seen[k] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  return Partition(std::move(lengths));
}

int LegPermutation::sign() const {
  const Partition ct = cycle_type();
  int even_cycles = 0;
  for (int len : ct.parts()) even_cycles += (len % 2 == 0);
  return even_cycles % 2 ? -1 : 1;
}

LegPermutation compose(const LegPermutation& s, const LegPermutation& t) {
  if (s.size() != t.size()) throw InvalidArgument("compose: permutation sizes differ");
  std::vector<int> images(s.size());
  for (int k = 0; k < s.size(); ++k) images[k] = t(s(k));
  return LegPermutation(std::move(images));
}

const std::vector<LegPermutation>& all_permutations(int l) {
  require_degree(l, "all_permutations");
  static std::once_flag flags[kMaxSymmetricDegree + 1];
  static std::vector<LegPermutation> tables[kMaxSymmetricDegree + 1];
  std::call_once(flags[l], [l] {
    std::vector<int> images(l);
    std::iota(images.begin(), images.end(), 0);
    do {
      tables[l].emplace_back(images);
    } while (std::next_permutation(images.begin(), images.end()));
  });
  return tables[l];
}

LeggedOperator permute_legs(const LeggedOperator& x, const LegPermutation& sigma, int first_leg) {
  const int first = check_range(x, first_leg, sigma.size(), "permute_legs");
  return {apply_map(x.matrix(), full_map(x, sigma, first)), x.legs()};
}

LeggedOperator symmetrize(const LeggedOperator& x, LegRange which) {
  require_degree(which.count, "symmetrize");
  const int first = check_range(x, which.first, which.count, "symmetrize");
  const auto& perms = all_permutations(which.count);
  const Matrix& m = x.matrix();
  const Eigen::Index n = m.rows();
  Matrix acc = Matrix::Zero(n, n);
  for (const auto& sigma : perms) {
    const auto map = full_map(x, sigma, first);
    for (Eigen::Index c = 0; c < n; ++c) {
      for (Eigen::Index r = 0; r < n; ++r) acc(r, c) += m(map[r], map[c]);
    }
  }
  acc /= static_cast<double>(perms.size());
  return {std::move(acc), x.legs()};
}

LeggedOperator symmetrize_tail(const LeggedOperator& x) {
  const int count = static_cast<int>(x.num_legs()) - 1;
  if (count <= 1) return x;
  return symmetrize(x, {1, count});
}

Matrix slot_permutation_matrix(int n, const LegPermutation& sigma) {
  const auto map = slot_map(n, sigma);
  const auto side = static_cast<Eigen::Index>(map.size());
  Matrix u = Matrix::Zero(side, side);
  for (Eigen::Index i = 0; i < side; ++i) u(map[i], i) = 1.0;
  return u;
}

LeggedOperator isotypic_projector(int n, const Partition& lambda) {
  const int l = lambda.size();
  require_projector_size(n, l);
  std::vector<int> legs(l, n);
  if (lambda.length() > n) return LeggedOperator::zero(legs);

  const ProjectorKey key{n, lambda.parts(), -1};
  {
    std::lock_guard lock(g_cache_mutex);
    if (auto it = g_projector_cache.find(key); it != g_projector_cache.end()) {
      return {it->second, legs};
    }
  }
  const auto& perms = all_permutations(l);
  const Eigen::Index side = ipow(n, l);
  const double d_lambda = static_cast<double>(sym_group_character(lambda, Partition(std::vector<int>(l, 1))));
  std::map<Partition, double> class_weight;
  Matrix p = Matrix::Zero(side, side);
  for (const auto& sigma : perms) {
    const Partition ct = sigma.cycle_type();
    auto it = class_weight.find(ct);
    if (it == class_weight.end()) {
      it = class_weight.emplace(ct, static_cast<double>(sym_group_character(lambda, ct))).first;
    }
    if (it->second == 0.0) continue;
    const auto map = slot_map(n, sigma);
    for (Eigen::Index i = 0; i < side; ++i) p(map[i], i) += it->second;
  }
  p *= d_lambda / static_cast<double>(perms.size());
  {
    std::lock_guard lock(g_cache_mutex);
    g_projector_cache.emplace(key, p);
  }
  return {std::move(p), legs};
}

Matrix isotypic_basis(int n, const Partition& lambda) {
  const LeggedOperator p = isotypic_projector(n, lambda);
  if (lambda.length() > n) return Matrix(p.side(), 0);
  return orthonormal_columns(p.matrix());
}

std::vector<std::vector<int>> standard_tableaux(const Partition& lambda) {
  const int l = lambda.size();
  const int rows = lambda.length();
  std::vector<std::vector<int>> out;
  std::vector<int> filled(rows, 0);
  // entry_at[row][col] assigned in increasing order of entries.
  std::vector<std::vector<int>> grid(rows);
  for (int i = 0; i < rows; ++i) grid[i].assign(lambda[i], -1);

  auto rec = [&](auto&& self, int next) -> void {
    if (next == l) {
      std::vector<int> flat;
      for (const auto& row : grid) flat.insert(flat.end(), row.begin(), row.end());
      out.push_back(std::move(flat));
      return;
    }
    for (int i = 0; i < rows; ++i) {
      if (filled[i] >= lambda[i]) continue;
      if (i > 0 && filled[i - 1] <= filled[i]) continue;
      grid[i][filled[i]] = next;
      ++filled[i];
      self(self, next + 1);
      --filled[i];
      grid[i][filled[i]] = -1;
    }
  };
  rec(rec, 0);
  return out;
}

Matrix irrep_copy_basis(int n, const Partition& lambda, int copy) {
  const int l = lambda.size();
  require_projector_size(n, l);
  const auto tableaux = standard_tableaux(lambda);
  if (copy < 0 || copy >= static_cast<int>(tableaux.size())) {
    throw InvalidArgument("irrep_copy_basis: copy index " + std::to_string(copy) +
                          " out of range (" + std::to_string(tableaux.size()) + " copies)");
  }
  if (lambda.length() > n) return Matrix(ipow(n, l), 0);

  const ProjectorKey key{n, lambda.parts(), copy};
  {
    std::lock_guard lock(g_cache_mutex);
    if (auto it = g_basis_cache.find(key); it != g_basis_cache.end()) return it->second;
  }
  Matrix basis0;
  {
    const ProjectorKey key0{n, lambda.parts(), 0};
    std::unique_lock lock(g_cache_mutex);
    auto it = g_basis_cache.find(key0);
    if (it != g_basis_cache.end()) {
      basis0 = it->second;
    } else {
      lock.unlock();
      basis0 = orthonormal_columns(young_symmetrizer(n, lambda, tableaux.front()));
      lock.lock();
      g_basis_cache.emplace(key0, basis0);
    }
  }
  // Row-reading tableau has entry b in box b, so the carrying permutation is tableau[b].
  const Matrix basis = slot_permutation_matrix(n, LegPermutation(tableaux[copy])) * basis0;
  std::lock_guard lock(g_cache_mutex);
  g_basis_cache.emplace(key, basis);
  return basis;
}

std::vector<SchurWeylBlock> schur_weyl_table(int n, int l) {
  require_projector_size(n, l);
  std::vector<SchurWeylBlock> out;
  for (const auto& lambda : partitions_of(l, n)) {
    const LeggedOperator p = isotypic_projector(n, lambda);
    const double tr = p.trace().real();
    const double rank = std::round(tr);
    if (std::abs(tr - rank) >= 1e-6) {
      throw NumericalError("schur_weyl_table: projector trace " + std::to_string(tr) +
                           " is not near an integer");
    }
    if (rank == 0.0) continue;
    const std::int64_t dim = weyl_dimension(lambda, n);
    const auto r = static_cast<std::int64_t>(rank);
    if (dim <= 0 || r % dim != 0) {
      throw NumericalError("schur_weyl_table: rank " + std::to_string(r) +
                           " is not a multiple of the irrep dimension " + std::to_string(dim));
    }
    out.push_back({lambda, dim, r / dim});
  }
  return out;
}

}  // namespace qdf
