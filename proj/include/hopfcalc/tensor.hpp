#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hopfcalc/rational.hpp"

namespace hopfcalc {

using Index = std::vector<int64_t>;

// Sparse multi-index tensor over Rat.
//
// Conventions used throughout the library:
//   * indices are row-major encoded into a single uint64 key,
//   * no zero entry is ever stored,
//   * rank 0 is allowed (a scalar: one slot, key 0).
class SparseTensor {
 public:
  SparseTensor() = default;

  explicit SparseTensor(Index shape) : shape_(std::move(shape)) {
    strides_.assign(shape_.size(), 1);
    int64_t total = 1;
    for (int i = static_cast<int>(shape_.size()) - 1; i >= 0; --i) {
      if (shape_[i] <= 0) throw std::invalid_argument("tensor dimension must be positive");
      strides_[i] = total;
      total *= shape_[i];
      if (total < 0) throw std::overflow_error("tensor too large");
    }
    total_ = total;
  }

  static SparseTensor scalar(const Rat& v) {
    SparseTensor t{Index{}};
    if (!is_zero(v)) t.a_[0] = v;
    return t;
  }

  int rank() const { return static_cast<int>(shape_.size()); }
  const Index& shape() const { return shape_; }
  int64_t dim(int axis) const { return shape_.at(axis); }
  int64_t total_size() const { return total_; }
  size_t nnz() const { return a_.size(); }
  bool is_zero_tensor() const { return a_.empty(); }

  uint64_t encode(const Index& idx) const {
    if (idx.size() != shape_.size()) throw std::invalid_argument("index rank mismatch");
    uint64_t key = 0;
    for (size_t i = 0; i < idx.size(); ++i) {
      if (idx[i] < 0 || idx[i] >= shape_[i]) throw std::out_of_range("tensor index out of range");
      key += static_cast<uint64_t>(idx[i]) * static_cast<uint64_t>(strides_[i]);
    }
    return key;
  }

  Index decode(uint64_t key) const {
    Index idx(shape_.size());
    for (size_t i = 0; i < shape_.size(); ++i) {
      idx[i] = static_cast<int64_t>(key / static_cast<uint64_t>(strides_[i]));
      key %= static_cast<uint64_t>(strides_[i]);
    }
    return idx;
  }

  Rat at(const Index& idx) const {
    auto it = a_.find(encode(idx));
    return it == a_.end() ? Rat(0) : it->second;
  }

  void set(const Index& idx, const Rat& v) {
    uint64_t k = encode(idx);
    if (is_zero(v))
      a_.erase(k);
    else
      a_[k] = v;
  }

  void add_at(const Index& idx, const Rat& v) { add_key(encode(idx), v); }

  void add_key(uint64_t k, const Rat& v) {
    if (is_zero(v)) return;
    auto [it, inserted] = a_.emplace(k, v);
    if (!inserted) {
      it->second += v;
      if (is_zero(it->second)) a_.erase(it);
    }
  }

  const std::map<uint64_t, Rat>& entries() const { return a_; }

  SparseTensor& operator+=(const SparseTensor& o) {
    if (shape_ != o.shape_) throw std::invalid_argument("tensor shape mismatch in +=");
    for (const auto& [k, v] : o.a_) add_key(k, v);
    return *this;
  }

  SparseTensor& operator-=(const SparseTensor& o) {
    if (shape_ != o.shape_) throw std::invalid_argument("tensor shape mismatch in -=");
    for (const auto& [k, v] : o.a_) add_key(k, -v);
    return *this;
  }

  friend SparseTensor operator+(SparseTensor a, const SparseTensor& b) { return a += b; }
  friend SparseTensor operator-(SparseTensor a, const SparseTensor& b) { return a -= b; }

  SparseTensor scaled(const Rat& c) const {
    SparseTensor r(shape_);
    if (is_zero(c)) return r;
    for (const auto& [k, v] : a_) r.a_[k] = v * c;
    return r;
  }

  bool operator==(const SparseTensor& o) const { return shape_ == o.shape_ && a_ == o.a_; }
  bool operator!=(const SparseTensor& o) const { return !(*this == o); }

  // First index where *this and o differ, if any.
  std::optional<Index> first_difference(const SparseTensor& o) const {
    if (shape_ != o.shape_) throw std::invalid_argument("tensor shape mismatch in compare");
    auto it = a_.begin();
    auto jt = o.a_.begin();
    while (it != a_.end() || jt != o.a_.end()) {
      if (jt == o.a_.end() || (it != a_.end() && it->first < jt->first)) return decode(it->first);
      if (it == a_.end() || jt->first < it->first) return decode(jt->first);
      if (it->second != jt->second) return decode(it->first);
      ++it;
      ++jt;
    }
    return std::nullopt;
  }

 private:
  Index shape_;
  Index strides_;
  int64_t total_ = 1;
  std::map<uint64_t, Rat> a_;
};

// result axis i = input axis perm[i].
inline SparseTensor permute(const SparseTensor& t, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != t.rank()) throw std::invalid_argument("permute rank mismatch");
  Index shape(perm.size());
  for (size_t i = 0; i < perm.size(); ++i) shape[i] = t.dim(perm[i]);
  SparseTensor r(shape);
  Index idx(perm.size());
  for (const auto& [k, v] : t.entries()) {
    Index src = t.decode(k);
    for (size_t i = 0; i < perm.size(); ++i) idx[i] = src[perm[i]];
    r.add_at(idx, v);
  }
  return r;
}

inline SparseTensor outer(const SparseTensor& a, const SparseTensor& b) {
  Index shape = a.shape();
  shape.insert(shape.end(), b.shape().begin(), b.shape().end());
  SparseTensor r(shape);
  for (const auto& [ka, va] : a.entries()) {
    Index ia = a.decode(ka);
    for (const auto& [kb, vb] : b.entries()) {
      Index idx = ia;
      Index ib = b.decode(kb);
      idx.insert(idx.end(), ib.begin(), ib.end());
      r.add_at(idx, va * vb);
    }
  }
  return r;
}

// Contracts paired axes (ax_of_a, ax_of_b).  Output shape: remaining axes of a
// in order, then remaining axes of b.
inline SparseTensor contract(const SparseTensor& a, const SparseTensor& b,
                             const std::vector<std::pair<int, int>>& axes) {
  std::vector<bool> ca(a.rank(), false), cb(b.rank(), false);
  for (auto [i, j] : axes) {
    if (i < 0 || i >= a.rank() || j < 0 || j >= b.rank()) throw std::invalid_argument("contract axis out of range");
    if (a.dim(i) != b.dim(j)) throw std::invalid_argument("contract dimension mismatch");
    if (ca[i] || cb[j]) throw std::invalid_argument("contract axis repeated");
    ca[i] = true;
    cb[j] = true;
  }
  std::vector<int> keep_a, keep_b;
  for (int i = 0; i < a.rank(); ++i)
    if (!ca[i]) keep_a.push_back(i);
  for (int j = 0; j < b.rank(); ++j)
    if (!cb[j]) keep_b.push_back(j);

  Index shape;
  for (int i : keep_a) shape.push_back(a.dim(i));
  for (int j : keep_b) shape.push_back(b.dim(j));
  SparseTensor r(shape);

  // Index b's entries by the contracted coordinates.
  std::unordered_map<uint64_t, std::vector<std::pair<uint64_t, const Rat*>>> groups;
  SparseTensor keyspace = [&] {
    Index ks;
    for (auto [i, j] : axes) ks.push_back(b.dim(j));
    if (ks.empty()) ks.push_back(1);
    return SparseTensor(ks);
  }();
  auto contracted_key_b = [&](const Index& ib) {
    Index c;
    for (auto [i, j] : axes) c.push_back(ib[j]);
    if (c.empty()) c.push_back(0);
    return keyspace.encode(c);
  };
  auto contracted_key_a = [&](const Index& ia) {
    Index c;
    for (auto [i, j] : axes) c.push_back(ia[i]);
    if (c.empty()) c.push_back(0);
    return keyspace.encode(c);
  };
  for (const auto& [kb, vb] : b.entries()) {
    Index ib = b.decode(kb);
    groups[contracted_key_b(ib)].emplace_back(kb, &vb);
  }

  Index idx(shape.size());
  for (const auto& [ka, va] : a.entries()) {
    Index ia = a.decode(ka);
    auto grp = groups.find(contracted_key_a(ia));
    if (grp == groups.end()) continue;
    for (size_t p = 0; p < keep_a.size(); ++p) idx[p] = ia[keep_a[p]];
    for (const auto& [kb, vb] : grp->second) {
      Index ib = b.decode(kb);
      for (size_t p = 0; p < keep_b.size(); ++p) idx[keep_a.size() + p] = ib[keep_b[p]];
      r.add_at(idx, va * (*vb));
    }
  }
  return r;
}

// Contracts two axes of the same tensor.
inline SparseTensor self_trace(const SparseTensor& t, int ax1, int ax2) {
  if (ax1 == ax2 || t.dim(ax1) != t.dim(ax2)) throw std::invalid_argument("bad trace axes");
  std::vector<int> keep;
  for (int i = 0; i < t.rank(); ++i)
    if (i != ax1 && i != ax2) keep.push_back(i);
  Index shape;
  for (int i : keep) shape.push_back(t.dim(i));
  SparseTensor r(shape);
  Index idx(shape.size());
  for (const auto& [k, v] : t.entries()) {
    Index src = t.decode(k);
    if (src[ax1] != src[ax2]) continue;
    for (size_t p = 0; p < keep.size(); ++p) idx[p] = src[keep[p]];
    r.add_at(idx, v);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Dense exact matrices.  Used for the small structural solves (row reduction,
// inverses, kernels); the big operators stay sparse.

class Matrix {
 public:
  Matrix() = default;
  Matrix(int64_t rows, int64_t cols) : rows_(rows), cols_(cols), a_(rows * cols, Rat(0)) {}

  static Matrix identity(int64_t n) {
    Matrix m(n, n);
    for (int64_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int64_t rows() const { return rows_; }
  int64_t cols() const { return cols_; }

  Rat& operator()(int64_t i, int64_t j) { return a_[i * cols_ + j]; }
  const Rat& operator()(int64_t i, int64_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int64_t i = 0; i < rows_; ++i)
      for (int64_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& x, const Matrix& y) {
    if (x.cols_ != y.rows_) throw std::invalid_argument("matmul shape mismatch");
    Matrix r(x.rows_, y.cols_);
    for (int64_t i = 0; i < x.rows_; ++i)
      for (int64_t k = 0; k < x.cols_; ++k) {
        if (is_zero(x(i, k))) continue;
        for (int64_t j = 0; j < y.cols_; ++j)
          if (!is_zero(y(k, j))) r(i, j) += x(i, k) * y(k, j);
      }
    return r;
  }

  std::vector<Rat> apply(const std::vector<Rat>& v) const {
    if (static_cast<int64_t>(v.size()) != cols_) throw std::invalid_argument("matvec shape mismatch");
    std::vector<Rat> r(rows_, Rat(0));
    for (int64_t i = 0; i < rows_; ++i)
      for (int64_t j = 0; j < cols_; ++j)
        if (!is_zero((*this)(i, j)) && !is_zero(v[j])) r[i] += (*this)(i, j) * v[j];
    return r;
  }

  SparseTensor to_tensor() const {
    SparseTensor t(Index{rows_, cols_});
    for (int64_t i = 0; i < rows_; ++i)
      for (int64_t j = 0; j < cols_; ++j)
        if (!is_zero((*this)(i, j))) t.set({i, j}, (*this)(i, j));
    return t;
  }

  static Matrix from_tensor(const SparseTensor& t) {
    if (t.rank() != 2) throw std::invalid_argument("matrix tensor must have rank 2");
    Matrix m(t.dim(0), t.dim(1));
    for (const auto& [k, v] : t.entries()) {
      Index idx = t.decode(k);
      m(idx[0], idx[1]) = v;
    }
    return m;
  }

 private:
  int64_t rows_ = 0, cols_ = 0;
  std::vector<Rat> a_;
};

struct RrefResult {
  Matrix reduced;
  std::vector<int64_t> pivots;
  int64_t rank = 0;
};

inline RrefResult rref(Matrix m) {
  RrefResult res;
  int64_t r = 0;
  for (int64_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    int64_t piv = -1;
    for (int64_t i = r; i < m.rows(); ++i)
      if (!is_zero(m(i, c))) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int64_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Rat inv = 1 / m(r, c);
    for (int64_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int64_t i = 0; i < m.rows(); ++i) {
      if (i == r || is_zero(m(i, c))) continue;
      Rat f = m(i, c);
      for (int64_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    res.pivots.push_back(c);
    ++r;
  }
  res.rank = r;
  res.reduced = std::move(m);
  return res;
}

inline int64_t rank(const Matrix& m) { return rref(m).rank; }

// Exact solve of a x = b.  Underdetermined systems get their free variables
// zeroed; returns nullopt when inconsistent.
inline std::optional<std::vector<Rat>> solve_linear(const Matrix& a, const std::vector<Rat>& b) {
  if (static_cast<int64_t>(b.size()) != a.rows()) throw std::invalid_argument("solve shape mismatch");
  Matrix aug(a.rows(), a.cols() + 1);
  for (int64_t i = 0; i < a.rows(); ++i) {
    for (int64_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  RrefResult rr = rref(std::move(aug));
  for (int64_t p : rr.pivots)
    if (p == a.cols()) return std::nullopt;
  std::vector<Rat> x(a.cols(), Rat(0));
  for (size_t k = 0; k < rr.pivots.size(); ++k) x[rr.pivots[k]] = rr.reduced(static_cast<int64_t>(k), a.cols());
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  int64_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  RrefResult rr = rref(std::move(aug));
  for (int64_t i = 0; i < n; ++i)
    if (i >= static_cast<int64_t>(rr.pivots.size()) || rr.pivots[i] != i) return std::nullopt;
  Matrix inv(n, n);
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < n; ++j) inv(i, j) = rr.reduced(i, n + j);
  return inv;
}

// Basis of the null space, free variables set to 1 one at a time.
inline std::vector<std::vector<Rat>> kernel_basis(const Matrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int64_t p : rr.pivots) is_pivot[p] = true;
  std::vector<std::vector<Rat>> basis;
  for (int64_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<Rat> v(m.cols(), Rat(0));
    v[f] = 1;
    for (size_t k = 0; k < rr.pivots.size(); ++k) v[rr.pivots[k]] = -rr.reduced(static_cast<int64_t>(k), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// Sparse rank-2 helpers (the operator matrices of the form complexes).

inline SparseTensor sparse_identity(int64_t n) {
  SparseTensor t(Index{n, n});
  for (int64_t i = 0; i < n; ++i) t.set({i, i}, Rat(1));
  return t;
}

// (a ∘ b)[i,k] = Σ_j a[i,j] b[j,k]
inline SparseTensor compose(const SparseTensor& a, const SparseTensor& b) {
  if (a.rank() != 2 || b.rank() != 2) throw std::invalid_argument("compose needs rank-2 tensors");
  return contract(a, b, {{1, 0}});
}

inline std::vector<Rat> apply_sparse(const SparseTensor& m, const std::vector<Rat>& v) {
  if (m.rank() != 2 || m.dim(1) != static_cast<int64_t>(v.size()))
    throw std::invalid_argument("apply_sparse shape mismatch");
  std::vector<Rat> r(m.dim(0), Rat(0));
  for (const auto& [k, val] : m.entries()) {
    Index idx = m.decode(k);
    if (!is_zero(v[idx[1]])) r[idx[0]] += val * v[idx[1]];
  }
  return r;
}

}  // namespace hopfcalc
