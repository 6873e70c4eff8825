#pragma once

#include <string>
#include <vector>

#include "hopfcalc/quantum_group.hpp"

namespace hopfcalc {

struct GroupTable {
  std::vector<std::string> names;
  std::vector<std::vector<int64_t>> mul;
  std::vector<int64_t> inv;
  int64_t id = 0;
  int64_t order() const { return static_cast<int64_t>(names.size()); }
};

inline GroupTable cyclic_table(int64_t n) {
  GroupTable t;
  for (int64_t i = 0; i < n; ++i) t.names.push_back(i == 0 ? "e" : (i == 1 ? "g" : "g" + std::to_string(i)));
  t.mul.assign(n, std::vector<int64_t>(n));
  t.inv.assign(n, 0);
  for (int64_t i = 0; i < n; ++i) {
    t.inv[i] = (n - i) % n;
    for (int64_t j = 0; j < n; ++j) t.mul[i][j] = (i + j) % n;
  }
  return t;
}

// Permutations of {0,1,2}; composition (p*q)(x) = p(q(x)).
inline GroupTable s3_table() {
  const int64_t perms[6][3] = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  const char* names[6] = {"e", "s01", "s02", "s12", "c120", "c201"};
  GroupTable t;
  auto find = [&](const int64_t p[3]) {
    for (int64_t k = 0; k < 6; ++k)
      if (perms[k][0] == p[0] && perms[k][1] == p[1] && perms[k][2] == p[2]) return k;
    throw Error("s3 table: permutation not found");
  };
  for (int i = 0; i < 6; ++i) t.names.push_back(names[i]);
  t.mul.assign(6, std::vector<int64_t>(6));
  t.inv.assign(6, 0);
  for (int64_t i = 0; i < 6; ++i) {
    for (int64_t j = 0; j < 6; ++j) {
      int64_t comp[3];
      for (int x = 0; x < 3; ++x) comp[x] = perms[i][perms[j][x]];
      t.mul[i][j] = find(comp);
    }
    int64_t invp[3];
    for (int x = 0; x < 3; ++x) invp[perms[i][x]] = x;
    t.inv[i] = find(invp);
  }
  return t;
}

inline int64_t sign_of_perm_s3(int64_t i) {
  // even: e, c120, c201 (indices 0, 4, 5)
  return (i == 0 || i == 4 || i == 5) ? 1 : -1;
}

// Group algebra C[G]: Δ(g) = g ⊗ g, S(g) = g^{-1}, φ = coefficient of e.
inline QuantumGroup group_algebra(const GroupTable& t, const std::string& name) {
  int64_t n = t.order();
  QuantumGroup h;
  h.name = name;
  h.dim = n;
  h.basis = t.names;
  h.unit.assign(n, Rat(0));
  h.unit[t.id] = 1;
  h.counit.assign(n, Rat(1));
  h.mult = SparseTensor(Index{n, n, n});
  h.comult = SparseTensor(Index{n, n, n});
  h.antipode = Matrix(n, n);
  for (int64_t i = 0; i < n; ++i) {
    h.comult.set({i, i, i}, Rat(1));
    h.antipode(t.inv[i], i) = 1;
    for (int64_t j = 0; j < n; ++j) h.mult.set({i, j, t.mul[i][j]}, Rat(1));
  }
  h.phi.assign(n, Rat(0));
  h.phi[t.id] = 1;
  h.psi = h.phi;  // φ ∘ S for a group algebra
  return h;
}

// Function algebra C^G on the basis of delta functions: pointwise product,
// Δ(δ_g) = Σ_{ab=g} δ_a ⊗ δ_b, φ = counting measure.
inline QuantumGroup function_algebra(const GroupTable& t, const std::string& name) {
  int64_t n = t.order();
  QuantumGroup h;
  h.name = name;
  h.dim = n;
  for (const auto& g : t.names) h.basis.push_back("d" + g);
  h.unit.assign(n, Rat(1));
  h.counit.assign(n, Rat(0));
  h.counit[t.id] = 1;
  h.mult = SparseTensor(Index{n, n, n});
  h.comult = SparseTensor(Index{n, n, n});
  h.antipode = Matrix(n, n);
  for (int64_t i = 0; i < n; ++i) {
    h.mult.set({i, i, i}, Rat(1));
    h.antipode(t.inv[i], i) = 1;
    for (int64_t j = 0; j < n; ++j) h.comult.set({t.mul[i][j], i, j}, Rat(1));
  }
  h.phi.assign(n, Rat(1));
  h.psi.assign(n, Rat(1));
  return h;
}

// Sweedler's 4-dimensional Hopf algebra, basis (1, g, x, gx):
// g^2 = 1, x^2 = 0, xg = -gx, Δg = g⊗g, Δx = x⊗1 + g⊗x, S(x) = -gx.
// The smallest Hopf algebra with S^2 ≠ id.
inline QuantumGroup sweedler_h4() {
  QuantumGroup h;
  h.name = "H4";
  h.dim = 4;
  h.basis = {"1", "g", "x", "gx"};
  h.unit = {Rat(1), Rat(0), Rat(0), Rat(0)};
  h.counit = {Rat(1), Rat(1), Rat(0), Rat(0)};
  h.mult = SparseTensor(Index{4, 4, 4});
  for (int64_t j = 0; j < 4; ++j) {
    h.mult.set({0, j, j}, Rat(1));
    if (j > 0) h.mult.set({j, 0, j}, Rat(1));
  }
  h.mult.set({1, 1, 0}, Rat(1));
  h.mult.set({1, 2, 3}, Rat(1));
  h.mult.set({1, 3, 2}, Rat(1));
  h.mult.set({2, 1, 3}, Rat(-1));
  h.mult.set({3, 1, 2}, Rat(-1));
  h.comult = SparseTensor(Index{4, 4, 4});
  h.comult.set({0, 0, 0}, Rat(1));
  h.comult.set({1, 1, 1}, Rat(1));
  h.comult.set({2, 2, 0}, Rat(1));
  h.comult.set({2, 1, 2}, Rat(1));
  h.comult.set({3, 3, 1}, Rat(1));
  h.comult.set({3, 0, 3}, Rat(1));
  h.antipode = Matrix(4, 4);
  h.antipode(0, 0) = 1;
  h.antipode(1, 1) = 1;
  h.antipode(3, 2) = -1;
  h.antipode(2, 3) = 1;
  h.phi = {Rat(0), Rat(0), Rat(0), Rat(1)};
  h.psi = {Rat(0), Rat(0), Rat(-1), Rat(0)};
  return h;
}

}  // namespace hopfcalc
