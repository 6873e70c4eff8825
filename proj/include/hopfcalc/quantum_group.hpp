#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hopfcalc/tensor.hpp"

namespace hopfcalc {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A finite-dimensional Hopf algebra with faithful invariant integrals, given
// by its structure tensors over an ordered basis e_0,...,e_{n-1}:
//
//   mult[i,j,k]    : e_i e_j = Σ_k mult[i,j,k] e_k
//   comult[i,j,k]  : Δ(e_i)  = Σ   comult[i,j,k] e_j ⊗ e_k
//   antipode(i,j)  : S(e_j)  = Σ_i antipode(i,j) e_i   (columns are images)
//   unit, counit, phi, psi : coordinate (co)vectors
//
// Functionals on H are stored as coordinate vectors in the dual basis, so an
// element of the dual quantum group and a covector on H are the same data.
struct QuantumGroup {
  std::string name;
  int64_t dim = 0;
  std::vector<std::string> basis;
  std::vector<Rat> unit;
  std::vector<Rat> counit;
  SparseTensor mult;
  SparseTensor comult;
  Matrix antipode;
  std::vector<Rat> phi;  // left invariant integral
  std::vector<Rat> psi;  // right invariant integral, psi = phi ∘ S

  // x * y in coordinates.
  std::vector<Rat> mul(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
    std::vector<Rat> r(dim, Rat(0));
    for (const auto& [k, v] : mult.entries()) {
      Index idx = mult.decode(k);
      if (!is_zero(x[idx[0]]) && !is_zero(y[idx[1]])) r[idx[2]] += v * x[idx[0]] * y[idx[1]];
    }
    return r;
  }

  std::vector<Rat> basis_vector(int64_t i) const {
    std::vector<Rat> v(dim, Rat(0));
    v[i] = 1;
    return v;
  }

  std::vector<Rat> antipode_apply(const std::vector<Rat>& x) const { return antipode.apply(x); }

  Rat pair_covector(const std::vector<Rat>& w, const std::vector<Rat>& x) const {
    Rat s(0);
    for (int64_t i = 0; i < dim; ++i)
      if (!is_zero(w[i]) && !is_zero(x[i])) s += w[i] * x[i];
    return s;
  }

  Rat counit_of(const std::vector<Rat>& x) const { return pair_covector(counit, x); }
  Rat phi_of(const std::vector<Rat>& x) const { return pair_covector(phi, x); }
  Rat psi_of(const std::vector<Rat>& x) const { return pair_covector(psi, x); }
};

// Δ^(k): rank k+1 tensor [in, out_1, ..., out_k], left-nested expansion
// (Δ ⊗ id ⊗ ... ) ... Δ.  k = 1 is the identity.
inline SparseTensor comult_power(const QuantumGroup& h, int k) {
  if (k < 1) throw std::invalid_argument("comult_power needs k >= 1");
  SparseTensor d = sparse_identity(h.dim);
  for (int step = 2; step <= k; ++step) {
    // expand the first output slot: contract axis 1 of d with axis 0 of comult
    SparseTensor e = contract(d, h.comult, {{1, 0}});
    // axes of e: [in, out_2..out_{step-1}, new_1, new_2] -> reorder
    std::vector<int> perm(step + 1);
    perm[0] = 0;
    perm[1] = step - 1;
    perm[2] = step;
    for (int i = 3; i <= step; ++i) perm[i] = i - 2;
    d = permute(e, perm);
  }
  return d;
}

// Δ(x) as a rank-2 tensor [slot1, slot2].
inline SparseTensor comult_of(const QuantumGroup& h, const std::vector<Rat>& x) {
  SparseTensor xt(Index{h.dim});
  for (int64_t i = 0; i < h.dim; ++i)
    if (!is_zero(x[i])) xt.set({i}, x[i]);
  return contract(xt, h.comult, {{0, 0}});
}

// Convolution actions of H on functionals: (t ⇀ ω)(r) = ω(rt),
// (ω ↼ t)(r) = ω(tr).  With the roles of H and its dual reversed, call these
// with the dual quantum group as base.
inline std::vector<Rat> hit_left(const QuantumGroup& h, const std::vector<Rat>& t, const std::vector<Rat>& w) {
  std::vector<Rat> r(h.dim, Rat(0));
  for (const auto& [key, v] : h.mult.entries()) {
    Index idx = h.mult.decode(key);  // [r, t, k]
    if (!is_zero(t[idx[1]]) && !is_zero(w[idx[2]])) r[idx[0]] += v * t[idx[1]] * w[idx[2]];
  }
  return r;
}

inline std::vector<Rat> hit_right(const QuantumGroup& h, const std::vector<Rat>& w, const std::vector<Rat>& t) {
  std::vector<Rat> r(h.dim, Rat(0));
  for (const auto& [key, v] : h.mult.entries()) {
    Index idx = h.mult.decode(key);  // [t, r, k]
    if (!is_zero(t[idx[0]]) && !is_zero(w[idx[2]])) r[idx[1]] += v * t[idx[0]] * w[idx[2]];
  }
  return r;
}

// ---------------------------------------------------------------------------
// Validation

struct CheckOutcome {
  std::string axiom;
  bool pass = true;
  std::string witness;  // first failing basis tuple, empty when passing
};

struct ValidationReport {
  std::vector<CheckOutcome> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  std::string summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
      os << (c.pass ? "pass " : "FAIL ") << c.axiom;
      if (!c.pass && !c.witness.empty()) os << "  [witness " << c.witness << "]";
      os << "\n";
    }
    return os.str();
  }
};

namespace detail {

inline std::string idx_str(const Index& idx) {
  std::string s = "(";
  for (size_t i = 0; i < idx.size(); ++i) s += (i ? "," : "") + std::to_string(idx[i]);
  return s + ")";
}

inline void check_tensor_zero(ValidationReport& rep, const std::string& axiom, const SparseTensor& diff) {
  CheckOutcome c{axiom, true, ""};
  if (!diff.is_zero_tensor()) {
    c.pass = false;
    c.witness = idx_str(diff.decode(diff.entries().begin()->first));
  }
  rep.checks.push_back(std::move(c));
}

}  // namespace detail

// The four Galois maps as n^2 x n^2 matrices over the basis e_s ⊗ e_t.
inline Matrix galois_gamma_l(const QuantumGroup& h) {
  int64_t n = h.dim;
  Matrix g(n * n, n * n);
  for (const auto& [kc, vc] : h.comult.entries()) {
    Index c = h.comult.decode(kc);  // Δ(s) -> (a, b)
    for (const auto& [km, vm] : h.mult.entries()) {
      Index m = h.mult.decode(km);  // a * t -> o1
      if (m[0] != c[1]) continue;
      g((m[2]) * n + c[2], c[0] * n + m[1]) += vc * vm;
    }
  }
  return g;
}

inline Matrix galois_gamma_r(const QuantumGroup& h) {
  int64_t n = h.dim;
  Matrix g(n * n, n * n);
  for (const auto& [kc, vc] : h.comult.entries()) {
    Index c = h.comult.decode(kc);
    for (const auto& [km, vm] : h.mult.entries()) {
      Index m = h.mult.decode(km);  // b * t -> o2
      if (m[0] != c[2]) continue;
      g(c[1] * n + m[2], c[0] * n + m[1]) += vc * vm;
    }
  }
  return g;
}

inline Matrix galois_rho_l(const QuantumGroup& h) {
  int64_t n = h.dim;
  Matrix g(n * n, n * n);
  for (const auto& [kc, vc] : h.comult.entries()) {
    Index c = h.comult.decode(kc);  // Δ(t) -> (a, b)
    for (const auto& [km, vm] : h.mult.entries()) {
      Index m = h.mult.decode(km);  // s * a -> o1
      if (m[1] != c[1]) continue;
      g(m[2] * n + c[2], m[0] * n + c[0]) += vc * vm;
    }
  }
  return g;
}

inline Matrix galois_rho_r(const QuantumGroup& h) {
  int64_t n = h.dim;
  Matrix g(n * n, n * n);
  for (const auto& [kc, vc] : h.comult.entries()) {
    Index c = h.comult.decode(kc);
    for (const auto& [km, vm] : h.mult.entries()) {
      Index m = h.mult.decode(km);  // s * b -> o2
      if (m[1] != c[2]) continue;
      g(c[1] * n + m[2], m[0] * n + c[0]) += vc * vm;
    }
  }
  return g;
}

// Checks the full axiom list.  Failures are data (per-axiom witness), not
// exceptions, so a CLI can print them all at once.
inline ValidationReport validate(const QuantumGroup& h) {
  ValidationReport rep;
  int64_t n = h.dim;
  const SparseTensor& m = h.mult;
  const SparseTensor& c = h.comult;

  // associativity: contract (xy)z - x(yz) over all basis triples
  {
    SparseTensor left = contract(m, m, {{2, 0}});   // [i,j, z,k] : (e_i e_j) e_z
    SparseTensor right = contract(m, m, {{2, 1}});  // [j,z, x,k] : e_x (e_j e_z)
    right = permute(right, {2, 0, 1, 3});
    detail::check_tensor_zero(rep, "mult-associative", left - right);
  }
  // unitality
  {
    SparseTensor u(Index{n});
    for (int64_t i = 0; i < n; ++i)
      if (!is_zero(h.unit[i])) u.set({i}, h.unit[i]);
    SparseTensor lu = contract(u, m, {{0, 0}});  // [j,k]
    SparseTensor ru = contract(u, m, {{0, 1}});  // [i,k]
    SparseTensor id = sparse_identity(n);
    detail::check_tensor_zero(rep, "mult-unital-left", lu - id);
    detail::check_tensor_zero(rep, "mult-unital-right", ru - id);
  }
  // coassociativity
  {
    SparseTensor l = contract(c, c, {{1, 0}});  // [i, k, a, b] : expand first slot
    l = permute(l, {0, 2, 3, 1});
    SparseTensor r = contract(c, c, {{2, 0}});  // [i, j, a, b]
    detail::check_tensor_zero(rep, "comult-coassociative", l - r);
  }
  // counit laws
  {
    SparseTensor eps(Index{n});
    for (int64_t i = 0; i < n; ++i)
      if (!is_zero(h.counit[i])) eps.set({i}, h.counit[i]);
    SparseTensor le = contract(c, eps, {{1, 0}});
    SparseTensor re = contract(c, eps, {{2, 0}});
    SparseTensor id = sparse_identity(n);
    detail::check_tensor_zero(rep, "counit-law-left", le - id);
    detail::check_tensor_zero(rep, "counit-law-right", re - id);
  }
  // Δ is an algebra homomorphism: Δ(e_i e_j) = Δ(e_i) Δ(e_j)
  {
    SparseTensor lhs = contract(m, c, {{2, 0}});  // [i,j, a,b]
    SparseTensor dd = outer(c, c);                // [i,a,b, j,c,d]
    SparseTensor t1 = contract(dd, m, {{1, 0}, {4, 1}});   // [i,b,j,d, o1]
    SparseTensor rhs = contract(t1, m, {{1, 0}, {3, 1}});  // [i,j,o1, o2]
    detail::check_tensor_zero(rep, "comult-homomorphism", lhs - rhs);
  }
  // ε is an algebra homomorphism
  {
    CheckOutcome co{"counit-homomorphism", true, ""};
    for (int64_t i = 0; i < n && co.pass; ++i)
      for (int64_t j = 0; j < n && co.pass; ++j) {
        Rat lhs = h.counit_of(h.mul(h.basis_vector(i), h.basis_vector(j)));
        if (lhs != h.counit[i] * h.counit[j]) {
          co.pass = false;
          co.witness = detail::idx_str({i, j});
        }
      }
    if (co.pass && h.counit_of(h.unit) != 1) {
      co.pass = false;
      co.witness = "(unit)";
    }
    rep.checks.push_back(co);
  }
  // antipode laws m(S ⊗ id)Δ = unit·ε = m(id ⊗ S)Δ
  {
    SparseTensor s = h.antipode.to_tensor();  // [out, in]
    SparseTensor cs = contract(c, s, {{1, 1}});  // [i, k2, out]
    SparseTensor lhs = contract(cs, m, {{2, 0}, {1, 1}});  // [i, k]
    SparseTensor cs2 = contract(c, s, {{2, 1}});           // [i, k1, out]
    SparseTensor rhs = contract(cs2, m, {{1, 0}, {2, 1}});
    SparseTensor target(Index{n, n});
    for (int64_t i = 0; i < n; ++i)
      for (int64_t k = 0; k < n; ++k)
        if (!is_zero(h.counit[i]) && !is_zero(h.unit[k])) target.set({i, k}, h.counit[i] * h.unit[k]);
    detail::check_tensor_zero(rep, "antipode-law-left", lhs - target);
    detail::check_tensor_zero(rep, "antipode-law-right", rhs - target);
  }
  // S is an algebra antihomomorphism and coalgebra antihomomorphism, invertible
  {
    CheckOutcome co{"antipode-antihomomorphism", true, ""};
    for (int64_t i = 0; i < n && co.pass; ++i)
      for (int64_t j = 0; j < n && co.pass; ++j) {
        auto lhs = h.antipode_apply(h.mul(h.basis_vector(i), h.basis_vector(j)));
        auto rhs = h.mul(h.antipode_apply(h.basis_vector(j)), h.antipode_apply(h.basis_vector(i)));
        if (lhs != rhs) {
          co.pass = false;
          co.witness = detail::idx_str({i, j});
        }
      }
    rep.checks.push_back(co);

    SparseTensor s = h.antipode.to_tensor();
    SparseTensor lhs = contract(s, c, {{0, 0}});            // [in, j, k] : Δ(S e_in)
    SparseTensor sw = permute(contract(contract(c, s, {{1, 1}}), s, {{1, 1}}), {0, 2, 1});
    // sw: [in, S(k1), S(k2)] with slots swapped -> (S ⊗ S) flip Δ
    detail::check_tensor_zero(rep, "antipode-coantihomomorphism", lhs - sw);

    CheckOutcome inv{"antipode-invertible", rank(h.antipode) == n, ""};
    rep.checks.push_back(inv);
  }
  // Galois maps are isomorphisms
  {
    bool ok = rank(galois_gamma_l(h)) == n * n && rank(galois_gamma_r(h)) == n * n &&
              rank(galois_rho_l(h)) == n * n && rank(galois_rho_r(h)) == n * n;
    rep.checks.push_back({"galois-maps-invertible", ok, ""});
  }
  // left invariance of phi: (id ⊗ φ)Δ(t) = φ(t) 1
  {
    SparseTensor ph(Index{n});
    for (int64_t i = 0; i < n; ++i)
      if (!is_zero(h.phi[i])) ph.set({i}, h.phi[i]);
    SparseTensor lhs = contract(c, ph, {{2, 0}});  // [t, j]
    SparseTensor rhs(Index{n, n});
    for (int64_t t = 0; t < n; ++t)
      for (int64_t j = 0; j < n; ++j)
        if (!is_zero(h.phi[t]) && !is_zero(h.unit[j])) rhs.set({t, j}, h.phi[t] * h.unit[j]);
    detail::check_tensor_zero(rep, "phi-left-invariant", lhs - rhs);
  }
  // right invariance of psi: (ψ ⊗ id)Δ(t) = ψ(t) 1
  {
    SparseTensor ps(Index{n});
    for (int64_t i = 0; i < n; ++i)
      if (!is_zero(h.psi[i])) ps.set({i}, h.psi[i]);
    SparseTensor lhs = contract(c, ps, {{1, 0}});
    SparseTensor rhs(Index{n, n});
    for (int64_t t = 0; t < n; ++t)
      for (int64_t j = 0; j < n; ++j)
        if (!is_zero(h.psi[t]) && !is_zero(h.unit[j])) rhs.set({t, j}, h.psi[t] * h.unit[j]);
    detail::check_tensor_zero(rep, "psi-right-invariant", lhs - rhs);
  }
  // faithfulness: the pairing matrix φ(e_i e_j) is invertible
  {
    Matrix p(n, n);
    for (const auto& [k, v] : m.entries()) {
      Index idx = m.decode(k);
      if (!is_zero(h.phi[idx[2]])) p(idx[0], idx[1]) += v * h.phi[idx[2]];
    }
    rep.checks.push_back({"phi-faithful", rank(p) == n, ""});
  }
  // ψ = φ ∘ S
  {
    CheckOutcome co{"psi-is-phi-after-antipode", true, ""};
    for (int64_t t = 0; t < n; ++t) {
      if (h.psi[t] != h.phi_of(h.antipode_apply(h.basis_vector(t)))) {
        co.pass = false;
        co.witness = detail::idx_str({t});
        break;
      }
    }
    rep.checks.push_back(co);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Integrals

// Solves (id ⊗ φ)Δ(t) = φ(t)·1 exactly.  The solution space must be
// 1-dimensional; the result is scaled so its first nonzero coordinate is 1,
// and ψ = φ ∘ S.
inline void solve_integrals(QuantumGroup& h) {
  int64_t n = h.dim;
  // unknowns φ_k; equations Σ_k Δ[t;j,k] φ_k - unit_j φ_t = 0 for all (t, j)
  Matrix sys(n * n, n);
  for (const auto& [key, v] : h.comult.entries()) {
    Index idx = h.comult.decode(key);  // t ; j, k
    sys(idx[0] * n + idx[1], idx[2]) += v;
  }
  for (int64_t t = 0; t < n; ++t)
    for (int64_t j = 0; j < n; ++j) sys(t * n + j, t) -= h.unit[j];
  auto ker = kernel_basis(sys);
  if (ker.size() != 1) throw Error("no 1-dimensional space of left invariant functionals (" + std::to_string(ker.size()) + "-dim)");
  std::vector<Rat> phi = ker[0];
  Rat lead(0);
  for (const Rat& q : phi)
    if (!is_zero(q)) {
      lead = q;
      break;
    }
  if (is_zero(lead)) throw Error("left invariant functional is zero");
  for (Rat& q : phi) q /= lead;
  h.phi = phi;
  h.psi.assign(n, Rat(0));
  for (int64_t t = 0; t < n; ++t) h.psi[t] = h.phi_of(h.antipode_apply(h.basis_vector(t)));
}

// ---------------------------------------------------------------------------
// Duality

struct FourierMaps {
  Matrix Fl, Fr, Gl, Gr;  // all H -> Ĥ, columns indexed by basis of H
};

inline FourierMaps fourier_maps(const QuantumGroup& h) {
  int64_t n = h.dim;
  FourierMaps f{Matrix(n, n), Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (const auto& [key, v] : h.mult.entries()) {
    Index idx = h.mult.decode(key);  // [a, b, k]
    // F_l(t)(r) = φ(r t):  row r, column t
    if (!is_zero(h.phi[idx[2]])) {
      f.Fl(idx[0], idx[1]) += v * h.phi[idx[2]];
      f.Fr(idx[1], idx[0]) += v * h.phi[idx[2]];
    }
    if (!is_zero(h.psi[idx[2]])) {
      f.Gl(idx[0], idx[1]) += v * h.psi[idx[2]];
      f.Gr(idx[1], idx[0]) += v * h.psi[idx[2]];
    }
  }
  return f;
}

struct DualQuantumGroup {
  QuantumGroup dual;
  FourierMaps fourier;
};

// The dual quantum group on the dual basis: multiplication is the transpose
// of Δ, comultiplication the transpose of mult, antipode the transpose of S.
// Dual integrals are normalized by φ̂(G_r(t)) = ε(t) and ψ̂(F_l(t)) = ε(t).
inline DualQuantumGroup dualize(const QuantumGroup& h) {
  int64_t n = h.dim;
  DualQuantumGroup d;
  QuantumGroup& g = d.dual;
  g.name = h.name + "^";
  g.dim = n;
  g.basis.reserve(n);
  for (const auto& b : h.basis) g.basis.push_back(b + "^");
  g.unit = h.counit;
  g.counit = h.unit;
  g.mult = SparseTensor(Index{n, n, n});
  for (const auto& [key, v] : h.comult.entries()) {
    Index idx = h.comult.decode(key);  // t; i, j  ->  f^i f^j = Σ_t Δ[t;i,j] f^t
    g.mult.add_at({idx[1], idx[2], idx[0]}, v);
  }
  g.comult = SparseTensor(Index{n, n, n});
  for (const auto& [key, v] : h.mult.entries()) {
    Index idx = h.mult.decode(key);  // i, j -> k :  Δ̂(f^k) = Σ mult[i,j,k] f^i ⊗ f^j
    g.comult.add_at({idx[2], idx[0], idx[1]}, v);
  }
  g.antipode = h.antipode.transposed();

  d.fourier = fourier_maps(h);
  auto gr_inv = inverse(d.fourier.Gr);
  auto fl_inv = inverse(d.fourier.Fl);
  if (!gr_inv || !fl_inv) throw Error("Fourier transform is singular; integrals are not faithful");
  g.phi = gr_inv->transposed().apply(h.counit);
  g.psi = fl_inv->transposed().apply(h.counit);
  return d;
}

// The unique group-like ν with (φ ⊗ id)Δ(t) = φ(t)·ν for all t.
inline std::vector<Rat> modular_element(const QuantumGroup& h) {
  int64_t n = h.dim;
  // v_t[k] = Σ_j Δ[t;j,k] φ_j  must equal φ(t)·ν
  std::vector<std::vector<Rat>> vt(n, std::vector<Rat>(n, Rat(0)));
  for (const auto& [key, v] : h.comult.entries()) {
    Index idx = h.comult.decode(key);
    if (!is_zero(h.phi[idx[1]])) vt[idx[0]][idx[2]] += v * h.phi[idx[1]];
  }
  std::optional<std::vector<Rat>> nu;
  for (int64_t t = 0; t < n; ++t) {
    if (is_zero(h.phi[t])) continue;
    std::vector<Rat> cand(n);
    for (int64_t k = 0; k < n; ++k) cand[k] = vt[t][k] / h.phi[t];
    if (!nu)
      nu = cand;
    else if (*nu != cand)
      throw Error("inconsistent modular element system; input is not a quantum group");
  }
  if (!nu) throw Error("phi vanishes; cannot determine modular element");
  for (int64_t t = 0; t < n; ++t) {
    if (!is_zero(h.phi[t])) continue;
    for (int64_t k = 0; k < n; ++k)
      if (!is_zero(vt[t][k])) throw Error("inconsistent modular element system; input is not a quantum group");
  }
  return *nu;
}

// Componentwise tensor product of quantum groups; index (i1, i2) -> i1*n2+i2.
inline QuantumGroup qg_tensor(const QuantumGroup& h1, const QuantumGroup& h2) {
  int64_t n1 = h1.dim, n2 = h2.dim, n = n1 * n2;
  QuantumGroup g;
  g.name = h1.name + "(x)" + h2.name;
  g.dim = n;
  for (int64_t i = 0; i < n1; ++i)
    for (int64_t j = 0; j < n2; ++j) g.basis.push_back(h1.basis[i] + "(x)" + h2.basis[j]);
  auto kron_vec = [&](const std::vector<Rat>& a, const std::vector<Rat>& b) {
    std::vector<Rat> r(n, Rat(0));
    for (int64_t i = 0; i < n1; ++i)
      for (int64_t j = 0; j < n2; ++j) r[i * n2 + j] = a[i] * b[j];
    return r;
  };
  g.unit = kron_vec(h1.unit, h2.unit);
  g.counit = kron_vec(h1.counit, h2.counit);
  g.phi = kron_vec(h1.phi, h2.phi);
  g.psi = kron_vec(h1.psi, h2.psi);
  g.mult = SparseTensor(Index{n, n, n});
  for (const auto& [k1, v1] : h1.mult.entries()) {
    Index a = h1.mult.decode(k1);
    for (const auto& [k2, v2] : h2.mult.entries()) {
      Index b = h2.mult.decode(k2);
      g.mult.add_at({a[0] * n2 + b[0], a[1] * n2 + b[1], a[2] * n2 + b[2]}, v1 * v2);
    }
  }
  g.comult = SparseTensor(Index{n, n, n});
  for (const auto& [k1, v1] : h1.comult.entries()) {
    Index a = h1.comult.decode(k1);
    for (const auto& [k2, v2] : h2.comult.entries()) {
      Index b = h2.comult.decode(k2);
      g.comult.add_at({a[0] * n2 + b[0], a[1] * n2 + b[1], a[2] * n2 + b[2]}, v1 * v2);
    }
  }
  g.antipode = Matrix(n, n);
  for (int64_t i = 0; i < n1; ++i)
    for (int64_t j = 0; j < n1; ++j)
      for (int64_t k = 0; k < n2; ++k)
        for (int64_t l = 0; l < n2; ++l) {
          Rat v = h1.antipode(i, j) * h2.antipode(k, l);
          if (!is_zero(v)) g.antipode(i * n2 + k, j * n2 + l) = v;
        }
  return g;
}

inline bool same_structure(const QuantumGroup& a, const QuantumGroup& b) {
  return a.dim == b.dim && a.unit == b.unit && a.counit == b.counit && a.mult == b.mult &&
         a.comult == b.comult && a.antipode == b.antipode && a.phi == b.phi && a.psi == b.psi;
}

}  // namespace hopfcalc
