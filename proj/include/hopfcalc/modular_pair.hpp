#pragma once

#include <string>
#include <vector>

#include "hopfcalc/plan.hpp"
#include "hopfcalc/quantum_group.hpp"

namespace hopfcalc {

// A modular pair (σ, δ): σ a group-like element of H, δ a character on H
// (equivalently a group-like of the dual), subject to
//   (a) (φ ⊗ id)Δ(t) = σ^{-2} φ(t)          invariance
//   (b) φ(rt) = φ(t δ⇀(σ r σ^{-1})↼δ)       weak KMS
//   (c) S²(t) = δ^{-1}⇀(σ t σ^{-1})↼δ       involutivity
//   (d) δ(σ) = 1                            normalisation
struct ModularPair {
  std::vector<Rat> sigma;  // element of H
  std::vector<Rat> delta;  // covector on H = element of the dual
};

inline bool is_grouplike(const QuantumGroup& h, const std::vector<Rat>& v, std::string* why = nullptr) {
  SparseTensor dv = comult_of(h, v);
  SparseTensor vv(Index{h.dim, h.dim});
  for (int64_t i = 0; i < h.dim; ++i)
    for (int64_t j = 0; j < h.dim; ++j)
      if (!is_zero(v[i]) && !is_zero(v[j])) vv.set({i, j}, v[i] * v[j]);
  if (dv != vv) {
    if (why) *why = "comult(v) != v (x) v";
    return false;
  }
  if (h.counit_of(v) != 1) {
    if (why) *why = "counit(v) != 1";
    return false;
  }
  if (h.mul(h.antipode_apply(v), v) != h.unit || h.mul(v, h.antipode_apply(v)) != h.unit) {
    if (why) *why = "S(v) is not a two-sided inverse";
    return false;
  }
  return true;
}

inline bool is_character(const QuantumGroup& h, const std::vector<Rat>& w, std::string* why = nullptr) {
  for (int64_t i = 0; i < h.dim; ++i)
    for (int64_t j = 0; j < h.dim; ++j) {
      if (h.pair_covector(w, h.mul(h.basis_vector(i), h.basis_vector(j))) != w[i] * w[j]) {
        if (why) *why = "not multiplicative at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return false;
      }
    }
  if (h.pair_covector(w, h.unit) != 1) {
    if (why) *why = "does not send 1 to 1";
    return false;
  }
  return true;
}

// δ ⇀ x ↼ δ' for x in H and characters as dual elements: hits with the roles
// of H and the dual reversed run over the dual quantum group.
inline std::vector<Rat> sandwich_hits(const QuantumGroup& hhat, const std::vector<Rat>& left,
                                      const std::vector<Rat>& x, const std::vector<Rat>& right) {
  return hit_left(hhat, left, hit_right(hhat, x, right));
}

struct PairVerdict {
  std::vector<CheckOutcome> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

inline PairVerdict verify_pair(const QuantumGroup& h, const QuantumGroup& hhat, const ModularPair& p) {
  PairVerdict v;
  std::string why;
  if (!is_grouplike(h, p.sigma, &why)) {
    v.checks.push_back({"sigma-grouplike", false, why});
    return v;
  }
  v.checks.push_back({"sigma-grouplike", true, ""});
  if (!is_character(h, p.delta, &why)) {
    v.checks.push_back({"delta-character", false, why});
    return v;
  }
  v.checks.push_back({"delta-character", true, ""});

  std::vector<Rat> sigma_inv = h.antipode_apply(p.sigma);
  std::vector<Rat> sigma_inv2 = h.mul(sigma_inv, sigma_inv);
  std::vector<Rat> delta_inv = hhat.antipode_apply(p.delta);

  // (a) invariance: (φ ⊗ id)Δ(t) = σ^{-2} φ(t)
  {
    CheckOutcome c{"a-invariance", true, ""};
    for (int64_t t = 0; t < h.dim && c.pass; ++t) {
      std::vector<Rat> lhs(h.dim, Rat(0));
      SparseTensor dt = comult_of(h, h.basis_vector(t));
      for (const auto& [k, val] : dt.entries()) {
        Index idx = dt.decode(k);
        if (!is_zero(h.phi[idx[0]])) lhs[idx[1]] += val * h.phi[idx[0]];
      }
      std::vector<Rat> rhs(h.dim);
      for (int64_t k = 0; k < h.dim; ++k) rhs[k] = sigma_inv2[k] * h.phi[t];
      if (lhs != rhs) {
        c.pass = false;
        c.witness = "t=" + h.basis[t];
      }
    }
    v.checks.push_back(c);
  }
  // (b) weak KMS: φ(rt) = φ(t δ⇀(σ r σ^{-1})↼δ)
  {
    CheckOutcome c{"b-weak-kms", true, ""};
    for (int64_t r = 0; r < h.dim && c.pass; ++r) {
      std::vector<Rat> mid = sandwich_hits(hhat, p.delta, h.mul(p.sigma, h.mul(h.basis_vector(r), sigma_inv)), p.delta);
      for (int64_t t = 0; t < h.dim && c.pass; ++t) {
        Rat lhs = h.phi_of(h.mul(h.basis_vector(r), h.basis_vector(t)));
        Rat rhs = h.phi_of(h.mul(h.basis_vector(t), mid));
        if (lhs != rhs) {
          c.pass = false;
          c.witness = "r=" + h.basis[r] + ", t=" + h.basis[t];
        }
      }
    }
    v.checks.push_back(c);
  }
  // (c) involutivity: S²(t) = δ^{-1}⇀(σ t σ^{-1})↼δ
  {
    CheckOutcome c{"c-involutivity", true, ""};
    for (int64_t t = 0; t < h.dim && c.pass; ++t) {
      std::vector<Rat> lhs = h.antipode_apply(h.antipode_apply(h.basis_vector(t)));
      std::vector<Rat> rhs = sandwich_hits(hhat, delta_inv, h.mul(p.sigma, h.mul(h.basis_vector(t), sigma_inv)), p.delta);
      if (lhs != rhs) {
        c.pass = false;
        c.witness = "t=" + h.basis[t];
      }
    }
    v.checks.push_back(c);
  }
  // (d) normalisation: δ(σ) = 1
  {
    CheckOutcome c{"d-normalisation", h.pair_covector(p.delta, p.sigma) == 1, ""};
    v.checks.push_back(c);
  }
  return v;
}

// Filters the candidate product set through verify_pair, in candidate order.
inline std::vector<ModularPair> enumerate_pairs(const QuantumGroup& h, const QuantumGroup& hhat,
                                                const std::vector<std::vector<Rat>>& grouplike_candidates,
                                                const std::vector<std::vector<Rat>>& character_candidates) {
  std::vector<ModularPair> out;
  for (const auto& s : grouplike_candidates)
    for (const auto& d : character_candidates) {
      ModularPair p{s, d};
      if (verify_pair(h, hhat, p).ok()) out.push_back(p);
    }
  return out;
}

// Prop. 3.3: (δ, σ) is a modular pair for the dual.  The data literally swaps:
// δ is a group-like of the dual, σ (via evaluation) a character on it.
inline ModularPair dualize_pair(const ModularPair& p) { return {p.delta, p.sigma}; }

inline ModularPair tensor_pair(const QuantumGroup& h1, const ModularPair& p1, const QuantumGroup& h2,
                               const ModularPair& p2) {
  int64_t n1 = h1.dim, n2 = h2.dim;
  ModularPair p;
  p.sigma.assign(n1 * n2, Rat(0));
  p.delta.assign(n1 * n2, Rat(0));
  for (int64_t i = 0; i < n1; ++i)
    for (int64_t j = 0; j < n2; ++j) {
      p.sigma[i * n2 + j] = p1.sigma[i] * p2.sigma[j];
      p.delta[i * n2 + j] = p1.delta[i] * p2.delta[j];
    }
  return p;
}

// Best-effort group-like search: basis vectors and ±1 coordinate vectors.
// Covers group algebras (basis group elements) and function algebras
// (±1-valued group homomorphisms); intended to seed candidate lists only.
inline std::vector<std::vector<Rat>> grouplike_candidates_best_effort(const QuantumGroup& h) {
  std::vector<std::vector<Rat>> out;
  for (int64_t i = 0; i < h.dim; ++i) {
    std::vector<Rat> v = h.basis_vector(i);
    if (is_grouplike(h, v)) out.push_back(v);
  }
  if (h.dim <= 12) {
    for (int64_t mask = 0; mask < (1 << h.dim); ++mask) {
      std::vector<Rat> v(h.dim);
      for (int64_t i = 0; i < h.dim; ++i) v[i] = (mask >> i) & 1 ? Rat(-1) : Rat(1);
      if (is_grouplike(h, v)) {
        bool dup = false;
        for (const auto& u : out) dup = dup || u == v;
        if (!dup) out.push_back(v);
      }
    }
  }
  return out;
}

inline std::vector<std::vector<Rat>> character_candidates_best_effort(const QuantumGroup& h) {
  std::vector<std::vector<Rat>> out;
  // dual basis covectors (evaluations, for function algebras)
  for (int64_t i = 0; i < h.dim; ++i) {
    std::vector<Rat> w(h.dim, Rat(0));
    w[i] = 1;
    if (is_character(h, w)) out.push_back(w);
  }
  // ±1-valued covectors (one-dimensional representations of group algebras)
  if (h.dim <= 12) {
    for (int64_t mask = 0; mask < (1 << h.dim); ++mask) {
      std::vector<Rat> w(h.dim);
      for (int64_t i = 0; i < h.dim; ++i) w[i] = (mask >> i) & 1 ? Rat(-1) : Rat(1);
      if (is_character(h, w)) {
        bool dup = false;
        for (const auto& u : out) dup = dup || u == w;
        if (!dup) out.push_back(w);
      }
    }
  }
  return out;
}

// The eight displayed consequences of Def. 3.2 derived in the text, run
// through the Sweedler DSL.
inline std::vector<CheckOutcome> derived_identity_suite(const QuantumGroup& h, const QuantumGroup& hhat,
                                                        const ModularPair& p) {
  dsl::Env env = dsl::make_env(h, hhat);
  dsl::bind_modular_pair(env, p.sigma, p.delta);
  const std::pair<std::string, std::string> identities[] = {
      {"S2-conjugation", "S2(t) == sigma * (deltainv .> t <. delta) * sigmainv"},
      {"S-from-Sinv", "S(t) == sigma * (deltainv .> Sinv(t) <. delta) * sigmainv"},
      {"Sinv-from-S", "Sinv(t) == sigmainv * (delta .> S(t) <. deltainv) * sigma"},
      {"psi-twisted-trace", "psi(t*r) == psi(r * (delta .> (sigmainv*t*sigma) <. delta))"},
      {"dual-S2-conjugation", "S2(f) == delta * (sigmainv .> f <. sigma) * deltainv"},
      {"dual-S-from-Sinv", "S(f) == delta * (sigmainv .> Sinv(f) <. sigma) * deltainv"},
      {"phihat-invariance", "phihat(f(1)) * f(2) == deltainv * deltainv * phihat(f)"},
      {"phihat-twisted-trace", "phihat(f*g) == phihat(g * (sigma .> (delta*f*deltainv) <. sigma))"},
  };
  std::map<std::string, dsl::Tag> vars{
      {"t", dsl::Tag::H()}, {"r", dsl::Tag::H()}, {"f", dsl::Tag::Hhat()}, {"g", dsl::Tag::Hhat()}};
  std::vector<CheckOutcome> out;
  for (const auto& [name, src] : identities) {
    dsl::Verdict v = dsl::check_identity(src, env, vars);
    out.push_back({name, v.equal, v.witness});
  }
  return out;
}

}  // namespace hopfcalc
