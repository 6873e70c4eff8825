#pragma once

// Compiles Sweedler-notation ASTs into tensor-contraction plans over the
// structure tensors of a quantum group, its dual, and bound module algebras,
// then evaluates them exactly.  The value of a compiled expression is the
// full multilinear map: one tensor axis per free variable (sorted by name)
// followed by one axis per tensor position.

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "hopfcalc/dsl.hpp"
#include "hopfcalc/quantum_group.hpp"

namespace hopfcalc::dsl {

struct ModuleBinding {
  std::string name;
  int64_t dim = 0;
  Tag actor;                         // H or Hhat
  SparseTensor action;               // [h, a, b] : e_h · e_a = Σ_b action e_b
  std::optional<SparseTensor> mult;  // [a, b, c] when the module is an algebra
  std::vector<std::string> basis_names;

  // coaction a ↦ a_(0) ⊗ a_(1) with x·a = a_(0) ⟨a_(1), x⟩; tensor [a, b, h]
  SparseTensor coaction() const {
    SparseTensor r(Index{dim, dim, action.dim(0)});
    for (const auto& [k, v] : action.entries()) {
      Index idx = action.decode(k);
      r.add_at({idx[1], idx[2], idx[0]}, v);
    }
    return r;
  }
};

struct MapBinding {
  Tag in, out;
  SparseTensor matrix;  // [out_idx, in_idx]
};

struct Env {
  const QuantumGroup* H = nullptr;
  const QuantumGroup* Hhat = nullptr;
  std::map<std::string, std::pair<Tag, std::vector<Rat>>> consts;
  std::map<std::string, std::vector<Rat>> const_inverse;
  std::map<std::string, MapBinding> maps;
  std::map<std::string, ModuleBinding> modules;

  const QuantumGroup& space(const Tag& t) const {
    if (t.kind == Tag::kH) return *H;
    if (t.kind == Tag::kHhat) return *Hhat;
    throw Error("module tag used where H or its dual was expected");
  }
  int64_t dim_of(const Tag& t) const {
    if (t.kind == Tag::kModule) return modules.at(t.module).dim;
    return space(t).dim;
  }
  const std::vector<std::string>& names_of(const Tag& t) const {
    if (t.kind == Tag::kModule) return modules.at(t.module).basis_names;
    return space(t).basis;
  }
  Tag dual_tag(const Tag& t) const {
    if (t.kind == Tag::kH) return Tag::Hhat();
    if (t.kind == Tag::kHhat) return Tag::H();
    throw Error("module tag has no dual");
  }
  Matrix antipode_power(const Tag& t, int p) const {
    const QuantumGroup& g = space(t);
    Matrix base = g.antipode;
    if (p < 0) {
      auto inv = inverse(g.antipode);
      if (!inv) throw Error("antipode not invertible");
      base = *inv;
    }
    Matrix r = Matrix::identity(g.dim);
    for (int i = 0; i < std::abs(p); ++i) r = base * r;
    return r;
  }
};

// Binds the standard constants: unit, epsilon, the integrals on both sides.
// phi/psi live in the dual, phihat/psihat in H itself (functionals on the
// dual are elements of H).
inline Env make_env(const QuantumGroup& h, const QuantumGroup& hhat) {
  Env env;
  env.H = &h;
  env.Hhat = &hhat;
  env.consts["unit"] = {Tag::H(), h.unit};
  env.consts["epsilon"] = {Tag::Hhat(), h.counit};
  env.consts["phi"] = {Tag::Hhat(), h.phi};
  env.consts["psi"] = {Tag::Hhat(), h.psi};
  env.consts["phihat"] = {Tag::H(), hhat.phi};
  env.consts["psihat"] = {Tag::H(), hhat.psi};
  env.const_inverse["unit"] = h.unit;
  env.const_inverse["epsilon"] = h.counit;
  return env;
}

inline void bind_modular_pair(Env& env, const std::vector<Rat>& sigma, const std::vector<Rat>& delta) {
  std::vector<Rat> sigma_inv = env.H->antipode_apply(sigma);
  std::vector<Rat> delta_inv = env.Hhat->antipode_apply(delta);
  env.consts["sigma"] = {Tag::H(), sigma};
  env.consts["sigmainv"] = {Tag::H(), sigma_inv};
  env.consts["delta"] = {Tag::Hhat(), delta};
  env.consts["deltainv"] = {Tag::Hhat(), delta_inv};
  env.const_inverse["sigma"] = sigma_inv;
  env.const_inverse["sigmainv"] = sigma;
  env.const_inverse["delta"] = delta_inv;
  env.const_inverse["deltainv"] = delta;
}

// ---------------------------------------------------------------------------
// Compiled form

struct VarSig {
  std::string name;
  Tag tag;
  int64_t dim = 0;
  bool operator==(const VarSig& o) const { return name == o.name && tag == o.tag && dim == o.dim; }
};

struct PosSig {
  Tag tag;
  int64_t dim = 0;
  bool scalar = false;
  bool operator==(const PosSig& o) const { return scalar == o.scalar && (scalar || (tag == o.tag && dim == o.dim)); }
};

struct Signature {
  std::vector<VarSig> vars;       // sorted by name
  std::vector<PosSig> positions;
  bool operator==(const Signature& o) const { return vars == o.vars && positions == o.positions; }

  Index tensor_shape() const {
    Index s;
    for (const auto& v : vars) s.push_back(v.dim);
    for (const auto& p : positions)
      if (!p.scalar) s.push_back(p.dim);
    return s;
  }
};

struct PortRef {
  int node = -1;
  int port = -1;
  bool valid() const { return node >= 0; }
};

struct PlanNode {
  std::string label;
  SparseTensor tensor;
};

struct PlanEdge {
  PortRef a, b;
};

struct ContractionPlan {
  std::vector<PlanNode> nodes;
  std::vector<PlanEdge> edges;
  std::vector<PortRef> var_ports;  // one per signature variable
  std::vector<PortRef> out_ports;  // one per non-scalar position
};

struct CompiledTerm {
  Rat coeff;
  ContractionPlan plan;
};

struct CompiledExpr {
  Signature sig;
  std::vector<CompiledTerm> terms;
};

namespace detail {

// --- normalization to a sum of products -----------------------------------

struct FlatTerm {
  Rat coeff;
  ExprPtr node;  // sum-free; nullptr means the scalar 1
};

inline std::vector<FlatTerm> normalize(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::kNum:
      return {{e->num, nullptr}};
    case Expr::kAtom:
    case Expr::kPow:
      return {{Rat(1), e}};
    case Expr::kNeg: {
      auto ts = normalize(e->a);
      for (auto& t : ts) t.coeff = -t.coeff;
      return ts;
    }
    case Expr::kAdd:
    case Expr::kSub: {
      auto ts = normalize(e->a);
      auto us = normalize(e->b);
      if (e->kind == Expr::kSub)
        for (auto& u : us) u.coeff = -u.coeff;
      ts.insert(ts.end(), us.begin(), us.end());
      return ts;
    }
    case Expr::kMul: {
      auto ts = normalize(e->a);
      auto us = normalize(e->b);
      std::vector<FlatTerm> r;
      for (const auto& t : ts)
        for (const auto& u : us) {
          FlatTerm f{t.coeff * u.coeff, nullptr};
          if (!t.node)
            f.node = u.node;
          else if (!u.node)
            f.node = t.node;
          else {
            f.node = make_expr(Expr::kMul);
            f.node->a = t.node;
            f.node->b = u.node;
            f.node->line = e->line;
            f.node->col = e->col;
          }
          r.push_back(std::move(f));
        }
      return r;
    }
    case Expr::kHitL:
    case Expr::kHitR:
    case Expr::kPair:
    case Expr::kAct: {
      auto ts = normalize(e->a);
      auto us = normalize(e->b);
      std::vector<FlatTerm> r;
      for (const auto& t : ts)
        for (const auto& u : us) {
          if (!t.node || !u.node) throw Error("scalar operand where an element is required");
          FlatTerm f{t.coeff * u.coeff, make_expr(e->kind)};
          f.node->name = e->name;
          f.node->a = t.node;
          f.node->b = u.node;
          f.node->line = e->line;
          f.node->col = e->col;
          r.push_back(std::move(f));
        }
      return r;
    }
    case Expr::kApply: {
      auto ts = normalize(e->a);
      std::vector<FlatTerm> r;
      for (const auto& t : ts) {
        if (!t.node) throw Error("scalar operand in " + e->name + "(...)");
        FlatTerm f{t.coeff, make_expr(Expr::kApply)};
        f.node->name = e->name;
        f.node->a = t.node;
        f.node->line = e->line;
        f.node->col = e->col;
        r.push_back(std::move(f));
      }
      return r;
    }
  }
  throw Error("unreachable");
}

// --- per-term atom usage ----------------------------------------------------

struct AtomUse {
  bool is_const = false;
  bool plain = false;
  std::set<int> legs;
};

inline void scan_atoms(const ExprPtr& e, const Env& env, const std::map<std::string, Tag>& var_tags,
                       std::map<std::string, AtomUse>& uses) {
  if (!e) return;
  if (e->kind == Expr::kAtom) {
    bool is_const = env.consts.count(e->name) > 0;
    bool is_var = var_tags.count(e->name) > 0;
    if (is_const && is_var) throw Error("name '" + e->name + "' is both a constant and a variable");
    if (!is_const && !is_var) throw Error("unknown name '" + e->name + "' (no tag declared)");
    // plain constant occurrences are independent copies; everything else is
    // tracked so Sweedler legs pair up exactly once
    if (is_const && !e->leg) return;
    AtomUse& u = uses[e->name];
    u.is_const = is_const;
    if (!e->leg) {
      if (u.plain || !u.legs.empty()) throw Error("variable '" + e->name + "' used more than once in a term");
      u.plain = true;
    } else {
      if (u.plain || u.legs.count(*e->leg)) throw Error("Sweedler leg " + std::to_string(*e->leg) + " of '" + e->name + "' reused");
      u.legs.insert(*e->leg);
    }
    return;
  }
  if (e->kind == Expr::kPow) {
    // powered constants are independent copies; no shared legs
    return;
  }
  if (e->kind == Expr::kApply) {
    // functional application f(x) uses the atom f exactly like a plain
    // occurrence; antipodes and bound maps are not atoms
    bool structural = e->name == "S" || e->name == "Sinv" || e->name == "S2" || env.maps.count(e->name);
    if (!structural && var_tags.count(e->name)) {
      AtomUse& u = uses[e->name];
      if (u.plain || !u.legs.empty()) throw Error("variable '" + e->name + "' used more than once in a term");
      u.plain = true;
    }
    scan_atoms(e->a, env, var_tags, uses);
    return;
  }
  scan_atoms(e->a, env, var_tags, uses);
  scan_atoms(e->b, env, var_tags, uses);
}

inline Tag tag_of_atom(const std::string& name, const Env& env, const std::map<std::string, Tag>& var_tags) {
  auto vit = var_tags.find(name);
  if (vit != var_tags.end()) return vit->second;
  return env.consts.at(name).first;
}

// Δ^(k)-style expansion for modules: a ↦ a_(0) ⊗ a_(1) ⊗ ... ⊗ a_(c),
// axes [in, module, f_1, ..., f_c].
inline SparseTensor coaction_power(const ModuleBinding& m, int c) {
  if (c == 0) return sparse_identity(m.dim);
  SparseTensor r = m.coaction();  // [in, mod, f1]
  for (int step = 2; step <= c; ++step) {
    SparseTensor e = contract(r, m.coaction(), {{1, 0}});
    // axes: [in, f1..f_{step-1}, mod, f_new];  new functional slot is a_(1)
    std::vector<int> perm(step + 2);
    perm[0] = 0;
    perm[1] = step;      // module slot
    perm[2] = step + 1;  // innermost coaction leg becomes a_(1)
    for (int i = 3; i < step + 2; ++i) perm[i] = i - 2;
    r = permute(e, perm);
  }
  return r;
}

struct Wire {
  PortRef port;
  Tag tag;
  bool scalar = false;
};

class TermCompiler {
 public:
  TermCompiler(const Env& env, const std::map<std::string, Tag>& var_tags) : env_(env), var_tags_(var_tags) {}

  ContractionPlan compile_term(const std::vector<ExprPtr>& position_nodes, const Signature& sig,
                               std::vector<bool>* pos_scalar) {
    // pre-scan all positions for shared atoms
    for (const auto& p : position_nodes) scan_atoms(p, env_, var_tags_, uses_);
    make_atom_nodes();
    for (const auto& p : position_nodes) {
      if (!p) {
        pos_scalar->push_back(true);
        plan_.out_ports.push_back(PortRef{});
        continue;
      }
      Wire w = build(p);
      pos_scalar->push_back(w.scalar);
      plan_.out_ports.push_back(w.port);
      pos_tags_.push_back(w.tag);
    }
    // variable input ports in signature order
    for (const auto& v : sig.vars) {
      auto it = var_ports_.find(v.name);
      if (it == var_ports_.end())
        throw Error("variable '" + v.name + "' missing from an additive term; expression is not multilinear");
      plan_.var_ports.push_back(it->second);
    }
    return std::move(plan_);
  }

  const std::vector<Tag>& position_tags() const { return pos_tags_; }
  const std::map<std::string, AtomUse>& uses() const { return uses_; }

 private:
  int add_node(std::string label, SparseTensor t) {
    plan_.nodes.push_back({std::move(label), std::move(t)});
    return static_cast<int>(plan_.nodes.size()) - 1;
  }
  void connect(PortRef a, PortRef b) { plan_.edges.push_back({a, b}); }

  std::vector<Rat> const_vector(const std::string& name) const { return env_.consts.at(name).second; }

  SparseTensor vector_tensor(const std::vector<Rat>& v) const {
    SparseTensor t(Index{static_cast<int64_t>(v.size())});
    for (size_t i = 0; i < v.size(); ++i)
      if (!is_zero(v[i])) t.set({static_cast<int64_t>(i)}, v[i]);
    return t;
  }

  void make_atom_nodes() {
    for (const auto& [name, use] : uses_) {
      Tag tag = tag_of_atom(name, env_, var_tags_);
      if (use.plain) {
        // identity expansion; port 0 = input (for variables), port 1 = value
        if (use.is_const) continue;  // plain consts handled per occurrence
        int64_t d = env_.dim_of(tag);
        int n = add_node("var " + name, sparse_identity(d));
        var_ports_[name] = {n, 0};
        atom_leg_ports_[name][tag.kind == Tag::kModule ? 0 : 1] = {n, 1};
        continue;
      }
      int maxleg = *use.legs.rbegin();
      if (tag.kind == Tag::kModule) {
        if (!use.legs.count(0)) throw Error("coaction use of '" + name + "' needs leg (0)");
        for (int j = 0; j <= maxleg; ++j)
          if (!use.legs.count(j)) throw Error("coaction legs of '" + name + "' must be 0..k, missing " + std::to_string(j));
        const ModuleBinding& m = env_.modules.at(tag.module);
        SparseTensor rho = coaction_power(m, maxleg);
        if (use.is_const) {
          rho = contract(vector_tensor(const_vector(name)), rho, {{0, 0}});
          int n = add_node("const " + name + " coaction", std::move(rho));
          for (int j = 0; j <= maxleg; ++j) atom_leg_ports_[name][j] = {n, j};
        } else {
          int n = add_node("var " + name + " coaction", std::move(rho));
          var_ports_[name] = {n, 0};
          for (int j = 0; j <= maxleg; ++j) atom_leg_ports_[name][j] = {n, j + 1};
        }
      } else {
        for (int j = 1; j <= maxleg; ++j)
          if (!use.legs.count(j)) throw Error("Sweedler legs of '" + name + "' must be 1..k, missing " + std::to_string(j));
        SparseTensor dk = comult_power(env_.space(tag), maxleg);
        if (use.is_const) {
          dk = contract(vector_tensor(const_vector(name)), dk, {{0, 0}});
          int n = add_node("const " + name + " Delta^" + std::to_string(maxleg), std::move(dk));
          for (int j = 1; j <= maxleg; ++j) atom_leg_ports_[name][j] = {n, j - 1};
        } else {
          int n = add_node("var " + name + " Delta^" + std::to_string(maxleg), std::move(dk));
          var_ports_[name] = {n, 0};
          for (int j = 1; j <= maxleg; ++j) atom_leg_ports_[name][j] = {n, j};
        }
      }
    }
  }

  std::vector<Rat> const_power(const std::string& name, int p, const Tag& tag) const {
    const QuantumGroup& g = env_.space(tag);
    if (p == 0) return tag.kind == Tag::kH ? env_.H->unit : env_.H->counit;
    std::vector<Rat> base;
    if (p > 0)
      base = const_vector(name);
    else {
      auto it = env_.const_inverse.find(name);
      if (it == env_.const_inverse.end()) throw Error("no inverse bound for constant '" + name + "'");
      base = it->second;
    }
    std::vector<Rat> r = base;
    for (int i = 1; i < std::abs(p); ++i) r = g.mul(r, base);
    return r;
  }

  Wire build(const ExprPtr& e) {
    switch (e->kind) {
      case Expr::kAtom: {
        Tag tag = tag_of_atom(e->name, env_, var_tags_);
        bool is_const = env_.consts.count(e->name) > 0;
        if (is_const && !e->leg) {
          int n = add_node("const " + e->name, vector_tensor(const_vector(e->name)));
          return {{n, 0}, tag, false};
        }
        int leg = e->leg ? *e->leg : (tag.kind == Tag::kModule ? 0 : 1);
        PortRef p = atom_leg_ports_.at(e->name).at(leg);
        Tag out = tag;
        if (tag.kind == Tag::kModule && leg >= 1) out = env_.dual_tag(env_.modules.at(tag.module).actor);
        return {p, out, false};
      }
      case Expr::kPow: {
        if (e->a->kind != Expr::kAtom || e->a->leg || var_tags_.count(e->a->name))
          throw Error("powers are only defined on invertible constants");
        Tag tag = tag_of_atom(e->a->name, env_, var_tags_);
        int n = add_node("const " + e->a->name + "^" + std::to_string(e->power),
                         vector_tensor(const_power(e->a->name, e->power, tag)));
        return {{n, 0}, tag, false};
      }
      case Expr::kMul: {
        Wire a = build(e->a);
        Wire b = build(e->b);
        if (a.scalar) return b;
        if (b.scalar) return a;
        if (a.tag != b.tag) throw Error("cannot multiply an element of " + a.tag.str() + " with one of " + b.tag.str());
        SparseTensor m;
        std::string label;
        if (a.tag.kind == Tag::kModule) {
          const ModuleBinding& mod = env_.modules.at(a.tag.module);
          if (!mod.mult) throw Error("module '" + a.tag.module + "' is not an algebra");
          m = *mod.mult;
          label = "mult " + a.tag.module;
        } else {
          m = env_.space(a.tag).mult;
          label = "mult " + a.tag.str();
        }
        int n = add_node(label, std::move(m));
        connect(a.port, {n, 0});
        connect(b.port, {n, 1});
        return {{n, 2}, a.tag, false};
      }
      case Expr::kHitL: {
        Wire x = build(e->a);
        Wire w = build(e->b);
        if (x.scalar || w.scalar) throw Error("scalar operand in a hit");
        if (w.tag != env_.dual_tag(x.tag)) throw Error("x .> w requires w in the dual of x's algebra");
        int n = add_node("hitL " + x.tag.str(), env_.space(x.tag).mult);
        connect(x.port, {n, 1});
        connect(w.port, {n, 2});
        return {{n, 0}, w.tag, false};
      }
      case Expr::kHitR: {
        Wire w = build(e->a);
        Wire x = build(e->b);
        if (x.scalar || w.scalar) throw Error("scalar operand in a hit");
        if (w.tag != env_.dual_tag(x.tag)) throw Error("w <. x requires w in the dual of x's algebra");
        int n = add_node("hitR " + x.tag.str(), env_.space(x.tag).mult);
        connect(x.port, {n, 0});
        connect(w.port, {n, 2});
        return {{n, 1}, w.tag, false};
      }
      case Expr::kPair: {
        Wire a = build(e->a);
        Wire b = build(e->b);
        if (a.scalar || b.scalar) throw Error("scalar operand in a pairing");
        if (a.tag.kind == Tag::kModule || b.tag != env_.dual_tag(a.tag))
          throw Error("pairing requires one element of H and one of its dual, got " + a.tag.str() + " with " + b.tag.str());
        connect(a.port, b.port);
        return {PortRef{}, Tag::H(), true};
      }
      case Expr::kAct: {
        Wire x = build(e->a);
        Wire a = build(e->b);
        if (x.scalar || a.scalar) throw Error("scalar operand in act(...)");
        if (a.tag.kind != Tag::kModule) throw Error("act(x, a): second argument must be a module element");
        const ModuleBinding& m = env_.modules.at(a.tag.module);
        if (x.tag != m.actor) throw Error("act(x, a): x must lie in " + m.actor.str() + " for module " + m.name);
        int n = add_node("act " + m.name, m.action);
        connect(x.port, {n, 0});
        connect(a.port, {n, 1});
        return {{n, 2}, a.tag, false};
      }
      case Expr::kApply: {
        if (e->name == "S" || e->name == "Sinv" || e->name == "S2") {
          Wire a = build(e->a);
          if (a.scalar || a.tag.kind == Tag::kModule) throw Error("antipode applies to elements of H or its dual");
          int p = e->name == "S" ? 1 : e->name == "Sinv" ? -1 : 2;
          int n = add_node(e->name + " " + a.tag.str(), env_.antipode_power(a.tag, p).to_tensor());
          connect(a.port, {n, 1});
          return {{n, 0}, a.tag, false};
        }
        auto mit = env_.maps.find(e->name);
        if (mit != env_.maps.end()) {
          Wire a = build(e->a);
          if (a.scalar || a.tag != mit->second.in)
            throw Error("map " + e->name + " expects an argument in " + mit->second.in.str());
          int n = add_node("map " + e->name, mit->second.matrix);
          connect(a.port, {n, 1});
          return {{n, 0}, mit->second.out, false};
        }
        if (env_.consts.count(e->name) || var_tags_.count(e->name)) {
          // functional application = pairing with the named atom
          ExprPtr atom = make_expr(Expr::kAtom);
          atom->name = e->name;
          Wire f = build(atom);
          Wire a = build(e->a);
          if (a.scalar) throw Error("scalar operand in " + e->name + "(...)");
          if (a.tag != env_.dual_tag(f.tag))
            throw Error("cannot pair " + e->name + " (" + f.tag.str() + ") with an element of " + a.tag.str());
          connect(f.port, a.port);
          return {PortRef{}, Tag::H(), true};
        }
        throw Error("unknown function '" + e->name + "'");
      }
      default:
        throw Error("sum inside a normalized term; internal error");
    }
  }

  const Env& env_;
  const std::map<std::string, Tag>& var_tags_;
  ContractionPlan plan_;
  std::map<std::string, AtomUse> uses_;
  std::map<std::string, PortRef> var_ports_;
  std::map<std::string, std::map<int, PortRef>> atom_leg_ports_;
  std::vector<Tag> pos_tags_;
};

}  // namespace detail

// ---------------------------------------------------------------------------
// compile

inline CompiledExpr compile(const PositionedExpr& pe, const Env& env, const std::map<std::string, Tag>& var_tags) {
  size_t npos = pe.positions.size();
  // normalize each position, then form the cross product of the terms so a
  // term assigns one sum-free node per position
  std::vector<std::vector<detail::FlatTerm>> per_pos;
  per_pos.reserve(npos);
  for (const auto& p : pe.positions) per_pos.push_back(detail::normalize(p));

  std::vector<std::pair<Rat, std::vector<ExprPtr>>> flat;
  flat.push_back({Rat(1), {}});
  for (const auto& opts : per_pos) {
    std::vector<std::pair<Rat, std::vector<ExprPtr>>> next;
    for (const auto& [c, nodes] : flat)
      for (const auto& t : opts) {
        auto nn = nodes;
        nn.push_back(t.node);
        next.push_back({c * t.coeff, std::move(nn)});
      }
    flat = std::move(next);
  }

  // signature: union of variables over all terms
  std::map<std::string, Tag> seen;
  for (const auto& [c, nodes] : flat) {
    std::map<std::string, detail::AtomUse> uses;
    for (const auto& n : nodes) detail::scan_atoms(n, env, var_tags, uses);
    for (const auto& [name, use] : uses)
      if (!use.is_const) seen[name] = detail::tag_of_atom(name, env, var_tags);
  }
  CompiledExpr ce;
  for (const auto& [name, tag] : seen) ce.sig.vars.push_back({name, tag, env.dim_of(tag)});

  std::optional<std::vector<PosSig>> possig;
  for (const auto& [c, nodes] : flat) {
    detail::TermCompiler tc(env, var_tags);
    std::vector<bool> scal;
    ContractionPlan plan = tc.compile_term(nodes, ce.sig, &scal);
    std::vector<PosSig> ps;
    int wired = 0;
    for (size_t i = 0; i < npos; ++i) {
      if (scal[i])
        ps.push_back({Tag::H(), 0, true});
      else {
        Tag t = tc.position_tags()[wired++];
        ps.push_back({t, env.dim_of(t), false});
      }
    }
    if (!possig)
      possig = ps;
    else if (!(*possig == ps))
      throw Error("tensor positions disagree between additive terms");
    ce.terms.push_back({c, std::move(plan)});
  }
  ce.sig.positions = *possig;
  return ce;
}

inline CompiledExpr compile(const std::string& src, const Env& env, const std::map<std::string, Tag>& var_tags) {
  return compile(parse(src), env, var_tags);
}

// ---------------------------------------------------------------------------
// evaluate

enum class EvalOrder { Greedy, ReverseGreedy, Declared };

namespace detail {

struct LiveTensor {
  SparseTensor t;
  std::map<std::pair<int, int>, int> ports;  // (node, port) -> axis
  int id = 0;
};

class PlanEvaluator {
 public:
  PlanEvaluator(const ContractionPlan& plan) : plan_(plan) {}

  // order: edge indices in processing order; empty = greedy
  SparseTensor run(const std::vector<int>& order, std::vector<int>* consumed_order) {
    init();
    if (order.empty())
      run_greedy(consumed_order);
    else
      run_fixed(order);
    return finish();
  }

  std::vector<int> greedy_order() {
    std::vector<int> order;
    init();
    run_greedy(&order);
    finish();
    return order;
  }

 private:
  void init() {
    live_.clear();
    where_.assign(plan_.nodes.size(), 0);
    for (size_t i = 0; i < plan_.nodes.size(); ++i) {
      LiveTensor lt;
      lt.t = plan_.nodes[i].tensor;
      lt.id = static_cast<int>(i);
      for (int p = 0; p < lt.t.rank(); ++p) lt.ports[{static_cast<int>(i), p}] = p;
      where_[i] = static_cast<int>(live_.size());
      live_.push_back(std::move(lt));
    }
    pending_.clear();
    for (size_t e = 0; e < plan_.edges.size(); ++e) pending_.push_back(static_cast<int>(e));
  }

  int live_of(PortRef p) const { return where_[p.node]; }

  // contracts every pending edge between the two live tensors
  void merge(int la, int lb, std::vector<int>* consumed) {
    LiveTensor& A = live_[la];
    LiveTensor& B = live_[lb];
    std::vector<std::pair<int, int>> axes;
    std::vector<int> used_edges;
    for (int e : pending_) {
      PortRef pa = plan_.edges[e].a, pb = plan_.edges[e].b;
      if (live_of(pa) == la && live_of(pb) == lb) {
        axes.push_back({A.ports.at({pa.node, pa.port}), B.ports.at({pb.node, pb.port})});
        used_edges.push_back(e);
      } else if (live_of(pa) == lb && live_of(pb) == la) {
        axes.push_back({A.ports.at({pb.node, pb.port}), B.ports.at({pa.node, pa.port})});
        used_edges.push_back(e);
      }
    }
    SparseTensor r = contract(A.t, B.t, axes);
    // rebuild port map: remaining axes of A, then of B
    std::map<std::pair<int, int>, int> ports;
    std::vector<bool> ca(A.t.rank(), false), cb(B.t.rank(), false);
    for (auto [i, j] : axes) {
      ca[i] = true;
      cb[j] = true;
    }
    int ax = 0;
    for (const auto& [key, axis] : sort_ports(A.ports))
      if (!ca[axis]) ports[key] = ax++;
    for (const auto& [key, axis] : sort_ports(B.ports))
      if (!cb[axis]) ports[key] = ax++;
    A.t = std::move(r);
    A.ports = std::move(ports);
    for (size_t i = 0; i < where_.size(); ++i)
      if (where_[i] == lb) where_[i] = la;
    live_[lb].ports.clear();
    live_[lb].t = SparseTensor(Index{1});
    dead_.insert(lb);
    for (int e : used_edges) {
      pending_.erase(std::find(pending_.begin(), pending_.end(), e));
      if (consumed) consumed->push_back(e);
    }
  }

  // axis-sorted (node,port) pairs so the rebuilt map matches contract()'s
  // output ordering
  static std::vector<std::pair<std::pair<int, int>, int>> sort_ports(const std::map<std::pair<int, int>, int>& m) {
    std::vector<std::pair<std::pair<int, int>, int>> v(m.begin(), m.end());
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) { return x.second < y.second; });
    return v;
  }

  void trace_internal(int la, std::vector<int>* consumed) {
    bool progress = true;
    while (progress) {
      progress = false;
      for (int e : pending_) {
        PortRef pa = plan_.edges[e].a, pb = plan_.edges[e].b;
        if (live_of(pa) != la || live_of(pb) != la) continue;
        LiveTensor& A = live_[la];
        int ax1 = A.ports.at({pa.node, pa.port});
        int ax2 = A.ports.at({pb.node, pb.port});
        A.t = self_trace(A.t, ax1, ax2);
        A.ports.erase({pa.node, pa.port});
        A.ports.erase({pb.node, pb.port});
        for (auto& [key, axis] : A.ports) {
          int shift = (axis > ax1 ? 1 : 0) + (axis > ax2 ? 1 : 0);
          axis -= shift;
        }
        pending_.erase(std::find(pending_.begin(), pending_.end(), e));
        if (consumed) consumed->push_back(e);
        progress = true;
        break;
      }
    }
  }

  void trace_all_internal(std::vector<int>* consumed) {
    for (size_t l = 0; l < live_.size(); ++l)
      if (!dead_.count(static_cast<int>(l))) trace_internal(static_cast<int>(l), consumed);
  }

  void run_greedy(std::vector<int>* consumed) {
    trace_all_internal(consumed);
    while (!pending_.empty()) {
      // candidate pairs of live tensors connected by an edge
      std::map<std::pair<int, int>, bool> pairs;
      for (int e : pending_) {
        int la = live_of(plan_.edges[e].a), lb = live_of(plan_.edges[e].b);
        pairs[{std::min(la, lb), std::max(la, lb)}] = true;
      }
      std::pair<int, int> best{-1, -1};
      double best_size = 0;
      for (const auto& [pr, _] : pairs) {
        double size = merged_size(pr.first, pr.second);
        if (best.first < 0 || size < best_size) {
          best = pr;
          best_size = size;
        }
      }
      merge(best.first, best.second, consumed);
      trace_all_internal(consumed);
    }
  }

  // exact slot count of the tensor the merge would produce
  double merged_size(int la, int lb) const {
    double s = 1;
    for (int64_t d : live_[la].t.shape()) s *= static_cast<double>(d);
    for (int64_t d : live_[lb].t.shape()) s *= static_cast<double>(d);
    for (int e : pending_) {
      int a = live_of(plan_.edges[e].a), b = live_of(plan_.edges[e].b);
      if ((a == la && b == lb) || (a == lb && b == la)) {
        const PortRef& pa = plan_.edges[e].a;
        int axis = live_[a].ports.at({pa.node, pa.port});
        double d = static_cast<double>(live_[a].t.dim(axis));
        s /= d * d;
      }
    }
    return s;
  }

  void run_fixed(const std::vector<int>& order) {
    for (int e : order) {
      if (std::find(pending_.begin(), pending_.end(), e) == pending_.end()) continue;
      int la = live_of(plan_.edges[e].a), lb = live_of(plan_.edges[e].b);
      if (la == lb) {
        trace_internal(la, nullptr);
      } else {
        merge(std::min(la, lb), std::max(la, lb), nullptr);
      }
    }
    // anything left (shouldn't happen when order covers all edges)
    trace_all_internal(nullptr);
    while (!pending_.empty()) {
      int e = pending_.front();
      int la = live_of(plan_.edges[e].a), lb = live_of(plan_.edges[e].b);
      merge(std::min(la, lb), std::max(la, lb), nullptr);
      trace_all_internal(nullptr);
    }
  }

  SparseTensor finish() {
    // outer product of the remaining live tensors in id order
    SparseTensor result = SparseTensor::scalar(Rat(1));
    std::map<std::pair<int, int>, int> ports;
    for (size_t l = 0; l < live_.size(); ++l) {
      if (dead_.count(static_cast<int>(l))) continue;
      int base = result.rank();
      result = outer(result, live_[l].t);
      for (const auto& [key, axis] : live_[l].ports) ports[key] = base + axis;
    }
    final_ports_ = std::move(ports);
    return result;
  }

 public:
  // after run(): axis of a given free port in the returned tensor
  int axis_of(PortRef p) const { return final_ports_.at({p.node, p.port}); }

 private:
  const ContractionPlan& plan_;
  std::vector<LiveTensor> live_;
  std::vector<int> where_;
  std::set<int> dead_;
  std::vector<int> pending_;
  std::map<std::pair<int, int>, int> final_ports_;
};

}  // namespace detail

// Evaluates to the tensor with axes [vars (name-sorted) ..., positions ...].
inline SparseTensor evaluate(const CompiledExpr& ce, EvalOrder order = EvalOrder::Greedy) {
  SparseTensor result(ce.sig.tensor_shape());
  for (const auto& term : ce.terms) {
    detail::PlanEvaluator ev(term.plan);
    std::vector<int> fixed;
    if (order == EvalOrder::ReverseGreedy) {
      fixed = ev.greedy_order();
      std::reverse(fixed.begin(), fixed.end());
    } else if (order == EvalOrder::Declared) {
      for (size_t e = 0; e < term.plan.edges.size(); ++e) fixed.push_back(static_cast<int>(e));
    }
    SparseTensor t = ev.run(fixed, nullptr);
    // permute free axes into signature order
    std::vector<int> perm;
    for (const auto& p : term.plan.var_ports) perm.push_back(ev.axis_of(p));
    for (const auto& p : term.plan.out_ports)
      if (p.valid()) perm.push_back(ev.axis_of(p));
    if (static_cast<int>(perm.size()) != t.rank()) throw Error("dangling axes after contraction; internal error");
    result += permute(t, perm).scaled(term.coeff);
  }
  return result;
}

// ---------------------------------------------------------------------------
// identity checking

struct Verdict {
  bool equal = false;
  std::string witness;
};

inline Verdict check_identity(const CompiledExpr& lhs, const CompiledExpr& rhs, const Env& env,
                              EvalOrder order = EvalOrder::Greedy) {
  if (!(lhs.sig == rhs.sig)) throw Error("identity sides have different signatures");
  SparseTensor l = evaluate(lhs, order);
  SparseTensor r = evaluate(rhs, order);
  Verdict v;
  auto diff = l.first_difference(r);
  if (!diff) {
    v.equal = true;
    return v;
  }
  std::string w;
  size_t ax = 0;
  for (const auto& var : lhs.sig.vars) {
    if (ax) w += ", ";
    w += var.name + "=" + env.names_of(var.tag)[(*diff)[ax]];
    ++ax;
  }
  int pos = 0;
  for (const auto& p : lhs.sig.positions) {
    ++pos;
    if (p.scalar) continue;
    if (ax) w += ", ";
    w += "slot" + std::to_string(pos) + "=" + env.names_of(p.tag)[(*diff)[ax]];
    ++ax;
  }
  std::ostringstream os;
  os << w << ": lhs=" << rat_str(l.at(*diff)) << " rhs=" << rat_str(r.at(*diff));
  v.witness = os.str();
  return v;
}

inline Verdict check_identity(const std::string& src, const Env& env, const std::map<std::string, Tag>& var_tags,
                              EvalOrder order = EvalOrder::Greedy) {
  auto [l, r] = parse_identity(src);
  return check_identity(compile(l, env, var_tags), compile(r, env, var_tags), env, order);
}

}  // namespace hopfcalc::dsl
