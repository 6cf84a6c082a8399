#pragma once

// Component groups and character groups of Néron models of Jacobians and
// generalized Jacobians, computed from special-fibre and modulus data.

#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "neron/abelian.hpp"
#include "neron/graphs.hpp"

namespace neron {

struct FibreComponent {
  std::string label;
  Integer d = 1;   // length multiplicity
  unsigned n = 0;  // inseparability exponent: δ = d·p^n
};

/// Special fibre of a regular model: components with multiplicities and the
/// intersection matrix (Y_j.Y_ℓ) in the order of `components`.
struct SpecialFibre {
  Integer p = 1;  // characteristic exponent of the residue field
  std::vector<FibreComponent> components;
  IntMatrix intersection;

  std::size_t size() const noexcept { return components.size(); }

  Integer p_power(std::size_t j) const { return boost::multiprecision::pow(p, components[j].n); }
  Integer delta(std::size_t j) const { return components[j].d * p_power(j); }

  Integer d_gcd() const {
    Integer g = 0;
    for (const auto& c : components) g = gcd(g, c.d);
    return g;
  }
  Integer delta_gcd() const {
    Integer g = 0;
    for (std::size_t j = 0; j < size(); ++j) g = gcd(g, delta(j));
    return g;
  }

  std::size_t index(const std::string& label) const {
    for (std::size_t j = 0; j < size(); ++j)
      if (components[j].label == label) return j;
    throw InvalidInput("unknown component '" + label + "'");
  }
};

/// Points x_i of the modulus with ramification indices e_i and incidence
/// degrees h_{ij} = deg g_i^*Y_j (rows points, columns components).
struct ModulusIncidence {
  std::vector<std::string> points;
  IntVector e;
  IntMatrix h;

  std::size_t size() const noexcept { return points.size(); }
};

/// Every violated invariant, one line each; empty means valid.
inline std::vector<std::string> validate_fibre(const SpecialFibre& f, const ModulusIncidence* m = nullptr) {
  std::vector<std::string> out;
  const std::size_t c = f.size();
  if (f.p < 1) out.push_back("characteristic exponent p must be >= 1");
  if (c == 0) out.push_back("fibre has no components");
  if (f.intersection.rows() != c || f.intersection.cols() != c) {
    out.push_back("intersection matrix is " + std::to_string(f.intersection.rows()) + "x" +
                  std::to_string(f.intersection.cols()) + ", expected " + std::to_string(c) + "x" + std::to_string(c));
    return out;
  }
  {
    std::vector<std::string> labels;
    for (const auto& comp : f.components) labels.push_back(comp.label);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) out.push_back("duplicate component labels");
  }
  for (std::size_t j = 0; j < c; ++j) {
    const auto& comp = f.components[j];
    if (comp.d < 1) out.push_back("component " + comp.label + ": multiplicity d must be >= 1");
    if (comp.n > 0 && f.p == 1) out.push_back("component " + comp.label + ": n > 0 requires p > 1");
  }
  if (!out.empty()) return out;

  const auto& I = f.intersection;
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t l = j + 1; l < c; ++l) {
      if (I(j, l) != I(l, j))
        out.push_back("intersection matrix not symmetric at (" + f.components[j].label + ", " + f.components[l].label + ")");
      if (I(j, l) < 0)
        out.push_back("negative intersection number (" + f.components[j].label + "." + f.components[l].label + ")");
    }
  if (c > 1)
    for (std::size_t j = 0; j < c; ++j)
      if (I(j, j) >= 0) out.push_back("self-intersection of " + f.components[j].label + " must be negative");
  for (std::size_t l = 0; l < c; ++l) {
    Integer s = 0;
    for (std::size_t j = 0; j < c; ++j) s += f.components[j].d * I(j, l);
    if (s != 0)
      out.push_back("fibre-divisor relation fails at " + f.components[l].label + ": sum d_j (Y_j." +
                    f.components[l].label + ") = " + s.str());
  }
  for (std::size_t j = 0; j < c; ++j) {
    if (f.components[j].n == 0) continue;
    const Integer q = f.p_power(j);
    for (std::size_t l = 0; l < c; ++l)
      if (I(j, l) % q != 0)
        out.push_back("integrality of a fails: p^n_" + f.components[j].label + " does not divide (" +
                      f.components[j].label + "." + f.components[l].label + ")");
  }

  if (m != nullptr) {
    const std::size_t k = m->size();
    if (m->e.size() != k) out.push_back("modulus: e has " + std::to_string(m->e.size()) + " entries for " + std::to_string(k) + " points");
    if (m->h.rows() != k || m->h.cols() != c) {
      out.push_back("modulus: h is " + std::to_string(m->h.rows()) + "x" + std::to_string(m->h.cols()) + ", expected " +
                    std::to_string(k) + "x" + std::to_string(c));
      return out;
    }
    if (m->e.size() != k) return out;
    for (std::size_t i = 0; i < k; ++i) {
      if (m->e[i] < 1) out.push_back("modulus: e at " + m->points[i] + " must be >= 1");
      Integer s = 0;
      for (std::size_t j = 0; j < c; ++j) {
        if (m->h(i, j) < 0) out.push_back("modulus: negative incidence h at (" + m->points[i] + ", " + f.components[j].label + ")");
        s += f.delta(j) * m->h(i, j);
      }
      if (s != m->e[i])
        out.push_back("modulus: e-consistency fails at " + m->points[i] + ": sum delta_j h_ij = " + s.str() +
                      " but e = " + m->e[i].str());
    }
    std::vector<std::string> labels(m->points);
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) out.push_back("modulus: duplicate point labels");
  }
  return out;
}

inline void require_valid(const SpecialFibre& f, const ModulusIncidence* m = nullptr) {
  auto v = validate_fibre(f, m);
  if (!v.empty()) throw ValidationError(std::move(v));
}

/// The maps i, a, b of the complex ℤ → ℤ[C] → ℤ^C → ℤ.
struct RaynaudMaps {
  IntMatrix i;  // C × 1
  IntMatrix a;  // C × C
  IntMatrix b;  // 1 × C
};

inline RaynaudMaps raynaud_maps(const SpecialFibre& f) {
  const std::size_t c = f.size();
  RaynaudMaps r{IntMatrix(c, 1), IntMatrix(c, c), IntMatrix(1, c)};
  for (std::size_t j = 0; j < c; ++j) {
    r.i(j, 0) = f.components[j].d;
    r.b(0, j) = f.delta(j);
    const Integer q = f.p_power(j);
    for (std::size_t l = 0; l < c; ++l) r.a(j, l) = f.intersection(j, l) / q;
  }
  return r;
}

namespace detail {

inline void require_tame(const SpecialFibre& f) {
  if (f.p > 1 && gcd(f.delta_gcd(), f.p) != 1)
    throw InvalidInput("gcd of the delta_j is not prime to p; the component group is not given by this complex");
}

}  // namespace detail

/// Φ_J = ker(b)/im(a), with coordinates on ℤ^C.
inline Decomposition component_group_J(const SpecialFibre& f) {
  require_valid(f);
  detail::require_tame(f);
  const auto r = raynaud_maps(f);
  return homology(r.a, r.b);
}

struct ComponentGroupJm {
  Decomposition group;      // ambient ℤ^C ⊕ ℤ^I
  IntMatrix torus_images;   // column i: coordinates of the image of V_i
  Decomposition phi_J;      // quotient by the torus images

  IntMatrix free_torus_images() const {
    const std::size_t t = group.group.invariant_factors().size();
    return torus_images.row_range(t, torus_images.rows());
  }
};

/// Φ(J_𝔪) as the homology of ℤ[C] →(a,h) ℤ^C ⊕ ℤ^I/eℤ →(b,0) ℤ.
inline ComponentGroupJm component_group_Jm(const SpecialFibre& f, const ModulusIncidence& m) {
  require_valid(f, &m);
  detail::require_tame(f);
  if (m.size() == 0) throw InvalidInput("component_group_Jm: the modulus must have at least one point");
  const std::size_t c = f.size(), k = m.size();
  const auto r = raynaud_maps(f);
  // lift the quotient by eℤ into an extra column (0, e)
  IntMatrix A(c + k, c + 1);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t l = 0; l < c; ++l) A(j, l) = r.a(j, l);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t l = 0; l < c; ++l) A(c + i, l) = m.h(i, l);
    A(c + i, c) = m.e[i];
  }
  IntMatrix B = hstack(r.b, IntMatrix(1, k));
  auto dec = homology(A, B);
  IntMatrix gens(c + k, k);
  for (std::size_t i = 0; i < k; ++i) gens(c + i, i) = 1;
  IntMatrix images = dec.coordinates(gens);
  auto q = quotient(dec.group, images);
  return ComponentGroupJm{std::move(dec), std::move(images), std::move(q)};
}

/// Φ of the torus (∏ R_{F_i/F} G_m)/G_m: coker(e: ℤ → ℤ^I).
inline Decomposition tori_component_group_decomposition(const IntVector& e) {
  if (e.empty()) throw InvalidInput("tori_component_group: the index set must be nonempty");
  for (const auto& x : e)
    if (x < 1) throw InvalidInput("tori_component_group: ramification indices must be >= 1");
  IntMatrix col(e.size(), 1);
  for (std::size_t i = 0; i < e.size(); ++i) col(i, 0) = e[i];
  return cokernel_decomposition(col);
}

inline FGAbGroup tori_component_group(const IntVector& e) { return tori_component_group_decomposition(e).group; }

namespace detail {

inline IntMatrix column_of(const IntVector& v) {
  IntMatrix m(v.size(), 1);
  for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
  return m;
}

}  // namespace detail

struct ToriPhiMaps {
  PresentedGroupMap pullback;   // Φ(f^*): ℤ^I/eℤ → ℤ^{I'}/e'ℤ
  PresentedGroupMap pushforward;  // Φ(f_*): ℤ^{I'}/e'ℤ → ℤ^I/eℤ
};

/// Maps on torus component groups induced by f: I' → I with ramification r.
inline ToriPhiMaps tori_phi_maps(const std::vector<std::size_t>& f, const IntVector& e, const IntVector& e_prime,
                                 const IntVector& r) {
  const std::size_t k = e.size(), kp = e_prime.size();
  if (f.size() != kp || r.size() != kp) throw InvalidInput("tori_phi_maps: f, e' and r must have the same length");
  std::vector<bool> hit(k, false);
  for (auto i : f) {
    if (i >= k) throw InvalidInput("tori_phi_maps: f maps outside I");
    hit[i] = true;
  }
  if (std::find(hit.begin(), hit.end(), false) != hit.end()) throw InvalidInput("tori_phi_maps: f is not surjective");
  tori_component_group_decomposition(e);
  tori_component_group_decomposition(e_prime);
  IntMatrix up(kp, k), down(k, kp);
  for (std::size_t j = 0; j < kp; ++j) {
    if (e_prime[j] % e[f[j]] != 0)
      throw InvalidInput("tori_phi_maps: e_f(j) does not divide e'_j at index " + std::to_string(j));
    up(j, f[j]) = e_prime[j] / e[f[j]];
    down(f[j], j) = r[j];
  }
  const IntMatrix rel = detail::column_of(e), rel_p = detail::column_of(e_prime);
  return ToriPhiMaps{PresentedGroupMap(rel, rel_p, up), PresentedGroupMap(rel_p, rel, down)};
}

/// Φ(J_𝔪) for a semistable model with rational modulus points, as
/// coker((Δ, θ*): ℤ[C] → ℤ[C]⁰ ⊕ ℤ^I/ℤ). Degree-zero vectors are written
/// in the basis (Z_j − Z_last) and ℤ^I/ℤ in the basis of the first |I|−1
/// unit vectors.
inline FGAbGroup semistable_component_group(const ReducedGraph& g) {
  const auto core = g.core_vertices();
  std::vector<std::size_t> theta;
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < core.size(); ++i) idx[core[i]] = i;
  for (const auto& e : g.edges())
    if (e.modulus) theta.push_back(idx.at(e.target));
  if (theta.empty()) throw InvalidInput("semistable_component_group: the modulus must have at least one point");
  const std::size_t c = core.size(), k = theta.size();
  const IntMatrix lap = laplacian(g);
  IntMatrix m((c - 1) + (k - 1), c);
  for (std::size_t j = 0; j + 1 < c; ++j)
    for (std::size_t l = 0; l < c; ++l) m(j, l) = lap(j, l);
  // θ*(Z)_i = [θ(i) = Z], reduced modulo the diagonal
  for (std::size_t l = 0; l < c; ++l)
    for (std::size_t i = 0; i + 1 < k; ++i)
      m(c - 1 + i, l) = Integer(theta[i] == l ? 1 : 0) - Integer(theta[k - 1] == l ? 1 : 0);
  return cokernel(m);
}

/// Reduced graph of a semistable fibre: vertices are components, with
/// (Y_j.Y_ℓ) parallel edges between distinct components; each modulus point
/// becomes an edge from v₀ to the component it meets.
inline ReducedGraph semistable_graph(const SpecialFibre& f, const ModulusIncidence& m) {
  require_valid(f, &m);
  for (const auto& comp : f.components)
    if (comp.d != 1 || comp.n != 0) throw InvalidInput("semistable_component_group: every component must have multiplicity one");
  for (const auto& e : m.e)
    if (e != 1) throw InvalidInput("semistable_component_group: modulus points must be rational (e = 1)");
  std::string v0 = "v0";
  for (const auto& comp : f.components)
    while (comp.label == v0) v0 += "'";
  std::vector<std::string> vertices;
  for (const auto& comp : f.components) vertices.push_back(comp.label);
  vertices.push_back(v0);
  std::vector<ReducedEdge> edges;
  const std::size_t c = f.size();
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t l = j + 1; l < c; ++l)
      for (Integer t = 0; t < f.intersection(j, l); ++t)
        edges.push_back({"e" + std::to_string(j) + "_" + std::to_string(l) + "_" + t.str(), f.components[j].label,
                         f.components[l].label, false});
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::size_t target = c;
    for (std::size_t j = 0; j < c; ++j)
      if (m.h(i, j) == 1) target = j;
    edges.push_back({"m" + std::to_string(i), v0, f.components[target].label, true});
  }
  return ReducedGraph(std::move(vertices), std::move(edges), v0);
}

inline FGAbGroup semistable_component_group(const SpecialFibre& f, const ModulusIncidence& m) {
  return semistable_component_group(semistable_graph(f, m));
}

/// Homology of the dual of ℤ →(i,0) ℤ[C] ⊕ ℤ[I]⁰ →(a, ᵗh) ℤ^C →b ℤ at its
/// middle term; ℤ[I]⁰ uses the basis x_i − x_last.
inline Decomposition duality_check(const SpecialFibre& f, const ModulusIncidence& m) {
  require_valid(f, &m);
  for (const auto& comp : f.components)
    if (comp.n != 0) throw InvalidInput("duality_check: all n_j must be zero");
  if (f.delta_gcd() != 1) throw InvalidInput("duality_check: delta must be 1");
  for (const auto& e : m.e)
    if (e != 1) throw InvalidInput("duality_check: modulus points must be rational (e = 1)");
  if (m.size() == 0) throw InvalidInput("duality_check: the modulus must have at least one point");
  const std::size_t c = f.size(), k = m.size();
  const auto r = raynaud_maps(f);
  IntMatrix first(c + k - 1, 1);  // (i, 0)
  for (std::size_t j = 0; j < c; ++j) first(j, 0) = r.i(j, 0);
  IntMatrix second(c, c + k - 1);  // (a, ᵗh)
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t l = 0; l < c; ++l) second(j, l) = r.a(j, l);
    for (std::size_t i = 0; i + 1 < k; ++i) second(j, c + i) = m.h(i, j) - m.h(k - 1, j);
  }
  return homology(second.transpose(), first.transpose());
}

/// Character group of the torus of the Néron model of J_𝔪: H₁ of the
/// extended graph with modulus.
inline CycleBasis character_group_Jm(const GraphWithModulus& g) { return h1(g); }

inline CycleBasis character_group_Jm(const SpecialFibre& f, const GraphWithModulus& g) {
  if (f.d_gcd() != 1) throw InvalidInput("character_group_Jm: requires gcd of the multiplicities d_j to be 1");
  std::vector<std::string> labels;
  for (const auto& comp : f.components) labels.push_back(comp.label);
  std::sort(labels.begin(), labels.end());
  if (labels != g.base().C()) throw InvalidInput("character_group_Jm: graph components do not match the fibre");
  return h1(g);
}

/// A finite morphism of curves with moduli seen on dual graphs: f maps the
/// cover's A', B', C', Σ' to A, B, C, Σ. r gives ramification at Σ', kappa
/// the residue degree of each component of the cover over its image.
class GraphMorphismData {
 public:
  GraphMorphismData(GraphWithModulus source, GraphWithModulus target, std::map<std::string, std::string> f_A,
                    std::map<std::string, std::string> f_B, std::map<std::string, std::string> f_C,
                    std::map<std::string, std::string> f_Sigma, std::map<std::string, Integer> r,
                    std::map<std::string, Integer> kappa)
      : src_(std::move(source)),
        tgt_(std::move(target)),
        fA_(std::move(f_A)),
        fB_(std::move(f_B)),
        fC_(std::move(f_C)),
        fS_(std::move(f_Sigma)),
        r_(std::move(r)),
        kappa_(std::move(kappa)) {
    validate();
  }

  const GraphWithModulus& source() const noexcept { return src_; }
  const GraphWithModulus& target() const noexcept { return tgt_; }

  /// Pushforward on chains ℤ[B'] ⊕ ℤ[Σ'] → ℤ[B] ⊕ ℤ[Σ].
  IntMatrix chain_pushforward() const {
    IntMatrix m(tgt_.edge_count(), src_.edge_count());
    const std::size_t nbp = src_.base().B().size(), nb = tgt_.base().B().size();
    for (std::size_t j = 0; j < nbp; ++j) m(tgt_.base().branch_index(fB_.at(src_.base().B()[j].id)), j) = 1;
    for (std::size_t j = 0; j < src_.sigma_reg().size(); ++j)
      m(nb + sigma_index(tgt_, fS_.at(src_.sigma_reg()[j].id)), nbp + j) = 1;
    return m;
  }

  /// Inverse image on chains ℤ[B] ⊕ ℤ[Σ] → ℤ[B'] ⊕ ℤ[Σ']: branches pull back
  /// to the sum of their preimages, points to Σ r_{z'/z}(z').
  IntMatrix chain_pullback() const {
    IntMatrix m(src_.edge_count(), tgt_.edge_count());
    const std::size_t nbp = src_.base().B().size(), nb = tgt_.base().B().size();
    for (std::size_t j = 0; j < nbp; ++j) m(j, tgt_.base().branch_index(fB_.at(src_.base().B()[j].id))) = 1;
    for (std::size_t j = 0; j < src_.sigma_reg().size(); ++j) {
      const auto& z = src_.sigma_reg()[j].id;
      m(nbp + j, nb + sigma_index(tgt_, fS_.at(z))) = r_.at(z);
    }
    return m;
  }

  /// Pushforward on vertices ℤ[C'] ⊕ ℤ[A'] → ℤ[C] ⊕ ℤ[A].
  IntMatrix vertex_pushforward() const {
    const auto& s = src_.base();
    const auto& t = tgt_.base();
    IntMatrix m(t.C().size() + t.A().size(), s.C().size() + s.A().size());
    for (std::size_t j = 0; j < s.C().size(); ++j) m(t.c_index(fC_.at(s.C()[j])), j) = 1;
    for (std::size_t j = 0; j < s.A().size(); ++j) m(t.C().size() + t.a_index(fA_.at(s.A()[j])), s.C().size() + j) = 1;
    return m;
  }

  /// Inverse image on vertices: Z ↦ Σ [κ(Z'):κ(Z)](Z'), a ↦ Σ (a').
  IntMatrix vertex_pullback() const {
    const auto& s = src_.base();
    const auto& t = tgt_.base();
    IntMatrix m(s.C().size() + s.A().size(), t.C().size() + t.A().size());
    for (std::size_t j = 0; j < s.C().size(); ++j) m(j, t.c_index(fC_.at(s.C()[j]))) = kappa_.at(s.C()[j]);
    for (std::size_t j = 0; j < s.A().size(); ++j) m(s.C().size() + j, t.C().size() + t.a_index(fA_.at(s.A()[j]))) = 1;
    return m;
  }

 private:
  static std::size_t sigma_index(const GraphWithModulus& g, const std::string& id) {
    for (std::size_t i = 0; i < g.sigma_reg().size(); ++i)
      if (g.sigma_reg()[i].id == id) return i;
    throw InvalidInput("unknown modulus point '" + id + "'");
  }

  static void require_total(const std::map<std::string, std::string>& f, const std::vector<std::string>& domain,
                            const std::vector<std::string>& codomain, const char* what) {
    for (const auto& x : domain) {
      auto it = f.find(x);
      if (it == f.end()) throw InvalidInput(std::string("morphism: ") + what + " map undefined at '" + x + "'");
      if (std::find(codomain.begin(), codomain.end(), it->second) == codomain.end())
        throw InvalidInput(std::string("morphism: ") + what + " map sends '" + x + "' outside the target");
    }
    if (f.size() != domain.size()) throw InvalidInput(std::string("morphism: ") + what + " map has extra entries");
  }

  void validate() const {
    if (!src_.sigma_sing().empty() || !tgt_.sigma_sing().empty())
      throw InvalidInput("morphism: modulus points at singular points are not supported");
    const auto& s = src_.base();
    const auto& t = tgt_.base();
    auto ids = [](const auto& v) {
      std::vector<std::string> out;
      for (const auto& x : v) out.push_back(x.id);
      return out;
    };
    require_total(fA_, s.A(), t.A(), "A");
    require_total(fB_, ids(s.B()), ids(t.B()), "B");
    require_total(fC_, s.C(), t.C(), "C");
    require_total(fS_, ids(src_.sigma_reg()), ids(tgt_.sigma_reg()), "Sigma");
    for (const auto& z : src_.sigma_reg())
      if (!r_.count(z.id) || r_.at(z.id) < 1) throw InvalidInput("morphism: missing or invalid ramification at '" + z.id + "'");
    for (const auto& c : s.C())
      if (!kappa_.count(c) || kappa_.at(c) < 1) throw InvalidInput("morphism: missing or invalid residue degree at '" + c + "'");

    // the square relating φ, ψ, θ on both sides
    for (const auto& b : s.B()) {
      const auto& image = t.B()[t.branch_index(fB_.at(b.id))];
      if (fA_.at(b.phi) != image.phi) throw InvalidInput("morphism: f∘φ' != φ∘f at branch '" + b.id + "'");
      if (fC_.at(b.psi) != image.psi) throw InvalidInput("morphism: f∘ψ' != ψ∘f at branch '" + b.id + "'");
    }
    for (const auto& z : src_.sigma_reg()) {
      const auto& image = tgt_.sigma_reg()[sigma_index(tgt_, fS_.at(z.id))];
      if (fC_.at(z.target) != image.target) throw InvalidInput("morphism: f∘θ' != θ∘f at '" + z.id + "'");
    }
    // étale at A': branches through a' biject onto branches through f(a')
    for (const auto& a : s.A()) {
      std::vector<std::string> images;
      for (const auto& b : s.B())
        if (b.phi == a) images.push_back(fB_.at(b.id));
      std::sort(images.begin(), images.end());
      std::vector<std::string> expected;
      for (const auto& b : t.B())
        if (b.phi == fA_.at(a)) expected.push_back(b.id);
      if (images != expected) throw InvalidInput("morphism: not étale at singular point '" + a + "'");
    }
    // ramification over each component adds up to the residue degree
    for (const auto& z : tgt_.sigma_reg())
      for (const auto& c : s.C()) {
        if (fC_.at(c) != z.target) continue;
        Integer sum = 0;
        for (const auto& zp : src_.sigma_reg())
          if (fS_.at(zp.id) == z.id && zp.target == c) sum += r_.at(zp.id);
        if (sum != kappa_.at(c))
          throw InvalidInput("morphism: ramification over '" + z.id + "' on component '" + c + "' sums to " + sum.str() +
                             ", expected the residue degree " + kappa_.at(c).str());
      }
    if (vertex_pushforward() * char_group_matrix(src_) != char_group_matrix(tgt_) * chain_pushforward())
      throw InvalidInput("morphism: pushforward square does not commute");
    if (vertex_pullback() * char_group_matrix(tgt_) != char_group_matrix(src_) * chain_pullback())
      throw InvalidInput("morphism: inverse-image square does not commute");
  }

  GraphWithModulus src_, tgt_;
  std::map<std::string, std::string> fA_, fB_, fC_, fS_;
  std::map<std::string, Integer> r_;
  std::map<std::string, Integer> kappa_;
};

struct CharacterMap {
  IntMatrix matrix;        // target basis coordinates of the images of the source basis
  IntMatrix source_basis;  // columns: basis of the source character group
  IntMatrix target_basis;
};

/// X(f^*): X' → X, induced by pushforward of chains.
inline CharacterMap char_pullback(const GraphMorphismData& m) {
  IntMatrix ks = kernel_basis(char_group_matrix(m.source()));
  IntMatrix kt = kernel_basis(char_group_matrix(m.target()));
  return CharacterMap{restrict_map(m.chain_pushforward(), ks, kt), ks, kt};
}

/// X(f_*): X → X', induced by inverse image of chains.
inline CharacterMap char_pushforward(const GraphMorphismData& m) {
  IntMatrix ks = kernel_basis(char_group_matrix(m.source()));
  IntMatrix kt = kernel_basis(char_group_matrix(m.target()));
  return CharacterMap{restrict_map(m.chain_pullback(), kt, ks), kt, ks};
}

}  // namespace neron
