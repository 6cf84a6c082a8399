#pragma once

// Extended and reduced dual graphs of curves, optionally enlarged by a
// modulus vertex, and their chain complexes.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "neron/abelian.hpp"

namespace neron {

struct Branch {
  std::string id;
  std::string phi;  // singular point (A)
  std::string psi;  // component (C)
};

/// A modulus point with the vertex it lies over (λ into A, or θ into C).
struct ModulusPoint {
  std::string id;
  std::string target;
};

namespace detail {

inline std::map<std::string, std::size_t> index_of(const std::vector<std::string>& labels) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < labels.size(); ++i) idx.emplace(labels[i], i);
  return idx;
}

inline std::vector<std::string> sorted_unique(std::vector<std::string> labels, const char* what) {
  std::sort(labels.begin(), labels.end());
  if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
    throw InvalidInput(std::string("duplicate label among ") + what);
  return labels;
}

template <class T>
std::vector<T> sorted_by_id(std::vector<T> items, const char* what) {
  std::sort(items.begin(), items.end(), [](const T& a, const T& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < items.size(); ++i)
    if (items[i].id == items[i - 1].id) throw InvalidInput(std::string("duplicate id among ") + what + ": " + items[i].id);
  return items;
}

inline std::size_t lookup(const std::map<std::string, std::size_t>& idx, const std::string& key, const char* what) {
  auto it = idx.find(key);
  if (it == idx.end()) throw InvalidInput(std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

}  // namespace detail

/// Bipartite graph with singular points A, components C and branches B,
/// each branch running from φ(b) ∈ A to ψ(b) ∈ C. All lists are kept
/// sorted by label, which fixes every matrix ordering.
class ExtendedGraph {
 public:
  ExtendedGraph() = default;
  ExtendedGraph(std::vector<std::string> A, std::vector<std::string> C, std::vector<Branch> B)
      : A_(detail::sorted_unique(std::move(A), "A")),
        C_(detail::sorted_unique(std::move(C), "C")),
        B_(detail::sorted_by_id(std::move(B), "B")) {
    for (const auto& a : A_)
      if (std::binary_search(C_.begin(), C_.end(), a)) throw InvalidInput("label '" + a + "' used in both A and C");
    a_idx_ = detail::index_of(A_);
    c_idx_ = detail::index_of(C_);
    for (const auto& b : B_) {
      detail::lookup(a_idx_, b.phi, "singular point");
      detail::lookup(c_idx_, b.psi, "component");
    }
  }

  const std::vector<std::string>& A() const noexcept { return A_; }
  const std::vector<std::string>& C() const noexcept { return C_; }
  const std::vector<Branch>& B() const noexcept { return B_; }

  std::size_t a_index(const std::string& a) const { return detail::lookup(a_idx_, a, "singular point"); }
  std::size_t c_index(const std::string& c) const { return detail::lookup(c_idx_, c, "component"); }

  std::size_t branch_index(const std::string& id) const {
    auto it = std::lower_bound(B_.begin(), B_.end(), id, [](const Branch& b, const std::string& k) { return b.id < k; });
    if (it == B_.end() || it->id != id) throw InvalidInput("unknown branch '" + id + "'");
    return static_cast<std::size_t>(it - B_.begin());
  }

  /// Number of branches through each singular point.
  std::vector<std::size_t> a_degrees() const {
    std::vector<std::size_t> deg(A_.size());
    for (const auto& b : B_) ++deg[a_index(b.phi)];
    return deg;
  }

 private:
  std::vector<std::string> A_, C_;
  std::vector<Branch> B_;
  std::map<std::string, std::size_t> a_idx_, c_idx_;
};

/// Extended graph together with a modulus: Σ^sing lying over singular
/// points, Σ^reg lying over components, and a vertex v₀ joined to each.
class GraphWithModulus {
 public:
  GraphWithModulus() = default;
  explicit GraphWithModulus(ExtendedGraph base) : GraphWithModulus(std::move(base), {}, {}) {}
  GraphWithModulus(ExtendedGraph base, std::vector<ModulusPoint> sigma_sing, std::vector<ModulusPoint> sigma_reg,
                   std::string v0 = "v0")
      : base_(std::move(base)),
        sing_(detail::sorted_by_id(std::move(sigma_sing), "sigma_sing")),
        reg_(detail::sorted_by_id(std::move(sigma_reg), "sigma_reg")),
        v0_(std::move(v0)) {
    if (std::binary_search(base_.A().begin(), base_.A().end(), v0_) ||
        std::binary_search(base_.C().begin(), base_.C().end(), v0_))
      throw InvalidInput("modulus vertex label '" + v0_ + "' collides with a graph vertex");
    for (const auto& s : sing_) base_.a_index(s.target);
    for (const auto& r : reg_) base_.c_index(r.target);
    std::vector<std::string> ids;
    for (const auto& b : base_.B()) ids.push_back(b.id);
    for (const auto& s : sing_) ids.push_back(s.id);
    for (const auto& r : reg_) ids.push_back(r.id);
    detail::sorted_unique(ids, "edges (branches and modulus points)");
  }

  const ExtendedGraph& base() const noexcept { return base_; }
  const std::vector<ModulusPoint>& sigma_sing() const noexcept { return sing_; }
  const std::vector<ModulusPoint>& sigma_reg() const noexcept { return reg_; }
  const std::string& v0() const noexcept { return v0_; }
  bool has_modulus() const noexcept { return !sing_.empty() || !reg_.empty(); }

  std::size_t edge_count() const noexcept { return base_.B().size() + sing_.size() + reg_.size(); }

  /// Column labels shared by char_group_matrix and the boundary matrix:
  /// branches, then Σ^sing, then Σ^reg.
  std::vector<std::string> edge_labels() const {
    std::vector<std::string> out;
    for (const auto& b : base_.B()) out.push_back(b.id);
    for (const auto& s : sing_) out.push_back(s.id);
    for (const auto& r : reg_) out.push_back(r.id);
    return out;
  }

  /// Row labels of the boundary matrix: C, A, then v₀ when the modulus is nonempty.
  std::vector<std::string> vertex_labels() const {
    std::vector<std::string> out(base_.C());
    out.insert(out.end(), base_.A().begin(), base_.A().end());
    if (has_modulus()) out.push_back(v0_);
    return out;
  }

  std::size_t edge_index(const std::string& id) const {
    const auto labels = edge_labels();
    auto it = std::find(labels.begin(), labels.end(), id);
    if (it == labels.end()) throw InvalidInput("unknown edge '" + id + "'");
    return static_cast<std::size_t>(it - labels.begin());
  }

 private:
  ExtendedGraph base_;
  std::vector<ModulusPoint> sing_, reg_;
  std::string v0_ = "v0";
};

/// ℤ[B] ⊕ ℤ[Σ^sing] ⊕ ℤ[Σ^reg] → ℤ[C] ⊕ ℤ[A] with block matrix
/// [[ψ, 0, θ], [φ, λ, 0]]. Its kernel is the character group of the torus.
inline IntMatrix char_group_matrix(const GraphWithModulus& g) {
  const auto& base = g.base();
  const std::size_t nc = base.C().size(), nb = base.B().size(), ns = g.sigma_sing().size();
  IntMatrix m(nc + base.A().size(), g.edge_count());
  for (std::size_t j = 0; j < nb; ++j) {
    const auto& b = base.B()[j];
    m(base.c_index(b.psi), j) += 1;
    m(nc + base.a_index(b.phi), j) += 1;
  }
  for (std::size_t j = 0; j < ns; ++j) m(nc + base.a_index(g.sigma_sing()[j].target), nb + j) += 1;
  for (std::size_t j = 0; j < g.sigma_reg().size(); ++j) m(base.c_index(g.sigma_reg()[j].target), nb + ns + j) += 1;
  return m;
}

/// Boundary of the homology complex of the graph with modulus: a branch b
/// goes from φ(b) to ψ(b), a modulus edge goes from v₀ to its target.
inline IntMatrix boundary_matrix(const GraphWithModulus& g) {
  const auto& base = g.base();
  const std::size_t nc = base.C().size(), na = base.A().size(), nb = base.B().size(), ns = g.sigma_sing().size();
  const std::size_t v0_row = nc + na;
  IntMatrix m(nc + na + (g.has_modulus() ? 1 : 0), g.edge_count());
  for (std::size_t j = 0; j < nb; ++j) {
    const auto& b = base.B()[j];
    m(base.c_index(b.psi), j) += 1;
    m(nc + base.a_index(b.phi), j) -= 1;
  }
  for (std::size_t j = 0; j < ns; ++j) {
    m(nc + base.a_index(g.sigma_sing()[j].target), nb + j) += 1;
    m(v0_row, nb + j) -= 1;
  }
  for (std::size_t j = 0; j < g.sigma_reg().size(); ++j) {
    m(base.c_index(g.sigma_reg()[j].target), nb + ns + j) += 1;
    m(v0_row, nb + ns + j) -= 1;
  }
  return m;
}

inline IntMatrix boundary_matrix(const ExtendedGraph& g) { return boundary_matrix(GraphWithModulus(g)); }

struct CycleBasis {
  std::size_t rank = 0;
  IntMatrix basis;                  // columns are cycles
  std::vector<std::string> labels;  // row labels (edges)
};

inline CycleBasis h1(const GraphWithModulus& g) {
  IntMatrix k = kernel_basis(boundary_matrix(g));
  return CycleBasis{k.cols(), std::move(k), g.edge_labels()};
}

inline CycleBasis h1(const ExtendedGraph& g) { return h1(GraphWithModulus(g)); }

struct ReducedEdge {
  std::string id;
  std::string source;
  std::string target;
  bool modulus = false;  // true for edges from v₀
};

/// Graph with vertices and oriented edges (loops and multiple edges
/// allowed); modulus edges leave the optional vertex v₀.
class ReducedGraph {
 public:
  ReducedGraph() = default;
  ReducedGraph(std::vector<std::string> vertices, std::vector<ReducedEdge> edges, std::string v0 = {})
      : vertices_(detail::sorted_unique(std::move(vertices), "vertices")),
        edges_(detail::sorted_by_id(std::move(edges), "edges")),
        v0_(std::move(v0)) {
    idx_ = detail::index_of(vertices_);
    if (!v0_.empty()) detail::lookup(idx_, v0_, "modulus vertex");
    for (const auto& e : edges_) {
      detail::lookup(idx_, e.source, "vertex");
      detail::lookup(idx_, e.target, "vertex");
      if (e.modulus && (v0_.empty() || e.source != v0_)) throw InvalidInput("modulus edge '" + e.id + "' must leave v0");
      if (!e.modulus && !v0_.empty() && (e.source == v0_ || e.target == v0_))
        throw InvalidInput("edge '" + e.id + "' touches v0 but is not a modulus edge");
    }
  }

  const std::vector<std::string>& vertices() const noexcept { return vertices_; }
  const std::vector<ReducedEdge>& edges() const noexcept { return edges_; }
  const std::string& v0() const noexcept { return v0_; }
  bool has_v0() const noexcept { return !v0_.empty(); }
  std::size_t vertex_index(const std::string& v) const { return detail::lookup(idx_, v, "vertex"); }

  /// Vertices other than v₀, in order.
  std::vector<std::string> core_vertices() const {
    std::vector<std::string> out;
    for (const auto& v : vertices_)
      if (v != v0_) out.push_back(v);
    return out;
  }

  std::vector<std::string> edge_labels() const {
    std::vector<std::string> out;
    for (const auto& e : edges_) out.push_back(e.id);
    return out;
  }

 private:
  std::vector<std::string> vertices_;
  std::vector<ReducedEdge> edges_;
  std::string v0_;
  std::map<std::string, std::size_t> idx_;
};

/// Vertices × edges; +1 at the target, −1 at the source (loops give zero columns).
inline IntMatrix boundary_matrix(const ReducedGraph& g) {
  IntMatrix m(g.vertices().size(), g.edges().size());
  for (std::size_t j = 0; j < g.edges().size(); ++j) {
    const auto& e = g.edges()[j];
    m(g.vertex_index(e.target), j) += 1;
    m(g.vertex_index(e.source), j) -= 1;
  }
  return m;
}

inline CycleBasis h1(const ReducedGraph& g) {
  IntMatrix k = kernel_basis(boundary_matrix(g));
  return CycleBasis{k.cols(), std::move(k), g.edge_labels()};
}

/// 0-Laplacian of the graph without v₀ and its modulus edges, indexed by
/// core_vertices(). Loops contribute nothing.
inline IntMatrix laplacian(const ReducedGraph& g) {
  const auto core = g.core_vertices();
  const auto idx = detail::index_of(core);
  IntMatrix m(core.size(), core.size());
  for (const auto& e : g.edges()) {
    if (e.modulus || e.source == e.target) continue;
    const std::size_t s = idx.at(e.source), t = idx.at(e.target);
    m(s, s) += 1;
    m(t, t) += 1;
    m(s, t) -= 1;
    m(t, s) -= 1;
  }
  return m;
}

/// Contracts every singular point (each must have exactly two branches)
/// to an edge labelled by the point, oriented from the component of the
/// smaller branch id to that of the larger. Σ^reg becomes edges from v₀.
inline ReducedGraph reduce_extended(const GraphWithModulus& g) {
  if (!g.sigma_sing().empty()) throw InvalidInput("reduce_extended: modulus points at singular points are not supported");
  const auto& base = g.base();
  std::vector<std::vector<const Branch*>> through(base.A().size());
  for (const auto& b : base.B()) through[base.a_index(b.phi)].push_back(&b);
  std::vector<ReducedEdge> edges;
  for (std::size_t i = 0; i < base.A().size(); ++i) {
    if (through[i].size() != 2)
      throw InvalidInput("reduce_extended: singular point '" + base.A()[i] + "' has " +
                         std::to_string(through[i].size()) + " branches, expected an ordinary double point");
    edges.push_back({base.A()[i], through[i][0]->psi, through[i][1]->psi, false});
  }
  std::vector<std::string> vertices(base.C());
  std::string v0;
  if (!g.sigma_reg().empty()) {
    v0 = g.v0();
    vertices.push_back(v0);
    for (const auto& r : g.sigma_reg()) edges.push_back({r.id, v0, r.target, true});
  }
  return ReducedGraph(std::move(vertices), std::move(edges), std::move(v0));
}

inline ReducedGraph reduce_extended(const ExtendedGraph& g) { return reduce_extended(GraphWithModulus(g)); }

}  // namespace neron
