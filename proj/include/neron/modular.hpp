#pragma once

// Cusps of X_0(N) and the Hecke / Atkin-Lehner actions on them; special
// fibres of X_0(pM) and X_0(p^2) with their cuspidal moduli, and the
// closed-form component groups they should produce.

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "neron/neron.hpp"
#include "neron/supersingular.hpp"

namespace neron {

namespace detail {

inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m) {
  if (m == 1) return 0;
  std::int64_t t = 0, nt = 1, r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr) {
    std::int64_t q = r / nr;
    t -= q * nt;
    std::swap(t, nt);
    r -= q * nr;
    std::swap(r, nr);
  }
  if (r != 1) throw InvalidInput("inverse_mod: " + std::to_string(a) + " is not a unit mod " + std::to_string(m));
  return static_cast<std::uint64_t>(t < 0 ? t + static_cast<std::int64_t>(m) : t);
}

inline unsigned valuation(std::uint64_t n, std::uint64_t l) {
  unsigned v = 0;
  while (n % l == 0) {
    n /= l;
    ++v;
  }
  return v;
}

inline std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline bool squarefree(std::uint64_t n) {
  for (std::uint64_t q = 2; q * q <= n; ++q)
    if (n % (q * q) == 0) return false;
  return true;
}

}  // namespace detail

inline std::uint64_t euler_phi(std::uint64_t n) {
  std::uint64_t r = n, m = n;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q) continue;
    r = r / q * (q - 1);
    while (m % q == 0) m /= q;
  }
  if (m > 1) r = r / m * (m - 1);
  return r;
}

/// The cusp (N_d, C_ζ): d | N and the class c of ζ_N^{N/m} in (ℤ/m)^×,
/// m = gcd(d, N/d); c is the least positive representative.
struct GeometricCusp {
  std::uint64_t N = 1, d = 1, c = 1;

  std::uint64_t width() const { return std::gcd(d, N / d); }
  bool is_infinity() const { return d == 1; }
  bool is_zero() const { return d == N; }
  std::string to_string() const { return "(" + std::to_string(d) + "," + std::to_string(c) + ")"; }

  auto operator<=>(const GeometricCusp&) const = default;
};

inline GeometricCusp make_cusp(std::uint64_t N, std::uint64_t d, std::uint64_t c) {
  if (N == 0 || d == 0 || N % d != 0) throw InvalidInput("cusp: d must divide N");
  const std::uint64_t m = std::gcd(d, N / d);
  if (m <= 2) return {N, d, 1};
  c %= m;
  if (std::gcd(c, m) != 1) throw InvalidInput("cusp: c must be a unit mod gcd(d, N/d)");
  return {N, d, c};
}

/// Galois orbit of geometric cusps lying over the closed point z_d.
struct CuspOrbit {
  std::uint64_t d = 1, m = 1;
  std::vector<GeometricCusp> members;
};

inline std::vector<CuspOrbit> cusps(std::uint64_t N) {
  if (N == 0) throw InvalidInput("cusps: N must be positive");
  std::vector<CuspOrbit> out;
  for (auto d : detail::divisors(N)) {
    CuspOrbit o{d, std::gcd(d, N / d), {}};
    if (o.m <= 2) {
      o.members.push_back({N, d, 1});
    } else {
      for (std::uint64_t c = 1; c < o.m; ++c)
        if (std::gcd(c, o.m) == 1) o.members.push_back({N, d, c});
    }
    out.push_back(std::move(o));
  }
  return out;
}

inline std::vector<GeometricCusp> all_cusps(std::uint64_t N) {
  std::vector<GeometricCusp> out;
  for (const auto& o : cusps(N)) out.insert(out.end(), o.members.begin(), o.members.end());
  return out;
}

class CuspidalDivisor {
 public:
  CuspidalDivisor() = default;
  explicit CuspidalDivisor(std::uint64_t N) : N_(N) {}

  std::uint64_t N() const noexcept { return N_; }
  const std::map<GeometricCusp, Integer>& terms() const noexcept { return terms_; }

  CuspidalDivisor& add(const GeometricCusp& x, const Integer& coeff) {
    if (x.N != N_) throw InvalidInput("divisor: cusp of level " + std::to_string(x.N) + " in a divisor of level " + std::to_string(N_));
    auto y = make_cusp(x.N, x.d, x.c);
    auto& slot = terms_[y];
    slot += coeff;
    if (slot == 0) terms_.erase(y);
    return *this;
  }

  Integer coefficient(const GeometricCusp& x) const {
    auto it = terms_.find(x);
    return it == terms_.end() ? Integer(0) : it->second;
  }

  Integer degree() const {
    Integer s = 0;
    for (const auto& [x, c] : terms_) s += c;
    return s;
  }

  bool is_zero() const noexcept { return terms_.empty(); }

  friend CuspidalDivisor operator+(CuspidalDivisor a, const CuspidalDivisor& b) {
    if (a.N_ != b.N_) throw InvalidInput("divisor: level mismatch");
    for (const auto& [x, c] : b.terms_) a.add(x, c);
    return a;
  }
  friend CuspidalDivisor operator-(CuspidalDivisor a, const CuspidalDivisor& b) {
    if (a.N_ != b.N_) throw InvalidInput("divisor: level mismatch");
    for (const auto& [x, c] : b.terms_) a.add(x, -c);
    return a;
  }
  friend CuspidalDivisor operator*(const Integer& k, const CuspidalDivisor& a) {
    CuspidalDivisor out(a.N_);
    for (const auto& [x, c] : a.terms_) out.add(x, k * c);
    return out;
  }
  bool operator==(const CuspidalDivisor&) const = default;

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [x, c] : terms_) {
      if (!out.empty()) out += c < 0 ? " - " : " + ";
      else if (c < 0) out += "-";
      Integer a = abs(c);
      if (a != 1) out += a.str() + "*";
      out += x.to_string();
    }
    return out;
  }

 private:
  std::uint64_t N_ = 1;
  std::map<GeometricCusp, Integer> terms_;
};

inline CuspidalDivisor divisor_of(const GeometricCusp& x, const Integer& coeff = 1) {
  return CuspidalDivisor(x.N).add(x, coeff);
}

inline GeometricCusp cusp_infinity(std::uint64_t N) { return {N, 1, 1}; }
inline GeometricCusp cusp_zero(std::uint64_t N) { return {N, N, 1}; }

namespace detail {

// lift a class mod m to a unit mod n (m | n)
inline std::uint64_t unit_lift(std::uint64_t c, std::uint64_t m, std::uint64_t n) {
  if (n == 1) return 1;
  for (std::uint64_t x = (m == 0 ? c : c % m); x < n + m * n; x += (m ? m : n))
    if (x > 0 && std::gcd(x, n) == 1) return x;
  throw std::logic_error("unit_lift: no unit lift");
}

struct HeckeData {
  std::uint64_t N, ell, M, lk;
  unsigned k;
  std::uint64_t a, q;
};

inline HeckeData hecke_data(std::uint64_t N, std::uint64_t ell) {
  if (N == 0) throw InvalidInput("level must be positive");
  if (!is_prime(ell)) throw InvalidInput("hecke: ell must be prime, got " + std::to_string(ell));
  HeckeData h{N, ell, N, 1, 0, 1, 1};
  h.k = valuation(N, ell);
  h.lk = ipow(ell, h.k);
  h.M = N / h.lk;
  // a ≡ 1 mod ℓ^k, a ≡ ℓ⁻¹ mod M, so that aℓ + bM = 1 for an integer b
  const std::uint64_t linv = inverse_mod(ell % h.M, h.M);
  std::uint64_t a = linv;
  while (a % h.lk != 1 % h.lk) a += h.M;
  h.a = a % N == 0 ? 1 : a % N;
  h.q = N == 1 ? 1 : inverse_mod(h.a, N);
  return h;
}

}  // namespace detail

/// ᵗT_ℓ of a single geometric cusp, by the level-N formulas.
inline CuspidalDivisor hecke_transpose_cusp(std::uint64_t ell, const GeometricCusp& x) {
  const std::uint64_t N = x.N;
  const auto h = detail::hecke_data(N, ell);
  const std::uint64_t m = x.width();
  const std::uint64_t c = detail::unit_lift(x.c, m, N);
  CuspidalDivisor out(N);
  auto at = [&](std::uint64_t d, std::uint64_t cc) { return make_cusp(N, d, cc % N); };
  if (h.k == 0) {
    out.add(at(x.d, ell % N * c), 1);
    out.add(at(x.d, h.a * c), ell);
    return out;
  }
  const unsigned i = detail::valuation(x.d, ell);
  const std::uint64_t d0 = x.d / detail::ipow(ell, i);
  const std::uint64_t e0 = std::gcd(d0, h.M / d0);
  if (i == 0) {
    out.add(at(x.d, h.a * c), ell);
  } else if (2 * i < h.k + 1) {
    out.add(at(x.d / ell, c), ell);
  } else {
    // Γ_i = Gal(ℚ(μ_{e0 ℓ^{k+1-i}}) / ℚ(μ_{e0 ℓ^{k-i}})) acting through t
    const std::uint64_t big = e0 * detail::ipow(ell, h.k + 1 - i), small = e0 * detail::ipow(ell, h.k - i);
    for (std::uint64_t t = 1; t < big; ++t) {
      if (t % small != 1 % small || std::gcd(t, big) != 1) continue;
      const std::uint64_t cc = detail::unit_lift(t * c % big, big, N);
      out.add(at(x.d / ell, cc), 1);
    }
    if (i == h.k) out.add(at(x.d, h.q * c), 1);
  }
  return out;
}

inline CuspidalDivisor hecke_transpose_cusps(std::uint64_t N, std::uint64_t ell, const CuspidalDivisor& D) {
  if (D.N() != N) throw InvalidInput("hecke_transpose_cusps: divisor level does not match N");
  CuspidalDivisor out(N);
  for (const auto& [x, coeff] : D.terms()) out = out + coeff * hecke_transpose_cusp(ell, x);
  return out;
}

/// Matrix of ᵗT_ℓ on ℤ[cusps] in the order of all_cusps(N); column j is the
/// image of the j-th cusp.
inline IntMatrix hecke_transpose_matrix(std::uint64_t N, std::uint64_t ell) {
  const auto xs = all_cusps(N);
  IntMatrix m(xs.size(), xs.size());
  for (std::size_t j = 0; j < xs.size(); ++j) {
    auto img = hecke_transpose_cusp(ell, xs[j]);
    for (std::size_t i = 0; i < xs.size(); ++i) m(i, j) = img.coefficient(xs[i]);
  }
  return m;
}

/// Degeneracy maps X_0(Nℓ) → X_0(N) on cusps, with ramification indices.
struct CuspImage {
  GeometricCusp cusp;
  std::uint64_t ramification = 1;
};

inline CuspImage degeneracy_u(std::uint64_t N, std::uint64_t ell, const GeometricCusp& y) {
  if (y.N != N * ell) throw InvalidInput("degeneracy_u: cusp must have level N*ell");
  const auto h = detail::hecke_data(N, ell);
  const std::uint64_t c = detail::unit_lift(y.c, y.width(), y.N);
  const unsigned v = detail::valuation(y.d, ell);
  CuspImage out;
  out.cusp = y.d % ell != 0 ? make_cusp(N, y.d, h.a * c % N) : make_cusp(N, y.d / ell, c % N);
  out.ramification = 2 * v <= h.k + 1 ? 1 : ell;
  return out;
}

inline CuspImage degeneracy_v(std::uint64_t N, std::uint64_t ell, const GeometricCusp& y) {
  if (y.N != N * ell) throw InvalidInput("degeneracy_v: cusp must have level N*ell");
  const auto h = detail::hecke_data(N, ell);
  const std::uint64_t c = detail::unit_lift(y.c, y.width(), y.N);
  const unsigned v = detail::valuation(y.d, ell);
  CuspImage out;
  out.cusp = N % y.d == 0 ? make_cusp(N, y.d, c % N) : make_cusp(N, y.d / ell, h.a * c % N);
  out.ramification = 2 * v >= h.k + 1 ? 1 : ell;
  return out;
}

namespace detail {

inline std::uint64_t require_p_or_p2(std::uint64_t N) {
  for (std::uint64_t p = 5; p <= N; ++p) {
    if (!is_prime(p)) continue;
    if (N == p || N == p * p) return p;
  }
  throw InvalidInput("atkin_lehner_cusps: N must be p or p^2 with p > 3 prime, got " + std::to_string(N));
}

}  // namespace detail

/// W_p on divisors supported on the rational cusps ∞ and 0 of X_0(p) or X_0(p²).
inline CuspidalDivisor atkin_lehner_cusps(std::uint64_t N, const CuspidalDivisor& D) {
  detail::require_p_or_p2(N);
  if (D.N() != N) throw InvalidInput("atkin_lehner_cusps: divisor level does not match N");
  CuspidalDivisor out(N);
  for (const auto& [x, c] : D.terms()) {
    if (x.d == 1) out.add(cusp_zero(N), c);
    else if (x.d == N) out.add(cusp_infinity(N), c);
    else throw InvalidInput("atkin_lehner_cusps: support at the cusps over z_p is not supported");
  }
  return out;
}

// ---------------------------------------------------------------------------
// X_0(pM), p exactly dividing the level

struct X0pMFibre {
  std::uint64_t p = 0, M = 1;
  SupersingularCounts counts;
  SpecialFibre fibre;
  ModulusIncidence modulus;  // (∞) + (0)
  GraphWithModulus graph;
};

namespace detail {

inline void require_p_M(std::uint64_t p, std::uint64_t M, const char* who) {
  if (p <= 3 || !is_prime(p)) throw InvalidInput(std::string(who) + ": p must be a prime > 3");
  if (M == 0 || std::gcd(p, M) != 1) throw InvalidInput(std::string(who) + ": M must be positive and prime to p");
}

inline void require_counts(std::uint64_t p, std::uint64_t M, const SupersingularCounts& c, const char* who) {
  const Rational lhs = Rational(c.n) - Rational(c.e2, 2) - Rational(2 * c.e3, 3);
  if (lhs != Rational(psi(M)) * Rational(p - 1, 12))
    throw InvalidInput(std::string(who) + ": counts (n, e2, e3) violate the mass formula");
  if (c.n < c.e2 + c.e3) throw InvalidInput(std::string(who) + ": n < e2 + e3");
}

}  // namespace detail

inline X0pMFibre x0pM_fibre(std::uint64_t p, std::uint64_t M, const SupersingularCounts& cnt) {
  detail::require_p_M(p, M, "x0pM_fibre");
  detail::require_counts(p, M, cnt, "x0pM_fibre");
  X0pMFibre out{p, M, cnt, {}, {}, {}};
  const std::size_t e2 = cnt.e2, e3 = cnt.e3;
  auto& f = out.fibre;
  f.p = p;
  f.components = {{"Z_inf"}, {"Z_0"}};
  for (std::size_t i = 1; i <= e2; ++i) f.components.push_back({"E_" + std::to_string(i)});
  for (std::size_t i = 1; i <= e3; ++i) {
    f.components.push_back({"F_inf_" + std::to_string(i)});
    f.components.push_back({"F_0_" + std::to_string(i)});
  }
  const std::size_t c = f.size();
  f.intersection = IntMatrix(c, c);
  auto& I = f.intersection;
  const Integer n = cnt.n;
  I(0, 0) = -n;
  I(1, 1) = -n;
  I(0, 1) = I(1, 0) = n - Integer(e2) - Integer(e3);
  for (std::size_t i = 0; i < e2; ++i) {
    const std::size_t E = 2 + i;
    I(E, E) = -2;
    I(0, E) = I(E, 0) = I(1, E) = I(E, 1) = 1;
  }
  for (std::size_t i = 0; i < e3; ++i) {
    const std::size_t Fi = 2 + e2 + 2 * i, F0 = Fi + 1;
    I(Fi, Fi) = I(F0, F0) = -2;
    I(Fi, F0) = I(F0, Fi) = 1;
    I(0, Fi) = I(Fi, 0) = 1;
    I(1, F0) = I(F0, 1) = 1;
  }

  out.modulus.points = {"inf", "0"};
  out.modulus.e = {1, 1};
  out.modulus.h = IntMatrix(2, c);
  out.modulus.h(0, 0) = 1;
  out.modulus.h(1, 1) = 1;
  require_valid(f, &out.modulus);

  // extended graph: one singular point per crossing of the resolved fibre
  std::vector<std::string> A;
  std::vector<Branch> B;
  auto crossing = [&](const std::string& pt, const std::string& y1, const std::string& y2) {
    A.push_back(pt);
    B.push_back({pt + ":" + y1, pt, y1});
    B.push_back({pt + ":" + y2, pt, y2});
  };
  const std::uint64_t generic = cnt.n - cnt.e2 - cnt.e3;
  for (std::uint64_t i = 1; i <= generic; ++i) crossing("X_" + std::to_string(i), "Z_inf", "Z_0");
  for (std::size_t i = 1; i <= e2; ++i) {
    const std::string E = "E_" + std::to_string(i);
    crossing(E + "/inf", "Z_inf", E);
    crossing(E + "/0", E, "Z_0");
  }
  for (std::size_t i = 1; i <= e3; ++i) {
    const std::string s = std::to_string(i), Fi = "F_inf_" + s, F0 = "F_0_" + s;
    crossing("F_" + s + "/inf", "Z_inf", Fi);
    crossing("F_" + s + "/mid", Fi, F0);
    crossing("F_" + s + "/0", F0, "Z_0");
  }
  std::vector<std::string> C;
  for (const auto& comp : f.components) C.push_back(comp.label);
  out.graph = GraphWithModulus(ExtendedGraph(A, C, B), {}, {{"inf", "Z_inf"}, {"0", "Z_0"}});
  return out;
}

inline X0pMFibre x0pM_fibre(std::uint64_t p, std::uint64_t M) { return x0pM_fibre(p, M, counts(p, M)); }

/// Modulus on X_0(pM) supported on the given cusps; a cusp z_d lies on Z_∞
/// when p ∤ d and on Z_0 otherwise. All cusps are rational over the strict
/// henselisation since p² ∤ N.
inline ModulusIncidence cuspidal_modulus(const X0pMFibre& x, const std::vector<GeometricCusp>& support) {
  const std::uint64_t N = x.p * x.M;
  if (support.empty()) throw InvalidInput("cuspidal_modulus: empty support");
  ModulusIncidence m;
  m.h = IntMatrix(support.size(), x.fibre.size());
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto& z = support[i];
    if (z.N != N) throw InvalidInput("cuspidal_modulus: cusp " + z.to_string() + " is not of level " + std::to_string(N));
    make_cusp(z.N, z.d, z.c);
    m.points.push_back(z.to_string());
    m.e.push_back(1);
    m.h(i, z.d % x.p == 0 ? 1 : 0) = 1;
  }
  return m;
}

struct ClosedFormX0pM {
  FGAbGroup group;
  Integer free_image;       // free coordinate of the torus generator
  std::size_t two_ones = 0;   // number of order-2 coordinates equal to 1
  std::size_t three_ones = 0;  // number of order-3 coordinates equal to 1
};

inline FGAbGroup with_free_rank(const IntVector& cyclic_orders, std::size_t free_rank) {
  auto g = FGAbGroup::from_cyclic_orders(cyclic_orders);
  return FGAbGroup(g.invariant_factors(), g.free_rank() + free_rank);
}

inline ClosedFormX0pM closed_form_X0pM(const SupersingularCounts& c) {
  const std::size_t t2 = c.e2 > 1 ? c.e2 - 1 : 0, t3 = c.e3 > 1 ? c.e3 - 1 : 0;
  IntVector orders(t2, 2);
  orders.insert(orders.end(), t3, 3);
  ClosedFormX0pM out;
  out.group = with_free_rank(orders, 1);
  const Integer n = c.n, e2 = c.e2, e3 = c.e3;
  if (c.e2 == 0 && c.e3 == 0) out.free_image = n;
  else if (c.e3 == 0) out.free_image = 2 * n - e2;
  else if (c.e2 == 0) out.free_image = 3 * n - 2 * e3;
  else out.free_image = 6 * n - 3 * e2 - 4 * e3;
  out.two_ones = t2;
  out.three_ones = t3;
  return out;
}

inline ClosedFormX0pM closed_form_X0pM(std::uint64_t p, std::uint64_t M) {
  detail::require_p_M(p, M, "closed_form_X0pM");
  return closed_form_X0pM(counts(p, M));
}

inline Rational mazur_rapoport_P(const SupersingularCounts& c) {
  const Rational base = Rational(c.n) - Rational(c.e2, 2) - Rational(2 * c.e3, 3);
  return base * Rational(detail::ipow(2, std::min<std::uint64_t>(c.e2, 2)) * detail::ipow(3, std::min<std::uint64_t>(c.e3, 2)));
}

inline FGAbGroup closed_form_phiJ(const SupersingularCounts& c) {
  const Rational P = mazur_rapoport_P(c);
  if (denominator(P) != 1 || P <= 0) throw InvalidInput("closed_form_phiJ: P is not a positive integer");
  IntVector orders{numerator(P)};
  if (orders[0] == 1) orders.clear();
  orders.insert(orders.end(), c.e2 > 2 ? c.e2 - 2 : 0, 2);
  orders.insert(orders.end(), c.e3 > 2 ? c.e3 - 2 : 0, 3);
  return FGAbGroup::from_cyclic_orders(orders);
}

inline FGAbGroup closed_form_phiJ(std::uint64_t p, std::uint64_t M) {
  detail::require_p_M(p, M, "closed_form_phiJ");
  return closed_form_phiJ(counts(p, M));
}

enum class SplittingCase { OneComponent, TwoComponents };

struct CuspidalSplitting {
  SplittingCase which;
  FGAbGroup predicted;  // Φ(J) ⊕ ℤ^{|I|-1}, or Φ(J_𝔪') ⊕ ℤ^{|I|-2}
  FGAbGroup direct;     // component_group_Jm for the full support
};

inline CuspidalSplitting cuspidal_splitting(const X0pMFibre& x, const std::vector<GeometricCusp>& support) {
  const auto m = cuspidal_modulus(x, support);
  std::vector<std::size_t> on_inf, on_zero;
  for (std::size_t i = 0; i < support.size(); ++i) (m.h(i, 0) == 1 ? on_inf : on_zero).push_back(i);
  CuspidalSplitting out;
  out.direct = component_group_Jm(x.fibre, m).group.group;
  auto orders_of = [](const FGAbGroup& g) { return g.invariant_factors(); };
  if (on_inf.empty() || on_zero.empty()) {
    out.which = SplittingCase::OneComponent;
    out.predicted = with_free_rank(orders_of(component_group_J(x.fibre).group), support.size() - 1);
  } else {
    out.which = SplittingCase::TwoComponents;
    const auto mp = cuspidal_modulus(x, {support[on_inf.front()], support[on_zero.front()]});
    const auto g = component_group_Jm(x.fibre, mp).group.group;
    out.predicted = with_free_rank(orders_of(g), g.free_rank() + support.size() - 2);
  }
  if (!(out.predicted == out.direct))
    throw std::logic_error("cuspidal_splitting: predicted " + out.predicted.to_string() + " but computed " +
                           out.direct.to_string());
  return out;
}

// ---------------------------------------------------------------------------
// X_0(p²)

struct X0p2Fibre {
  std::uint64_t p = 0;
  Integer k, a, b, Mt;  // p = 12k + 1 + 4a + 6b, Mt = (p²−1)/12 − k
  SpecialFibre fibre;   // Z0, Z1, Z2, E, F
  ModulusIncidence full;     // z_1, z_p, z_{p²}
  ModulusIncidence reduced;  // z_1, z_{p²}
};

inline X0p2Fibre x0p2_fibre(std::uint64_t p) {
  if (p <= 3 || !is_prime(p)) throw InvalidInput("x0p2_fibre: p must be a prime > 3");
  X0p2Fibre x;
  x.p = p;
  const std::uint64_t r = p % 12;  // 1 + 4a + 6b
  x.a = (r == 5 || r == 11) ? 1 : 0;
  x.b = (r == 7 || r == 11) ? 1 : 0;
  x.k = Integer((p - 1) / 12);
  x.Mt = Integer((p * p - 1) / 12) - x.k;
  const Integer P = p, &k = x.k, &a = x.a, &b = x.b, &Mt = x.Mt;
  auto& f = x.fibre;
  f.p = P;
  f.components = {{"Z0", 1}, {"Z1", P - 1}, {"Z2", 1}, {"E", (P - 1 + 2 * b) / 2}, {"F", (P - 1 + 2 * a) / 3}};
  f.intersection = IntMatrix{{-Mt, k, k, b, a}, {k, -1, k, 1, 1}, {k, k, -Mt, b, a}, {b, 1, b, -2, 0}, {a, 1, a, 0, -3}};
  x.full.points = {"z1", "zp", "zp2"};
  x.full.e = {1, P - 1, 1};
  x.full.h = IntMatrix{{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}, {0, 0, 1, 0, 0}};
  x.reduced.points = {"z1", "zp2"};
  x.reduced.e = {1, 1};
  x.reduced.h = IntMatrix{{1, 0, 0, 0, 0}, {0, 0, 1, 0, 0}};
  require_valid(f, &x.full);
  require_valid(f, &x.reduced);
  return x;
}

struct X0p2ClosedForm {
  Integer k, a, b, Mt;
  IntVector V0, V1;       // images in ℤ² for the full cuspidal modulus
  Integer reduced_image;  // image of V0 for (∞)+(0)
  Integer phiJ_order;
};

inline X0p2ClosedForm x0p2_closed_form(std::uint64_t p) {
  const auto x = x0p2_fibre(p);
  X0p2ClosedForm c{x.k, x.a, x.b, x.Mt, {}, {}, 0, 0};
  const Integer &k = x.k, &a = x.a, &b = x.b;
  c.V0 = {x.Mt + (3 * b - 2 * a) * k - a + b, -6 * k - 2 * a - 3 * b};
  c.V1 = {-k - b, 1};
  c.reduced_image = Integer((p * p - 1) / 24);
  c.phiJ_order = c.reduced_image;
  return c;
}

// ---------------------------------------------------------------------------
// Hecke operators on Φ(J_𝔪), 𝔪 = (∞) + (0) on X_0(pM)

namespace detail {

// Φ(T_ℓ) = Φ(v_*)∘Φ(u^*) on Φ(T_𝔪) = ℤ^I/eℤ, I = {∞, 0}, for ℓ ∤ N
inline PresentedGroupMap hecke_on_torus_phi(std::uint64_t N, std::uint64_t ell) {
  const std::vector<GeometricCusp> I{cusp_infinity(N), cusp_zero(N)};
  auto index_in_I = [&](const GeometricCusp& z) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < I.size(); ++i)
      if (I[i] == z) return i;
    return std::nullopt;
  };
  std::vector<std::size_t> fu, fv;
  IntVector ru, rv, e_prime;
  for (const auto& y : all_cusps(N * ell)) {
    auto u = degeneracy_u(N, ell, y);
    auto iu = index_in_I(u.cusp);
    if (!iu) continue;
    auto v = degeneracy_v(N, ell, y);
    auto iv = index_in_I(v.cusp);
    if (!iv) throw std::logic_error("hecke_on_phi: the modulus is not stable under T_l");
    if (y.width() != 1) throw std::logic_error("hecke_on_phi: expected rational cusps over the modulus");
    fu.push_back(*iu);
    fv.push_back(*iv);
    ru.push_back(u.ramification);
    rv.push_back(v.ramification);
    e_prime.push_back(1);
  }
  const IntVector e{1, 1};
  auto up = tori_phi_maps(fu, e, e_prime, ru).pullback;
  auto down = tori_phi_maps(fv, e, e_prime, rv).pushforward;
  return up.then(down);
}

}  // namespace detail

/// Scalar by which T_ℓ acts on Φ(J_𝔪), 𝔪 = (∞)+(0) on X_0(pM). Computed on
/// Φ(T_𝔪) and carried to the free quotient of Φ(J_𝔪) through the finite-index
/// inclusion Φ(T_𝔪) → Φ(J_𝔪)/tors. ℓ = p is allowed for M = 1.
inline Integer hecke_on_phi(std::uint64_t p, std::uint64_t M, std::uint64_t ell) {
  detail::require_p_M(p, M, "hecke_on_phi");
  if (!detail::squarefree(M)) throw InvalidInput("hecke_on_phi: M must be squarefree");
  if (!is_prime(ell)) throw InvalidInput("hecke_on_phi: ell must be prime");
  const std::uint64_t N = p * M;
  const auto x = x0pM_fibre(p, M);
  const auto J = component_group_Jm(x.fibre, x.modulus);
  const auto torus = tori_component_group_decomposition(x.modulus.e);
  if (torus.group.free_rank() != J.group.group.free_rank() || !torus.group.is_free())
    throw std::logic_error("hecke_on_phi: torus and Φ(J_m) have different free rank");

  IntMatrix S;
  if (N % ell != 0) {
    S = detail::hecke_on_torus_phi(N, ell).induced();
  } else if (ell == p && M == 1) {
    // dual of ᵗT_p on the character group ℤ·((0) − (∞))
    const auto D = divisor_of(cusp_zero(N)) - divisor_of(cusp_infinity(N));
    const auto img = hecke_transpose_cusps(N, p, D);
    const Integer lambda = img.coefficient(cusp_zero(N));
    if (!(img == lambda * D)) throw std::logic_error("hecke_on_phi: (0)-(inf) is not an eigenvector of tT_p");
    S = IntMatrix{{lambda}};
  } else {
    throw InvalidInput("hecke_on_phi: need ell not dividing pM, or ell = p with M = 1");
  }

  // Φ(T_𝔪) → Φ(J_𝔪)/tors
  const IntMatrix incl = J.free_torus_images() * torus.section;
  const IntMatrix ext = extend_through_finite_index(incl, S);
  const Integer lambda = ext(0, 0);
  if (ext != lambda * IntMatrix::identity(ext.rows())) throw std::logic_error("hecke_on_phi: T_l is not scalar");
  return lambda;
}

}  // namespace neron
