#pragma once

// Supersingular j-invariants over F_{p^2}, counts of supersingular points on
// X_0(M), Brandt matrices from modular polynomials, and the Hecke action on
// the character group of J_0(p) with modulus (inf)+(0).

#include <compare>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "neron/abelian.hpp"
#include "neron/graphs.hpp"
#include "neron/modular_polynomials_data.hpp"

namespace neron {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

/// u + v·ω with ω² = s.
struct Fp2Element {
  std::uint64_t u = 0, v = 0;
  auto operator<=>(const Fp2Element&) const = default;
};

/// F_p[ω]/(ω² − s), s the least quadratic non-residue mod p. Needs p < 2^31
/// so that every product fits in 64 bits.
class Fp2 {
 public:
  explicit Fp2(std::uint64_t p) : p_(p) {
    if (p < 3 || p >= (std::uint64_t(1) << 31) || !is_prime(p))
      throw InvalidInput("Fp2: p must be an odd prime below 2^31, got " + std::to_string(p));
    s_ = 2;
    while (powmod(s_, (p - 1) / 2, p) != p - 1) ++s_;
  }

  std::uint64_t p() const noexcept { return p_; }
  std::uint64_t s() const noexcept { return s_; }

  Fp2Element zero() const { return {}; }
  Fp2Element one() const { return {1, 0}; }
  Fp2Element omega() const { return {0, 1}; }
  Fp2Element element(std::uint64_t u, std::uint64_t v = 0) const { return {u % p_, v % p_}; }
  Fp2Element from_int(std::int64_t x) const {
    std::int64_t r = x % static_cast<std::int64_t>(p_);
    if (r < 0) r += static_cast<std::int64_t>(p_);
    return {static_cast<std::uint64_t>(r), 0};
  }
  Fp2Element from_int(const Integer& x) const { return {static_cast<std::uint64_t>(mod(x, Integer(p_))), 0}; }

  Fp2Element add(Fp2Element a, Fp2Element b) const { return {(a.u + b.u) % p_, (a.v + b.v) % p_}; }
  Fp2Element neg(Fp2Element a) const { return {(p_ - a.u) % p_, (p_ - a.v) % p_}; }
  Fp2Element sub(Fp2Element a, Fp2Element b) const { return add(a, neg(b)); }
  Fp2Element mul(Fp2Element a, Fp2Element b) const {
    std::uint64_t bd = a.v * b.v % p_;
    return {(a.u * b.u % p_ + bd * s_ % p_) % p_, (a.u * b.v % p_ + a.v * b.u % p_) % p_};
  }
  Fp2Element sqr(Fp2Element a) const { return mul(a, a); }
  Fp2Element scale(std::uint64_t k, Fp2Element a) const { return mul(element(k % p_), a); }

  std::uint64_t norm(Fp2Element a) const { return (a.u * a.u % p_ + p_ - a.v * a.v % p_ * s_ % p_) % p_; }
  Fp2Element conj(Fp2Element a) const { return {a.u, (p_ - a.v) % p_}; }
  Fp2Element frobenius(Fp2Element a) const { return conj(a); }

  Fp2Element inv(Fp2Element a) const {
    std::uint64_t n = norm(a);
    if (n == 0) throw std::domain_error("Fp2: inverse of zero");
    return mul(conj(a), element(powmod(n, p_ - 2, p_)));
  }
  Fp2Element div(Fp2Element a, Fp2Element b) const { return mul(a, inv(b)); }

  Fp2Element pow(Fp2Element a, std::uint64_t e) const {
    Fp2Element r = one();
    while (e) {
      if (e & 1) r = mul(r, a);
      a = sqr(a);
      e >>= 1;
    }
    return r;
  }

  /// Quadratic character of F_{p^2}: z^((p²−1)/2) = N(z)^((p−1)/2).
  int chi(Fp2Element a) const {
    std::uint64_t n = norm(a);
    if (n == 0) return 0;
    return powmod(n, (p_ - 1) / 2, p_) == 1 ? 1 : -1;
  }

  bool in_prime_field(Fp2Element a) const { return a.v == 0; }

  std::string to_string(Fp2Element a) const {
    if (a.v == 0) return std::to_string(a.u);
    std::string out = a.u ? std::to_string(a.u) + "+" : std::string();
    return out + (a.v == 1 ? std::string() : std::to_string(a.v) + "*") + "w";
  }

  /// All p² elements in (u, v) order.
  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t u = 0; u < p_; ++u)
      for (std::uint64_t v = 0; v < p_; ++v) f(Fp2Element{u, v});
  }

 private:
  std::uint64_t p_, s_ = 2;
};

// polynomials over F_{p^2}, coefficients low to high
using Fp2Poly = std::vector<Fp2Element>;

inline Fp2Element poly_eval(const Fp2& F, const Fp2Poly& f, Fp2Element x) {
  Fp2Element r = F.zero();
  for (auto it = f.rbegin(); it != f.rend(); ++it) r = F.add(F.mul(r, x), *it);
  return r;
}

/// f / (Y − r), assuming f(r) = 0.
inline Fp2Poly poly_deflate(const Fp2& F, const Fp2Poly& f, Fp2Element r) {
  if (f.size() < 2) return {};
  Fp2Poly q(f.size() - 1);
  Fp2Element carry = F.zero();
  for (std::size_t k = f.size() - 1; k >= 1; --k) {
    carry = F.add(f[k], F.mul(carry, r));
    q[k - 1] = carry;
  }
  return q;
}

inline std::vector<Fp2Element> poly_roots_by_scan(const Fp2& F, const Fp2Poly& f) {
  std::vector<Fp2Element> out;
  F.for_each([&](Fp2Element x) {
    if (poly_eval(F, f, x) == F.zero()) out.push_back(x);
  });
  return out;
}

inline Fp2Element j_1728(const Fp2& F) { return F.from_int(std::int64_t(1728)); }

struct SupersingularData {
  std::uint64_t p = 0;
  std::vector<Fp2Element> js;     // sorted by (u, v)
  std::vector<unsigned> weights;  // |Aut|/2

  std::size_t size() const noexcept { return js.size(); }

  std::size_t index(Fp2Element j) const {
    auto it = std::lower_bound(js.begin(), js.end(), j);
    if (it == js.end() || *it != j) throw InvalidInput("not a supersingular j-invariant");
    return static_cast<std::size_t>(it - js.begin());
  }
  bool contains(Fp2Element j) const { return std::binary_search(js.begin(), js.end(), j); }

  Rational mass() const {
    Rational m = 0;
    for (unsigned w : weights) m += Rational(1, 2 * w);
    return m;
  }
};

namespace detail {

inline SupersingularData enumerate_supersingular(std::uint64_t p) {
  const Fp2 F(p);
  const std::uint64_t m = (p - 1) / 2;
  // Hasse polynomial Σ C(m,i)² tⁱ
  Fp2Poly hasse(m + 1);
  std::uint64_t c = 1;
  for (std::uint64_t i = 0; i <= m; ++i) {
    hasse[i] = F.element(c * c % p);
    if (i < m) c = c * ((m - i) % p) % p * powmod(i + 1, p - 2, p) % p;
  }
  const auto lambdas = poly_roots_by_scan(F, hasse);
  std::vector<Fp2Element> js;
  for (auto l : lambdas) {
    auto l1 = F.sub(l, F.one());
    auto num = F.add(F.sub(F.sqr(l), l), F.one());
    num = F.mul(F.element(256), F.mul(num, F.sqr(num)));
    js.push_back(F.div(num, F.mul(F.sqr(l), F.sqr(l1))));
  }
  std::sort(js.begin(), js.end());
  js.erase(std::unique(js.begin(), js.end()), js.end());

  SupersingularData d;
  d.p = p;
  d.js = js;
  for (auto j : js) d.weights.push_back(j == F.zero() ? 3u : j == j_1728(F) ? 2u : 1u);

  if (d.mass() != Rational(p - 1, 24))
    throw std::logic_error("supersingular_js: mass formula fails for p = " + std::to_string(p));
  for (auto j : js)
    if (!d.contains(F.frobenius(j))) throw std::logic_error("supersingular_js: set not Frobenius-stable");
  const Rational expected = Rational(p - 1, 12) + Rational(p % 4 == 3 ? 1 : 0, 2) + Rational(p % 3 == 2 ? 2 : 0, 3);
  if (Rational(js.size()) != expected)
    throw std::logic_error("supersingular_js: class number mismatch for p = " + std::to_string(p));
  return d;
}

inline void require_p_above_3(std::uint64_t p, const char* who) {
  if (p <= 3 || !is_prime(p)) throw InvalidInput(std::string(who) + ": p must be a prime > 3, got " + std::to_string(p));
}

}  // namespace detail

inline const SupersingularData& supersingular_js(std::uint64_t p) {
  detail::require_p_above_3(p, "supersingular_js");
  static std::mutex mu;
  static std::map<std::uint64_t, SupersingularData> cache;
  {
    std::lock_guard lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
  }
  auto d = detail::enumerate_supersingular(p);
  std::lock_guard lock(mu);
  return cache.emplace(p, std::move(d)).first->second;
}

struct SupersingularCounts {
  std::uint64_t n = 0, e2 = 0, e3 = 0;
  bool operator==(const SupersingularCounts&) const = default;
};

inline std::uint64_t psi(std::uint64_t M) {
  if (M == 0) throw InvalidInput("psi: M must be positive");
  std::uint64_t r = M, m = M;
  for (std::uint64_t q = 2; q * q <= m; ++q) {
    if (m % q) continue;
    r = r / q * (q + 1);
    while (m % q == 0) m /= q;
  }
  if (m > 1) r = r / m * (m + 1);
  return r;
}

namespace detail {

using Vec2 = std::pair<std::uint64_t, std::uint64_t>;

// cyclic subgroups of order M in (ℤ/M)², each by its least generator
inline Vec2 canonical_generator(Vec2 g, std::uint64_t M) {
  Vec2 best = g;
  for (std::uint64_t k = 1; k < M; ++k) {
    if (std::gcd(k, M) != 1) continue;
    Vec2 h{g.first * k % M, g.second * k % M};
    if (h < best) best = h;
  }
  return best;
}

inline std::vector<Vec2> cyclic_subgroups(std::uint64_t M) {
  std::vector<Vec2> out;
  if (M == 1) return {{0, 0}};
  for (std::uint64_t x = 0; x < M; ++x)
    for (std::uint64_t y = 0; y < M; ++y)
      if (std::gcd(std::gcd(x, y), M) == 1) out.push_back(canonical_generator({x, y}, M));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// (#orbits, #fixed) of ⟨g⟩ acting on the subgroups, g = [[a,b],[c,d]] over ℤ
inline std::pair<std::uint64_t, std::uint64_t> orbit_counts(const std::vector<Vec2>& subs, std::uint64_t M,
                                                            std::int64_t a, std::int64_t b, std::int64_t c,
                                                            std::int64_t d) {
  if (M == 1) return {1, 1};
  auto r = [M](std::int64_t x) { return static_cast<std::uint64_t>(((x % std::int64_t(M)) + std::int64_t(M)) % std::int64_t(M)); };
  auto act = [&](Vec2 v) {
    std::int64_t x = static_cast<std::int64_t>(v.first), y = static_cast<std::int64_t>(v.second);
    return canonical_generator({r(a * x + b * y), r(c * x + d * y)}, M);
  };
  std::map<Vec2, bool> seen;
  std::uint64_t orbits = 0, fixed = 0;
  for (const auto& s : subs) {
    if (act(s) == s) ++fixed;
    if (seen[s]) continue;
    ++orbits;
    for (Vec2 t = s; !seen[t]; t = act(t)) seen[t] = true;
  }
  return {orbits, fixed};
}

}  // namespace detail

/// (n, e₂, e₃) for the supersingular points of X₀(M) in characteristic p.
inline SupersingularCounts counts(std::uint64_t p, std::uint64_t M) {
  detail::require_p_above_3(p, "counts");
  if (M == 0) throw InvalidInput("counts: M must be positive");
  if (std::gcd(p, M) != 1) throw InvalidInput("counts: gcd(p, M) must be 1");
  const auto& ss = supersingular_js(p);
  const Fp2 F(p);
  const auto subs = detail::cyclic_subgroups(M);
  if (subs.size() != psi(M)) throw std::logic_error("counts: subgroup enumeration mismatch");
  SupersingularCounts out;
  for (auto j : ss.js) {
    if (j == F.zero()) {
      auto [orb, fix] = detail::orbit_counts(subs, M, 0, -1, 1, 1);
      out.n += orb;
      out.e3 = fix;
    } else if (j == j_1728(F)) {
      auto [orb, fix] = detail::orbit_counts(subs, M, 0, -1, 1, 0);
      out.n += orb;
      out.e2 = fix;
    } else {
      out.n += subs.size();
    }
  }
  const Rational lhs = Rational(out.n) - Rational(out.e2, 2) - Rational(2 * out.e3, 3);
  if (lhs != Rational(psi(M)) * Rational(p - 1, 12)) throw std::logic_error("counts: mass formula fails");
  return out;
}

/// Classical modular polynomial Φ_ℓ(X, Y) with integer coefficients.
struct ModularPolynomial {
  unsigned ell = 0;
  std::map<std::pair<unsigned, unsigned>, Integer> coeffs;  // (i, k) ↦ coefficient of XⁱY^k

  Integer coefficient(unsigned i, unsigned k) const {
    auto it = coeffs.find({i, k});
    return it == coeffs.end() ? Integer(0) : it->second;
  }

  /// Φ_ℓ(x, Y) over F_{p^2}, as a polynomial in Y.
  Fp2Poly specialize(const Fp2& F, Fp2Element x) const {
    Fp2Poly out(ell + 2, F.zero());
    std::vector<Fp2Element> xp(ell + 2, F.one());
    for (unsigned i = 1; i < xp.size(); ++i) xp[i] = F.mul(xp[i - 1], x);
    for (const auto& [ik, c] : coeffs) out[ik.second] = F.add(out[ik.second], F.mul(F.from_int(c), xp[ik.first]));
    return out;
  }
};

namespace detail {

inline std::map<unsigned, ModularPolynomial> parse_modular_polynomials(const std::string& text) {
  std::map<unsigned, ModularPolynomial> out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    unsigned ell, i, k;
    std::string cs;
    if (!(ls >> ell >> i >> k >> cs)) throw std::logic_error("modular polynomial data: bad line " + std::to_string(lineno));
    Integer c(cs);
    auto& P = out[ell];
    P.ell = ell;
    for (auto key : {std::make_pair(i, k), std::make_pair(k, i)}) {
      auto [it, fresh] = P.coeffs.emplace(key, c);
      if (!fresh && it->second != c)
        throw std::logic_error("modular polynomial data: conflicting coefficient at line " + std::to_string(lineno));
    }
  }
  for (auto& [ell, P] : out) {
    for (const auto& [ik, c] : P.coeffs) {
      if (P.coefficient(ik.second, ik.first) != c) throw std::logic_error("modular polynomial data: not symmetric");
      if (ik.first > ell + 1 || ik.second > ell + 1) throw std::logic_error("modular polynomial data: degree too large");
    }
    if (P.coefficient(ell + 1, 0) != 1) throw std::logic_error("modular polynomial data: X^(l+1) coefficient must be 1");
    // Kronecker: Φ_ℓ ≡ X^{ℓ+1} − X^ℓY^ℓ − XY + Y^{ℓ+1} mod ℓ
    std::map<std::pair<unsigned, unsigned>, int> kron{{{ell + 1, 0}, 1}, {{0, ell + 1}, 1}, {{ell, ell}, -1}, {{1, 1}, -1}};
    for (unsigned i = 0; i <= ell + 1; ++i)
      for (unsigned k = 0; k <= ell + 1; ++k) {
        auto it = kron.find({i, k});
        Integer want = it == kron.end() ? 0 : it->second;
        if (mod(P.coefficient(i, k) - want, Integer(ell)) != 0)
          throw std::logic_error("modular polynomial data: Kronecker congruence fails for l = " + std::to_string(ell));
      }
  }
  return out;
}

inline const std::map<unsigned, ModularPolynomial>& modular_polynomial_table() {
  static const auto table = parse_modular_polynomials(data::modular_polynomials);
  return table;
}

}  // namespace detail

inline std::vector<unsigned> supported_modular_polynomials() {
  std::vector<unsigned> out;
  for (const auto& [ell, P] : detail::modular_polynomial_table()) out.push_back(ell);
  return out;
}

inline const ModularPolynomial& modular_polynomial(unsigned ell) {
  const auto& t = detail::modular_polynomial_table();
  auto it = t.find(ell);
  if (it == t.end()) throw InvalidInput("unsupported ell " + std::to_string(ell) + " (no modular polynomial)");
  return it->second;
}

struct BrandtMatrix {
  std::uint64_t p = 0;
  std::uint64_t n = 0;
  std::vector<Fp2Element> js;
  std::vector<unsigned> weights;
  IntMatrix matrix;
};

inline BrandtMatrix brandt(std::uint64_t p, std::uint64_t ell) {
  detail::require_p_above_3(p, "brandt");
  if (!is_prime(ell)) throw InvalidInput("unsupported ell " + std::to_string(ell) + " (not prime)");
  const auto& ss = supersingular_js(p);
  const Fp2 F(p);
  const std::size_t h = ss.size();
  BrandtMatrix B{p, ell, ss.js, ss.weights, IntMatrix(h, h)};
  if (ell == p) {
    for (std::size_t i = 0; i < h; ++i) B.matrix(i, ss.index(F.frobenius(ss.js[i]))) = 1;
    return B;
  }
  if (ell > 0xffffffffULL) throw InvalidInput("unsupported ell " + std::to_string(ell));
  const auto& phi = modular_polynomial(static_cast<unsigned>(ell));
  for (std::size_t i = 0; i < h; ++i) {
    auto f = phi.specialize(F, ss.js[i]);
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < h; ++j) {
      while (f.size() > 1 && poly_eval(F, f, ss.js[j]) == F.zero()) {
        f = poly_deflate(F, f, ss.js[j]);
        B.matrix(i, j) += 1;
        ++total;
      }
    }
    if (total != ell + 1)
      throw std::logic_error("brandt: row " + std::to_string(i) + " has sum " + std::to_string(total) + ", expected " +
                             std::to_string(ell + 1));
  }
  return B;
}

// ---------------------------------------------------------------------------
// Short Weierstrass curves and Vélu isogenies

struct ShortWeierstrass {
  Fp2Element a, b;  // y² = x³ + ax + b
};

inline Fp2Element discriminant_part(const Fp2& F, const ShortWeierstrass& E) {
  // 4a³ + 27b²
  return F.add(F.scale(4, F.mul(E.a, F.sqr(E.a))), F.scale(27, F.sqr(E.b)));
}

inline Fp2Element j_invariant(const Fp2& F, const ShortWeierstrass& E) {
  auto d = discriminant_part(F, E);
  if (d == F.zero()) throw InvalidInput("singular curve");
  return F.div(F.scale(1728 * 4 % F.p(), F.mul(E.a, F.sqr(E.a))), d);
}

/// Trace of the F_{p^2}-Frobenius by counting points (O(p²)).
inline std::int64_t frobenius_trace(const Fp2& F, const ShortWeierstrass& E) {
  if (discriminant_part(F, E) == F.zero()) throw InvalidInput("singular curve");
  std::int64_t sum = 0;
  F.for_each([&](Fp2Element x) { sum += F.chi(F.add(F.mul(x, F.add(F.sqr(x), E.a)), E.b)); });
  return -sum;
}

/// A model of a supersingular j over F_{p^2} with Frobenius ±p, so that
/// every subgroup of order prime to p is F_{p^2}-rational.
inline ShortWeierstrass split_supersingular_model(std::uint64_t p, Fp2Element j) {
  const auto& ss = supersingular_js(p);
  if (!ss.contains(j)) throw InvalidInput("split_supersingular_model: j is not supersingular");
  const Fp2 F(p);
  const auto target = static_cast<std::int64_t>(2 * p);
  auto search = [&](auto make) {
    for (std::uint64_t u = 0; u < p; ++u)
      for (std::uint64_t v = 0; v < p; ++v) {
        Fp2Element c{u, v};
        if (c == F.zero()) continue;
        auto E = make(c);
        auto t = frobenius_trace(F, E);
        if (t == target || t == -target) return E;
      }
    throw std::logic_error("split_supersingular_model: no split twist found");
  };
  if (j == F.zero()) return search([&](Fp2Element b) { return ShortWeierstrass{F.zero(), b}; });
  if (j == j_1728(F)) return search([&](Fp2Element a) { return ShortWeierstrass{a, F.zero()}; });
  // every twist of a curve with Aut = ±1 has trace ±t, and t = ±2p for some twist
  auto k = F.sub(j_1728(F), j);
  return ShortWeierstrass{F.scale(3, F.mul(j, k)), F.scale(2, F.mul(j, F.sqr(k)))};
}

struct VeluIsogeny {
  Fp2Element kernel_x;  // x-coordinate of a generator (of ±generator for ℓ = 3)
  ShortWeierstrass codomain;
  Fp2Element j;
};

/// All ℓ-isogenies (ℓ ∈ {2, 3}) with F_{p^2}-rational kernel, via Vélu's
/// formulas on x-coordinates. The y-coordinate of a kernel point may lie in
/// a quadratic extension; only x is used. Throws if some of the ℓ+1 kernels
/// are not rational (use a split model for supersingular curves).
inline std::vector<VeluIsogeny> velu_isogeny_oracle(const Fp2& F, const ShortWeierstrass& E, unsigned ell) {
  if (discriminant_part(F, E) == F.zero()) throw InvalidInput("velu_isogeny_oracle: singular curve");
  Fp2Poly kernel_poly;
  if (ell == 2) {
    kernel_poly = {E.b, E.a, F.zero(), F.one()};
  } else if (ell == 3) {
    // ψ₃ = 3x⁴ + 6ax² + 12bx − a²
    kernel_poly = {F.neg(F.sqr(E.a)), F.scale(12, E.b), F.scale(6, E.a), F.zero(), F.element(3)};
  } else {
    throw InvalidInput("velu_isogeny_oracle: unsupported ell " + std::to_string(ell));
  }
  std::vector<VeluIsogeny> out;
  for (auto x0 : poly_roots_by_scan(F, kernel_poly)) {
    auto gx = F.add(F.scale(3, F.sqr(x0)), E.a);
    Fp2Element v, w;
    if (ell == 2) {
      v = gx;
      w = F.mul(x0, v);
    } else {
      v = F.scale(2, gx);
      auto u = F.scale(4, F.add(F.add(F.mul(x0, F.sqr(x0)), F.mul(E.a, x0)), E.b));
      w = F.add(u, F.mul(x0, v));
    }
    ShortWeierstrass C{F.sub(E.a, F.scale(5, v)), F.sub(E.b, F.scale(7, w))};
    out.push_back({x0, C, j_invariant(F, C)});
  }
  if (out.size() != ell + 1)
    throw std::domain_error("velu_isogeny_oracle: only " + std::to_string(out.size()) + " of " +
                            std::to_string(ell + 1) + " kernels are rational over F_{p^2}");
  return out;
}

// ---------------------------------------------------------------------------
// Extended graph of X₀(p) with modulus (∞)+(0)

struct X0pGraph {
  std::uint64_t p = 0;
  GraphWithModulus graph;
  std::vector<std::string> ss_labels;  // in supersingular_js order
  IntMatrix gamma;                      // edges × h, columns γ_i = (0) + (E_i) − (∞)
};

inline std::string ss_label(std::size_t i, std::size_t h) {
  std::string digits = std::to_string(i);
  const std::size_t width = std::max<std::size_t>(2, std::to_string(h ? h - 1 : 0).size());
  return "ss" + std::string(width > digits.size() ? width - digits.size() : 0, '0') + digits;
}

inline X0pGraph x0p_graph(std::uint64_t p) {
  const auto& ss = supersingular_js(p);
  const std::size_t h = ss.size();
  X0pGraph g;
  g.p = p;
  std::vector<Branch> B;
  for (std::size_t i = 0; i < h; ++i) {
    g.ss_labels.push_back(ss_label(i, h));
    B.push_back({g.ss_labels[i] + "/0", g.ss_labels[i], "Z_0"});
    B.push_back({g.ss_labels[i] + "/inf", g.ss_labels[i], "Z_inf"});
  }
  ExtendedGraph base(g.ss_labels, {"Z_0", "Z_inf"}, B);
  g.graph = GraphWithModulus(std::move(base), {}, {{"0", "Z_0"}, {"inf", "Z_inf"}});
  g.gamma = IntMatrix(g.graph.edge_count(), h);
  for (std::size_t i = 0; i < h; ++i) {
    g.gamma(g.graph.edge_index("0"), i) += 1;
    g.gamma(g.graph.edge_index(g.ss_labels[i] + "/0"), i) -= 1;
    g.gamma(g.graph.edge_index(g.ss_labels[i] + "/inf"), i) += 1;
    g.gamma(g.graph.edge_index("inf"), i) -= 1;
  }
  return g;
}

/// W_p on chains: swaps the two components and the two cusps and sends the
/// singular point E to E^(p).
inline IntMatrix atkin_lehner_on_chains(const X0pGraph& g) {
  const auto& ss = supersingular_js(g.p);
  const Fp2 F(g.p);
  const auto& G = g.graph;
  IntMatrix W(G.edge_count(), G.edge_count());
  W(G.edge_index("inf"), G.edge_index("0")) = 1;
  W(G.edge_index("0"), G.edge_index("inf")) = 1;
  for (std::size_t i = 0; i < ss.size(); ++i) {
    const auto& to = g.ss_labels[ss.index(F.frobenius(ss.js[i]))];
    W(G.edge_index(to + "/inf"), G.edge_index(g.ss_labels[i] + "/0")) = 1;
    W(G.edge_index(to + "/0"), G.edge_index(g.ss_labels[i] + "/inf")) = 1;
  }
  return W;
}

/// T_p = −W_p on H₁ in the γ-basis, computed on the graph.
inline IntMatrix hecke_p_from_graph(std::uint64_t p) {
  const auto g = x0p_graph(p);
  if (!(boundary_matrix(g.graph) * g.gamma).is_zero()) throw std::logic_error("x0p_graph: γ_i are not cycles");
  return Integer(-1) * restrict_map(atkin_lehner_on_chains(g), g.gamma, g.gamma);
}

/// Matrix of ᵗT_ℓ on the character group of J₀(p) with modulus (∞)+(0), in
/// the basis γ_i: the transpose of B(ℓ).
inline IntMatrix hecke_on_char_X0p(std::uint64_t p, std::uint64_t ell) {
  IntMatrix t = brandt(p, ell).matrix.transpose();
  if (ell == p && hecke_p_from_graph(p) != t) throw std::logic_error("hecke_on_char_X0p: graph and Brandt disagree");
  return t;
}

}  // namespace neron
