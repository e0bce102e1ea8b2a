#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qflag/cartan.hpp"
#include "qflag/check.hpp"
#include "qflag/coord.hpp"
#include "qflag/flagproj.hpp"

namespace qflag {

/// Where the twist enters the last face of the boundary.
enum class TwistMode {
  Modular,         // theta(a_n) a_0
  Identity,        // a_n a_0
  RightPlacement,  // a_0 theta(a_n)
};

inline const char* twist_name(TwistMode m) {
  switch (m) {
    case TwistMode::Modular:
      return "modular";
    case TwistMode::Identity:
      return "identity";
    case TwistMode::RightPlacement:
      return "right";
  }
  return "modular";
}

/// A degree-n chain: a formal sum of coefficient times a_0 (x) ... (x) a_n.
/// Legs are shared so that repeated entries are multiplied only once.
template <class Field>
struct Chain {
  using K = typename Field::value_type;
  using Elem = CoordElem<Field>;
  using Leg = std::shared_ptr<const Elem>;

  struct Tuple {
    K coeff;
    std::vector<Leg> legs;
  };

  int degree = 0;
  std::vector<Tuple> terms;

  std::size_t size() const { return terms.size(); }
  void add(K c, std::vector<Leg> legs) {
    if (static_cast<int>(legs.size()) != degree + 1) throw std::invalid_argument("chain tuple has the wrong length");
    if (is_zero(c)) return;
    terms.push_back({std::move(c), std::move(legs)});
  }
};

template <class Field>
typename Chain<Field>::Leg share(CoordElem<Field> a) {
  return std::make_shared<const CoordElem<Field>>(std::move(a));
}

/// Products and twists of legs, memoized by leg identity.
template <class Field>
class LegCache {
 public:
  using Elem = CoordElem<Field>;
  using Leg = std::shared_ptr<const Elem>;

  explicit LegCache(const CoordRing<Field>& ring) : ring_(ring) {}

  Leg product(const Leg& a, const Leg& b) {
    auto key = std::make_pair(a.get(), b.get());
    auto it = products_.find(key);
    if (it != products_.end()) return it->second;
    Leg out = share(ring_.multiply(*a, *b));
    keep(a);
    keep(b);
    products_.emplace(key, out);
    return out;
  }

  Leg theta(const Leg& a) {
    auto it = theta_.find(a.get());
    if (it != theta_.end()) return it->second;
    Leg out = share(ring_.theta_weight(*a));
    keep(a);
    theta_.emplace(a.get(), out);
    return out;
  }

  Leg reduced(const Leg& a) {
    auto it = reduced_.find(a.get());
    if (it != reduced_.end()) return it->second;
    Elem r = *a - ring_.scalar(ring_.counit(*a));
    keep(a);
    Leg out = r.empty() ? nullptr : share(std::move(r));
    reduced_.emplace(a.get(), out);
    return out;
  }

 private:
  // Holding the keys keeps their addresses from being reused.
  void keep(const Leg& a) { alive_.emplace(a.get(), a); }

  struct PairHash {
    std::size_t operator()(const std::pair<const Elem*, const Elem*>& p) const {
      return std::hash<const void*>{}(p.first) * 1000003u ^ std::hash<const void*>{}(p.second);
    }
  };

  const CoordRing<Field>& ring_;
  std::unordered_map<const Elem*, Leg> alive_;
  std::unordered_map<std::pair<const Elem*, const Elem*>, Leg, PairHash> products_;
  std::unordered_map<const Elem*, Leg> theta_;
  std::unordered_map<const Elem*, Leg> reduced_;
};

/// b(a_0 (x) ... (x) a_n) = sum_{i<n} (-1)^i a_0 (x) .. a_i a_{i+1} .. (x) a_n
///                        + (-1)^n theta(a_n) a_0 (x) a_1 (x) ... (x) a_{n-1}.
template <class Field>
Chain<Field> twisted_boundary(const CoordRing<Field>& ring, const Chain<Field>& c, TwistMode mode,
                              LegCache<Field>& cache) {
  if (c.degree < 1) throw std::invalid_argument("boundary needs degree at least 1");
  using Leg = typename Chain<Field>::Leg;
  Chain<Field> out;
  out.degree = c.degree - 1;
  int n = c.degree;
  for (const auto& t : c.terms) {
    for (int i = 0; i < n; ++i) {
      std::vector<Leg> legs;
      for (int k = 0; k < i; ++k) legs.push_back(t.legs[static_cast<std::size_t>(k)]);
      legs.push_back(cache.product(t.legs[static_cast<std::size_t>(i)], t.legs[static_cast<std::size_t>(i + 1)]));
      for (int k = i + 2; k <= n; ++k) legs.push_back(t.legs[static_cast<std::size_t>(k)]);
      out.add(i % 2 == 0 ? t.coeff : -t.coeff, std::move(legs));
    }
    const Leg& last = t.legs[static_cast<std::size_t>(n)];
    const Leg& first = t.legs[0];
    Leg head;
    switch (mode) {
      case TwistMode::Modular:
        head = cache.product(cache.theta(last), first);
        break;
      case TwistMode::Identity:
        head = cache.product(last, first);
        break;
      case TwistMode::RightPlacement:
        head = cache.product(first, cache.theta(last));
        break;
    }
    std::vector<Leg> legs{head};
    for (int k = 1; k < n; ++k) legs.push_back(t.legs[static_cast<std::size_t>(k)]);
    out.add(n % 2 == 0 ? t.coeff : -t.coeff, std::move(legs));
  }
  (void)ring;
  return out;
}

template <class Field>
Chain<Field> twisted_boundary(const CoordRing<Field>& ring, const Chain<Field>& c, TwistMode mode = TwistMode::Modular) {
  LegCache<Field> cache(ring);
  return twisted_boundary(ring, c, mode, cache);
}

/// Replaces every leg a at position >= 1 by a - eps(a) 1 and drops tuples in
/// which such a leg becomes zero.
template <class Field>
Chain<Field> normalize(const CoordRing<Field>& ring, const Chain<Field>& c, LegCache<Field>& cache) {
  (void)ring;
  Chain<Field> out;
  out.degree = c.degree;
  for (const auto& t : c.terms) {
    std::vector<typename Chain<Field>::Leg> legs{t.legs[0]};
    bool dead = false;
    for (std::size_t k = 1; k < t.legs.size() && !dead; ++k) {
      auto r = cache.reduced(t.legs[k]);
      if (!r) dead = true;
      legs.push_back(std::move(r));
    }
    if (!dead) out.add(t.coeff, std::move(legs));
  }
  return out;
}

template <class Field>
Chain<Field> normalize(const CoordRing<Field>& ring, const Chain<Field>& c) {
  LegCache<Field> cache(ring);
  return normalize(ring, c, cache);
}

template <class Field>
Chain<Field> chain_difference(const Chain<Field>& a, const Chain<Field>& b) {
  if (a.degree != b.degree) throw std::invalid_argument("chain degrees differ");
  Chain<Field> out = a;
  for (const auto& t : b.terms) out.add(-t.coeff, t.legs);
  return out;
}

/// Certificate of a chain zero test: per-slot cyclic dimensions and the number
/// of nonzero tensor coordinates.
struct ChainCertificate {
  bool zero = true;
  std::vector<long> slot_dims;
  long residual_entries = 0;

  std::string text() const {
    std::string s = "slot_dims=";
    for (std::size_t i = 0; i < slot_dims.size(); ++i) s += (i ? "x" : "") + std::to_string(slot_dims[i]);
    return s + " nonzero_coords=" + std::to_string(residual_entries);
  }
};

/// Exact test of c = 0 in A^{(x)(n+1)}: each leg is replaced by its coordinate
/// vector against one cyclic module per slot (an injective linear map), and
/// the resulting tensor is accumulated.
template <class Field>
ChainCertificate chain_is_zero(const CoordRing<Field>& ring, const Chain<Field>& c) {
  using K = typename Field::value_type;
  using Elem = CoordElem<Field>;
  ChainCertificate cert;
  std::size_t slots = static_cast<std::size_t>(c.degree + 1);
  cert.slot_dims.assign(slots, 0);
  if (c.terms.empty()) return cert;
  std::vector<std::unordered_map<const Elem*, std::vector<std::pair<int, K>>>> coords(slots);
  std::vector<std::uint64_t> radix(slots, 1);
  for (std::size_t s = 0; s < slots; ++s) {
    std::vector<int> gens;
    std::vector<const Elem*> legs;
    for (const auto& t : c.terms) {
      const Elem* e = t.legs[s].get();
      if (coords[s].emplace(e, std::vector<std::pair<int, K>>{}).second) {
        legs.push_back(e);
        std::vector<int> g = ring.generators_of(*e);
        gens.insert(gens.end(), g.begin(), g.end());
      }
    }
    const CyclicReducer<Field>& red = ring.reducer_for(gens);
    cert.slot_dims[s] = red.dim();
    for (const Elem* e : legs) coords[s][e] = ring.coordinates(red, *e);
  }
  std::uint64_t total = 1;
  for (std::size_t s = slots; s-- > 0;) {
    radix[s] = total;
    std::uint64_t d = static_cast<std::uint64_t>(std::max<long>(cert.slot_dims[s], 1));
    if (total > (~std::uint64_t{0}) / d) throw std::length_error("chain tensor too large for the zero test");
    total *= d;
  }
  std::unordered_map<std::uint64_t, K> acc;
  std::vector<std::size_t> pos(slots);
  for (const auto& t : c.terms) {
    std::vector<const std::vector<std::pair<int, K>>*> v(slots);
    bool empty = false;
    for (std::size_t s = 0; s < slots; ++s) {
      v[s] = &coords[s].at(t.legs[s].get());
      if (v[s]->empty()) empty = true;
    }
    if (empty) continue;
    std::fill(pos.begin(), pos.end(), 0);
    while (true) {
      std::uint64_t key = 0;
      K x = t.coeff;
      for (std::size_t s = 0; s < slots; ++s) {
        const auto& [r, val] = (*v[s])[pos[s]];
        key += static_cast<std::uint64_t>(r) * radix[s];
        x *= val;
      }
      acc[key] += x;
      std::size_t s = slots;
      while (s-- > 0) {
        if (++pos[s] < v[s]->size()) break;
        pos[s] = 0;
      }
      if (s == static_cast<std::size_t>(-1)) break;
    }
  }
  for (const auto& [k, x] : acc) {
    if (!is_zero(x)) ++cert.residual_entries;
  }
  cert.zero = cert.residual_entries == 0;
  return cert;
}

/// C(P) = sum_{ijk} q^{(2 rho, lambda_i)} (2P - 1)^i_j (x) P^j_k (x) P^k_i.
template <class Field>
Chain<Field> build_CP(const CoordMatrix<Field>& p) {
  const CoordRing<Field>& ring = *p.ring;
  using Leg = typename Chain<Field>::Leg;
  int n = p.size();
  std::vector<std::vector<Leg>> twice(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      CoordElem<Field> e = p.at(i, j) * ring.field().from_int(2);
      if (i == j) e -= ring.one();
      twice[static_cast<std::size_t>(i)].push_back(share(std::move(e)));
    }
  }
  Chain<Field> c;
  c.degree = 2;
  for (int i = 0; i < n; ++i) {
    auto w = ring.qp(p.two_rho(i));
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) c.add(w, {twice[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p.ptr(j, k), p.ptr(k, i)});
    }
  }
  return c;
}

/// eta_a(a_0 (x) a_1 (x) a_2) = eps(a_0) a_1(F_a) a_2(E_a) (0-based a).
template <class Field>
typename Field::value_type eta_eval(const CoordRing<Field>& ring, int a, const Chain<Field>& c) {
  if (c.degree != 2) throw std::invalid_argument("eta is evaluated on degree-2 chains");
  using K = typename Field::value_type;
  using Elem = CoordElem<Field>;
  std::unordered_map<const Elem*, K> e0, f1, e2;
  auto memo = [](auto& m, const Elem* e, auto f) -> const K& {
    auto it = m.find(e);
    if (it == m.end()) it = m.emplace(e, f()).first;
    return it->second;
  };
  K acc = ring.field().zero();
  for (const auto& t : c.terms) {
    const Elem* a0 = t.legs[0].get();
    const Elem* a1 = t.legs[1].get();
    const Elem* a2 = t.legs[2].get();
    const K& x0 = memo(e0, a0, [&] { return ring.counit(*a0); });
    if (is_zero(x0)) continue;
    const K& x1 = memo(f1, a1, [&] { return ring.evaluate(*a1, {Gen{Gen::F, a}}); });
    if (is_zero(x1)) continue;
    const K& x2 = memo(e2, a2, [&] { return ring.evaluate(*a2, {Gen{Gen::E, a}}); });
    if (is_zero(x2)) continue;
    acc += t.coeff * x0 * x1 * x2;
  }
  return acc;
}

/// q^{(2 rho - alpha_a, lambda)} [(alpha_a^vee, lambda)]_{q^{d_a}}.
template <class Field>
typename Field::value_type pairing_formula(const RootSystem& rs, const Field& f, int a, const std::vector<int>& lambda) {
  long two_rho = rs.two_rho_pair(lambda);
  long n = lambda[static_cast<std::size_t>(a)];
  long da = rs.d(a);
  return f.q_power(two_rho - da * n) * f.q_integer(n, da);
}

/// Compares eta_a(C(P)) with the closed formula for every a; the nonvanishing
/// pattern (nonzero exactly for a outside S) is reported per index.
template <class Field>
std::vector<Check> pairing_check(const CoordRing<Field>& ring, const Chain<Field>& cp, const ParabolicData& pd) {
  const RootSystem& rs = ring.root_system();
  std::vector<Check> out;
  for (int a = 0; a < rs.rank(); ++a) {
    Stopwatch sw;
    auto lhs = eta_eval(ring, a, cp);
    auto rhs = pairing_formula(rs, ring.field(), a, pd.rho_S);
    bool in_S = pd.in_S(a);
    bool pattern = in_S ? is_zero(lhs) : !is_zero(lhs);
    Check c = make_check("pairing." + std::to_string(a + 1), lhs == rhs && pattern, to_string(lhs), to_string(rhs));
    c.detail = std::string(in_S ? "a in S, expected zero" : "a not in S, expected nonzero") +
               (pattern ? "" : "; vanishing pattern violated");
    c.wall_ms = sw.ms();
    out.push_back(std::move(c));
  }
  return out;
}

/// A seeded degree-3 chain whose legs are products of one or two entries of
/// the given matrix.
template <class Field>
Chain<Field> sample_chain(const CoordMatrix<Field>& p, unsigned seed, int degree = 3, int tuples = 2) {
  const CoordRing<Field>& ring = *p.ring;
  std::mt19937 rng(seed);
  int n = p.size();
  std::uniform_int_distribution<int> idx(0, n - 1), len(1, 2), coef(-3, 3);
  Chain<Field> c;
  c.degree = degree;
  for (int t = 0; t < tuples; ++t) {
    std::vector<typename Chain<Field>::Leg> legs;
    for (int k = 0; k <= degree; ++k) {
      int l = len(rng);
      CoordElem<Field> e = p.at(idx(rng), idx(rng));
      for (int r = 1; r < l; ++r) e = ring.multiply(e, p.at(idx(rng), idx(rng)));
      legs.push_back(share(std::move(e)));
    }
    int x = coef(rng);
    if (x == 0) x = 1;
    c.add(ring.field().from_int(x), std::move(legs));
  }
  return c;
}

/// eta_a(normalize(b(sample))) = 0 for seeded samples drawn from P.
template <class Field>
std::vector<Check> cocycle_check(const CoordMatrix<Field>& p, const std::vector<unsigned>& seeds) {
  const CoordRing<Field>& ring = *p.ring;
  std::vector<Check> out;
  for (unsigned seed : seeds) {
    Chain<Field> s = sample_chain(p, seed);
    LegCache<Field> cache(ring);
    Chain<Field> bs = normalize(ring, twisted_boundary(ring, s, TwistMode::Modular, cache), cache);
    for (int a = 0; a < ring.rank(); ++a) {
      Stopwatch sw;
      auto v = eta_eval(ring, a, bs);
      Check c = make_check("cocycle." + std::to_string(a + 1) + "." + std::to_string(seed), is_zero(v), to_string(v), "0");
      c.detail = "seed " + std::to_string(seed) + ", " + std::to_string(s.size()) + " tuples";
      c.wall_ms = sw.ms();
      out.push_back(std::move(c));
    }
  }
  return out;
}

/// The same evaluation on single tuples of raw coefficients u^i_j and
/// (u^i_j)^*, which are not invariant; the number of violations is recorded
/// as data only.
template <class Field>
std::vector<Check> cocycle_control(const CoordRing<Field>& ring, int m, unsigned seed, int samples = 2000) {
  using Leg = typename Chain<Field>::Leg;
  int n = ring.module(m).dim();
  std::vector<Leg> pool;
  for (int c = 0; c < 2; ++c) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) pool.push_back(share(ring.mc(m, i, j, c == 1)));
    }
  }
  std::mt19937 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::vector<Chain<Field>> chains;
  for (int s = 0; s < samples; ++s) {
    Chain<Field> c;
    c.degree = 3;
    c.add(ring.field().one(), {pool[pick(rng)], pool[pick(rng)], pool[pick(rng)], pool[pick(rng)]});
    chains.push_back(std::move(c));
  }
  LegCache<Field> cache(ring);
  std::vector<Check> out;
  for (int a = 0; a < ring.rank(); ++a) {
    Stopwatch sw;
    int nonzero = 0;
    for (const auto& c : chains) {
      if (!is_zero(eta_eval(ring, a, normalize(ring, twisted_boundary(ring, c, TwistMode::Modular, cache), cache)))) ++nonzero;
    }
    Check c;
    c.name = "cocycle.control." + std::to_string(a + 1) + "." + std::to_string(seed);
    c.status = Status::Measured;
    c.lhs = std::to_string(nonzero) + "/" + std::to_string(samples);
    c.rhs = "0";
    c.detail = "raw-coefficient samples with nonzero eta(b(.))";
    c.wall_ms = sw.ms();
    out.push_back(std::move(c));
  }
  return out;
}

/// normalize(b(C(P))) = 0 (asserted) and b(C(P)) = 0 (measured).
template <class Field>
std::vector<Check> cycle_check(const Chain<Field>& cp, const CoordRing<Field>& ring) {
  std::vector<Check> out;
  LegCache<Field> cache(ring);
  Stopwatch sw;
  Chain<Field> b = twisted_boundary(ring, cp, TwistMode::Modular, cache);
  Chain<Field> nb = normalize(ring, b, cache);
  ChainCertificate cn = chain_is_zero(ring, nb);
  Check c = make_check("cycle.normalized", cn.zero, "normalize(b(C(P)))", "0");
  c.detail = std::to_string(nb.size()) + " tuples";
  c.certificate = cn.text();
  c.wall_ms = sw.ms();
  out.push_back(std::move(c));
  Stopwatch sw2;
  ChainCertificate cu = chain_is_zero(ring, b);
  Check u;
  u.name = "cycle.unnormalized.residual";
  u.status = Status::Measured;
  u.lhs = "b(C(P))";
  u.rhs = cu.zero ? "0" : "nonzero";
  u.detail = cu.zero ? "vanishes before normalization" : "nonzero before normalization";
  u.certificate = cu.text();
  u.wall_ms = sw2.ms();
  out.push_back(std::move(u));
  return out;
}

/// Whether normalize(b(C(P))) vanishes with the given twist placement.
template <class Field>
ChainCertificate cycle_with_twist(const Chain<Field>& cp, const CoordRing<Field>& ring, TwistMode mode) {
  LegCache<Field> cache(ring);
  return chain_is_zero(ring, normalize(ring, twisted_boundary(ring, cp, mode, cache), cache));
}

}  // namespace qflag
