#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qflag/qflag.hpp"

namespace qflag::testing {

/// Seeded generator of small random objects for property tests.
class Sampler {
 public:
  explicit Sampler(unsigned seed) : rng_(seed) {}

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return uniform(0, 1) == 1; }

  Rational small_rational(int bound = 4) {
    int den = uniform(1, bound);
    Rational r(uniform(-bound, bound), den);
    r.canonicalize();
    return r;
  }

  Rational nonzero_rational(int bound = 4) {
    Rational r;
    do {
      r = small_rational(bound);
    } while (is_zero(r));
    return r;
  }

  /// q in (0,1) with a rational square root half of the time.
  Rational q_value() {
    int b = uniform(2, 7);
    int a = uniform(1, b - 1);
    Rational r(a, b);
    r.canonicalize();
    if (coin()) return Rational(r * r);
    return r;
  }

  LaurentPoly laurent(int max_terms = 3, int span = 4) {
    LaurentPoly p;
    int n = uniform(0, max_terms);
    for (int k = 0; k < n; ++k) p += LaurentPoly::monomial(small_rational(), uniform(-span, span));
    return p;
  }

  LaurentPoly nonzero_laurent(int max_terms = 3, int span = 4) {
    LaurentPoly p;
    do {
      p = laurent(max_terms, span);
    } while (p.is_zero());
    return p;
  }

  RatFunc ratfunc() { return RatFunc(laurent(), nonzero_laurent(2, 3)); }

  RatFunc nonzero_ratfunc() { return RatFunc(nonzero_laurent(), nonzero_laurent(2, 3)); }

  /// A simple Lie type of rank at most 3 together with a small dominant weight.
  std::pair<RootSystem, std::vector<int>> small_module(long max_dim = 20) {
    static const std::vector<std::pair<char, int>> types{{'A', 1}, {'A', 2}, {'A', 3}, {'B', 2}, {'C', 2}, {'G', 2}};
    while (true) {
      auto [t, r] = types[static_cast<std::size_t>(uniform(0, static_cast<int>(types.size()) - 1))];
      RootSystem rs(t, r);
      std::vector<int> lambda(static_cast<std::size_t>(r));
      bool any = false;
      for (auto& x : lambda) {
        x = uniform(0, 2);
        any = any || x > 0;
      }
      if (!any) continue;
      if (weyl_dim(rs, lambda) <= max_dim) return {rs, lambda};
    }
  }

  std::mt19937& engine() { return rng_; }

 private:
  std::mt19937 rng_;
};

struct PropertyResult {
  std::string name;
  long instances = 0;
  long failures = 0;
  std::string first_failure;

  bool ok() const { return instances >= 100 && failures == 0; }
  void record(bool pass, const std::string& what) {
    ++instances;
    if (pass) return;
    if (failures++ == 0) first_failure = what;
  }
};

/// Ring and evaluation-homomorphism laws of the rational-function field.
inline PropertyResult field_axioms(unsigned seed, long n = 200) {
  PropertyResult res{"field axioms"};
  Sampler g(seed);
  for (long k = 0; k < n; ++k) {
    RatFunc x = g.ratfunc(), y = g.ratfunc(), z = g.ratfunc();
    bool ok = (x + y) + z == x + (y + z) && (x * y) * z == x * (y * z) && x + y == y + x && x * y == y * x &&
              x * (y + z) == x * y + x * z && x + RatFunc() == x && x * RatFunc(Rational(1)) == x &&
              (x - x).is_zero();
    if (!x.is_zero()) ok = ok && x / x == RatFunc(Rational(1)) && (y / x) * x == y;
    Rational q0 = Rational(4, 9);
    try {
      Rational ex = evaluate(x, q0), ey = evaluate(y, q0);
      ok = ok && evaluate(x * y, q0) == ex * ey && evaluate(x + y, q0) == ex + ey;
    } catch (const std::domain_error&) {
      // a pole at q0: the homomorphism law is vacuous
    }
    res.record(ok, to_string(x) + " ; " + to_string(y) + " ; " + to_string(z));
  }
  return res;
}

/// Defining relations of U_q(g) on random small modules at random q.
inline PropertyResult module_relations(unsigned seed, long n = 100) {
  PropertyResult res{"defining relations"};
  Sampler g(seed);
  for (long k = 0; k < n; ++k) {
    auto [rs, lambda] = g.small_module();
    Rational q = g.q_value();
    HWModule<EvaluatedField> m(rs, lambda, EvaluatedField(q), 4096);
    RelationReport rel = verify_relations(m);
    std::string what = rs.name() + " lambda";
    for (int x : lambda) what += " " + std::to_string(x);
    res.record(rel.ok() && rel.checked > 0, what + " q=" + to_string(q) + " " + rel.text());
  }
  return res;
}

/// A random product of one to `len` matrix coefficients (some starred) of module m.
template <class Field>
CoordElem<Field> random_monomial(Sampler& g, const CoordRing<Field>& ring, int m, int len = 2) {
  int d = ring.module(m).dim();
  CoordElem<Field> a = ring.one();
  int l = g.uniform(1, len);
  for (int t = 0; t < l; ++t) a = ring.multiply(a, ring.mc(m, g.uniform(0, d - 1), g.uniform(0, d - 1), g.coin()));
  return a;
}

template <class Field>
CoordElem<Field> random_element(Sampler& g, const CoordRing<Field>& ring, int m, int terms = 2, int len = 2) {
  CoordElem<Field> a = ring.zero();
  int n = g.uniform(1, terms);
  for (int t = 0; t < n; ++t) {
    a += random_monomial(g, ring, m, len) * ring.field().from_int(g.uniform(1, 3) * (g.coin() ? 1 : -1));
  }
  if (g.uniform(0, 3) == 0) a += ring.scalar(ring.field().from_int(g.uniform(-2, 2)));
  return a;
}

template <class Field>
Chain<Field> random_chain(Sampler& g, const CoordRing<Field>& ring, int m, int degree, int tuples = 2) {
  Chain<Field> c;
  c.degree = degree;
  for (int t = 0; t < tuples; ++t) {
    std::vector<typename Chain<Field>::Leg> legs;
    for (int s = 0; s <= degree; ++s) legs.push_back(share(random_element(g, ring, m, 2, 1)));
    c.add(ring.field().from_int(g.uniform(1, 3)), std::move(legs));
  }
  return c;
}

/// A small coordinate ring: A1 or A2 with its vector representation at random q.
struct RingCase {
  std::shared_ptr<CoordRing<EvaluatedField>> ring;
  int module = 0;
  std::string label;
};

inline RingCase random_ring(Sampler& g) {
  bool a2 = g.coin();
  Rational q = g.q_value();
  RootSystem rs('A', a2 ? 2 : 1);
  RingCase rc;
  rc.ring = std::make_shared<CoordRing<EvaluatedField>>(rs, EvaluatedField(q));
  rc.module = rc.ring->add_module(a2 ? std::vector<int>{1, 0} : std::vector<int>{1});
  rc.label = rs.name() + " q=" + to_string(q);
  return rc;
}

/// b o b = 0 for the twisted boundary on random chains of degree 2 and 3.
inline PropertyResult boundary_squared(unsigned seed, long n = 100) {
  PropertyResult res{"b o b = 0"};
  Sampler g(seed);
  RingCase rc = random_ring(g);
  for (long k = 0; k < n; ++k) {
    if (k % 25 == 0) rc = random_ring(g);
    int degree = g.uniform(2, 3);
    Chain<EvaluatedField> c = random_chain(g, *rc.ring, rc.module, degree);
    Chain<EvaluatedField> bb = twisted_boundary(*rc.ring, twisted_boundary(*rc.ring, c));
    ChainCertificate cert = chain_is_zero(*rc.ring, bb);
    res.record(cert.zero, rc.label + " degree " + std::to_string(degree) + " " + cert.text());
  }
  return res;
}

/// normalize o normalize = normalize on random chains.
inline PropertyResult normalize_idempotent(unsigned seed, long n = 100) {
  PropertyResult res{"normalize idempotence"};
  Sampler g(seed);
  RingCase rc = random_ring(g);
  for (long k = 0; k < n; ++k) {
    if (k % 25 == 0) rc = random_ring(g);
    Chain<EvaluatedField> c = random_chain(g, *rc.ring, rc.module, g.uniform(1, 3));
    LegCache<EvaluatedField> cache(*rc.ring);
    Chain<EvaluatedField> once = normalize(*rc.ring, c, cache);
    Chain<EvaluatedField> twice = normalize(*rc.ring, once, cache);
    ChainCertificate cert = chain_is_zero(*rc.ring, chain_difference(once, twice));
    res.record(cert.zero, rc.label + " " + cert.text());
  }
  return res;
}

/// theta computed from generator actions agrees with theta computed from weights.
inline PropertyResult theta_agreement(unsigned seed, long n = 100) {
  PropertyResult res{"theta agreement"};
  Sampler g(seed);
  RingCase rc = random_ring(g);
  for (long k = 0; k < n; ++k) {
    if (k % 25 == 0) rc = random_ring(g);
    CoordElem<EvaluatedField> a = random_element(g, *rc.ring, rc.module, 3, 3);
    ZeroCertificate cert = rc.ring->is_zero(rc.ring->theta_action(a) - rc.ring->theta_weight(a));
    res.record(cert.zero, rc.label + " " + describe_terms(a));
  }
  return res;
}

inline std::vector<PropertyResult> all_properties(unsigned seed) {
  return {field_axioms(seed), module_relations(seed + 1), boundary_squared(seed + 2), normalize_idempotent(seed + 3),
          theta_agreement(seed + 4)};
}

}  // namespace qflag::testing
