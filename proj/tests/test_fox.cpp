#include "catch_amalgamated.hpp"

#include <random>

#include "gric/corpus.hpp"
#include "gric/fox.hpp"

using namespace gric;
using corpus::wd;

namespace {

FreeWord random_word(std::mt19937_64& rng, int arity, int max_len) {
  std::uniform_int_distribution<int> gen(0, arity - 1);
  std::uniform_int_distribution<int> sgn(0, 1);
  std::uniform_int_distribution<int> n(0, max_len);
  std::vector<Letter> v;
  int target = n(rng);
  for (int i = 0; i < target; ++i)
    v.push_back({gen(rng), static_cast<int8_t>(sgn(rng) ? 1 : -1)});
  return FreeWord(std::move(v));
}

// independent oracle: recursive halving through the Leibniz rule,
// d(uv)/dx = du/dx + u dv/dx, with single letters as base cases
RingElement fox_oracle(const GroupClass& f, const FreeWord& w, int gen) {
  if (w.empty()) return RingElement::zero(f);
  if (w.size() == 1) {
    const Letter& l = w.letter(0);
    RingElement r(f);
    if (l.gen == gen) {
      if (l.sign > 0)
        r.add_term(GroupElement::identity(f), 1);
      else
        r.add_term(GroupElement::generator(f, gen, -1), -1);
    }
    return r;
  }
  size_t mid = w.size() / 2;
  std::vector<Letter> lv(w.letters().begin(), w.letters().begin() + mid);
  std::vector<Letter> rv(w.letters().begin() + mid, w.letters().end());
  FreeWord u(std::move(lv)), v(std::move(rv));
  RingElement left = fox_oracle(f, u, gen);
  RingElement uring = RingElement::from(normalize_word(f, u));
  return left + uring * fox_oracle(f, v, gen);
}

RingElement mu(const GroupClass& bs, long long m) {
  RingElement s(bs);
  GroupElement a = GroupElement::generator(bs, 0);
  GroupElement p = GroupElement::identity(bs);
  for (long long i = 0; i < m; ++i) {
    s += RingElement::from(p);
    p = multiply(p, a);
  }
  return s;
}

}  // namespace

TEST_CASE("frozen small derivatives") {
  GroupClass f2 = GroupClass::free_group(2, {"x", "y"});
  // d(xy)/dx = 1
  REQUIRE(fox_derivative(f2, wd({{0, 1}, {1, 1}}), 0) == RingElement::one(f2));
  // d(x^-1)/dx = -x^-1
  REQUIRE(fox_derivative(f2, wd({{0, -1}}), 0) ==
          Int(-1) * RingElement::from(GroupElement::generator(f2, 0, -1)));
  // d(1)/dx = 0
  REQUIRE(fox_derivative(f2, FreeWord(), 0).is_zero());

  // d(t a t^-1 a^-m)/dt = 1 - t a t^-1 in the free ring on {a, t}
  GroupClass fat = GroupClass::free_group(2, {"a", "t"});
  for (int m : {2, 3}) {
    std::vector<Letter> r{{1, 1}, {0, 1}, {1, -1}};
    for (int i = 0; i < m; ++i) r.push_back({0, -1});
    RingElement d = fox_derivative(fat, FreeWord(std::move(r)), 1);
    RingElement expect =
        RingElement::one(fat) -
        RingElement::from(normalize_word(fat, wd({{1, 1}, {0, 1}, {1, -1}})));
    REQUIRE(d == expect);
  }
}

TEST_CASE("derivative matches the independent oracle") {
  std::mt19937_64 rng(2024);
  GroupClass f4 = GroupClass::free_group(4);
  for (int i = 0; i < 500; ++i) {
    FreeWord w = random_word(rng, 4, 14);
    int gen = static_cast<int>(rng() % 4);
    REQUIRE(fox_derivative(f4, w, gen) == fox_oracle(f4, w, gen));
  }
}

TEST_CASE("fundamental identity") {
  std::mt19937_64 rng(55);
  GroupClass f4 = GroupClass::free_group(4);
  for (int i = 0; i < 500; ++i) {
    FreeWord w = random_word(rng, 4, 18);
    RingElement sum(f4);
    for (int g = 0; g < 4; ++g) {
      RingElement xm1 = RingElement::from(GroupElement::generator(f4, g)) -
                        RingElement::one(f4);
      sum += fox_derivative(f4, w, g) * xm1;
    }
    RingElement expect =
        RingElement::from(normalize_word(f4, w)) - RingElement::one(f4);
    REQUIRE(sum == expect);
  }
}

TEST_CASE("leibniz and inverse rules") {
  std::mt19937_64 rng(56);
  GroupClass f3 = GroupClass::free_group(3);
  for (int i = 0; i < 500; ++i) {
    FreeWord v = random_word(rng, 3, 10);
    FreeWord w = random_word(rng, 3, 10);
    int g = static_cast<int>(rng() % 3);
    RingElement lhs = fox_derivative(f3, v.concat(w), g);
    RingElement rhs =
        fox_derivative(f3, v, g) +
        RingElement::from(normalize_word(f3, v)) * fox_derivative(f3, w, g);
    REQUIRE(lhs == rhs);
    // d(w^-1)/dx = -w^-1 dw/dx
    RingElement inv_lhs = fox_derivative(f3, w.inverse(), g);
    RingElement inv_rhs =
        Int(-1) * (RingElement::from(normalize_word(f3, w.inverse())) *
                   fox_derivative(f3, w, g));
    REQUIRE(inv_lhs == inv_rhs);
  }
}

TEST_CASE("boundary squared vanishes on the corpus") {
  for (const Presentation& p : corpus::all()) {
    CAPTURE(p.name());
    FoxComplex c = fox_lyndon_complex(p);
    REQUIRE(c.verified);
    BoundaryReport rep = verify_boundary_squared(c);
    REQUIRE(rep.zero);
    REQUIRE(rep.composite.rows() == static_cast<size_t>(p.relator_count()));
    // and after relator normalization
    REQUIRE(verify_boundary_squared(
                fox_lyndon_complex(normalize_presentation(p)))
                .zero);
  }
}

TEST_CASE("BS fox column in the group ring") {
  for (long long m : {2LL, 3LL}) {
    Presentation p = corpus::bs(m);
    GroupClass bs = p.group_class();
    FoxComplex c = fox_lyndon_complex(p);
    // (phi(dr/da), phi(dr/dt)) = (t - mu_m, 1 - a^m)
    GroupElement t = GroupElement::generator(bs, 1);
    GroupElement a = GroupElement::generator(bs, 0);
    RingElement am(bs);
    {
      GroupElement x = GroupElement::identity(bs);
      for (long long i = 0; i < m; ++i) x = multiply(x, a);
      am = RingElement::from(x);
    }
    REQUIRE(c.d2.at(0, 0) == RingElement::from(t) - mu(bs, m));
    REQUIRE(c.d2.at(1, 0) == RingElement::one(bs) - am);
    // d1 = (a - 1, t - 1)^T
    REQUIRE(c.d1.at(0, 0) ==
            RingElement::from(a) - RingElement::one(bs));
    REQUIRE(c.d1.at(1, 0) ==
            RingElement::from(t) - RingElement::one(bs));
  }
}

TEST_CASE("free presentations have no 2-cells") {
  GroupClass f2 = GroupClass::free_group(2, {"x", "y"});
  Presentation p("free2", f2, {"x", "y"}, {},
                 OrientationCharacter::trivial(f2), true);
  FoxComplex c = fox_lyndon_complex(p);
  REQUIRE(c.d2.cols() == 0);
  REQUIRE(c.d1.rows() == 2);
  REQUIRE(verify_boundary_squared(c).zero);  // vacuous
  REQUIRE(dualizing_presentation(c).rows() == 0);
}

TEST_CASE("corrupted d2 yields a nonzero residual") {
  FoxComplex c = fox_lyndon_complex(corpus::bs(2));
  c.d2.at(0, 0) += RingElement::one(c.pres.group_class());
  REQUIRE(!verify_boundary_squared(c).zero);
}

TEST_CASE("dualizing presentation") {
  Presentation p = corpus::bs(2);
  GroupClass bs = p.group_class();
  OrientationCharacter w = p.w();
  FoxComplex c = fox_lyndon_complex(p);
  RingMatrix dual = dualizing_presentation(c);
  REQUIRE(dual.rows() == 1);  // relators
  REQUIRE(dual.cols() == 2);  // generators
  GroupElement t = GroupElement::generator(bs, 1);
  GroupElement a = GroupElement::generator(bs, 0);
  RingElement am = RingElement::from(multiply(a, a));
  REQUIRE(dual.at(0, 0) ==
          involute(RingElement::from(t) - mu(bs, 2), w));
  REQUIRE(dual.at(0, 1) == involute(RingElement::one(bs) - am, w));

  // Z^2: conjugate transpose of the commutator fox column
  Presentation z = corpus::z2();
  FoxComplex cz = fox_lyndon_complex(z);
  RingMatrix dz = dualizing_presentation(cz);
  REQUIRE(dz == conjugate_transpose(cz.d2, z.w()));

  // aspherical flag is required
  Presentation noflag("z2-noflag", z.group_class(), z.gens(), z.relators(),
                      z.w(), false);
  FoxComplex cn = fox_lyndon_complex(noflag);
  REQUIRE_THROWS_AS(dualizing_presentation(cn), Error);
}

TEST_CASE("formal complexes are flagged unverified") {
  GroupClass fm = GroupClass::formal(2, {"a", "b"});
  Presentation p("formal-ex", fm, {"a", "b"}, {wd({{0, 1}, {1, 1}})},
                 OrientationCharacter::trivial(fm), false);
  FoxComplex c = fox_lyndon_complex(p);
  REQUIRE(!c.verified);
  REQUIRE_THROWS_AS(verify_boundary_squared(c), Error);
}

TEST_CASE("normalize_presentation on the BS example") {
  Presentation p = corpus::bs(2);
  Presentation n = normalize_presentation(p);
  REQUIRE(n.gens() == std::vector<std::string>{"a", "t", "t'", "a'", "a2'"});
  REQUIRE(n.relator_count() == 4);
  // main relator t a t' a' a2'
  REQUIRE(n.relators()[0] == wd({{1, 1}, {0, 1}, {2, 1}, {3, 1}, {4, 1}}));
  // auxiliary relators t' t, a' a, a2' a
  REQUIRE(n.relators()[1] == wd({{2, 1}, {1, 1}}));
  REQUIRE(n.relators()[2] == wd({{3, 1}, {0, 1}}));
  REQUIRE(n.relators()[3] == wd({{4, 1}, {0, 1}}));
  REQUIRE(n.deficiency() == p.deficiency());
  REQUIRE(n.is_normalized());
}

TEST_CASE("normalize_presentation on the commutator") {
  Presentation p = corpus::z2();
  Presentation n = normalize_presentation(p);
  REQUIRE(n.gens() == std::vector<std::string>{"x", "y", "x'", "y'"});
  REQUIRE(n.relator_count() == 3);
  REQUIRE(n.relators()[0] == wd({{0, 1}, {1, 1}, {2, 1}, {3, 1}}));
  REQUIRE(n.deficiency() == p.deficiency());
}

TEST_CASE("normalization invariants across the corpus") {
  for (const Presentation& p : corpus::all()) {
    CAPTURE(p.name());
    Presentation n = normalize_presentation(p);
    REQUIRE(n.deficiency() == p.deficiency());
    REQUIRE(n.is_normalized());
    // substituting the forced generator values recovers trivial relators
    for (const FreeWord& r : n.relators())
      REQUIRE(n.eval_word(r).is_identity());
    // idempotent
    Presentation n2 = normalize_presentation(n);
    REQUIRE(n2.gens() == n.gens());
    REQUIRE(n2.relators() == n.relators());
  }
}

TEST_CASE("presentation validation") {
  GroupClass bs = GroupClass::baumslag_solitar(2);
  // wrong relator for the declared class
  REQUIRE_THROWS_AS(
      Presentation("bad", bs, {"a", "t"}, {wd({{0, 1}, {1, 1}})},
                    OrientationCharacter::trivial(bs), false),
      Error);
  // undeclared generator
  REQUIRE_THROWS_AS(
      Presentation("bad2", bs, {"a", "t"}, {wd({{2, 1}, {2, 1}})},
                    OrientationCharacter::trivial(bs), false),
      Error);
  // empty relator
  REQUIRE_THROWS_AS(Presentation("bad3", bs, {"a", "t"}, {FreeWord()},
                                 OrientationCharacter::trivial(bs), false),
                    Error);
}
