#include "catch_amalgamated.hpp"

#include <fstream>
#include <sstream>

#include "gric/corpus.hpp"
#include "gric/io.hpp"

using namespace gric;

namespace {

const char* kBs12 =
    "name: bs12\n"
    "class: bs 1 2\n"
    "gens: a t\n"
    "rels:\n"
    "t a t^-1 a^-2\n"
    "aspherical: true\n";

const char* kKlein =
    "name: klein\n"
    "class: klein\n"
    "gens: a b\n"
    "rels:\n"
    "b a b^-1 a\n"
    "w: b -1\n"
    "aspherical: true\n";

}  // namespace

TEST_CASE("parse the BS file") {
  Presentation p = parse_presentation(kBs12);
  REQUIRE(p.name() == "bs12");
  REQUIRE(p.group_class().tag() == ClassTag::baumslag_solitar);
  REQUIRE(p.group_class().bs_multiplier() == 2);
  REQUIRE(p.relator_count() == 1);
  REQUIRE(p.deficiency() == 1);
  REQUIRE(p.aspherical());
  REQUIRE(p.relators()[0] == corpus::bs(2).relators()[0]);
}

TEST_CASE("parse errors") {
  // undeclared generator
  REQUIRE_THROWS_AS(parse_presentation("name: x\nclass: free 2\ngens: a b\n"
                                       "rels:\na c\n"),
                    Error);
  // unknown class tag
  REQUIRE_THROWS_AS(
      parse_presentation("name: x\nclass: nilpotent 2\ngens: a b\nrels:\n"),
      Error);
  // w not a homomorphism on the presented group: relator t with w(t) = -1
  REQUIRE_THROWS_AS(parse_presentation("name: x\nclass: formal 2\ngens: a t\n"
                                       "rels:\nt\nw: t -1\n"),
                    Error);
  // but w(tt) = 1 is fine
  REQUIRE_NOTHROW(parse_presentation("name: x\nclass: formal 2\ngens: a t\n"
                                     "rels:\nt t\nw: t -1\n"));
  // relator not trivial in the declared class
  REQUIRE_THROWS_AS(parse_presentation("name: x\nclass: bs 1 2\ngens: a t\n"
                                       "rels:\nt a\n"),
                    Error);
}

TEST_CASE("parse/render round trip is a fixed point") {
  for (const char* text : {kBs12, kKlein}) {
    Presentation p1 = parse_presentation(text);
    std::string r1 = render_presentation(p1);
    Presentation p2 = parse_presentation(r1);
    REQUIRE(render_presentation(p2) == r1);
    REQUIRE(p2.gens() == p1.gens());
    REQUIRE(p2.relators() == p1.relators());
  }
  // normalized presentations render deterministically (display only; the
  // file format itself describes class-arity presentations)
  Presentation n = normalize_presentation(parse_presentation(kBs12));
  REQUIRE(render_presentation(n) ==
          render_presentation(normalize_presentation(parse_presentation(kBs12))));
}

TEST_CASE("parsed corpus matches the built-in corpus") {
  std::vector<std::string> files = {"z2",       "klein", "bs12",
                                    "bs13",     "surface2", "fbc"};
  std::vector<Presentation> builtin = corpus::all();
  for (size_t i = 0; i < files.size(); ++i) {
    std::ifstream in("corpus/" + files[i] + ".pres");
    if (!in) {
      // running from another directory: the file check is covered by the
      // cli selftest instead
      SUCCEED();
      continue;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    Presentation p = parse_presentation(ss.str());
    REQUIRE(p.name() == builtin[i].name());
    REQUIRE(p.gens() == builtin[i].gens());
    REQUIRE(p.relators() == builtin[i].relators());
    for (int g = 0; g < p.gen_count(); ++g)
      REQUIRE(p.w_of_gen(g) == builtin[i].w_of_gen(g));
  }
}

TEST_CASE("ring element expressions") {
  GroupClass f = GroupClass::free_group(2, {"a", "t"});
  RingElement x = parse_ring_element("1 - t.a^-2", f);
  REQUIRE(x.text() == "1 - t.a^-2");
  REQUIRE(parse_ring_element(x.text(), f) == x);

  RingElement y = parse_ring_element("-2 + 3*a.t + a^-1", f);
  REQUIRE(parse_ring_element(y.text(), f) == y);
  REQUIRE(augment(y) == 2);

  REQUIRE(parse_ring_element("0", f).is_zero());
  REQUIRE(parse_ring_element("  ", f).is_zero());
  REQUIRE_THROWS_AS(parse_ring_element("a +", f), Error);
  REQUIRE_THROWS_AS(parse_ring_element("q", f), Error);
}

TEST_CASE("gamma and hermitian JSON round trips") {
  GroupClass bs = GroupClass::baumslag_solitar(2, {"a", "t"});
  OrientationCharacter w = OrientationCharacter::trivial(bs);

  GammaElement x(bs, w, 2);
  x.add_gamma(unit_vector(bs, 2, 0), 3);
  x.add_odot(unit_vector(bs, 2, 0, parse_ring_element("1 - t", bs)),
             unit_vector(bs, 2, 1), -2);
  Json jx = gamma_json(x);
  GammaElement x2 = gamma_from_json(jx, bs, w);
  REQUIRE(nf_equal(x, x2));
  REQUIRE(bm_evaluate(x) == bm_evaluate(x2));

  HermitianForm h = bm_evaluate(x);
  Json jh = hermitian_json(h);
  HermitianForm h2 = hermitian_from_json(jh, bs, w);
  REQUIRE(h == h2);
}

TEST_CASE("class spec JSON") {
  Json spec;
  spec["class"] = "bs 1 3";
  spec["gens"] = {"a", "t"};
  spec["w"] = {{"t", -1}};
  auto [cls, w] = parse_class_spec(spec);
  REQUIRE(cls.tag() == ClassTag::baumslag_solitar);
  REQUIRE(cls.bs_multiplier() == 3);
  REQUIRE(w.sign_of_gen(1) == -1);
  REQUIRE(w.sign_of_gen(0) == 1);
}

TEST_CASE("digest is stable") {
  REQUIRE(content_digest("abc") == content_digest("abc"));
  REQUIRE(content_digest("abc") != content_digest("abd"));
}
