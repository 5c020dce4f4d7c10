#pragma once

// Free differential calculus, presentation handling and the equivariant
// chain complex of a finite presentation: d1 with entries phi(x_i) - 1,
// d2 with entries phi(dw_j/dx_i), the dual presentation of the cokernel
// of the conjugate-transposed d2, and the relator normalization that
// rewrites every relator as a product of distinct positive generators.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gric/groupring.hpp"

namespace gric {

// A finite presentation together with its target group class.
// gen_images sends each presentation generator to a canonical group
// element; for a plain presentation this is the identity assignment,
// for normalized presentations the auxiliary generators map to the
// inverses / copies they are forced equal to.
class Presentation {
 public:
  Presentation(std::string name, GroupClass cls, std::vector<std::string> gens,
               std::vector<FreeWord> relators, OrientationCharacter w,
               bool aspherical)
      : Presentation(std::move(name), std::move(cls), std::move(gens),
                     std::move(relators), std::move(w), aspherical, {}) {}

  Presentation(std::string name, GroupClass cls, std::vector<std::string> gens,
               std::vector<FreeWord> relators, OrientationCharacter w,
               bool aspherical, std::vector<GroupElement> gen_images)
      : name_(std::move(name)),
        cls_(std::move(cls)),
        gens_(std::move(gens)),
        relators_(std::move(relators)),
        w_(std::move(w)),
        aspherical_(aspherical),
        gen_images_(std::move(gen_images)) {
    if (gen_images_.empty()) {
      if (static_cast<int>(gens_.size()) != cls_.arity())
        throw Error(ErrorKind::input,
                    "presentation generator count does not match the class");
      for (int i = 0; i < cls_.arity(); ++i)
        gen_images_.push_back(GroupElement::generator(cls_, i));
    }
    if (gen_images_.size() != gens_.size())
      throw Error(ErrorKind::input, "one image per generator required");
    for (const FreeWord& r : relators_) {
      if (r.empty())
        throw Error(ErrorKind::input, "relators must be nonempty words");
      if (r.max_gen() >= static_cast<int>(gens_.size()))
        throw Error(ErrorKind::input, "relator uses an undeclared generator");
      if (w_of_word(r) != 1)
        throw Error(ErrorKind::input,
                    "orientation character is not a homomorphism on the "
                    "presented group: relator evaluates to -1");
      if (cls_.supports_equality() && !eval_word(r).is_identity())
        throw Error(ErrorKind::input,
                    "relator is not trivial in the declared group class");
    }
  }

  const std::string& name() const { return name_; }
  const GroupClass& group_class() const { return cls_; }
  const std::vector<std::string>& gens() const { return gens_; }
  const std::vector<FreeWord>& relators() const { return relators_; }
  const OrientationCharacter& w() const { return w_; }
  bool aspherical() const { return aspherical_; }
  const std::vector<GroupElement>& gen_images() const { return gen_images_; }

  int gen_count() const { return static_cast<int>(gens_.size()); }
  int relator_count() const { return static_cast<int>(relators_.size()); }
  int deficiency() const { return gen_count() - relator_count(); }

  // free group on the presentation generators (domain of Fox derivatives)
  GroupClass free_cover() const {
    return GroupClass::free_group(gen_count(), gens_);
  }

  GroupElement eval_word(const FreeWord& word) const {
    GroupElement g = GroupElement::identity(cls_);
    for (const Letter& l : word.letters()) {
      const GroupElement& im = gen_images_[l.gen];
      g = multiply(g, l.sign > 0 ? im : invert(im));
    }
    return g;
  }

  // phi extended linearly to the free group ring
  RingElement eval_ring(const RingElement& x) const {
    RingElement out(cls_);
    for (const auto& [g, c] : x.terms())
      out.add_term(eval_word(std::get<FreeWord>(g.norm())), c);
    return out;
  }

  int w_of_gen(int i) const { return w_.value(gen_images_[i]); }
  int w_of_word(const FreeWord& word) const {
    int v = 1;
    for (const Letter& l : word.letters())
      if (w_of_gen(l.gen) < 0) v = -v;
    return v;
  }

  // every relator a product of distinct generators, all exponents +1
  bool is_normalized() const {
    for (const FreeWord& r : relators_) {
      std::vector<bool> used(gens_.size(), false);
      for (const Letter& l : r.letters()) {
        if (l.sign < 0 || used[l.gen]) return false;
        used[l.gen] = true;
      }
    }
    return true;
  }

  std::string render() const;

 private:
  std::string name_;
  GroupClass cls_;
  std::vector<std::string> gens_;
  std::vector<FreeWord> relators_;
  OrientationCharacter w_;
  bool aspherical_;
  std::vector<GroupElement> gen_images_;
};

// dw/dx in Z[F(X)], by the Leibniz rule: scanning w = l_1 ... l_n with
// growing prefix u, a letter x contributes u and a letter x^-1
// contributes -u x^-1.
inline RingElement fox_derivative(const GroupClass& free_cls, const FreeWord& w,
                                  int gen) {
  if (free_cls.tag() != ClassTag::free_group &&
      free_cls.tag() != ClassTag::formal)
    throw Error(ErrorKind::input, "fox derivatives live over a free group ring");
  free_cls.check_gen(gen);
  free_cls.check_word(w);
  RingElement acc(free_cls);
  GroupElement prefix = GroupElement::identity(free_cls);
  for (const Letter& l : w.letters()) {
    if (l.gen == gen) {
      if (l.sign > 0) {
        acc.add_term(prefix, 1);
      } else {
        acc.add_term(
            multiply(prefix, GroupElement::generator(free_cls, gen, -1)), -1);
      }
    }
    prefix = multiply(prefix, GroupElement::generator(free_cls, l.gen, l.sign));
  }
  return acc;
}

// linear extension to Z[F(X)]
inline RingElement fox_derivative(const RingElement& x, int gen) {
  RingElement acc(x.group_class());
  for (const auto& [g, c] : x.terms())
    acc += c * fox_derivative(x.group_class(), std::get<FreeWord>(g.norm()), gen);
  return acc;
}

// Equivariant chain complex of the presentation: d1 is the g x 1 column of
// the phi(x_i) - 1, d2 the g x r matrix with (i,j) entry phi(dw_j/dx_i).
// Composition uses left coefficients, so the boundary-squared composite is
// the r-vector with entries sum_i d2[i][j] (x_i - 1).
struct FoxComplex {
  Presentation pres;
  RingMatrix d1;  // g x 1
  RingMatrix d2;  // g x r
  bool verified;  // false for formal classes (word problem open)
};

inline FoxComplex fox_lyndon_complex(const Presentation& p) {
  const GroupClass& cls = p.group_class();
  const GroupClass free_cls = p.free_cover();
  const int g = p.gen_count();
  const int r = p.relator_count();
  RingMatrix d1(cls, g, 1);
  for (int i = 0; i < g; ++i)
    d1.at(i, 0) = RingElement::from(p.gen_images()[i]) - RingElement::one(cls);
  RingMatrix d2(cls, g, r);
  for (int j = 0; j < r; ++j)
    for (int i = 0; i < g; ++i)
      d2.at(i, j) = p.eval_ring(fox_derivative(free_cls, p.relators()[j], i));
  return FoxComplex{p, std::move(d1), std::move(d2), cls.supports_equality()};
}

struct BoundaryReport {
  RingMatrix composite;  // r x 1
  bool zero;
};

inline BoundaryReport verify_boundary_squared(const FoxComplex& c) {
  c.pres.group_class().require_equality("boundary verification");
  RingMatrix composite = mat_mul(c.d2.transposed(), c.d1);
  return BoundaryReport{composite, composite.is_zero()};
}

// Presentation matrix of the conjugate dual of the cokernel of d2:
// rows indexed by relators, columns by generators.
inline RingMatrix dualizing_presentation(const FoxComplex& c) {
  if (!c.pres.aspherical())
    throw Error(ErrorKind::not_aspherical,
                "presentation not asserted aspherical");
  return conjugate_transpose(c.d2, c.pres.w());
}

// Rewrite every relator as a product of distinct positive generators by
// introducing auxiliary generators: x' with relator x'x for inverses,
// x_k (relator x_k x') for repeated positive occurrences and x_k' (relator
// x_k' x) for repeated negative ones. Each auxiliary relator is itself a
// product of two distinct positive generators, so the scheme closes.
// Deficiency is preserved and the presented group is unchanged.
inline Presentation normalize_presentation(const Presentation& p) {
  if (p.is_normalized()) return p;

  std::vector<std::string> gens = p.gens();
  std::vector<GroupElement> images = p.gen_images();
  std::vector<FreeWord> out_rels;
  std::vector<FreeWord> aux_rels;

  const int base = p.gen_count();
  // per base generator: index of x', list of positive copies x_k,
  // list of negative copies x_k'
  std::vector<int> primed(base, -1);
  std::vector<std::vector<int>> pos_copies(base), neg_copies(base);

  const auto add_gen = [&](const std::string& name, const GroupElement& image)
      -> int {
    gens.push_back(name);
    images.push_back(image);
    return static_cast<int>(gens.size()) - 1;
  };
  const auto ensure_primed = [&](int x) -> int {
    if (primed[x] < 0) {
      primed[x] = add_gen(p.gens()[x] + "'", invert(p.gen_images()[x]));
      aux_rels.push_back(FreeWord(
          {Letter{primed[x], 1}, Letter{x, 1}}));  // x' x
    }
    return primed[x];
  };

  for (const FreeWord& rel : p.relators()) {
    std::vector<int> pos_seen(base, 0), neg_seen(base, 0);
    std::vector<Letter> out;
    for (const Letter& l : rel.letters()) {
      const int x = l.gen;
      if (l.sign > 0) {
        int k = pos_seen[x]++;
        if (k == 0) {
          out.push_back({x, 1});
        } else {
          int xp = ensure_primed(x);
          while (static_cast<int>(pos_copies[x].size()) < k) {
            int copy = add_gen(
                p.gens()[x] + std::to_string(pos_copies[x].size() + 2),
                p.gen_images()[x]);
            pos_copies[x].push_back(copy);
            aux_rels.push_back(
                FreeWord({Letter{copy, 1}, Letter{xp, 1}}));  // x_k x'
          }
          out.push_back({pos_copies[x][k - 1], 1});
        }
      } else {
        int k = neg_seen[x]++;
        if (k == 0) {
          out.push_back({ensure_primed(x), 1});
        } else {
          while (static_cast<int>(neg_copies[x].size()) < k) {
            int copy = add_gen(
                p.gens()[x] + std::to_string(neg_copies[x].size() + 2) + "'",
                invert(p.gen_images()[x]));
            neg_copies[x].push_back(copy);
            aux_rels.push_back(
                FreeWord({Letter{copy, 1}, Letter{x, 1}}));  // x_k' x
          }
          out.push_back({neg_copies[x][k - 1], 1});
        }
      }
    }
    out_rels.push_back(FreeWord(std::move(out)));
  }
  out_rels.insert(out_rels.end(), aux_rels.begin(), aux_rels.end());
  return Presentation(p.name() + "-normalized", p.group_class(), std::move(gens),
                      std::move(out_rels), p.w(), p.aspherical(),
                      std::move(images));
}

inline std::string Presentation::render() const {
  std::ostringstream os;
  os << "name: " << name_ << "\n";
  os << "class: ";
  switch (cls_.tag()) {
    case ClassTag::free_group:
      os << "free " << cls_.arity();
      break;
    case ClassTag::free_abelian:
      os << "abelian " << cls_.arity();
      break;
    case ClassTag::klein:
      os << "klein";
      break;
    case ClassTag::surface:
      os << "surface " << cls_.genus() << ' '
         << (cls_.orientable() ? "orientable" : "nonorientable");
      break;
    case ClassTag::baumslag_solitar:
      os << "bs 1 " << cls_.bs_multiplier();
      break;
    case ClassTag::free_by_cyclic: {
      os << "freebycyclic " << cls_.fbc_rank();
      for (const FreeWord& im : cls_.fbc().images) {
        os << ' ';
        bool first = true;
        std::ostringstream ws;
        for (const Letter& l : im.letters()) {
          if (!first) ws << '.';
          first = false;
          ws << cls_.gen_name(l.gen);
          if (l.sign < 0) ws << "^-1";
        }
        os << (im.empty() ? "1" : ws.str());
      }
      break;
    }
    case ClassTag::formal:
      os << "formal " << cls_.arity();
      break;
  }
  os << "\ngens:";
  for (const std::string& g : gens_) os << ' ' << g;
  os << "\nrels:\n";
  for (const FreeWord& r : relators_) {
    bool first = true;
    const auto& ls = r.letters();
    for (size_t i = 0; i < ls.size();) {
      size_t j = i;
      while (j < ls.size() && ls[j] == ls[i]) ++j;
      if (!first) os << ' ';
      first = false;
      os << gens_[ls[i].gen];
      long long e = static_cast<long long>(j - i) * ls[i].sign;
      if (e != 1) os << '^' << e;
      i = j;
    }
    os << "\n";
  }
  bool any_w = false;
  for (int i = 0; i < gen_count(); ++i)
    if (w_of_gen(i) < 0) any_w = true;
  if (any_w) {
    os << "w:";
    for (int i = 0; i < gen_count(); ++i)
      if (w_of_gen(i) < 0) os << ' ' << gens_[i] << " -1";
    os << "\n";
  }
  if (aspherical_) os << "aspherical: true\n";
  return os.str();
}

}  // namespace gric
