#pragma once

// Canonical word forms for the supported group classes: free, free abelian,
// Klein bottle, hyperbolic surface, Baumslag-Solitar BS(1,m), free-by-cyclic
// and "formal" (free reduction only, word problem left open). Two elements
// of the same class are equal in the group iff their norms compare equal.

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gric/base.hpp"

namespace gric {

struct Letter {
  int32_t gen = 0;
  int8_t sign = 1;  // +1 or -1

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.gen == b.gen && a.sign == b.sign;
  }
  // positive letter sorts before its inverse
  int code() const { return 2 * gen + (sign < 0 ? 1 : 0); }
  Letter inverse() const { return Letter{gen, static_cast<int8_t>(-sign)}; }
};

inline bool operator<(const Letter& a, const Letter& b) {
  return a.code() < b.code();
}

// A freely reduced word in a free group. The constructor reduces, so the
// no-adjacent-cancellation invariant always holds.
class FreeWord {
 public:
  FreeWord() = default;
  explicit FreeWord(std::vector<Letter> letters)
      : letters_(reduce(std::move(letters))) {}

  static FreeWord generator(int gen, int sign = 1) {
    return FreeWord({Letter{gen, static_cast<int8_t>(sign)}});
  }

  size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  const Letter& letter(size_t i) const { return letters_[i]; }

  FreeWord concat(const FreeWord& o) const {
    std::vector<Letter> v = letters_;
    v.insert(v.end(), o.letters_.begin(), o.letters_.end());
    return FreeWord(std::move(v));
  }
  FreeWord inverse() const {
    std::vector<Letter> v;
    v.reserve(letters_.size());
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
      v.push_back(it->inverse());
    return FreeWord(std::move(v));
  }
  FreeWord power(long long e) const {
    FreeWord base = e >= 0 ? *this : inverse();
    FreeWord out;
    for (long long i = 0, n = e >= 0 ? e : -e; i < n; ++i)
      out = out.concat(base);
    return out;
  }

  // image under a substitution sending generator g to images[g]
  FreeWord substitute(const std::vector<FreeWord>& images) const {
    std::vector<Letter> v;
    for (const Letter& l : letters_) {
      assert(l.gen >= 0 && static_cast<size_t>(l.gen) < images.size());
      const FreeWord w = l.sign > 0 ? images[l.gen] : images[l.gen].inverse();
      v.insert(v.end(), w.letters_.begin(), w.letters_.end());
    }
    return FreeWord(std::move(v));
  }

  int max_gen() const {
    int m = -1;
    for (const Letter& l : letters_) m = std::max(m, l.gen);
    return m;
  }

  // order: by length, then lexicographic on letter codes
  int cmp(const FreeWord& o) const {
    if (letters_.size() != o.letters_.size())
      return letters_.size() < o.letters_.size() ? -1 : 1;
    for (size_t i = 0; i < letters_.size(); ++i) {
      int a = letters_[i].code(), b = o.letters_[i].code();
      if (a != b) return a < b ? -1 : 1;
    }
    return 0;
  }
  friend bool operator==(const FreeWord& a, const FreeWord& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator<(const FreeWord& a, const FreeWord& b) {
    return a.cmp(b) < 0;
  }

  static std::vector<Letter> reduce(std::vector<Letter> in) {
    std::vector<Letter> out;
    out.reserve(in.size());
    for (const Letter& l : in) {
      if (!out.empty() && out.back().gen == l.gen && out.back().sign != l.sign)
        out.pop_back();
      else
        out.push_back(l);
    }
    return out;
  }

 private:
  std::vector<Letter> letters_;
};

enum class ClassTag {
  free_group,
  free_abelian,
  klein,
  surface,
  baumslag_solitar,
  free_by_cyclic,
  formal,
};

inline const char* class_tag_name(ClassTag t) {
  switch (t) {
    case ClassTag::free_group: return "free";
    case ClassTag::free_abelian: return "abelian";
    case ClassTag::klein: return "klein";
    case ClassTag::surface: return "surface";
    case ClassTag::baumslag_solitar: return "bs";
    case ClassTag::free_by_cyclic: return "freebycyclic";
    case ClassTag::formal: return "formal";
  }
  return "?";
}

namespace detail {

// Precomputed data for Dehn's algorithm over the symmetrized relator set.
struct SurfaceTables {
  int relator_len = 0;
  int half = 0;
  std::vector<std::vector<Letter>> cyclic;  // cyclic shifts of r and r^-1
};

struct FbcData {
  int rank = 0;
  std::vector<FreeWord> images;
  std::vector<FreeWord> inverse_images;
};

}  // namespace detail

class GroupElement;

class GroupClass {
 public:
  static GroupClass free_group(int n, std::vector<std::string> names = {});
  static GroupClass free_abelian(int n, std::vector<std::string> names = {});
  static GroupClass klein(std::vector<std::string> names = {});
  static GroupClass surface(int genus, bool orientable,
                            std::vector<std::string> names = {});
  static GroupClass baumslag_solitar(long long m,
                                     std::vector<std::string> names = {});
  static GroupClass free_by_cyclic(std::vector<FreeWord> images,
                                   std::vector<std::string> names = {});
  static GroupClass formal(int n, std::vector<std::string> names = {});

  ClassTag tag() const { return d_->tag; }
  int arity() const { return d_->arity; }
  bool supports_equality() const { return d_->tag != ClassTag::formal; }
  bool is_torsion_free() const { return d_->tag != ClassTag::formal; }
  bool is_trivial() const {
    return (d_->tag == ClassTag::free_group ||
            d_->tag == ClassTag::free_abelian ||
            d_->tag == ClassTag::formal) &&
           d_->arity == 0;
  }

  long long bs_multiplier() const { return d_->bs_m; }
  int genus() const { return d_->genus; }
  bool orientable() const { return d_->orientable; }
  int fbc_rank() const { return d_->fbc ? d_->fbc->rank : 0; }
  const detail::FbcData& fbc() const { return *d_->fbc; }
  const detail::SurfaceTables& surface_tables() const { return *d_->surf; }

  const std::string& gen_name(int i) const { return d_->names[i]; }
  const std::vector<std::string>& gen_names() const { return d_->names; }

  // defining relators of the class presentation (empty for free / formal)
  std::vector<FreeWord> defining_relators() const;

  // structural identity of the group class; generator names excluded
  bool same_group(const GroupClass& o) const {
    if (d_ == o.d_) return true;
    if (d_->tag != o.d_->tag || d_->arity != o.d_->arity) return false;
    switch (d_->tag) {
      case ClassTag::surface:
        return d_->genus == o.d_->genus && d_->orientable == o.d_->orientable;
      case ClassTag::baumslag_solitar:
        return d_->bs_m == o.d_->bs_m;
      case ClassTag::free_by_cyclic:
        return d_->fbc->images == o.d_->fbc->images;
      default:
        return true;
    }
  }

  void check_gen(int i) const {
    if (i < 0 || i >= d_->arity)
      throw Error(ErrorKind::input, "generator index " + std::to_string(i) +
                                        " out of range for class " +
                                        class_tag_name(d_->tag));
  }
  void check_word(const FreeWord& w) const {
    for (const Letter& l : w.letters()) check_gen(l.gen);
  }
  void require_equality(const char* what) const {
    if (!supports_equality())
      throw Error(ErrorKind::formal_mode,
                  std::string(what) +
                      " requires a solved word problem; class is formal");
  }

 private:
  struct Data {
    ClassTag tag = ClassTag::free_group;
    int arity = 0;
    int genus = 0;
    bool orientable = true;
    long long bs_m = 0;
    std::shared_ptr<const detail::FbcData> fbc;
    std::shared_ptr<const detail::SurfaceTables> surf;
    std::vector<std::string> names;
  };
  explicit GroupClass(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;

  static std::vector<std::string> default_names(const std::string& stem, int n) {
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(stem + std::to_string(i + 1));
    return v;
  }
  friend class GroupElement;
};

// ---------------------------------------------------------------------------
// norms

struct BSNorm {
  long long tneg = 0;  // p in t^-p a^k t^q, p >= 0
  long long tpos = 0;  // q >= 0
  Int apow = 0;        // k

  friend bool operator==(const BSNorm& a, const BSNorm& b) {
    return a.tneg == b.tneg && a.tpos == b.tpos && a.apow == b.apow;
  }
};

struct KleinNorm {
  Int a = 0, b = 0;  // a^i b^j
  friend bool operator==(const KleinNorm& x, const KleinNorm& y) {
    return x.a == y.a && x.b == y.b;
  }
};

struct FbcNorm {
  long long t = 0;  // t^n u with u a reduced word in the fibre
  FreeWord u;
  friend bool operator==(const FbcNorm& x, const FbcNorm& y) {
    return x.t == y.t && x.u == y.u;
  }
};

class GroupElement {
 public:
  using Norm =
      std::variant<FreeWord, std::vector<Int>, KleinNorm, BSNorm, FbcNorm>;

  GroupElement(GroupClass cls, Norm norm)
      : cls_(std::move(cls)), norm_(std::move(norm)) {}

  static GroupElement identity(const GroupClass& cls);
  static GroupElement generator(const GroupClass& cls, int i, int sign = 1);

  const GroupClass& group_class() const { return cls_; }
  const Norm& norm() const { return norm_; }
  bool is_identity() const;

  // total order on canonical norms within one class
  int cmp(const GroupElement& o) const;
  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.cmp(b) == 0;
  }
  friend bool operator<(const GroupElement& a, const GroupElement& b) {
    return a.cmp(b) < 0;
  }

  // norm as a list of (generator, exponent) factors, left to right
  std::vector<std::pair<int, Int>> exponent_word() const;

  std::string text() const;

 private:
  GroupClass cls_;
  Norm norm_;
};

GroupElement normalize_word(const GroupClass& cls, const FreeWord& word);
GroupElement multiply(const GroupElement& g, const GroupElement& h);
GroupElement invert(const GroupElement& g);

// ---------------------------------------------------------------------------
// implementation

namespace detail {

inline std::vector<FreeWord> invert_automorphism(int rank,
                                                 const std::vector<FreeWord>& images);

inline std::shared_ptr<const SurfaceTables> build_surface_tables(
    int genus, bool orientable, const FreeWord& relator) {
  auto t = std::make_shared<SurfaceTables>();
  (void)genus;
  (void)orientable;
  const auto add_cyclics = [&t](const FreeWord& w) {
    const auto& ls = w.letters();
    int n = static_cast<int>(ls.size());
    for (int s = 0; s < n; ++s) {
      std::vector<Letter> c;
      c.reserve(n);
      for (int i = 0; i < n; ++i) c.push_back(ls[(s + i) % n]);
      if (std::find(t->cyclic.begin(), t->cyclic.end(), c) == t->cyclic.end())
        t->cyclic.push_back(std::move(c));
    }
  };
  add_cyclics(relator);
  add_cyclics(relator.inverse());
  t->relator_len = static_cast<int>(relator.size());
  t->half = t->relator_len / 2;
  return t;
}

}  // namespace detail

inline GroupClass GroupClass::free_group(int n, std::vector<std::string> names) {
  if (n < 0) throw Error(ErrorKind::input, "free group rank must be >= 0");
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::free_group;
  d->arity = n;
  d->names = names.empty() ? default_names("x", n) : std::move(names);
  return GroupClass(std::move(d));
}

inline GroupClass GroupClass::free_abelian(int n, std::vector<std::string> names) {
  if (n < 0) throw Error(ErrorKind::input, "free abelian rank must be >= 0");
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::free_abelian;
  d->arity = n;
  d->names = names.empty() ? default_names("x", n) : std::move(names);
  return GroupClass(std::move(d));
}

inline GroupClass GroupClass::klein(std::vector<std::string> names) {
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::klein;
  d->arity = 2;
  d->names = names.empty() ? std::vector<std::string>{"a", "b"} : std::move(names);
  return GroupClass(std::move(d));
}

inline GroupClass GroupClass::surface(int genus, bool orientable,
                                      std::vector<std::string> names) {
  // Dehn rewriting needs small cancellation: pieces of the symmetrized
  // relator have length 1, so C'(1/6) holds for orientable genus >= 2
  // (|r| = 4g >= 8) and nonorientable genus >= 4 (|r| = 2g >= 8).
  if (orientable && genus < 2)
    throw Error(ErrorKind::input, "orientable surface class needs genus >= 2");
  if (!orientable && genus < 4)
    throw Error(ErrorKind::input,
                "nonorientable surface class needs genus >= 4");
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::surface;
  d->genus = genus;
  d->orientable = orientable;
  if (orientable) {
    d->arity = 2 * genus;
    if (names.empty()) {
      for (int i = 1; i <= genus; ++i) {
        d->names.push_back("a" + std::to_string(i));
        d->names.push_back("b" + std::to_string(i));
      }
    } else {
      d->names = std::move(names);
    }
  } else {
    d->arity = genus;
    d->names = names.empty() ? default_names("a", genus) : std::move(names);
  }
  GroupClass cls(std::make_shared<Data>(*d));
  FreeWord rel = cls.defining_relators().at(0);
  d->surf = detail::build_surface_tables(genus, orientable, rel);
  return GroupClass(std::make_shared<Data>(std::move(*d)));
}

inline GroupClass GroupClass::baumslag_solitar(long long m,
                                               std::vector<std::string> names) {
  if (m == 0)
    throw Error(ErrorKind::input, "BS(1,m) requires m != 0");
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::baumslag_solitar;
  d->arity = 2;
  d->bs_m = m;
  d->names = names.empty() ? std::vector<std::string>{"a", "t"} : std::move(names);
  return GroupClass(std::move(d));
}

inline GroupClass GroupClass::free_by_cyclic(std::vector<FreeWord> images,
                                             std::vector<std::string> names) {
  int rank = static_cast<int>(images.size());
  if (rank < 1)
    throw Error(ErrorKind::input, "free-by-cyclic class needs rank >= 1");
  for (const FreeWord& w : images)
    if (w.max_gen() >= rank)
      throw Error(ErrorKind::input,
                  "automorphism image uses a generator outside the fibre");
  auto fbc = std::make_shared<detail::FbcData>();
  fbc->rank = rank;
  fbc->images = images;
  fbc->inverse_images = detail::invert_automorphism(rank, images);
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::free_by_cyclic;
  d->arity = rank + 1;  // fibre generators then the stable letter t
  d->fbc = std::move(fbc);
  if (names.empty()) {
    d->names = default_names("y", rank);
    d->names.push_back("t");
  } else {
    d->names = std::move(names);
  }
  return GroupClass(std::move(d));
}

inline GroupClass GroupClass::formal(int n, std::vector<std::string> names) {
  if (n < 0) throw Error(ErrorKind::input, "formal class rank must be >= 0");
  auto d = std::make_shared<Data>();
  d->tag = ClassTag::formal;
  d->arity = n;
  d->names = names.empty() ? default_names("x", n) : std::move(names);
  return GroupClass(std::move(d));
}

inline std::vector<FreeWord> GroupClass::defining_relators() const {
  std::vector<FreeWord> rels;
  switch (d_->tag) {
    case ClassTag::free_group:
    case ClassTag::formal:
      break;
    case ClassTag::free_abelian: {
      for (int i = 0; i < d_->arity; ++i)
        for (int j = i + 1; j < d_->arity; ++j) {
          std::vector<Letter> v{{i, 1}, {j, 1}, {i, -1}, {j, -1}};
          rels.emplace_back(std::move(v));
        }
      break;
    }
    case ClassTag::klein: {
      std::vector<Letter> v{{1, 1}, {0, 1}, {1, -1}, {0, 1}};  // b a b^-1 a
      rels.emplace_back(std::move(v));
      break;
    }
    case ClassTag::surface: {
      std::vector<Letter> v;
      if (d_->orientable) {
        for (int i = 0; i < d_->genus; ++i) {
          int a = 2 * i, b = 2 * i + 1;
          v.push_back({a, 1});
          v.push_back({b, 1});
          v.push_back({a, -1});
          v.push_back({b, -1});
        }
      } else {
        for (int i = 0; i < d_->genus; ++i) {
          v.push_back({i, 1});
          v.push_back({i, 1});
        }
      }
      rels.emplace_back(std::move(v));
      break;
    }
    case ClassTag::baumslag_solitar: {
      // t a t^-1 a^-m
      std::vector<Letter> v{{1, 1}, {0, 1}, {1, -1}};
      long long m = d_->bs_m;
      int8_t s = m > 0 ? int8_t{-1} : int8_t{1};
      for (long long i = 0, n = m > 0 ? m : -m; i < n; ++i)
        v.push_back({0, s});
      rels.emplace_back(std::move(v));
      break;
    }
    case ClassTag::free_by_cyclic: {
      int r = d_->fbc->rank;
      for (int i = 0; i < r; ++i) {
        FreeWord lhs = FreeWord::generator(r, 1)
                           .concat(FreeWord::generator(i, 1))
                           .concat(FreeWord::generator(r, -1));
        rels.push_back(lhs.concat(d_->fbc->images[i].inverse()));
      }
      break;
    }
  }
  return rels;
}

// ---------------------------------------------------------------------------
// per-class normalizers

namespace detail {

inline FreeWord fbc_apply(const std::vector<FreeWord>& images, const FreeWord& u) {
  return u.substitute(images);
}

// t^-p a^k t^q accumulator for BS(1,m)
struct BSState {
  long long m;
  long long p = 0, q = 0;
  Int k = 0;
  Int mq = 1;  // m^q

  void feed_a(int sign) { k += sign > 0 ? mq : -mq; }
  void feed_t(int sign) {
    if (sign > 0) {
      ++q;
      mq *= m;
    } else if (q > 0) {
      --q;
      mq /= m;
    } else {
      ++p;
      k *= m;
    }
  }
  BSNorm finish() const {
    BSNorm n{p, q, k};
    while (n.tneg > 0 && n.tpos > 0 && n.apow % m == 0) {
      --n.tneg;
      --n.tpos;
      n.apow /= m;
    }
    return n;
  }
};

inline BSNorm bs_feed_word(long long m, BSNorm base, const FreeWord& w) {
  BSState s{m};
  s.p = base.tneg;
  s.q = base.tpos;
  s.k = base.apow;
  for (long long i = 0; i < base.tpos; ++i) s.mq *= m;
  for (const Letter& l : w.letters()) {
    if (l.gen == 0)
      s.feed_a(l.sign);
    else
      s.feed_t(l.sign);
  }
  return s.finish();
}

inline FreeWord surface_normalize(const SurfaceTables& t, FreeWord w);

}  // namespace detail

inline GroupElement GroupElement::identity(const GroupClass& cls) {
  switch (cls.tag()) {
    case ClassTag::free_group:
    case ClassTag::formal:
    case ClassTag::surface:
      return GroupElement(cls, FreeWord());
    case ClassTag::free_abelian:
      return GroupElement(cls, std::vector<Int>(cls.arity(), 0));
    case ClassTag::klein:
      return GroupElement(cls, KleinNorm{});
    case ClassTag::baumslag_solitar:
      return GroupElement(cls, BSNorm{});
    case ClassTag::free_by_cyclic:
      return GroupElement(cls, FbcNorm{});
  }
  throw Error(ErrorKind::input, "bad class tag");
}

inline GroupElement GroupElement::generator(const GroupClass& cls, int i,
                                            int sign) {
  cls.check_gen(i);
  return normalize_word(cls, FreeWord::generator(i, sign));
}

inline bool GroupElement::is_identity() const {
  return cmp(identity(cls_)) == 0;
}

inline int GroupElement::cmp(const GroupElement& o) const {
  assert(cls_.same_group(o.cls_));
  const Norm& a = norm_;
  const Norm& b = o.norm_;
  if (a.index() != b.index()) return a.index() < b.index() ? -1 : 1;
  struct Cmp {
    const Norm& rhs;
    int operator()(const FreeWord& x) const {
      return x.cmp(std::get<FreeWord>(rhs));
    }
    int operator()(const std::vector<Int>& x) const {
      const auto& y = std::get<std::vector<Int>>(rhs);
      if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
      for (size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
      return 0;
    }
    int operator()(const KleinNorm& x) const {
      const auto& y = std::get<KleinNorm>(rhs);
      if (x.a != y.a) return x.a < y.a ? -1 : 1;
      if (x.b != y.b) return x.b < y.b ? -1 : 1;
      return 0;
    }
    int operator()(const BSNorm& x) const {
      const auto& y = std::get<BSNorm>(rhs);
      if (x.tneg != y.tneg) return x.tneg < y.tneg ? -1 : 1;
      if (x.tpos != y.tpos) return x.tpos < y.tpos ? -1 : 1;
      if (x.apow != y.apow) return x.apow < y.apow ? -1 : 1;
      return 0;
    }
    int operator()(const FbcNorm& x) const {
      const auto& y = std::get<FbcNorm>(rhs);
      if (x.t != y.t) return x.t < y.t ? -1 : 1;
      return x.u.cmp(y.u);
    }
  };
  return std::visit(Cmp{b}, a);
}

inline std::vector<std::pair<int, Int>> GroupElement::exponent_word() const {
  std::vector<std::pair<int, Int>> out;
  const auto push = [&out](int gen, Int e) {
    if (e == 0) return;
    if (!out.empty() && out.back().first == gen) {
      out.back().second += e;
      if (out.back().second == 0) out.pop_back();
    } else {
      out.emplace_back(gen, std::move(e));
    }
  };
  if (const auto* w = std::get_if<FreeWord>(&norm_)) {
    for (const Letter& l : w->letters()) push(l.gen, l.sign);
  } else if (const auto* v = std::get_if<std::vector<Int>>(&norm_)) {
    for (size_t i = 0; i < v->size(); ++i) push(static_cast<int>(i), (*v)[i]);
  } else if (const auto* k = std::get_if<KleinNorm>(&norm_)) {
    push(0, k->a);
    push(1, k->b);
  } else if (const auto* b = std::get_if<BSNorm>(&norm_)) {
    push(1, -Int(b->tneg));
    push(0, b->apow);
    push(1, Int(b->tpos));
  } else if (const auto* f = std::get_if<FbcNorm>(&norm_)) {
    push(cls_.arity() - 1, Int(f->t));
    for (const Letter& l : f->u.letters()) push(l.gen, l.sign);
  }
  return out;
}

inline std::string GroupElement::text() const {
  auto w = exponent_word();
  if (w.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [gen, exp] : w) {
    if (!first) os << '.';
    first = false;
    os << cls_.gen_name(gen);
    if (exp != 1) os << '^' << exp.str();
  }
  return os.str();
}

inline GroupElement normalize_word(const GroupClass& cls, const FreeWord& word) {
  cls.check_word(word);
  switch (cls.tag()) {
    case ClassTag::free_group:
    case ClassTag::formal:
      return GroupElement(cls, word);  // already freely reduced
    case ClassTag::free_abelian: {
      std::vector<Int> v(cls.arity(), 0);
      for (const Letter& l : word.letters()) v[l.gen] += l.sign;
      return GroupElement(cls, std::move(v));
    }
    case ClassTag::klein: {
      // b a b^-1 = a^-1, normal form a^i b^j
      KleinNorm n;
      for (const Letter& l : word.letters()) {
        if (l.gen == 0)
          n.a += (n.b % 2 == 0) ? Int(l.sign) : Int(-l.sign);
        else
          n.b += l.sign;
      }
      return GroupElement(cls, n);
    }
    case ClassTag::baumslag_solitar:
      return GroupElement(
          cls, detail::bs_feed_word(cls.bs_multiplier(), BSNorm{}, word));
    case ClassTag::surface:
      return GroupElement(cls,
                          detail::surface_normalize(cls.surface_tables(), word));
    case ClassTag::free_by_cyclic: {
      const auto& fbc = cls.fbc();
      FbcNorm n;
      for (const Letter& l : word.letters()) {
        if (l.gen < fbc.rank) {
          n.u = n.u.concat(FreeWord::generator(l.gen, l.sign));
        } else if (l.sign > 0) {
          ++n.t;
          n.u = detail::fbc_apply(fbc.inverse_images, n.u);
        } else {
          --n.t;
          n.u = detail::fbc_apply(fbc.images, n.u);
        }
      }
      return GroupElement(cls, n);
    }
  }
  throw Error(ErrorKind::input, "bad class tag");
}

inline GroupElement multiply(const GroupElement& g, const GroupElement& h) {
  if (!g.group_class().same_group(h.group_class()))
    throw Error(ErrorKind::class_mismatch,
                "cannot multiply elements of different group classes");
  const GroupClass& cls = g.group_class();
  switch (cls.tag()) {
    case ClassTag::free_group:
    case ClassTag::formal:
      return GroupElement(
          cls, std::get<FreeWord>(g.norm()).concat(std::get<FreeWord>(h.norm())));
    case ClassTag::free_abelian: {
      auto v = std::get<std::vector<Int>>(g.norm());
      const auto& w = std::get<std::vector<Int>>(h.norm());
      for (size_t i = 0; i < v.size(); ++i) v[i] += w[i];
      return GroupElement(cls, std::move(v));
    }
    case ClassTag::klein: {
      const auto& x = std::get<KleinNorm>(g.norm());
      const auto& y = std::get<KleinNorm>(h.norm());
      KleinNorm n;
      n.a = x.a + ((x.b % 2 == 0) ? y.a : -y.a);
      n.b = x.b + y.b;
      return GroupElement(cls, n);
    }
    case ClassTag::baumslag_solitar: {
      const long long m = cls.bs_multiplier();
      const auto& x = std::get<BSNorm>(g.norm());
      const auto& y = std::get<BSNorm>(h.norm());
      // t^-p a^k t^q . t^-p' a^k' t^q'
      BSNorm n;
      Int k = x.apow, k2 = y.apow;
      long long p = x.tneg, q = x.tpos, p2 = y.tneg, q2 = y.tpos;
      if (q >= p2) {
        long long d = q - p2;
        Int md = 1;
        for (long long i = 0; i < d; ++i) md *= m;
        n.tneg = p;
        n.apow = k + k2 * md;
        n.tpos = d + q2;
      } else {
        long long d = p2 - q;
        Int md = 1;
        for (long long i = 0; i < d; ++i) md *= m;
        n.tneg = p + d;
        n.apow = k * md + k2;
        n.tpos = q2;
      }
      while (n.tneg > 0 && n.tpos > 0 && n.apow % m == 0) {
        --n.tneg;
        --n.tpos;
        n.apow /= m;
      }
      return GroupElement(cls, n);
    }
    case ClassTag::surface: {
      const FreeWord w =
          std::get<FreeWord>(g.norm()).concat(std::get<FreeWord>(h.norm()));
      return GroupElement(cls,
                          detail::surface_normalize(cls.surface_tables(), w));
    }
    case ClassTag::free_by_cyclic: {
      const auto& fbc = cls.fbc();
      const auto& x = std::get<FbcNorm>(g.norm());
      const auto& y = std::get<FbcNorm>(h.norm());
      // t^n u . t^n' u' = t^(n+n') alpha^(-n')(u) u'
      FbcNorm n;
      n.t = x.t + y.t;
      FreeWord u = x.u;
      long long shift = y.t;
      const auto& sub = shift >= 0 ? fbc.inverse_images : fbc.images;
      for (long long i = 0, c = shift >= 0 ? shift : -shift; i < c; ++i)
        u = detail::fbc_apply(sub, u);
      n.u = u.concat(y.u);
      return GroupElement(cls, n);
    }
  }
  throw Error(ErrorKind::input, "bad class tag");
}

inline GroupElement invert(const GroupElement& g) {
  const GroupClass& cls = g.group_class();
  switch (cls.tag()) {
    case ClassTag::free_group:
    case ClassTag::formal:
      return GroupElement(cls, std::get<FreeWord>(g.norm()).inverse());
    case ClassTag::free_abelian: {
      auto v = std::get<std::vector<Int>>(g.norm());
      for (Int& x : v) x = -x;
      return GroupElement(cls, std::move(v));
    }
    case ClassTag::klein: {
      const auto& n = std::get<KleinNorm>(g.norm());
      KleinNorm r;
      r.b = -n.b;
      r.a = (n.b % 2 == 0) ? -n.a : n.a;
      return GroupElement(cls, r);
    }
    case ClassTag::baumslag_solitar: {
      const auto& n = std::get<BSNorm>(g.norm());
      BSNorm r{n.tpos, n.tneg, -n.apow};
      return GroupElement(cls, r);
    }
    case ClassTag::surface: {
      const FreeWord w = std::get<FreeWord>(g.norm()).inverse();
      return GroupElement(cls,
                          detail::surface_normalize(cls.surface_tables(), w));
    }
    case ClassTag::free_by_cyclic: {
      const auto& fbc = cls.fbc();
      const auto& n = std::get<FbcNorm>(g.norm());
      // (t^n u)^-1 = t^-n alpha^n(u^-1)
      FreeWord u = n.u.inverse();
      const auto& sub = n.t >= 0 ? fbc.images : fbc.inverse_images;
      for (long long i = 0, c = n.t >= 0 ? n.t : -n.t; i < c; ++i)
        u = detail::fbc_apply(sub, u);
      return GroupElement(cls, FbcNorm{-n.t, u});
    }
  }
  throw Error(ErrorKind::input, "bad class tag");
}

// ---------------------------------------------------------------------------
// Dehn's algorithm for surface groups

namespace detail {

inline int common_prefix(const std::vector<Letter>& w, size_t at,
                         const std::vector<Letter>& c) {
  int n = 0;
  while (at + n < w.size() && n < static_cast<int>(c.size()) &&
         w[at + n] == c[n])
    ++n;
  return n;
}

inline std::vector<Letter> splice(const std::vector<Letter>& w, size_t at,
                                  int take, const std::vector<Letter>& repl) {
  std::vector<Letter> out(w.begin(), w.begin() + at);
  out.insert(out.end(), repl.begin(), repl.end());
  out.insert(out.end(), w.begin() + at + take, w.end());
  return FreeWord::reduce(std::move(out));
}

inline std::vector<Letter> complement_inverse(const std::vector<Letter>& c,
                                              int take) {
  // c = u v with |u| = take; return v^-1
  std::vector<Letter> out;
  for (int i = static_cast<int>(c.size()) - 1; i >= take; --i)
    out.push_back(c[i].inverse());
  return out;
}

// Shorten until no subword covers more than half of a symmetrized relator.
inline std::vector<Letter> dehn_shorten(const SurfaceTables& t,
                                        std::vector<Letter> w) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t at = 0; at < w.size() && !changed; ++at) {
      for (const auto& c : t.cyclic) {
        int n = common_prefix(w, at, c);
        if (n > t.half) {
          w = splice(w, at, n, complement_inverse(c, n));
          changed = true;
          break;
        }
      }
    }
  }
  return w;
}

inline FreeWord surface_normalize(const SurfaceTables& t, FreeWord word) {
  std::vector<Letter> w = word.letters();
  for (;;) {
    w = dehn_shorten(t, w);
    // explore the equal-length class reachable by half-relator swaps
    std::set<std::vector<Letter>> seen{w};
    std::deque<std::vector<Letter>> queue{w};
    std::optional<std::vector<Letter>> shorter;
    while (!queue.empty() && !shorter) {
      std::vector<Letter> u = queue.front();
      queue.pop_front();
      for (size_t at = 0; at + t.half <= u.size() && !shorter; ++at) {
        for (const auto& c : t.cyclic) {
          int n = common_prefix(u, at, c);
          if (n < t.half) continue;
          // a swap can expose a match past the halfway mark; that word
          // shortens, so restart from it
          int take = n > t.half ? n : t.half;
          std::vector<Letter> v = splice(u, at, take, complement_inverse(c, take));
          if (v.size() < u.size()) {
            shorter = std::move(v);
            break;
          }
          if (seen.size() > 500000)
            throw Error(ErrorKind::unsupported,
                        "surface normal form search exceeded state budget");
          if (seen.insert(v).second) queue.push_back(std::move(v));
        }
      }
    }
    if (shorter) {
      w = std::move(*shorter);
      continue;
    }
    // lexicographically least geodesic representative
    const auto lex_less = [](const std::vector<Letter>& a,
                             const std::vector<Letter>& b) {
      for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].code() != b[i].code()) return a[i].code() < b[i].code();
      }
      return false;
    };
    std::vector<Letter> best = w;
    for (const auto& u : seen)
      if (lex_less(u, best)) best = u;
    return FreeWord(std::move(best));
  }
}

// ---------------------------------------------------------------------------
// Nielsen inversion of a free group automorphism given by generator images.

struct NielsenMove {
  enum Kind { inv, mul_right, mul_left } kind;
  int i = 0, j = 0;
  int sign = 1;
};

inline FreeWord apply_move_to_word(const NielsenMove& m, const FreeWord& w) {
  std::vector<Letter> out;
  for (const Letter& l : w.letters()) {
    if (l.gen != m.i) {
      out.push_back(l);
      continue;
    }
    switch (m.kind) {
      case NielsenMove::inv:
        out.push_back(l.inverse());
        break;
      case NielsenMove::mul_right:
        // y_i -> y_i y_j^s
        if (l.sign > 0) {
          out.push_back(l);
          out.push_back({m.j, static_cast<int8_t>(m.sign)});
        } else {
          out.push_back({m.j, static_cast<int8_t>(-m.sign)});
          out.push_back(l);
        }
        break;
      case NielsenMove::mul_left:
        // y_i -> y_j^s y_i
        if (l.sign > 0) {
          out.push_back({m.j, static_cast<int8_t>(m.sign)});
          out.push_back(l);
        } else {
          out.push_back(l);
          out.push_back({m.j, static_cast<int8_t>(-m.sign)});
        }
        break;
    }
  }
  return FreeWord(std::move(out));
}

inline std::vector<FreeWord> invert_automorphism(
    int rank, const std::vector<FreeWord>& images) {
  std::vector<FreeWord> w = images;
  std::vector<NielsenMove> moves;
  // greedy Nielsen reduction of the image tuple
  for (;;) {
    bool improved = false;
    for (int i = 0; i < rank && !improved; ++i) {
      for (int j = 0; j < rank && !improved; ++j) {
        if (i == j) continue;
        for (int s : {1, -1}) {
          FreeWord cand = w[i].concat(s > 0 ? w[j] : w[j].inverse());
          if (cand.size() < w[i].size()) {
            w[i] = cand;
            moves.push_back({NielsenMove::mul_right, i, j, s});
            improved = true;
            break;
          }
          cand = (s > 0 ? w[j] : w[j].inverse()).concat(w[i]);
          if (cand.size() < w[i].size()) {
            w[i] = cand;
            moves.push_back({NielsenMove::mul_left, i, j, s});
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) break;
  }
  // expect a signed permutation of the basis
  std::vector<int> perm(rank, -1), sign(rank, 1);
  std::vector<bool> hit(rank, false);
  for (int i = 0; i < rank; ++i) {
    if (w[i].size() != 1)
      throw Error(ErrorKind::input,
                  "generator images do not define an automorphism "
                  "(Nielsen reduction did not reach a basis)");
    const Letter& l = w[i].letter(0);
    if (hit[l.gen])
      throw Error(ErrorKind::input,
                  "generator images do not define an automorphism");
    hit[l.gen] = true;
    perm[i] = l.gen;
    sign[i] = l.sign;
  }
  // alpha o N_1 o ... o N_k = rho with rho(y_i) = y_perm(i)^sign(i);
  // hence alpha^-1 = N_1 o ... o N_k o rho^-1
  std::vector<FreeWord> inv(rank);
  for (int target = 0; target < rank; ++target) {
    int i = 0;
    while (perm[i] != target) ++i;
    FreeWord word = FreeWord::generator(i, sign[i]);
    for (auto it = moves.rbegin(); it != moves.rend(); ++it)
      word = apply_move_to_word(*it, word);
    inv[target] = word;
  }
  // sanity: alpha(alpha^-1(y)) = y and alpha^-1(alpha(y)) = y
  for (int i = 0; i < rank; ++i) {
    if (!(inv[i].substitute(images) == FreeWord::generator(i, 1)) ||
        !(images[i].substitute(inv) == FreeWord::generator(i, 1)))
      throw Error(ErrorKind::input,
                  "generator images do not define an automorphism "
                  "(inverse check failed)");
  }
  return inv;
}

}  // namespace detail

}  // namespace gric
