#pragma once

// Exact arithmetic in Z[pi]: sparse elements keyed by canonical norms,
// the w-twisted involution g -> w(g) g^-1, the plain and twisted
// augmentations, and rectangular matrices over the ring.

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gric/words.hpp"

namespace gric {

// Orientation character w : pi -> {+1,-1}, stored on the class generators.
// Construction checks that every defining relator of the class evaluates
// to +1, so w extends to a homomorphism.
class OrientationCharacter {
 public:
  OrientationCharacter(GroupClass cls, std::vector<int> gen_signs)
      : cls_(std::move(cls)), signs_(std::move(gen_signs)) {
    if (static_cast<int>(signs_.size()) != cls_.arity())
      throw Error(ErrorKind::input,
                  "orientation character needs one sign per generator");
    for (int s : signs_)
      if (s != 1 && s != -1)
        throw Error(ErrorKind::input, "orientation signs must be +1 or -1");
    for (const FreeWord& r : cls_.defining_relators())
      if (value(r) != 1)
        throw Error(ErrorKind::input,
                    "orientation character is not a homomorphism: a defining "
                    "relator evaluates to -1");
  }

  static OrientationCharacter trivial(const GroupClass& cls) {
    return OrientationCharacter(cls, std::vector<int>(cls.arity(), 1));
  }

  const GroupClass& group_class() const { return cls_; }
  int sign_of_gen(int i) const {
    cls_.check_gen(i);
    return signs_[i];
  }
  bool is_trivial() const {
    for (int s : signs_)
      if (s < 0) return false;
    return true;
  }

  int value(const FreeWord& w) const {
    int v = 1;
    for (const Letter& l : w.letters())
      if (signs_[l.gen] < 0) v = -v;
    return v;
  }
  int value(const GroupElement& g) const {
    int v = 1;
    for (const auto& [gen, exp] : g.exponent_word())
      if (signs_[gen] < 0 && exp % 2 != 0) v = -v;
    return v;
  }

  friend bool operator==(const OrientationCharacter& a,
                         const OrientationCharacter& b) {
    return a.cls_.same_group(b.cls_) && a.signs_ == b.signs_;
  }

 private:
  GroupClass cls_;
  std::vector<int> signs_;
};

// An element of Z[pi]: finite map from canonical norms to nonzero integers.
class RingElement {
 public:
  explicit RingElement(GroupClass cls) : cls_(std::move(cls)) {}

  static RingElement zero(const GroupClass& cls) { return RingElement(cls); }
  static RingElement one(const GroupClass& cls) {
    return from(GroupElement::identity(cls));
  }
  static RingElement constant(const GroupClass& cls, Int c) {
    RingElement r(cls);
    r.add_term(GroupElement::identity(cls), std::move(c));
    return r;
  }
  static RingElement from(const GroupElement& g, Int c = 1) {
    RingElement r(g.group_class());
    r.add_term(g, std::move(c));
    return r;
  }

  const GroupClass& group_class() const { return cls_; }
  const std::map<GroupElement, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(const GroupElement& g, Int c) {
    if (c == 0) return;
    auto it = terms_.find(g);
    if (it == terms_.end()) {
      terms_.emplace(g, std::move(c));
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Int coefficient(const GroupElement& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Int(0) : it->second;
  }

  RingElement& operator+=(const RingElement& o) {
    check_class(o);
    for (const auto& [g, c] : o.terms_) add_term(g, c);
    return *this;
  }
  RingElement& operator-=(const RingElement& o) {
    check_class(o);
    for (const auto& [g, c] : o.terms_) add_term(g, -c);
    return *this;
  }
  friend RingElement operator+(RingElement a, const RingElement& b) {
    a += b;
    return a;
  }
  friend RingElement operator-(RingElement a, const RingElement& b) {
    a -= b;
    return a;
  }
  friend RingElement operator-(const RingElement& a) {
    RingElement r(a.cls_);
    for (const auto& [g, c] : a.terms_) r.terms_.emplace(g, -c);
    return r;
  }
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    a.check_class(b);
    RingElement r(a.cls_);
    for (const auto& [g, c] : a.terms_)
      for (const auto& [h, d] : b.terms_) r.add_term(multiply(g, h), c * d);
    return r;
  }
  friend RingElement operator*(const Int& c, const RingElement& a) {
    RingElement r(a.cls_);
    if (c == 0) return r;
    for (const auto& [g, d] : a.terms_) r.terms_.emplace(g, c * d);
    return r;
  }
  // left and right translation by a group element
  RingElement translated_left(const GroupElement& g) const {
    RingElement r(cls_);
    for (const auto& [h, c] : terms_) r.add_term(multiply(g, h), c);
    return r;
  }
  RingElement translated_right(const GroupElement& g) const {
    RingElement r(cls_);
    for (const auto& [h, c] : terms_) r.add_term(multiply(h, g), c);
    return r;
  }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return a.cls_.same_group(b.cls_) && a.terms_ == b.terms_;
  }

  std::string text() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [g, c] : terms_) {
      Int a = c < 0 ? Int(-c) : c;
      if (first) {
        if (c < 0) os << "-";
        first = false;
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      if (g.is_identity()) {
        os << a.str();
      } else {
        if (a != 1) os << a.str() << "*";
        os << g.text();
      }
    }
    return os.str();
  }

 private:
  void check_class(const RingElement& o) const {
    if (!cls_.same_group(o.cls_))
      throw Error(ErrorKind::class_mismatch,
                  "ring elements live over different group classes");
  }
  GroupClass cls_;
  std::map<GroupElement, Int> terms_;
};

inline RingElement ring_mul(const RingElement& x, const RingElement& y) {
  return x * y;
}

// x -> conj(x) with conj(g) = w(g) g^-1, extended linearly
inline RingElement involute(const RingElement& x, const OrientationCharacter& w) {
  RingElement r(x.group_class());
  for (const auto& [g, c] : x.terms()) {
    GroupElement gi = invert(g);
    r.add_term(gi, w.value(g) < 0 ? Int(-c) : c);
  }
  return r;
}

inline Int augment(const RingElement& x, bool twisted,
                   const OrientationCharacter& w) {
  Int s = 0;
  for (const auto& [g, c] : x.terms())
    s += (twisted && w.value(g) < 0) ? Int(-c) : c;
  return s;
}

inline Int augment(const RingElement& x) {
  Int s = 0;
  for (const auto& [g, c] : x.terms()) s += c;
  return s;
}

// mod-2 augmentation
inline int epsilon2(const RingElement& x) {
  Int s = augment(x);
  return s % 2 == 0 ? 0 : 1;
}

class RingMatrix {
 public:
  RingMatrix(GroupClass cls, size_t rows, size_t cols)
      : cls_(std::move(cls)),
        rows_(rows),
        cols_(cols),
        entries_(rows * cols, RingElement::zero(cls_)) {}

  static RingMatrix identity(const GroupClass& cls, size_t n) {
    RingMatrix m(cls, n, n);
    for (size_t i = 0; i < n; ++i) m.at(i, i) = RingElement::one(cls);
    return m;
  }

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const GroupClass& group_class() const { return cls_; }

  RingElement& at(size_t i, size_t j) { return entries_[i * cols_ + j]; }
  const RingElement& at(size_t i, size_t j) const {
    return entries_[i * cols_ + j];
  }

  bool is_zero() const {
    for (const RingElement& e : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  friend bool operator==(const RingMatrix& a, const RingMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ &&
           a.cls_.same_group(b.cls_) && a.entries_ == b.entries_;
  }
  friend RingMatrix operator+(const RingMatrix& a, const RingMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error(ErrorKind::shape_mismatch, "matrix sum shape mismatch");
    RingMatrix r = a;
    for (size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] += b.entries_[i];
    return r;
  }
  friend RingMatrix operator-(const RingMatrix& a, const RingMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error(ErrorKind::shape_mismatch, "matrix difference shape mismatch");
    RingMatrix r = a;
    for (size_t i = 0; i < r.entries_.size(); ++i) r.entries_[i] -= b.entries_[i];
    return r;
  }

  RingMatrix transposed() const {
    RingMatrix r(cls_, cols_, rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<std::vector<std::string>> text() const {
    std::vector<std::vector<std::string>> out(rows_);
    for (size_t i = 0; i < rows_; ++i)
      for (size_t j = 0; j < cols_; ++j) out[i].push_back(at(i, j).text());
    return out;
  }

 private:
  GroupClass cls_;
  size_t rows_, cols_;
  std::vector<RingElement> entries_;
};

inline RingMatrix mat_mul(const RingMatrix& a, const RingMatrix& b) {
  if (a.cols() != b.rows())
    throw Error(ErrorKind::shape_mismatch, "matrix product shape mismatch");
  if (!a.group_class().same_group(b.group_class()))
    throw Error(ErrorKind::class_mismatch,
                "matrices live over different group classes");
  RingMatrix r(a.group_class(), a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (size_t j = 0; j < b.cols(); ++j)
        r.at(i, j) += a.at(i, k) * b.at(k, j);
    }
  return r;
}

// (A*)_{ij} = conj(A_{ji})
inline RingMatrix conjugate_transpose(const RingMatrix& a,
                                      const OrientationCharacter& w) {
  RingMatrix r(a.group_class(), a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) r.at(j, i) = involute(a.at(i, j), w);
  return r;
}

}  // namespace gric
