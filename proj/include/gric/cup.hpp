#pragma once

// The dual resolution of a normalized presentation and the explicit chain
// homotopy equivalence j from it into the tensor square bicomplex, with
// exact verification of the chain map identities. Conventions:
//   - the presentation complex P has bases p0 (degree 0), p1_x, p2_r;
//   - the dual complex carries q0_r, q1_x and the degree-2 generator 1*;
//   - differentials on the dual side pick up the involution:
//       d 1*   = sum_x (conj(x) - 1) q1_x,
//       d q1_x = sum_r conj(r_x) q0_r,   r_x = phi(dr/dx);
//   - the tensor square carries the diagonal action and the Koszul sign,
//       d(a (x) b) = da (x) b + (-1)^deg(a) a (x) db.

#include <array>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gric/fox.hpp"

namespace gric {

struct DualComplex {
  Presentation pres;
  RingMatrix from_top;   // 1 x g: coefficients of d(1*) on the q1 basis
  RingMatrix to_bottom;  // g x r: coefficients of d(q1_x) on the q0 basis
};

// basis element u p_i of degree pdeg tensored with v q_j of degree qdeg
struct TensorKey {
  int pdeg, qdeg;
  int pidx, qidx;
  GroupElement u, v;

  friend bool operator<(const TensorKey& a, const TensorKey& b) {
    if (a.pdeg != b.pdeg) return a.pdeg < b.pdeg;
    if (a.qdeg != b.qdeg) return a.qdeg < b.qdeg;
    if (a.pidx != b.pidx) return a.pidx < b.pidx;
    if (a.qidx != b.qidx) return a.qidx < b.qidx;
    int c = a.u.cmp(b.u);
    if (c != 0) return c < 0;
    return a.v.cmp(b.v) < 0;
  }
  friend bool operator==(const TensorKey& a, const TensorKey& b) {
    return a.pdeg == b.pdeg && a.qdeg == b.qdeg && a.pidx == b.pidx &&
           a.qidx == b.qidx && a.u == b.u && a.v == b.v;
  }
};

class TensorElement {
 public:
  explicit TensorElement(GroupClass cls) : cls_(std::move(cls)) {}

  const GroupClass& group_class() const { return cls_; }
  const std::map<TensorKey, Int>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t term_count() const { return terms_.size(); }

  void add_term(TensorKey key, Int c) {
    if (c == 0) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), std::move(c));
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  TensorElement& operator+=(const TensorElement& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
  }
  TensorElement& operator-=(const TensorElement& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
  }
  friend TensorElement operator+(TensorElement a, const TensorElement& b) {
    a += b;
    return a;
  }
  friend TensorElement operator-(TensorElement a, const TensorElement& b) {
    a -= b;
    return a;
  }
  friend bool operator==(const TensorElement& a, const TensorElement& b) {
    return a.terms_ == b.terms_;
  }

  // diagonal action of a group element with an integer weight
  TensorElement translated(const GroupElement& g, const Int& c) const {
    TensorElement out(cls_);
    for (const auto& [k, d] : terms_)
      out.add_term(TensorKey{k.pdeg, k.qdeg, k.pidx, k.qidx, multiply(g, k.u),
                             multiply(g, k.v)},
                   c * d);
    return out;
  }
  // diagonal action of a ring element
  TensorElement acted(const RingElement& lambda) const {
    TensorElement out(cls_);
    for (const auto& [g, c] : lambda.terms()) out += translated(g, c);
    return out;
  }

  TensorElement component(int pdeg, int qdeg) const {
    TensorElement out(cls_);
    for (const auto& [k, c] : terms_)
      if (k.pdeg == pdeg && k.qdeg == qdeg) out.add_term(k, c);
    return out;
  }
  TensorElement component_q(int pdeg, int qdeg, int qidx) const {
    TensorElement out(cls_);
    for (const auto& [k, c] : terms_)
      if (k.pdeg == pdeg && k.qdeg == qdeg && k.qidx == qidx)
        out.add_term(k, c);
    return out;
  }

 private:
  GroupClass cls_;
  std::map<TensorKey, Int> terms_;
};

// Shared context: a normalized aspherical presentation over a class with
// a solved word problem, plus the Fox entries of its chain complex.
class TensorSpace {
 public:
  explicit TensorSpace(const Presentation& p)
      : pres_(p), rx_(fox_entries(p)) {
    p.group_class().require_equality("cup verification");
    if (!p.aspherical())
      throw Error(ErrorKind::not_aspherical,
                  "cup verification needs the aspherical flag");
    if (!p.is_normalized())
      throw Error(ErrorKind::not_normalized,
                  "presentation not normalized: relators must be products of "
                  "distinct positive generators");
  }

  const Presentation& pres() const { return pres_; }
  int gens() const { return pres_.gen_count(); }
  int rels() const { return pres_.relator_count(); }
  const RingElement& rx(int x, int r) const { return rx_.at(x, r); }

  // conj(x) - 1 as a ring element, x a presentation generator
  RingElement xbar_minus_one(int x) const {
    const GroupClass& cls = pres_.group_class();
    RingElement e(cls);
    e.add_term(invert(pres_.gen_images()[x]), pres_.w_of_gen(x));
    e -= RingElement::one(cls);
    return e;
  }

  TensorElement zero() const { return TensorElement(pres_.group_class()); }

  TensorElement differential(const TensorElement& t) const {
    const GroupClass& cls = pres_.group_class();
    TensorElement out(cls);
    for (const auto& [k, c] : t.terms()) {
      // left factor
      if (k.pdeg == 1) {
        GroupElement ux = multiply(k.u, pres_.gen_images()[k.pidx]);
        out.add_term(TensorKey{0, k.qdeg, 0, k.qidx, ux, k.v}, c);
        out.add_term(TensorKey{0, k.qdeg, 0, k.qidx, k.u, k.v}, -c);
      } else if (k.pdeg == 2) {
        for (int x = 0; x < gens(); ++x) {
          for (const auto& [h, d] : rx_.at(x, k.pidx).terms())
            out.add_term(
                TensorKey{1, k.qdeg, x, k.qidx, multiply(k.u, h), k.v}, c * d);
        }
      }
      // right factor, with the Koszul sign
      Int sign = k.pdeg % 2 == 0 ? c : Int(-c);
      if (k.qdeg == 2) {
        for (int x = 0; x < gens(); ++x) {
          // v (conj(x) - 1) q1_x
          GroupElement vxi = multiply(k.v, invert(pres_.gen_images()[x]));
          out.add_term(TensorKey{k.pdeg, 1, k.pidx, x, k.u, vxi},
                       pres_.w_of_gen(x) < 0 ? Int(-sign) : sign);
          out.add_term(TensorKey{k.pdeg, 1, k.pidx, x, k.u, k.v}, -sign);
        }
      } else if (k.qdeg == 1) {
        const OrientationCharacter& w = pres_.w();
        for (int r = 0; r < rels(); ++r) {
          RingElement coeff = involute(rx_.at(k.qidx, r), w);
          for (const auto& [h, d] : coeff.terms())
            out.add_term(
                TensorKey{k.pdeg, 0, k.pidx, r, k.u, multiply(k.v, h)},
                sign * d);
        }
      }
    }
    return out;
  }

 private:
  static RingMatrix fox_entries(const Presentation& p) {
    return fox_lyndon_complex(p).d2;
  }
  Presentation pres_;
  RingMatrix rx_;  // g x r
};

inline DualComplex dual_complex(const Presentation& p) {
  TensorSpace space(p);  // runs the precondition checks
  const GroupClass& cls = p.group_class();
  const OrientationCharacter& w = p.w();
  const int g = p.gen_count();
  const int r = p.relator_count();
  RingMatrix from_top(cls, 1, g);
  for (int x = 0; x < g; ++x) from_top.at(0, x) = space.xbar_minus_one(x);
  RingMatrix to_bottom(cls, g, r);
  for (int x = 0; x < g; ++x)
    for (int j = 0; j < r; ++j) to_bottom.at(x, j) = involute(space.rx(x, j), w);
  return DualComplex{p, std::move(from_top), std::move(to_bottom)};
}

inline bool dual_composite_is_zero(const DualComplex& d) {
  return mat_mul(d.from_top, d.to_bottom).is_zero();
}

struct JMaps {
  std::vector<TensorElement> j0;  // per relator
  std::vector<TensorElement> j1;  // per generator
  TensorElement j2;
};

inline JMaps build_j(const TensorSpace& space) {
  const Presentation& p = space.pres();
  const GroupClass& cls = p.group_class();
  const GroupClass free_cls = p.free_cover();
  const GroupElement one = GroupElement::identity(cls);
  const int g = space.gens();
  const int r = space.rels();

  JMaps j{{}, {}, space.zero()};

  for (int rr = 0; rr < r; ++rr) {
    TensorElement t = space.zero();
    t.add_term(TensorKey{0, 0, 0, rr, one, one}, 1);
    j.j0.push_back(std::move(t));
  }

  // free-ring first derivatives; their images must be single positive
  // monomials after normalization
  std::vector<std::vector<RingElement>> dfree(
      g, std::vector<RingElement>(r, RingElement::zero(free_cls)));
  for (int x = 0; x < g; ++x)
    for (int rr = 0; rr < r; ++rr)
      dfree[x][rr] = fox_derivative(free_cls, p.relators()[rr], x);

  for (int x = 0; x < g; ++x) {
    TensorElement t = space.zero();
    t.add_term(TensorKey{0, 1, 0, x, one, one}, 1);
    for (int rr = 0; rr < r; ++rr) {
      const RingElement& rx = space.rx(x, rr);
      if (rx.is_zero()) continue;
      if (rx.term_count() != 1 || rx.terms().begin()->second != 1)
        throw Error(ErrorKind::not_normalized,
                    "presentation not normalized: a relator derivative is "
                    "not a single positive monomial");
      const GroupElement& u = rx.terms().begin()->first;
      GroupElement uinv = invert(u);
      int wu = p.w().value(u);
      // second derivatives, taken in the free ring before mapping down
      for (int y = 0; y < g; ++y) {
        RingElement second = p.eval_ring(fox_derivative(dfree[x][rr], y));
        for (const auto& [h, c] : second.terms()) {
          Int coeff = -c * wu;
          t.add_term(TensorKey{1, 0, y, rr, multiply(uinv, h), uinv}, coeff);
        }
      }
    }
    j.j1.push_back(std::move(t));
  }

  j.j2.add_term(TensorKey{0, 2, 0, 0, one, one}, 1);
  for (int x = 0; x < g; ++x) {
    GroupElement xi = invert(p.gen_images()[x]);
    j.j2.add_term(TensorKey{1, 1, x, x, xi, xi}, -p.w_of_gen(x));
  }
  for (int rr = 0; rr < r; ++rr)
    j.j2.add_term(TensorKey{2, 0, rr, rr, one, one}, -1);
  return j;
}

struct ChainMapReport {
  std::vector<TensorElement> degree1_residuals;  // per generator
  TensorElement degree2_residual;
  std::vector<TensorElement> per_relator;  // (1,0)-sector of the residual
  TensorElement generator_sector;          // (0,1)-sector of the residual
  bool degree1_zero = true;
  bool degree2_zero = true;
  bool per_relator_zero = true;

  bool ok() const { return degree1_zero && degree2_zero; }
};

inline ChainMapReport verify_chain_map(const TensorSpace& space,
                                       const JMaps& j) {
  const Presentation& p = space.pres();
  const OrientationCharacter& w = p.w();

  // d j1(q1_x) - j0(d q1_x), termwise
  std::vector<TensorElement> residuals1;
  bool d1zero = true;
  for (int x = 0; x < space.gens(); ++x) {
    TensorElement lhs = space.differential(j.j1[x]);
    TensorElement rhs = space.zero();
    for (int r = 0; r < space.rels(); ++r)
      rhs += j.j0[r].acted(involute(space.rx(x, r), w));
    TensorElement res = lhs - rhs;
    if (!res.is_zero()) d1zero = false;
    residuals1.push_back(std::move(res));
  }

  // d j2(1*) - j1(d 1*)
  TensorElement lhs = space.differential(j.j2);
  TensorElement rhs = space.zero();
  for (int x = 0; x < space.gens(); ++x)
    rhs += j.j1[x].acted(space.xbar_minus_one(x));
  TensorElement residual2 = lhs - rhs;
  bool d2zero = residual2.is_zero();

  // fine-grained split of the degree-2 residual
  std::vector<TensorElement> per_relator;
  bool prz = true;
  for (int r = 0; r < space.rels(); ++r) {
    TensorElement part = residual2.component_q(1, 0, r);
    if (!part.is_zero()) prz = false;
    per_relator.push_back(std::move(part));
  }
  TensorElement gensec = residual2.component(0, 1);
  return ChainMapReport{std::move(residuals1), std::move(residual2),
                        std::move(per_relator), std::move(gensec),
                        d1zero,   d2zero,       prz};
}

// Pair a cochain assignment xi (one ring coefficient per relator, the
// value of xi on p2_r) against the canonical projection on the q0 side,
// evaluated on the (2,0) component of j2(1*). For a normalized
// presentation that component is -sum_r (p2_r (x) q0_r), so the result
// carries -xi_r at relator r.
inline std::vector<RingElement> evaluate_cocycle_pair(
    const TensorSpace& space, const JMaps& j, const std::vector<RingElement>& xi) {
  if (static_cast<int>(xi.size()) != space.rels())
    throw Error(ErrorKind::shape_mismatch,
                "need one cochain value per relator");
  const GroupClass& cls = space.pres().group_class();
  std::vector<RingElement> out(space.rels(), RingElement::zero(cls));
  const TensorElement top = j.j2.component(2, 0);
  for (const auto& [k, c] : top.terms()) {
    if (!k.u.is_identity() || !k.v.is_identity())
      throw Error(ErrorKind::unsupported,
                  "nontrivial group pair in the (2,0) component");
    out[k.qidx] += c * xi[k.pidx];
  }
  return out;
}

// xi dual to relator s
inline std::vector<RingElement> evaluate_cocycle_pair(const TensorSpace& space,
                                                      const JMaps& j, int s) {
  const GroupClass& cls = space.pres().group_class();
  std::vector<RingElement> xi(space.rels(), RingElement::zero(cls));
  xi.at(s) = RingElement::one(cls);
  return evaluate_cocycle_pair(space, j, xi);
}

// rendering for reports: "(u·p1_x ⊗ v·q0_r) × c"
inline std::vector<std::string> tensor_text(const TensorElement& t,
                                            const Presentation& p) {
  std::vector<std::string> out;
  const auto pname = [&](int deg, int idx) {
    if (deg == 0) return std::string("p0");
    if (deg == 1) return "p1_" + p.gens()[idx];
    return "p2_r" + std::to_string(idx + 1);
  };
  const auto qname = [&](int deg, int idx) {
    if (deg == 0) return "q0_r" + std::to_string(idx + 1);
    if (deg == 1) return "q1_" + p.gens()[idx];
    return std::string("q2");
  };
  for (const auto& [k, c] : t.terms()) {
    std::ostringstream os;
    os << '(' << k.u.text() << "·" << pname(k.pdeg, k.pidx) << " ⊗ "
       << k.v.text() << "·" << qname(k.qdeg, k.qidx) << ") × " << c.str();
    out.push_back(os.str());
  }
  return out;
}

}  // namespace gric
