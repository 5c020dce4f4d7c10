#pragma once

// The built-in presentation corpus: one presentation per supported
// one-ended two-dimensional example. All of these are aspherical
// (torus, Klein bottle, one-relator presentations of torsion-free
// groups, closed surface, mapping torus of a graph map).

#include <vector>

#include "gric/fox.hpp"

namespace gric {
namespace corpus {

inline FreeWord wd(std::initializer_list<std::pair<int, int>> ls) {
  std::vector<Letter> v;
  for (auto [g, s] : ls) v.push_back({g, static_cast<int8_t>(s)});
  return FreeWord(std::move(v));
}

inline Presentation z2() {
  GroupClass cls = GroupClass::free_abelian(2, {"x", "y"});
  return Presentation("z2", cls, {"x", "y"},
                      {wd({{0, 1}, {1, 1}, {0, -1}, {1, -1}})},
                      OrientationCharacter::trivial(cls), true);
}

inline Presentation klein() {
  GroupClass cls = GroupClass::klein();
  // natural orientation character of the Klein bottle: w(a)=1, w(b)=-1
  return Presentation("klein", cls, {"a", "b"},
                      {wd({{1, 1}, {0, 1}, {1, -1}, {0, 1}})},
                      OrientationCharacter(cls, {1, -1}), true);
}

inline Presentation klein_trivial_w() {
  GroupClass cls = GroupClass::klein();
  return Presentation("klein-w1", cls, {"a", "b"},
                      {wd({{1, 1}, {0, 1}, {1, -1}, {0, 1}})},
                      OrientationCharacter::trivial(cls), true);
}

inline Presentation bs(long long m) {
  GroupClass cls = GroupClass::baumslag_solitar(m);
  std::vector<Letter> r{{1, 1}, {0, 1}, {1, -1}};
  for (long long i = 0, n = m > 0 ? m : -m; i < n; ++i)
    r.push_back({0, static_cast<int8_t>(m > 0 ? -1 : 1)});
  return Presentation("bs1" + std::to_string(m), cls, {"a", "t"},
                      {FreeWord(std::move(r))},
                      OrientationCharacter::trivial(cls), true);
}

inline Presentation surface2() {
  GroupClass cls = GroupClass::surface(2, true);
  return Presentation("surface2", cls, {"a1", "b1", "a2", "b2"},
                      {cls.defining_relators().at(0)},
                      OrientationCharacter::trivial(cls), true);
}

inline Presentation fbc() {
  // alpha: y1 -> y2, y2 -> y1 y2
  GroupClass cls = GroupClass::free_by_cyclic(
      {FreeWord::generator(1), wd({{0, 1}, {1, 1}})});
  return Presentation(
      "fbc", cls, {"y1", "y2", "t"},
      {wd({{2, 1}, {0, 1}, {2, -1}, {1, -1}}),
       wd({{2, 1}, {1, 1}, {2, -1}, {1, -1}, {0, -1}})},
      OrientationCharacter::trivial(cls), true);
}

inline std::vector<Presentation> all() {
  return {z2(), klein(), bs(2), bs(3), surface2(), fbc()};
}

}  // namespace corpus
}  // namespace gric
