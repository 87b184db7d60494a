// Copyright 2026 The kvbf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kvbf/quadrature.hpp"

#include <cmath>
#include <string>

namespace kvbf {

namespace {

// Rules are built from symmetry orbits; orbit weights below are normalised to
// a unit-area triangle and halved when added.
class RuleBuilder {
 public:
  explicit RuleBuilder(int degree) { rule_.degree = degree; }

  RuleBuilder& centroid(double w) {
    add({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, w);
    return *this;
  }

  // Orbit of (a, a, 1-2a).
  RuleBuilder& orbit3(double a, double w) {
    const double c = 1.0 - 2.0 * a;
    add({a, a, c}, w);
    add({a, c, a}, w);
    add({c, a, a}, w);
    return *this;
  }

  // Orbit of (a, b, 1-a-b), all six permutations.
  RuleBuilder& orbit6(double a, double b, double w) {
    const double c = 1.0 - a - b;
    add({a, b, c}, w);
    add({a, c, b}, w);
    add({b, a, c}, w);
    add({b, c, a}, w);
    add({c, a, b}, w);
    add({c, b, a}, w);
    return *this;
  }

  QuadratureRule build() const { return rule_; }

 private:
  void add(std::array<double, 3> p, double w) {
    rule_.points.push_back(p);
    rule_.weights.push_back(0.5 * w);
  }

  QuadratureRule rule_;
};

// Dunavant (1985) rules. The degree-10 orbit data were re-solved against the
// moment equations in extended precision; the commonly tabulated 15-digit
// values leave ~1e-14 relative moment errors.
std::array<QuadratureRule, kMaxQuadratureDegree + 1> make_rules() {
  std::array<QuadratureRule, kMaxQuadratureDegree + 1> rules;
  rules[1] = RuleBuilder(1).centroid(1.0).build();
  rules[2] = RuleBuilder(2).orbit3(1.0 / 6.0, 1.0 / 3.0).build();
  rules[4] = RuleBuilder(4)
                 .orbit3(0.44594849091596488631832925388305, 0.22338158967801146569500700843312)
                 .orbit3(0.09157621350977074345957146340220, 0.10995174365532186763832632490021)
                 .build();
  rules[3] = rules[4];
  rules[5] = RuleBuilder(5)
                 .centroid(0.225)
                 .orbit3(0.47014206410511508977044120951345, 0.13239415278850618073764938783315)
                 .orbit3(0.10128650732345633880098736191512, 0.12593918054482715259568394550018)
                 .build();
  rules[6] = RuleBuilder(6)
                 .orbit3(0.24928674517091042129163855310702, 0.11678627572637936602528961138558)
                 .orbit3(0.06308901449150222834033160287082, 0.05084490637020681692093680910686)
                 .orbit6(0.31035245103378440541660773395655, 0.63650249912139864723014259441205,
                         0.08285107561837357519355345642044)
                 .build();
  rules[8] = RuleBuilder(8)
                 .centroid(0.14431560767778716825109111048906)
                 .orbit3(0.17056930775176020662229350149146, 0.10321737053471825028179155029212)
                 .orbit3(0.05054722831703097545842355059660, 0.03245849762319808031092592834178)
                 .orbit3(0.45929258829272315602881551449417, 0.09509163426728462479389610438858)
                 .orbit6(0.26311282963463811342178578628464, 0.72849239295540428124100037917606,
                         0.02723031417443499426484469007390)
                 .build();
  rules[7] = rules[8];
  rules[9] = RuleBuilder(9)
                 .centroid(0.09713579628279609890744676309485)
                 .orbit3(0.48968251919873762778370692483619, 0.03133470022713983234393199080984)
                 .orbit3(0.43708959149293663726993036443535, 0.07782754100477543338465495857972)
                 .orbit3(0.18820353561903273024096128046733, 0.07964773892720910288013526957424)
                 .orbit3(0.04472951339445297061024247196780, 0.02557767565869810438673914467637)
                 .orbit6(0.22196298916076569567510252769319, 0.74119859878449802069007987352342,
                         0.04328353937728937728937728937729)
                 .build();
  rules[10] = RuleBuilder(10)
                  .centroid(0.09081799038275358009529)
                  .orbit3(0.4855776333836573773675, 0.03672595775646670471701)
                  .orbit3(0.1094815754850370547955, 0.04532105943552793478261)
                  .orbit6(0.1417072194148799547567, 0.3079398387641209501652,
                          0.07275791684542010860432)
                  .orbit6(0.02500353476268638607399, 0.2466725606399026939173,
                          0.02832724253105748483674)
                  .orbit6(0.009540815400299457580153, 0.06680325101220026577354,
                          0.009421666963732823459927)
                  .build();
  return rules;
}

}  // namespace

const QuadratureRule& rule_for_degree(int d) {
  static const auto rules = make_rules();
  if (d < 1 || d > kMaxQuadratureDegree) {
    throw Error("rule_for_degree: unsupported degree " + std::to_string(d));
  }
  return rules[d];
}

MappedQuadrature map_to_cell(const QuadratureRule& rule, const std::array<Point, 3>& cell) {
  const auto& [a, b, c] = cell;
  const double det = (b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y);
  if (det == 0.0) throw Error("map_to_cell: zero-area cell");
  MappedQuadrature out;
  out.points.reserve(rule.points.size());
  out.weights.reserve(rule.weights.size());
  for (int q = 0; q < rule.size(); ++q) {
    const auto& l = rule.points[q];
    out.points.push_back({l[0] * a.x + l[1] * b.x + l[2] * c.x, l[0] * a.y + l[1] * b.y + l[2] * c.y});
    out.weights.push_back(rule.weights[q] * std::abs(det));
  }
  return out;
}

}  // namespace kvbf
