#include "gbo/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gbo {

double ButcherTableau::row_sum_defect() const {
  double d = 0.0;
  for (int i = 0; i < s; ++i) d = std::max(d, std::abs(c(i) - a.row(i).sum()));
  return d;
}

double ButcherTableau::symplectic_defect() const {
  double d = 0.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j < s; ++j) {
      d = std::max(d, std::abs(b(i) * a(i, j) + b(j) * a(j, i) - b(i) * b(j)));
    }
  }
  return d;
}

ButcherTableau gauss_legendre_tableau(int s) {
  ButcherTableau t;
  t.s = s;
  t.a.resize(s, s);
  t.b.resize(s);
  t.c.resize(s);
  if (s == 1) {
    t.a << 0.5;
    t.b << 1.0;
    t.c << 0.5;
  } else if (s == 2) {
    const double r = std::sqrt(3.0) / 6.0;
    t.a << 0.25, 0.25 - r, 0.25 + r, 0.25;
    t.b << 0.5, 0.5;
    t.c << 0.5 - r, 0.5 + r;
  } else {
    throw std::invalid_argument("gauss_legendre_tableau: unsupported stage count " +
                                std::to_string(s));
  }
  return t;
}

}  // namespace gbo
