#include "sftlab/rational.hpp"

#include <algorithm>

namespace sftlab {

Int floor_div(const Int& num, const Int& den) {
  if (den <= 0) throw Error("floor_div: denominator must be positive");
  Int q = num / den;
  if (num % den != 0 && num < 0) --q;
  return q;
}

Int rat_floor(const Rat& q) {
  return floor_div(boost::multiprecision::numerator(q),
                   boost::multiprecision::denominator(q));
}

Rat pow2(int e) {
  Int one = 1;
  if (e >= 0) return Rat(one << e);
  return Rat(one, one << (-e));
}

std::pair<Rat, Rat> sqrt_bounds(const Rat& q, int bits) {
  if (q < 0) throw Error("sqrt_bounds: negative argument");
  // floor(sqrt(num * 4^bits / den)) via integer sqrt after scaling.
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  Int scaled = (num << (2 * bits)) / den;
  Int r = boost::multiprecision::sqrt(scaled);
  Rat unit = pow2(-bits);
  return {Rat(r) * unit, Rat(r + 1) * unit};
}

Rat parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw FormatError("rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::exception&) {
    throw FormatError("malformed rational: " + s);
  }
}

std::string rational_to_string(const Rat& q) {
  Int num = boost::multiprecision::numerator(q);
  Int den = boost::multiprecision::denominator(q);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

bool RatBox::contains_box(const RatBox& inner) const {
  if (inner.dim() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (inner.lo[i] < lo[i] || inner.hi[i] > hi[i]) return false;
  return true;
}

bool RatBox::contains_point(const RatVec& p) const {
  if (static_cast<int>(p.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

RatVec RatBox::center() const {
  RatVec c(dim());
  for (int i = 0; i < dim(); ++i) c[i] = (lo[i] + hi[i]) / 2;
  return c;
}

Rat RatBox::radius() const {
  Rat r = 0;
  for (int i = 0; i < dim(); ++i) r = std::max(r, (hi[i] - lo[i]) / 2);
  return r;
}

Rat dist_point_box(const RatVec& p, const RatBox& box) {
  if (static_cast<int>(p.size()) != box.dim())
    throw DimensionMismatch("dist_point_box: dimension mismatch");
  Rat d = 0;
  for (int i = 0; i < box.dim(); ++i) {
    Rat below = box.lo[i] - p[i];
    Rat above = p[i] - box.hi[i];
    d = std::max({d, below, above});
  }
  return d;
}

std::pair<Rat, Rat> norm2_range(const RatBox& box) {
  Rat lo = 0, hi = 0;
  for (int i = 0; i < box.dim(); ++i) {
    Rat a = box.lo[i], b = box.hi[i];
    Rat amax = std::max(a * a, b * b);
    hi += amax;
    if (a > 0)
      lo += a * a;
    else if (b < 0)
      lo += b * b;
    // else the interval straddles 0 and contributes nothing to the minimum
  }
  return {lo, hi};
}

}  // namespace sftlab
