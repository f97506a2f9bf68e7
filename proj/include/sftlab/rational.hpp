#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "sftlab/errors.hpp"

namespace sftlab {

// Expression templates are disabled so these behave as plain value types
// (std::max, ternaries, and mixed arithmetic all work unsurprisingly).
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat =
    boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                      boost::multiprecision::cpp_int_backend<>>,
                                  boost::multiprecision::et_off>;

using RatVec = std::vector<Rat>;

// floor(a / b) for exact integers, b > 0.
Int floor_div(const Int& num, const Int& den);

// floor of a rational.
Int rat_floor(const Rat& q);

// 2^e as a rational, e may be negative.
Rat pow2(int e);

// Lower bound r/2^bits <= sqrt(q) < (r+1)/2^bits for q >= 0; returns the
// pair (r/2^bits, (r+1)/2^bits).
std::pair<Rat, Rat> sqrt_bounds(const Rat& q, int bits);

// Parse "p/q", "p", or a decimal-free signed integer string.
Rat parse_rational(const std::string& s);
std::string rational_to_string(const Rat& q);

// Closed axis-aligned box with rational corners.
struct RatBox {
  RatVec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  bool contains_box(const RatBox& inner) const;
  bool contains_point(const RatVec& p) const;
  RatVec center() const;
  // Max halfwidth over the axes (sup-norm radius around the center).
  Rat radius() const;
};

// Sup-norm distance from a point to a closed box (0 when inside).
Rat dist_point_box(const RatVec& p, const RatBox& box);

// Range of the squared Euclidean norm over a box: {min, max}.
std::pair<Rat, Rat> norm2_range(const RatBox& box);

}  // namespace sftlab
