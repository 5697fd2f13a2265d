#pragma once

#include <algorithm>
#include <cmath>

#include "errors.hpp"

// Heisenberg group H1 in exponential coordinates: the point (x, y, z) is
// exp(x e1 + y e2 + z e0) where e1, e2 span the horizontal distribution D
// and e0 = [e1, e2].  As coordinate fields,
//   e1 = d/dx - (y/2) d/dz,  e2 = d/dy + (x/2) d/dz,  e0 = d/dz,
// with dual coframe e^1 = dx, e^2 = dy, e^0 = dz + (y dx - x dy)/2.

namespace h1geo {

struct Point {
  double x = 0, y = 0, z = 0;
};

// Tangent vector a0 e0 + a1 e1 + a2 e2 in the left-invariant frame.  The same
// struct represents Lie algebra elements (a1, a2, a0 are the e1, e2, e0
// coefficients of exp's argument).
struct FrameVector {
  double a0 = 0, a1 = 0, a2 = 0;
};

// Covector c0 e^0 + c1 e^1 + c2 e^2.
struct FrameCovector {
  double c0 = 0, c1 = 0, c2 = 0;
};

// Coordinate-basis tangent vector (coefficients on d/dx, d/dy, d/dz).
struct CoordVector {
  double x = 0, y = 0, z = 0;
};

inline FrameVector operator+(const FrameVector& a, const FrameVector& b) {
  return {a.a0 + b.a0, a.a1 + b.a1, a.a2 + b.a2};
}
inline FrameVector operator-(const FrameVector& a, const FrameVector& b) {
  return {a.a0 - b.a0, a.a1 - b.a1, a.a2 - b.a2};
}
inline FrameVector operator*(double s, const FrameVector& a) {
  return {s * a.a0, s * a.a1, s * a.a2};
}
inline FrameVector operator-(const FrameVector& a) { return {-a.a0, -a.a1, -a.a2}; }

inline double norm(const FrameVector& a) {
  return std::sqrt(a.a0 * a.a0 + a.a1 * a.a1 + a.a2 * a.a2);
}

inline double pairing(const FrameCovector& w, const FrameVector& v) {
  return w.c0 * v.a0 + w.c1 * v.a1 + w.c2 * v.a2;
}

// Group operations.  The product follows from the Baker-Campbell-Hausdorff
// formula, which is exact here because all brackets beyond the first vanish.
inline Point group_mul(const Point& p, const Point& q) {
  return {p.x + q.x, p.y + q.y, p.z + q.z + 0.5 * (p.x * q.y - q.x * p.y)};
}
inline Point group_inv(const Point& p) { return {-p.x, -p.y, -p.z}; }

// Lie algebra: [a e1 + b e2 + c e0, a' e1 + b' e2 + c' e0] = (ab' - a'b) e0.
inline FrameVector lie_bracket(const FrameVector& X, const FrameVector& Y) {
  return {X.a1 * Y.a2 - Y.a1 * X.a2, 0.0, 0.0};
}
inline FrameVector bch(const FrameVector& X, const FrameVector& Y) {
  return X + Y + 0.5 * lie_bracket(X, Y);
}
inline Point exp_point(const FrameVector& X) { return {X.a1, X.a2, X.a0}; }
inline FrameVector log_point(const Point& p) { return {p.z, p.x, p.y}; }

// Horizontality test: |a0| small relative to the horizontal components.
inline bool is_horizontal(const FrameVector& v) {
  return std::abs(v.a0) <= 1e-9 * std::max({1.0, std::abs(v.a1), std::abs(v.a2)});
}
inline FrameVector horizontal_part(const FrameVector& v) { return {0.0, v.a1, v.a2}; }

// Scalar product on the horizontal distribution (e1, e2 orthonormal).
inline double scalar_product(const FrameVector& v, const FrameVector& w) {
  if (!is_horizontal(v) || !is_horizontal(w))
    throw NonHorizontal("scalar_product: argument not horizontal");
  return v.a1 * w.a1 + v.a2 * w.a2;
}

// Complex structure on D: J(a e1 + b e2) = -b e1 + a e2.
inline FrameVector j_rotate(const FrameVector& v) {
  if (!is_horizontal(v)) throw NonHorizontal("j_rotate: argument not horizontal");
  return {0.0, -v.a2, v.a1};
}

// Frame <-> coordinate conversion at a base point.
inline CoordVector frame_to_coordinate(const FrameVector& v, const Point& at) {
  return {v.a1, v.a2, v.a0 - 0.5 * at.y * v.a1 + 0.5 * at.x * v.a2};
}
inline FrameVector coordinate_to_frame(const CoordVector& w, const Point& at) {
  return {w.z + 0.5 * (at.y * w.x - at.x * w.y), w.x, w.y};
}

// Volume form dV = e^0 ^ e^1 ^ e^2 applied to a frame-vector triple;
// dV(e0, e1, e2) = 1 and dV pulls back to dx ^ dy ^ dz.
inline double volume_form(const FrameVector& u, const FrameVector& v,
                          const FrameVector& w) {
  return u.a0 * (v.a1 * w.a2 - v.a2 * w.a1) - u.a1 * (v.a0 * w.a2 - v.a2 * w.a0) +
         u.a2 * (v.a0 * w.a1 - v.a1 * w.a0);
}

}  // namespace h1geo
