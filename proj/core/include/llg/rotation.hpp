#pragma once

#include "llg/errors.hpp"
#include "llg/vec3.hpp"

namespace llg {

// One Crank-Nicolson rotation step: the solution of
//   (m' - m)/dt = -((m' + m)/2) x a
// for m'. The update is an exact rotation about a, so |m'| == |m| in exact
// arithmetic regardless of dt or |a|. Closed form with b = dt/2:
//   m' = ((1 - b^2|a|^2) m - 2b (m x a) + 2b^2 (a.m) a) / (1 + b^2|a|^2).
inline Vec3 cn_rotate(const Vec3& m, const Vec3& a, double dt) {
  const double b = 0.5 * dt;
  const double s = 1.0 + b * b * norm2(a);
  // s >= 1 always; anything else means a NaN crept in upstream.
  if (!(s >= 1.0)) throw NumericalError("cn_rotate: non-finite rotation axis");
  return (1.0 / s) * ((1.0 - b * b * norm2(a)) * m - (2.0 * b) * cross(m, a) + (2.0 * b * b * dot(a, m)) * a);
}

// Same update with an additive source on the right-hand side:
//   (m' - m)/dt = -((m' + m)/2) x a + src.
// No longer a pure rotation, so norms drift; used by the direct forcing mode.
inline Vec3 cn_rotate_forced(const Vec3& m, const Vec3& a, double dt, const Vec3& src) {
  const double b = 0.5 * dt;
  const double s = 1.0 + b * b * norm2(a);
  if (!(s >= 1.0)) throw NumericalError("cn_rotate_forced: non-finite rotation axis");
  const Vec3 w = m - b * cross(m, a) + dt * src;
  // Apply (I + b*L)^{-1} where L v = v x a.
  return (1.0 / s) * (w - b * cross(w, a) + (b * b * dot(a, w)) * a);
}

// The rotation as an explicit matrix, assembled the slow way: P = I + b*L
// with L v = v x a, inverted via the adjugate, then A = P^{-1} Q written as
// 2 P^{-1} - I (Q = 2I - P). Forming P^{-1} Q as a product instead would lose
// ~eps*b|a| absolute accuracy to cancellation for large axes. Kept as an
// independent cross-check of cn_rotate; production code uses the closed form.
inline Mat3 cayley_matrix(const Vec3& a, double dt) {
  const double b = 0.5 * dt;
  // L v = v x a = -a x v.
  const Mat3 l = -1.0 * cross_matrix(a);
  const Mat3 p = Mat3::identity() + b * l;

  const auto& e = p.a;
  // det(I + b*L) = 1 + b^2|a|^2 for the cross structure. The generic cofactor
  // expansion carries two (b^3 a1 a2 a3) terms that cancel only in exact
  // arithmetic, costing ~eps*(b|a|)^3 absolute error for large axes.
  const double det = 1.0 + b * b * norm2(a);
  if (!(det > 0.0)) throw NumericalError("cayley_matrix: singular Cayley factor");
  Mat3 pinv;
  pinv.a[0][0] = (e[1][1] * e[2][2] - e[1][2] * e[2][1]) / det;
  pinv.a[0][1] = (e[0][2] * e[2][1] - e[0][1] * e[2][2]) / det;
  pinv.a[0][2] = (e[0][1] * e[1][2] - e[0][2] * e[1][1]) / det;
  pinv.a[1][0] = (e[1][2] * e[2][0] - e[1][0] * e[2][2]) / det;
  pinv.a[1][1] = (e[0][0] * e[2][2] - e[0][2] * e[2][0]) / det;
  pinv.a[1][2] = (e[0][2] * e[1][0] - e[0][0] * e[1][2]) / det;
  pinv.a[2][0] = (e[1][0] * e[2][1] - e[1][1] * e[2][0]) / det;
  pinv.a[2][1] = (e[0][1] * e[2][0] - e[0][0] * e[2][1]) / det;
  pinv.a[2][2] = (e[0][0] * e[1][1] - e[0][1] * e[1][0]) / det;
  return 2.0 * pinv - Mat3::identity();
}

}  // namespace llg
