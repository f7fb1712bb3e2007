#include "beltrami/frame_field.hpp"

#include <stdexcept>

namespace beltrami {

namespace {

// Build the matrix of x -> (s0 x_{p0}, s1 x_{p1}, s2 x_{p2}, s3 x_{p3}).
Matrix4Q signed_permutation(std::array<int, 4> sign, std::array<int, 4> src) {
  Matrix4Q L;
  for (auto& row : L)
    for (auto& v : row) v = 0;
  for (int r = 0; r < 4; ++r) L[r][src[r]] = sign[r];
  return L;
}

}  // namespace

const Matrix4Q& hopf_generator(int i) {
  static const std::array<Matrix4Q, 3> L = {
      signed_permutation({-1, 1, -1, 1}, {1, 0, 3, 2}),   // B1 = (-x2, x1, -x4, x3)
      signed_permutation({-1, 1, 1, -1}, {2, 3, 0, 1}),   // B2 = (-x3, x4, x1, -x2)
      signed_permutation({-1, -1, 1, 1}, {3, 2, 1, 0}),   // B3 = (-x4, -x3, x2, x1)
  };
  return L.at(static_cast<std::size_t>(i));
}

const Matrix4Q& anti_hopf_generator(int i) {
  static const std::array<Matrix4Q, 3> L = {
      signed_permutation({-1, 1, -1, 1}, {3, 2, 1, 0}),   // (-x4, x3, -x2, x1)
      signed_permutation({-1, -1, 1, 1}, {2, 3, 0, 1}),   // (-x3, -x4, x1, x2)
      signed_permutation({-1, 1, 1, -1}, {1, 0, 3, 2}),   // (-x2, x1, x4, -x3)
  };
  return L.at(static_cast<std::size_t>(i));
}

const Matrix4Q& reflection_T() {
  static const Matrix4Q T = signed_permutation({1, 1, 1, -1}, {0, 1, 2, 3});
  return T;
}

std::array<FrameField, 3> hopf_frame() { return {frame_vector(0), frame_vector(1), frame_vector(2)}; }

FrameField frame_vector(int i, const SphereScalar& coefficient) {
  FrameField F;
  F[i] = coefficient;
  return F;
}

ExactScalar inner(const FrameField& a, const FrameField& b) {
  RationalPoly s = a[0].poly() * b[0].poly();
  s += a[1].poly() * b[1].poly();
  s += a[2].poly() * b[2].poly();
  return integrate_poly(s);
}

double inner(const RealFrameField& a, const RealFrameField& b) {
  return integrate_poly(a[0] * b[0] + a[1] * b[1] + a[2] * b[2]);
}

RealFrameField to_real(const FrameField& F) { return {to_real(F[0].poly()), to_real(F[1].poly()), to_real(F[2].poly())}; }

RealFrameField to_real(const FrameField& F, double scale) {
  RealFrameField r = to_real(F);
  for (int i = 0; i < 3; ++i) r[i] *= scale;
  return r;
}

namespace {

std::array<RationalPoly, 4> linear_field(const Matrix4Q& L) {
  std::array<RationalPoly, 4> v;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (sgn(L[r][c]) != 0) v[r] += RationalPoly::variable(c) * L[r][c];
  return v;
}

}  // namespace

std::array<RationalPoly, 4> to_cartesian(const FrameField& F) {
  std::array<RationalPoly, 4> V;
  for (int i = 0; i < 3; ++i) {
    if (F[i].is_zero()) continue;
    const auto B = linear_field(hopf_generator(i));
    for (int r = 0; r < 4; ++r) V[r] += F[i].poly() * B[r];
  }
  return V;
}

FrameField from_cartesian(const std::array<RationalPoly, 4>& V) {
  FrameField F;
  for (int i = 0; i < 3; ++i) {
    const auto B = linear_field(hopf_generator(i));
    RationalPoly s;
    for (int r = 0; r < 4; ++r) s += V[r] * B[r];
    F[i] = SphereScalar(s);
  }
  return F;
}

CartesianSample evaluate_cartesian(const FrameField& F, const std::array<double, 4>& point) {
  CartesianSample out;
  out.point = point;
  const auto V = to_cartesian(F);
  for (int r = 0; r < 4; ++r) out.vector[r] = V[r].evaluate(point);
  return out;
}

std::array<double, 3> evaluate(const RealFrameField& F, const std::array<double, 4>& point) {
  return {F[0].evaluate(point), F[1].evaluate(point), F[2].evaluate(point)};
}

FrameField isometry_pushforward(const FrameField& F, const Matrix4Q& O) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      Rational s(0);
      for (int k = 0; k < 4; ++k) s += O[k][i] * O[k][j];
      if (s != (i == j ? 1 : 0)) throw std::invalid_argument("isometry_pushforward: matrix is not orthogonal");
    }
  Matrix4Q Ot;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) Ot[i][j] = O[j][i];
  // (O_* V)(y) = O V(O^T y)
  const auto V = to_cartesian(F);
  std::array<RationalPoly, 4> Vs;
  for (int r = 0; r < 4; ++r) Vs[r] = linear_substitution(V[r], Ot);
  std::array<RationalPoly, 4> W;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (sgn(O[r][c]) != 0) W[r] += Vs[c] * O[r][c];
  return from_cartesian(W);
}

AntipodalParity antipodal_parity(const FrameField& F) {
  // A_* V (y) = -V(-y) = sum f_i(-y) B_i(y): invariant iff the frame coefficients are even.
  bool has_even = false, has_odd = false;
  for (int i = 0; i < 3; ++i) {
    has_even = has_even || !F[i].even_part().is_zero();
    has_odd = has_odd || !F[i].odd_part().is_zero();
  }
  if (has_odd && has_even) return AntipodalParity::mixed;
  return has_odd ? AntipodalParity::anti_invariant : AntipodalParity::descends_to_RP3;
}

std::string to_string(AntipodalParity p) {
  switch (p) {
    case AntipodalParity::descends_to_RP3:
      return "descends_to_RP3";
    case AntipodalParity::anti_invariant:
      return "anti_invariant";
    case AntipodalParity::mixed:
      return "mixed";
  }
  return "?";
}

FrameField parse_frame_field(const std::string& f1, const std::string& f2, const std::string& f3) {
  return {SphereScalar(parse_poly(f1)), SphereScalar(parse_poly(f2)), SphereScalar(parse_poly(f3))};
}

}  // namespace beltrami
