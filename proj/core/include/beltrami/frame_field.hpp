#pragma once

// Vector fields on S^3 in the orthonormal Hopf frame {B1, B2, B3}.

#include <array>
#include <string>

#include "beltrami/exact_poly.hpp"

namespace beltrami {

// Generator L_i of the Hopf field B_i(x) = L_i x, i = 0, 1, 2.
const Matrix4Q& hopf_generator(int i);
// Generator of the anti-Hopf field Bhat_i, i = 0, 1, 2.
const Matrix4Q& anti_hopf_generator(int i);
// The reflection x4 -> -x4.
const Matrix4Q& reflection_T();

// Derivative along B_i; re-canonicalized for exact scalars.
inline SphereScalar frame_derivative(const SphereScalar& s, int i) {
  return SphereScalar(linear_field_derivative(s.poly(), hopf_generator(i)));
}
inline RealPoly frame_derivative(const RealPoly& s, int i) { return linear_field_derivative(s, hopf_generator(i)); }

template <class S>
struct BasicFrameField {
  std::array<S, 3> f{};

  BasicFrameField() = default;
  BasicFrameField(S f1, S f2, S f3) : f{std::move(f1), std::move(f2), std::move(f3)} {}

  const S& operator[](int i) const { return f[static_cast<std::size_t>(i)]; }
  S& operator[](int i) { return f[static_cast<std::size_t>(i)]; }
  bool is_zero() const { return f[0].is_zero() && f[1].is_zero() && f[2].is_zero(); }
  int degree() const { return std::max({f[0].degree(), f[1].degree(), f[2].degree()}); }

  BasicFrameField& operator+=(const BasicFrameField& o) {
    for (int i = 0; i < 3; ++i) f[i] += o.f[i];
    return *this;
  }
  BasicFrameField& operator-=(const BasicFrameField& o) {
    for (int i = 0; i < 3; ++i) f[i] -= o.f[i];
    return *this;
  }
  friend BasicFrameField operator+(BasicFrameField a, const BasicFrameField& b) { return a += b; }
  friend BasicFrameField operator-(BasicFrameField a, const BasicFrameField& b) { return a -= b; }
  BasicFrameField operator-() const { return {-f[0], -f[1], -f[2]}; }
  template <class K>
  friend BasicFrameField operator*(const K& k, const BasicFrameField& a) {
    return {a.f[0] * k, a.f[1] * k, a.f[2] * k};
  }
  // Multiplication by a scalar function.
  friend BasicFrameField operator*(const S& s, const BasicFrameField& a) {
    return {s * a.f[0], s * a.f[1], s * a.f[2]};
  }
  friend bool operator==(const BasicFrameField& a, const BasicFrameField& b) { return a.f == b.f; }
  friend bool operator!=(const BasicFrameField& a, const BasicFrameField& b) { return !(a == b); }
};

using FrameField = BasicFrameField<SphereScalar>;
using RealFrameField = BasicFrameField<RealPoly>;

struct CartesianSample {
  std::array<double, 4> point{};
  std::array<double, 4> vector{};
};

// B1, B2, B3 with constant coefficients.
std::array<FrameField, 3> hopf_frame();
FrameField frame_vector(int i, const SphereScalar& coefficient = SphereScalar(1));

template <class S>
BasicFrameField<S> curl(const BasicFrameField<S>& F) {
  const auto d = [&](int i, int j) { return frame_derivative(F[j], i); };
  BasicFrameField<S> r;
  r[0] = F[0] + F[0] + d(1, 2) - d(2, 1);
  r[1] = F[1] + F[1] + d(2, 0) - d(0, 2);
  r[2] = F[2] + F[2] + d(0, 1) - d(1, 0);
  return r;
}

template <class S>
S divergence(const BasicFrameField<S>& F) {
  return frame_derivative(F[0], 0) + frame_derivative(F[1], 1) + frame_derivative(F[2], 2);
}

template <class S>
BasicFrameField<S> grad(const S& s) {
  return {frame_derivative(s, 0), frame_derivative(s, 1), frame_derivative(s, 2)};
}

template <class S>
S pointwise_dot(const BasicFrameField<S>& a, const BasicFrameField<S>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

ExactScalar inner(const FrameField& a, const FrameField& b);
double inner(const RealFrameField& a, const RealFrameField& b);
inline ExactScalar norm_sq(const FrameField& a) { return inner(a, a); }
inline double norm_sq(const RealFrameField& a) { return inner(a, a); }

RealFrameField to_real(const FrameField& F);
RealFrameField to_real(const FrameField& F, double scale);

// Cartesian components (F as a map S^3 -> R^4) and the inverse projection onto the frame.
std::array<RationalPoly, 4> to_cartesian(const FrameField& F);
FrameField from_cartesian(const std::array<RationalPoly, 4>& V);
CartesianSample evaluate_cartesian(const FrameField& F, const std::array<double, 4>& point);
std::array<double, 3> evaluate(const RealFrameField& F, const std::array<double, 4>& point);

// Rejects a non-orthogonal O with std::invalid_argument.
FrameField isometry_pushforward(const FrameField& F, const Matrix4Q& O);

enum class AntipodalParity { descends_to_RP3, anti_invariant, mixed };
AntipodalParity antipodal_parity(const FrameField& F);
std::string to_string(AntipodalParity p);

FrameField parse_frame_field(const std::string& f1, const std::string& f2, const std::string& f3);

}  // namespace beltrami
