#pragma once

// Pointwise integrands shared by the strong-solution residuals and the
// measure-valued ones. Both sides evaluate the same expressions per atom (a
// single atom of weight one for a classical solution), so a Dirac lift
// reproduces the classical residual bit for bit.

namespace mvrelax::detail {

struct AtomValues {
  double y;
  double z0;
  double z1;
  double f;  // f(t, x, y)
};

// Weak form: v*dt y + v'*dx y - v*f.
inline double weak_dt(const AtomValues& a) { return a.z0; }
inline double weak_dx(const AtomValues& a) { return a.z1; }
inline double weak_src(const AtomValues& a) { return a.f; }

// Second-moment form: dt(y^2), dx(y^2) and the source 2 y f - 2 (dx y)^2.
inline double m2_dt(const AtomValues& a) { return 2.0 * a.y * a.z0; }
inline double m2_dx(const AtomValues& a) { return 2.0 * a.y * a.z1; }
inline double m2_src(const AtomValues& a) { return 2.0 * a.y * a.f - 2.0 * a.z1 * a.z1; }

// Dissipation: phi z0^2 - phi'/2 z1^2 - phi z0 f.
inline double diss_z0sq(const AtomValues& a) { return a.z0 * a.z0; }
inline double diss_z1sq(const AtomValues& a) { return a.z1 * a.z1; }
inline double diss_z0f(const AtomValues& a) { return a.z0 * a.f; }

inline double combine_weak(double phi, double v, double dv, double dt, double dx, double src) {
  return phi * (v * dt + dv * dx - v * src);
}

inline double combine_dissipation(double phi, double dphi, double z0sq, double z1sq, double z0f) {
  return phi * z0sq - 0.5 * dphi * z1sq - phi * z0f;
}

}  // namespace mvrelax::detail
