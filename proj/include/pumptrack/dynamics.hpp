#pragma once

#include <cmath>
#include <stdexcept>

#include "pumptrack/geometry.hpp"

namespace pumptrack {

/// Point masses and gravity.
struct SystemParams {
  double m_b = 15.0;      ///< bike mass [kg]
  double m_r = 80.0;      ///< rider mass [kg]
  double g_grav = 9.8067; ///< gravitational acceleration [m/s^2]

  void validate() const {
    if (!(m_b > 0.0) || !(m_r > 0.0) || !(g_grav > 0.0))
      throw std::invalid_argument("SystemParams: masses and gravity must be positive");
  }
};

/// Generalized coordinates and rates: (phi, phidot, l, ldot).
template <typename T>
struct StateT {
  T phi{}, phidot{}, l{}, ldot{};
};

using State = StateT<double>;

inline void validate(const State& s) {
  if (!(std::isfinite(s.phi) && std::isfinite(s.phidot) && std::isfinite(s.l) &&
        std::isfinite(s.ldot)))
    throw std::invalid_argument("State: components must be finite");
  if (!(s.l > 0.0)) throw std::invalid_argument("State: require l > 0");
}

/// Link acceleration, the system input.
struct Control {
  double u = 0.0;
};

/// Time derivative of the state: (phidot, phiddot, ldot, lddot).
template <typename T>
struct StateRatesT {
  T phidot{}, phiddot{}, ldot{}, lddot{};
};

using StateRates = StateRatesT<double>;

/// Scalar coefficients of the implicit equation of motion
///   0 = M(phi,l) phidd + F(phi,l) phid^2 + Q(phi,l,ld) phid + P(phi,l,ld,ldd).
template <typename T>
struct EomCoefficientsT {
  T M{}, F{}, Q{}, P{};
};

using EomCoefficients = EomCoefficientsT<double>;

struct singular_mass_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Closed-form coefficient evaluation. The sigN are the shared
// subexpressions of the symbolic reduction of the constrained two-mass
// Lagrangian; they are transcribed term by term with explicit
// multiplications and checked against the finite-difference
// Euler-Lagrange residual in the test suite. Do not "simplify" by hand:
// cancellations between the bracketed groups are intentional.
template <typename T>
EomCoefficientsT<T> eom_coefficients_t(const TrackGeometry& geom, const SystemParams& par,
                                       const T& phi, const T& l, const T& ldot,
                                       const T& lddot) {
  using std::cos;
  using std::sin;

  const double R = geom.R;
  const double r = geom.r;
  const double lam = geom.lambda;
  const double mb = par.m_b;
  const double mr = par.m_r;

  const T c = cos(phi);
  const T s = sin(phi);
  const T c2 = c * c;
  const T c3 = c2 * c;
  const T s2 = s * s;
  const T s3 = s2 * s;

  const T sig25 = 0.5 * pi * c2;  // equals the path angle b(phi)
  const T c25 = cos(sig25);
  const T s25 = sin(sig25);
  const T lr = l - r;

  const T sig24 = c25 * lr;
  const T sig23 = pi * l * c25 * c2 - pi * r * c25 * c2 - pi * l * c25 * s2 +
                  pi * r * c25 * s2 + l * pi * pi * s25 * c2 * s2 -
                  r * pi * pi * s25 * c2 * s2;
  const T sig22 = ldot * c25 * s - pi * ldot * s25 * c2 * s;
  const T sig21 = pi * ldot * s25 * c * s2 + ldot * c25 * c;
  const T sig20 = R + r * c25;
  const T sig19 = r * c25 + R * lam;
  const T sig18 = c * (R - sig24);
  const T sig17 = s * (R * lam - sig24);
  const T sig16 = pi * s25 * s2 * lr - pi * s25 * c2 * lr + pi * pi * c25 * c2 * s2 * lr;
  const T sig15 = 2.0 * ldot * s25 * sig23;
  const T sig14 = 2.0 * pi * ldot * ldot * c25 * s25 * c * s;
  const T sig13 = 2.0 * ldot * c25 * c * sig22;
  const T sig12 = 2.0 * ldot * c25 * s * sig21;
  const T sig11 = s * sig20 - pi * r * s25 * c2 * s;
  const T sig10 = pi * r * s25 * c * s2 + c * sig19;
  const T sig9 = c * sig20 - pi * r * s25 * c3 + r * pi * pi * c25 * c3 * s2 +
                 3.0 * pi * r * s25 * c * s2;
  const T sig8 = s * sig19 + pi * r * s25 * s3 + r * pi * pi * c25 * c2 * s3 -
                 3.0 * pi * r * s25 * c2 * s;
  const T sig7 = sig18 + pi * s25 * c3 * lr - pi * pi * c25 * c3 * s2 * lr -
                 3.0 * pi * s25 * c * s2 * lr;
  const T sig6 = sig17 - pi * s25 * s3 * lr - pi * pi * c25 * c2 * s3 * lr +
                 3.0 * pi * s25 * c2 * s * lr;
  const T sig5 = -sig18 + c * sig16 + 2.0 * pi * s25 * c * s2 * lr;
  const T sig4 = sig17 - s * sig16 + 2.0 * pi * s25 * c2 * s * lr;
  const T sig3 = pi * l * c25 * c * s - pi * r * c25 * c * s;
  const T sig2 = s * (R - sig24) + pi * s25 * c2 * s * lr;
  const T sig1 = c * (R * lam - sig24) - pi * s25 * c * s2 * lr;

  EomCoefficientsT<T> out;

  out.M = 0.5 * mb * (sig10 * sig10 * 2.0 + 2.0 * sig11 * sig11 +
                      2.0 * r * r * pi * pi * c25 * c25 * c2 * s2) +
          0.5 * mr * (2.0 * sig1 * sig1 + 2.0 * sig2 * sig2 + 2.0 * sig3 * sig3);

  out.F = 0.5 * (-mb * (2.0 * sig11 * sig9 - sig10 * sig8 * 2.0 -
                        2.0 * r * r * pi * pi * c25 * c25 * c * s3 +
                        2.0 * r * r * pi * pi * c25 * c25 * c3 * s +
                        2.0 * r * r * pi * pi * pi * c25 * s25 * c3 * s3) +
                 mb * (4.0 * sig11 * sig9 - sig10 * sig8 * 4.0 -
                       4.0 * r * r * pi * pi * c25 * c25 * c * s3 +
                       4.0 * r * r * pi * pi * c25 * c25 * c3 * s +
                       4.0 * r * r * pi * pi * pi * c25 * s25 * c3 * s3) +
                 mr * (sig1 * sig4 * 2.0 - 2.0 * sig3 * sig23 + sig2 * sig5 * 2.0) -
                 mr * (-2.0 * sig2 * sig7 + sig1 * sig4 * 2.0 - 4.0 * sig3 * sig23 +
                       sig2 * sig5 * 2.0 + 2.0 * sig1 * sig6));

  out.Q = 0.5 *
          (-mr * (sig1 * sig21 * 2.0 +
                  sig1 * (2.0 * ldot * pi * s25 * c * s2 + 2.0 * ldot * c25 * c) * 2.0 +
                  2.0 * sig2 * sig22 +
                  2.0 * sig2 * (2.0 * ldot * c25 * s - 2.0 * pi * ldot * s25 * c2 * s) +
                  sig15 - 2.0 * ldot * c25 * s * sig6 - 2.0 * ldot * c25 * c * sig7 -
                  6.0 * pi * ldot * c25 * c * s * sig3) +
           mr * (sig1 * sig21 * 2.0 + 2.0 * sig2 * sig22 + sig15 -
                 ldot * c25 * s * sig4 * 2.0 + ldot * c25 * c * sig5 * 2.0 -
                 2.0 * pi * ldot * c25 * c * s * sig3));

  out.P = -par.g_grav * (mr * sig3 - pi * mb * r * c25 * c * s) -
          0.5 * mr *
              (2.0 * lddot * s25 * sig3 - 2.0 * lddot * c25 * c * sig2 - sig12 + sig13 +
               2.0 * lddot * c25 * s * sig1 + sig14) +
          0.5 * mr * (-sig12 + sig13 + sig14);

  return out;
}

inline EomCoefficients eom_coefficients(const TrackGeometry& geom, const SystemParams& par,
                                        double phi, double l, double ldot, double lddot) {
  if (!(std::isfinite(phi) && std::isfinite(l) && std::isfinite(ldot) &&
        std::isfinite(lddot)))
    throw std::invalid_argument("eom_coefficients: non-finite input");
  if (!(l > 0.0)) throw std::invalid_argument("eom_coefficients: require l > 0");
  return eom_coefficients_t<double>(geom, par, phi, l, ldot, lddot);
}

inline constexpr double kSingularMassTol = 1e-9;

/// Explicit state derivative (phid, -(F phid^2 + Q phid + P)/M, ld, u).
template <typename T>
StateRatesT<T> explicit_rhs_t(const TrackGeometry& geom, const SystemParams& par,
                              const StateT<T>& s, const T& u) {
  const EomCoefficientsT<T> k = eom_coefficients_t(geom, par, s.phi, s.l, s.ldot, u);
  if (std::abs(value_of(k.M)) < kSingularMassTol)
    throw singular_mass_error("explicit_rhs: |M| below singular-mass tolerance");
  StateRatesT<T> out;
  out.phidot = s.phidot;
  out.phiddot = -(k.F * s.phidot * s.phidot + k.Q * s.phidot + k.P) / k.M;
  out.ldot = s.ldot;
  out.lddot = u;
  return out;
}

inline StateRates explicit_rhs(const TrackGeometry& geom, const SystemParams& par,
                               const State& s, Control c) {
  return explicit_rhs_t<double>(geom, par, s, c.u);
}

/// Residual of the implicit form, M phidd + F phid^2 + Q phid + P.
/// The trailing slots of sdot must be the integrator chain (ldot, u).
inline double implicit_residual(const TrackGeometry& geom, const SystemParams& par,
                                const StateRates& sdot, const State& s, Control c) {
  const EomCoefficients k = eom_coefficients(geom, par, s.phi, s.l, s.ldot, c.u);
  return k.M * sdot.phiddot + k.F * s.phidot * s.phidot + k.Q * s.phidot + k.P;
}

/// Total kinetic energy of the two point masses.
inline double kinetic_energy(const TrackGeometry& geom, const SystemParams& par,
                             const State& s) {
  const Vec3 vb = bike_velocity(geom, s.phi, s.phidot);
  const Vec3 vr = rider_velocity(geom, s.phi, s.phidot, s.l, s.ldot);
  return 0.5 * (par.m_b * squared_norm(vb) + par.m_r * squared_norm(vr));
}

/// Total potential energy, g * (m_b x3_b + m_r x3_r).
inline double potential_energy(const TrackGeometry& geom, const SystemParams& par,
                               const State& s) {
  const double zb = bike_position(geom, s.phi).x3;
  const double zr = rider_position(geom, s.phi, s.l).x3;
  return par.g_grav * (par.m_b * zb + par.m_r * zr);
}

/// Independent oracle for the equation of motion: expands
/// d/dt (dL/dphidot) - dL/dphi with every partial of L = K - U taken by
/// second-order central differences of the energy functions. Slow and
/// approximate by design; the closed-form coefficients above are checked
/// against it, never derived from it.
double euler_lagrange_residual_numeric(const TrackGeometry& geom, const SystemParams& par,
                                       const State& s, double phiddot, Control c);

}  // namespace pumptrack
