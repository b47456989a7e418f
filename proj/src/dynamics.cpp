#include "pumptrack/dynamics.hpp"

namespace pumptrack {

namespace {
constexpr double kFdStep = 1e-5;
}

double euler_lagrange_residual_numeric(const TrackGeometry& geom, const SystemParams& par,
                                       const State& s, double phiddot, Control c) {
  validate(s);

  const auto lagrangian = [&](double phi, double phidot, double l, double ldot) {
    const State q{phi, phidot, l, ldot};
    return kinetic_energy(geom, par, q) - potential_energy(geom, par, q);
  };

  const double h = kFdStep;
  const double phi = s.phi, pd = s.phidot, l = s.l, ld = s.ldot;

  // dL/dphi
  const double L_phi =
      (lagrangian(phi + h, pd, l, ld) - lagrangian(phi - h, pd, l, ld)) / (2.0 * h);

  // d2L/dphidot2
  const double L_pd_pd = (lagrangian(phi, pd + h, l, ld) - 2.0 * lagrangian(phi, pd, l, ld) +
                          lagrangian(phi, pd - h, l, ld)) /
                         (h * h);

  // Mixed second partials against phidot.
  const auto mixed = [&](auto eval) {
    return (eval(h, h) - eval(h, -h) - eval(-h, h) + eval(-h, -h)) / (4.0 * h * h);
  };
  const double L_pd_phi = mixed(
      [&](double dpd, double dphi) { return lagrangian(phi + dphi, pd + dpd, l, ld); });
  const double L_pd_l =
      mixed([&](double dpd, double dl) { return lagrangian(phi, pd + dpd, l + dl, ld); });
  const double L_pd_ld =
      mixed([&](double dpd, double dld) { return lagrangian(phi, pd + dpd, l, ld + dld); });

  return L_pd_pd * phiddot + L_pd_phi * pd + L_pd_l * ld + L_pd_ld * c.u - L_phi;
}

}  // namespace pumptrack
