#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pumptrack {

inline constexpr double pi = std::numbers::pi;

/// Shape constants of the elliptic-torus track surface.
struct TrackGeometry {
  double R = 3.0;       ///< major radius [m]
  double r = 1.0;       ///< tube radius [m]
  double lambda = 3.0;  ///< ellipse stretching weight

  void validate() const {
    if (!(R > r) || !(r > 0.0))
      throw std::invalid_argument("TrackGeometry: require R > r > 0");
    if (!(lambda >= 1.0))
      throw std::invalid_argument("TrackGeometry: require lambda >= 1");
  }
};

/// Reduce an angle into [0, 2*pi).
inline double wrap_two_pi(double a) {
  double w = std::fmod(a, 2.0 * pi);
  if (w < 0.0) w += 2.0 * pi;
  return w;
}

/// Chart coordinates on the torus surface. theta is stored reduced into
/// [0, 2*pi); phi is kept as-is so multi-lap arc positions stay monotone.
struct SurfaceCoord {
  double phi = 0.0;
  double theta = 0.0;

  SurfaceCoord() = default;
  SurfaceCoord(double phi_, double theta_) : phi(phi_), theta(wrap_two_pi(theta_)) {}
};

template <typename T>
struct Vec3T {
  T x1{}, x2{}, x3{};
};

using Vec3 = Vec3T<double>;

template <typename T>
inline Vec3T<T> operator+(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3};
}

template <typename T>
inline Vec3T<T> operator-(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3};
}

template <typename T>
inline Vec3T<T> operator*(const Vec3T<T>& a, double s) {
  return {a.x1 * s, a.x2 * s, a.x3 * s};
}

template <typename T>
inline T squared_norm(const Vec3T<T>& a) {
  return a.x1 * a.x1 + a.x2 * a.x2 + a.x3 * a.x3;
}

inline double norm(const Vec3& a) { return std::sqrt(squared_norm(a)); }

/// Tube angle of the fixed riding line: b(phi) = (pi/2) cos^2(phi).
/// Inner line on the straights, outer line at the curve apexes.
template <typename T>
inline T path_theta(const T& phi) {
  using std::cos;
  const T c = cos(phi);
  return 0.5 * pi * c * c;
}

/// d b / d phi = -pi cos(phi) sin(phi).
template <typename T>
inline T path_theta_prime(const T& phi) {
  using std::cos;
  using std::sin;
  return -pi * cos(phi) * sin(phi);
}

/// Chart map of the stretched torus,
///   g(phi, theta) = ((R + r cos th) cos phi, (lambda R + r cos th) sin phi, r (1 - sin th)).
template <typename T>
inline Vec3T<T> surface_point_at(const TrackGeometry& g, const T& phi, const T& theta) {
  using std::cos;
  using std::sin;
  const T cphi = cos(phi), sphi = sin(phi);
  const T cth = cos(theta), sth = sin(theta);
  return {(g.R + g.r * cth) * cphi, (g.lambda * g.R + g.r * cth) * sphi,
          g.r * (1.0 - sth)};
}

inline Vec3 surface_point(const TrackGeometry& g, const SurfaceCoord& c) {
  return surface_point_at(g, c.phi, c.theta);
}

/// Bike point mass, pinned to the riding line: g(phi, b(phi)).
template <typename T>
inline Vec3T<T> bike_position(const TrackGeometry& g, const T& phi) {
  return surface_point_at(g, phi, path_theta(phi));
}

/// Rider point mass, offset a link length l from the bike along
///   (-cos b cos phi, -cos b sin phi, sin b),
/// which is unit by construction.
template <typename T>
inline Vec3T<T> rider_position(const TrackGeometry& g, const T& phi, const T& l) {
  using std::cos;
  using std::sin;
  const T b = path_theta(phi);
  const T cb = cos(b), sb = sin(b);
  const T cphi = cos(phi), sphi = sin(phi);
  return {(g.R + (g.r - l) * cb) * cphi, (g.lambda * g.R + (g.r - l) * cb) * sphi,
          g.r * (1.0 - sb) + l * sb};
}

/// Velocity of the bike along the line: (dg/dphi + dg/dtheta * b'(phi)) * phidot.
template <typename T>
inline Vec3T<T> bike_velocity(const TrackGeometry& g, const T& phi, const T& phidot) {
  using std::cos;
  using std::sin;
  const T b = path_theta(phi);
  const T bp = path_theta_prime(phi);
  const T cphi = cos(phi), sphi = sin(phi);
  const T cb = cos(b), sb = sin(b);
  const T dx1 = -(g.R + g.r * cb) * sphi - g.r * sb * bp * cphi;
  const T dx2 = (g.lambda * g.R + g.r * cb) * cphi - g.r * sb * bp * sphi;
  const T dx3 = -g.r * cb * bp;
  return {dx1 * phidot, dx2 * phidot, dx3 * phidot};
}

/// Rider velocity by the same chain rule, plus the link-rate contribution.
template <typename T>
inline Vec3T<T> rider_velocity(const TrackGeometry& g, const T& phi, const T& phidot,
                               const T& l, const T& ldot) {
  using std::cos;
  using std::sin;
  const T b = path_theta(phi);
  const T bp = path_theta_prime(phi);
  const T cphi = cos(phi), sphi = sin(phi);
  const T cb = cos(b), sb = sin(b);
  const T radial = g.r - l;
  // d/dphi of the radial offset (r - l) cos b and of the height term.
  const T dradial = -radial * sb * bp;
  const T dphi_x1 = -(g.R + radial * cb) * sphi + dradial * cphi;
  const T dphi_x2 = (g.lambda * g.R + radial * cb) * cphi + dradial * sphi;
  const T dphi_x3 = (l - g.r) * cb * bp;
  const T dl_x1 = -cb * cphi;
  const T dl_x2 = -cb * sphi;
  const T dl_x3 = sb;
  return {dphi_x1 * phidot + dl_x1 * ldot, dphi_x2 * phidot + dl_x2 * ldot,
          dphi_x3 * phidot + dl_x3 * ldot};
}

}  // namespace pumptrack
