#pragma once

#include <span>
#include <string>
#include <vector>

#include "pumptrack/geometry.hpp"
#include "pumptrack/simulate.hpp"

namespace pumptrack {

/// Uniformly sampled labelled 3-D marker positions.
struct MarkerSeries {
  double sample_rate = 100.0;  ///< [Hz]
  std::vector<std::string> marker_names;
  std::vector<std::vector<Vec3>> frames;  ///< frames[f][marker]

  int marker_index(const std::string& name) const;  // -1 if absent
};

/// One body segment: two endpoint markers, a mass fraction, and the
/// centre-of-mass position as a ratio from marker_a towards marker_b.
struct Segment {
  std::string name;
  double mass_fraction = 0.0;
  std::string marker_a;
  std::string marker_b;
  double com_ratio = 0.5;
};

struct SegmentModel {
  std::vector<Segment> segments;
  void validate() const;  ///< mass fractions must sum to 1 +- 1e-6
};

/// Uniformly sampled scalar signal (a distance or an acceleration).
struct ScalarSeries {
  double sample_rate = 100.0;  ///< [Hz]
  std::vector<double> values;
};

struct missing_marker_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Whole-body centre of mass per frame: mass-fraction-weighted sum of the
/// per-segment CoM points.
std::vector<Vec3> rider_com(const MarkerSeries& markers, const SegmentModel& model);

/// Per-frame Euclidean distance between two point series.
ScalarSeries distance_series(std::span<const Vec3> com, std::span<const Vec3> ref,
                             double sample_rate);

/// Second derivative of a scalar series: second-order central differences
/// at interior points, second-order one-sided stencils at the ends.
/// smooth_window > 1 applies a centred moving average first (default off).
ScalarSeries accel_series(const ScalarSeries& l, int smooth_window = 0);

/// Envelope of the two series: (min l, max l, min a, max a). The result is
/// reported raw; a degenerate envelope (constant input) is not an error.
Bounds extract_bounds(const ScalarSeries& l, const ScalarSeries& a);

// ---- file formats ----------------------------------------------------------

/// Scalar series CSV: header "t,<name>", one sample per row. The sample
/// rate is inferred from the first time step.
ScalarSeries load_scalar_series(const std::string& path);

/// Marker CSV: header "t,<marker>_x,<marker>_y,<marker>_z,...".
MarkerSeries load_marker_series(const std::string& path);

/// Two-point CSV: header "t,com_x,com_y,com_z,ref_x,ref_y,ref_z".
struct TwoPointSeries {
  double sample_rate = 100.0;
  std::vector<Vec3> com;
  std::vector<Vec3> ref;
};
TwoPointSeries load_two_point_series(const std::string& path);

/// Segment model file: "segment <name> <mass_fraction> <marker_a> <marker_b>
/// <com_ratio>" records, '#' comments.
SegmentModel load_segment_model(const std::string& path);

}  // namespace pumptrack
