#include "pumptrack/mocap.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pumptrack/csv.hpp"

namespace pumptrack {

int MarkerSeries::marker_index(const std::string& name) const {
  for (std::size_t i = 0; i < marker_names.size(); ++i)
    if (marker_names[i] == name) return static_cast<int>(i);
  return -1;
}

void SegmentModel::validate() const {
  if (segments.empty()) throw std::invalid_argument("SegmentModel: no segments");
  double total = 0.0;
  for (const Segment& s : segments) total += s.mass_fraction;
  if (std::abs(total - 1.0) > 1e-6)
    throw std::invalid_argument("SegmentModel: mass fractions sum to " +
                                std::to_string(total) + ", expected 1");
}

std::vector<Vec3> rider_com(const MarkerSeries& markers, const SegmentModel& model) {
  model.validate();

  struct Resolved {
    int a, b;
    double frac, ratio;
    const std::string* name_a;
    const std::string* name_b;
  };
  std::vector<Resolved> resolved;
  resolved.reserve(model.segments.size());
  for (const Segment& s : model.segments) {
    const int ia = markers.marker_index(s.marker_a);
    const int ib = markers.marker_index(s.marker_b);
    if (ia < 0)
      throw missing_marker_error("rider_com: marker '" + s.marker_a + "' not in series");
    if (ib < 0)
      throw missing_marker_error("rider_com: marker '" + s.marker_b + "' not in series");
    resolved.push_back({ia, ib, s.mass_fraction, s.com_ratio, &s.marker_a, &s.marker_b});
  }

  const auto finite = [](const Vec3& p) {
    return std::isfinite(p.x1) && std::isfinite(p.x2) && std::isfinite(p.x3);
  };

  std::vector<Vec3> out;
  out.reserve(markers.frames.size());
  for (std::size_t f = 0; f < markers.frames.size(); ++f) {
    const auto& frame = markers.frames[f];
    Vec3 com{0.0, 0.0, 0.0};
    for (const Resolved& seg : resolved) {
      const Vec3& pa = frame[seg.a];
      const Vec3& pb = frame[seg.b];
      if (!finite(pa))
        throw missing_marker_error("rider_com: frame " + std::to_string(f) +
                                   ": marker '" + *seg.name_a + "' missing");
      if (!finite(pb))
        throw missing_marker_error("rider_com: frame " + std::to_string(f) +
                                   ": marker '" + *seg.name_b + "' missing");
      const Vec3 seg_com = pa + (pb - pa) * seg.ratio;
      com = com + seg_com * seg.frac;
    }
    out.push_back(com);
  }
  return out;
}

ScalarSeries distance_series(std::span<const Vec3> com, std::span<const Vec3> ref,
                             double sample_rate) {
  if (com.size() != ref.size())
    throw std::invalid_argument("distance_series: length mismatch (" +
                                std::to_string(com.size()) + " vs " +
                                std::to_string(ref.size()) + ")");
  ScalarSeries out;
  out.sample_rate = sample_rate;
  out.values.reserve(com.size());
  for (std::size_t i = 0; i < com.size(); ++i) out.values.push_back(norm(com[i] - ref[i]));
  return out;
}

namespace {

std::vector<double> moving_average(const std::vector<double>& v, int window) {
  if (window <= 1) return v;
  const int half = window / 2;
  const int n = static_cast<int>(v.size());
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    const int a = std::max(0, i - half);
    const int b = std::min(n - 1, i + half);
    double sum = 0.0;
    for (int j = a; j <= b; ++j) sum += v[j];
    out[i] = sum / (b - a + 1);
  }
  return out;
}

}  // namespace

ScalarSeries accel_series(const ScalarSeries& l, int smooth_window) {
  const std::size_t n = l.values.size();
  if (n < 3) throw std::invalid_argument("accel_series: need at least 3 samples");
  const std::vector<double> v = moving_average(l.values, smooth_window);
  const double fs2 = l.sample_rate * l.sample_rate;

  ScalarSeries out;
  out.sample_rate = l.sample_rate;
  out.values.resize(n);
  for (std::size_t i = 1; i + 1 < n; ++i)
    out.values[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) * fs2;
  if (n >= 4) {
    out.values[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) * fs2;
    out.values[n - 1] = (2.0 * v[n - 1] - 5.0 * v[n - 2] + 4.0 * v[n - 3] - v[n - 4]) * fs2;
  } else {
    out.values[0] = out.values[1];
    out.values[n - 1] = out.values[1];
  }
  return out;
}

Bounds extract_bounds(const ScalarSeries& l, const ScalarSeries& a) {
  if (l.values.empty() || a.values.empty())
    throw std::invalid_argument("extract_bounds: empty series");
  const auto [l_lo, l_hi] = std::minmax_element(l.values.begin(), l.values.end());
  const auto [a_lo, a_hi] = std::minmax_element(a.values.begin(), a.values.end());
  Bounds b;
  b.l_min = *l_lo;
  b.l_max = *l_hi;
  b.u_min = *a_lo;
  b.u_max = *a_hi;
  return b;
}

namespace {

double infer_rate(const std::vector<std::vector<double>>& rows, const std::string& origin) {
  if (rows.size() >= 2) {
    const double dt = rows[1][0] - rows[0][0];
    if (dt > 0.0) return 1.0 / dt;
  }
  if (rows.empty()) throw parse_error(origin + ": no data rows");
  return 100.0;  // single-sample series: keep the conventional default
}

}  // namespace

ScalarSeries load_scalar_series(const std::string& path) {
  const CsvTable t = load_csv(path);
  if (t.columns.size() != 2 || t.columns[0] != "t")
    throw parse_error(path + ": expected header 't,<name>'");
  ScalarSeries out;
  out.sample_rate = infer_rate(t.rows, path);
  out.values.reserve(t.rows.size());
  for (const auto& row : t.rows) out.values.push_back(row[1]);
  return out;
}

MarkerSeries load_marker_series(const std::string& path) {
  const CsvTable t = load_csv(path);
  if (t.columns.empty() || t.columns[0] != "t")
    throw parse_error(path + ": first column must be 't'");
  if ((t.columns.size() - 1) % 3 != 0)
    throw parse_error(path + ": marker columns must come in _x,_y,_z triplets");

  MarkerSeries out;
  const std::size_t markers = (t.columns.size() - 1) / 3;
  for (std::size_t m = 0; m < markers; ++m) {
    const std::string& cx = t.columns[1 + 3 * m];
    if (cx.size() < 3 || cx.substr(cx.size() - 2) != "_x")
      throw parse_error(path + ": expected '<marker>_x', got '" + cx + "'");
    const std::string name = cx.substr(0, cx.size() - 2);
    if (t.columns[2 + 3 * m] != name + "_y" || t.columns[3 + 3 * m] != name + "_z")
      throw parse_error(path + ": columns for marker '" + name + "' not in _x,_y,_z order");
    out.marker_names.push_back(name);
  }
  out.sample_rate = infer_rate(t.rows, path);
  out.frames.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    std::vector<Vec3> frame(markers);
    for (std::size_t m = 0; m < markers; ++m)
      frame[m] = {row[1 + 3 * m], row[2 + 3 * m], row[3 + 3 * m]};
    out.frames.push_back(std::move(frame));
  }
  return out;
}

TwoPointSeries load_two_point_series(const std::string& path) {
  const CsvTable t = load_csv(path);
  const std::vector<std::string> expected{"t",     "com_x", "com_y", "com_z",
                                          "ref_x", "ref_y", "ref_z"};
  if (t.columns != expected)
    throw parse_error(path + ": expected header 't,com_x,com_y,com_z,ref_x,ref_y,ref_z'");
  TwoPointSeries out;
  out.sample_rate = infer_rate(t.rows, path);
  for (const auto& row : t.rows) {
    out.com.push_back({row[1], row[2], row[3]});
    out.ref.push_back({row[4], row[5], row[6]});
  }
  return out;
}

SegmentModel load_segment_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw parse_error("cannot open: " + path);
  SegmentModel model;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tag;
    if (!(ss >> tag)) continue;
    if (tag != "segment")
      throw parse_error(path + ":" + std::to_string(line_no) +
                        ": expected 'segment', got '" + tag + "'");
    Segment seg;
    if (!(ss >> seg.name >> seg.mass_fraction >> seg.marker_a >> seg.marker_b >>
          seg.com_ratio))
      throw parse_error(path + ":" + std::to_string(line_no) +
                        ": expected 'segment <name> <fraction> <marker_a> <marker_b> "
                        "<com_ratio>'");
    model.segments.push_back(std::move(seg));
  }
  model.validate();
  return model;
}

}  // namespace pumptrack
