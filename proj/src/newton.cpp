#include "gustrata/newton.hpp"

#include <algorithm>
#include <map>

#include "gustrata/errors.hpp"

namespace gustrata {

NewtonPolygon::NewtonPolygon(std::vector<SlopeSegment> segments) {
  std::map<Rational, int> merged;
  for (const auto& s : segments) {
    if (s.multiplicity < 0) throw InvalidArgument("negative slope multiplicity");
    if (s.multiplicity > 0) merged[s.slope] += s.multiplicity;
  }
  for (const auto& [slope, mult] : merged) segments_.push_back({slope, mult});
}

int NewtonPolygon::rank() const {
  int r = 0;
  for (const auto& s : segments_) r += s.multiplicity;
  return r;
}

Rational NewtonPolygon::total_slope() const {
  Rational total(0);
  for (const auto& s : segments_) total += s.slope * s.multiplicity;
  return total;
}

Rational NewtonPolygon::min_slope() const {
  if (segments_.empty()) throw InvalidArgument("empty Newton polygon has no slopes");
  return segments_.front().slope;
}

int NewtonPolygon::multiplicity(const Rational& slope) const {
  for (const auto& s : segments_) {
    if (s.slope == slope) return s.multiplicity;
  }
  return 0;
}

bool NewtonPolygon::slopes_in_unit_interval() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const SlopeSegment& s) { return s.slope >= 0 && s.slope <= 1; });
}

bool NewtonPolygon::is_symmetric() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [this](const SlopeSegment& s) { return multiplicity(Rational(1) - s.slope) == s.multiplicity; });
}

bool NewtonPolygon::has_integral_breakpoints() const {
  return std::all_of(segments_.begin(), segments_.end(),
                     [](const SlopeSegment& s) { return s.multiplicity % s.slope.denominator() == 0; });
}

NewtonPolygon NewtonPolygon::operator+(const NewtonPolygon& other) const {
  std::vector<SlopeSegment> all = segments_;
  all.insert(all.end(), other.segments_.begin(), other.segments_.end());
  return NewtonPolygon(std::move(all));
}

NewtonPolygon NewtonPolygon::scaled(const Rational& factor) const {
  std::vector<SlopeSegment> out = segments_;
  for (auto& s : out) s.slope *= factor;
  return NewtonPolygon(std::move(out));
}

std::string NewtonPolygon::to_string() const {
  std::string out = "{";
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (i > 0) out += ", ";
    out += gustrata::to_string(segments_[i].slope) + "x" + std::to_string(segments_[i].multiplicity);
  }
  return out + "}";
}

NewtonPolygon newton_polygon_from_valuations(const std::vector<std::optional<int>>& vals) {
  if (vals.empty()) throw InvalidArgument("polynomial has no coefficients");
  if (!vals.front()) throw PrecisionError("insufficient precision: constant coefficient vanishes at working precision");

  struct Point {
    std::int64_t x;
    std::int64_t y;
  };
  std::vector<Point> hull;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!vals[i]) continue;
    const Point pt{static_cast<std::int64_t>(i), *vals[i]};
    // Monotone chain, lower hull: pop while the last turn is not counter-clockwise.
    while (hull.size() >= 2) {
      const Point& a = hull[hull.size() - 2];
      const Point& b = hull.back();
      const std::int64_t cross = (b.x - a.x) * (pt.y - a.y) - (b.y - a.y) * (pt.x - a.x);
      if (cross > 0) break;
      hull.pop_back();
    }
    hull.push_back(pt);
  }

  std::vector<SlopeSegment> segments;
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const std::int64_t dx = hull[k].x - hull[k - 1].x;
    const std::int64_t dy = hull[k].y - hull[k - 1].y;
    segments.push_back({Rational(-dy, dx), static_cast<int>(dx)});
  }
  return NewtonPolygon(std::move(segments));
}

}  // namespace gustrata
