#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gustrata/rational.hpp"

namespace gustrata {

struct SlopeSegment {
  Rational slope;
  int multiplicity = 0;
  bool operator==(const SlopeSegment&) const = default;
};

/// Multiset of rational slopes, kept sorted ascending with equal slopes merged.
class NewtonPolygon {
 public:
  NewtonPolygon() = default;
  explicit NewtonPolygon(std::vector<SlopeSegment> segments);

  static NewtonPolygon isoclinic(Rational slope, int multiplicity) {
    return NewtonPolygon({{slope, multiplicity}});
  }

  const std::vector<SlopeSegment>& segments() const { return segments_; }
  int rank() const;
  Rational total_slope() const;
  /// Throws InvalidArgument on the empty polygon.
  Rational min_slope() const;
  int multiplicity(const Rational& slope) const;

  bool slopes_in_unit_interval() const;
  /// multiplicity(l) == multiplicity(1 - l) for every slope.
  bool is_symmetric() const;
  /// For every slope a/b in lowest terms, b divides its multiplicity.
  bool has_integral_breakpoints() const;

  /// Multiset union.
  NewtonPolygon operator+(const NewtonPolygon& other) const;
  NewtonPolygon scaled(const Rational& factor) const;
  bool operator==(const NewtonPolygon&) const = default;

  /// "{1/4x4, 3/4x4}".
  std::string to_string() const;

 private:
  std::vector<SlopeSegment> segments_;
};

/// Valuations of the roots of a polynomial given the valuations of its
/// coefficients (ascending; nullopt = zero at working precision), via the
/// lower convex hull of the points (i, v_i).
///
/// Throws PrecisionError when the constant coefficient is indistinguishable
/// from zero: the leftmost hull vertex is then unknown.
NewtonPolygon newton_polygon_from_valuations(const std::vector<std::optional<int>>& coefficient_valuations);

}  // namespace gustrata
