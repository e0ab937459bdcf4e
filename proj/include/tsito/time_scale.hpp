#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace tsito {

class ScaleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed interval [a, b]; a == b encodes an isolated point.
struct Segment {
  double a = 0.0;
  double b = 0.0;

  bool is_point() const { return a == b; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

/// Open interval (s_minus, s_plus) missing from the scale, with both ends in it.
struct GapInterval {
  double s_minus = 0.0;
  double s_plus = 0.0;

  double length() const { return s_plus - s_minus; }
  friend bool operator==(const GapInterval&, const GapInterval&) = default;
};

namespace piece {
struct Interval {
  double a;
  double b;
};
struct Point {
  double c;
};
/// {q^k : kmin <= k <= kmax}, optionally with 0.
struct QScale {
  double q;
  int kmin;
  int kmax;
  bool include_zero;
};
}  // namespace piece

using ScalePiece = std::variant<piece::Interval, piece::Point, piece::QScale>;

/// A nonempty closed subset of [0, inf) stored as sorted, strictly disjoint
/// closed segments. Immutable once built.
class TimeScale {
 public:
  static constexpr std::size_t kDefaultSegmentCap = std::size_t{1} << 20;

  /// Expands q-scales, sorts and merges overlapping or touching pieces.
  /// Throws ScaleError on empty input, negative coordinates, q <= 1,
  /// reversed intervals or more than `segment_cap` resulting segments.
  static TimeScale canonicalize(const std::vector<ScalePiece>& pieces,
                                std::size_t segment_cap = kDefaultSegmentCap);

  const std::vector<Segment>& segments() const { return segments_; }
  double min() const { return segments_.front().a; }
  double max() const { return segments_.back().b; }

  bool contains(double t) const;
  bool is_discrete() const;

  double sigma(double t) const;
  double rho(double t) const;
  double mu(double t) const;
  bool right_scattered(double t) const { return sigma(t) > t; }
  bool left_scattered(double t) const { return rho(t) < t; }

  /// Greatest member <= t.
  double sup_le(double t) const;

  /// Gaps lying inside (t1, t2), sorted. Both endpoints must be members.
  std::vector<GapInterval> gaps_between(double t1, double t2) const;

 private:
  explicit TimeScale(std::vector<Segment> segments) : segments_(std::move(segments)) {}

  // Index of the segment containing t, or npos.
  std::size_t find(double t) const;
  std::size_t require(double t, const char* what) const;

  std::vector<Segment> segments_;
};

enum class SubintervalClass : std::uint8_t { dense, gap };  // classes (a) and (b)

/// Refinement grid over [t1, t2]: every gap endpoint is present, gaps are
/// single (b) subintervals, and every (a) subinterval is no longer than 2^-n.
struct WorkingPartition {
  std::vector<double> times;
  std::vector<SubintervalClass> labels;  // labels[i] describes (times[i], times[i+1])
  int level = 0;

  std::size_t size() const { return times.size(); }
  std::size_t subintervals() const { return labels.size(); }
  double start() const { return times.front(); }
  double end() const { return times.back(); }
  /// Position of an exact time value; throws std::out_of_range if absent.
  std::size_t index_of(double t) const;
  bool has_time(double t) const;
};

WorkingPartition partition(const TimeScale& scale, double t1, double t2, int level);

/// Every time of `coarse` appears in `fine`.
bool refines(const WorkingPartition& fine, const WorkingPartition& coarse);

}  // namespace tsito
