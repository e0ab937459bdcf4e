#include "tsito/time_scale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tsito {
namespace {

constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
constexpr std::size_t kMaxPartitionPoints = std::size_t{1} << 26;

void check_coordinate(double v) {
  if (!std::isfinite(v) || v < 0.0) {
    throw ScaleError("scale coordinate must be finite and >= 0, got " + std::to_string(v));
  }
}

struct Expander {
  std::vector<Segment>& out;
  std::size_t cap;

  void push(Segment s) {
    if (out.size() >= cap) {
      throw ScaleError("scale exceeds the segment cap of " + std::to_string(cap));
    }
    out.push_back(s);
  }

  void operator()(const piece::Interval& p) {
    check_coordinate(p.a);
    check_coordinate(p.b);
    if (p.a > p.b) throw ScaleError("interval endpoints reversed");
    push({p.a, p.b});
  }
  void operator()(const piece::Point& p) {
    check_coordinate(p.c);
    push({p.c, p.c});
  }
  void operator()(const piece::QScale& p) {
    if (!(p.q > 1.0) || !std::isfinite(p.q)) throw ScaleError("q-scale needs q > 1");
    if (p.kmin > p.kmax) throw ScaleError("q-scale needs kmin <= kmax");
    if (p.include_zero) push({0.0, 0.0});
    for (int k = p.kmin; k <= p.kmax; ++k) {
      const double v = std::pow(p.q, k);
      check_coordinate(v);
      push({v, v});
    }
  }
};

}  // namespace

TimeScale TimeScale::canonicalize(const std::vector<ScalePiece>& pieces,
                                  std::size_t segment_cap) {
  if (pieces.empty()) throw ScaleError("time scale needs at least one piece");
  std::vector<Segment> raw;
  Expander expand{raw, segment_cap};
  for (const auto& p : pieces) std::visit(expand, p);

  std::sort(raw.begin(), raw.end(),
            [](const Segment& l, const Segment& r) { return l.a < r.a || (l.a == r.a && l.b < r.b); });
  std::vector<Segment> merged;
  merged.reserve(raw.size());
  for (const auto& s : raw) {
    if (!merged.empty() && s.a <= merged.back().b) {
      merged.back().b = std::max(merged.back().b, s.b);
    } else {
      merged.push_back(s);
    }
  }
  return TimeScale(std::move(merged));
}

std::size_t TimeScale::find(double t) const {
  // first segment whose right end is >= t
  auto it = std::lower_bound(segments_.begin(), segments_.end(), t,
                             [](const Segment& s, double v) { return s.b < v; });
  if (it == segments_.end() || it->a > t) return npos;
  return static_cast<std::size_t>(it - segments_.begin());
}

std::size_t TimeScale::require(double t, const char* what) const {
  const auto i = find(t);
  if (i == npos) throw ScaleError(std::string(what) + ": " + std::to_string(t) + " is not in the time scale");
  return i;
}

bool TimeScale::contains(double t) const { return find(t) != npos; }

bool TimeScale::is_discrete() const {
  return std::all_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.is_point(); });
}

double TimeScale::sigma(double t) const {
  const auto i = require(t, "sigma");
  if (t < segments_[i].b) return t;
  return i + 1 < segments_.size() ? segments_[i + 1].a : t;
}

double TimeScale::rho(double t) const {
  const auto i = require(t, "rho");
  if (t > segments_[i].a) return t;
  return i > 0 ? segments_[i - 1].b : t;
}

double TimeScale::mu(double t) const { return sigma(t) - t; }

double TimeScale::sup_le(double t) const {
  if (!(t >= min())) throw ScaleError("sup_le: " + std::to_string(t) + " lies below min of the scale");
  // last segment starting at or before t
  auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                             [](double v, const Segment& s) { return v < s.a; });
  --it;
  return std::min(t, it->b);
}

std::vector<GapInterval> TimeScale::gaps_between(double t1, double t2) const {
  require(t1, "gaps_between");
  require(t2, "gaps_between");
  std::vector<GapInterval> gaps;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) {
    const double lo = segments_[i].b;
    const double hi = segments_[i + 1].a;
    if (lo >= t1 && hi <= t2) gaps.push_back({lo, hi});
  }
  return gaps;
}

std::size_t WorkingPartition::index_of(double t) const {
  auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    throw std::out_of_range("time " + std::to_string(t) + " is not a partition time");
  }
  return static_cast<std::size_t>(it - times.begin());
}

bool WorkingPartition::has_time(double t) const {
  return std::binary_search(times.begin(), times.end(), t);
}

WorkingPartition partition(const TimeScale& scale, double t1, double t2, int level) {
  if (!(t1 < t2)) throw ScaleError("partition needs t1 < t2");
  if (!scale.contains(t1) || !scale.contains(t2)) throw ScaleError("partition endpoints must be scale members");
  if (level < 0 || level > 40) throw ScaleError("refinement level must be in [0, 40]");

  WorkingPartition p;
  p.level = level;
  const double steps_per_unit = std::ldexp(1.0, level);

  for (const auto& seg : scale.segments()) {
    if (seg.b < t1) continue;
    if (seg.a > t2) break;
    const double a = std::max(seg.a, t1);
    const double b = std::min(seg.b, t2);
    if (!p.times.empty()) p.labels.push_back(SubintervalClass::gap);
    p.times.push_back(a);
    if (a == b) continue;

    const double length = b - a;
    const double m = std::ceil(length) * steps_per_unit;
    if (m + static_cast<double>(p.times.size()) > static_cast<double>(kMaxPartitionPoints)) {
      throw ScaleError("partition too large at level " + std::to_string(level));
    }
    const auto steps = static_cast<std::size_t>(m);
    // (length * i) / m is bitwise identical for (2i, 2m), so levels nest exactly.
    for (std::size_t i = 1; i < steps; ++i) {
      p.times.push_back(a + (length * static_cast<double>(i)) / m);
      p.labels.push_back(SubintervalClass::dense);
    }
    p.times.push_back(b);
    p.labels.push_back(SubintervalClass::dense);
  }
  return p;
}

bool refines(const WorkingPartition& fine, const WorkingPartition& coarse) {
  return std::includes(fine.times.begin(), fine.times.end(), coarse.times.begin(), coarse.times.end());
}

}  // namespace tsito
