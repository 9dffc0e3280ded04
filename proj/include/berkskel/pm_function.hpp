#pragma once

// Piecewise-monomial functions of radii, stored in logarithmic coordinates
// where they become continuous piecewise-affine functions on [0, inf].

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "berkskel/error.hpp"
#include "berkskel/rational.hpp"

namespace berkskel {

enum class Side { left, right };

/// Continuous piecewise-affine function on [0, inf) with finitely many breaks.
///
/// Pieces are [0,b1], [b1,b2], ..., [bk,inf). The representation is kept
/// canonical: breaks are strictly positive and strictly increasing, and
/// neighbouring pieces never share a slope, so two functions are equal iff
/// their representations are equal.
class PiecewiseAffine {
 public:
  PiecewiseAffine() : slopes_{Rational(0)} {}

  // `slopes` has one more entry than `breaks`. Breaks may repeat or sit at 0
  // (zero-width pieces are dropped) but must not decrease.
  PiecewiseAffine(Rational initial, std::vector<Rational> slopes, std::vector<Rational> breaks)
      : initial_(std::move(initial)) {
    if (slopes.size() != breaks.size() + 1) {
      fail(ErrorKind::InvalidFunction, "need exactly one more slope than breakpoints");
    }
    Rational previous = 0;
    for (const auto& b : breaks) {
      if (b < previous) fail(ErrorKind::InvalidFunction, "breakpoints must be nondecreasing and nonnegative");
      previous = b;
    }
    // Drop zero-width pieces: piece i spans [breaks[i-1], breaks[i]].
    std::vector<Rational> kept_slopes;
    std::vector<Rational> kept_breaks;
    Rational start = 0;
    for (std::size_t i = 0; i < slopes.size(); ++i) {
      bool last = i + 1 == slopes.size();
      if (!last && breaks[i] == start) continue;
      if (!kept_slopes.empty() && kept_slopes.back() == slopes[i]) {
        if (!last) kept_breaks.back() = breaks[i];
        else kept_breaks.pop_back();
      } else {
        kept_slopes.push_back(slopes[i]);
        if (!last) kept_breaks.push_back(breaks[i]);
      }
      if (!last) start = breaks[i];
    }
    slopes_ = std::move(kept_slopes);
    breaks_ = std::move(kept_breaks);
  }

  static PiecewiseAffine affine(Rational initial, Rational slope) {
    return PiecewiseAffine(std::move(initial), {std::move(slope)}, {});
  }

  const Rational& initial_value() const { return initial_; }
  const std::vector<Rational>& breaks() const { return breaks_; }
  const std::vector<Rational>& slopes() const { return slopes_; }
  const Rational& terminal_slope() const { return slopes_.back(); }
  std::size_t piece_count() const { return slopes_.size(); }

  // Index of the piece containing x, taking the right-hand piece at a break.
  std::size_t piece_at(const Rational& x) const {
    return static_cast<std::size_t>(std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin());
  }

  // Start of piece i (0 for the first piece).
  Rational piece_start(std::size_t i) const { return i == 0 ? Rational(0) : breaks_[i - 1]; }

  Rational value_at_break(std::size_t i) const {
    Rational value = initial_;
    Rational start = 0;
    for (std::size_t j = 0; j <= i && j < breaks_.size(); ++j) {
      value += slopes_[j] * (breaks_[j] - start);
      start = breaks_[j];
    }
    return value;
  }

  Rational operator()(const Rational& x) const {
    if (x < 0) fail(ErrorKind::OutOfRange, "evaluation below 0");
    std::size_t i = piece_at(x);
    Rational base = i == 0 ? initial_ : value_at_break(i - 1);
    return base + slopes_[i] * (x - piece_start(i));
  }

  // One-sided slope. The left slope at 0 is not defined.
  const Rational& slope_at(const Rational& x, Side side) const {
    if (x < 0) fail(ErrorKind::OutOfRange, "slope below 0");
    if (side == Side::right) return slopes_[piece_at(x)];
    if (x == 0) fail(ErrorKind::OutOfRange, "left slope at 0");
    auto it = std::lower_bound(breaks_.begin(), breaks_.end(), x);
    return slopes_[static_cast<std::size_t>(it - breaks_.begin())];
  }

  // Value in the limit x -> inf: nullopt for +inf.
  std::optional<Rational> limit_at_infinity() const {
    if (terminal_slope() > 0) return std::nullopt;
    if (terminal_slope() < 0) fail(ErrorKind::InvalidFunction, "function decreases without bound");
    return breaks_.empty() ? initial_ : value_at_break(breaks_.size() - 1);
  }

  // Terminal intercept c with f(x) = terminal_slope * x + c for large x.
  Rational terminal_intercept() const {
    if (breaks_.empty()) return initial_;
    return value_at_break(breaks_.size() - 1) - terminal_slope() * breaks_.back();
  }

  friend bool operator==(const PiecewiseAffine&, const PiecewiseAffine&) = default;

 private:
  Rational initial_{0};
  std::vector<Rational> slopes_;
  std::vector<Rational> breaks_;
};

// Equality as functions on [0, length]; length == nullopt means [0, inf).
inline bool equal_on(const PiecewiseAffine& f, const PiecewiseAffine& g, const std::optional<Rational>& length) {
  if (!length) return f == g;
  std::vector<Rational> points{Rational(0), *length};
  for (const auto* h : {&f, &g}) {
    for (const auto& b : h->breaks()) {
      if (b < *length) points.push_back(b);
    }
  }
  return std::all_of(points.begin(), points.end(), [&](const Rational& x) { return f(x) == g(x); });
}

/// Monotone increasing piecewise-affine function: every slope is positive and
/// the value at 0 is a log value. Models f|_I for pm maps of intervals.
class PMFunction {
 public:
  PMFunction() : affine_(PiecewiseAffine::affine(0, 1)) {}

  explicit PMFunction(PiecewiseAffine affine) : affine_(std::move(affine)) {
    if (affine_.initial_value() < 0) fail(ErrorKind::NegativeLogValue, "initial value below 0");
    for (const auto& s : affine_.slopes()) {
      if (s <= 0) fail(ErrorKind::InvalidFunction, "pm functions here are strictly increasing; slope " + format_rational(s));
    }
  }

  PMFunction(Rational initial, std::vector<Rational> slopes, std::vector<Rational> breaks)
      : PMFunction(PiecewiseAffine(std::move(initial), std::move(slopes), std::move(breaks))) {}

  static PMFunction identity() { return PMFunction(); }

  const PiecewiseAffine& affine() const { return affine_; }
  const Rational& initial_value() const { return affine_.initial_value(); }
  const std::vector<Rational>& breaks() const { return affine_.breaks(); }
  const std::vector<Rational>& slopes() const { return affine_.slopes(); }
  const Rational& terminal_slope() const { return affine_.terminal_slope(); }
  bool is_identity() const { return *this == identity(); }

  LogValue operator()(const LogValue& x) const {
    if (x.is_infinite()) return LogValue::infinity();
    return LogValue(affine_(x.value()));
  }
  Rational operator()(const Rational& x) const { return affine_(x); }

  const Rational& slope_at(const Rational& x, Side side) const { return affine_.slope_at(x, side); }

  // The unique x with f(x) = y, for y >= f(0).
  Rational preimage(const Rational& y) const {
    if (y < initial_value()) fail(ErrorKind::OutOfRange, "value below f(0) has no preimage");
    std::size_t i = 0;
    Rational base = initial_value();
    for (; i < breaks().size(); ++i) {
      Rational next = affine_.value_at_break(i);
      if (y < next) break;
      base = next;
    }
    return affine_.piece_start(i) + (y - base) / slopes()[i];
  }

  friend bool operator==(const PMFunction&, const PMFunction&) = default;

 private:
  PiecewiseAffine affine_;
};

inline LogValue evaluate(const PMFunction& f, const LogValue& x) { return f(x); }

inline Rational slope_at(const PMFunction& f, const LogValue& x, Side side) {
  if (x.is_infinite()) {
    if (side == Side::right) fail(ErrorKind::OutOfRange, "right slope at inf");
    return f.terminal_slope();
  }
  return f.slope_at(x.value(), side);
}

/// g o f. Breaks of the composite are the breaks of f together with the
/// f-preimages of the breaks of g that lie in the range of f.
inline PMFunction compose(const PMFunction& g, const PMFunction& f) {
  std::vector<Rational> points = f.breaks();
  for (const auto& b : g.breaks()) {
    if (b > f.initial_value()) points.push_back(f.preimage(b));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<Rational> slopes;
  slopes.reserve(points.size() + 1);
  Rational start = 0;
  for (std::size_t i = 0; i <= points.size(); ++i) {
    slopes.push_back(g.slope_at(f(start), Side::right) * f.slope_at(start, Side::right));
    if (i < points.size()) start = points[i];
  }
  return PMFunction(g(f.initial_value()), std::move(slopes), std::move(points));
}

/// An element of the group of pm bijections of [0,1], in log coordinates: a
/// strictly increasing pm function fixing 0 and unbounded at inf.
///
/// Morphism profiles additionally have non-increasing p-power slopes; that is
/// checked by is_morphism_profile, not enforced here, because the group is
/// closed under inverse while the morphism profiles are not.
class ProfileFunction {
 public:
  ProfileFunction() = default;

  explicit ProfileFunction(PMFunction f) : f_(std::move(f)) {
    if (f_.initial_value() != 0) fail(ErrorKind::InvalidFunction, "profile functions fix 0");
  }

  ProfileFunction(std::vector<Rational> slopes, std::vector<Rational> breaks)
      : ProfileFunction(PMFunction(0, std::move(slopes), std::move(breaks))) {}

  static ProfileFunction identity() { return ProfileFunction(); }

  const PMFunction& function() const { return f_; }
  const std::vector<Rational>& breaks() const { return f_.breaks(); }
  const std::vector<Rational>& slopes() const { return f_.slopes(); }
  const Rational& terminal_slope() const { return f_.terminal_slope(); }
  bool is_identity() const { return f_.is_identity(); }

  LogValue operator()(const LogValue& x) const { return f_(x); }
  Rational operator()(const Rational& x) const { return f_(x); }

  friend bool operator==(const ProfileFunction&, const ProfileFunction&) = default;

 private:
  PMFunction f_;
};

inline ProfileFunction compose(const ProfileFunction& g, const ProfileFunction& f) {
  return ProfileFunction(compose(g.function(), f.function()));
}

inline ProfileFunction inverse(const ProfileFunction& f) {
  std::vector<Rational> breaks;
  std::vector<Rational> slopes;
  for (std::size_t i = 0; i < f.breaks().size(); ++i) breaks.push_back(f.function().affine().value_at_break(i));
  for (const auto& s : f.slopes()) slopes.push_back(1 / s);
  return ProfileFunction(std::move(slopes), std::move(breaks));
}

/// Terminal intercept c with f(l) = l + c for large l.
///
/// Defined only on the subgroup with terminal slope 1, where it is a group
/// homomorphism to (Q, +). On morphism profiles it is the log-different and
/// hence nonnegative; inverses give negative values, so the result is a plain
/// rational rather than a LogValue.
inline Rational character(const ProfileFunction& f) {
  if (f.terminal_slope() != 1) {
    fail(ErrorKind::TerminalSlopeNotOne, "terminal slope is " + format_rational(f.terminal_slope()));
  }
  return f.function().affine().terminal_intercept();
}

// Non-increasing p-power slopes (all 1 when p = 0).
inline bool is_morphism_profile(const ProfileFunction& f, ResidueCharacteristic p) {
  const auto& s = f.slopes();
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!p.is_power(s[i])) return false;
    if (i > 0 && s[i] > s[i - 1]) return false;
  }
  return true;
}

// Text form "pm(init;s0;b1:s1;...;bk:sk)": initial value, first slope, then
// each breakpoint with the slope that starts there.
inline std::string format_pm(const PiecewiseAffine& f) {
  std::string out = "pm(" + format_rational(f.initial_value()) + ";" + format_rational(f.slopes()[0]);
  for (std::size_t i = 0; i < f.breaks().size(); ++i) {
    out += ";" + format_rational(f.breaks()[i]) + ":" + format_rational(f.slopes()[i + 1]);
  }
  return out + ")";
}
inline std::string format_pm(const PMFunction& f) { return format_pm(f.affine()); }
inline std::string format_pm(const ProfileFunction& f) { return format_pm(f.function().affine()); }

inline PiecewiseAffine parse_piecewise_affine(std::string_view text) {
  auto bad = [&](const std::string& why) -> PiecewiseAffine {
    fail(ErrorKind::ParseError, "pm function '" + std::string(text) + "': " + why);
  };
  if (text.size() < 4 || text.substr(0, 3) != "pm(" || text.back() != ')') return bad("expected pm(...)");
  std::string_view body = text.substr(3, text.size() - 4);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || body[i] == ';') {
      fields.push_back(body.substr(start, i - start));
      start = i + 1;
    }
  }
  if (fields.size() < 2) return bad("expected initial value and first slope");
  auto number = [&](std::string_view t) {
    auto v = try_parse_rational(t);
    if (!v) bad("malformed rational '" + std::string(t) + "'");
    return *v;
  };
  Rational initial = number(fields[0]);
  std::vector<Rational> slopes{number(fields[1])};
  std::vector<Rational> breaks;
  for (std::size_t i = 2; i < fields.size(); ++i) {
    auto colon = fields[i].find(':');
    if (colon == std::string_view::npos) return bad("expected breakpoint:slope");
    breaks.push_back(number(fields[i].substr(0, colon)));
    slopes.push_back(number(fields[i].substr(colon + 1)));
  }
  for (std::size_t i = 1; i < breaks.size(); ++i) {
    if (breaks[i] <= breaks[i - 1]) return bad("breakpoints must increase strictly");
  }
  if (!breaks.empty() && breaks.front() <= 0) return bad("breakpoints must be positive");
  return PiecewiseAffine(initial, std::move(slopes), std::move(breaks));
}

inline PMFunction parse_pm(std::string_view text) { return PMFunction(parse_piecewise_affine(text)); }

}  // namespace berkskel
