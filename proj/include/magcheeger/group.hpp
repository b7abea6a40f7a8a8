#ifndef MAGCHEEGER_GROUP_HPP
#define MAGCHEEGER_GROUP_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace magcheeger {

using Complex = std::complex<double>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Reduces an angle into [0, 2pi).
inline double reduce_angle(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

/// |1 - xi^l| for the primitive k-th root of unity xi, i.e. the chord length
/// between two k-th roots of unity that are l steps apart.
inline double chord(long l, int k) {
  long m = l % k;
  if (m < 0) m += k;
  return 2.0 * std::sin(std::numbers::pi * static_cast<double>(m) / k);
}

/// Element of the signature group: either xi_k^j in the cyclic group of
/// order k, or e^{i angle} in U(1). Cyclic exponents are exact integers.
class GroupElement {
 public:
  enum class Kind { cyclic, circle };

  GroupElement() = default;

  static GroupElement cyclic(int order, long exponent) {
    if (order < 1) throw std::invalid_argument("cyclic order must be >= 1");
    long j = exponent % order;
    if (j < 0) j += order;
    GroupElement g;
    g.kind_ = Kind::cyclic;
    g.order_ = order;
    g.exponent_ = static_cast<int>(j);
    return g;
  }

  static GroupElement circle(double angle) {
    GroupElement g;
    g.kind_ = Kind::circle;
    g.order_ = 0;
    g.angle_ = reduce_angle(angle);
    return g;
  }

  Kind kind() const { return kind_; }
  bool is_cyclic() const { return kind_ == Kind::cyclic; }
  int order() const { return order_; }
  int exponent() const { return exponent_; }

  /// Argument in [0, 2pi).
  double angle() const {
    if (kind_ == Kind::circle) return angle_;
    return kTwoPi * exponent_ / order_;
  }

  Complex value() const {
    double a = angle();
    return {std::cos(a), std::sin(a)};
  }

  GroupElement inverse() const {
    if (kind_ == Kind::cyclic) return cyclic(order_, order_ - exponent_);
    return circle(-angle_);
  }

  /// The element whose complex value is the negative of this one. Only
  /// defined in U(1) and in cyclic groups of even order.
  GroupElement negated() const {
    if (kind_ == Kind::circle) return circle(angle_ + std::numbers::pi);
    if (order_ % 2 != 0) {
      throw std::invalid_argument("negation leaves a cyclic group of odd order");
    }
    return cyclic(order_, exponent_ + order_ / 2);
  }

  bool same_group(const GroupElement& other) const {
    return kind_ == other.kind_ && order_ == other.order_;
  }

  GroupElement operator*(const GroupElement& rhs) const {
    if (!same_group(rhs)) throw std::invalid_argument("group mismatch in product");
    if (kind_ == Kind::cyclic) return cyclic(order_, exponent_ + rhs.exponent_);
    return circle(angle_ + rhs.angle_);
  }

  /// Exact for cyclic elements; within `tolerance` radians for U(1).
  bool is_identity(double tolerance = 1e-9) const {
    if (kind_ == Kind::cyclic) return exponent_ == 0;
    return angle_ <= tolerance || kTwoPi - angle_ <= tolerance;
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    if (!a.same_group(b)) return false;
    if (a.kind_ == Kind::cyclic) return a.exponent_ == b.exponent_;
    return a.angle_ == b.angle_;
  }

  std::string to_string() const {
    if (kind_ == Kind::cyclic) {
      return std::to_string(exponent_) + "/" + std::to_string(order_);
    }
    return std::to_string(angle_);
  }

 private:
  Kind kind_ = Kind::cyclic;
  int order_ = 1;
  int exponent_ = 0;
  double angle_ = 0.0;
};

/// Descriptor of the group a signature takes values in.
struct SignatureGroup {
  GroupElement::Kind kind = GroupElement::Kind::cyclic;
  int order = 1;  // cyclic only

  static SignatureGroup cyclic(int k) { return {GroupElement::Kind::cyclic, k}; }
  static SignatureGroup circle() { return {GroupElement::Kind::circle, 0}; }

  bool is_cyclic() const { return kind == GroupElement::Kind::cyclic; }

  GroupElement identity() const {
    return is_cyclic() ? GroupElement::cyclic(order, 0) : GroupElement::circle(0.0);
  }

  bool contains(const GroupElement& g) const {
    return g.kind() == kind && (!is_cyclic() || g.order() == order);
  }

  /// Cyclic groups of even order and U(1) are closed under negation.
  bool closed_under_negation() const { return !is_cyclic() || order % 2 == 0; }

  friend bool operator==(const SignatureGroup&, const SignatureGroup&) = default;

  std::string to_string() const {
    return is_cyclic() ? "S1_" + std::to_string(order) : "U(1)";
  }
};

/// Largest value of |a - s b| for unit a, b and s in the group: 2 for U(1)
/// and even k, |1 - xi^{(k-1)/2}| for odd k.
inline double max_chord(const SignatureGroup& group) {
  if (!group.is_cyclic()) return 2.0;
  if (group.order == 1) return 0.0;
  return chord(group.order / 2, group.order);
}

}  // namespace magcheeger

#endif  // MAGCHEEGER_GROUP_HPP
