#ifndef CLOSUREKIT_PERM_HPP_
#define CLOSUREKIT_PERM_HPP_

#include <algorithm>
#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <cstring>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "closurekit/error.hpp"

namespace closurekit {

using Point = std::size_t;

// Permutations are fixed-size values so that element lists of large groups
// stay contiguous. Entries past the degree hold the identity.
inline constexpr std::size_t kMaxDegree = 31;

// A set of points of {0..63} stored as a bit mask.
class PointSet {
 public:
  constexpr PointSet() noexcept = default;
  constexpr explicit PointSet(std::uint64_t bits) noexcept : bits_(bits) {}
  PointSet(std::initializer_list<Point> points) {
    for (Point p : points) insert(p);
  }
  template <class Range>
  static PointSet of(const Range& points) {
    PointSet s;
    for (auto p : points) s.insert(static_cast<Point>(p));
    return s;
  }
  static constexpr PointSet range(std::size_t n) noexcept {
    return PointSet(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const noexcept { return bits_; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr std::size_t size() const noexcept {
    return static_cast<std::size_t>(std::popcount(bits_));
  }
  constexpr bool contains(Point p) const noexcept {
    return p < 64 && ((bits_ >> p) & 1U) != 0;
  }
  void insert(Point p) {
    if (p >= 64) fail(ErrorKind::invalid_argument, "point set holds points below 64 only");
    bits_ |= std::uint64_t{1} << p;
  }
  constexpr void erase(Point p) noexcept { bits_ &= ~(std::uint64_t{1} << p); }
  constexpr Point min() const noexcept {
    return static_cast<Point>(std::countr_zero(bits_));
  }
  constexpr bool subset_of(PointSet other) const noexcept {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(PointSet other) const noexcept {
    return (bits_ & other.bits_) != 0;
  }

  std::vector<Point> to_vector() const {
    std::vector<Point> out;
    out.reserve(size());
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      out.push_back(static_cast<Point>(std::countr_zero(b)));
    }
    return out;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) {
      f(static_cast<Point>(std::countr_zero(b)));
    }
  }

  friend constexpr PointSet operator|(PointSet a, PointSet b) noexcept {
    return PointSet(a.bits_ | b.bits_);
  }
  friend constexpr PointSet operator&(PointSet a, PointSet b) noexcept {
    return PointSet(a.bits_ & b.bits_);
  }
  friend constexpr PointSet operator-(PointSet a, PointSet b) noexcept {
    return PointSet(a.bits_ & ~b.bits_);
  }
  PointSet& operator|=(PointSet o) noexcept { bits_ |= o.bits_; return *this; }
  PointSet& operator&=(PointSet o) noexcept { bits_ &= o.bits_; return *this; }
  friend constexpr bool operator==(PointSet, PointSet) noexcept = default;

  // Orders sets by their sorted element lists, the canonical cell order.
  friend bool operator<(PointSet a, PointSet b) noexcept {
    if (a.bits_ == b.bits_) return false;
    std::uint64_t diff = a.bits_ ^ b.bits_;
    std::uint64_t low = diff & (~diff + 1);
    // The first differing point belongs to exactly one of the sets. The set
    // containing it is smaller unless the other set has already ended.
    std::uint64_t below = low - 1;
    bool a_has = (a.bits_ & low) != 0;
    if (a_has) return (b.bits_ & ~below) != 0;
    return (a.bits_ & ~below) == 0;
  }

 private:
  std::uint64_t bits_ = 0;
};

class Permutation {
 public:
  Permutation() : Permutation(1) {}

  explicit Permutation(std::size_t degree) {
    if (degree == 0 || degree > kMaxDegree) {
      fail(ErrorKind::degree_too_large,
           "degree " + std::to_string(degree) + " outside 1.." + std::to_string(kMaxDegree));
    }
    degree_ = static_cast<std::uint8_t>(degree);
    for (std::size_t i = 0; i < kMaxDegree; ++i) images_[i] = static_cast<std::uint8_t>(i);
  }

  template <class Int>
  static Permutation from_images(std::span<const Int> images) {
    Permutation p(images.size());
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < images.size(); ++i) {
      auto v = static_cast<std::size_t>(images[i]);
      if (v >= images.size() || ((seen >> v) & 1U) != 0) {
        fail(ErrorKind::invalid_argument, "image sequence is not a bijection");
      }
      seen |= std::uint64_t{1} << v;
      p.images_[i] = static_cast<std::uint8_t>(v);
    }
    return p;
  }
  static Permutation from_images(std::initializer_list<std::size_t> images) {
    std::vector<std::size_t> v(images);
    return from_images(std::span<const std::size_t>(v));
  }
  template <class Int>
  static Permutation from_images(const std::vector<Int>& images) {
    return from_images(std::span<const Int>(images));
  }

  static Permutation from_cycles(std::size_t degree,
                                 const std::vector<std::vector<Point>>& cycles) {
    Permutation p(degree);
    std::uint64_t used = 0;
    for (const auto& cycle : cycles) {
      for (std::size_t i = 0; i < cycle.size(); ++i) {
        Point a = cycle[i];
        if (a >= degree) {
          fail(ErrorKind::degree_mismatch,
               "point " + std::to_string(a) + " outside degree " + std::to_string(degree));
        }
        if (((used >> a) & 1U) != 0) {
          fail(ErrorKind::invalid_argument, "cycles are not disjoint at point " + std::to_string(a));
        }
        used |= std::uint64_t{1} << a;
        p.images_[a] = static_cast<std::uint8_t>(cycle[(i + 1) % cycle.size()]);
      }
    }
    return p;
  }

  std::size_t degree() const noexcept { return degree_; }
  Point operator()(Point x) const noexcept { return images_[x]; }
  Point image(Point x) const {
    if (x >= degree_) fail(ErrorKind::degree_mismatch, "point outside degree");
    return images_[x];
  }
  std::vector<Point> images() const {
    return std::vector<Point>(images_.begin(), images_.begin() + degree_);
  }
  const std::uint8_t* data() const noexcept { return images_.data(); }

  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < degree_; ++i) {
      if (images_[i] != i) return false;
    }
    return true;
  }

  Permutation inverse() const noexcept {
    Permutation r = *this;
    for (std::size_t i = 0; i < degree_; ++i) r.images_[images_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  // Image of a point set; points must be below the degree.
  PointSet image(PointSet s) const noexcept {
    PointSet out;
    s.for_each([&](Point p) { out |= PointSet(std::uint64_t{1} << images_[p]); });
    return out;
  }

  PointSet support() const noexcept {
    PointSet s;
    for (std::size_t i = 0; i < degree_; ++i) {
      if (images_[i] != i) s |= PointSet(std::uint64_t{1} << i);
    }
    return s;
  }

  // Nontrivial cycles, each starting at its least point, ordered by that point.
  std::vector<std::vector<Point>> cycles() const {
    std::vector<std::vector<Point>> out;
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < degree_; ++i) {
      if (((seen >> i) & 1U) != 0 || images_[i] == i) continue;
      std::vector<Point> c;
      for (Point j = i; ((seen >> j) & 1U) == 0; j = images_[j]) {
        seen |= std::uint64_t{1} << j;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  // Cycle lengths including fixed points, sorted in decreasing order.
  std::vector<std::size_t> cycle_type() const {
    std::vector<std::size_t> out;
    std::uint64_t seen = 0;
    for (std::size_t i = 0; i < degree_; ++i) {
      if (((seen >> i) & 1U) != 0) continue;
      std::size_t len = 0;
      for (Point j = i; ((seen >> j) & 1U) == 0; j = images_[j]) {
        seen |= std::uint64_t{1} << j;
        ++len;
      }
      out.push_back(len);
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }

  std::size_t order() const {
    std::size_t l = 1;
    for (std::size_t c : cycle_type()) l = std::lcm(l, c);
    return l;
  }

  Permutation pow(long long e) const {
    Permutation base = e < 0 ? inverse() : *this;
    unsigned long long k = e < 0 ? static_cast<unsigned long long>(-e) : static_cast<unsigned long long>(e);
    Permutation result(degree_);
    while (k != 0) {
      if ((k & 1U) != 0) result = result * base;
      base = base * base;
      k >>= 1U;
    }
    return result;
  }

  // (p * q)(x) = p(q(x)).
  friend Permutation operator*(const Permutation& p, const Permutation& q) {
    if (p.degree_ != q.degree_) {
      fail(ErrorKind::degree_mismatch, "composing permutations of degrees " +
                                           std::to_string(p.degree_) + " and " +
                                           std::to_string(q.degree_));
    }
    Permutation r = p;
    for (std::size_t i = 0; i < p.degree_; ++i) r.images_[i] = p.images_[q.images_[i]];
    return r;
  }

  friend bool operator==(const Permutation& a, const Permutation& b) noexcept {
    return a.degree_ == b.degree_ &&
           std::memcmp(a.images_.data(), b.images_.data(), kMaxDegree) == 0;
  }
  // Lexicographic on image sequences (the canonical element order).
  friend std::strong_ordering operator<=>(const Permutation& a, const Permutation& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
    int c = std::memcmp(a.images_.data(), b.images_.data(), kMaxDegree);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ degree_;
    for (std::size_t i = 0; i < degree_; ++i) {
      h ^= images_[i];
      h *= 0x100000001b3ULL;
    }
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint8_t, kMaxDegree> images_{};
  std::uint8_t degree_ = 1;
};

struct PermutationHash {
  std::size_t operator()(const Permutation& p) const noexcept { return p.hash(); }
};

// g^-1 h g
inline Permutation conjugate(const Permutation& h, const Permutation& g) {
  return g.inverse() * h * g;
}

inline Permutation commutator(const Permutation& a, const Permutation& b) {
  return a.inverse() * b.inverse() * a * b;
}

// Disjoint-cycle notation, "()" for the identity.
inline std::string to_cycle_string(const Permutation& p) {
  auto cs = p.cycles();
  if (cs.empty()) return "()";
  std::string out;
  for (const auto& c : cs) {
    out += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i != 0) out += ' ';
      out += std::to_string(c[i]);
    }
    out += ')';
  }
  return out;
}

// Parses "(0 1 2)(3 4)"; points inside a cycle may be separated by spaces or commas.
inline Permutation parse_cycles(std::size_t degree, std::string_view text) {
  std::vector<std::vector<Point>> cycles;
  std::size_t i = 0;
  auto skip_space = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r')) ++i;
  };
  skip_space();
  if (i == text.size()) fail(ErrorKind::parse_error, "empty permutation");
  while (i < text.size()) {
    if (text[i] != '(') {
      fail(ErrorKind::parse_error, "expected '(' in \"" + std::string(text) + "\"");
    }
    ++i;
    std::vector<Point> cycle;
    while (true) {
      while (i < text.size() && (text[i] == ' ' || text[i] == ',' || text[i] == '\t')) ++i;
      if (i == text.size()) fail(ErrorKind::parse_error, "unterminated cycle");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] < '0' || text[i] > '9') {
        fail(ErrorKind::parse_error, "unexpected character '" + std::string(1, text[i]) + "'");
      }
      std::size_t v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
        v = v * 10 + static_cast<std::size_t>(text[i] - '0');
        if (v > 1000) fail(ErrorKind::parse_error, "point too large");
        ++i;
      }
      cycle.push_back(v);
    }
    if (cycle.size() > 1) cycles.push_back(std::move(cycle));
    skip_space();
  }
  return Permutation::from_cycles(degree, cycles);
}

}  // namespace closurekit

template <>
struct std::hash<closurekit::Permutation> {
  std::size_t operator()(const closurekit::Permutation& p) const noexcept { return p.hash(); }
};

#endif  // CLOSUREKIT_PERM_HPP_
