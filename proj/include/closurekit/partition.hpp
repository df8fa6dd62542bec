#ifndef CLOSUREKIT_PARTITION_HPP_
#define CLOSUREKIT_PARTITION_HPP_

#include <algorithm>
#include <array>
#include <string>
#include <vector>

#include "closurekit/error.hpp"
#include "closurekit/perm.hpp"

namespace closurekit {

// A partition of {0..n-1}; cells are kept sorted by their least point.
class Partition {
 public:
  Partition() = default;

  Partition(std::size_t degree, std::vector<PointSet> cells) : degree_(degree), cells_(std::move(cells)) {
    if (degree_ == 0 || degree_ > 64) fail(ErrorKind::invalid_argument, "partition degree outside 1..64");
    PointSet seen;
    for (PointSet c : cells_) {
      if (c.empty()) fail(ErrorKind::invalid_argument, "empty cell in partition");
      if (c.intersects(seen)) fail(ErrorKind::invalid_argument, "cells are not disjoint");
      seen |= c;
    }
    if (seen != PointSet::range(degree_)) {
      fail(ErrorKind::invalid_argument, "cells do not cover 0.." + std::to_string(degree_ - 1));
    }
    std::sort(cells_.begin(), cells_.end(), [](PointSet a, PointSet b) { return a.min() < b.min(); });
    index_cells();
  }

  static Partition singletons(std::size_t n) {
    std::vector<PointSet> cells;
    for (Point i = 0; i < n; ++i) cells.push_back(PointSet{i});
    return Partition(n, std::move(cells));
  }
  static Partition whole(std::size_t n) { return Partition(n, {PointSet::range(n)}); }

  // Partition with one cell per distinct label.
  static Partition from_labels(const std::vector<std::size_t>& labels) {
    std::vector<PointSet> cells;
    std::vector<std::size_t> seen;
    for (Point i = 0; i < labels.size(); ++i) {
      auto it = std::find(seen.begin(), seen.end(), labels[i]);
      if (it == seen.end()) {
        seen.push_back(labels[i]);
        cells.push_back(PointSet{i});
      } else {
        cells[static_cast<std::size_t>(it - seen.begin())].insert(i);
      }
    }
    return Partition(labels.size(), std::move(cells));
  }

  std::size_t degree() const noexcept { return degree_; }
  const std::vector<PointSet>& cells() const noexcept { return cells_; }
  std::size_t size() const noexcept { return cells_.size(); }
  const PointSet& operator[](std::size_t i) const { return cells_[i]; }
  std::size_t cell_of(Point p) const { return cell_index_[p]; }

  bool has_equal_cells() const noexcept {
    return std::all_of(cells_.begin(), cells_.end(),
                       [&](PointSet c) { return c.size() == cells_.front().size(); });
  }
  bool is_singletons() const noexcept { return cells_.size() == degree_; }
  bool is_whole() const noexcept { return cells_.size() == 1; }
  bool is_trivial() const noexcept { return is_singletons() || is_whole(); }

  // True when g maps every cell onto a cell.
  bool is_invariant_under(const Permutation& g) const {
    for (PointSet c : cells_) {
      PointSet img = g.image(c);
      if (cells_[cell_index_[img.min()]] != img) return false;
    }
    return true;
  }

  // Index of the cell g(cells[i]); requires invariance.
  std::size_t image_cell(const Permutation& g, std::size_t i) const {
    return cell_index_[g(cells_[i].min())];
  }

  Partition image(const Permutation& g) const {
    std::vector<PointSet> out;
    out.reserve(cells_.size());
    for (PointSet c : cells_) out.push_back(g.image(c));
    return Partition(degree_, std::move(out));
  }

  // Every cell of this partition lies inside a cell of other.
  bool refines(const Partition& other) const {
    for (PointSet c : cells_) {
      if (!c.subset_of(other.cells_[other.cell_index_[c.min()]])) return false;
    }
    return true;
  }

  // Cell label of each point, as a compact key.
  std::vector<std::uint8_t> labels() const {
    std::vector<std::uint8_t> out(degree_);
    for (Point p = 0; p < degree_; ++p) out[p] = cell_index_[p];
    return out;
  }

  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      if (i != 0) out += ',';
      out += '[';
      bool first = true;
      cells_[i].for_each([&](Point p) {
        if (!first) out += ',';
        first = false;
        out += std::to_string(p);
      });
      out += ']';
    }
    return out + "]";
  }

  friend bool operator==(const Partition& a, const Partition& b) noexcept {
    return a.degree_ == b.degree_ && a.cells_ == b.cells_;
  }
  friend bool operator<(const Partition& a, const Partition& b) noexcept {
    if (a.degree_ != b.degree_) return a.degree_ < b.degree_;
    if (a.cells_.size() != b.cells_.size()) return a.cells_.size() > b.cells_.size();
    return std::lexicographical_compare(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                                        b.cells_.end());
  }

 private:
  void index_cells() {
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      cells_[i].for_each([&](Point p) { cell_index_[p] = static_cast<std::uint8_t>(i); });
    }
  }

  std::size_t degree_ = 0;
  std::vector<PointSet> cells_;
  std::array<std::uint8_t, 64> cell_index_{};
};

using OrbitPartition = Partition;

// A partition into cells of equal size.
class BlockSystem : public Partition {
 public:
  BlockSystem() = default;
  explicit BlockSystem(Partition p) : Partition(std::move(p)) {
    if (!has_equal_cells()) fail(ErrorKind::not_a_block_system, "cells of unequal size");
  }
  BlockSystem(std::size_t degree, std::vector<PointSet> cells)
      : BlockSystem(Partition(degree, std::move(cells))) {}

  static BlockSystem singletons(std::size_t n) { return BlockSystem(Partition::singletons(n)); }
  static BlockSystem whole(std::size_t n) { return BlockSystem(Partition::whole(n)); }

  std::size_t cell_size() const noexcept { return degree() / size(); }

  BlockSystem image(const Permutation& g) const { return BlockSystem(Partition::image(g)); }
};

}  // namespace closurekit

#endif  // CLOSUREKIT_PARTITION_HPP_
