#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bsq/errors.hpp"
#include "bsq/rng.hpp"

namespace bsq {

enum class Cmp { Lt, Le, Gt, Ge };

const char* to_string(Cmp op);

// The rectangular parameter domain: an ordered list of named dimensions, each
// spanning [lo, hi).
class ParamSpace {
public:
  struct Dim {
    std::string name;
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const Dim&) const = default;
  };

  ParamSpace() = default;
  explicit ParamSpace(std::vector<Dim> dims);

  std::size_t size() const { return dims_.size(); }
  const Dim& dim(std::size_t i) const { return dims_.at(i); }
  const std::vector<Dim>& dims() const { return dims_; }
  int index_of(std::string_view name) const;  // -1 when absent
  double domain_volume() const;
  bool operator==(const ParamSpace&) const = default;

private:
  std::vector<Dim> dims_;
};

using ParamSpacePtr = std::shared_ptr<const ParamSpace>;

// An axis-aligned box, half-open in every dimension: [lo, hi). A box with
// lo >= hi in any dimension denotes the empty box.
class Box {
public:
  Box(std::vector<double> lo, std::vector<double> hi);

  std::size_t dims() const { return lo_.size(); }
  double lo(std::size_t d) const { return lo_[d]; }
  double hi(std::size_t d) const { return hi_[d]; }
  bool empty() const;
  double volume() const;
  bool contains(std::span<const double> p) const;

  static std::optional<Box> intersection(const Box& a, const Box& b);
  // a \ b as a disjoint list (dimension sweep, at most 2n pieces)
  static void subtract_into(const Box& a, const Box& b, std::vector<Box>& out);

  bool operator==(const Box&) const = default;

private:
  std::vector<double> lo_, hi_;
};

// A finite union of pairwise-disjoint boxes kept in a canonical form:
// recursive coordinate slicing with merge of equal adjacent slabs, boxes
// sorted by lexicographic lower corner. Two equal point sets always compare
// equal regardless of how they were produced. Immutable value type.
class IntervalSet {
public:
  static IntervalSet empty(ParamSpacePtr space);
  static IntervalSet full(ParamSpacePtr space);
  static IntervalSet from_boxes(ParamSpacePtr space, std::vector<Box> boxes);
  // The subset of the domain where "theta_dim op bound" holds. Strict and
  // non-strict variants canonicalize identically: {<, <=} -> [lo, bound),
  // {>, >=} -> [bound, hi). The deviation at the boundary point itself has
  // measure zero and uniform sampling never lands on it.
  static IntervalSet from_constraint(ParamSpacePtr space, std::size_t dim, Cmp op, double bound);

  const ParamSpacePtr& space() const { return space_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }
  double volume() const;
  bool contains(std::span<const double> p) const;

  IntervalSet intersect(const IntervalSet& other) const;
  IntervalSet subtract(const IntervalSet& other) const;
  IntervalSet unite(const IntervalSet& other) const;
  IntervalSet complement() const;

  // Uniform over the union: box picked with probability proportional to its
  // volume, then per-dimension uniform. Throws on an empty set.
  std::vector<double> sample_uniform(Rng& rng) const;

  // One box per line: [lo1,hi1)x[lo2,hi2)..., canonical order.
  std::string dump() const;

  bool operator==(const IntervalSet& other) const;
  // Deterministic total order used for tie-breaking; empty sets sort first.
  bool canonical_less(const IntervalSet& other) const;

private:
  IntervalSet(ParamSpacePtr space, std::vector<Box> boxes);
  void require_same_space(const IntervalSet& other) const;

  ParamSpacePtr space_;
  std::vector<Box> boxes_;
};

}  // namespace bsq
