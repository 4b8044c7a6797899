#include "bsq/interval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

namespace bsq {

const char* to_string(Cmp op) {
  switch (op) {
    case Cmp::Lt: return "<";
    case Cmp::Le: return "<=";
    case Cmp::Gt: return ">";
    case Cmp::Ge: return ">=";
  }
  return "?";
}

ParamSpace::ParamSpace(std::vector<Dim> dims) : dims_(std::move(dims)) {
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (!(dims_[i].lo < dims_[i].hi))
      throw Error("parameter dimension '" + dims_[i].name + "' has empty domain");
    for (std::size_t j = 0; j < i; ++j)
      if (dims_[j].name == dims_[i].name)
        throw Error("duplicate parameter name '" + dims_[i].name + "'");
  }
}

int ParamSpace::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < dims_.size(); ++i)
    if (dims_[i].name == name) return static_cast<int>(i);
  return -1;
}

double ParamSpace::domain_volume() const {
  double v = 1.0;
  for (const auto& d : dims_) v *= d.hi - d.lo;
  return v;
}

Box::Box(std::vector<double> lo, std::vector<double> hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != hi_.size()) throw DimensionMismatch("box corner ranks differ");
}

bool Box::empty() const {
  for (std::size_t d = 0; d < lo_.size(); ++d)
    if (!(lo_[d] < hi_[d])) return true;
  return lo_.empty();
}

double Box::volume() const {
  if (empty()) return 0.0;
  double v = 1.0;
  for (std::size_t d = 0; d < lo_.size(); ++d) v *= hi_[d] - lo_[d];
  return v;
}

bool Box::contains(std::span<const double> p) const {
  if (p.size() != lo_.size()) throw DimensionMismatch("point rank does not match box");
  for (std::size_t d = 0; d < lo_.size(); ++d)
    if (!(p[d] >= lo_[d] && p[d] < hi_[d])) return false;
  return true;
}

std::optional<Box> Box::intersection(const Box& a, const Box& b) {
  std::vector<double> lo(a.dims()), hi(a.dims());
  for (std::size_t d = 0; d < a.dims(); ++d) {
    lo[d] = std::max(a.lo_[d], b.lo_[d]);
    hi[d] = std::min(a.hi_[d], b.hi_[d]);
    if (!(lo[d] < hi[d])) return std::nullopt;
  }
  return Box(std::move(lo), std::move(hi));
}

void Box::subtract_into(const Box& a, const Box& b, std::vector<Box>& out) {
  auto overlap = intersection(a, b);
  if (!overlap) {
    out.push_back(a);
    return;
  }
  // Peel slabs off one dimension at a time; what remains shrinks to the
  // overlap and is dropped.
  Box cur = a;
  for (std::size_t d = 0; d < a.dims(); ++d) {
    if (overlap->lo_[d] > cur.lo_[d]) {
      Box piece = cur;
      piece.hi_[d] = overlap->lo_[d];
      if (!piece.empty()) out.push_back(std::move(piece));
      cur.lo_[d] = overlap->lo_[d];
    }
    if (overlap->hi_[d] < cur.hi_[d]) {
      Box piece = cur;
      piece.lo_[d] = overlap->hi_[d];
      if (!piece.empty()) out.push_back(std::move(piece));
      cur.hi_[d] = overlap->hi_[d];
    }
  }
}

namespace {

// Canonical form: slice dimension d at every lo/hi coordinate present, recurse
// on the cross-sections, then merge adjacent slabs whose cross-sections are
// identical. The result depends only on the point set, so structurally
// different decompositions of the same region normalize to the same box list.
std::vector<Box> canon_rec(const std::vector<Box>& boxes, std::size_t d, std::size_t n) {
  if (boxes.empty()) return {};
  if (d == n) {
    // fully covered cell
    return {Box(std::vector<double>(n, 0.0), std::vector<double>(n, 1.0))};
  }
  std::set<double> cut_set;
  for (const auto& b : boxes) {
    cut_set.insert(b.lo(d));
    cut_set.insert(b.hi(d));
  }
  std::vector<double> cuts(cut_set.begin(), cut_set.end());

  struct Slab {
    double lo, hi;
    std::vector<Box> cross;
  };
  std::vector<Slab> slabs;
  std::vector<Box> sub;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    double a = cuts[i], b = cuts[i + 1];
    sub.clear();
    for (const auto& box : boxes)
      if (box.lo(d) <= a && box.hi(d) >= b) sub.push_back(box);
    if (sub.empty()) continue;
    std::vector<Box> cross = canon_rec(sub, d + 1, n);
    auto cross_equal = [&](const std::vector<Box>& x, const std::vector<Box>& y) {
      if (x.size() != y.size()) return false;
      for (std::size_t k = 0; k < x.size(); ++k)
        for (std::size_t dd = d + 1; dd < n; ++dd)
          if (x[k].lo(dd) != y[k].lo(dd) || x[k].hi(dd) != y[k].hi(dd)) return false;
      return true;
    };
    if (!slabs.empty() && slabs.back().hi == a && cross_equal(slabs.back().cross, cross)) {
      slabs.back().hi = b;
    } else {
      slabs.push_back({a, b, std::move(cross)});
    }
  }

  std::vector<Box> out;
  for (const auto& slab : slabs) {
    for (const auto& c : slab.cross) {
      std::vector<double> lo(n, 0.0), hi(n, 1.0);
      for (std::size_t dd = d + 1; dd < n; ++dd) {
        lo[dd] = c.lo(dd);
        hi[dd] = c.hi(dd);
      }
      lo[d] = slab.lo;
      hi[d] = slab.hi;
      out.emplace_back(std::move(lo), std::move(hi));
    }
  }
  return out;
}

std::vector<Box> canonicalize(std::vector<Box> boxes, std::size_t n) {
  boxes.erase(std::remove_if(boxes.begin(), boxes.end(), [](const Box& b) { return b.empty(); }),
              boxes.end());
  if (boxes.empty()) return {};
  return canon_rec(boxes, 0, n);
}

void format_double(std::string& s, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  s.append(buf, res.ptr);
}

}  // namespace

IntervalSet::IntervalSet(ParamSpacePtr space, std::vector<Box> boxes)
    : space_(std::move(space)), boxes_(std::move(boxes)) {
  if (!space_) throw Error("interval set requires a parameter space");
}

IntervalSet IntervalSet::empty(ParamSpacePtr space) { return IntervalSet(std::move(space), {}); }

IntervalSet IntervalSet::full(ParamSpacePtr space) {
  std::vector<double> lo, hi;
  for (const auto& d : space->dims()) {
    lo.push_back(d.lo);
    hi.push_back(d.hi);
  }
  std::vector<Box> boxes;
  boxes.emplace_back(std::move(lo), std::move(hi));
  return IntervalSet(std::move(space), std::move(boxes));
}

IntervalSet IntervalSet::from_boxes(ParamSpacePtr space, std::vector<Box> boxes) {
  for (const auto& b : boxes)
    if (b.dims() != space->size()) throw DimensionMismatch("box rank does not match space");
  auto canon = canonicalize(std::move(boxes), space->size());
  return IntervalSet(std::move(space), std::move(canon));
}

IntervalSet IntervalSet::from_constraint(ParamSpacePtr space, std::size_t dim, Cmp op, double bound) {
  if (dim >= space->size()) throw Error("constraint dimension out of range");
  if (!std::isfinite(bound)) throw Error("constraint bound must be finite");
  std::vector<double> lo, hi;
  for (const auto& d : space->dims()) {
    lo.push_back(d.lo);
    hi.push_back(d.hi);
  }
  const auto& d = space->dim(dim);
  if (op == Cmp::Lt || op == Cmp::Le) {
    hi[dim] = std::min(bound, d.hi);
  } else {
    lo[dim] = std::max(bound, d.lo);
  }
  std::vector<Box> boxes;
  boxes.emplace_back(std::move(lo), std::move(hi));
  return from_boxes(std::move(space), std::move(boxes));
}

void IntervalSet::require_same_space(const IntervalSet& other) const {
  if (space_ == other.space_) return;
  if (*space_ == *other.space_) return;
  throw DimensionMismatch("interval sets over different parameter spaces");
}

double IntervalSet::volume() const {
  double v = 0.0;
  for (const auto& b : boxes_) v += b.volume();
  return v;
}

bool IntervalSet::contains(std::span<const double> p) const {
  if (p.size() != space_->size()) throw DimensionMismatch("point rank does not match space");
  for (const auto& b : boxes_)
    if (b.contains(p)) return true;
  return false;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
  require_same_space(other);
  std::vector<Box> out;
  for (const auto& a : boxes_)
    for (const auto& b : other.boxes_)
      if (auto c = Box::intersection(a, b)) out.push_back(std::move(*c));
  return IntervalSet(space_, canonicalize(std::move(out), space_->size()));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
  require_same_space(other);
  std::vector<Box> cur(boxes_.begin(), boxes_.end());
  std::vector<Box> next;
  for (const auto& b : other.boxes_) {
    next.clear();
    for (const auto& a : cur) Box::subtract_into(a, b, next);
    cur.swap(next);
    if (cur.empty()) break;
  }
  return IntervalSet(space_, canonicalize(std::move(cur), space_->size()));
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  require_same_space(other);
  IntervalSet extra = other.subtract(*this);
  std::vector<Box> all = boxes_;
  all.insert(all.end(), extra.boxes_.begin(), extra.boxes_.end());
  return IntervalSet(space_, canonicalize(std::move(all), space_->size()));
}

IntervalSet IntervalSet::complement() const { return full(space_).subtract(*this); }

std::vector<double> IntervalSet::sample_uniform(Rng& rng) const {
  double total = volume();
  if (boxes_.empty() || total <= 0.0) throw Error("cannot sample from an empty interval set");
  double r = rng.uniform01() * total;
  std::size_t pick = boxes_.size() - 1;
  double acc = 0.0;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    acc += boxes_[i].volume();
    if (r < acc) {
      pick = i;
      break;
    }
  }
  const Box& b = boxes_[pick];
  std::vector<double> p(space_->size());
  for (std::size_t d = 0; d < p.size(); ++d) {
    double x = b.lo(d) + rng.uniform01() * (b.hi(d) - b.lo(d));
    if (x >= b.hi(d)) x = std::nextafter(b.hi(d), b.lo(d));  // rounding guard
    p[d] = x;
  }
  return p;
}

std::string IntervalSet::dump() const {
  std::string s;
  for (std::size_t i = 0; i < boxes_.size(); ++i) {
    if (i) s += '\n';
    for (std::size_t d = 0; d < space_->size(); ++d) {
      if (d) s += 'x';
      s += '[';
      format_double(s, boxes_[i].lo(d));
      s += ',';
      format_double(s, boxes_[i].hi(d));
      s += ')';
    }
  }
  return s;
}

bool IntervalSet::operator==(const IntervalSet& other) const {
  if (!(space_ == other.space_ || *space_ == *other.space_)) return false;
  return boxes_ == other.boxes_;
}

bool IntervalSet::canonical_less(const IntervalSet& other) const {
  auto key = [](const Box& b) {
    std::vector<double> k;
    for (std::size_t d = 0; d < b.dims(); ++d) k.push_back(b.lo(d));
    for (std::size_t d = 0; d < b.dims(); ++d) k.push_back(b.hi(d));
    return k;
  };
  std::size_t n = std::min(boxes_.size(), other.boxes_.size());
  for (std::size_t i = 0; i < n; ++i) {
    auto a = key(boxes_[i]), b = key(other.boxes_[i]);
    if (a != b) return a < b;
  }
  return boxes_.size() < other.boxes_.size();
}

}  // namespace bsq
