#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "bsq/errors.hpp"

namespace bsq {

// A grounded variable: the name is the full application, e.g. "broken(robot)"
// or "pos()". Values are integers in [lo, hi].
struct VarDecl {
  std::string name;
  int lo = 0;
  int hi = 1;
  bool observable = false;

  int span() const { return hi - lo + 1; }
  bool operator==(const VarDecl&) const = default;
};

// Named constants a preference can quantify or loop over.
struct Sort {
  std::string name;
  std::vector<std::string> constants;

  int code_of(std::string_view c) const {
    for (std::size_t i = 0; i < constants.size(); ++i)
      if (constants[i] == c) return static_cast<int>(i);
    return -1;
  }
  bool operator==(const Sort&) const = default;
};

// A known (state-independent) integer function, stored as an explicit table.
// Lookups outside the table return the default, which lets grid predicates
// treat out-of-range coordinates as blocked.
struct StaticFn {
  std::string name;
  int arity = 0;
  int default_value = 0;
  std::map<std::vector<int>, int> entries;

  int eval(std::span<const int> args) const {
    auto it = entries.find(std::vector<int>(args.begin(), args.end()));
    return it == entries.end() ? default_value : it->second;
  }
  bool operator==(const StaticFn&) const = default;
};

struct Vocabulary {
  std::vector<VarDecl> state_vars;
  std::vector<VarDecl> obs_vars;
  std::vector<Sort> sorts;
  std::vector<StaticFn> statics;

  int var_index(std::string_view name) const {
    for (std::size_t i = 0; i < state_vars.size(); ++i)
      if (state_vars[i].name == name) return static_cast<int>(i);
    return -1;
  }
  int static_index(std::string_view name) const {
    for (std::size_t i = 0; i < statics.size(); ++i)
      if (statics[i].name == name) return static_cast<int>(i);
    return -1;
  }
  const Sort* find_sort(std::string_view name) const {
    for (const auto& s : sorts)
      if (s.name == name) return &s;
    return nullptr;
  }
  bool operator==(const Vocabulary&) const = default;
};

}  // namespace bsq
