#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace horo {

// Structural report on a finite model's member-list family. The first four
// flags are the hypotheses the averaging theory runs on; `witness` holds a
// human-readable description of the first violation found.
struct PropertyReport {
  bool anchored = true;          // b is in F_n(b)
  bool level_partition = true;   // within one level, lists coincide or are disjoint
  bool laminar = true;           // across levels, lists are nested or disjoint
  bool within_class = true;      // lists never cross class boundaries
  bool eventually_class = true;  // the last stored level is the full class
  std::string witness;

  bool all() const {
    return anchored && level_partition && laminar && within_class && eventually_class;
  }
};

namespace detail {
inline std::string format_list(const std::vector<int>& v) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << v[i];
  }
  os << '}';
  return os.str();
}
}  // namespace detail

// Model requirements: size(), levels(), member_list(p, n), cls_of(p),
// class_members(c). Works for FiniteModel, IntervalModel and anything with
// the same surface.
template <class M>
PropertyReport check_properties(const M& model) {
  PropertyReport r;
  auto note = [&](bool& flag, const std::string& msg) {
    flag = false;
    if (r.witness.empty()) r.witness = msg;
  };

  const int size = model.size();
  const int levels = model.levels();
  std::set<std::vector<int>> distinct;

  for (int n = 1; n <= levels; ++n) {
    for (int p = 0; p < size; ++p) {
      std::vector<int> list = model.member_list(p, n);
      if (!std::binary_search(list.begin(), list.end(), p))
        note(r.anchored, "level " + std::to_string(n) + ": " + std::to_string(p) +
                             " missing from its own list " + detail::format_list(list));
      for (int q : list) {
        if (model.cls_of(q) != model.cls_of(p))
          note(r.within_class, "level " + std::to_string(n) + ": list of " + std::to_string(p) +
                                   " crosses classes at " + std::to_string(q));
        std::vector<int> other = model.member_list(q, n);
        if (other != list)
          note(r.level_partition,
               "level " + std::to_string(n) + ": lists of " + std::to_string(p) + " and " +
                   std::to_string(q) + " overlap without coinciding: " + detail::format_list(list) +
                   " vs " + detail::format_list(other));
      }
      distinct.insert(std::move(list));
    }
  }

  // Laminarity across the whole family.
  std::vector<const std::vector<int>*> sets;
  sets.reserve(distinct.size());
  for (const auto& s : distinct) sets.push_back(&s);
  for (std::size_t i = 0; i < sets.size() && r.laminar; ++i) {
    for (std::size_t j = i + 1; j < sets.size() && r.laminar; ++j) {
      const auto& a = *sets[i];
      const auto& b = *sets[j];
      std::vector<int> inter;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(inter));
      if (inter.empty()) continue;
      bool a_in_b = inter.size() == a.size();
      bool b_in_a = inter.size() == b.size();
      if (!a_in_b && !b_in_a)
        note(r.laminar, "lists overlap without nesting: " + detail::format_list(a) + " vs " +
                            detail::format_list(b));
    }
  }

  for (int p = 0; p < size && r.eventually_class; ++p) {
    std::vector<int> top = model.member_list(p, levels);
    std::vector<int> cm = model.class_members(model.cls_of(p));
    if (top != cm)
      note(r.eventually_class, "top level list of " + std::to_string(p) + " is " +
                                   detail::format_list(top) + ", class is " + detail::format_list(cm));
  }
  return r;
}

}  // namespace horo
