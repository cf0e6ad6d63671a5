#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "affdbg/affine.hpp"
#include "affdbg/rootdata.hpp"

namespace affdbg {

// Unlabelled path u = u_1 -> u_1 s_{a_1} -> ... in the double Bruhat graph.
struct UPath {
  WIdx start = 0;
  std::vector<int> roots;      // positive root indices
  std::vector<WIdx> vertices;  // roots.size() + 1 entries
  std::vector<int> lower;      // per-edge label lower bound (1 on down edges)

  WIdx end() const { return vertices.back(); }
  int length() const { return static_cast<int>(roots.size()); }
};

struct LabelledPath {
  WIdx start = 0;
  std::vector<std::pair<int, long long>> edges;  // (positive root, label)

  int length() const { return static_cast<int>(edges.size()); }
  WIdx end(const RootDatum& d) const;
  Coweight weight(const RootDatum& d) const;
  // labels respect the lower bounds and roots increase in the given order
  bool valid(const RootDatum& d, const ReflectionOrder* order) const;
};

// Finite piece of a weight multiset.
struct WtsSlice {
  WIdx u = 0, v = 0, vprime = 0;
  long long lo = 0, hi = 0;  // window on <omega, 2rho>
  std::map<std::pair<Coweight, int>, long long> entries;

  long long total() const;
  bool operator==(const WtsSlice& o) const { return entries == o.entries; }
  // multiset of lengths e at a fixed weight
  std::map<int, long long> at(const Coweight& omega) const;
  void add(const Coweight& omega, int e, long long mult);
  WtsSlice shifted(const Coweight& delta, int de) const;
};

// e -> multiplicity
using LengthMultiset = std::map<int, long long>;

class Dbg {
 public:
  explicit Dbg(const RootDatum& d);
  Dbg(const Dbg&) = delete;
  Dbg& operator=(const Dbg&) = delete;

  const RootDatum& datum() const { return d_; }
  // order from the lex-least reduced word of w0
  const ReflectionOrder& default_order() const { return default_; }
  // (order, n) with v pi_{>n} = v' for the given v^{-1} v'
  const std::pair<ReflectionOrder, int>& tail_order(WIdx u0) const;

  std::vector<UPath> increasing_paths(WIdx u, WIdx v, const ReflectionOrder& o, int n) const;

  // number of labellings of p with weight omega
  long long count_labellings(const UPath& p, const Coweight& omega) const;
  // all labelled versions of p with <wt, 2rho> in [lo, hi]
  void labellings_in_window(const UPath& p, long long lo, long long hi,
                            const std::function<void(const std::vector<long long>&)>& f) const;
  LabelledPath label(const UPath& p, const std::vector<long long>& m) const;

  // wts(u => v ~> v') at a fixed weight; v' = v gives wts(u => v)
  LengthMultiset wts_at(WIdx u, WIdx v, const Coweight& omega) const { return wts_bounded_at(u, v, v, omega); }
  LengthMultiset wts_bounded_at(WIdx u, WIdx v, WIdx vprime, const Coweight& omega) const;
  LengthMultiset wts_at_order(WIdx u, WIdx v, const ReflectionOrder& o, int n, const Coweight& omega) const;
  WtsSlice wts_window(WIdx u, WIdx v, WIdx vprime, long long lo, long long hi) const;
  WtsSlice wts_window_order(WIdx u, WIdx v, const ReflectionOrder& o, int n, long long lo, long long hi) const;

  // Materialized increasing labelled paths with <wt,2rho> <= hi (reports only).
  std::vector<LabelledPath> labelled_paths(WIdx u, WIdx v, WIdx vprime, long long hi) const;

 private:
  const std::vector<UPath>& cached_paths(WIdx u, WIdx v, WIdx vprime) const;

  const RootDatum& d_;
  ReflectionOrder default_;
  std::vector<long long> h_;  // <beta^v, 2rho> for positive roots
  mutable std::mutex mu_;
  mutable std::map<WIdx, std::unique_ptr<std::pair<ReflectionOrder, int>>> tails_;
  mutable std::map<std::pair<WIdx, WIdx>, std::unique_ptr<std::vector<std::vector<UPath>>>> paths_;  // (u, u0) -> by end vertex
};

// Both sides of the simple affine reflection recursion for wts(u => v ~> v').
struct RecursionCheck {
  bool down_case = false;  // u^{-1} alpha negative
  WtsSlice lhs, rhs;
  bool equal() const { return lhs == rhs; }
};
// g indexes the affine generators; requires (v')^{-1} alpha negative.
RecursionCheck dbg_recursion_check(const Dbg& dbg, const AffineWeyl& aw, WIdx u, WIdx v, WIdx vprime, int g,
                                   long long lo, long long hi);

// Lift of a labelled path to the extended affine Weyl group starting at y.
std::vector<AffineElement> affine_path(const AffineWeyl& aw, const LabelledPath& p, const AffineElement& y);
// Recovers the labelled path; nullopt if some step is not a semi-infinite increase
// of the required form.
std::optional<LabelledPath> path_from_affine(const AffineWeyl& aw, const std::vector<AffineElement>& ys);
// y < r_a y in the semi-infinite order for a positive affine root with w^{-1}alpha > 0
bool semi_infinite_step(const AffineWeyl& aw, const AffineElement& y, const AffineElement& y2);

void write_path_jsonl(std::ostream& os, const RootDatum& d, const LabelledPath& p);
void write_wts_csv(std::ostream& os, const RootDatum& d, const WtsSlice& s, bool header);

}  // namespace affdbg
