#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "bracketdyn/dyck_dynamic.hpp"
#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/paren.hpp"

namespace bracketdyn {

// Boundary indices into X: the left leg is X[a..b) (openers), the right leg
// X[c..d) (closers), and the opener at a+t is height-matched to d-1-t.
struct Trapezoid {
  std::size_t a = 0, b = 0, c = 0, d = 0;
  std::size_t leg() const { return b - a; }
  friend bool operator==(const Trapezoid&, const Trapezoid&) = default;
  friend auto operator<=>(const Trapezoid&, const Trapezoid&) = default;
};

// Every maximal trapezoid with a nonempty leg, sorted. Openers and closers are
// matched by height with a stack of opener runs; each pop is one trapezoid.
std::vector<Trapezoid> maximal_trapezoids(std::span<const LrSegment> segs);
std::vector<Trapezoid> build_trapezoids(std::span<const LrSegment> segs, std::size_t min_leg);

struct Cluster {
  std::size_t frame_begin = 0, frame_end = 0;  // boundary range, inclusive
  int parent = -1;                             // trapezoid index, -1 for the root
  std::vector<int> children;                   // trapezoid indices in order
  std::vector<std::size_t> vertices;           // boundary indices owned by the cluster
};

struct ClusterDecomposition {
  std::vector<Trapezoid> traps;   // sorted
  std::vector<int> trap_parent;   // cluster holding a and d
  std::vector<int> trap_child;    // cluster holding b and c
  std::vector<Cluster> clusters;  // 0 is the root
  std::size_t cluster_vertices() const;
};

// Throws std::logic_error if the trapezoid spans are not laminar.
ClusterDecomposition build_clusters(std::size_t n, std::vector<Trapezoid> traps);

// min(ded(X[i..j)), cap) for i = i0 + x, j = j0 + y with x, y in [0..w].
struct WindowTable {
  std::size_t i0 = 0, j0 = 0, w = 0;
  std::uint16_t cap = 0;
  std::vector<std::uint16_t> v;

  WindowTable() = default;
  WindowTable(std::size_t i0_, std::size_t j0_, std::size_t w_, std::uint16_t cap_)
      : i0(i0_), j0(j0_), w(w_), cap(cap_), v((w_ + 1) * (w_ + 1), cap_) {}
  bool contains(std::size_t i, std::size_t j) const {
    return i >= i0 && i <= i0 + w && j >= j0 && j <= j0 + w;
  }
  std::uint16_t at(std::size_t i, std::size_t j) const { return v[(i - i0) * (w + 1) + (j - j0)]; }
  std::uint16_t& at(std::size_t i, std::size_t j) { return v[(i - i0) * (w + 1) + (j - j0)]; }
};

struct TrapezoidDp {
  Trapezoid t;
  std::size_t w = 0;
  std::int64_t off = 0;                       // delta d is stored at d + off
  std::vector<std::vector<std::int64_t>> L;   // L[v][delta]: furthest j on the diagonal, -1 if none
  WindowTable outer;                          // i in [a..a+w], j in [d-w..d]
};

using CharAt = std::function<Paren(std::size_t)>;
// lcp(T(X[a..i)), X[j..d)) for the trapezoid being processed.
using LegLcp = std::function<std::size_t(std::size_t i, std::size_t j)>;

// inner covers i in [b-w..b], j in [c..c+w]. Diagonal delta = (j-c) - (b-i).
TrapezoidDp process_trapezoid(const WindowTable& inner, const Trapezoid& t, std::size_t kappa,
                              const CharAt& ch, const LegLcp& lcp);

struct ExactKStats {
  std::size_t k = 0;
  std::size_t window = 0;
  std::size_t segments = 0;
  std::size_t trapezoids = 0;
  std::size_t clusters = 0;
  std::size_t cluster_vertices = 0;
  std::size_t dp_positions = 0;  // largest position set of a single cluster DP
  bool tripwires_ok = true;      // only meaningful when a value is returned
};

// Exact ded (full costs) of the hat-reduced string xhat if it is at most k.
std::optional<std::size_t> solve_exact_k(StrCollection& c, StrHandle xhat, std::size_t k,
                                         ExactKStats* stats = nullptr);
std::optional<std::size_t> solve_exact_k(ParenView x, std::size_t k, ExactKStats* stats = nullptr);
// Doubling search over k starting at 1.
std::size_t solve_exact(ParenView x);

class ExactKSession {
 public:
  explicit ExactKSession(ParenView x = {}, std::size_t k_max = SIZE_MAX, std::uint64_t seed = 0xe4ac7);

  // nullopt when ded exceeds k_max.
  std::optional<std::size_t> apply(const CharEdit& e);
  std::optional<std::size_t> value() const { return value_; }
  std::size_t size() const { return hat_.size(); }
  ParenString text() const { return hat_.text(); }
  const ExactKStats& last_stats() const { return stats_; }
  std::size_t solves() const { return solves_; }

 private:
  void recompute(std::optional<std::size_t> hint);

  HatTree hat_;
  std::size_t k_max_;
  std::optional<std::size_t> value_;
  ExactKStats stats_;
  std::size_t solves_ = 0;
};

}  // namespace bracketdyn
