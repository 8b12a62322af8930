#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <vector>

#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/forest_core.hpp"
#include "bracketdyn/plain_forest.hpp"
#include "bracketdyn/tree_align.hpp"

namespace bracketdyn {

// A subforest [i1, j1) of str(F), or a context: the tree [i1, j2) minus the
// balanced gap [j1, i2).
struct Piece {
  bool context = false;
  std::size_t i1 = 0, j1 = 0, i2 = 0, j2 = 0;

  static Piece subforest(std::size_t i, std::size_t j) { return {false, i, j, j, j}; }
  static Piece make_context(std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    return {true, i1, j1, i2, j2};
  }
  std::size_t size() const { return context ? (j1 - i1) + (j2 - i2) : j1 - i1; }
  friend bool operator==(const Piece&, const Piece&) = default;
};

bool valid_piece(const Forest& f, const Piece& p);

// At most 8 disjoint valid pieces covering p, each of size <= ceil(|p|/2).
// Throws std::invalid_argument when p is malformed or smaller than 4.
std::vector<Piece> partition_piece(const Forest& f, const Piece& p);

// Highest ancestor of v inside [i, j); v must be inside.
int find_highest_anc(const Forest& f, std::size_t i, std::size_t j, int v);
// Highest ancestor of v inside [i, j) spanning at most m characters, or -1.
int find_mid_anc(const Forest& f, std::size_t i, std::size_t j, std::size_t m, int v);

// Two forests and their parenthesis strings in one collection.
class ForestPair {
 public:
  explicit ForestPair(std::uint64_t seed = 0x9a9);
  ForestPair(const PlainForest& f, const PlainForest& g, std::uint64_t seed = 0x9a9);
  ForestPair(const ForestPair&) = delete;
  ForestPair& operator=(const ForestPair&) = delete;

  const Forest& side(int s) const { return s == 0 ? f_ : g_; }
  const Forest& f() const { return f_; }
  const Forest& g() const { return g_; }
  StrHandle str(int s) const { return h_[s]; }
  const StrCollection& strings() const { return strs_; }

  EditDelta apply(int side, const NodeEdit& e);

 private:
  Forest f_, g_;
  StrCollection strs_;
  StrHandle h_[2];
};

// Where a piece of F occurs in G. A context part shorter than 2k is ignored
// and flagged as unmatched.
struct Occurrence {
  std::size_t g1 = 0, g2 = 0;
  bool left = true, right = true;
};

// Occurrence with every start shifted by at most 2k characters. A context
// occurrence keeps a non-empty gap; among candidate pairs only the one whose
// root has minimum depth is tried. With check_claims every candidate pair is
// tried as well and std::logic_error is thrown when a deeper one succeeds.
std::optional<Occurrence> has_match(const ForestPair& d, const Piece& p, std::size_t k,
                                    bool check_claims = false);
// Same with an explicit shift allowance in characters.
std::optional<Occurrence> has_match_within(const ForestPair& d, const Piece& p, std::size_t k,
                                           std::size_t shift, bool check_claims = false);

// ceil(1.5 k lg n) with lg n taken as log2(max(n, 2)); the loop runs budget + 1
// iterations.
std::size_t gap_budget(std::size_t k, std::size_t n);
double gap_lg(std::size_t n);

struct GapOptions {
  double budget_factor = 1.0;  // multiplies the iteration budget
  bool certificate = true;
  bool check_claims = false;
};

struct GapResult {
  bool yes = false;
  bool size_guard = false;  // answered No from ||F| - |G|| > k alone
  std::size_t k = 0;
  std::size_t budget = 0;
  std::size_t iterations = 0;
  std::size_t pieces = 0;  // nodes of the piece tree
  std::size_t max_worklist = 0;
  // Node units. bound = 16 k ceil(1.5 k lg n) + ||F| - |G||.
  std::size_t certificate_cost = 0;
  std::size_t certificate_bound = 0;
  bool certificate_valid = false;
  Alignment certificate;  // over str(F), str(G)
};

// The gap query run one worklist piece at a time. d must stay unchanged until
// the query is done.
class GapQuery {
 public:
  GapQuery(const ForestPair& d, std::size_t k, GapOptions opt = {});
  bool done() const { return done_; }
  void step();
  const GapResult& result() const { return res_; }

 private:
  void finish(bool yes);
  Alignment stitch() const;

  const ForestPair* d_;
  GapOptions opt_;
  GapResult res_;
  std::deque<Piece> work_;
  std::vector<std::pair<Piece, Occurrence>> matched_;
  bool done_ = false;
};

GapResult gap_query(const ForestPair& d, std::size_t k, GapOptions opt = {});
GapResult gap_query(const PlainForest& f, const PlainForest& g, std::size_t k, GapOptions opt = {});

struct SideEdit {
  int side = 0;  // 0 for F, 1 for G
  NodeEdit edit;
};

struct SessionOptions {
  double budget_factor = 1.0;
  std::size_t units_per_step = 0;  // 0 sizes the step from the current n
};

// Buffered dynamic estimate of ted(F, G).
class GapSession {
 public:
  // 24 + 17: certificate bound 16 k (1.5 k lg n + 1) + k over k^2 lg n.
  static constexpr double kCert = 41.0;

  explicit GapSession(SessionOptions opt = {});
  GapSession(const PlainForest& f, const PlainForest& g, SessionOptions opt = {});

  // Validates e against the current forests, then runs the per-update
  // procedure. Returns the published estimate.
  double update(const SideEdit& e);
  double estimate() const { return estimate_; }

  const ForestPair& current() const { return cur_; }
  std::size_t kappa() const { return kappa_; }
  std::size_t staleness() const { return b_; }
  std::size_t buffered() const { return buffer_.size(); }
  bool query_running() const { return query_.has_value(); }
  // Steps taken by the last completed extended query.
  std::size_t last_query_steps() const { return last_steps_; }
  std::size_t completed_queries() const { return completed_; }
  std::size_t units_per_step() const { return units_; }

 private:
  void launch();
  void run_step();
  void publish();

  SessionOptions opt_;
  ForestPair cur_, lag_;
  std::deque<SideEdit> buffer_;
  std::size_t kappa_ = 0, b_ = 0;
  double lg_ = 1.0;
  double estimate_ = 0.0;

  std::optional<GapQuery> query_;
  std::size_t threshold_ = 0;
  std::size_t steps_ = 0, last_steps_ = 0, completed_ = 0, units_ = 0;
  std::size_t launch_n_ = 0;
};

}  // namespace bracketdyn
