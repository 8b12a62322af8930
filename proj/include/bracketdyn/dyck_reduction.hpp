#pragma once

#include <cstddef>
#include <vector>

#include "bracketdyn/dyn_strings.hpp"
#include "bracketdyn/ed_backend.hpp"
#include "bracketdyn/height_forest.hpp"
#include "bracketdyn/paren.hpp"

namespace bracketdyn {

// Members are LR-strings with equal open and close halves. Monotone pieces
// (a leading run of closers or a trailing run of openers left over by some
// round) are kept apart; every one of their characters must be deleted.
struct LrCollection {
  std::vector<ParenString> members;
  std::vector<ParenString> monotone;
  std::size_t rounds = 0;

  std::size_t total_length() const;
};

struct LrHandles {
  std::vector<StrHandle> members;
  std::vector<StrHandle> monotone;
  std::size_t rounds = 0;
};

LrCollection build_collection(ParenView x);

// Same construction through split, concat and lmp_query on handles of c.
// The input handle is left untouched; the caller owns the returned handles.
LrHandles build_collection_fast(StrCollection& c, StrHandle xhat);
LrCollection materialize(const StrCollection& c, const LrHandles& h);
void release(StrCollection& c, const LrHandles& h);

// Opening half and transposed closing half of an LR-string.
ParenString lr_left(ParenView y);
ParenString lr_right_transposed(ParenView y);

// Sum over members of ed(L(Y), T(R(Y))) plus the monotone lengths.
std::size_t estimate_from_collection(const LrCollection& c, EdBackend& backend, EdMode mode);
std::size_t estimate_from_handles(StrCollection& c, const LrHandles& h, EdBackend& backend, EdMode mode);

// 2 * sum over heavy paths of ed(L(s), T(R(s))).
std::size_t estimate_from_heavy_strings(HeightForest& hf, EdBackend& backend, EdMode mode);

// Heavy string of a path with dummy openers and virtual closers removed.
ParenString estimator_string(HeightForest& hf, int head);

}  // namespace bracketdyn
