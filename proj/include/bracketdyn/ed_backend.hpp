#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "bracketdyn/dyn_strings.hpp"

namespace bracketdyn {

// indel: insertions and deletions only (a substitution costs two).
// full: unit insertions, deletions and substitutions.
enum class EdMode { indel, full };

// min(ed(x, y), k + 1) by furthest-reaching diagonals, one lcp query per
// (errors, diagonal) pair. lcp_calls, when given, is incremented per query.
std::size_t bounded_k_ed(const StrCollection& c, StrHandle x, StrHandle y, std::size_t k, EdMode mode,
                         std::size_t* lcp_calls = nullptr);

// Exact distance by doubling k in bounded_k_ed.
std::size_t doubling_ed(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode,
                        std::size_t* lcp_calls = nullptr);

// String edit distance oracle used by the Dyck estimators. A backend returns a
// value in [ed, factor() * ed].
class EdBackend {
 public:
  virtual ~EdBackend() = default;
  virtual std::size_t distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) = 0;
  virtual double factor() const { return 1.0; }
  virtual std::string name() const = 0;
  std::size_t calls() const { return calls_; }

 protected:
  std::size_t calls_ = 0;
};

// Two-row dynamic program over the materialized strings.
class DpBackend : public EdBackend {
 public:
  std::size_t distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) override;
  std::string name() const override { return "dp"; }
};

// bounded_k_ed with k = 1, 2, 4, ... until the answer is below the cap.
class BoundedKBackend : public EdBackend {
 public:
  std::size_t distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) override;
  std::string name() const override { return "bounded-k"; }
  std::size_t lcp_calls() const { return lcp_calls_; }

 private:
  std::size_t lcp_calls_ = 0;
};

// Wraps an exact backend and inflates each answer by a pseudo-random factor
// in [1, f]; deterministic in the inputs' fingerprints and the seed.
class NoisyBackend : public EdBackend {
 public:
  NoisyBackend(std::unique_ptr<EdBackend> inner, double f, std::uint64_t seed = 1);
  std::size_t distance(const StrCollection& c, StrHandle x, StrHandle y, EdMode mode) override;
  double factor() const override { return factor_; }
  std::string name() const override { return "noisy(" + inner_->name() + ")"; }

 private:
  std::unique_ptr<EdBackend> inner_;
  double factor_;
  std::uint64_t seed_;
};

std::unique_ptr<EdBackend> make_backend(const std::string& name);

std::size_t ed_dp(std::span<const Symbol> x, std::span<const Symbol> y, EdMode mode);

}  // namespace bracketdyn
