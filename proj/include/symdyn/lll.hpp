#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "symdyn/errors.hpp"
#include "symdyn/shift.hpp"
#include "symdyn/surd.hpp"

namespace symdyn {

/// Violation predicate of a bad event, evaluated on the symbols of its
/// support (in support order). Kept as data so instances can be serialized.
struct EventPredicate {
  enum class Kind {
    halves_equal,  // support = first half ++ second half, violated when they agree
    all_equal,     // violated when every support symbol is the same
    forbidden,     // violated when the support reads one of `patterns`
  };
  Kind kind = Kind::halves_equal;
  std::vector<std::vector<Symbol>> patterns;

  bool operator()(std::span<const Symbol> values) const;
};

struct BadEvent {
  std::size_t id = 0;
  std::string label;
  int level = 1;  // family index used by the dependency audits
  std::vector<std::size_t> support;  // variable indices
  Rational probability;              // μ(A) under the uniform measure
  QSqrt2 weight;                     // x(A) in (0, 1)
  EventPredicate violated;
};

struct LLLInstance {
  std::vector<std::string> variable_names;
  std::vector<Symbol> alphabet;  // per variable
  std::vector<BadEvent> events;
  std::vector<std::string> warnings;

  std::size_t variable_count() const { return alphabet.size(); }
};

using Assignment = std::vector<Symbol>;

/// Throws InputError on out-of-range weights/probabilities or supports.
void validate(const LLLInstance& inst);

/// Γ(A) for every event: the events sharing a variable with it, excluding
/// itself, as ascending event positions.
std::vector<std::vector<std::size_t>> dependency_graph(const LLLInstance& inst);

/// Per event, the number of neighbors in Γ(A) at each level.
std::vector<std::map<int, std::size_t>> level_dependency_counts(const LLLInstance& inst);

struct EventMargin {
  std::size_t id = 0;
  std::size_t neighbors = 0;
  QSqrt2 rhs;     // x(A) ∏_{B ∈ Γ(A)} (1 − x(B))
  QSqrt2 margin;  // rhs − μ(A)
};

struct Verdict {
  bool holds = true;
  std::vector<EventMargin> margins;
};

/// Evaluates μ(A) ≤ x(A) ∏_{B∈Γ(A)} (1 − x(B)) exactly for every event.
Verdict verify_condition(const LLLInstance& inst);

struct ResampleRun {
  Assignment assignment;
  std::vector<std::size_t> trace;  // ids of resampled events, in order
};

class NonterminatingError : public ResourceError {
 public:
  NonterminatingError(const std::string& what, std::vector<std::size_t> trace)
      : ResourceError(what), trace_(std::move(trace)) {}
  const std::vector<std::size_t>& trace() const { return trace_; }

 private:
  std::vector<std::size_t> trace_;
};

inline constexpr std::size_t kDefaultResampleCap = 1'000'000;

/// Uniform initial sample, then repeatedly resamples the support of the
/// violated event with least id. Deterministic in `seed`.
ResampleRun resample(const LLLInstance& inst, std::uint64_t seed,
                     std::size_t cap = kDefaultResampleCap);

/// True when no event is violated by `a`.
bool avoids_all(const LLLInstance& inst, const Assignment& a);

/// Compares the stored probability with an exhaustive count of violating
/// support assignments. nullopt when |support|·log2(alphabet) > max_bits.
std::optional<bool> audit_probability(const LLLInstance& inst, const BadEvent& event,
                                      unsigned max_bits = 24);

/// Whether 16C·2^{C/2} ≤ (2^{C/2} − 1)², decided exactly.
bool aperiodic_constant_holds(std::uint64_t c);
/// 16C·2^{C/2}/(2^{C/2} − 1)² as a double, for reporting.
double aperiodic_constant_value(std::uint64_t c);
/// Least C ≤ c_max for which the inequality holds; NotFoundError otherwise.
std::uint64_t aperiodic_constant_scan(std::uint64_t c_max);

/// Σ_{j=1..n} j·2^{−j}.
Rational dyadic_series_partial_sum(unsigned n);
/// Σ_{j≥1} j·2^{−j} from r/(1−r)² at r = 1/2.
Rational dyadic_series_limit();
/// 8s²·2^{8·Σ j2^{−j}} = 2^19·s².
mpz_class squarefree_alphabet_bound(std::uint64_t s);

}  // namespace symdyn
