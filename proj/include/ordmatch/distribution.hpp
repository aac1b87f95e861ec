#pragma once

#include <functional>
#include <map>
#include <string>

#include "ordmatch/matrix.hpp"

namespace ordmatch {

/// Finite distribution over assignments with exact weights.
class OutcomeDistribution {
 public:
  OutcomeDistribution() = default;
  explicit OutcomeDistribution(std::string provenance) : provenance_(std::move(provenance)) {}

  static OutcomeDistribution point(const Assignment& a);

  /// Adds `weight` to the mass of `a`; zero weights are ignored.
  void add(const Assignment& a, const Rational& weight);
  /// Throws ConsistencyError unless weights are positive and sum to 1.
  void validate() const;

  const std::map<Assignment, Rational>& support() const { return support_; }
  Rational total() const;
  Rational probability(const std::function<bool(const Assignment&)>& event) const;
  /// Player i's expected item vector.
  ItemVector row(PlayerId i) const;

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

  friend bool operator==(const OutcomeDistribution& a, const OutcomeDistribution& b) {
    return a.support_ == b.support_;
  }

 private:
  std::map<Assignment, Rational> support_;
  std::string provenance_;
};

/// Σ_A ρ_A · A, with row/column sums checked.
BistochasticMatrix induced_matrix(const OutcomeDistribution& dist);

}  // namespace ordmatch
