#include "ordmatch/distribution.hpp"

#include "ordmatch/errors.hpp"

namespace ordmatch {

OutcomeDistribution OutcomeDistribution::point(const Assignment& a) {
  OutcomeDistribution d;
  d.add(a, 1);
  return d;
}

void OutcomeDistribution::add(const Assignment& a, const Rational& weight) {
  if (weight.is_zero()) return;
  if (!support_.empty() && support_.begin()->first.size() != a.size()) {
    throw ConsistencyError("assignments of different sizes in one distribution");
  }
  auto [it, inserted] = support_.try_emplace(a, weight);
  if (!inserted) it->second += weight;
}

void OutcomeDistribution::validate() const {
  Rational sum;
  for (const auto& [a, w] : support_) {
    if (w.sign() <= 0) throw ConsistencyError("non-positive outcome weight " + w.str());
    sum += w;
  }
  if (sum != Rational(1)) throw ConsistencyError("outcome weights sum to " + sum.str());
}

Rational OutcomeDistribution::total() const {
  Rational sum;
  for (const auto& [a, w] : support_) sum += w;
  return sum;
}

Rational OutcomeDistribution::probability(const std::function<bool(const Assignment&)>& event) const {
  Rational sum;
  for (const auto& [a, w] : support_) {
    if (event(a)) sum += w;
  }
  return sum;
}

ItemVector OutcomeDistribution::row(PlayerId i) const {
  if (support_.empty()) return {};
  const int n = support_.begin()->first.size();
  if (i < 0 || i >= n) throw InvalidInput("unknown player");
  ItemVector out(static_cast<std::size_t>(n));
  for (const auto& [a, w] : support_) out[static_cast<std::size_t>(a.item_of(i))] += w;
  return out;
}

BistochasticMatrix induced_matrix(const OutcomeDistribution& dist) {
  dist.validate();
  const auto n = static_cast<std::size_t>(dist.support().begin()->first.size());
  std::vector<ItemVector> rows(n, ItemVector(n));
  for (const auto& [a, w] : dist.support()) {
    for (std::size_t i = 0; i < n; ++i) rows[i][static_cast<std::size_t>(a.item_of(static_cast<PlayerId>(i)))] += w;
  }
  try {
    return BistochasticMatrix(std::move(rows));
  } catch (const InvalidInput& e) {
    throw ConsistencyError(std::string("induced matrix is not bistochastic: ") + e.what());
  }
}

}  // namespace ordmatch
