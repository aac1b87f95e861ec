#include "ordmatch/dominance.hpp"

#include "ordmatch/errors.hpp"

namespace ordmatch {

ItemVector prefix_sums(const ItemVector& p, const Order& order) {
  if (p.size() != order.size()) throw InvalidInput("vector length does not match the order");
  ItemVector out;
  out.reserve(p.size());
  Rational acc;
  for (ItemId a : order) {
    acc += p[static_cast<std::size_t>(a)];
    out.push_back(acc);
  }
  return out;
}

std::optional<PrefixShortfall> first_shortfall(const ItemVector& p, const ItemVector& q,
                                               const Order& order) {
  if (p.size() != q.size()) throw InvalidInput("vectors differ in length");
  const ItemVector ps = prefix_sums(p, order);
  const ItemVector qs = prefix_sums(q, order);
  for (std::size_t j = 0; j < ps.size(); ++j) {
    if (ps[j] < qs[j]) return PrefixShortfall{static_cast<int>(j) + 1, ps[j], qs[j]};
  }
  return std::nullopt;
}

bool dominates_vec(const ItemVector& p, const ItemVector& q, const Order& order) {
  return !first_shortfall(p, q, order).has_value();
}

bool dominates_vec(const ItemVector& p, const ItemVector& q, const PreferenceProfile& profile,
                   PlayerId i) {
  if (i < 0 || i >= profile.size()) throw InvalidInput("unknown player");
  return dominates_vec(p, q, profile.order(i));
}

bool dominates_matrix(const BistochasticMatrix& p, const BistochasticMatrix& q,
                      const PreferenceProfile& profile) {
  if (p.size() != profile.size() || q.size() != profile.size()) {
    throw InvalidInput("matrix size does not match the profile");
  }
  for (PlayerId i = 0; i < profile.size(); ++i) {
    if (!dominates_vec(p.row(i), q.row(i), profile.order(i))) return false;
  }
  return true;
}

bool strictly_dominates(const BistochasticMatrix& p, const BistochasticMatrix& q,
                        const PreferenceProfile& profile) {
  return dominates_matrix(p, q, profile) && !(p == q);
}

}  // namespace ordmatch
