#include "ordmatch/matrix.hpp"

#include <numeric>

#include "ordmatch/errors.hpp"

namespace ordmatch {

void validate_distribution(const ItemVector& v, bool allow_sub) {
  Rational total;
  for (const auto& x : v) {
    if (x.sign() < 0 || x > Rational(1)) throw InvalidInput("probability outside [0,1]: " + x.str());
    total += x;
  }
  if (allow_sub ? total > Rational(1) : total != Rational(1)) {
    throw InvalidInput("distribution sums to " + total.str());
  }
}

ItemVector uniform_vector(int n) { return ItemVector(static_cast<std::size_t>(n), Rational(1, n)); }

Assignment::Assignment(std::vector<ItemId> item_of) : item_of_(std::move(item_of)) {
  const int n = size();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  for (ItemId a : item_of_) {
    if (a < 0 || a >= n || taken[static_cast<std::size_t>(a)]) {
      throw InvalidInput("assignment is not a bijection");
    }
    taken[static_cast<std::size_t>(a)] = true;
  }
}

Assignment Assignment::identity(int n) {
  std::vector<ItemId> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), 0);
  return Assignment(std::move(v));
}

std::vector<PlayerId> Assignment::holders() const {
  std::vector<PlayerId> h(item_of_.size());
  for (std::size_t i = 0; i < item_of_.size(); ++i) h[static_cast<std::size_t>(item_of_[i])] = static_cast<PlayerId>(i);
  return h;
}

BistochasticMatrix::BistochasticMatrix(std::vector<ItemVector> rows) : rows_(std::move(rows)) {
  const std::size_t n = rows_.size();
  std::vector<Rational> col(n);
  for (const auto& r : rows_) {
    if (r.size() != n) throw InvalidInput("matrix is not square");
    validate_distribution(r);
    for (std::size_t j = 0; j < n; ++j) col[j] += r[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (col[j] != Rational(1)) {
      throw InvalidInput("column " + std::to_string(j + 1) + " sums to " + col[j].str());
    }
  }
}

BistochasticMatrix BistochasticMatrix::of(const Assignment& a) {
  const auto n = static_cast<std::size_t>(a.size());
  std::vector<ItemVector> rows(n, ItemVector(n));
  for (std::size_t i = 0; i < n; ++i) rows[i][static_cast<std::size_t>(a.item_of(static_cast<PlayerId>(i)))] = 1;
  return BistochasticMatrix(std::move(rows));
}

BistochasticMatrix BistochasticMatrix::uniform(int n) {
  return BistochasticMatrix(std::vector<ItemVector>(static_cast<std::size_t>(n), uniform_vector(n)));
}

BistochasticMatrix BistochasticMatrix::from_strings(const std::vector<std::vector<std::string>>& rows) {
  std::vector<ItemVector> out;
  for (const auto& r : rows) {
    ItemVector v;
    for (const auto& s : r) v.push_back(Rational::parse(s));
    out.push_back(std::move(v));
  }
  return BistochasticMatrix(std::move(out));
}

}  // namespace ordmatch
