#include "ordmatch/profile.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "ordmatch/errors.hpp"

namespace ordmatch {

void validate_order(const Order& order, int n) {
  if (static_cast<int>(order.size()) != n) {
    throw InvalidInput("order has " + std::to_string(order.size()) + " items, expected " +
                       std::to_string(n));
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (ItemId a : order) {
    if (a < 0 || a >= n) throw InvalidInput("item index out of range: " + std::to_string(a + 1));
    if (seen[static_cast<std::size_t>(a)]) {
      throw InvalidInput("item listed twice: " + std::to_string(a + 1));
    }
    seen[static_cast<std::size_t>(a)] = true;
  }
}

PreferenceProfile::PreferenceProfile(std::vector<Order> orders) : orders_(std::move(orders)) {
  const int n = size();
  if (n == 0) throw InvalidInput("profile has no players");
  if (n > kMaxPlayers) throw InvalidInput("at most 64 players are supported");
  ranks_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
  for (int i = 0; i < n; ++i) {
    validate_order(order(i), n);
    for (int k = 0; k < n; ++k) ranks_[static_cast<std::size_t>(i)][static_cast<std::size_t>(at(i, k))] = k;
  }
}

ItemId PreferenceProfile::favorite_in(PlayerId i, ItemSet available) const {
  for (ItemId a : order(i)) {
    if (available.contains(a)) return a;
  }
  return -1;
}

PreferenceProfile PreferenceProfile::with_order(PlayerId i, Order order) const {
  if (i < 0 || i >= size()) throw InvalidInput("unknown player " + std::to_string(i + 1));
  std::vector<Order> rows = orders_;
  rows[static_cast<std::size_t>(i)] = std::move(order);
  return PreferenceProfile(std::move(rows));
}

PreferenceProfile PreferenceProfile::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++line_no;
      const auto hash = out.find('#');
      if (hash != std::string::npos) out.erase(hash);
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto fail = [&](const std::string& what) {
    return InvalidInput("line " + std::to_string(line_no) + ": " + what);
  };
  if (!next_line(line)) throw InvalidInput("empty profile");
  int n = 0;
  {
    std::istringstream ls(line);
    std::string rest;
    if (!(ls >> n) || n <= 0 || (ls >> rest)) throw fail("first line must be the number of players");
  }
  std::vector<Order> rows;
  for (int i = 0; i < n; ++i) {
    if (!next_line(line)) {
      throw fail("profile lists " + std::to_string(i) + " players, expected " + std::to_string(n));
    }
    std::istringstream ls(line);
    Order row;
    int item = 0;
    while (ls >> item) row.push_back(item - 1);
    if (!ls.eof()) throw fail("non-numeric entry in the order of player " + std::to_string(i + 1));
    try {
      validate_order(row, n);
    } catch (const InvalidInput& e) {
      throw fail(std::string("player ") + std::to_string(i + 1) + ": " + e.what());
    }
    rows.push_back(std::move(row));
  }
  if (next_line(line)) throw fail("profile has more than " + std::to_string(n) + " rows");
  return PreferenceProfile(std::move(rows));
}

PreferenceProfile PreferenceProfile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open profile file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string PreferenceProfile::to_text() const {
  std::ostringstream out;
  out << size() << '\n';
  for (const auto& row : orders_) {
    for (std::size_t k = 0; k < row.size(); ++k) out << (k ? " " : "") << row[k] + 1;
    out << '\n';
  }
  return out.str();
}

std::vector<Order> all_orders(int n) {
  std::vector<Order> out;
  Order o(static_cast<std::size_t>(n));
  std::iota(o.begin(), o.end(), 0);
  do {
    out.push_back(o);
  } while (std::next_permutation(o.begin(), o.end()));
  return out;
}

}  // namespace ordmatch
