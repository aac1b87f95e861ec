#include <doctest.h>

#include <random>

#include "ordmatch/distribution.hpp"
#include "ordmatch/dominance.hpp"
#include "ordmatch/errors.hpp"
#include "ordmatch/instances.hpp"
#include "ordmatch/matrix.hpp"
#include "ordmatch/profile.hpp"
#include "oracles.hpp"

using namespace ordmatch;

namespace {

Rational q(long a, long b) { return Rational(Integer(a), Integer(b)); }

ItemVector vec(std::initializer_list<Rational> xs) { return ItemVector(xs); }

}  // namespace

TEST_CASE("rational: lowest terms and exact arithmetic") {
  CHECK(q(2, 4).str() == "1/2");
  CHECK(q(-3, -6).str() == "1/2");
  CHECK(q(3, -6).str() == "-1/2");
  CHECK(Rational(0).str() == "0/1");
  CHECK(Rational(1).str() == "1/1");
  CHECK(q(1, 3) + q(1, 6) == q(1, 2));
  CHECK(q(2, 3) * q(3, 4) == q(1, 2));
  CHECK(q(1, 2) / q(1, 4) == Rational(2));
  CHECK(q(1, 3) < q(1, 2));
  CHECK_THROWS_AS(Rational(Integer(1), Integer(0)), InvalidInput);
  CHECK_THROWS_AS(q(1, 2) / Rational(0), InvalidInput);
}

TEST_CASE("rational: parse and print") {
  CHECK(Rational::parse("6/8") == q(3, 4));
  CHECK(Rational::parse("-5") == Rational(-5));
  CHECK_THROWS_AS(Rational::parse("x/2"), InvalidInput);
  CHECK_THROWS_AS(Rational::parse("1/0"), InvalidInput);
  CHECK(q(1, 3).decimal() == "0.333333");
  CHECK(q(2, 3).decimal() == "0.666667");
  CHECK(q(-2, 3).decimal() == "-0.666667");
  CHECK(Rational(1).decimal() == "1.000000");
  CHECK(q(1, 2000000).decimal() == "0.000001");  // half rounds away from zero
}

TEST_CASE("rational: round trip on random fractions") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 1000000);
  for (int k = 0; k < 2000; ++k) {
    const Rational a = q(num(rng), den(rng));
    const Rational c = q(num(rng), den(rng));
    CHECK((a + c) - c == a);
    if (!c.is_zero()) CHECK((a * c) / c == a);
  }
}

TEST_CASE("rational: hash keys agree with equality") {
  std::string k1, k2, k3;
  q(2, 4).append_key(k1);
  q(1, 2).append_key(k2);
  q(1, 3).append_key(k3);
  CHECK(k1 == k2);
  CHECK(k1 != k3);
}

TEST_CASE("profile: text format") {
  const auto p = PreferenceProfile::parse("# comment\n4\n1 3 2 4\n1 4 2 3  # trailing\n\n2 3 1 4\n2 4 1 3\n");
  CHECK(p == instances::four_player());
  CHECK(PreferenceProfile::parse(p.to_text()) == p);
  CHECK(p.rank(0, 2) == 1);
  CHECK(p.prefers(0, 2, 1));
  CHECK(p.favorite_in(0, ItemSet{}.with(1).with(3)) == 1);
  CHECK(p.favorite_in(0, ItemSet{}) == -1);
}

TEST_CASE("profile: parse errors name the line") {
  auto message = [](const std::string& text) {
    try {
      PreferenceProfile::parse(text);
    } catch (const InvalidInput& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message("2\n1 2\n1 1\n").find("line 3") != std::string::npos);
  CHECK(message("2\n1 2\n1 x\n").find("line 3") != std::string::npos);
  CHECK(message("2\n1 2\n").find("line 2") != std::string::npos);
  CHECK(message("2\n1 2\n2 1\n1 2\n").find("line 4") != std::string::npos);
  CHECK(message("two\n").find("line 1") != std::string::npos);
  CHECK_THROWS_AS(PreferenceProfile::parse(""), InvalidInput);
  CHECK_THROWS_AS(PreferenceProfile({{0, 1}, {0, 2}}), InvalidInput);
  CHECK_THROWS_AS(PreferenceProfile({{0, 1}}), InvalidInput);
}

TEST_CASE("profile: all orders") {
  const auto o = all_orders(4);
  CHECK(o.size() == 24);
  CHECK(o.front() == Order{0, 1, 2, 3});
  CHECK(o.back() == Order{3, 2, 1, 0});
}

TEST_CASE("assignment and matrix invariants") {
  CHECK_THROWS_AS(Assignment({0, 0}), InvalidInput);
  CHECK(Assignment({2, 0, 1}).holders() == std::vector<PlayerId>{1, 2, 0});
  CHECK_THROWS_AS(BistochasticMatrix::from_strings({{"1/2", "1/2"}, {"1/2", "1/3"}}), InvalidInput);
  CHECK_THROWS_AS(BistochasticMatrix::from_strings({{"1", "0"}, {"1", "0"}}), InvalidInput);
  CHECK_THROWS_AS(BistochasticMatrix::from_strings({{"3/2", "-1/2"}, {"-1/2", "3/2"}}), InvalidInput);
  CHECK(BistochasticMatrix::uniform(3)(1, 2) == q(1, 3));
  CHECK_THROWS_AS(validate_distribution(vec({q(1, 2), q(1, 4)})), InvalidInput);
  CHECK_NOTHROW(validate_distribution(vec({q(1, 2), q(1, 4)}), true));
}

TEST_CASE("dominance: vectors") {
  const Order o = instances::four_player().order(0);  // m1 m3 m2 m4
  const auto u = uniform_vector(4);
  CHECK(dominates_vec(u, u, o));
  // prefix sums along the order: (1/2,1,1,1) against (1/2,5/8,7/8,1)
  const auto p = vec({q(1, 2), 0, q(1, 2), 0});
  const auto r = vec({q(1, 2), q(1, 4), q(1, 8), q(1, 8)});
  CHECK(prefix_sums(p, o) == vec({q(1, 2), 1, 1, 1}));
  CHECK(prefix_sums(r, o) == vec({q(1, 2), q(5, 8), q(7, 8), 1}));
  CHECK(dominates_vec(p, r, o));
  const auto s = vec({q(3, 4), 0, q(1, 4), 0});
  CHECK_FALSE(dominates_vec(p, s, o));
  const auto f = first_shortfall(p, s, o);
  REQUIRE(f);
  CHECK(f->length == 1);
  CHECK(f->p_sum == q(1, 2));
  CHECK(f->q_sum == q(3, 4));
  CHECK_THROWS_AS(dominates_vec(p, vec({1, 0}), o), InvalidInput);
}

TEST_CASE("dominance: partial order on random vectors") {
  std::mt19937_64 rng(5);
  const Order o{0, 1, 2, 3};
  auto random_vec = [&]() {
    std::vector<long> w(4);
    long t = 0;
    for (auto& x : w) t += (x = static_cast<long>(rng() % 5));
    if (t == 0) return uniform_vector(4);
    ItemVector v;
    for (long x : w) v.push_back(q(x, t));
    return v;
  };
  int transitive_cases = 0;
  for (int k = 0; k < 3000; ++k) {
    const auto a = random_vec();
    const auto b = random_vec();
    const auto c = random_vec();
    CHECK(dominates_vec(a, a, o));
    if (dominates_vec(a, b, o) && dominates_vec(b, a, o)) CHECK(a == b);
    if (dominates_vec(a, b, o) && dominates_vec(b, c, o)) {
      ++transitive_cases;
      CHECK(dominates_vec(a, c, o));
    }
  }
  CHECK(transitive_cases > 0);
}

TEST_CASE("dominance: matrices on the four-player profile") {
  const auto p = instances::four_player();
  const auto ps = instances::four_player_ps();
  const auto u = BistochasticMatrix::uniform(4);
  CHECK(dominates_matrix(ps, ps, p));
  CHECK_FALSE(strictly_dominates(ps, ps, p));
  CHECK(dominates_matrix(ps, u, p));
  CHECK(strictly_dominates(ps, u, p));
  CHECK_FALSE(dominates_matrix(u, ps, p));
  CHECK_FALSE(strictly_dominates(u, ps, p));
  CHECK_THROWS_AS(dominates_matrix(BistochasticMatrix::uniform(3), ps, p), InvalidInput);
}

TEST_CASE("distribution: induced matrix") {
  CHECK(induced_matrix(OutcomeDistribution::point(Assignment::identity(3))) ==
        BistochasticMatrix::of(Assignment::identity(3)));
  OutcomeDistribution d;
  d.add(instances::four_player_head(), q(1, 2));
  d.add(instances::four_player_tail(), q(1, 2));
  CHECK(induced_matrix(d) == instances::four_player_ps());
  OutcomeDistribution two;
  two.add(Assignment({0, 1}), q(1, 2));
  two.add(Assignment({1, 0}), q(1, 2));
  CHECK(induced_matrix(two) == BistochasticMatrix::uniform(2));
  CHECK(d.row(0) == vec({q(1, 2), 0, q(1, 2), 0}));
  CHECK(d.probability([](const Assignment& a) { return a.item_of(0) == 0; }) == q(1, 2));
  OutcomeDistribution bad;
  bad.add(Assignment({0, 1}), q(1, 3));
  CHECK_THROWS_AS(bad.validate(), ConsistencyError);
  CHECK_THROWS_AS(induced_matrix(bad), ConsistencyError);
}

TEST_CASE("index sets") {
  const PlayerSet s = PlayerSet{}.with(3).with(1);
  CHECK(s.size() == 2);
  CHECK(s.first() == 1);
  CHECK(s.members() == std::vector<int>{1, 3});
  CHECK(PlayerSet::full(4).minus(s).members() == std::vector<int>{0, 2});
  CHECK((s | PlayerSet::single(0)).size() == 3);
}
