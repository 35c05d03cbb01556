#include <random>
#include <string>

#include "doctest.h"
#include "flattrans/nondet.hpp"
#include "oracles.hpp"

using namespace flattrans;
using flattrans::oracles::TreePtr;
using IntChoices = Choices<int>;

TEST_CASE("choose") {
  CHECK(all_values(choose(IntChoices::pure(1), IntChoices::pure(2))) == std::vector{1, 2});
  CHECK(all_values(choose(IntChoices::fail(), IntChoices::pure(7))) == std::vector{7});
  CHECK(all_values(choose(choose(IntChoices::pure(1), IntChoices::pure(2)), IntChoices::pure(3))) ==
        std::vector{1, 2, 3});
}

TEST_CASE("one_value") {
  CHECK_FALSE(one_value(IntChoices::fail()).has_value());
  CHECK(*one_value(choose(Choices<std::string>::pure("a"), Choices<std::string>::pure("b"))) == "a");
}

TEST_CASE("all_values") {
  CHECK(all_values(IntChoices::fail()).empty());
  CHECK(all_values(choose(IntChoices::pure(1), choose(IntChoices::pure(2), IntChoices::pure(3)))) ==
        std::vector{1, 2, 3});
  CHECK(all_values(IntChoices::from({4, 4, 5})) == std::vector{4, 4, 5});
}

TEST_CASE("laziness") {
  // Naturals from n: infinitely many alternatives.
  std::function<IntChoices(int)> nats = [&](int n) {
    return choose(IntChoices::pure(n), IntChoices::defer([&, n] { return nats(n + 1); }));
  };
  CHECK(*one_value(nats(3)) == 3);
  int forced = 0;
  auto c = choose(IntChoices::pure(1), IntChoices::defer([&] {
                    ++forced;
                    return IntChoices::pure(2);
                  }));
  CHECK(*one_value(c) == 1);
  CHECK(forced == 0);
  CHECK(all_values(c).size() == 2);
  CHECK(forced == 1);
}

TEST_CASE("map filter bind") {
  auto c = IntChoices::from({1, 2, 3, 4});
  CHECK(all_values(c.map([](int x) { return x * 10; })) == std::vector{10, 20, 30, 40});
  CHECK(all_values(c.filter([](int x) { return x % 2 == 0; })) == std::vector{2, 4});
  CHECK(all_values(c.bind(oracles::continuation)) == std::vector{2, 2, 102, 8});
  CHECK(all_values(Choices<int>::lift(std::nullopt)).empty());
  CHECK(all_values(Choices<int>::lift(9)) == std::vector{9});
}

TEST_CASE("laws on random computation trees") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    TreePtr a = oracles::random_tree(rng, 4);
    TreePtr b = oracles::random_tree(rng, 4);
    TreePtr c = oracles::random_tree(rng, 4);
    auto ca = oracles::to_choices(a);
    auto cb = oracles::to_choices(b);
    auto cc = oracles::to_choices(c);
    CHECK(all_values(ca) == oracles::leaves(*a));
    CHECK(all_values(choose(choose(ca, cb), cc)) == all_values(choose(ca, choose(cb, cc))));
    CHECK(all_values(choose(IntChoices::fail(), ca)) == all_values(ca));
    CHECK(all_values(choose(ca, IntChoices::fail())) == all_values(ca));
    CHECK(all_values(choose(ca, cb).bind(oracles::continuation)) ==
          all_values(choose(ca.bind(oracles::continuation), cb.bind(oracles::continuation))));
    std::vector<int> expected;
    for (int x : oracles::leaves(*a)) {
      auto ys = oracles::continuation_list(x);
      expected.insert(expected.end(), ys.begin(), ys.end());
    }
    CHECK(all_values(ca.bind(oracles::continuation)) == expected);
    auto all = all_values(ca);
    auto one = one_value(ca);
    CHECK(one.has_value() == !all.empty());
    if (one) CHECK(*one == all.front());
  }
}
