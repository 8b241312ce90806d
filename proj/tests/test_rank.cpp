#include <chrono>

#include "doctest.h"

#include "cpnet/genbench.hpp"
#include "cpnet/rank.hpp"
#include "support/brute.hpp"
#include "support/f1.hpp"

using namespace cpnet;
using testing_support::f1;

TEST_CASE("ancestors and descendent paths on the seat example")
{
    const CPNet net = fixtures::flight_example();
    CHECK(ancestors(net, 2) == std::vector<std::size_t>{0, 1});
    CHECK(ancestors(net, 0).empty());
    CHECK(ancestors(net, 3) == std::vector<std::size_t>{0, 1, 2});
    CHECK(descendent_paths(net, 0) == 2);
    CHECK(descendent_paths(net, 2) == 1);
    CHECK(descendent_paths(net, 3) == 0);
}

TEST_CASE("descendent paths on a chain and a diamond")
{
    const CPNet chain({2, 2, 2}, {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}}, {{{1, 2}}, {{1, 2}, {2, 1}}, {{1, 2}, {2, 1}}});
    CHECK(descendent_paths(chain, 0) == 2);
    // 0->1->3, 0->2->3, 0->1, 0->2, 0->3 and 1->3, 2->3.
    CPNet::Adjacency adj = {{0, 1, 1, 1}, {0, 0, 0, 1}, {0, 0, 0, 1}, {0, 0, 0, 0}};
    std::vector<std::vector<Positions>> cpts = {
        {{1, 2}}, {{1, 2}, {2, 1}}, {{1, 2}, {2, 1}}, std::vector<Positions>(8, Positions{1, 2})};
    const CPNet diamond({2, 2, 2, 2}, adj, cpts);
    CHECK(descendent_paths(diamond, 0) == 5);
    CHECK(descendent_paths(diamond, 1) == 1);
}

TEST_CASE("preference position")
{
    // x1 > x2 ~ x3 ~ x4 > x5 > x6 ~ x7 > x8
    const Positions row{1, 2, 2, 2, 3, 4, 4, 5};
    CHECK(preference_position(row, 2) == Rational(4, 5));
    CHECK(preference_position(row, 8) == Rational(1, 5));
    CHECK(preference_position(row, 1) == Rational(1));
    CHECK(preference_position(Positions{3, 1, 2}, 2) == Rational(1));
    CHECK(preference_position(Positions{3, 1, 2}, 1) == Rational(1, 3));
    const CPNet net = fixtures::flight_example();
    CHECK(preference_position(net, 2, 3, std::vector<int>{2, 1}) == Rational(1));
    CHECK_THROWS_AS(preference_position(row, 9), std::invalid_argument);
}

TEST_CASE("worked rank values")
{
    const CPNet net = fixtures::flight_example();
    const RankModel model(net);
    CHECK(rank(net, f1("ā b c̄̄ d̄")) == Rational(61, 12));
    CHECK(rank(net, f1("a b c̄ d̄")) == Rational(77, 12));
    CHECK(rank(net, f1("ā b̄ c d")) == Rational(39, 12));
    CHECK(rank(net, f1("ā b c̄̄ d")) == Rational(121, 24));
    CHECK(rank(net, f1("ā b c̄ d̄")) == Rational(114, 24));
    CHECK(model.rank(f1("ā b c̄̄ d")) == Rational(121, 24));
    CHECK(rank(net, f1("ā b c̄̄ d")).str() == "121/24");
}

TEST_CASE("least rank improvement and rank differences")
{
    const CPNet net = fixtures::flight_example();
    const RankModel model(net);
    CHECK(least_rank_improvement(net, 0) == Rational(7, 6));
    CHECK(least_rank_improvement(net, 1) == Rational(7, 6));
    CHECK(least_rank_improvement(net, 2) == Rational(1, 8));
    CHECK(least_rank_improvement(net, 3) == Rational(1, 24));
    for (std::size_t x = 0; x < 4; ++x) CHECK(model.stats(x).least_improvement == least_rank_improvement(net, x));

    const Outcome o = f1("ā b c̄̄ d");
    const Outcome o_prime = f1("ā b c̄ d̄");
    CHECK(least_rank_difference(net, o, o_prime) == Rational(1, 6));
    CHECK(model.least_rank_difference(o, o_prime) == Rational(1, 6));
    CHECK(least_rank_difference(net, o, o) == Rational(0));
    CHECK(least_rank_difference(net, f1("a b c d"), f1("ā b̄ c̄ d̄")) == Rational(5, 2));

    CHECK(min_rank_difference(net, o, o_prime) == Rational(1, 24));
    CHECK(model.min_rank_difference(o, o_prime) == Rational(1, 24));
    CHECK(min_rank_difference(net, f1("a b c d"), f1("a b c̄ d")) == Rational(1, 8));
    CHECK(min_rank_difference(net, f1("a b c d"), f1("ā b̄ c d")) == Rational(7, 6));
    CHECK_THROWS_AS(min_rank_difference(net, o, o), EqualOutcomes);
    CHECK_THROWS_AS(model.min_rank_difference(o, o), EqualOutcomes);

    const CPNet single({2}, {{0}}, {{{1, 2}}});
    CHECK(least_rank_improvement(single, 0) == Rational(1, 2));
}

TEST_CASE("rank model agrees with the matrix procedures and brute force")
{
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
        GenSpec spec;
        spec.n = 2 + seed % 7;
        spec.d_u = 2 + static_cast<int>(seed % 3);
        spec.seed = seed * 7919;
        spec.indifference_rate = seed % 3 == 0 ? 0.35 : 0.0;
        const CPNet net = generate_net(spec);
        const RankModel model(net);
        for (std::size_t x = 0; x < net.size(); ++x) {
            const auto anc = ancestors(net, x);
            CHECK(anc == model.stats(x).ancestors);
            CHECK(std::set<std::size_t>(anc.begin(), anc.end()) == brute::ancestors(net, x));
            CHECK(descendent_paths(net, x) == model.stats(x).descendent_paths);
            CHECK(descendent_paths(net, x).get_si() == brute::count_paths(net, x));
            CHECK(brute::to_q(least_rank_improvement(net, x)) == brute::least_improvement(net, x));
            CHECK(least_rank_improvement(net, x) > Rational(0));
        }
        std::uint64_t state = seed;
        for (int k = 0; k < 10; ++k) {
            const Outcome o = random_outcome(net, state);
            const Rational r = rank(net, o);
            CHECK(r == model.rank(o));
            CHECK(brute::to_q(r) == brute::rank(net, brute::values(o)));
            CHECK(r > Rational(0));
        }
    }
}

TEST_CASE("rank rejects invalid outcomes")
{
    const CPNet net = fixtures::flight_example();
    CHECK_THROWS_AS(rank(net, Outcome{1, 1, 4, 1}), std::invalid_argument);
    CHECK_THROWS_AS(rank(net, Outcome{1, 1, 1}), std::invalid_argument);
}

TEST_CASE("rank on a large generated net is fast")
{
    GenSpec spec;
    spec.n = 50;
    spec.d_u = 5;
    spec.seed = 5;
    const CPNet net = generate_net(spec);
    std::uint64_t state = 9;
    const Outcome o = random_outcome(net, state);
    const auto start = std::chrono::steady_clock::now();
    const Rational r = rank(net, o);
    const auto elapsed = std::chrono::steady_clock::now() - start;
    CHECK(r > Rational(0));
    CHECK(std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() < 100);
}
