#include <doctest.h>

#include <algorithm>

#include "hnc/model.hpp"
#include "support.hpp"

using namespace hnc;
using hnc::test::net;

namespace {

bool mentions(const ValidationReport& r, const std::string& what)
{
    return std::any_of(r.violations.begin(), r.violations.end(),
                       [&](const std::string& v) { return v.find(what) != std::string::npos; });
}

}  // namespace

TEST_CASE("validate")
{
    CHECK(validate(test::unit_network()).ok());

    Network cyc = net(1, 2, {{2, {3}}, {3, {2}}}, {{1, {2}}});
    CHECK(mentions(validate(cyc), "cycle"));

    // The duplicate definition collapses, leaving one definition for L = 2.
    Network dup = net(1, 2, {{2, {1}}, {2, {1}}}, {{1, {2}}});
    CHECK(dup.q.size() == 1);
    CHECK(mentions(validate(dup), "differs from L=2"));

    CHECK(mentions(validate(net(1, 1, {{2, {}}}, {{1, {2}}})), "empty input"));
    CHECK(mentions(validate(net(1, 1, {{2, {5}}}, {{1, {2}}})), "out of range"));
    CHECK(mentions(validate(net(1, 2, {{2, {1}}, {2, {1, 3}}}, {{1, {2}}})), "defined twice"));
    CHECK(mentions(validate(net(1, 1, {{2, {1}}}, {{2, {1}}})), "not a source"));
}

TEST_CASE("node_view")
{
    SUBCASE("(1,1)")
    {
        NodeView v = node_view(test::unit_network());
        REQUIRE(v.node_in.size() == 1);
        CHECK(v.node_in[0] == bit(1));
        CHECK(v.node_out[0] == bit(2));
        REQUIRE(v.sink_in.size() == 1);
        CHECK(v.sink_in[0] == bit(2));
        CHECK(v.sink_demand[0] == bit(1));
        CHECK(v.tail[2] == 0);
    }
    SUBCASE("two sinks with side information")
    {
        NodeView v = node_view(net(2, 1, {{3, {1, 2}}}, {{1, {2, 3}}, {2, {1, 3}}}));
        REQUIRE(v.sink_in.size() == 2);
        CHECK(v.sink_in[0] == make_set({1, 3}));
        CHECK(v.sink_demand[0] == bit(2));
        CHECK(v.sink_in[1] == make_set({2, 3}));
        CHECK(v.sink_demand[1] == bit(1));
    }
    SUBCASE("chained nodes")
    {
        NodeView v = node_view(net(1, 2, {{2, {1}}, {3, {1, 2}}}, {{1, {3}}}));
        REQUIRE(v.node_in.size() == 2);
        CHECK(v.node_in[0] == bit(1));
        CHECK(v.node_out[0] == bit(2));
        CHECK(v.node_in[1] == make_set({1, 2}));
        CHECK(v.node_out[1] == bit(3));
        CHECK(v.head_nodes[2] == std::vector<int>{1});
    }
    SUBCASE("sinks sharing an input set are one sink")
    {
        NodeView v = node_view(net(2, 1, {{3, {1, 2}}}, {{1, {3}}, {2, {3}}}));
        REQUIRE(v.sink_in.size() == 1);
        CHECK(v.sink_demand[0] == make_set({1, 2}));
    }
}

TEST_CASE("compare")
{
    Network a = test::unit_network();
    CHECK(compare(a, a) == 0);
    Network x = net(1, 2, {{2, {1}}, {3, {1}}}, {{1, {2, 3}}});
    Network y = net(1, 2, {{2, {1, 3}}, {3, {1}}}, {{1, {2, 3}}});
    CHECK(compare(x, y) < 0);
    CHECK(compare(y, x) > 0);
    CHECK_THROWS(compare(a, x));

    CHECK(compare_sets(make_set({1}), make_set({1, 2})) < 0);
    CHECK(compare_sets(make_set({1, 3}), make_set({2})) < 0);
    CHECK(compare_sets(make_set({2}), make_set({1, 3})) > 0);
}

TEST_CASE("compare is a total order on random networks")
{
    std::mt19937 g(7);
    std::vector<Network> pool;
    while (pool.size() < 60) {
        Network n = test::random_network(g, 4);
        if (n.k == 2 && n.l == 2) pool.push_back(n);
    }
    for (const auto& a : pool)
        for (const auto& b : pool) {
            int ab = compare(a, b), ba = compare(b, a);
            CHECK(ab == -ba);
            CHECK((ab == 0) == (a == b));
            for (const auto& c : pool)
                if (ab < 0 && compare(b, c) < 0) CHECK(compare(a, c) < 0);
        }
}

TEST_CASE("parse and render")
{
    Network a = test::unit_network();
    std::string text = render(a);
    CHECK(text == R"({"k":1,"l":1,"q":[[2,[1]]],"w":[[1,[2]]]})");
    CHECK(parse(text) == a);
    CHECK(render(parse(text)) == text);
    CHECK_THROWS_AS(parse(R"({"k":1,"l":1,"q":[[2,[1]]]})"), ParseError);
    CHECK_THROWS_AS(parse("{\"k\":1,"), ParseError);
    // Whitespace and unsorted lists parse to the same network.
    CHECK(parse(R"({ "w": [[1, [2]]], "q": [[2, [1]]], "l": 1, "k": 1 })") == a);

    std::mt19937 g(11);
    for (int i = 0; i < 200; ++i) {
        Network n = test::random_network(g, 5);
        std::string t = render(n);
        CHECK(render(parse(t)) == t);
    }
}

TEST_CASE("topological order")
{
    Network n = net(1, 3, {{2, {1, 4}}, {3, {1}}, {4, {3}}}, {{1, {2}}});
    auto order = topological_edges(n);
    REQUIRE(order.size() == 3);
    auto pos = [&](Label e) { return std::find(order.begin(), order.end(), e) - order.begin(); };
    CHECK(pos(3) < pos(4));
    CHECK(pos(4) < pos(2));
}
