#include <doctest.h>

#include <map>
#include <set>

#include "hnc/enumerate.hpp"
#include "hnc/symmetry.hpp"
#include "support.hpp"

using namespace hnc;
using hnc::test::net;

TEST_CASE("apply")
{
    Network n = net(2, 1, {{3, {1, 2}}}, {{1, {2, 3}}, {2, {1, 3}}});
    CHECK(apply(Permutation::identity(2, 1), n) == n);
    Permutation swap = Permutation::from_blocks({2, 1}, {3});
    CHECK(apply(swap, n) == n);

    // A network whose demands are not symmetric is moved by the swap.
    Network m = net(2, 1, {{3, {1, 2}}}, {{1, {3}}, {2, {1, 3}}});
    Network sm = apply(swap, m);
    CHECK(sm != m);
    CHECK(sm.w == net(2, 1, {{3, {1, 2}}}, {{2, {3}}, {1, {2, 3}}}).w);

    std::mt19937 g(3);
    PermGroup full = PermGroup::full(2, 2);
    for (int i = 0; i < 50; ++i) {
        Network x = test::random_network(g, 4);
        if (x.k != 2 || x.l != 2) continue;
        const auto& els = full.elements();
        const auto& p1 = els[g() % els.size()];
        const auto& p2 = els[g() % els.size()];
        CHECK(apply(p2, apply(p1, x)) == apply(p2 * p1, x));
    }
    CHECK_THROWS(apply(Permutation::identity(1, 1), n));
}

TEST_CASE("permutation text")
{
    Permutation p = Permutation::from_blocks({2, 1}, {4, 3});
    CHECK(p.str() == "s:[2,1] e:[4,3]");
    CHECK(Permutation::parse(p.str()) == p);
    CHECK((p * p).is_identity());
    CHECK(p.inverse() == p);
}

TEST_CASE("canonicalize")
{
    std::mt19937 g(5);
    for (int i = 0; i < 200; ++i) {
        Network x = test::random_network(g, 5);
        Canonical c = canonicalize(x);
        CHECK(apply(c.witness, x) == c.canonical);
        Canonical again = canonicalize(c.canonical);
        CHECK(again.canonical == c.canonical);
        CHECK(again.witness.is_identity());
        PermGroup full = PermGroup::full(x.k, x.l);
        const auto& p = full.elements()[g() % full.order()];
        CHECK(canonicalize(apply(p, x)).canonical == c.canonical);
    }
}

TEST_CASE("stabilizers and orbits of the (2,2) catalog")
{
    auto res = enumerate_networks(2, 2);
    std::uint64_t max_stab = 0;
    bool saw_trivial = false;
    for (const auto& e : res.networks) {
        PermGroup stab = stabilizer(e.net);
        for (const auto& gen : stab.generators()) CHECK(apply(gen, e.net) == e.net);
        CHECK(stab.order() * orbit_size(e.net) == 4);
        max_stab = std::max(max_stab, stab.order());
        if (stab.order() == 1) {
            saw_trivial = true;
            // The four labeled copies all canonicalize to the same network.
            std::set<std::string> copies;
            PermGroup full = PermGroup::full(2, 2);
            for (const auto& p : full.elements()) {
                Network c = apply(p, e.net);
                copies.insert(render(c));
                CHECK(canonicalize(c).canonical == e.net);
            }
            CHECK(copies.size() == 4);
        }
    }
    CHECK(saw_trivial);
    CHECK(max_stab == 4);
    CHECK(res.labeled_count == 1270);
}

TEST_CASE("orbit size agrees with brute force")
{
    std::mt19937 g(9);
    for (int i = 0; i < 150; ++i) {
        Network x = test::random_network(g, 5);
        PermGroup full = PermGroup::full(x.k, x.l);
        std::set<std::string> orbit;
        for (const auto& p : full.elements()) orbit.insert(render(apply(p, x)));
        CHECK(orbit.size() == orbit_size(x));
        CHECK(stabilizer(x).order() * orbit_size(x) == factorial(x.k) * factorial(x.l));
    }
}

TEST_CASE("the fully symmetric (2,1) network")
{
    Network n = net(2, 1, {{3, {1, 2}}}, {{1, {2, 3}}, {2, {1, 3}}});
    CHECK(stabilizer(n).order() == 2);
    CHECK(orbit_size(n) == 1);
    CHECK(enumerate_networks(2, 1).labeled_count == 1);
}

namespace {

using Group = std::vector<std::vector<int>>;

std::vector<int> act(const std::vector<int>& g, const std::vector<int>& s)
{
    std::vector<int> out;
    for (int x : s) out.push_back(g[x]);
    std::sort(out.begin(), out.end());
    return out;
}

// Checks that the transversal at every level expands, under the group, to
// exactly the filtered subsets of that size, one orbit per representative.
void check_partition(int n, const Group& group, const SubsetTest& test)
{
    for (int size = 0; size <= n; ++size) {
        auto reps = subset_transversal(n, group, size, test);
        std::set<std::vector<int>> covered;
        for (const auto& r : reps) {
            std::set<std::vector<int>> orbit;
            for (const auto& g : group) orbit.insert(act(g, r.subset));
            for (const auto& s : orbit) CHECK(covered.insert(s).second);
            std::size_t stab = 0;
            for (const auto& g : group) stab += act(g, r.subset) == r.subset;
            CHECK(stab == r.stabilizer.size());
            CHECK(orbit.size() * stab == group.size());
        }
        std::size_t expected = 0;
        for (unsigned m = 0; m < (1U << n); ++m) {
            if (__builtin_popcount(m) != size) continue;
            std::vector<int> s;
            for (int i = 0; i < n; ++i)
                if (m >> i & 1) s.push_back(i);
            bool ok = true;
            // Hereditary: every subset along some growth chain passes.
            for (unsigned sub = m;; sub = (sub - 1) & m) {
                std::vector<int> t;
                for (int i = 0; i < n; ++i)
                    if (sub >> i & 1) t.push_back(i);
                ok = ok && test(t);
                if (sub == 0) break;
            }
            if (ok) {
                ++expected;
                CHECK(covered.count(s) == 1);
            }
        }
        CHECK(covered.size() == expected);
    }
}

Group def_action(int k, int l, std::vector<Def>& universe)
{
    LabelSet all = label_range(1, k + l);
    for (Label e = k + 1; e <= k + l; ++e)
        for (LabelSet in = 1; in <= all; ++in)
            if ((in & ~all) == 0 && !has(in, e) && !(in & 1)) universe.push_back({e, in});
    return induced_action(universe, PermGroup::full(k, l).elements());
}

}  // namespace

TEST_CASE("subset transversal")
{
    SUBCASE("trivial group")
    {
        Group trivial{{0, 1, 2}};
        auto reps = subset_transversal(3, trivial, 2, [](const std::vector<int>&) { return true; });
        CHECK(reps.size() == 3);
        for (const auto& r : reps) CHECK(r.stabilizer.size() == 1);
    }
    SUBCASE("edge definitions of (2,1)")
    {
        std::vector<Def> u;
        Group g = def_action(2, 1, u);
        CHECK(u.size() == 3);
        auto reps = subset_transversal(static_cast<int>(u.size()), g, 1, [](const std::vector<int>&) { return true; });
        CHECK(reps.size() == 2);  // {1} ~ {2}, and {1,2}
        check_partition(static_cast<int>(u.size()), g, [](const std::vector<int>&) { return true; });
    }
    SUBCASE("edge definitions, one per edge")
    {
        for (auto [k, l] : {std::pair{1, 2}, std::pair{3, 1}, std::pair{2, 2}}) {
            std::vector<Def> u;
            Group g = def_action(k, l, u);
            if (u.size() > 12) continue;
            auto one_per_edge = [&](const std::vector<int>& s) {
                LabelSet seen = 0;
                for (int i : s) {
                    if (has(seen, u[i].id)) return false;
                    seen |= bit(u[i].id);
                }
                return true;
            };
            check_partition(static_cast<int>(u.size()), g, one_per_edge);
        }
    }
    SUBCASE("cyclic group on 12 points")
    {
        Group g;
        for (int r = 0; r < 12; ++r) {
            std::vector<int> p(12);
            for (int i = 0; i < 12; ++i) p[i] = (i + r) % 12;
            g.push_back(p);
        }
        check_partition(12, g, [](const std::vector<int>& s) { return s.size() <= 5; });
    }
}
