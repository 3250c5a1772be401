// SPDX-License-Identifier: MIT
// Shared helpers for the unit tests and the acceptance binary.
#pragma once

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "hnc/model.hpp"
#include "hnc/polyhedra.hpp"

namespace hnc::test {

using DefList = std::initializer_list<std::pair<Label, std::initializer_list<Label>>>;

inline Network net(int k, int l, DefList q, DefList w)
{
    std::vector<Def> qs, ws;
    for (const auto& [id, in] : q) qs.push_back({id, make_set(std::vector<Label>(in))});
    for (const auto& [id, in] : w) ws.push_back({id, make_set(std::vector<Label>(in))});
    return Network(k, l, qs, ws);
}

// The (1,1) seed network.
inline Network unit_network() { return net(1, 1, {{2, {1}}}, {{1, {2}}}); }

// A structurally valid network with K+L <= max_n. Edge e reads sources and
// lower-numbered edges only, so the result is acyclic; it need not be minimal.
inline Network random_network(std::mt19937& g, int max_n = 4)
{
    int k = std::uniform_int_distribution<int>(1, max_n - 1)(g);
    int l = std::uniform_int_distribution<int>(1, max_n - k)(g);
    std::vector<Def> q, w;
    for (Label e = k + 1; e <= k + l; ++e) {
        LabelSet in = 0;
        while (!in)
            for (Label x = 1; x < e; ++x)
                if (g() % 3 == 0) in |= bit(x);
        q.push_back({e, in});
    }
    int sinks = 1 + static_cast<int>(g() % 3);
    for (int t = 0; t < sinks; ++t) {
        Label d = 1 + static_cast<Label>(g() % static_cast<unsigned>(k));
        LabelSet in = 0;
        for (Label x = 1; x <= k + l; ++x)
            if (x != d && g() % 2) in |= bit(x);
        w.push_back({d, in});
    }
    return Network(k, l, q, w);
}

inline Vec random_vec(std::mt19937& g, int d, int lo = -3, int hi = 3)
{
    std::uniform_int_distribution<int> u(lo, hi);
    Vec v;
    for (int i = 0; i < d; ++i) v.emplace_back(u(g));
    return v;
}

inline std::vector<std::string> coord_names(int d)
{
    std::vector<std::string> n;
    for (int i = 0; i < d; ++i) n.push_back("x" + std::to_string(i + 1));
    return n;
}

// A cone given by a few random inequalities, intersected with the orthant
// half the time so that both pointed and non-pointed cones appear.
inline Cone random_cone(std::mt19937& g, int d)
{
    Cone c = (g() % 2) ? Cone::orthant(coord_names(d)) : Cone::whole(coord_names(d));
    int m = std::uniform_int_distribution<int>(1, d + 2)(g);
    for (int i = 0; i < m; ++i) {
        Vec a = random_vec(g, d);
        if (!is_zero(a)) c.ineqs.push_back(a);
    }
    if (g() % 4 == 0) {
        Vec a = random_vec(g, d);
        if (!is_zero(a)) c.eqs.push_back(a);
    }
    return c;
}

}  // namespace hnc::test
