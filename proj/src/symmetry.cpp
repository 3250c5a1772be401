// SPDX-License-Identifier: MIT
#include "hnc/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hnc {

Permutation Permutation::identity(int k, int l)
{
    Permutation p;
    p.k = k;
    p.l = l;
    p.image.resize(k + l + 1);
    std::iota(p.image.begin(), p.image.end(), 0);
    return p;
}

Permutation Permutation::from_blocks(const std::vector<Label>& source_map, const std::vector<Label>& edge_map)
{
    int k = static_cast<int>(source_map.size());
    int l = static_cast<int>(edge_map.size());
    Permutation p = identity(k, l);
    std::vector<bool> seen(k + l + 1, false);
    for (int i = 0; i < k; ++i) {
        Label y = source_map[i];
        if (y < 1 || y > k || seen[y]) throw std::invalid_argument("source map is not a bijection on sources");
        seen[y] = true;
        p.image[i + 1] = y;
    }
    for (int i = 0; i < l; ++i) {
        Label y = edge_map[i];
        if (y <= k || y > k + l || seen[y]) throw std::invalid_argument("edge map is not a bijection on edges");
        seen[y] = true;
        p.image[k + i + 1] = y;
    }
    return p;
}

LabelSet Permutation::operator()(LabelSet s) const
{
    LabelSet out = 0;
    while (s) {
        out |= bit(image[lowest(s)]);
        s &= s - 1;
    }
    return out;
}

bool Permutation::is_identity() const
{
    for (std::size_t i = 0; i < image.size(); ++i)
        if (image[i] != static_cast<Label>(i)) return false;
    return true;
}

Permutation Permutation::inverse() const
{
    Permutation p = *this;
    for (std::size_t i = 1; i < image.size(); ++i) p.image[image[i]] = static_cast<Label>(i);
    return p;
}

Permutation operator*(const Permutation& a, const Permutation& b)
{
    if (a.k != b.k || a.l != b.l) throw std::invalid_argument("composing permutations of different size");
    Permutation p = b;
    for (std::size_t i = 1; i < p.image.size(); ++i) p.image[i] = a.image[b.image[i]];
    return p;
}

std::string Permutation::str() const
{
    std::ostringstream os;
    os << "s:[";
    for (int i = 1; i <= k; ++i) os << (i > 1 ? "," : "") << image[i];
    os << "] e:[";
    for (int i = k + 1; i <= k + l; ++i) os << (i > k + 1 ? "," : "") << image[i];
    os << ']';
    return os.str();
}

namespace {

std::vector<Label> parse_list(const std::string& text, const std::string& tag)
{
    auto at = text.find(tag + "[");
    if (at == std::string::npos) throw std::invalid_argument("permutation text lacks \"" + tag + "[\"");
    auto end = text.find(']', at);
    if (end == std::string::npos) throw std::invalid_argument("unterminated list in permutation text");
    std::string body = text.substr(at + tag.size() + 1, end - at - tag.size() - 1);
    std::vector<Label> out;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoi(item));
    return out;
}

}  // namespace

Permutation Permutation::parse(const std::string& text)
{
    return from_blocks(parse_list(text, "s:"), parse_list(text, "e:"));
}

std::uint64_t factorial(int n)
{
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

PermGroup::PermGroup(int k, int l, std::vector<Permutation> generators)
    : k_(k), l_(l), gens_(std::move(generators))
{
    for (const Permutation& g : gens_)
        if (g.k != k || g.l != l) throw std::invalid_argument("generator size mismatch");
}

PermGroup PermGroup::full(int k, int l)
{
    std::vector<Permutation> gens;
    // Adjacent transpositions within each block generate S_K x S_L.
    for (int i = 1; i < k; ++i) {
        Permutation p = Permutation::identity(k, l);
        std::swap(p.image[i], p.image[i + 1]);
        gens.push_back(p);
    }
    for (int i = k + 1; i < k + l; ++i) {
        Permutation p = Permutation::identity(k, l);
        std::swap(p.image[i], p.image[i + 1]);
        gens.push_back(p);
    }
    return PermGroup(k, l, std::move(gens));
}

const std::vector<Permutation>& PermGroup::elements() const
{
    if (!elems_.empty()) return elems_;
    Permutation id = Permutation::identity(k_, l_);
    std::set<Permutation> seen{id};
    std::vector<Permutation> frontier{id};
    elems_.push_back(id);
    while (!frontier.empty()) {
        std::vector<Permutation> next;
        for (const Permutation& x : frontier) {
            for (const Permutation& g : gens_) {
                Permutation y = g * x;
                if (seen.insert(y).second) {
                    if (seen.size() > kMaxGroupOrder) throw std::length_error("group too large to list");
                    elems_.push_back(y);
                    next.push_back(y);
                }
            }
        }
        frontier = std::move(next);
    }
    std::sort(elems_.begin() + 1, elems_.end());
    return elems_;
}

bool PermGroup::contains(const Permutation& p) const
{
    const auto& el = elements();
    return std::find(el.begin(), el.end(), p) != el.end();
}

Network apply(const Permutation& perm, const Network& net)
{
    if (perm.k != net.k || perm.l != net.l) throw std::invalid_argument("apply: permutation size mismatch");
    Network out;
    out.k = net.k;
    out.l = net.l;
    out.q.reserve(net.q.size());
    out.w.reserve(net.w.size());
    for (const Def& d : net.q) out.q.push_back({perm(d.id), perm(d.in)});
    for (const Def& d : net.w) out.w.push_back({perm(d.id), perm(d.in)});
    out.normalize();
    return out;
}

namespace {

// Calls f on every element of S_K x S_L, identity first.
template <class F>
void for_each_block_perm(int k, int l, F&& f)
{
    if (factorial(k) * factorial(l) > kMaxGroupOrder)
        throw std::length_error("K!*L! exceeds the exhaustive canonicalization cap");
    std::vector<Label> s(k), e(l);
    std::iota(s.begin(), s.end(), 1);
    do {
        std::iota(e.begin(), e.end(), k + 1);
        do {
            Permutation p = Permutation::identity(k, l);
            for (int i = 0; i < k; ++i) p.image[i + 1] = s[i];
            for (int i = 0; i < l; ++i) p.image[k + 1 + i] = e[i];
            f(p);
        } while (std::next_permutation(e.begin(), e.end()));
    } while (std::next_permutation(s.begin(), s.end()));
}

}  // namespace

Canonical canonicalize(const Network& net)
{
    Canonical best{net, Permutation::identity(net.k, net.l)};
    for_each_block_perm(net.k, net.l, [&](const Permutation& p) {
        Network img = apply(p, net);
        if (compare(img, best.canonical) < 0) {
            best.canonical = std::move(img);
            best.witness = p;
        }
    });
    return best;
}

PermGroup stabilizer(const Network& net)
{
    std::vector<Permutation> fix;
    for_each_block_perm(net.k, net.l, [&](const Permutation& p) {
        if (!p.is_identity() && apply(p, net) == net) fix.push_back(p);
    });
    // Keep a generating subset: add an element only when the group generated
    // so far misses it.
    std::vector<Permutation> gens;
    for (const Permutation& p : fix) {
        PermGroup g(net.k, net.l, gens);
        if (!g.contains(p)) gens.push_back(p);
    }
    return PermGroup(net.k, net.l, std::move(gens));
}

std::uint64_t orbit_size(const Network& net)
{
    return factorial(net.k) * factorial(net.l) / stabilizer(net).order();
}

namespace {

struct Orderly {
    int n;
    const std::vector<std::vector<int>>& group;
    int max_size;
    const SubsetTest& test;
    const SubsetVisitor& visit;
    std::vector<int> image;
    std::vector<int> stab;

    // True when `s` is the least sorted vector in its orbit. Fills `stab`.
    bool canonical(const std::vector<int>& s)
    {
        stab.clear();
        image.resize(s.size());
        for (std::size_t gi = 0; gi < group.size(); ++gi) {
            const auto& g = group[gi];
            for (std::size_t i = 0; i < s.size(); ++i) image[i] = g[s[i]];
            std::sort(image.begin(), image.end());
            int c = 0;
            for (std::size_t i = 0; i < s.size() && c == 0; ++i)
                if (image[i] != s[i]) c = image[i] < s[i] ? -1 : 1;
            if (c < 0) return false;
            if (c == 0) stab.push_back(static_cast<int>(gi));
        }
        return true;
    }

    void grow(std::vector<int>& s)
    {
        visit(s, stab);
        if (static_cast<int>(s.size()) >= max_size) return;
        int start = s.empty() ? 0 : s.back() + 1;
        for (int x = start; x < n; ++x) {
            s.push_back(x);
            if (test(s) && canonical(s)) grow(s);
            s.pop_back();
        }
    }
};

}  // namespace

void orderly_subsets(int n, const std::vector<std::vector<int>>& group, int max_size,
                     const SubsetTest& inherit_test, const SubsetVisitor& visit)
{
    for (const auto& g : group)
        if (static_cast<int>(g.size()) != n) throw std::invalid_argument("group element size mismatch");
    Orderly o{n, group, max_size, inherit_test, visit, {}, {}};
    std::vector<int> s;
    if (!inherit_test(s)) return;
    o.stab.resize(group.size());
    std::iota(o.stab.begin(), o.stab.end(), 0);
    o.grow(s);
}

std::vector<TransversalEntry> subset_transversal(int n, const std::vector<std::vector<int>>& group,
                                                 int target_size, const SubsetTest& inherit_test)
{
    std::vector<TransversalEntry> out;
    orderly_subsets(n, group, target_size, inherit_test,
                    [&](const std::vector<int>& s, const std::vector<int>& stab) {
                        if (static_cast<int>(s.size()) == target_size) out.push_back({s, stab});
                    });
    return out;
}

}  // namespace hnc
