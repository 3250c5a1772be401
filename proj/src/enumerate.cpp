// SPDX-License-Identifier: MIT
#include "hnc/enumerate.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "hnc/minimality.hpp"

namespace hnc {

std::vector<std::vector<int>> induced_action(const std::vector<Def>& universe, const std::vector<Permutation>& group)
{
    std::map<std::pair<Label, LabelSet>, int> index;
    for (std::size_t i = 0; i < universe.size(); ++i) index[{universe[i].id, universe[i].in}] = static_cast<int>(i);
    std::vector<std::vector<int>> out;
    out.reserve(group.size());
    for (const Permutation& p : group) {
        std::vector<int> img(universe.size());
        for (std::size_t i = 0; i < universe.size(); ++i) {
            auto it = index.find({p(universe[i].id), p(universe[i].in)});
            if (it == index.end()) throw std::invalid_argument("induced_action: universe is not closed under the group");
            img[i] = it->second;
        }
        out.push_back(std::move(img));
    }
    return out;
}

namespace {

bool acyclic_defs(const std::vector<Def>& q, int k)
{
    // Repeatedly peel edges whose edge inputs are all peeled.
    LabelSet done = 0;
    LabelSet ids = 0;
    for (const Def& d : q) ids |= bit(d.id);
    std::size_t left = q.size();
    bool progress = true;
    while (left && progress) {
        progress = false;
        for (const Def& d : q) {
            if (has(done, d.id)) continue;
            LabelSet deps = d.in & ids & ~label_range(1, k);
            if ((deps & ~done) == 0) {
                done |= bit(d.id);
                --left;
                progress = true;
            }
        }
    }
    return left == 0;
}

// C12 and C13 over a partial sink list; both only get harder to satisfy as
// sinks are added.
bool sinks_consistent(const std::vector<Def>& w)
{
    std::vector<LabelSet> ins, dem;
    for (const Def& d : w) {
        auto it = std::find(ins.begin(), ins.end(), d.in);
        if (it == ins.end()) {
            ins.push_back(d.in);
            dem.push_back(bit(d.id));
        } else {
            dem[it - ins.begin()] |= bit(d.id);
        }
    }
    for (std::size_t t = 0; t < ins.size(); ++t)
        for (std::size_t u = 0; u < ins.size(); ++u) {
            if (t == u || (ins[t] & ~ins[u])) continue;
            if (dem[t] & dem[u]) return false;
            if (dem[t] & ins[u]) return false;
        }
    return true;
}

std::vector<LabelSet> nonempty_subsets(LabelSet ground)
{
    std::vector<LabelSet> out;
    for (LabelSet s = ground; s; s = (s - 1) & ground) out.push_back(s);
    std::sort(out.begin(), out.end(), [](LabelSet a, LabelSet b) { return compare_sets(a, b) < 0; });
    return out;
}

struct QRep {
    std::vector<Def> q;
    std::vector<int> stab;  // indices into the full group element list
};

std::vector<QRep> edge_set_reps(int k, int l, bool idsc, const std::vector<Permutation>& elems)
{
    std::vector<QRep> reps;
    if (idsc) {
        QRep r;
        for (Label e = k + 1; e <= k + l; ++e) r.q.push_back({e, label_range(1, k)});
        for (std::size_t i = 0; i < elems.size(); ++i) r.stab.push_back(static_cast<int>(i));
        reps.push_back(std::move(r));
        return reps;
    }
    int n = k + l;
    std::vector<Def> universe;
    for (Label e = k + 1; e <= n; ++e)
        for (LabelSet a : nonempty_subsets(label_range(1, n) & ~bit(e))) universe.push_back({e, a});
    auto action = induced_action(universe, elems);
    auto test = [&](const std::vector<int>& s) {
        LabelSet ids = 0;
        std::vector<Def> q;
        for (int i : s) {
            if (has(ids, universe[i].id)) return false;
            ids |= bit(universe[i].id);
            q.push_back(universe[i]);
        }
        return acyclic_defs(q, k);
    };
    orderly_subsets(static_cast<int>(universe.size()), action, l, test,
                    [&](const std::vector<int>& s, const std::vector<int>& stab) {
                        if (static_cast<int>(s.size()) != l) return;
                        QRep r;
                        LabelSet fed = 0;
                        for (int i : s) {
                            r.q.push_back(universe[i]);
                            fed |= universe[i].in;
                        }
                        // C1: every source feeds an intermediate node.
                        if ((fed & label_range(1, k)) != label_range(1, k)) return;
                        r.stab = stab;
                        reps.push_back(std::move(r));
                    });
    return reps;
}

using nlohmann::json;

struct Checkpoint {
    std::size_t next_rep = 0;
    std::uint64_t candidates = 0;
    std::vector<std::string> found;  // rendered networks in generation order

    void save(const std::string& path, int k, int l, bool idsc) const
    {
        json j;
        j["k"] = k;
        j["l"] = l;
        j["idsc"] = idsc;
        j["next_rep"] = next_rep;
        j["candidates"] = candidates;
        j["found"] = found;
        std::string tmp = path + ".tmp";
        {
            std::ofstream os(tmp);
            os << j.dump() << '\n';
        }
        std::filesystem::rename(tmp, path);
    }

    static Checkpoint load(const std::string& path, int k, int l, bool idsc)
    {
        Checkpoint c;
        std::ifstream is(path);
        if (!is) return c;
        json j = json::parse(is);
        if (j.at("k") != k || j.at("l") != l || j.at("idsc") != idsc)
            throw std::runtime_error("checkpoint " + path + " belongs to a different enumeration");
        c.next_rep = j.at("next_rep");
        c.candidates = j.at("candidates");
        c.found = j.at("found").get<std::vector<std::string>>();
        return c;
    }
};

EnumeratedNetwork finish(const Network& net)
{
    EnumeratedNetwork out;
    out.net = canonicalize(net).canonical;
    PermGroup st = stabilizer(out.net);
    out.stabilizer_generators = st.generators();
    out.stabilizer_order = st.order();
    out.orbit_size = factorial(net.k) * factorial(net.l) / out.stabilizer_order;
    return out;
}

}  // namespace

EnumerationResult enumerate_networks(int k, int l, const EnumerateOptions& opt)
{
    if (k < 1 || l < 1) throw std::invalid_argument("enumerate: K and L must be positive");
    if (k + l > 12) throw std::invalid_argument("enumerate: K+L too large");
    EnumerationResult res;
    res.k = k;
    res.l = l;
    res.idsc = opt.idsc;

    PermGroup full = PermGroup::full(k, l);
    const auto& elems = full.elements();
    std::vector<QRep> reps = edge_set_reps(k, l, opt.idsc, elems);
    res.edge_sets = reps.size();

    Checkpoint cp;
    if (!opt.checkpoint_path.empty()) cp = Checkpoint::load(opt.checkpoint_path, k, l, opt.idsc);
    std::vector<Network> found;
    for (const std::string& s : cp.found) found.push_back(parse(s));
    const std::uint64_t resumed = cp.candidates;
    std::uint64_t since_save = 0;

    for (std::size_t ri = cp.next_rep; ri < reps.size(); ++ri) {
        const QRep& rep = reps[ri];
        Network qnet(k, l, rep.q, {});
        std::vector<Label> topo = topological_edges(qnet);
        // Sink universe: (s, A) with A reaching s through some edge.
        std::vector<Def> universe;
        for (Label s = 1; s <= k; ++s) {
            LabelSet reach = bit(s);
            for (Label e : topo)
                if (qnet.edge_def(e)->in & reach) reach |= bit(e);
            reach &= ~bit(s);
            LabelSet ground = opt.idsc ? qnet.edges() : (label_range(1, k + l) & ~bit(s));
            for (LabelSet a : nonempty_subsets(ground))
                if (a & reach) universe.push_back({s, a});
        }
        std::vector<Permutation> sub;
        for (int i : rep.stab) sub.push_back(elems[i]);
        auto action = induced_action(universe, sub);
        std::uint64_t before = res.candidates;
        auto test = [&](const std::vector<int>& s) {
            std::vector<Def> w;
            for (int i : s) w.push_back(universe[i]);
            return sinks_consistent(w);
        };
        orderly_subsets(static_cast<int>(universe.size()), action, static_cast<int>(universe.size()), test,
                        [&](const std::vector<int>& s, const std::vector<int>&) {
                            if (s.empty()) return;
                            ++res.candidates;
                            std::vector<Def> w;
                            for (int i : s) w.push_back(universe[i]);
                            Network net(k, l, rep.q, std::move(w));
                            if (!is_minimal(net)) return;
                            if (opt.catalog_rule && l >= 2 && has_source_relay(net)) return;
                            found.push_back(std::move(net));
                        });
        since_save += res.candidates - before;
        if (!opt.checkpoint_path.empty() && since_save >= opt.checkpoint_every) {
            cp.next_rep = ri + 1;
            cp.candidates = resumed + res.candidates;
            cp.found.clear();
            for (const Network& n : found) cp.found.push_back(render(n));
            cp.save(opt.checkpoint_path, k, l, opt.idsc);
            since_save = 0;
            if (opt.progress)
                opt.progress("checkpoint: " + std::to_string(ri + 1) + "/" + std::to_string(reps.size()) +
                             " edge sets, " + std::to_string(found.size()) + " networks");
        }
    }
    res.candidates += resumed;
    if (!opt.checkpoint_path.empty()) {
        cp.next_rep = reps.size();
        cp.candidates = res.candidates;
        cp.found.clear();
        for (const Network& n : found) cp.found.push_back(render(n));
        cp.save(opt.checkpoint_path, k, l, opt.idsc);
    }

    for (const Network& n : found) {
        EnumeratedNetwork e = finish(n);
        res.labeled_count += e.orbit_size;
        res.networks.push_back(std::move(e));
    }
    std::sort(res.networks.begin(), res.networks.end(),
              [](const EnumeratedNetwork& a, const EnumeratedNetwork& b) { return network_less(a.net, b.net); });
    return res;
}

}  // namespace hnc

namespace hnc {

std::vector<Network> smallest_canonicals()
{
    std::vector<Network> out;
    for (auto [k, l] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 1}})
        for (auto& e : enumerate_networks(k, l).networks) out.push_back(e.net);
    return out;
}

}  // namespace hnc
