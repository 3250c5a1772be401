// SPDX-License-Identifier: MIT
// hnc: command-line front end for enumeration, rate-region bounds, network
// operators, closure and the results database.
//
// Exit codes: 0 success, 1 error, 2 refused because a size cap was exceeded.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "hnc/bounds.hpp"
#include "hnc/db.hpp"
#include "hnc/enumerate.hpp"
#include "hnc/minimality.hpp"
#include "hnc/operators.hpp"
#include "hnc/symmetry.hpp"

using namespace hnc;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitCap = 2;

struct CapRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::string db;
    int jobs = 1;
    bool long_run = false;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text)
{
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void check_enumeration_caps(int k, int l, const std::string& mode, bool long_run)
{
    if (k < 1 || l < 1) throw std::invalid_argument("K and L must both be at least 1");
    if (mode == "idsc") {
        if (k > 3 || l > 3) throw CapRefusal("IDSC enumeration is capped at K <= 3, L <= 3");
        return;
    }
    if (mode != "general") throw std::invalid_argument("mode must be general or idsc");
    if (k + l > 5) throw CapRefusal("general enumeration is capped at K + L <= 5");
    // (1,4), (2,3) and (3,2) have hundreds of thousands of candidates per
    // edge set orbit; they are opt-in.
    if (k + l == 5 && l >= 2 && !long_run)
        throw CapRefusal("(" + std::to_string(k) + "," + std::to_string(l) + ") needs --long-run");
}

EnumerationResult run_enumeration(int k, int l, const std::string& mode, const std::string& checkpoint)
{
    EnumerateOptions opt;
    opt.idsc = mode == "idsc";
    opt.checkpoint_path = checkpoint;
    opt.progress = [](const std::string& s) { std::cerr << s << '\n'; };
    return enumerate_networks(k, l, opt);
}

void check_tags(const std::vector<std::string>& tags)
{
    if (tags.empty()) throw std::invalid_argument("no bound tags given");
    for (const auto& t : tags)
        if (!valid_bound_tag(t))
            throw std::invalid_argument("unknown bound tag \"" + t + "\" (use outer, scalar-2, vector-2-<N'>, ingleton)");
}

std::vector<std::string> inner_tags(const std::vector<std::string>& tags)
{
    std::vector<std::string> out;
    for (const auto& t : tags)
        if (t != "outer") out.push_back(t);
    return out;
}

Network load_network(const std::string& file, const std::string& key)
{
    if (!file.empty() && !key.empty()) throw std::invalid_argument("give either a network file or a key, not both");
    if (!file.empty()) return parse(read_file(file));
    if (!key.empty()) return parse(key);
    throw std::invalid_argument("a network file or --key is required");
}

DbRecord record_for(const Network& canonical)
{
    DbRecord r;
    r.key = render(canonical);
    r.k = canonical.k;
    r.l = canonical.l;
    try {
        PermGroup stab = stabilizer(canonical);
        for (const auto& g : stab.generators()) r.stabilizer.push_back(g.str());
        r.orbit_size = orbit_size(canonical);
    } catch (const std::length_error&) {
        // Symmetry data is optional for networks beyond the group cap.
    }
    return r;
}

// Fills flags and, when out_dir is set, region files.
void attach_bundle(DbRecord& rec, const RegionBundle& b, const std::string& out_dir)
{
    for (const auto& [tag, ok] : b.matches_outer) rec.flags[tag] = ok;
    if (out_dir.empty()) return;
    std::string f = region_file_name(out_dir, rec, "outer");
    write_file(f, region_to_text(b.outer));
    rec.regions["outer"] = f;
    for (const auto& [tag, region] : b.inner) {
        f = region_file_name(out_dir, rec, tag);
        write_file(f, region_to_text(region));
        rec.regions[tag] = f;
    }
}

// ---------------------------------------------------------------------------

int cmd_enumerate(const Common& c, int k, int l, const std::string& mode, const std::string& checkpoint, bool quiet)
{
    check_enumeration_caps(k, l, mode, c.long_run);
    auto t0 = std::chrono::steady_clock::now();
    EnumerationResult res = run_enumeration(k, l, mode, checkpoint);
    std::optional<Database> db;
    if (!c.db.empty()) db.emplace(c.db);
    for (const auto& e : res.networks) {
        DbRecord rec = record_of(e, mode);
        if (!quiet) {
            json j = {{"key", rec.key}, {"stabilizer", rec.stabilizer}, {"orbit_size", rec.orbit_size}};
            std::cout << j.dump() << '\n';
        }
        if (db) {
            rec.timing = {{"enumerate_s", seconds_since(t0)}};
            db->append(rec);
        }
    }
    std::cout << "# (" << k << "," << l << ") " << mode << ": " << res.networks.size()
              << " networks, labeled-count " << res.labeled_count << '\n';
    std::cerr << "enumerated in " << seconds_since(t0) << " s\n";
    return 0;
}

int cmd_region(const Common& c, const std::string& file, const std::string& key, const std::vector<std::string>& tags,
               const std::string& out_dir)
{
    check_tags(tags);
    Network given = load_network(file, key);
    auto rep = validate(given);
    if (!rep.ok()) throw std::invalid_argument("invalid network: " + rep.violations.front());
    if (!is_minimal(given)) throw std::invalid_argument("network is not minimal; reduce it first");
    Network net = canonicalize(given).canonical;

    auto t0 = std::chrono::steady_clock::now();
    RegionBundle b = sufficiency_report(net, inner_tags(tags));
    DbRecord rec = record_for(net);
    rec.provenance = {{"kind", "region"}};
    attach_bundle(rec, b, out_dir);
    rec.timing = {{"region_s", seconds_since(t0)}};

    std::cout << "key: " << rec.key << '\n';
    if (given != net) std::cout << "note: input relabeled to its canonical form\n";
    for (const auto& [tag, ok] : b.matches_outer) std::cout << tag << ": " << (ok ? "matches outer" : "strictly inside outer") << '\n';
    for (const auto& [tag, f] : rec.regions) std::cout << "region " << tag << ": " << f << '\n';
    if (out_dir.empty()) std::cout << "outer region:\n" << region_to_text(b.outer);
    if (!c.db.empty()) {
        Database db(c.db);
        db.append(rec);
    }
    return 0;
}

int cmd_sweep(const Common& c, int k, int l, const std::string& mode, const std::vector<std::string>& tags,
              const std::string& out_dir, const std::string& checkpoint)
{
    check_tags(tags);
    check_enumeration_caps(k, l, mode, c.long_run);
    std::vector<std::string> inner = inner_tags(tags);
    // Refuse oversized bounds before enumerating anything.
    for (const auto& t : inner) {
        if (t.rfind("vector-2-", 0) == 0 && std::stoi(t.substr(9)) > kMaxMatroidGround)
            throw CapRefusal("vector bounds are capped at " + std::to_string(kMaxMatroidGround) + " ground elements");
        if (t == "ingleton" && k + l != 4) throw std::invalid_argument("the ingleton bound needs K + L = 4");
    }

    auto t0 = std::chrono::steady_clock::now();
    EnumerationResult res = run_enumeration(k, l, mode, checkpoint);
    std::vector<RegionBundle> bundles(res.networks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&]() {
        for (std::size_t i; (i = next++) < res.networks.size();) {
            try {
                bundles[i] = sufficiency_report(res.networks[i].net, inner);
            } catch (...) {
                std::lock_guard<std::mutex> lock(fail_mu);
                if (!failure) failure = std::current_exception();
                return;
            }
            std::size_t d = ++done;
            if (d % 50 == 0) std::cerr << "sweep: " << d << "/" << res.networks.size() << '\n';
        }
    };
    int jobs = std::max(1, c.jobs);
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);

    std::optional<Database> db;
    if (!c.db.empty()) db.emplace(c.db);
    std::vector<DbRecord> recs;
    for (std::size_t i = 0; i < res.networks.size(); ++i) {
        DbRecord rec = record_of(res.networks[i], mode);
        attach_bundle(rec, bundles[i], out_dir);
        if (db) db->append(rec);
        recs.push_back(std::move(rec));
    }
    std::cout << format_tally(tally(recs, inner), inner);
    std::cerr << "swept in " << seconds_since(t0) << " s\n";
    return 0;
}

std::pair<int, int> parse_pair(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("pairing \"" + s + "\" must look like a:b");
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

Region operand_region(const Network& net, const std::optional<Database>& db)
{
    if (db) {
        if (const DbRecord* r = db->find(render(net)); r && r->regions.count("outer"))
            return region_from_text(read_file(r->regions.at("outer")));
    }
    return outer_region(net);
}

int cmd_operate(const Common& c, const std::string& op, const std::string& left_file, const std::string& right_file,
                const std::vector<std::string>& pairs, int target, bool transfer, const std::string& out_dir)
{
    std::optional<Database> db;
    if (!c.db.empty()) db.emplace(c.db);
    Network left = parse(read_file(left_file));
    for (const Network* n : {&left}) {
        auto rep = validate(*n);
        if (!rep.ok()) throw std::invalid_argument("invalid left operand: " + rep.violations.front());
    }

    Network result;
    json prov = {{"kind", "operator"}, {"op", op}};
    std::optional<Region> transferred;

    if (op == "source-delete" || op == "edge-contract" || op == "edge-delete") {
        if (!right_file.empty() || !pairs.empty()) throw std::invalid_argument(op + " takes --target only");
        if (target <= 0) throw std::invalid_argument(op + " needs --target");
        EmbedStep st = op == "source-delete" ? delete_source(left, target)
                       : op == "edge-contract" ? contract_edge(left, target)
                                               : delete_edge(left, target);
        std::cout << st.describe() << '\n';
        for (const auto& s : st.trace.steps) std::cout << "  reduction D" << s.kind << ": " << s.witness << '\n';
        result = st.post;
        prov["operands"] = {render(left)};
        prov["target"] = target;
        if (transfer && !result.empty() && st.trace.is_minimal_end()) {
            auto t = embed_region(st, operand_region(left, db));
            transferred = t.region;
        }
    } else {
        if (right_file.empty()) throw std::invalid_argument(op + " needs --right");
        Network right = parse(read_file(right_file));
        auto rep = validate(right);
        if (!rep.ok()) throw std::invalid_argument("invalid right operand: " + rep.violations.front());
        std::vector<std::pair<int, int>> pr;
        for (const auto& p : pairs) pr.push_back(parse_pair(p));
        CombineStep st;
        if (op == "merge-sources") {
            if (pr.empty()) throw std::invalid_argument("merge-sources needs at least one --pair");
            st = merge_sources(left, right, pr);
        } else if (op == "merge-sinks") {
            if (pr.empty()) throw std::invalid_argument("merge-sinks needs at least one --pair");
            st = merge_sinks(left, right, pr);
        } else if (op == "merge-nodes" || op == "merge-edges") {
            if (pr.size() != 1) throw std::invalid_argument(op + " needs exactly one --pair");
            st = op == "merge-nodes" ? merge_nodes(left, pr[0].first, right, pr[0].second)
                                     : merge_edges(left, pr[0].first, right, pr[0].second);
        } else {
            throw std::invalid_argument("unknown operation \"" + op + "\"");
        }
        std::cout << st.describe() << '\n';
        result = st.result;
        prov["operands"] = {render(left), render(right)};
        prov["pairing"] = pairs;
        if (transfer) transferred = combine_region(st, operand_region(left, db), operand_region(right, db));
    }

    if (result.empty()) {
        std::cout << "result: empty network\n";
        return 0;
    }
    NodeView nv = node_view(result);
    std::cout << "result: " << render(result) << '\n'
              << "size: (" << result.k << "," << result.l << "), " << nv.node_in.size() << " intermediate nodes, "
              << nv.sink_in.size() << " sinks\n";
    auto viol = check_conditions(result);
    std::cout << "minimal: " << (viol.empty() ? "yes" : "no") << '\n';
    for (const auto& v : viol) std::cout << "  " << condition_name(v.condition) << ": " << v.witness << '\n';

    DbRecord rec = record_for(result);
    rec.provenance = prov;
    if (transferred) {
        if (transferred->is_cone()) transferred = Region::of(remove_redundancy(transferred->cone()));
        std::cout << "transferred outer region:\n" << region_to_text(*transferred);
        if (!out_dir.empty()) {
            std::string f = region_file_name(out_dir, rec, "outer");
            write_file(f, region_to_text(*transferred));
            rec.regions["outer"] = f;
        }
    }
    if (db) db->append(rec);
    return 0;
}

int cmd_closure(const Common& c, const std::string& config_file, std::vector<int> caps, bool embedding,
                bool multi_pair, std::uint64_t budget, const std::string& provenance_file)
{
    ClosureConfig cfg;
    std::vector<Network> seeds;
    if (!config_file.empty()) {
        json j = json::parse(read_file(config_file));
        if (j.contains("caps")) caps = j["caps"].get<std::vector<int>>();
        embedding = j.value("embedding", embedding);
        multi_pair = j.value("multi_pair_source_merge", multi_pair);
        budget = j.value("budget", budget);
        if (j.contains("seeds") && j["seeds"].is_array())
            for (const auto& s : j["seeds"]) seeds.push_back(parse(s.is_string() ? s.get<std::string>() : s.dump()));
    }
    if (caps.size() != 2) throw std::invalid_argument("caps must be K,L");
    if (seeds.empty())
        for (const Network& n : smallest_canonicals())
            if (n.k <= caps[0] && n.l <= caps[1]) seeds.push_back(n);
    cfg.seeds = seeds;
    cfg.k_max = caps[0];
    cfg.l_max = caps[1];
    cfg.allow_embedding = embedding;
    cfg.multi_pair_source_merge = multi_pair;
    cfg.budget = budget;
    if (cfg.k_max + cfg.l_max > 6 && !c.long_run)
        throw CapRefusal("closure caps with K + L > 6 need --long-run");
    if (cfg.k_max > 4 || cfg.l_max > 4) throw CapRefusal("closure caps are limited to K <= 4, L <= 4");

    auto t0 = std::chrono::steady_clock::now();
    ClosureResult r = closure(cfg, [](const std::string& s) { std::cerr << s << '\n'; });
    for (std::size_t g = 0; g < r.new_per_generation.size(); ++g)
        std::cout << "generation " << g + 1 << ": " << r.new_per_generation[g] << " new\n";
    std::map<std::pair<int, int>, std::size_t> by_size;
    std::size_t fresh = 0;
    for (const auto& rec : r.networks) {
        ++by_size[{rec.net.k, rec.net.l}];
        if (rec.op != "seed") ++fresh;
    }
    for (const auto& [kl, n] : by_size) std::cout << "(" << kl.first << "," << kl.second << "): " << n << '\n';
    std::cout << "total: " << r.networks.size() << " networks, " << fresh << " new, converged: "
              << (r.converged ? "yes" : "no") << '\n';
    std::cerr << "closure in " << seconds_since(t0) << " s, " << r.attempts << " attempts\n";

    if (!provenance_file.empty()) write_file(provenance_file, closure_provenance(r));
    if (!c.db.empty()) {
        Database db(c.db);
        for (const auto& rec : r.networks) {
            DbRecord d = record_for(rec.net);
            d.provenance = {{"kind", rec.op == "seed" ? "seed" : "operator"},
                            {"op", rec.op},
                            {"operands", rec.operands},
                            {"pairing", rec.pairing},
                            {"generation", rec.generation}};
            db.append(d);
        }
    }
    return 0;
}

int cmd_query(const Common& c, const std::vector<std::string>& terms, bool count_only)
{
    if (c.db.empty()) throw std::invalid_argument("query needs --db");
    if (!std::filesystem::exists(c.db)) throw std::runtime_error("database " + c.db + " does not exist");
    Database db(c.db);
    DbQuery q;
    for (const auto& t : terms) add_query_term(q, t);
    auto hits = db.query(q);
    if (!count_only)
        for (const auto& r : hits) std::cout << r.to_json().dump() << '\n';
    std::cout << "# " << hits.size() << " records\n";
    if (db.skipped_lines()) std::cerr << "warning: skipped " << db.skipped_lines() << " corrupt lines\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Enumerate network coding problems, bound their rate regions and combine them"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--db", common.db, "JSON-lines results database");
    app.add_option("--jobs", common.jobs, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_flag("--long-run", common.long_run, "allow the large (K,L) cases");

    int k = 0, l = 0;
    std::string mode = "general", checkpoint, out_dir, file, key;
    std::vector<std::string> bounds{"outer", "scalar-2"};
    bool quiet = false;

    auto* en = app.add_subcommand("enumerate", "list canonical minimal (K,L) networks");
    en->add_option("--k", k)->required();
    en->add_option("--l", l)->required();
    en->add_option("--mode", mode)->check(CLI::IsMember({"general", "idsc"}));
    en->add_option("--checkpoint", checkpoint, "resumable progress file");
    en->add_flag("--quiet", quiet, "print only the summary line");

    auto* rg = app.add_subcommand("region", "compute rate-region bounds of one network");
    rg->add_option("network", file, "network file");
    rg->add_option("--key", key, "network text, as stored in the database");
    rg->add_option("--bounds", bounds)->delimiter(',');
    rg->add_option("--out-dir", out_dir, "directory for region files");

    auto* sw = app.add_subcommand("sweep", "sufficiency tally over all (K,L) networks");
    sw->add_option("--k", k)->required();
    sw->add_option("--l", l)->required();
    sw->add_option("--mode", mode)->check(CLI::IsMember({"general", "idsc"}));
    sw->add_option("--bounds", bounds)->delimiter(',');
    sw->add_option("--out-dir", out_dir, "directory for region files");
    sw->add_option("--checkpoint", checkpoint, "resumable enumeration progress file");

    std::string op, left, right;
    std::vector<std::string> pairs;
    int target = 0;
    bool transfer = false;
    auto* opc = app.add_subcommand("operate", "apply one embedding or combination operator");
    opc->add_option("op", op, "source-delete, edge-contract, edge-delete, merge-sources, merge-sinks, merge-nodes, merge-edges")
        ->required();
    opc->add_option("--left", left, "first operand network file")->required();
    opc->add_option("--right", right, "second operand network file");
    opc->add_option("--pair", pairs, "paired elements a:b (repeatable)");
    opc->add_option("--target", target, "label for embedding operators");
    opc->add_flag("--transfer", transfer, "transfer the operands' outer regions to the result");
    opc->add_option("--out-dir", out_dir, "directory for the transferred region file");

    std::string config, provenance;
    std::vector<int> caps{2, 2};
    bool embedding = false, multi_pair = false;
    std::uint64_t budget = 10000000;
    auto* cl = app.add_subcommand("closure", "grow a seed list under combination operators");
    cl->add_option("config", config, "JSON config: seeds, caps, embedding, budget");
    cl->add_option("--caps", caps, "K,L size caps")->delimiter(',')->expected(2);
    cl->add_flag("--embedding", embedding, "also apply embedding operators");
    cl->add_flag("--multi-pair", multi_pair, "let source merges identify several pairs at once");
    cl->add_option("--budget", budget, "operation budget");
    cl->add_option("--provenance", provenance, "write JSON-lines provenance here");

    std::vector<std::string> terms;
    bool count_only = false;
    auto* qu = app.add_subcommand("query", "filter database records, e.g. k=2 l=2 flags.scalar2=false");
    qu->add_option("terms", terms);
    qu->add_flag("--count", count_only, "print only the count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*en) return cmd_enumerate(common, k, l, mode, checkpoint, quiet);
        if (*rg) return cmd_region(common, file, key, bounds, out_dir);
        if (*sw) return cmd_sweep(common, k, l, mode, bounds, out_dir, checkpoint);
        if (*opc) return cmd_operate(common, op, left, right, pairs, target, transfer, out_dir);
        if (*cl) return cmd_closure(common, config, caps, embedding, multi_pair, budget, provenance);
        if (*qu) return cmd_query(common, terms, count_only);
    } catch (const CapRefusal& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitCap;
    } catch (const std::length_error& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return kExitCap;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
