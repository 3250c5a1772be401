// SPDX-License-Identifier: MIT
#include "hnc/db.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace hnc {

using nlohmann::json;

json DbRecord::to_json() const
{
    json j;
    j["key"] = key;
    j["k"] = k;
    j["l"] = l;
    j["stabilizer"] = stabilizer;
    j["orbit_size"] = orbit_size;
    j["regions"] = regions;
    j["flags"] = flags;
    j["provenance"] = provenance;
    j["timing"] = timing;
    return j;
}

DbRecord DbRecord::from_json(const json& j)
{
    DbRecord r;
    r.key = j.at("key").get<std::string>();
    Network net = parse(r.key);  // rejects keys that are not networks
    r.k = j.value("k", net.k);
    r.l = j.value("l", net.l);
    if (r.k != net.k || r.l != net.l) throw std::invalid_argument("record size disagrees with its key");
    if (j.contains("stabilizer")) r.stabilizer = j["stabilizer"].get<std::vector<std::string>>();
    r.orbit_size = j.value("orbit_size", std::uint64_t{0});
    if (j.contains("regions")) r.regions = j["regions"].get<std::map<std::string, std::string>>();
    if (j.contains("flags")) r.flags = j["flags"].get<std::map<std::string, bool>>();
    if (j.contains("provenance")) r.provenance = j["provenance"];
    if (j.contains("timing")) r.timing = j["timing"];
    return r;
}

DbRecord record_of(const EnumeratedNetwork& e, const std::string& mode)
{
    DbRecord r;
    r.key = render(e.net);
    r.k = e.net.k;
    r.l = e.net.l;
    for (const auto& g : e.stabilizer_generators) r.stabilizer.push_back(g.str());
    r.orbit_size = e.orbit_size;
    r.provenance = {{"kind", "enumerated"}, {"mode", mode}};
    return r;
}

namespace {

std::string strip_hyphens(const std::string& s)
{
    std::string out;
    for (char c : s)
        if (c != '-') out += c;
    return out;
}

}  // namespace

bool DbQuery::matches(const DbRecord& r) const
{
    if (k && r.k != *k) return false;
    if (l && r.l != *l) return false;
    if (!key.empty() && r.key != key) return false;
    for (const auto& [tag, want] : flags) {
        bool found = false;
        for (const auto& [t, v] : r.flags) {
            if (strip_hyphens(t) == strip_hyphens(tag)) {
                found = true;
                if (v != want) return false;
            }
        }
        if (!found) return false;
    }
    if (!provenance.empty()) {
        bool hit = false;
        for (const char* field : {"kind", "op", "mode"}) {
            auto it = r.provenance.find(field);
            if (it != r.provenance.end() && it->is_string() && it->get<std::string>() == provenance) hit = true;
        }
        if (!hit) return false;
    }
    return true;
}

void add_query_term(DbQuery& q, const std::string& term)
{
    auto eq = term.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("query term needs '=': " + term);
    std::string name = term.substr(0, eq), value = term.substr(eq + 1);
    auto as_bool = [&]() {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw std::invalid_argument("flag value must be true or false: " + term);
    };
    if (name == "k") q.k = std::stoi(value);
    else if (name == "l") q.l = std::stoi(value);
    else if (name == "key") q.key = value;
    else if (name == "provenance") q.provenance = value;
    else if (name.rfind("flags.", 0) == 0) q.flags.emplace_back(name.substr(6), as_bool());
    else throw std::invalid_argument("unknown query field: " + name);
}

Database::Database(std::string path) : path_(std::move(path))
{
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            DbRecord rec = DbRecord::from_json(json::parse(line));
            auto it = index_.find(rec.key);
            if (it == index_.end()) {
                index_.emplace(rec.key, records_.size());
                records_.push_back(std::move(rec));
            } else {
                json unused;
                merge(rec, records_[it->second], unused);
            }
        } catch (const std::exception&) {
            ++skipped_;
        }
    }
}

bool Database::merge(const DbRecord& rec, DbRecord& stored, json& delta)
{
    bool changed = false;
    for (const auto& [tag, file] : rec.regions) {
        if (stored.regions.emplace(tag, file).second) {
            delta["regions"][tag] = file;
            changed = true;
        }
    }
    for (const auto& [tag, v] : rec.flags) {
        if (stored.flags.emplace(tag, v).second) {
            delta["flags"][tag] = v;
            changed = true;
        }
    }
    return changed;
}

void Database::write_line(const json& j)
{
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot open database " + path_);
    out << j.dump() << '\n';
    if (!out) throw std::runtime_error("write to database " + path_ + " failed");
}

bool Database::append(const DbRecord& rec)
{
    auto it = index_.find(rec.key);
    if (it == index_.end()) {
        write_line(rec.to_json());
        index_.emplace(rec.key, records_.size());
        records_.push_back(rec);
        return true;
    }
    json delta = json::object();
    if (!merge(rec, records_[it->second], delta)) return false;
    delta["key"] = rec.key;
    write_line(delta);
    return true;
}

const DbRecord* Database::find(const std::string& key) const
{
    auto it = index_.find(key);
    return it == index_.end() ? nullptr : &records_[it->second];
}

std::vector<DbRecord> Database::query(const DbQuery& q) const
{
    std::vector<DbRecord> out;
    for (const auto& r : records_)
        if (q.matches(r)) out.push_back(r);
    return out;
}

std::vector<Tally> tally(const std::vector<DbRecord>& records, const std::vector<std::string>& tags)
{
    std::map<std::pair<int, int>, Tally> rows;
    for (const auto& r : records) {
        Tally& t = rows[{r.k, r.l}];
        t.k = r.k;
        t.l = r.l;
        ++t.total;
        for (const auto& tag : tags) {
            t.matched.try_emplace(tag, 0);
            auto f = r.flags.find(tag);
            if (f != r.flags.end() && f->second) ++t.matched[tag];
        }
    }
    std::vector<Tally> out;
    for (auto& [_, t] : rows) out.push_back(std::move(t));
    return out;
}

std::string format_tally(const std::vector<Tally>& rows, const std::vector<std::string>& tags)
{
    std::ostringstream os;
    os << std::left << std::setw(8) << "(K,L)" << std::right << std::setw(8) << "total";
    for (const auto& t : tags) os << std::setw(std::max<int>(12, static_cast<int>(t.size()) + 2)) << t;
    os << '\n';
    for (const auto& r : rows) {
        std::string kl = "(" + std::to_string(r.k) + "," + std::to_string(r.l) + ")";
        os << std::left << std::setw(8) << kl << std::right << std::setw(8) << r.total;
        for (const auto& t : tags) {
            auto it = r.matched.find(t);
            os << std::setw(std::max<int>(12, static_cast<int>(t.size()) + 2)) << (it == r.matched.end() ? 0 : it->second);
        }
        os << '\n';
    }
    return os.str();
}

std::string region_to_text(const Region& r)
{
    if (r.is_cone()) return to_hrep_text(r.cone());
    std::ostringstream os;
    os << "pieces: " << r.pieces.size() << '\n';
    for (const auto& p : r.pieces) {
        os << "cell:\n" << to_hrep_text(p.cell);
        os << "body:\n" << to_hrep_text(p.body);
    }
    return os.str();
}

Region region_from_text(const std::string& text)
{
    if (text.rfind("pieces:", 0) != 0) return Region::of(from_hrep_text(text));
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    std::size_t count = std::stoul(line.substr(7));
    std::vector<std::string> sections;
    while (std::getline(is, line)) {
        if (line == "cell:" || line == "body:") sections.emplace_back();
        else if (sections.empty()) throw std::invalid_argument("region text: content before first section");
        else sections.back() += line + '\n';
    }
    if (sections.size() != 2 * count) throw std::invalid_argument("region text: piece count mismatch");
    Region r;
    for (std::size_t i = 0; i < count; ++i)
        r.pieces.push_back({from_hrep_text(sections[2 * i]), from_hrep_text(sections[2 * i + 1])});
    if (!r.pieces.empty()) r.names = r.pieces.front().body.names;
    return r;
}

std::string region_file_name(const std::string& dir, const DbRecord& rec, const std::string& tag)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : rec.key) h = (h ^ c) * 1099511628211ULL;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    std::string base = std::to_string(rec.k) + "_" + std::to_string(rec.l) + "_" + hex + "." + tag + ".hrep";
    return dir.empty() ? base : dir + "/" + base;
}

}  // namespace hnc
