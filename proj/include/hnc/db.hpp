// SPDX-License-Identifier: MIT
// db.hpp: append-only JSON-lines results database, record queries and
// sufficiency tallies.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hnc/enumerate.hpp"
#include "hnc/polyhedra.hpp"

namespace hnc {

struct DbRecord {
    std::string key;  // render() of the canonical network
    int k = 0;
    int l = 0;
    std::vector<std::string> stabilizer;  // generators, Permutation::str()
    std::uint64_t orbit_size = 0;
    std::map<std::string, std::string> regions;  // bound tag -> region file
    std::map<std::string, bool> flags;           // bound tag -> matches outer
    // {"kind": "enumerated", "mode": ...} or {"kind": "operator", "op": ...,
    // "operands": [...], "pairing": ...}.
    nlohmann::json provenance = nlohmann::json::object();
    nlohmann::json timing = nlohmann::json::object();

    nlohmann::json to_json() const;
    // Throws nlohmann::json::exception or std::invalid_argument on bad input.
    static DbRecord from_json(const nlohmann::json& j);
};

DbRecord record_of(const EnumeratedNetwork& e, const std::string& mode);

struct DbQuery {
    std::optional<int> k, l;
    std::string key;  // exact match when non-empty
    // Tag -> required value. Tags match with hyphens ignored, so "scalar2"
    // selects "scalar-2".
    std::vector<std::pair<std::string, bool>> flags;
    std::string provenance;  // matches provenance kind, op or mode

    bool matches(const DbRecord& r) const;
};

// Parses "flags.scalar2=false", "k=2", "l=2", "provenance=enumerated" or
// "key=<text>"; throws std::invalid_argument otherwise.
void add_query_term(DbQuery& q, const std::string& term);

class Database {
public:
    // Loads path when it exists. Corrupt lines are skipped and counted.
    explicit Database(std::string path);

    // The first write of a key wins. A later record for a known key only
    // contributes regions and flags the stored record lacks; those are
    // appended as an update line. Returns true when anything was written.
    bool append(const DbRecord& rec);

    const DbRecord* find(const std::string& key) const;
    std::vector<DbRecord> query(const DbQuery& q) const;
    const std::vector<DbRecord>& records() const { return records_; }
    std::size_t skipped_lines() const { return skipped_; }
    const std::string& path() const { return path_; }

private:
    bool merge(const DbRecord& rec, DbRecord& stored, nlohmann::json& delta);
    void write_line(const nlohmann::json& j);

    std::string path_;
    std::vector<DbRecord> records_;
    std::map<std::string, std::size_t> index_;
    std::size_t skipped_ = 0;
};

struct Tally {
    int k = 0;
    int l = 0;
    std::size_t total = 0;
    std::map<std::string, std::size_t> matched;  // per tag, over records carrying it
};

// Grouped by (K, L) in increasing order.
std::vector<Tally> tally(const std::vector<DbRecord>& records, const std::vector<std::string>& tags);
std::string format_tally(const std::vector<Tally>& rows, const std::vector<std::string>& tags);

// Regions as text: a one-piece region is plain H-rep text, anything else is
// a "pieces: n" header followed by "cell:" and "body:" sections.
std::string region_to_text(const Region& r);
Region region_from_text(const std::string& text);

// "<dir>/<K>_<L>_<16 hex digits>.<tag>.hrep", named by a hash of the key.
std::string region_file_name(const std::string& dir, const DbRecord& rec, const std::string& tag);

}  // namespace hnc
