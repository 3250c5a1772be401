// SPDX-License-Identifier: MIT
// polyhedra.hpp: exact polyhedral cones {x : A x >= 0, E x = 0}.
//
// All coefficients are integers. Internally the double description method
// first runs on checked 64-bit integers and falls back to GMP integers when
// a product or sum would overflow, so results are always exact.
#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

namespace hnc {

using Int = mpz_class;
using Vec = std::vector<Int>;

Vec vec_from(const std::vector<long>& xs);
Int dot(const Vec& a, const Vec& b);
// Divides by the gcd of the entries; leaves the zero vector unchanged.
void make_primitive(Vec& v);
// Primitive, with the first nonzero entry positive.
void make_canonical_direction(Vec& v);
bool is_zero(const Vec& v);
std::string vec_str(const Vec& v);

struct Cone {
    std::vector<std::string> names;
    std::vector<Vec> ineqs;  // a . x >= 0
    std::vector<Vec> eqs;    // a . x == 0

    Cone() = default;
    explicit Cone(std::vector<std::string> n) : names(std::move(n)) {}

    int dim() const { return static_cast<int>(names.size()); }
    // R^d.
    static Cone whole(std::vector<std::string> names);
    // The nonnegative orthant.
    static Cone orthant(std::vector<std::string> names);
    bool contains(const Vec& x) const;
    int index_of(const std::string& name) const;  // -1 when absent
};

// Throws std::invalid_argument on a coordinate-space mismatch.
Cone intersect(const Cone& c, const std::vector<Vec>& extra_ineqs, const std::vector<Vec>& extra_eqs);
Cone intersect(const Cone& a, const Cone& b);

struct Generators {
    std::vector<Vec> rays;       // extreme rays modulo lineality, sorted
    std::vector<Vec> lineality;  // basis of the lineality space, in reduced echelon form
};

// Complete irredundant generators. Rays are primitive and orthogonal to the
// lineality space.
Generators extreme_rays(const Cone& c);

// Minimal H-representation of the cone generated by rays and lines.
Cone conic_hull(const std::vector<std::string>& names, const std::vector<Vec>& rays,
                const std::vector<Vec>& lines = {});

Cone remove_redundancy(const Cone& c);

struct ProjectOptions {
    // Fourier-Motzkin is used when at most this many coordinates are
    // eliminated; otherwise rays are enumerated, truncated and re-hulled.
    int fm_threshold = 3;
};

// Shadow of c on the coordinates listed in keep (in that order).
Cone project(const Cone& c, const std::vector<int>& keep, const ProjectOptions& opt = {});
Cone project_names(const Cone& c, const std::vector<std::string>& keep, const ProjectOptions& opt = {});
// Fourier-Motzkin elimination of one coordinate (kept coordinates keep their order).
Cone eliminate(const Cone& c, int coord);

bool is_subcone(const Cone& a, const Cone& b);
// A ray or line of a violating b, when a is not a subcone of b.
std::optional<Vec> subcone_witness(const Cone& a, const Cone& b);
bool cone_equal(const Cone& a, const Cone& b);

// Cartesian product; coordinates of b follow those of a.
Cone product(const Cone& a, const Cone& b);
// Reorders or renames coordinates: result coordinate i is c's coordinate perm[i].
Cone permute(const Cone& c, const std::vector<int>& perm, std::vector<std::string> new_names);

// Text form: a "names:" header, then one "c1 c2 ... >= 0" or "... = 0" line
// per constraint.
std::string to_hrep_text(const Cone& c);
Cone from_hrep_text(const std::string& text);

// A finite union of polyhedral pieces. Each piece stores the region's
// intersection (body) with a cell; the cells cover the whole space. A plain
// cone is the one-piece region whose cell is the whole space.
struct Region {
    struct Piece {
        Cone cell;
        Cone body;
    };
    std::vector<std::string> names;
    std::vector<Piece> pieces;

    static Region of(const Cone& c);
    int dim() const { return static_cast<int>(names.size()); }
    bool is_cone() const { return pieces.size() == 1; }
    // The body of a one-piece region; throws std::logic_error otherwise.
    const Cone& cone() const;
    bool contains(const Vec& x) const;
};

bool region_equal(const Region& a, const Region& b);
bool region_subset(const Region& a, const Region& b);
Region region_product(const Region& a, const Region& b);
// Preimage under the linear map y -> x with x_j = y[coord_of[j]], or x_j = 0
// when coord_of[j] < 0. Rows are rewritten column by column, so cells and
// bodies stay a covering.
Cone substitute(const Cone& c, std::vector<std::string> names, const std::vector<int>& coord_of);
Region substitute(const Region& r, std::vector<std::string> names, const std::vector<int>& coord_of);
// Merges pieces back into one cone when the union is convex and the pieces
// agree on overlaps; otherwise returns the region unchanged.
Region simplify(const Region& r);

}  // namespace hnc
