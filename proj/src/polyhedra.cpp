// SPDX-License-Identifier: MIT
#include "hnc/polyhedra.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hnc {

// ---------------------------------------------------------------------------
// Vectors

Vec vec_from(const std::vector<long>& xs)
{
    Vec v;
    v.reserve(xs.size());
    for (long x : xs) v.emplace_back(x);
    return v;
}

Int dot(const Vec& a, const Vec& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    Int s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sgn(a[i]) && sgn(b[i])) s += a[i] * b[i];
    return s;
}

bool is_zero(const Vec& v)
{
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return sgn(x) == 0; });
}

void make_primitive(Vec& v)
{
    Int g = 0;
    for (const Int& x : v) {
        if (sgn(x) == 0) continue;
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) return;
    }
    if (g == 0) return;
    for (Int& x : v) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
}

void make_canonical_direction(Vec& v)
{
    make_primitive(v);
    for (const Int& x : v) {
        if (sgn(x) == 0) continue;
        if (sgn(x) < 0)
            for (Int& y : v) y = -y;
        return;
    }
}

std::string vec_str(const Vec& v)
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i].get_str();
    os << ')';
    return os.str();
}

namespace {

using Rat = mpq_class;

void check_len(const Vec& v, int d, const char* what)
{
    if (static_cast<int>(v.size()) != d) throw std::invalid_argument(std::string(what) + ": vector length mismatch");
}

// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(std::vector<std::vector<Rat>>& m, int cols)
{
    std::vector<int> piv;
    std::size_t row = 0;
    for (int c = 0; c < cols && row < m.size(); ++c) {
        std::size_t p = row;
        while (p < m.size() && sgn(m[p][c]) == 0) ++p;
        if (p == m.size()) continue;
        std::swap(m[p], m[row]);
        Rat inv = 1 / m[row][c];
        for (auto& x : m[row]) x *= inv;
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == row || sgn(m[r][c]) == 0) continue;
            Rat f = m[r][c];
            for (int k = c; k < cols; ++k) m[r][k] -= f * m[row][k];
        }
        piv.push_back(c);
        ++row;
    }
    m.resize(row);
    return piv;
}

std::vector<std::vector<Rat>> to_rat(const std::vector<Vec>& rows)
{
    std::vector<std::vector<Rat>> m;
    for (const Vec& r : rows) {
        std::vector<Rat> q(r.begin(), r.end());
        m.push_back(std::move(q));
    }
    return m;
}

Vec rat_to_primitive(const std::vector<Rat>& q)
{
    Int den = 1;
    for (const Rat& x : q) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    Vec v;
    v.reserve(q.size());
    for (const Rat& x : q) v.push_back(Int(x * den));
    make_primitive(v);
    return v;
}

// Integer basis of {x : E x = 0} in R^d.
std::vector<Vec> nullspace(const std::vector<Vec>& eqs, int d)
{
    std::vector<Vec> basis;
    if (eqs.empty()) {
        for (int i = 0; i < d; ++i) {
            Vec e(d, 0);
            e[i] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    auto m = to_rat(eqs);
    auto piv = rref(m, d);
    std::vector<bool> is_piv(d, false);
    for (int p : piv) is_piv[p] = true;
    for (int f = 0; f < d; ++f) {
        if (is_piv[f]) continue;
        std::vector<Rat> x(d, 0);
        x[f] = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = -m[r][f];
        basis.push_back(rat_to_primitive(x));
    }
    return basis;
}

// Canonical basis of span(rows): primitive integer rows of the RREF.
std::vector<Vec> canonical_span(const std::vector<Vec>& rows, int d)
{
    if (rows.empty()) return {};
    auto m = to_rat(rows);
    rref(m, d);
    std::vector<Vec> out;
    for (auto& r : m) out.push_back(rat_to_primitive(r));
    return out;
}

// ---------------------------------------------------------------------------
// Checked arithmetic for the fast path.

struct Overflow {};

inline std::int64_t mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline std::int64_t add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline std::int64_t sub(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow{};
    return r;
}
inline int sign(std::int64_t a) { return (a > 0) - (a < 0); }
inline std::int64_t gcd_of(std::int64_t a, std::int64_t b)
{
    if (a == INT64_MIN || b == INT64_MIN) throw Overflow{};
    return std::gcd(a, b);
}
inline std::int64_t divexact(std::int64_t a, std::int64_t g) { return a / g; }
inline std::int64_t negate(std::int64_t a) { return sub(0, a); }

inline Int mul(const Int& a, const Int& b) { return a * b; }
inline Int add(const Int& a, const Int& b) { return a + b; }
inline Int sub(const Int& a, const Int& b) { return a - b; }
inline int sign(const Int& a) { return sgn(a); }
inline Int gcd_of(const Int& a, const Int& b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}
inline Int divexact(const Int& a, const Int& g)
{
    Int r;
    mpz_divexact(r.get_mpz_t(), a.get_mpz_t(), g.get_mpz_t());
    return r;
}
inline Int negate(const Int& a) { return -a; }

template <class T>
T convert(const Int& x);
template <>
std::int64_t convert<std::int64_t>(const Int& x)
{
    if (!x.fits_slong_p()) throw Overflow{};
    return x.get_si();
}
template <>
Int convert<Int>(const Int& x)
{
    return x;
}

inline Int to_int(std::int64_t x) { return Int(static_cast<long>(x)); }
inline Int to_int(const Int& x) { return x; }

template <class T>
T tdot(const std::vector<T>& a, const std::vector<T>& b)
{
    T s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (sign(a[i]) && sign(b[i])) s = add(s, mul(a[i], b[i]));
    return s;
}

template <class T>
void tprimitive(std::vector<T>& v)
{
    T g = 0;
    for (const T& x : v) {
        if (sign(x) == 0) continue;
        g = gcd_of(g, x);
        if (g == 1) return;
    }
    if (sign(g) == 0) return;
    for (T& x : v) x = divexact(x, g);
}

// alpha * x - beta * y
template <class T>
std::vector<T> combo(const T& alpha, const std::vector<T>& x, const T& beta, const std::vector<T>& y)
{
    std::vector<T> r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = sub(mul(alpha, x[i]), mul(beta, y[i]));
    tprimitive(r);
    return r;
}

// ---------------------------------------------------------------------------
// Double description on {y in R^m : A y >= 0}.

using Word = std::uint64_t;

template <class T>
struct DoubleDescription {
    struct Ray {
        std::vector<T> v;
        std::vector<Word> z;  // processed inequalities that are tight
    };

    int m;
    int words;
    std::vector<std::vector<T>> a;
    std::vector<Ray> rays;
    std::vector<std::vector<T>> lines;

    DoubleDescription(int m_, std::vector<std::vector<T>> a_) : m(m_), a(std::move(a_))
    {
        words = static_cast<int>((a.size() + 63) / 64);
        for (int i = 0; i < m; ++i) {
            std::vector<T> e(m, 0);
            e[i] = 1;
            lines.push_back(std::move(e));
        }
    }

    static void set_bit(std::vector<Word>& z, std::size_t i) { z[i / 64] |= Word{1} << (i % 64); }

    void run()
    {
        for (std::size_t k = 0; k < a.size(); ++k) step(k);
    }

    void step(std::size_t k)
    {
        const std::vector<T>& ak = a[k];
        // Lineality first: a line not orthogonal to ak becomes a ray.
        std::size_t pick = lines.size();
        T apick = 0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            T d = tdot(ak, lines[i]);
            if (sign(d)) {
                pick = i;
                apick = d;
                break;
            }
        }
        if (pick < lines.size()) {
            std::vector<T> l = lines[pick];
            if (sign(apick) < 0) {
                for (T& x : l) x = negate(x);
                apick = negate(apick);
            }
            lines.erase(lines.begin() + static_cast<long>(pick));
            for (auto& li : lines) {
                T d = tdot(ak, li);
                if (sign(d)) li = combo(apick, li, d, l);
            }
            for (auto& r : rays) {
                T d = tdot(ak, r.v);
                if (sign(d)) r.v = combo(apick, r.v, d, l);
                set_bit(r.z, k);
            }
            Ray nr{l, std::vector<Word>(words, 0)};
            for (std::size_t j = 0; j < k; ++j) set_bit(nr.z, j);
            rays.push_back(std::move(nr));
            return;
        }

        std::vector<T> val(rays.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays.size(); ++i) {
            val[i] = tdot(ak, rays[i].v);
            int s = sign(val[i]);
            if (s > 0) pos.push_back(i);
            else if (s < 0) neg.push_back(i);
            else set_bit(rays[i].z, k);
        }
        if (neg.empty()) return;

        int need = m - static_cast<int>(lines.size()) - 2;
        std::vector<Ray> added;
        std::vector<Word> common(words);
        for (std::size_t p : pos) {
            for (std::size_t n : neg) {
                int cnt = 0;
                for (int w = 0; w < words; ++w) {
                    common[w] = rays[p].z[w] & rays[n].z[w];
                    cnt += __builtin_popcountll(common[w]);
                }
                if (cnt < need) continue;
                bool adjacent = true;
                for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
                    if (r == p || r == n) continue;
                    bool covers = true;
                    for (int w = 0; w < words; ++w)
                        if (common[w] & ~rays[r].z[w]) {
                            covers = false;
                            break;
                        }
                    if (covers) adjacent = false;
                }
                if (!adjacent) continue;
                // val[p] > 0 > val[n]
                Ray nr{combo(val[p], rays[n].v, val[n], rays[p].v), common};
                set_bit(nr.z, k);
                added.push_back(std::move(nr));
            }
        }
        std::vector<Ray> kept;
        kept.reserve(rays.size() - neg.size() + added.size());
        for (std::size_t i = 0; i < rays.size(); ++i)
            if (sign(val[i]) >= 0) kept.push_back(std::move(rays[i]));
        for (auto& r : added) kept.push_back(std::move(r));
        rays = std::move(kept);
    }
};

template <class T>
void run_dd(int m, const std::vector<Vec>& rows, std::vector<Vec>& rays_out, std::vector<Vec>& lines_out)
{
    std::vector<std::vector<T>> a;
    a.reserve(rows.size());
    for (const Vec& r : rows) {
        std::vector<T> t;
        t.reserve(r.size());
        for (const Int& x : r) t.push_back(convert<T>(x));
        if (std::all_of(t.begin(), t.end(), [](const T& x) { return sign(x) == 0; })) continue;
        a.push_back(std::move(t));
    }
    // Sparse rows first; this keeps intermediate ray counts small on the
    // entropy cones used by the bounds module.
    std::stable_sort(a.begin(), a.end(), [](const std::vector<T>& x, const std::vector<T>& y) {
        auto nz = [](const std::vector<T>& v) {
            return std::count_if(v.begin(), v.end(), [](const T& e) { return sign(e) != 0; });
        };
        return nz(x) < nz(y);
    });
    DoubleDescription<T> dd(m, std::move(a));
    dd.run();
    rays_out.clear();
    lines_out.clear();
    for (auto& r : dd.rays) {
        Vec v;
        for (auto& x : r.v) v.push_back(to_int(x));
        rays_out.push_back(std::move(v));
    }
    for (auto& l : dd.lines) {
        Vec v;
        for (auto& x : l) v.push_back(to_int(x));
        lines_out.push_back(std::move(v));
    }
}

Vec apply_basis(const std::vector<Vec>& basis, const Vec& y, int d)
{
    Vec x(d, 0);
    for (std::size_t j = 0; j < basis.size(); ++j)
        if (sgn(y[j]))
            for (int i = 0; i < d; ++i)
                if (sgn(basis[j][i])) x[i] += y[j] * basis[j][i];
    return x;
}

// Projects v onto the orthogonal complement of span(lines) (given as an
// RREF basis) and rescales to a primitive integer vector.
Vec reduce_mod_lines(const Vec& v, const std::vector<Vec>& lines)
{
    if (lines.empty()) return v;
    std::size_t k = lines.size();
    std::size_t d = v.size();
    // Solve (L L^T) c = L v, then v - L^T c.
    std::vector<std::vector<Rat>> g(k, std::vector<Rat>(k + 1));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) g[i][j] = Rat(dot(lines[i], lines[j]));
        g[i][k] = Rat(dot(lines[i], v));
    }
    rref(g, static_cast<int>(k));
    std::vector<Rat> out(v.begin(), v.end());
    for (std::size_t i = 0; i < k; ++i) {
        const Rat& c = g[i][k];
        if (sgn(c) == 0) continue;
        for (std::size_t t = 0; t < d; ++t)
            if (sgn(lines[i][t])) out[t] -= c * lines[i][t];
    }
    return rat_to_primitive(out);
}

}  // namespace

// ---------------------------------------------------------------------------
// Cone

Cone Cone::whole(std::vector<std::string> names) { return Cone(std::move(names)); }

Cone Cone::orthant(std::vector<std::string> names)
{
    Cone c(std::move(names));
    int d = c.dim();
    for (int i = 0; i < d; ++i) {
        Vec e(d, 0);
        e[i] = 1;
        c.ineqs.push_back(std::move(e));
    }
    return c;
}

bool Cone::contains(const Vec& x) const
{
    for (const Vec& a : ineqs)
        if (sgn(dot(a, x)) < 0) return false;
    for (const Vec& a : eqs)
        if (sgn(dot(a, x)) != 0) return false;
    return true;
}

int Cone::index_of(const std::string& name) const
{
    auto it = std::find(names.begin(), names.end(), name);
    return it == names.end() ? -1 : static_cast<int>(it - names.begin());
}

Cone intersect(const Cone& c, const std::vector<Vec>& extra_ineqs, const std::vector<Vec>& extra_eqs)
{
    Cone out = c;
    for (const Vec& a : extra_ineqs) {
        check_len(a, c.dim(), "intersect");
        out.ineqs.push_back(a);
    }
    for (const Vec& a : extra_eqs) {
        check_len(a, c.dim(), "intersect");
        out.eqs.push_back(a);
    }
    return out;
}

Cone intersect(const Cone& a, const Cone& b)
{
    if (a.names != b.names) throw std::invalid_argument("intersect: coordinate spaces differ");
    return intersect(a, b.ineqs, b.eqs);
}

Generators extreme_rays(const Cone& c)
{
    int d = c.dim();
    for (const Vec& a : c.ineqs) check_len(a, d, "extreme_rays");
    for (const Vec& a : c.eqs) check_len(a, d, "extreme_rays");

    std::vector<Vec> basis = nullspace(c.eqs, d);
    int m = static_cast<int>(basis.size());
    Generators g;
    if (m == 0) return g;

    std::vector<Vec> rows;
    rows.reserve(c.ineqs.size());
    for (const Vec& a : c.ineqs) {
        Vec r(m);
        for (int j = 0; j < m; ++j) r[j] = dot(a, basis[j]);
        make_primitive(r);
        rows.push_back(std::move(r));
    }
    std::vector<Vec> ys, ls;
    try {
        run_dd<std::int64_t>(m, rows, ys, ls);
    } catch (const Overflow&) {
        run_dd<Int>(m, rows, ys, ls);
    }
    std::vector<Vec> lines;
    for (const Vec& l : ls) lines.push_back(apply_basis(basis, l, d));
    g.lineality = canonical_span(lines, d);
    for (const Vec& y : ys) {
        Vec x = reduce_mod_lines(apply_basis(basis, y, d), g.lineality);
        make_primitive(x);
        if (!is_zero(x)) g.rays.push_back(std::move(x));
    }
    std::sort(g.rays.begin(), g.rays.end());
    g.rays.erase(std::unique(g.rays.begin(), g.rays.end()), g.rays.end());
    return g;
}

Cone conic_hull(const std::vector<std::string>& names, const std::vector<Vec>& rays, const std::vector<Vec>& lines)
{
    int d = static_cast<int>(names.size());
    Cone polar(names);
    for (const Vec& r : rays) {
        check_len(r, d, "conic_hull");
        if (!is_zero(r)) polar.ineqs.push_back(r);
    }
    for (const Vec& l : lines) {
        check_len(l, d, "conic_hull");
        if (!is_zero(l)) polar.eqs.push_back(l);
    }
    Generators g = extreme_rays(polar);
    Cone out(names);
    out.ineqs = std::move(g.rays);
    out.eqs = std::move(g.lineality);
    return out;
}

Cone remove_redundancy(const Cone& c)
{
    Generators g = extreme_rays(c);
    return conic_hull(c.names, g.rays, g.lineality);
}

Cone eliminate(const Cone& c, int coord)
{
    int d = c.dim();
    if (coord < 0 || coord >= d) throw std::invalid_argument("eliminate: coordinate out of range");
    auto drop = [&](const Vec& v) {
        Vec r;
        r.reserve(d - 1);
        for (int i = 0; i < d; ++i)
            if (i != coord) r.push_back(v[i]);
        return r;
    };
    std::vector<std::string> names;
    for (int i = 0; i < d; ++i)
        if (i != coord) names.push_back(c.names[i]);
    Cone out(names);

    auto pivot = std::find_if(c.eqs.begin(), c.eqs.end(), [&](const Vec& e) { return sgn(e[coord]) != 0; });
    if (pivot != c.eqs.end()) {
        const Vec& e = *pivot;
        Int ec = abs(e[coord]);
        int es = sgn(e[coord]);
        auto sub_out = [&](const Vec& a) {
            Vec r(d);
            for (int i = 0; i < d; ++i) r[i] = ec * a[i] - es * a[coord] * e[i];
            return r;
        };
        for (const Vec& a : c.ineqs) {
            Vec r = drop(sub_out(a));
            make_primitive(r);
            if (!is_zero(r)) out.ineqs.push_back(std::move(r));
        }
        for (auto it = c.eqs.begin(); it != c.eqs.end(); ++it) {
            if (it == pivot) continue;
            Vec r = drop(sub_out(*it));
            make_canonical_direction(r);
            if (!is_zero(r)) out.eqs.push_back(std::move(r));
        }
    } else {
        std::vector<const Vec*> pos, neg;
        for (const Vec& a : c.ineqs) {
            int s = sgn(a[coord]);
            if (s > 0) pos.push_back(&a);
            else if (s < 0) neg.push_back(&a);
            else {
                Vec r = drop(a);
                make_primitive(r);
                if (!is_zero(r)) out.ineqs.push_back(std::move(r));
            }
        }
        for (const Vec* p : pos)
            for (const Vec* n : neg) {
                Vec r(d);
                for (int i = 0; i < d; ++i) r[i] = (*p)[coord] * (*n)[i] - (*n)[coord] * (*p)[i];
                r = drop(r);
                make_primitive(r);
                if (!is_zero(r)) out.ineqs.push_back(std::move(r));
            }
        for (const Vec& e : c.eqs) {
            Vec r = drop(e);
            make_canonical_direction(r);
            if (!is_zero(r)) out.eqs.push_back(std::move(r));
        }
    }
    std::sort(out.ineqs.begin(), out.ineqs.end());
    out.ineqs.erase(std::unique(out.ineqs.begin(), out.ineqs.end()), out.ineqs.end());
    std::sort(out.eqs.begin(), out.eqs.end());
    out.eqs.erase(std::unique(out.eqs.begin(), out.eqs.end()), out.eqs.end());
    return out;
}

Cone permute(const Cone& c, const std::vector<int>& perm, std::vector<std::string> new_names)
{
    if (new_names.size() != perm.size()) throw std::invalid_argument("permute: name count mismatch");
    Cone out(std::move(new_names));
    auto map = [&](const Vec& a) {
        Vec r(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) r[i] = a[perm[i]];
        return r;
    };
    if (perm.size() != static_cast<std::size_t>(c.dim()))
        throw std::invalid_argument("permute: needs a bijection of coordinates");
    for (const Vec& a : c.ineqs) out.ineqs.push_back(map(a));
    for (const Vec& a : c.eqs) out.eqs.push_back(map(a));
    return out;
}

Cone project(const Cone& c, const std::vector<int>& keep, const ProjectOptions& opt)
{
    int d = c.dim();
    std::vector<bool> kept(d, false);
    std::vector<std::string> names;
    for (int k : keep) {
        if (k < 0 || k >= d || kept[k]) throw std::invalid_argument("project: bad coordinate list");
        kept[k] = true;
        names.push_back(c.names[k]);
    }
    int elim = d - static_cast<int>(keep.size());
    if (elim <= opt.fm_threshold) {
        Cone cur = c;
        for (int i = d - 1; i >= 0; --i)
            if (!kept[i]) cur = eliminate(cur, i);
        // cur holds the kept coordinates in ascending index order.
        std::vector<int> order;
        for (int k : keep) order.push_back(cur.index_of(c.names[k]));
        return remove_redundancy(permute(cur, order, names));
    }
    Generators g = extreme_rays(c);
    auto cut = [&](const Vec& v) {
        Vec r;
        for (int k : keep) r.push_back(v[k]);
        return r;
    };
    std::vector<Vec> rays, lines;
    for (const Vec& r : g.rays) rays.push_back(cut(r));
    for (const Vec& l : g.lineality) lines.push_back(cut(l));
    return conic_hull(names, rays, lines);
}

Cone project_names(const Cone& c, const std::vector<std::string>& keep, const ProjectOptions& opt)
{
    std::vector<int> idx;
    for (const auto& n : keep) {
        int i = c.index_of(n);
        if (i < 0) throw std::invalid_argument("project: unknown coordinate " + n);
        idx.push_back(i);
    }
    return project(c, idx, opt);
}

std::optional<Vec> subcone_witness(const Cone& a, const Cone& b)
{
    if (a.names.size() != b.names.size()) throw std::invalid_argument("is_subcone: dimension mismatch");
    Generators g = extreme_rays(a);
    for (const Vec& r : g.rays)
        if (!b.contains(r)) return r;
    for (const Vec& l : g.lineality) {
        if (!b.contains(l)) return l;
        Vec m = l;
        for (Int& x : m) x = -x;
        if (!b.contains(m)) return m;
    }
    return std::nullopt;
}

bool is_subcone(const Cone& a, const Cone& b) { return !subcone_witness(a, b).has_value(); }

bool cone_equal(const Cone& a, const Cone& b) { return is_subcone(a, b) && is_subcone(b, a); }

Cone product(const Cone& a, const Cone& b)
{
    std::vector<std::string> names = a.names;
    names.insert(names.end(), b.names.begin(), b.names.end());
    Cone out(names);
    int da = a.dim(), db = b.dim();
    auto left = [&](const Vec& v) {
        Vec r = v;
        r.resize(da + db, 0);
        return r;
    };
    auto right = [&](const Vec& v) {
        Vec r(da, 0);
        r.insert(r.end(), v.begin(), v.end());
        return r;
    };
    for (const Vec& v : a.ineqs) out.ineqs.push_back(left(v));
    for (const Vec& v : b.ineqs) out.ineqs.push_back(right(v));
    for (const Vec& v : a.eqs) out.eqs.push_back(left(v));
    for (const Vec& v : b.eqs) out.eqs.push_back(right(v));
    return out;
}

std::string to_hrep_text(const Cone& c)
{
    std::ostringstream os;
    os << "names:";
    for (const auto& n : c.names) os << ' ' << n;
    os << '\n';
    auto line = [&](const Vec& v, const char* rel) {
        for (std::size_t i = 0; i < v.size(); ++i) os << (i ? " " : "") << v[i].get_str();
        os << ' ' << rel << " 0\n";
    };
    for (const Vec& v : c.eqs) line(v, "=");
    for (const Vec& v : c.ineqs) line(v, ">=");
    return os.str();
}

Cone from_hrep_text(const std::string& text)
{
    std::istringstream is(text);
    std::string header;
    if (!std::getline(is, header) || header.rfind("names:", 0) != 0)
        throw std::invalid_argument("H-rep text must start with a names: header");
    Cone c;
    {
        std::istringstream hs(header.substr(6));
        std::string n;
        while (hs >> n) c.names.push_back(n);
    }
    std::string ln;
    int lineno = 1;
    while (std::getline(is, ln)) {
        ++lineno;
        if (ln.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(ln);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.size() != c.names.size() + 2 || tok.back() != "0")
            throw std::invalid_argument("H-rep line " + std::to_string(lineno) + " is malformed");
        Vec v;
        for (std::size_t i = 0; i < c.names.size(); ++i) v.emplace_back(tok[i]);
        const std::string& rel = tok[c.names.size()];
        if (rel == ">=") c.ineqs.push_back(std::move(v));
        else if (rel == "=") c.eqs.push_back(std::move(v));
        else throw std::invalid_argument("H-rep line " + std::to_string(lineno) + " has unknown relation");
    }
    return c;
}

// ---------------------------------------------------------------------------
// Region

Region Region::of(const Cone& c)
{
    Region r;
    r.names = c.names;
    r.pieces.push_back({Cone::whole(c.names), c});
    return r;
}

const Cone& Region::cone() const
{
    if (pieces.size() != 1) throw std::logic_error("region is a union of several pieces");
    return pieces.front().body;
}

bool Region::contains(const Vec& x) const
{
    for (const Piece& p : pieces)
        if (p.cell.contains(x)) return p.body.contains(x);
    return false;
}

bool region_subset(const Region& a, const Region& b)
{
    if (a.names.size() != b.names.size()) throw std::invalid_argument("region comparison: dimension mismatch");
    for (const auto& pa : a.pieces)
        for (const auto& pb : b.pieces)
            if (!is_subcone(intersect(pa.body, pb.cell.ineqs, pb.cell.eqs), pb.body)) return false;
    return true;
}

bool region_equal(const Region& a, const Region& b)
{
    if (a.names.size() != b.names.size()) throw std::invalid_argument("region comparison: dimension mismatch");
    for (const auto& pa : a.pieces)
        for (const auto& pb : b.pieces)
            if (!cone_equal(intersect(pa.body, pb.cell.ineqs, pb.cell.eqs),
                            intersect(pb.body, pa.cell.ineqs, pa.cell.eqs)))
                return false;
    return true;
}

Region region_product(const Region& a, const Region& b)
{
    Region r;
    r.names = a.names;
    r.names.insert(r.names.end(), b.names.begin(), b.names.end());
    for (const auto& pa : a.pieces)
        for (const auto& pb : b.pieces) r.pieces.push_back({product(pa.cell, pb.cell), product(pa.body, pb.body)});
    return r;
}

Cone substitute(const Cone& c, std::vector<std::string> names, const std::vector<int>& coord_of)
{
    if (static_cast<int>(coord_of.size()) != c.dim()) throw std::invalid_argument("substitute: coordinate mismatch");
    Cone out(std::move(names));
    std::size_t d = out.names.size();
    auto map_row = [&](const Vec& a) {
        Vec b(d, 0);
        for (std::size_t j = 0; j < a.size(); ++j) {
            if (coord_of[j] < 0) continue;
            if (static_cast<std::size_t>(coord_of[j]) >= d) throw std::invalid_argument("substitute: target out of range");
            b[coord_of[j]] += a[j];
        }
        return b;
    };
    for (const Vec& a : c.ineqs) {
        Vec b = map_row(a);
        if (!is_zero(b)) out.ineqs.push_back(std::move(b));
    }
    for (const Vec& a : c.eqs) {
        Vec b = map_row(a);
        if (!is_zero(b)) out.eqs.push_back(std::move(b));
    }
    return out;
}

Region substitute(const Region& r, std::vector<std::string> names, const std::vector<int>& coord_of)
{
    Region out;
    out.names = names;
    for (const auto& p : r.pieces)
        out.pieces.push_back({substitute(p.cell, names, coord_of), substitute(p.body, names, coord_of)});
    return out;
}

Region simplify(const Region& r)
{
    if (r.pieces.size() <= 1) return r;
    std::vector<Vec> rays, lines;
    for (const auto& p : r.pieces) {
        Generators g = extreme_rays(p.body);
        rays.insert(rays.end(), g.rays.begin(), g.rays.end());
        lines.insert(lines.end(), g.lineality.begin(), g.lineality.end());
    }
    Cone hull = conic_hull(r.names, rays, lines);
    Region single = Region::of(hull);
    if (region_equal(single, r)) return single;
    return r;
}

}  // namespace hnc
