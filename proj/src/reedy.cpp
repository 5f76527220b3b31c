#include "dendro/reedy.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace dendro {

namespace {

// Arrows grouped by source and by (source, target).
struct Homs {
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> in;
    std::map<std::pair<int, int>, std::vector<int>> between;

    explicit Homs(const GenReedyCat& c) : out(c.object_count()), in(c.object_count()) {
        for (int f = 0; f < c.arrow_count(); ++f) {
            out[c.arrows[f].src].push_back(f);
            in[c.arrows[f].dst].push_back(f);
            between[{c.arrows[f].src, c.arrows[f].dst}].push_back(f);
        }
    }
    const std::vector<int>& hom(int a, int b) const {
        static const std::vector<int> none;
        auto it = between.find({a, b});
        return it == between.end() ? none : it->second;
    }
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
    // Class numbers in order of first element.
    std::vector<int> classes(int& count) {
        std::vector<int> out(parent.size());
        std::map<int, int> ids;
        for (std::size_t i = 0; i < parent.size(); ++i) {
            auto [it, fresh] = ids.try_emplace(find(static_cast<int>(i)), static_cast<int>(ids.size()));
            out[i] = it->second;
        }
        count = static_cast<int>(ids.size());
        return out;
    }
};

std::string names_of(const GenReedyCat& c, const std::vector<int>& arrows) {
    std::string s = "{";
    for (std::size_t i = 0; i < arrows.size(); ++i) s += (i ? "," : "") + c.arrows[arrows[i]].name;
    return s + "}";
}

int inverse(const GenReedyCat& c, int a) {
    int r = c.arrows[a].src;
    for (int b = 0; b < c.arrow_count(); ++b)
        if (c.arrows[b].src == c.arrows[a].dst && c.comp[b][a] == c.identity[r] &&
            c.comp[a][b] == c.identity[c.arrows[a].dst])
            return b;
    return -1;
}

ArrowGroup closure(const GenReedyCat& c, std::set<int> s) {
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<int> cur(s.begin(), s.end());
        for (int a : cur)
            for (int b : cur)
                if (s.insert(c.comp[a][b]).second) grew = true;
    }
    return {s.begin(), s.end()};
}

// Builds the composition table of a category of maps given by edge functions.
struct MapArrow {
    int src, dst;
    std::vector<int> fn;
};

GenReedyCat from_maps(std::vector<std::string> objects, std::vector<int> degree, const std::vector<MapArrow>& maps,
                      const std::function<std::string(const MapArrow&)>& name,
                      const std::function<bool(const MapArrow&)>& plus,
                      const std::function<bool(const MapArrow&)>& minus) {
    GenReedyCat c;
    c.objects = std::move(objects);
    c.degree = std::move(degree);
    std::map<std::tuple<int, int, std::vector<int>>, int> index;
    for (const auto& m : maps) {
        index[{m.src, m.dst, m.fn}] = c.arrow_count();
        c.arrows.push_back({m.src, m.dst, name(m), plus(m), minus(m)});
        c.edge_maps.push_back(m.fn);
    }
    c.identity.assign(c.object_count(), -1);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto& m = maps[i];
        if (m.src != m.dst) continue;
        bool id = true;
        for (std::size_t k = 0; k < m.fn.size(); ++k) id = id && m.fn[k] == static_cast<int>(k);
        if (id) c.identity[m.src] = static_cast<int>(i);
    }
    const int n = c.arrow_count();
    c.comp.assign(n, std::vector<int>(n, -1));
    for (int f = 0; f < n; ++f)
        for (int g = 0; g < n; ++g) {
            if (maps[f].dst != maps[g].src) continue;
            std::vector<int> fn;
            for (int x : maps[f].fn) fn.push_back(maps[g].fn[x]);
            c.comp[g][f] = index.at({maps[f].src, maps[g].dst, fn});
        }
    return c;
}

bool injective_fn(const std::vector<int>& fn) {
    std::set<int> s(fn.begin(), fn.end());
    return s.size() == fn.size();
}

}  // namespace

int GenReedyCat::find_object(std::string_view name) const {
    for (int i = 0; i < object_count(); ++i)
        if (objects[i] == name) return i;
    throw Error(ErrorKind::InvalidInput, "unknown object " + std::string(name));
}

int GenReedyCat::find_arrow(std::string_view name) const {
    for (int i = 0; i < arrow_count(); ++i)
        if (arrows[i].name == name) return i;
    throw Error(ErrorKind::InvalidInput, "unknown arrow " + std::string(name));
}

std::vector<int> GenReedyCat::hom(int a, int b) const {
    std::vector<int> out;
    for (int f = 0; f < arrow_count(); ++f)
        if (arrows[f].src == a && arrows[f].dst == b) out.push_back(f);
    return out;
}

bool GenReedyCat::is_iso(int f) const { return inverse(*this, f) >= 0; }

std::vector<int> GenReedyCat::automorphisms(int r) const {
    std::vector<int> out;
    for (int f : hom(r, r))
        if (is_iso(f)) out.push_back(f);
    return out;
}

void check_category(const GenReedyCat& c) {
    const int n = c.arrow_count();
    auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidInput, what); };
    if (static_cast<int>(c.degree.size()) != c.object_count() || static_cast<int>(c.identity.size()) != c.object_count())
        fail("degree and identity tables must cover the objects");
    if (static_cast<int>(c.comp.size()) != n) fail("composition table has the wrong size");
    for (const auto& a : c.arrows)
        if (a.src < 0 || a.src >= c.object_count() || a.dst < 0 || a.dst >= c.object_count())
            fail("arrow " + a.name + " has an unknown end");
    for (int r = 0; r < c.object_count(); ++r) {
        int id = c.identity[r];
        if (id < 0 || id >= n || c.arrows[id].src != r || c.arrows[id].dst != r) fail("bad identity at " + c.objects[r]);
        if (!c.arrows[id].plus || !c.arrows[id].minus) fail("identity of " + c.objects[r] + " must lie in R+ and R-");
    }
    for (int g = 0; g < n; ++g) {
        if (static_cast<int>(c.comp[g].size()) != n) fail("composition table has the wrong size");
        for (int f = 0; f < n; ++f) {
            bool composable = c.arrows[f].dst == c.arrows[g].src;
            int h = c.comp[g][f];
            if (!composable) {
                if (h != -1) fail("composite of non-composable " + c.arrows[g].name + " o " + c.arrows[f].name);
                continue;
            }
            if (h < 0 || h >= n || c.arrows[h].src != c.arrows[f].src || c.arrows[h].dst != c.arrows[g].dst)
                fail("composite " + c.arrows[g].name + " o " + c.arrows[f].name + " has the wrong ends");
            if (c.arrows[f].plus && c.arrows[g].plus && !c.arrows[h].plus) fail("R+ is not closed at " + c.arrows[h].name);
            if (c.arrows[f].minus && c.arrows[g].minus && !c.arrows[h].minus)
                fail("R- is not closed at " + c.arrows[h].name);
        }
    }
    for (int f = 0; f < n; ++f) {
        if (c.comp[f][c.identity[c.arrows[f].src]] != f || c.comp[c.identity[c.arrows[f].dst]][f] != f)
            fail("identity law fails at " + c.arrows[f].name);
    }
    Homs homs(c);
    for (int f = 0; f < n; ++f)
        for (int g : homs.out[c.arrows[f].dst])
            for (int h : homs.out[c.arrows[g].dst])
                if (c.comp[h][c.comp[g][f]] != c.comp[c.comp[h][g]][f])
                    fail("associativity fails at " + c.arrows[h].name + " o " + c.arrows[g].name + " o " +
                         c.arrows[f].name);
}

bool ReedyReport::ok() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return a.pass; });
}

const AxiomResult& ReedyReport::get(std::string_view name) const {
    for (const auto& a : axioms)
        if (a.name == name) return a;
    throw Error(ErrorKind::InvalidInput, "unknown axiom " + std::string(name));
}

std::vector<std::pair<int, int>> factorizations(const GenReedyCat& c, int f) {
    std::vector<std::pair<int, int>> out;
    const int r = c.arrows[f].src, t = c.arrows[f].dst;
    for (int q = 0; q < c.arrow_count(); ++q) {
        if (c.arrows[q].src != r || !c.arrows[q].minus) continue;
        for (int p = 0; p < c.arrow_count(); ++p)
            if (c.arrows[p].plus && c.arrows[p].src == c.arrows[q].dst && c.arrows[p].dst == t && c.comp[p][q] == f)
                out.emplace_back(p, q);
    }
    return out;
}

ReedyReport validate_gen_reedy(const GenReedyCat& c) {
    check_category(c);
    ReedyReport rep;
    AxiomResult i{"i", true, {}}, ii{"ii", true, {}}, iii{"iii", true, {}};
    std::vector<bool> iso(c.arrow_count());
    for (int f = 0; f < c.arrow_count(); ++f) iso[f] = c.is_iso(f);
    for (int f = 0; f < c.arrow_count() && i.pass; ++f) {
        const auto& a = c.arrows[f];
        int ds = c.degree[a.src], dt = c.degree[a.dst];
        std::string why;
        if (iso[f] && ds != dt) why = "isomorphism changes degree";
        else if (!iso[f] && a.plus && dt <= ds) why = "non-invertible R+ map does not raise degree";
        else if (!iso[f] && a.minus && dt >= ds) why = "non-invertible R- map does not lower degree";
        if (!why.empty()) i = {"i", false, a.name + ": " + why};
    }
    for (int f = 0; f < c.arrow_count() && ii.pass; ++f) {
        const auto& a = c.arrows[f];
        if ((a.plus && a.minus) != iso[f])
            ii = {"ii", false, a.name + (iso[f] ? ": isomorphism outside R+ n R-" : ": non-invertible map in R+ n R-")};
    }
    Homs homs(c);
    for (int f = 0; f < c.arrow_count() && iii.pass; ++f) {
        const int r = c.arrows[f].src, t = c.arrows[f].dst;
        std::vector<std::pair<int, int>> fs;
        for (int q : homs.out[r]) {
            if (!c.arrows[q].minus) continue;
            for (int p : homs.hom(c.arrows[q].dst, t))
                if (c.arrows[p].plus && c.comp[p][q] == f) fs.emplace_back(p, q);
        }
        if (fs.empty()) {
            iii = {"iii", false, c.arrows[f].name + " has no factorization"};
            break;
        }
        auto [p1, q1] = fs.front();
        for (auto [p2, q2] : fs) {
            bool related = false;
            for (int phi : homs.hom(c.arrows[q1].dst, c.arrows[q2].dst))
                if (iso[phi] && c.comp[p2][phi] == p1 && c.comp[phi][q1] == q2) related = true;
            if (!related) {
                iii = {"iii", false,
                       c.arrows[f].name + " factors as " + c.arrows[p1].name + " o " + c.arrows[q1].name + " and " +
                           c.arrows[p2].name + " o " + c.arrows[q2].name + " with no isomorphism between them"};
                break;
            }
        }
    }
    rep.axioms = {i, ii, iii};
    return rep;
}

// ---- builders ----

GenReedyCat delta(int n) {
    std::vector<std::string> objects;
    std::vector<int> degree;
    std::vector<MapArrow> maps;
    for (int a = 0; a <= n; ++a) {
        objects.push_back("[" + std::to_string(a) + "]");
        degree.push_back(a);
    }
    for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) {
            std::vector<int> fn(a + 1, 0);
            std::function<void(int, int)> rec = [&](int i, int lo) {
                if (i > a) {
                    maps.push_back({a, b, fn});
                    return;
                }
                for (int v = lo; v <= b; ++v) {
                    fn[i] = v;
                    rec(i + 1, v);
                }
            };
            rec(0, 0);
        }
    auto name = [](const MapArrow& m) {
        std::string s = "[" + std::to_string(m.src) + "]->[" + std::to_string(m.dst) + "]:";
        for (int v : m.fn) s += std::to_string(v);
        return s;
    };
    auto surjective = [](const MapArrow& m) { return static_cast<int>(std::set<int>(m.fn.begin(), m.fn.end()).size()) == m.dst + 1; };
    return from_maps(objects, degree, maps, name, [](const MapArrow& m) { return injective_fn(m.fn); }, surjective);
}

GenReedyCat omega(int degree, int arity) {
    auto trees = enumerate_trees(degree, arity);
    std::vector<std::string> objects;
    std::vector<int> degrees;
    for (const auto& t : trees) {
        objects.push_back(t.shape_code());
        degrees.push_back(t.degree());
    }
    std::vector<MapArrow> maps;
    for (int a = 0; a < static_cast<int>(trees.size()); ++a)
        for (int b = 0; b < static_cast<int>(trees.size()); ++b)
            for (auto& fn : monotone_maps(trees[a], trees[b])) maps.push_back({a, b, std::move(fn)});
    std::map<std::pair<int, int>, int> counter;
    std::vector<std::string> names;
    for (const auto& m : maps) names.push_back(objects[m.src] + "->" + objects[m.dst] + "#" + std::to_string(counter[{m.src, m.dst}]++));
    std::size_t k = 0;
    auto name = [&](const MapArrow&) { return names[k++]; };
    // Degeneracies: onto and leaf preserving. Onto maps chopping a stump are faces.
    auto degeneracy = [&](const MapArrow& m) {
        if (static_cast<int>(std::set<int>(m.fn.begin(), m.fn.end()).size()) != trees[m.dst].size()) return false;
        for (int e = 0; e < trees[m.src].size(); ++e)
            if (trees[m.src].is_leaf(e) && !trees[m.dst].is_leaf(m.fn[e])) return false;
        return true;
    };
    return from_maps(objects, degrees, maps, name, [](const MapArrow& m) { return injective_fn(m.fn); }, degeneracy);
}

GenReedyCat group_category(const FiniteGroup& g) {
    GenReedyCat c;
    c.objects = {"*"};
    c.degree = {0};
    c.identity = {g.identity()};
    for (int x = 0; x < g.order(); ++x) c.arrows.push_back({0, 0, g.name(x), true, true});
    c.comp = g.table();
    return c;
}

GenReedyCat opposite(const GenReedyCat& c) {
    GenReedyCat o = c;
    for (auto& a : o.arrows) {
        std::swap(a.src, a.dst);
        std::swap(a.plus, a.minus);
    }
    for (int g = 0; g < c.arrow_count(); ++g)
        for (int f = 0; f < c.arrow_count(); ++f) o.comp[g][f] = c.comp[f][g];
    return o;
}

GenReedyCat product(const GenReedyCat& a, const GenReedyCat& b) {
    GenReedyCat c;
    const int na = a.object_count(), nb = b.object_count();
    for (int x = 0; x < na; ++x)
        for (int y = 0; y < nb; ++y) {
            c.objects.push_back("(" + a.objects[x] + "," + b.objects[y] + ")");
            c.degree.push_back(a.degree[x] + b.degree[y]);
            c.identity.push_back(a.identity[x] * b.arrow_count() + b.identity[y]);
        }
    std::set<int> a_ids(a.identity.begin(), a.identity.end());
    const int mb = b.arrow_count();
    for (const auto& f : a.arrows)
        for (const auto& g : b.arrows)
            c.arrows.push_back({f.src * nb + g.src, f.dst * nb + g.dst, "(" + f.name + "," + g.name + ")",
                                f.plus && g.plus, f.minus && g.minus});
    for (int i = 0; i < a.arrow_count(); ++i)
        for (int j = 0; j < mb; ++j) c.left_identity.push_back(a_ids.count(i) > 0);
    const int n = c.arrow_count();
    c.comp.assign(n, std::vector<int>(n, -1));
    for (int g = 0; g < n; ++g)
        for (int f = 0; f < n; ++f) {
            int ha = a.comp[g / mb][f / mb], hb = b.comp[g % mb][f % mb];
            if (ha >= 0 && hb >= 0) c.comp[g][f] = ha * mb + hb;
        }
    return c;
}

GenReedyCat g_times_arrow(const FiniteGroup& g) {
    GenReedyCat s;
    s.objects = {"0", "1"};
    s.degree = {0, 1};
    s.identity = {0, 1};
    s.arrows = {{0, 0, "id0", true, true}, {1, 1, "id1", true, true}, {1, 0, "u", false, true}};
    s.comp = {{0, -1, 2}, {-1, 1, -1}, {-1, 2, -1}};
    return product(group_category(g), s);
}

// ---- families ----

std::vector<ArrowGroup> subgroups(const GenReedyCat& c, int r) {
    auto aut = c.automorphisms(r);
    std::set<ArrowGroup> seen{{c.identity[r]}};
    std::vector<ArrowGroup> queue{{c.identity[r]}};
    for (std::size_t k = 0; k < queue.size(); ++k) {
        ArrowGroup cur = queue[k];
        for (int x : aut) {
            if (std::binary_search(cur.begin(), cur.end(), x)) continue;
            std::set<int> s(cur.begin(), cur.end());
            s.insert(x);
            ArrowGroup next = closure(c, s);
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    std::vector<ArrowGroup> out(seen.begin(), seen.end());
    std::stable_sort(out.begin(), out.end(), [](const ArrowGroup& a, const ArrowGroup& b) { return a.size() < b.size(); });
    return out;
}

bool is_family(const GenReedyCat& c, int r, const Family& f) {
    std::set<ArrowGroup> members;
    for (auto h : f) {
        std::sort(h.begin(), h.end());
        if (closure(c, std::set<int>(h.begin(), h.end())) != h) return false;
        members.insert(h);
    }
    auto aut = c.automorphisms(r);
    for (const auto& h : members) {
        for (const auto& k : subgroups(c, r))
            if (std::includes(h.begin(), h.end(), k.begin(), k.end()) && !members.count(k)) return false;
        for (int a : aut) {
            int ai = inverse(c, a);
            std::set<int> conj;
            for (int x : h) conj.insert(c.comp[c.comp[a][x]][ai]);
            if (!members.count({conj.begin(), conj.end()})) return false;
        }
    }
    return true;
}

Family all_subgroups_family(const GenReedyCat& c, int r) { return subgroups(c, r); }

Family trivial_family(const GenReedyCat& c, int r) { return {{c.identity[r]}}; }

Family graph_family(const GenReedyCat& c, int r) {
    if (c.left_identity.empty()) throw Error(ErrorKind::InvalidInput, "graph families need a product category");
    Family out;
    for (const auto& h : subgroups(c, r)) {
        int kernel = 0;
        for (int x : h) kernel += c.left_identity[x];
        if (kernel == 1) out.push_back(h);
    }
    return out;
}

std::vector<std::pair<int, int>> arrow_automorphisms(const GenReedyCat& c, int f) {
    std::vector<std::pair<int, int>> out;
    for (int a : c.automorphisms(c.arrows[f].src))
        for (int b : c.automorphisms(c.arrows[f].dst))
            if (c.comp[b][f] == c.comp[f][a]) out.emplace_back(a, b);
    return out;
}

AdmissibleCheck check_admissible(const GenReedyCat& c, const std::vector<Family>& families) {
    if (static_cast<int>(families.size()) != c.object_count())
        throw Error(ErrorKind::InvalidInput, "one family per object is required");
    std::vector<std::set<ArrowGroup>> fam(c.object_count());
    for (int r = 0; r < c.object_count(); ++r) {
        if (!is_family(c, r, families[r])) throw Error(ErrorKind::InvalidInput, "not a family at " + c.objects[r]);
        for (auto h : families[r]) {
            std::sort(h.begin(), h.end());
            fam[r].insert(h);
        }
    }
    for (int f = 0; f < c.arrow_count(); ++f) {
        if (!c.arrows[f].minus) continue;
        auto pairs = arrow_automorphisms(c, f);
        const int t = c.arrows[f].dst;
        for (const auto& h : fam[c.arrows[f].src]) {
            std::set<int> image;
            for (auto [a, b] : pairs)
                if (std::binary_search(h.begin(), h.end(), a)) image.insert(b);
            ArrowGroup img(image.begin(), image.end());
            if (!fam[t].count(img))
                return {false, c.arrows[f].name + ": H=" + names_of(c, h) + " pushes forward to " + names_of(c, img) +
                                   " outside the family at " + c.objects[t]};
        }
    }
    return {true, {}};
}

// ---- set-valued functors ----

void check_functor(const GenReedyCat& c, const SetFunctor& x) {
    if (static_cast<int>(x.size.size()) != c.object_count() || static_cast<int>(x.map.size()) != c.arrow_count())
        throw Error(ErrorKind::InvalidInput, "functor tables do not match the category");
    for (int f = 0; f < c.arrow_count(); ++f) {
        const auto& a = c.arrows[f];
        if (static_cast<int>(x.map[f].size()) != x.size[a.src]) throw Error(ErrorKind::InvalidInput, "bad map at " + a.name);
        for (int v : x.map[f])
            if (v < 0 || v >= x.size[a.dst]) throw Error(ErrorKind::InvalidInput, "value out of range at " + a.name);
    }
    for (int r = 0; r < c.object_count(); ++r)
        for (int v = 0; v < x.size[r]; ++v)
            if (x.map[c.identity[r]][v] != v) throw Error(ErrorKind::InvalidInput, "identity moves a value at " + c.objects[r]);
    for (int f = 0; f < c.arrow_count(); ++f)
        for (int g = 0; g < c.arrow_count(); ++g) {
            int h = c.comp[g][f];
            if (h < 0) continue;
            for (int v = 0; v < x.size[c.arrows[f].src]; ++v)
                if (x.map[h][v] != x.map[g][x.map[f][v]])
                    throw Error(ErrorKind::InvalidInput, "not functorial at " + c.arrows[g].name + " o " + c.arrows[f].name);
        }
}

SetFunctor constant_functor(const GenReedyCat& c, int n) {
    SetFunctor x;
    x.size.assign(c.object_count(), n);
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    x.map.assign(c.arrow_count(), id);
    return x;
}

SetFunctor representable(const GenReedyCat& c, int r) {
    SetFunctor x;
    x.size.assign(c.object_count(), 0);
    std::vector<int> pos(c.arrow_count(), -1);
    for (int f = 0; f < c.arrow_count(); ++f)
        if (c.arrows[f].src == r) pos[f] = x.size[c.arrows[f].dst]++;
    std::vector<std::vector<int>> at(c.object_count());
    for (int f = 0; f < c.arrow_count(); ++f)
        if (c.arrows[f].src == r) at[c.arrows[f].dst].push_back(f);
    x.map.resize(c.arrow_count());
    for (int g = 0; g < c.arrow_count(); ++g)
        for (int f : at[c.arrows[g].src]) x.map[g].push_back(pos[c.comp[g][f]]);
    return x;
}

namespace {

// Colimit at r of X over arrows s -> r with |s| <= n: elements (f, y) up to
// (f o g, y) ~ (f, X(g) y). Returns the class count, class of each element and elements.
struct Colimit {
    std::vector<std::pair<int, int>> elems;
    std::map<std::pair<int, int>, int> index;
    std::vector<int> cls;
    int count = 0;
};

Colimit colimit_at(const GenReedyCat& c, const Homs& homs, const SetFunctor& x, int r, int n) {
    Colimit col;
    for (int f : homs.in[r])
        if (c.degree[c.arrows[f].src] <= n)
            for (int y = 0; y < x.size[c.arrows[f].src]; ++y) {
                col.index[{f, y}] = static_cast<int>(col.elems.size());
                col.elems.emplace_back(f, y);
            }
    UnionFind uf(static_cast<int>(col.elems.size()));
    for (int f : homs.in[r]) {
        int s = c.arrows[f].src;
        if (c.degree[s] > n) continue;
        for (int g : homs.in[s]) {
            if (c.degree[c.arrows[g].src] > n) continue;
            int fg = c.comp[f][g];
            for (int y = 0; y < x.size[c.arrows[g].src]; ++y) uf.unite(col.index.at({fg, y}), col.index.at({f, x.map[g][y]}));
        }
    }
    col.cls = uf.classes(col.count);
    return col;
}

}  // namespace

NatTrans skeleton(const GenReedyCat& c, const SetFunctor& x, int n) {
    Homs homs(c);
    std::vector<Colimit> cols;
    NatTrans out;
    out.target = x;
    out.source.size.resize(c.object_count());
    out.at.resize(c.object_count());
    for (int r = 0; r < c.object_count(); ++r) {
        cols.push_back(colimit_at(c, homs, x, r, n));
        const Colimit& col = cols.back();
        out.source.size[r] = col.count;
        out.at[r].assign(col.count, -1);
        for (std::size_t i = 0; i < col.elems.size(); ++i) {
            auto [f, y] = col.elems[i];
            out.at[r][col.cls[i]] = x.map[f][y];
        }
    }
    out.source.map.resize(c.arrow_count());
    for (int h = 0; h < c.arrow_count(); ++h) {
        const Colimit& from = cols[c.arrows[h].src];
        const Colimit& to = cols[c.arrows[h].dst];
        auto& m = out.source.map[h];
        m.assign(from.count, -1);
        for (std::size_t i = 0; i < from.elems.size(); ++i) {
            auto [f, y] = from.elems[i];
            m[from.cls[i]] = to.cls[to.index.at({c.comp[h][f], y})];
        }
    }
    return out;
}

LatchingMatching latching_matching(const GenReedyCat& c, const SetFunctor& x, int r) {
    Homs homs(c);
    LatchingMatching lm;
    const int n = c.degree[r] - 1;
    Colimit col = colimit_at(c, homs, x, r, n);
    lm.latching = col.count;
    lm.latching_map.assign(col.count, -1);
    for (std::size_t i = 0; i < col.elems.size(); ++i) {
        auto [f, y] = col.elems[i];
        lm.latching_map[col.cls[i]] = x.map[f][y];
    }

    // Limit over arrows f: r -> s with |s| <= n: families with y_{g o f} = X(g) y_f.
    std::vector<int> low;
    for (int f : homs.out[r])
        if (c.degree[c.arrows[f].dst] <= n) low.push_back(f);
    std::map<int, int> slot;
    for (std::size_t i = 0; i < low.size(); ++i) slot[low[i]] = static_cast<int>(i);
    struct Constraint {
        int from, g, to;
    };
    std::vector<std::vector<Constraint>> checks(low.size());  // keyed by the later slot
    for (int f : low)
        for (int g : homs.out[c.arrows[f].dst]) {
            if (c.degree[c.arrows[g].dst] > n) continue;
            Constraint k{slot[f], g, slot[c.comp[g][f]]};
            checks[std::max(k.from, k.to)].push_back(k);
        }
    std::map<std::vector<int>, int> families;
    std::vector<int> cur(low.size(), -1);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == low.size()) {
            families.emplace(cur, static_cast<int>(families.size()));
            return;
        }
        for (int y = 0; y < x.size[c.arrows[low[i]].dst]; ++y) {
            cur[i] = y;
            bool ok = true;
            for (const auto& k : checks[i]) ok = ok && cur[k.to] == x.map[k.g][cur[k.from]];
            if (ok) rec(i + 1);
        }
        cur[i] = -1;
    };
    rec(0);
    // Number the families in lexicographic order.
    int k = 0;
    for (auto& [fam, id] : families) id = k++;
    lm.matching = static_cast<int>(families.size());
    for (int v = 0; v < x.size[r]; ++v) {
        std::vector<int> fam;
        for (int f : low) fam.push_back(x.map[f][v]);
        lm.matching_map.push_back(families.at(fam));
    }
    return lm;
}

NatTrans generator_object(const GenReedyCat& c, int r, const ArrowGroup& h) {
    SetFunctor rep = representable(c, r);
    NatTrans sk = skeleton(c, rep, c.degree[r] - 1);
    // Position of each arrow out of r inside rep.
    std::vector<int> pos(c.arrow_count(), -1);
    std::vector<std::vector<int>> at(c.object_count());
    for (int f = 0; f < c.arrow_count(); ++f)
        if (c.arrows[f].src == r) {
            pos[f] = static_cast<int>(at[c.arrows[f].dst].size());
            at[c.arrows[f].dst].push_back(f);
        }
    auto quotient = [&](const SetFunctor& x, const std::function<int(int, int, int)>& act, std::vector<std::vector<int>>& cls) {
        SetFunctor q;
        q.size.resize(c.object_count());
        cls.resize(c.object_count());
        for (int s = 0; s < c.object_count(); ++s) {
            UnionFind uf(x.size[s]);
            for (int a : h)
                for (int v = 0; v < x.size[s]; ++v) uf.unite(v, act(s, a, v));
            cls[s] = uf.classes(q.size[s]);
        }
        q.map.resize(c.arrow_count());
        for (int g = 0; g < c.arrow_count(); ++g) {
            int s = c.arrows[g].src, t = c.arrows[g].dst;
            q.map[g].assign(q.size[s], -1);
            for (int v = 0; v < x.size[s]; ++v) q.map[g][cls[s][v]] = cls[t][x.map[g][v]];
        }
        return q;
    };
    auto act_rep = [&](int s, int a, int v) { return pos[c.comp[at[s][v]][a]]; };
    std::vector<std::vector<int>> rep_cls, sk_cls;
    NatTrans out;
    out.target = quotient(rep, act_rep, rep_cls);
    // On the skeleton, h acts on the representable part of each element (f, y).
    Homs homs(c);
    std::vector<Colimit> cols;
    for (int s = 0; s < c.object_count(); ++s) cols.push_back(colimit_at(c, homs, rep, s, c.degree[r] - 1));
    auto act_sk = [&](int s, int a, int v) {
        const Colimit& col = cols[s];
        for (std::size_t i = 0; i < col.elems.size(); ++i)
            if (col.cls[i] == v) {
                auto [f, y] = col.elems[i];
                int shifted = pos[c.comp[at[c.arrows[f].src][y]][a]];
                return col.cls[col.index.at({f, shifted})];
            }
        return v;
    };
    out.source = quotient(sk.source, act_sk, sk_cls);
    out.at.resize(c.object_count());
    for (int s = 0; s < c.object_count(); ++s) {
        out.at[s].assign(out.source.size[s], -1);
        for (int v = 0; v < sk.source.size[s]; ++v) out.at[s][sk_cls[s][v]] = rep_cls[s][sk.at[s][v]];
    }
    return out;
}

bool is_injective(const NatTrans& m) {
    for (const auto& row : m.at) {
        std::set<int> seen(row.begin(), row.end());
        if (seen.size() != row.size()) return false;
    }
    return true;
}

}  // namespace dendro
