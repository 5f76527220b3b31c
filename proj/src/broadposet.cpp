#include "dendro/broadposet.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace dendro {

Tree::Tree() : names_{"x"}, parent_{-1}, leaf_{true}, kids_(1), down_{1} {}

Tree Tree::from_children(const std::vector<std::string>& names,
                         const std::vector<std::optional<std::vector<int>>>& kids, int root) {
    const int n = static_cast<int>(names.size());
    if (n == 0) throw Error(ErrorKind::InvalidInput, "tree has no edges");
    if (n > kMaxEdges) throw Error(ErrorKind::InvalidInput, "tree has more than 64 edges");
    std::vector<int> order;
    order.reserve(n);
    std::vector<int> stack{root};
    while (!stack.empty()) {
        int e = stack.back();
        stack.pop_back();
        order.push_back(e);
        if (kids[e]) {
            for (auto it = kids[e]->rbegin(); it != kids[e]->rend(); ++it) stack.push_back(*it);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        throw Error(ErrorKind::CycleDetected, "edges unreachable from the root");
    }
    std::vector<int> pos(n);
    for (int i = 0; i < n; ++i) pos[order[i]] = i;

    Tree t;
    t.names_.resize(n);
    t.parent_.assign(n, -1);
    t.leaf_.assign(n, true);
    t.kids_.assign(n, {});
    t.down_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        int e = order[i];
        t.names_[i] = names[e];
        if (kids[e]) {
            t.leaf_[i] = false;
            for (int c : *kids[e]) {
                t.kids_[i].push_back(pos[c]);
                t.parent_[pos[c]] = i;
            }
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        t.down_[i] = bit(i);
        for (int c : t.kids_[i]) t.down_[i] |= t.down_[c];
    }
    return t;
}

Tree Tree::validate(const RawTree& raw) {
    const int n = static_cast<int>(raw.edges.size());
    if (n == 0) throw Error(ErrorKind::InvalidInput, "tree has no edges");
    std::unordered_map<std::string, int> index;
    for (int i = 0; i < n; ++i) {
        if (!index.emplace(raw.edges[i], i).second) {
            throw Error(ErrorKind::InvalidInput, "edge '" + raw.edges[i] + "' declared twice");
        }
    }
    std::vector<std::optional<std::vector<int>>> kids(n);
    std::vector<int> parent(n, -1);
    for (const auto& [v, children] : raw.vertices) {
        auto it = index.find(v);
        if (it == index.end()) throw Error(ErrorKind::OrphanEdge, "vertex at undeclared edge '" + v + "'");
        if (kids[it->second]) throw Error(ErrorKind::InvalidInput, "two vertices at edge '" + v + "'");
        std::vector<int> list;
        for (const auto& c : children) {
            auto jt = index.find(c);
            if (jt == index.end()) throw Error(ErrorKind::OrphanEdge, "child '" + c + "' is not a declared edge");
            if (parent[jt->second] != -1) {
                throw Error(ErrorKind::DuplicateChild, "edge '" + c + "' occurs in more than one child slot");
            }
            parent[jt->second] = it->second;
            list.push_back(jt->second);
        }
        kids[it->second] = std::move(list);
    }
    std::vector<int> parentless;
    for (int i = 0; i < n; ++i)
        if (parent[i] == -1) parentless.push_back(i);
    if (parentless.empty()) throw Error(ErrorKind::CycleDetected, "every edge has a parent");
    if (parentless.size() > 1) {
        throw Error(ErrorKind::MultipleRoots, "edges '" + raw.edges[parentless[0]] + "' and '" +
                                                  raw.edges[parentless[1]] + "' both lack a parent");
    }
    int root = parentless[0];
    if (!raw.root.empty()) {
        auto it = index.find(raw.root);
        if (it == index.end()) throw Error(ErrorKind::OrphanEdge, "root '" + raw.root + "' is not declared");
        if (it->second != root) {
            throw Error(ErrorKind::MultipleRoots,
                        "declared root '" + raw.root + "' has a parent; '" + raw.edges[root] + "' is parentless");
        }
    }
    return from_children(raw.edges, kids, root);
}

int Tree::find(std::string_view name) const {
    for (int i = 0; i < size(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

EdgeSet Tree::all() const { return down_[0]; }

EdgeSet Tree::leaves() const {
    EdgeSet s = 0;
    for (int i = 0; i < size(); ++i)
        if (leaf_[i]) s |= bit(i);
    return s;
}

EdgeSet Tree::inner() const { return all() & ~leaves() & ~bit(0); }

EdgeSet Tree::stumps() const {
    EdgeSet s = 0;
    for (int i = 0; i < size(); ++i)
        if (is_stump(i)) s |= bit(i);
    return s;
}

EdgeSet Tree::nodes() const { return all() & ~leaves() & ~stumps(); }

std::vector<int> Tree::leaf_tuple() const { return bits(leaves()); }

int Tree::degree() const { return size() - count(leaves()); }

std::vector<BroadRelation> Tree::generators() const {
    std::vector<BroadRelation> out;
    for (int e = 0; e < size(); ++e)
        if (!leaf_[e]) out.push_back({kids_[e], e});
    return out;
}

RawTree Tree::raw() const {
    RawTree r;
    r.edges = names_;
    r.root = names_[0];
    for (int e = 0; e < size(); ++e) {
        if (leaf_[e]) continue;
        std::vector<std::string> c;
        for (int k : kids_[e]) c.push_back(names_[k]);
        r.vertices.emplace_back(names_[e], std::move(c));
    }
    return r;
}

std::string Tree::planar_code() const {
    std::function<std::string(int)> rec = [&](int e) -> std::string {
        if (leaf_[e]) return "|";
        std::string s = "(";
        for (int c : kids_[e]) s += rec(c);
        return s + ")";
    };
    return rec(0);
}

std::string Tree::shape_code(int e) const {
    if (leaf_[e]) return "|";
    std::vector<std::string> parts;
    for (int c : kids_[e]) parts.push_back(shape_code(c));
    std::sort(parts.begin(), parts.end());
    std::string s = "(";
    for (auto& p : parts) s += p;
    return s + ")";
}

std::string Tree::shape_code() const { return shape_code(0); }

bool Tree::operator==(const Tree& o) const {
    return names_ == o.names_ && leaf_ == o.leaf_ && kids_ == o.kids_;
}

Forest Forest::validate(const std::vector<RawTree>& raws) {
    Forest f;
    std::set<std::string> seen;
    for (const auto& r : raws) {
        f.components.push_back(Tree::validate(r));
        for (const auto& nm : f.components.back().names()) {
            if (!seen.insert(nm).second) {
                throw Error(ErrorKind::InvalidInput, "edge '" + nm + "' occurs in two components");
            }
        }
    }
    return f;
}

Tree validate_tree(const RawTree& raw) { return Tree::validate(raw); }

std::vector<BroadRelation> broad_closure(const Tree& t) {
    std::set<BroadRelation> rel;
    for (int e = 0; e < t.size(); ++e) rel.insert({{e}, e});
    const auto gens = t.generators();
    std::vector<std::vector<BroadRelation>> gen_at(t.size());
    for (const auto& g : gens) {
        rel.insert(g);
        gen_at[g.target].push_back(g);
    }
    std::vector<BroadRelation> frontier(rel.begin(), rel.end());
    while (!frontier.empty()) {
        std::vector<BroadRelation> next;
        for (const auto& r : frontier) {
            for (std::size_t i = 0; i < r.source.size(); ++i) {
                for (const auto& g : gen_at[r.source[i]]) {
                    BroadRelation n;
                    n.target = r.target;
                    n.source.insert(n.source.end(), r.source.begin(), r.source.begin() + i);
                    n.source.insert(n.source.end(), g.source.begin(), g.source.end());
                    n.source.insert(n.source.end(), r.source.begin() + i + 1, r.source.end());
                    if (rel.insert(n).second) next.push_back(std::move(n));
                }
            }
        }
        frontier = std::move(next);
    }
    return {rel.begin(), rel.end()};
}

bool is_broad_relation(const Tree& t, const std::vector<int>& tuple, int target) {
    EdgeSet seen = 0;
    EdgeSet covered = 0;
    for (int x : tuple) {
        if (x < 0 || x >= t.size() || has(seen, x) || !t.leq(x, target)) return false;
        seen |= bit(x);
    }
    for (int x : tuple) {
        if (t.down(x) & seen & ~bit(x)) return false;
        covered |= t.down(x);
    }
    return subset(t.leaves() & t.down(target), covered);
}

EdgeClasses classify_edges(const Tree& t) {
    return {t.root(), t.leaves(), t.inner(), t.nodes(), t.stumps()};
}

int degree(const Tree& t) { return t.degree(); }

std::string format_relation(const Tree& t, const BroadRelation& r) {
    std::string s;
    for (int x : r.source) {
        if (!s.empty()) s += ' ';
        s += t.name(x);
    }
    if (r.source.empty()) s = "ε";
    return s + " <= " + t.name(r.target);
}

Tree stick(const std::string& name) {
    return Tree::from_children({name}, {std::nullopt}, 0);
}

Tree corolla(int n, const std::string& root, const std::string& leaf_prefix) {
    std::vector<std::string> names{root};
    std::vector<std::optional<std::vector<int>>> kids(1 + n);
    kids[0] = std::vector<int>{};
    for (int i = 1; i <= n; ++i) {
        names.push_back(leaf_prefix + std::to_string(i));
        kids[0]->push_back(i);
    }
    return Tree::from_children(names, kids, 0);
}

Tree linear(int n) {
    std::vector<std::string> names;
    std::vector<std::optional<std::vector<int>>> kids(n + 1);
    for (int i = 0; i <= n; ++i) {
        names.push_back(std::to_string(i));
        if (i < n) kids[i] = std::vector<int>{i + 1};
    }
    return Tree::from_children(names, kids, 0);
}

namespace {

// Shapes as child-code lists: a shape is either a leaf or a vertex with a sorted
// multiset of child shapes.
struct Shape {
    bool leaf = true;
    std::vector<int> kids;  // indices into the shape table
    int degree = 0;
};

void build_tree(const std::vector<Shape>& shapes, int s, std::vector<std::string>& names,
                std::vector<std::optional<std::vector<int>>>& kids) {
    int me = static_cast<int>(names.size());
    names.push_back("e" + std::to_string(me));
    kids.emplace_back();
    if (shapes[s].leaf) return;
    std::vector<int> list;
    for (int c : shapes[s].kids) {
        list.push_back(static_cast<int>(names.size()));
        build_tree(shapes, c, names, kids);
    }
    kids[me] = std::move(list);
}

}  // namespace

std::vector<Tree> enumerate_trees(int max_degree, int max_arity) {
    // Shapes by degree; shape 0 is the leaf.
    std::vector<Shape> shapes{Shape{}};
    std::vector<std::vector<int>> by_degree(max_degree + 1);
    by_degree[0].push_back(0);
    for (int d = 1; d <= max_degree; ++d) {
        for (int a = 0; a <= max_arity; ++a) {
            // Non-decreasing sequences of shape indices with total degree d - 1.
            std::vector<int> pick;
            // Only shapes of smaller degree exist when this runs, so indices are stable.
            const int limit = static_cast<int>(shapes.size());
            std::function<void(int, int)> rec = [&](int start, int remaining) {
                if (static_cast<int>(pick.size()) == a) {
                    if (remaining == 0) {
                        Shape s;
                        s.leaf = false;
                        s.kids = pick;
                        s.degree = d;
                        shapes.push_back(s);
                        by_degree[d].push_back(static_cast<int>(shapes.size()) - 1);
                    }
                    return;
                }
                for (int idx = start; idx < limit; ++idx) {
                    if (shapes[idx].degree > remaining || shapes[idx].degree >= d) continue;
                    pick.push_back(idx);
                    rec(idx, remaining - shapes[idx].degree);
                    pick.pop_back();
                }
            };
            rec(0, d - 1);
        }
    }
    std::vector<Tree> out;
    for (int d = 0; d <= max_degree; ++d) {
        for (int s : by_degree[d]) {
            std::vector<std::string> names;
            std::vector<std::optional<std::vector<int>>> kids;
            build_tree(shapes, s, names, kids);
            out.push_back(normal_form(Tree::from_children(names, kids, 0)).first);
        }
    }
    return out;
}

bool isomorphic(const Tree& a, const Tree& b) { return a.shape_code() == b.shape_code(); }

namespace {

// All isomorphisms from the subtree of a at ea onto the subtree of b at eb, written into
// full-size maps (entries outside the subtree are left untouched).
void subtree_isos(const Tree& a, int ea, const Tree& b, int eb, std::vector<int>& cur,
                  const std::function<void()>& emit) {
    cur[ea] = eb;
    if (a.is_leaf(ea)) {
        emit();
        return;
    }
    const auto& ka = a.children(ea);
    const auto& kb = b.children(eb);
    std::vector<bool> used(kb.size(), false);
    std::function<void(std::size_t)> match = [&](std::size_t i) {
        if (i == ka.size()) {
            emit();
            return;
        }
        const std::string code = a.shape_code(ka[i]);
        for (std::size_t j = 0; j < kb.size(); ++j) {
            if (used[j] || b.shape_code(kb[j]) != code) continue;
            used[j] = true;
            subtree_isos(a, ka[i], b, kb[j], cur, [&] { match(i + 1); });
            used[j] = false;
        }
    };
    match(0);
}

}  // namespace

std::vector<std::vector<int>> isomorphisms(const Tree& a, const Tree& b) {
    std::vector<std::vector<int>> out;
    if (a.size() != b.size() || a.shape_code() != b.shape_code()) return out;
    std::vector<int> cur(a.size(), -1);
    subtree_isos(a, 0, b, 0, cur, [&] { out.push_back(cur); });
    return out;
}

std::vector<std::vector<int>> automorphisms(const Tree& t) { return isomorphisms(t, t); }

std::pair<Tree, std::vector<int>> normal_form(const Tree& t) {
    std::vector<std::optional<std::vector<int>>> kids(t.size());
    for (int e = 0; e < t.size(); ++e) {
        if (t.is_leaf(e)) continue;
        std::vector<int> c = t.children(e);
        std::stable_sort(c.begin(), c.end(),
                         [&](int x, int y) { return t.shape_code(x) < t.shape_code(y); });
        kids[e] = std::move(c);
    }
    Tree nf = Tree::from_children(t.names(), kids, 0);
    // Recover the renumbering by replaying the same depth-first order.
    std::vector<int> map(t.size(), -1);
    int next = 0;
    std::function<void(int)> rec = [&](int e) {
        map[e] = next++;
        if (kids[e])
            for (int c : *kids[e]) rec(c);
    };
    rec(0);
    return {std::move(nf), std::move(map)};
}

}  // namespace dendro
