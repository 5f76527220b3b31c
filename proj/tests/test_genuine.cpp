#include <algorithm>
#include <random>

#include "doctest.h"
#include "dendro/genuine.hpp"
#include "fixtures.hpp"

using namespace dendro;
using fixtures::make_tree;

namespace {

ErrorKind kind_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::InvalidInput;
}

std::vector<bool> flags(const FiniteGroup& g, const std::vector<std::string>& on) {
    std::vector<bool> out(g.order(), false);
    for (const auto& n : on) out[g.find(n)] = true;
    return out;
}

// Image of a dendrex of a tree nerve: the face spanned by the colors.
Subtree image_face(const NervePresheaf& y, const Tree& u, int x) {
    auto d = y.decode(u, x);
    Subtree s;
    for (int e = 0; e < u.size(); ++e) {
        s.edges |= bit(d.colors[e]);
        if (u.is_leaf(e)) s.leaves |= bit(d.colors[e]);
    }
    return s;
}

// Subtree of an orbital subforest carried into the ambient.
Subtree carry(const OrbitalTree& o, const Subtree& s) {
    Subtree out;
    for (int e : bits(s.edges)) out.edges |= bit(o.to_ambient[e]);
    for (int e : bits(s.leaves)) out.leaves |= bit(o.to_ambient[e]);
    return out;
}

std::vector<int> restrict_family(const Sections& from, const Sections& to_members_src,
                                 const std::function<Subtree(const Subtree&)>& to_from) {
    std::vector<int> out;
    for (const auto& m : to_members_src.members) {
        auto it = std::find(from.members.begin(), from.members.end(), to_from(m));
        out.push_back(static_cast<int>(it - from.members.begin()));
    }
    return out;
}

std::vector<std::shared_ptr<const SetOperad>> builtin_operads(const FiniteGroup& g) {
    std::vector<std::string> odd;
    if (g.order() == 2) odd = {g.name(1)};
    std::vector<std::shared_ptr<const SetOperad>> out{
        std::make_shared<CommutativeOperad>(g), std::make_shared<AssociativeOperad>(g, flags(g, odd)),
        std::make_shared<CyclicMonoidOperad>(3, g, flags(g, odd)), std::make_shared<MaxOperad>(g)};
    if (g.order() == 1) out.push_back(std::make_shared<TreeOperad>(GForest::trivial(fixtures::first_tree())));
    if (g.order() == 2) out.push_back(std::make_shared<TreeOperad>(fixtures::z2_horn_tree()));
    return out;
}

// Associativity broken: composition always returns the first operation of Z/3.
class BrokenOperad : public CyclicMonoidOperad {
public:
    BrokenOperad() : CyclicMonoidOperad(3) {}
    int compose(const Signature&, int p, int, const Signature&, int q) const override { return (p + 2 * q) % 3; }
};

}  // namespace

TEST_CASE("terminal operad nerve is the point") {
    auto y = nerve(std::make_shared<CommutativeOperad>());
    for (const auto& t : enumerate_trees(3, 3)) CHECK(y->cardinality(t) == 1);
}

TEST_CASE("tree operad nerve counts tree maps") {
    Tree c2 = corolla(2);
    auto y = nerve(std::make_shared<TreeOperad>(GForest::trivial(c2)));
    CHECK(y->cardinality(c2) == 2);
    // Oracle: brute-force enumeration of monotone maps.
    for (const Tree& target : {c2, linear(2), fixtures::first_tree()}) {
        auto n = nerve(std::make_shared<TreeOperad>(GForest::trivial(target)), 1);
        for (const auto& u : enumerate_trees(2, 3))
            CHECK_MESSAGE(n->cardinality(u) == static_cast<int>(monotone_maps(u, target).size()), format_tree(u));
    }
}

TEST_CASE("operad axioms") {
    for (const auto& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(2)})
        for (const auto& o : builtin_operads(g)) CHECK_NOTHROW(verify_operad(*o, 3));
    CHECK(kind_of([] { verify_operad(BrokenOperad()); }) == ErrorKind::AxiomViolation);
    // Reversal by every element of Z/3 is not an action.
    auto z3 = FiniteGroup::cyclic(3);
    AssociativeOperad bad(z3, {false, true, true});
    CHECK(kind_of([&] { verify_operad(bad); }) == ErrorKind::AxiomViolation);
    CHECK(AssociativeOperad::index(AssociativeOperad::word(4, 17)) == 17);
}

TEST_CASE("nerve restrictions are functorial and equivariant") {
    std::mt19937 rng(7);
    auto z2 = FiniteGroup::cyclic(2);
    for (const auto& g : {FiniteGroup::trivial(), z2})
        for (const auto& o : builtin_operads(g)) {
            auto y = nerve(o);
            for (const auto& u : enumerate_trees(3, 3)) {
                auto faces = faces_of(u.down_sets(), whole(u));
                const int card = y->cardinality(u);
                if (card == 0) continue;
                for (int trial = 0; trial < 4; ++trial) {
                    Subtree v = faces[rng() % faces.size()];
                    auto vfaces = faces_of(u.down_sets(), v);
                    Subtree w = vfaces[rng() % vfaces.size()];
                    auto vt = subtree_tree(u.down_sets(), u.names(), v);
                    auto wt = subtree_tree(u.down_sets(), u.names(), w);
                    std::vector<int> fv(vt.to_ambient), fw(wt.to_ambient), fwv;
                    for (int e : wt.to_ambient) fwv.push_back(vt.local(e));
                    int x = static_cast<int>(rng() % card);
                    int direct = y->restrict(u, wt.tree, fw, x);
                    int twice = y->restrict(vt.tree, wt.tree, fwv, y->restrict(u, vt.tree, fv, x));
                    CHECK(direct == twice);
                    for (int h = 0; h < g.order(); ++h)
                        CHECK(y->act(h, wt.tree, direct) == y->restrict(u, wt.tree, fw, y->act(h, u, x)));
                }
                for (const auto& s : automorphisms(u))
                    for (int x = 0; x < std::min(card, 5); ++x) CHECK(y->restrict(u, u, s, y->restrict(u, u, s, x)) ==
                                                                       y->restrict(u, u, [&] {
                                                                           std::vector<int> ss(u.size());
                                                                           for (int e = 0; e < u.size(); ++e) ss[e] = s[s[e]];
                                                                           return ss;
                                                                       }(), x));
            }
        }
}

TEST_CASE("strict Segal check") {
    Truncation tr{2, 2, {}};
    CHECK(strict_segal_check(ConstantPresheaf(1), tr).pass);
    CHECK(strict_segal_check(ConstantPresheaf(3), tr).pass);
    PerturbedPresheaf bumped(1, linear(2));
    SegalReport r = strict_segal_check(bumped, tr);
    CHECK_FALSE(r.pass);
    REQUIRE(r.failures.size() == 1);
    for (const auto& t : tr.trees())
        if (t.shape_code() == linear(2).shape_code()) CHECK(r.failures[0].tree == format_tree(t));
    CHECK(r.failures[0].witness.find("two fillers") != std::string::npos);

    for (const auto& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(2)}) {
        Truncation t3{3, 3, g};
        for (const auto& o : builtin_operads(g)) CHECK_MESSAGE(strict_segal_check(*nerve(o), t3, 4).pass, o->name());
    }
}

TEST_CASE("truncated presheaves report faces outside the window") {
    auto point = std::make_shared<ConstantPresheaf>(1);
    TruncatedPresheaf small(point, 3, 2);
    // Inner faces of binary trees have ternary vertices.
    CHECK(kind_of([&] { strict_segal_check(small, Truncation{3, 2, {}}); }) == ErrorKind::TruncationTooSmall);
    TruncatedPresheaf wide(point, 3, 4);
    CHECK(strict_segal_check(wide, Truncation{3, 2, {}}).pass);
}

TEST_CASE("quaternion grafting pullback") {
    GForest t = fixtures::quaternion_tree();
    const auto& q = t.group();
    EdgeSet gc = t.orbit(t.find("c"));
    Subtree r1, r2;
    for (int comp = 0; comp < t.components(); ++comp) {
        Subtree w = t.component_subtree(comp);
        int root = subtree_root(t.down(), w);
        Subtree lower = outer_face_of(t.down(), w, root, gc & w.edges);
        r1.edges |= lower.edges;
        r1.leaves |= lower.leaves;
        for (int x : bits(gc & w.edges)) {
            Subtree upper = outer_face_of(t.down(), w, x, w.leaves & t.down()[x]);
            r2.edges |= upper.edges;
            r2.leaves |= upper.leaves;
        }
    }
    REQUIRE(is_orbital_face(t, r1));
    REQUIRE(is_orbital_face(t, r2));
    OrbitalTree o1 = orbital_subforest(t, r1), o2 = orbital_subforest(t, r2);
    CHECK(o1.forest.components() == 2);
    CHECK(o2.forest.components() == 4);

    ConstantPresheaf constant(2, q);
    AssociativeOperad ass(q, flags(q, {"j", "-j", "k", "-k"}));
    auto ass_nerve = nerve(std::make_shared<AssociativeOperad>(ass));
    std::vector<const Presheaf*> cases{&constant, ass_nerve.get()};
    for (const Presheaf* y : cases) {
        Sections zt = sections(*y, Complex::full(ambient_of(t)));
        Sections z1 = sections(*y, Complex::full(ambient_of(o1.forest)));
        Sections z2 = sections(*y, Complex::full(ambient_of(o2.forest)));
        CHECK(zt.families.size() == upsilon_star(*y, t).size());
        // The sticks of Gc, seen from each piece.
        auto stick_values = [&](const Sections& z, const OrbitalTree& o, const std::vector<int>& fam) {
            std::vector<int> vals;
            for (int e : bits(gc)) {
                int local = static_cast<int>(std::find(o.to_ambient.begin(), o.to_ambient.end(), e) - o.to_ambient.begin());
                Subtree stick{bit(local), bit(local)};
                auto it = std::find(z.members.begin(), z.members.end(), stick);
                vals.push_back(fam[it - z.members.begin()]);
            }
            return vals;
        };
        std::set<std::pair<int, int>> pullback;
        for (std::size_t i = 0; i < z1.families.size(); ++i)
            for (std::size_t j = 0; j < z2.families.size(); ++j)
                if (stick_values(z1, o1, z1.families[i]) == stick_values(z2, o2, z2.families[j]))
                    pullback.insert({static_cast<int>(i), static_cast<int>(j)});
        // Z(T) -> Z(R1) x_{Z(G/K.eta)} Z(R2) is a bijection.
        auto idx1 = restrict_family(zt, z1, [&](const Subtree& s) { return carry(o1, s); });
        auto idx2 = restrict_family(zt, z2, [&](const Subtree& s) { return carry(o2, s); });
        std::set<std::pair<int, int>> hit;
        for (const auto& fam : zt.families) {
            std::vector<int> f1, f2;
            for (int k : idx1) f1.push_back(fam[k]);
            for (int k : idx2) f2.push_back(fam[k]);
            int i = static_cast<int>(std::find(z1.families.begin(), z1.families.end(), f1) - z1.families.begin());
            int j = static_cast<int>(std::find(z2.families.begin(), z2.families.end(), f2) - z2.families.begin());
            REQUIRE(i < static_cast<int>(z1.families.size()));
            REQUIRE(j < static_cast<int>(z2.families.size()));
            CHECK(hit.insert({i, j}).second);
        }
        CHECK(hit == pullback);
        CHECK(strict_lift(*y, segal_core(t)).pass);
    }
    CHECK(upsilon_star(constant, t).size() == 2);
    // At the lower corolla j swaps the two leaves and reverses the order, fixing both orderings.
    CHECK(upsilon_star(*ass_nerve, o1.forest).size() == 2);
    auto plain_ass = nerve(std::make_shared<AssociativeOperad>(q));
    CHECK(upsilon_star(*plain_ass, o1.forest).empty());
}

TEST_CASE("upsilon star fixed points") {
    auto z2 = FiniteGroup::cyclic(2);
    // X = Omega[G/1 . eta]: two edges swapped.
    Forest two{{stick("x"), stick("-x")}};
    GForest free_eta(z2, two, {{0, 1}, {1, 0}});
    auto x = nerve(std::make_shared<TreeOperad>(free_eta), 1);
    GForest fixed_eta(z2, Forest{{stick()}}, {{0}, {0}});
    CHECK(x->cardinality(stick()) == 2);
    CHECK(upsilon_star(*x, fixed_eta).empty());
    CHECK(upsilon_star(*x, free_eta).size() == 2);

    // The quaternion tree has no G-fixed edge.
    GForest t = fixtures::quaternion_tree();
    auto omega_t = nerve(std::make_shared<TreeOperad>(t), 1);
    GForest point(t.group(), Forest{{stick()}}, std::vector<Perm>(8, Perm{0}));
    CHECK(upsilon_star(*omega_t, point).empty());
    // Oracle: equivariant maps T_* -> T by brute force over monotone maps into each component.
    Subtree c0 = t.component_subtree(0);
    ElemSet h = t.isotropy(c0);
    std::size_t equivariant = 0;
    for (int c = 0; c < t.components(); ++c)
        for (const auto& f : monotone_maps(t.component(0), t.component(c))) {
            bool ok = true;
            for (int g : bits(h))
                for (int e = 0; e < t.component(0).size(); ++e)
                    ok = ok && t.global(c, f[t.local(t.act(g, e))]) == t.act(g, t.global(c, f[e]));
            equivariant += ok;
        }
    CHECK(upsilon_star(*omega_t, t).size() == equivariant);

    // Fixed points agree with G-sections over the full tree.
    for (const auto& o : builtin_operads(z2)) {
        auto y = nerve(o);
        for (const auto& u : small_gforests(2, 2)) {
            if (u.group().order() != 2) continue;
            CHECK(upsilon_star(*y, u).size() == sections(*y, Complex::full(ambient_of(u))).families.size());
        }
    }
}

TEST_CASE("upsilon star of a Segal core splits along a grafting") {
    GForest t = fixtures::z2_horn_tree();
    auto omega = nerve(std::make_shared<TreeOperad>(t), 1);
    Down down = t.down();
    Subtree whole_t = t.component_subtree(0);
    EdgeSet gb = fixtures::gmask(t, {"b", "-b"});
    // R below Gb, S the two corollas above it.
    Subtree r = outer_face_of(down, whole_t, t.find("d"), gb);
    auto amb = ambient_of(t);
    std::vector<Subtree> r_gens, s_gens, eta_gens;
    for (const auto& g : segal_core_generators(t)) {
        if (subset(g.edges, r.edges)) r_gens.push_back(g);
        if (subset(g.edges, down[t.find("b")] | down[t.find("-b")])) s_gens.push_back(g);
    }
    for (int e : bits(gb)) eta_gens.push_back({bit(e), bit(e)});
    Complex sc = segal_core(t), sc_r = Complex::generated(amb, r_gens), sc_s = Complex::generated(amb, s_gens),
            eta = Complex::generated(amb, eta_gens);
    int nonempty = 0;
    for (const auto& u : Truncation{2, 2, t.group()}.gtrees()) {
        std::set<int> a, b, c, d;
        Tree ut = subtree_tree(u.down(), u.names(), u.component_subtree(0)).tree;
        for (int x : upsilon_star(*omega, u)) {
            Subtree im = image_face(*omega, ut, x);
            if (sc.contains(im)) a.insert(x);
            if (sc_r.contains(im)) b.insert(x);
            if (sc_s.contains(im)) c.insert(x);
            if (eta.contains(im)) d.insert(x);
        }
        std::set<int> cup = b, cap;
        cup.insert(c.begin(), c.end());
        std::set_intersection(b.begin(), b.end(), c.begin(), c.end(), std::inserter(cap, cap.begin()));
        CHECK(a == cup);
        CHECK(cap == d);
        nonempty += !a.empty();
    }
    CHECK(nonempty > 0);
}

TEST_CASE("lifting equivalence suite") {
    Truncation t3{3, 3, {}};
    LiftingSuite point = lifting_equivalence_suite(ConstantPresheaf(1), t3);
    CHECK((point.segal && point.generating && point.horns && point.orbital));

    LiftingSuite bumped = lifting_equivalence_suite(PerturbedPresheaf(1, linear(2)), t3);
    CHECK_FALSE(bumped.segal);
    CHECK(bumped.all_equal());
    CHECK_FALSE(bumped.witnesses.empty());

    auto first = nerve(std::make_shared<TreeOperad>(GForest::trivial(fixtures::first_tree())));
    LiftingSuite s = lifting_equivalence_suite(*first, t3, 4);
    CHECK((s.segal && s.generating && s.horns && s.orbital));

    auto z2 = FiniteGroup::cyclic(2);
    Truncation t2{2, 2, z2};
    for (const auto& o : builtin_operads(z2)) {
        LiftingSuite r = lifting_equivalence_suite(*nerve(o), t2, 4);
        CHECK_MESSAGE((r.segal && r.generating && r.horns && r.orbital), o->name());
    }
    LiftingSuite zb = lifting_equivalence_suite(PerturbedPresheaf(2, linear(2), z2), t2);
    CHECK(zb.all_equal());
    CHECK_FALSE(zb.horns);
}

TEST_CASE("normality of inclusions") {
    Truncation tr{3, 3, {}};
    for (const Tree& target : {corolla(2), fixtures::first_tree()}) {
        auto omega = nerve(std::make_shared<TreeOperad>(GForest::trivial(target)), 1);
        EdgeSet all = target.all();
        auto in_boundary = [&](const Tree& u, int x) { return image_face(*omega, u, x).edges != all; };
        CHECK(is_normal(*omega, in_boundary, tr).pass);
        CHECK(is_normal(*omega, [](const Tree&, int) { return true; }, tr).pass);
    }
    auto point = nerve(std::make_shared<CommutativeOperad>());
    NormalCheck bad = is_normal(*point, [](const Tree&, int) { return false; }, tr);
    CHECK_FALSE(bad.pass);
    CHECK_FALSE(bad.witness.empty());
}

TEST_CASE("truncation G-trees") {
    Truncation plain{2, 2, {}};
    CHECK(plain.gtrees().size() == plain.trees().size());
    // Oracle: small_gforests lists each tree with the trivial action, each involution and the
    // doubled forest, which are the Z/2-trees G .(H) t for H = G and H = 1.
    Truncation signed_tr{2, 2, FiniteGroup::cyclic(2)};
    auto gtrees = signed_tr.gtrees();
    CHECK(gtrees.size() == small_gforests(2, 2).size());
    for (const auto& g : gtrees) CHECK(g.is_gtree());
}
