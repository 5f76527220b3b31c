#include "dendro/genuine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <numeric>
#include <set>
#include <thread>

namespace dendro {

namespace {

int max_arity(const Tree& t) {
    int k = 0;
    for (int e = 0; e < t.size(); ++e) k = std::max(k, static_cast<int>(t.children(e).size()));
    return k;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string show_sig(const SetOperad& o, const Signature& s) {
    std::vector<std::string> ins;
    for (int c : s.ins) ins.push_back(o.show_color(c));
    return "(" + join(ins, ",") + ";" + o.show_color(s.out) + ")";
}

// Runs f(i) for i in [0, n) on up to `jobs` threads and rethrows the first exception.
template <class F>
void parallel_for(int n, int jobs, F&& f) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs == 1) {
        for (int i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++) {
                try {
                    f(i);
                } catch (...) {
                    std::lock_guard lock(err_mu);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

}  // namespace

// ---- truncations ----

std::vector<Tree> Truncation::trees() const { return enumerate_trees(degree, arity); }

bool Truncation::contains(const Tree& t) const { return t.degree() <= degree && max_arity(t) <= arity; }

std::vector<GForest> Truncation::gtrees() const {
    std::vector<GForest> out;
    for (ElemSet h : group.subgroups()) {
        std::vector<int> gens;
        ElemSet span = bit(group.identity());
        for (int x : bits(h))
            if (!has(span, x)) {
                gens.push_back(x);
                span = group.generated(span | bit(x));
            }
        for (const Tree& t : trees()) {
            if (t.size() * (group.order() / count(h)) > kMaxEdges) continue;
            auto auts = automorphisms(t);
            std::set<std::vector<Perm>> seen;
            std::vector<std::size_t> pick(gens.size(), 0);
            while (true) {
                std::vector<std::pair<int, Perm>> assign;
                for (std::size_t i = 0; i < gens.size(); ++i) assign.emplace_back(gens[i], auts[pick[i]]);
                try {
                    auto act = derive_action(group, t.size(), assign, h);
                    if (seen.insert(act).second) out.push_back(induce(group, h, t, assign));
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::NotAnAction) throw;
                }
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == auts.size()) pick[i++] = 0;
                if (i == pick.size()) break;
            }
        }
    }
    return out;
}

// ---- presheaves ----

std::string Presheaf::show(const Tree&, int x) const { return std::to_string(x); }

ConstantPresheaf::ConstantPresheaf(int n, FiniteGroup g) : n_(n), group_(std::move(g)) {
    if (n < 0) throw Error(ErrorKind::InvalidInput, "negative cardinality");
}

PerturbedPresheaf::PerturbedPresheaf(int n, const Tree& at, FiniteGroup g)
    : n_(n), shape_(at.shape_code()), group_(std::move(g)) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "perturbation needs a value to restrict to");
}

int PerturbedPresheaf::cardinality(const Tree& u) const { return n_ + (u.shape_code() == shape_ ? 1 : 0); }

int PerturbedPresheaf::restrict(const Tree& u, const Tree& v, const std::vector<int>&, int x) const {
    if (x < n_) return x;
    return v.size() == u.size() ? n_ : 0;
}

TruncatedPresheaf::TruncatedPresheaf(std::shared_ptr<const Presheaf> base, int degree, int arity)
    : base_(std::move(base)), degree_(degree), arity_(arity) {}

void TruncatedPresheaf::check(const Tree& u) const {
    if (u.degree() > degree_ || max_arity(u) > arity_)
        throw Error(ErrorKind::TruncationTooSmall, format_tree(u) + " lies outside degree " + std::to_string(degree_) +
                                                       ", arity " + std::to_string(arity_));
}

int TruncatedPresheaf::cardinality(const Tree& u) const {
    check(u);
    return base_->cardinality(u);
}

int TruncatedPresheaf::restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const {
    check(u);
    check(v);
    return base_->restrict(u, v, f, x);
}

int TruncatedPresheaf::act(int g, const Tree& u, int x) const {
    check(u);
    return base_->act(g, u, x);
}

// ---- operads ----

Signature compose_signature(const Signature& p, int i, const Signature& q) {
    Signature out{{}, p.out};
    out.ins.insert(out.ins.end(), p.ins.begin(), p.ins.begin() + i);
    out.ins.insert(out.ins.end(), q.ins.begin(), q.ins.end());
    out.ins.insert(out.ins.end(), p.ins.begin() + i + 1, p.ins.end());
    return out;
}

Signature permute_signature(const Signature& s, const std::vector<int>& sigma) {
    Signature out{{}, s.out};
    for (int j : sigma) out.ins.push_back(s.ins[j]);
    return out;
}

std::string SetOperad::show_op(const Signature& s, int p) const { return show_sig(*this, s) + "#" + std::to_string(p); }

AssociativeOperad::AssociativeOperad(FiniteGroup g, std::vector<bool> reverses)
    : group_(std::move(g)), reverses_(std::move(reverses)) {
    if (reverses_.empty()) reverses_.assign(group_.order(), false);
    if (static_cast<int>(reverses_.size()) != group_.order())
        throw Error(ErrorKind::InvalidInput, "reversal flags must cover the group");
}

int AssociativeOperad::ops(const Signature& s) const {
    int n = 1;
    for (int k = 2; k <= static_cast<int>(s.ins.size()); ++k) n *= k;
    return n;
}

std::vector<int> AssociativeOperad::word(int n, int p) {
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<int> fact(n + 1, 1);
    for (int k = 1; k <= n; ++k) fact[k] = fact[k - 1] * k;
    std::vector<int> out;
    for (int k = n; k >= 1; --k) {
        int d = p / fact[k - 1];
        p %= fact[k - 1];
        out.push_back(pool[d]);
        pool.erase(pool.begin() + d);
    }
    return out;
}

int AssociativeOperad::index(const std::vector<int>& w) {
    int n = static_cast<int>(w.size());
    std::vector<int> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    int fact = 1, p = 0;
    std::vector<int> digits;
    for (int x : w) {
        auto it = std::find(pool.begin(), pool.end(), x);
        digits.push_back(static_cast<int>(it - pool.begin()));
        pool.erase(it);
    }
    for (int k = n - 1; k >= 0; --k) {
        p += digits[k] * fact;
        fact *= n - k;
    }
    return p;
}

int AssociativeOperad::compose(const Signature& ps, int p, int i, const Signature& qs, int q) const {
    const int m = static_cast<int>(qs.ins.size());
    std::vector<int> out;
    for (int t : word(static_cast<int>(ps.ins.size()), p)) {
        if (t < i) {
            out.push_back(t);
        } else if (t == i) {
            for (int u : word(m, q)) out.push_back(u + i);
        } else {
            out.push_back(t + m - 1);
        }
    }
    return index(out);
}

int AssociativeOperad::permute(const Signature& s, int p, const std::vector<int>& sigma) const {
    std::vector<int> inv(sigma.size());
    for (std::size_t j = 0; j < sigma.size(); ++j) inv[sigma[j]] = static_cast<int>(j);
    std::vector<int> out;
    for (int t : word(static_cast<int>(s.ins.size()), p)) out.push_back(inv[t]);
    return index(out);
}

int AssociativeOperad::act_op(int g, const Signature& s, int p) const {
    if (!reverses_[g]) return p;
    auto w = word(static_cast<int>(s.ins.size()), p);
    std::reverse(w.begin(), w.end());
    return index(w);
}

std::string AssociativeOperad::show_op(const Signature& s, int p) const {
    std::string out;
    for (int t : word(static_cast<int>(s.ins.size()), p)) out += "x" + std::to_string(t);
    return out.empty() ? "1" : out;
}

CyclicMonoidOperad::CyclicMonoidOperad(int n, FiniteGroup g, std::vector<bool> negates)
    : n_(n), group_(std::move(g)), negates_(std::move(negates)) {
    if (n < 1) throw Error(ErrorKind::InvalidInput, "cyclic monoid needs n >= 1");
    if (negates_.empty()) negates_.assign(group_.order(), false);
    if (static_cast<int>(negates_.size()) != group_.order())
        throw Error(ErrorKind::InvalidInput, "negation flags must cover the group");
}

int CyclicMonoidOperad::act_op(int g, const Signature&, int p) const { return negates_[g] ? (n_ - p) % n_ : p; }

int MaxOperad::ops(const Signature& s) const {
    int m = 0;
    for (int c : s.ins) {
        if (c < 0 || c > 1) return 0;
        m = std::max(m, c);
    }
    return s.out == m ? 1 : 0;
}

TreeOperad::TreeOperad(GForest f) : forest_(std::move(f)) {}

int TreeOperad::ops(const Signature& s) const {
    const int comp = forest_.component_of(s.out);
    std::vector<int> local;
    for (int c : s.ins) {
        if (forest_.component_of(c) != comp) return 0;
        local.push_back(forest_.local(c));
    }
    return is_broad_relation(forest_.component(comp), local, forest_.local(s.out)) ? 1 : 0;
}

namespace {

std::vector<Signature> signatures(const SetOperad& o, int max_arity) {
    std::vector<Signature> out;
    const int c = o.colors();
    for (int n = 0; n <= max_arity; ++n) {
        std::vector<int> tuple(n + 1, 0);
        while (true) {
            Signature s{{tuple.begin(), tuple.begin() + n}, tuple[n]};
            if (o.ops(s) > 0) out.push_back(s);
            int i = 0;
            while (i <= n && ++tuple[i] == c) tuple[i++] = 0;
            if (i > n) break;
        }
    }
    return out;
}

std::vector<std::vector<int>> all_perms(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorKind::AxiomViolation, what); }

}  // namespace

void verify_operad(const SetOperad& o, int max_arity) {
    const auto sigs = signatures(o, max_arity);
    std::map<int, std::vector<Signature>> by_out;
    for (const auto& s : sigs) by_out[s.out].push_back(s);
    const int order = o.group().order();
    auto in_range = [&](const Signature& s, int p, const std::string& what) {
        if (p < 0 || p >= o.ops(s)) violation(what + " lands outside " + show_sig(o, s));
    };

    for (int c = 0; c < o.colors(); ++c) {
        Signature us{{c}, c};
        in_range(us, o.unit(c), "unit");
        for (int g = 0; g < order; ++g) {
            int gc = o.act_color(g, c);
            if (o.act_op(g, us, o.unit(c)) != o.unit(gc)) violation("group element " + o.group().name(g) + " moves a unit");
        }
    }

    for (const auto& ps : sigs) {
        const int n = static_cast<int>(ps.ins.size());
        for (int p = 0; p < o.ops(ps); ++p) {
            const std::string at = o.show_op(ps, p);
            // Units.
            Signature uo{{ps.out}, ps.out};
            if (o.compose(uo, o.unit(ps.out), 0, ps, p) != p) violation("left unit fails at " + at);
            for (int i = 0; i < n; ++i) {
                Signature ui{{ps.ins[i]}, ps.ins[i]};
                if (o.compose(ps, p, i, ui, o.unit(ps.ins[i])) != p) violation("right unit fails at " + at);
            }
            // Permutations.
            auto perms = all_perms(n);
            for (const auto& s : perms) {
                Signature ss = permute_signature(ps, s);
                int ps_op = o.permute(ps, p, s);
                in_range(ss, ps_op, "permutation of " + at);
                for (const auto& t : perms) {
                    std::vector<int> st(n);
                    for (int j = 0; j < n; ++j) st[j] = s[t[j]];
                    if (o.permute(ss, ps_op, t) != o.permute(ps, p, st)) violation("permutations do not compose at " + at);
                }
                if (s == perms.front() && ps_op != p) violation("identity permutation moves " + at);
            }
            // Group action.
            for (int g = 0; g < order; ++g) {
                Signature gs{{}, o.act_color(g, ps.out)};
                for (int c : ps.ins) gs.ins.push_back(o.act_color(g, c));
                int gp = o.act_op(g, ps, p);
                in_range(gs, gp, "action on " + at);
                if (g == 0 && gp != p) violation("identity acts nontrivially on " + at);
                for (int h = 0; h < order; ++h) {
                    Signature hs{{}, o.act_color(h, ps.out)};
                    for (int c : ps.ins) hs.ins.push_back(o.act_color(h, c));
                    if (o.act_op(g, hs, o.act_op(h, ps, p)) != o.act_op(o.group().mul(g, h), ps, p))
                        violation("action is not a homomorphism at " + at);
                }
                for (const auto& s : perms)
                    if (o.act_op(g, permute_signature(ps, s), o.permute(ps, p, s)) != o.permute(gs, gp, s))
                        violation("action does not commute with permutations at " + at);
            }
            // Composition with every q, then associativity with every r.
            for (int i = 0; i < n; ++i) {
                for (const auto& qs : by_out[ps.ins[i]]) {
                    const int m = static_cast<int>(qs.ins.size());
                    Signature pq = compose_signature(ps, i, qs);
                    for (int q = 0; q < o.ops(qs); ++q) {
                        const std::string at2 = at + " o_" + std::to_string(i) + " " + o.show_op(qs, q);
                        int pq_op = o.compose(ps, p, i, qs, q);
                        in_range(pq, pq_op, "composite " + at2);
                        for (int g = 0; g < order; ++g) {
                            Signature gp{{}, o.act_color(g, ps.out)}, gq{{}, o.act_color(g, qs.out)};
                            for (int c : ps.ins) gp.ins.push_back(o.act_color(g, c));
                            for (int c : qs.ins) gq.ins.push_back(o.act_color(g, c));
                            if (o.act_op(g, pq, pq_op) != o.compose(gp, o.act_op(g, ps, p), i, gq, o.act_op(g, qs, q)))
                                violation("action does not commute with " + at2);
                        }
                        // (p.s) o_i q = (p o_s(i) q).s'
                        for (const auto& s : perms) {
                            Signature ss = permute_signature(ps, s);
                            int lhs = o.compose(ss, o.permute(ps, p, s), i, qs, q);
                            Signature rs = compose_signature(ps, s[i], qs);
                            int rhs_op = o.compose(ps, p, s[i], qs, q);
                            // Tokens: inputs of p are (k, -1); inputs of q are (s[i], k).
                            std::vector<std::pair<int, int>> left, right;
                            for (int j = 0; j < n; ++j) {
                                if (j == i)
                                    for (int k = 0; k < m; ++k) left.emplace_back(s[i], k);
                                else
                                    left.emplace_back(s[j], -1);
                            }
                            for (int j = 0; j < n; ++j) {
                                if (j == s[i])
                                    for (int k = 0; k < m; ++k) right.emplace_back(j, k);
                                else
                                    right.emplace_back(j, -1);
                            }
                            std::vector<int> sp;
                            for (const auto& tok : left)
                                sp.push_back(static_cast<int>(std::find(right.begin(), right.end(), tok) - right.begin()));
                            if (lhs != o.permute(rs, rhs_op, sp))
                                violation("composition is not equivariant in p at " + at2);
                        }
                        // p o_i (q.t) = (p o_i q).(1 + t + 1)
                        for (const auto& t : all_perms(m)) {
                            int lhs = o.compose(ps, p, i, permute_signature(qs, t), o.permute(qs, q, t));
                            std::vector<int> sp;
                            for (int j = 0; j < i; ++j) sp.push_back(j);
                            for (int k = 0; k < m; ++k) sp.push_back(i + t[k]);
                            for (int j = i + 1; j < n; ++j) sp.push_back(j + m - 1);
                            if (lhs != o.permute(pq, pq_op, sp)) violation("composition is not equivariant in q at " + at2);
                        }
                        // Sequential associativity.
                        for (int j = 0; j < m; ++j)
                            for (const auto& rs : by_out[qs.ins[j]])
                                for (int r = 0; r < o.ops(rs); ++r) {
                                    int lhs = o.compose(pq, pq_op, i + j, rs, r);
                                    int rhs = o.compose(ps, p, i, compose_signature(qs, j, rs), o.compose(qs, q, j, rs, r));
                                    if (lhs != rhs) violation("sequential associativity fails at " + at2);
                                }
                        // Parallel associativity.
                        for (int j = i + 1; j < n; ++j)
                            for (const auto& rs : by_out[ps.ins[j]])
                                for (int r = 0; r < o.ops(rs); ++r) {
                                    int pr = o.compose(ps, p, j, rs, r);
                                    int lhs = o.compose(compose_signature(ps, j, rs), pr, i, qs, q);
                                    int rhs = o.compose(pq, pq_op, j + m - 1, rs, r);
                                    if (lhs != rhs) violation("parallel associativity fails at " + at2);
                                }
                    }
                }
            }
        }
    }
}

// ---- nerves ----

NervePresheaf::NervePresheaf(std::shared_ptr<const SetOperad> o) : op_(std::move(o)) {}

std::shared_ptr<const NervePresheaf> nerve(std::shared_ptr<const SetOperad> o, int verify_arity) {
    verify_operad(*o, verify_arity);
    return std::make_shared<NervePresheaf>(std::move(o));
}

Signature NervePresheaf::vertex_signature(const Tree& u, const Dendrex& d, int e) const {
    Signature s{{}, d.colors[e]};
    for (int c : u.children(e)) s.ins.push_back(d.colors[c]);
    return s;
}

const NervePresheaf::Level& NervePresheaf::level(const Tree& u) const {
    const std::string key = u.planar_code();
    std::lock_guard lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return *it->second;

    auto lv = std::make_unique<Level>();
    const int n = u.size();
    const int colors = op_->colors();
    std::map<std::pair<int, int>, std::vector<Signature>> sigs;  // (out, arity)
    auto sigs_for = [&](int out, int arity) -> const std::vector<Signature>& {
        auto [pos, fresh] = sigs.try_emplace({out, arity});
        if (fresh) {
            std::vector<int> tuple(arity, 0);
            while (true) {
                Signature s{tuple, out};
                if (op_->ops(s) > 0) pos->second.push_back(s);
                int i = 0;
                while (i < arity && ++tuple[i] == colors) tuple[i++] = 0;
                if (i == arity) break;
            }
        }
        return pos->second;
    };
    Dendrex cur{std::vector<int>(n, -1), std::vector<int>(n, -1)};
    // Vertices in index order: parents precede children, so each output color is known.
    std::function<void(int)> fill = [&](int e) {
        if (e == n) {
            lv->index.emplace(cur, static_cast<int>(lv->elems.size()));
            lv->elems.push_back(cur);
            return;
        }
        if (u.is_leaf(e)) {
            fill(e + 1);
            return;
        }
        const auto& kids = u.children(e);
        for (const auto& s : sigs_for(cur.colors[e], static_cast<int>(kids.size()))) {
            for (std::size_t k = 0; k < kids.size(); ++k) cur.colors[kids[k]] = s.ins[k];
            for (int p = 0; p < op_->ops(s); ++p) {
                cur.ops[e] = p;
                fill(e + 1);
            }
        }
        for (int k : kids) cur.colors[k] = -1;
        cur.ops[e] = -1;
    };
    for (int c = 0; c < colors; ++c) {
        cur.colors[0] = c;
        fill(0);
    }
    return *cache_.emplace(key, std::move(lv)).first->second;
}

int NervePresheaf::cardinality(const Tree& u) const { return static_cast<int>(level(u).elems.size()); }

NervePresheaf::Dendrex NervePresheaf::decode(const Tree& u, int x) const { return level(u).elems.at(x); }

int NervePresheaf::encode(const Tree& u, const Dendrex& d) const {
    const auto& lv = level(u);
    auto it = lv.index.find(d);
    if (it == lv.index.end()) throw Error(ErrorKind::AxiomViolation, "dendrex outside the nerve at " + format_tree(u));
    return it->second;
}

int NervePresheaf::restrict(const Tree& u, const Tree& v, const std::vector<int>& f, int x) const {
    const Dendrex d = decode(u, x);
    Dendrex out{std::vector<int>(v.size()), std::vector<int>(v.size(), -1)};
    for (int i = 0; i < v.size(); ++i) out.colors[i] = d.colors[f[i]];
    struct Piece {
        Signature sig;
        int op;
        std::vector<int> inputs;  // edges of u
    };
    EdgeSet stop = 0;
    // The composite of the vertices of u from e up to the edges in `stop`.
    std::function<Piece(int)> rec = [&](int e) -> Piece {
        if (has(stop, e)) return {{{d.colors[e]}, d.colors[e]}, op_->unit(d.colors[e]), {e}};
        if (u.is_leaf(e)) throw Error(ErrorKind::InvalidInput, "restriction along a map that is not injective");
        Piece p{vertex_signature(u, d, e), d.ops[e], u.children(e)};
        const auto& kids = u.children(e);
        for (int k = static_cast<int>(kids.size()) - 1; k >= 0; --k) {
            if (has(stop, kids[k])) continue;
            Piece q = rec(kids[k]);
            p.op = op_->compose(p.sig, p.op, k, q.sig, q.op);
            p.sig = compose_signature(p.sig, k, q.sig);
            p.inputs.erase(p.inputs.begin() + k);
            p.inputs.insert(p.inputs.begin() + k, q.inputs.begin(), q.inputs.end());
        }
        return p;
    };
    for (int i = 0; i < v.size(); ++i) {
        if (v.is_leaf(i)) continue;
        stop = 0;
        for (int c : v.children(i)) stop |= bit(f[c]);
        Piece p = rec(f[i]);
        std::vector<int> sigma;
        for (int c : v.children(i)) {
            auto it = std::find(p.inputs.begin(), p.inputs.end(), f[c]);
            if (it == p.inputs.end()) throw Error(ErrorKind::InvalidInput, "restriction along a non-monotone map");
            sigma.push_back(static_cast<int>(it - p.inputs.begin()));
        }
        if (sigma.size() != p.inputs.size()) throw Error(ErrorKind::InvalidInput, "restriction along a non-monotone map");
        out.ops[i] = op_->permute(p.sig, p.op, sigma);
    }
    return encode(v, out);
}

int NervePresheaf::act(int g, const Tree& u, int x) const {
    const Dendrex d = decode(u, x);
    Dendrex out = d;
    for (int e = 0; e < u.size(); ++e) {
        out.colors[e] = op_->act_color(g, d.colors[e]);
        if (!u.is_leaf(e)) out.ops[e] = op_->act_op(g, vertex_signature(u, d, e), d.ops[e]);
    }
    return encode(u, out);
}

std::string NervePresheaf::show(const Tree& u, int x) const {
    const Dendrex d = decode(u, x);
    std::vector<std::string> parts;
    for (int e = 0; e < u.size(); ++e) {
        std::string s = u.name(e) + ":" + op_->show_color(d.colors[e]);
        if (!u.is_leaf(e)) s += "[" + op_->show_op(vertex_signature(u, d, e), d.ops[e]) + "]";
        parts.push_back(s);
    }
    return "{" + join(parts, " ") + "}";
}

// ---- sections over complexes ----

namespace {

struct SectionContext {
    const Presheaf& y;
    const Ambient& amb;
    std::vector<Subtree> members;
    std::map<Subtree, int> index;
    std::vector<SubtreeTree> trees;

    SectionContext(const Presheaf& y_, const Complex& a)
        : y(y_), amb(a.ambient()), members(a.members().begin(), a.members().end()) {
        if (y.group().order() != amb.group.order())
            throw Error(ErrorKind::InvalidInput, "presheaf and tree have different groups");
        for (std::size_t i = 0; i < members.size(); ++i) {
            index[members[i]] = static_cast<int>(i);
            trees.push_back(subtree_tree(amb.down, amb.names, members[i]));
        }
    }

    // Edge map of trees[w] into trees[v] induced by g (g = identity: the face inclusion).
    std::vector<int> map_into(int w, int v, int g = 0) const {
        std::vector<int> f;
        for (int e : trees[w].to_ambient) f.push_back(trees[v].local(amb.act[g][e]));
        return f;
    }
};

std::string family_text(const SectionContext& cx, const std::vector<int>& fam, const std::vector<int>& show) {
    std::vector<std::string> parts;
    for (int m : show) parts.push_back(format_face(cx.amb.names, cx.members[m]) + "=" + cx.y.show(cx.trees[m].tree, fam[m]));
    return join(parts, "; ");
}

std::vector<int> maximal_indices(const SectionContext& cx, const Complex& a) {
    std::vector<int> out;
    for (const auto& m : a.maximal()) out.push_back(cx.index.at(m));
    return out;
}

Sections enumerate_sections(const SectionContext& cx, const std::vector<int>& maxes) {
    const Ambient& amb = cx.amb;
    const int order = amb.group.order();
    struct OrbitItem {
        int member;
        int g;
        std::vector<int> back;  // edge map member -> rep induced by g^-1
        std::vector<std::pair<int, std::vector<int>>> faces;
        // Memoized values at the member (by x) and at each face (by the member's value).
        std::vector<int> at;
        std::vector<std::vector<int>> face_at;
    };
    struct Orbit {
        int rep;
        std::vector<int> stab;
        std::vector<std::vector<int>> stab_maps;
        std::vector<OrbitItem> items;
        std::vector<signed char> fixed;  // -1 unknown
    };
    std::vector<Orbit> orbits;
    std::set<int> covered;
    for (int m : maxes) {
        if (covered.count(m)) continue;
        Orbit o{m, {}, {}, {}, {}};
        std::set<int> seen;
        for (int g = 0; g < order; ++g) {
            int gm = cx.index.at(amb.act_on(g, cx.members[m]));
            if (gm == m) {
                o.stab.push_back(g);
                o.stab_maps.push_back(cx.map_into(m, m, g));
            }
            if (!seen.insert(gm).second) continue;
            covered.insert(gm);
            OrbitItem it{gm, g, cx.map_into(gm, m, amb.group.inv(g)), {}, {}, {}};
            for (const auto& w : faces_of(amb.down, cx.members[gm])) {
                int wi = cx.index.at(w);
                it.faces.emplace_back(wi, cx.map_into(wi, gm));
            }
            it.at.assign(cx.y.cardinality(cx.trees[m].tree), -1);
            it.face_at.assign(it.faces.size(), std::vector<int>(cx.y.cardinality(cx.trees[gm].tree), -1));
            o.items.push_back(std::move(it));
        }
        o.fixed.assign(cx.y.cardinality(cx.trees[m].tree), -1);
        orbits.push_back(std::move(o));
    }

    Sections out;
    out.members = cx.members;
    std::vector<int> values(cx.members.size(), -1);
    std::function<void(std::size_t)> step = [&](std::size_t k) {
        if (k == orbits.size()) {
            out.families.push_back(values);
            return;
        }
        Orbit& o = orbits[k];
        const Tree& mt = cx.trees[o.rep].tree;
        const int card = static_cast<int>(o.fixed.size());
        for (int x = 0; x < card; ++x) {
            if (o.fixed[x] < 0) {
                bool fixed = true;
                for (std::size_t s = 0; s < o.stab.size() && fixed; ++s)
                    fixed = cx.y.restrict(mt, mt, o.stab_maps[s], x) == cx.y.act(o.stab[s], mt, x);
                o.fixed[x] = fixed;
            }
            if (!o.fixed[x]) continue;
            bool ok = true;
            std::vector<int> undo;
            for (auto& it : o.items) {
                if (!ok) break;
                const Tree& gt = cx.trees[it.member].tree;
                if (it.at[x] < 0) it.at[x] = cx.y.restrict(mt, gt, it.back, cx.y.act(it.g, mt, x));
                const int xg = it.at[x];
                for (std::size_t fi = 0; fi < it.faces.size(); ++fi) {
                    const auto& [w, f] = it.faces[fi];
                    int& val = it.face_at[fi][xg];
                    if (val < 0) val = cx.y.restrict(gt, cx.trees[w].tree, f, xg);
                    if (values[w] == -1) {
                        values[w] = val;
                        undo.push_back(w);
                    } else if (values[w] != val) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) step(k + 1);
            for (int w : undo) values[w] = -1;
        }
    };
    step(0);
    return out;
}

// Strict lifting against a -> full, given the sections over the full ambient.
LiftCheck lift_against(const Presheaf& y, const SectionContext& full_cx, const Sections& full, const Complex& a) {
    SectionContext cx(y, a);
    auto maxes = maximal_indices(cx, a);
    Sections sub = enumerate_sections(cx, maxes);
    std::vector<int> proj;
    for (const auto& m : cx.members) proj.push_back(full_cx.index.at(m));
    std::map<std::vector<int>, int> image;
    for (std::size_t i = 0; i < full.families.size(); ++i) {
        std::vector<int> r;
        for (int p : proj) r.push_back(full.families[i][p]);
        auto [it, fresh] = image.emplace(r, static_cast<int>(i));
        if (!fresh) {
            auto full_max = maximal_indices(full_cx, Complex::full(a.ambient_ptr()));
            return {false, "two fillers of " + family_text(cx, r, maxes) + ": " +
                               family_text(full_cx, full.families[it->second], full_max) + " and " +
                               family_text(full_cx, full.families[i], full_max)};
        }
    }
    for (const auto& fam : sub.families)
        if (!image.count(fam)) return {false, "no filler of " + family_text(cx, fam, maxes)};
    return {true, {}};
}

}  // namespace

Sections sections(const Presheaf& y, const Complex& a) {
    SectionContext cx(y, a);
    return enumerate_sections(cx, maximal_indices(cx, a));
}

LiftCheck strict_lift(const Presheaf& y, const Complex& a) {
    Complex full = Complex::full(a.ambient_ptr());
    SectionContext full_cx(y, full);
    Sections fs = enumerate_sections(full_cx, maximal_indices(full_cx, full));
    return lift_against(y, full_cx, fs, a);
}

SegalReport strict_segal_check(const Presheaf& y, const Truncation& tr, int jobs) {
    auto trees = tr.gtrees();
    std::vector<LiftCheck> results(trees.size());
    parallel_for(static_cast<int>(trees.size()), jobs, [&](int i) { results[i] = strict_lift(y, segal_core(trees[i])); });
    SegalReport rep;
    rep.checked = static_cast<int>(trees.size());
    for (std::size_t i = 0; i < trees.size(); ++i)
        if (!results[i].pass) {
            rep.pass = false;
            rep.failures.push_back({format_gforest(trees[i]), results[i].witness});
        }
    return rep;
}

std::vector<int> upsilon_star(const Presheaf& y, const GForest& t) {
    if (!t.is_gtree()) throw Error(ErrorKind::InvalidInput, "upsilon_* is evaluated on G-trees");
    if (y.group().order() != t.group().order()) throw Error(ErrorKind::InvalidInput, "presheaf and tree have different groups");
    Subtree c0 = t.component_subtree(0);
    SubtreeTree st = subtree_tree(t.down(), t.names(), c0);
    ElemSet h = t.isotropy(c0);
    std::vector<std::vector<int>> maps;
    for (int g : bits(h)) {
        std::vector<int> f;
        for (int e : st.to_ambient) f.push_back(st.local(t.act(g, e)));
        maps.push_back(std::move(f));
    }
    std::vector<int> out;
    for (int x = 0; x < y.cardinality(st.tree); ++x) {
        bool fixed = true;
        int k = 0;
        for (int g : bits(h)) fixed = fixed && y.restrict(st.tree, st.tree, maps[k++], x) == y.act(g, st.tree, x);
        if (fixed) out.push_back(x);
    }
    return out;
}

LiftingSuite lifting_equivalence_suite(const Presheaf& y, const Truncation& tr, int jobs) {
    auto trees = tr.gtrees();
    struct PerTree {
        bool segal = true, generating = true, horns = true, orbital = true;
        std::vector<std::string> witnesses;
    };
    std::vector<PerTree> results(trees.size());
    parallel_for(static_cast<int>(trees.size()), jobs, [&](int i) {
        const GForest& t = trees[i];
        PerTree& r = results[i];
        Complex full = Complex::full(ambient_of(t));
        SectionContext full_cx(y, full);
        Sections fs = enumerate_sections(full_cx, maximal_indices(full_cx, full));
        const std::string name = format_gforest(t);
        auto run = [&](bool& flag, const std::string& label, const Complex& a) {
            LiftCheck c = lift_against(y, full_cx, fs, a);
            if (!c.pass) {
                if (flag) r.witnesses.push_back(label + " at " + name + ": " + c.witness);
                flag = false;
            }
        };
        run(r.segal, "segal", segal_core(t));
        for (EdgeSet o : t.edge_orbits())
            if (subset(o, t.inner())) run(r.generating, "generating horn " + format_face(t.names(), {o, 0}), horn(t, o));
        std::vector<EdgeSet> orbits;
        for (EdgeSet o : t.edge_orbits())
            if (subset(o, t.inner())) orbits.push_back(o);
        for (std::size_t mask = 1; mask < (std::size_t{1} << orbits.size()); ++mask) {
            EdgeSet e = 0;
            for (std::size_t k = 0; k < orbits.size(); ++k)
                if (mask >> k & 1) e |= orbits[k];
            run(r.horns, "horn", horn(t, e));
            run(r.orbital, "orbital horn", orbital_horn(t, e));
        }
    });
    LiftingSuite out;
    out.trees = static_cast<int>(trees.size());
    for (auto& r : results) {
        out.segal = out.segal && r.segal;
        out.generating = out.generating && r.generating;
        out.horns = out.horns && r.horns;
        out.orbital = out.orbital && r.orbital;
        for (auto& w : r.witnesses) out.witnesses.push_back(std::move(w));
    }
    return out;
}

NormalCheck is_normal(const Presheaf& y, const std::function<bool(const Tree&, int)>& in_x, const Truncation& tr) {
    for (const Tree& u : tr.trees()) {
        auto auts = automorphisms(u);
        for (int x = 0; x < y.cardinality(u); ++x) {
            if (in_x(u, x)) continue;
            for (const auto& s : auts) {
                bool identity = true;
                for (int e = 0; e < u.size(); ++e) identity = identity && s[e] == e;
                if (identity || y.restrict(u, u, s, x) != x) continue;
                std::vector<std::string> moved;
                for (int e = 0; e < u.size(); ++e)
                    if (s[e] != e) moved.push_back(u.name(e) + "->" + u.name(s[e]));
                return {false, format_tree(u) + " value " + y.show(u, x) + " fixed by " + join(moved, ",")};
            }
        }
    }
    return {true, {}};
}

std::string format_tree(const Tree& t) {
    std::function<std::string(int)> rec = [&](int e) {
        if (t.is_leaf(e)) return t.name(e);
        std::vector<std::string> kids;
        for (int c : t.children(e)) kids.push_back(rec(c));
        return t.name(e) + "(" + join(kids, ",") + ")";
    };
    return rec(0);
}

std::string format_gforest(const GForest& t) {
    std::vector<std::string> comps;
    for (int c = 0; c < t.components(); ++c) comps.push_back(format_tree(t.component(c)));
    std::string out = join(comps, " + ");
    if (t.group().order() > 1) {
        std::vector<std::string> gens;
        for (int g = 1; g < t.group().order(); ++g) {
            std::vector<std::string> moved;
            for (int e = 0; e < t.size(); ++e)
                if (t.act(g, e) != e) moved.push_back(t.name(e) + "->" + t.name(t.act(g, e)));
            gens.push_back(t.group().name(g) + ":" + (moved.empty() ? "id" : join(moved, ",")));
        }
        out += " [" + join(gens, "; ") + "]";
    }
    return out;
}

}  // namespace dendro
