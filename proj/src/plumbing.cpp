#include "sandwich/plumbing.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "sandwich/errors.hpp"

namespace sandwich {

void PlumbingGraph::add_vertex(const std::string& name, int e) {
    if (euler.count(name)) throw Error("DuplicateVertex", "vertex '" + name + "' defined twice");
    euler[name] = e;
}

void PlumbingGraph::add_edge(const std::string& a, const std::string& b) {
    if (!has(a) || !has(b)) throw Error("UnknownVertex", "edge " + a + "-" + b + " names an unknown vertex");
    if (a == b) throw Error("SelfLoop", "edge from '" + a + "' to itself");
    edges.emplace_back(std::min(a, b), std::max(a, b));
}

std::map<std::string, std::vector<std::string>> PlumbingGraph::adjacency() const {
    std::map<std::string, std::vector<std::string>> adj;
    for (auto& [v, e] : euler) adj[v];
    for (auto& [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    for (auto& [v, nb] : adj) std::sort(nb.begin(), nb.end());
    return adj;
}

bool PlumbingGraph::is_tree() const {
    if (euler.empty()) return false;
    if (edges.size() + 1 != euler.size()) return false;
    auto adj = adjacency();
    std::set<std::string> seen{euler.begin()->first};
    std::vector<std::string> stack{euler.begin()->first};
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        for (auto& u : adj[v])
            if (seen.insert(u).second) stack.push_back(u);
    }
    return seen.size() == euler.size();
}

std::string arrow_curve(const std::string& curvetta) { return "@" + curvetta; }

int DecoratedGerm::index_of(const std::string& branch) const {
    for (size_t i = 0; i < branches.size(); ++i)
        if (branches[i].name == branch) return static_cast<int>(i);
    return -1;
}

Report validate_graph(const PlumbingGraph& g) {
    Report r;
    if (!g.is_tree()) r.add("not a tree");
    for (auto& [v, e] : g.euler) {
        if (e == -1)
            r.add("euler -1 present at " + v);
        else if (e > -2)
            r.add("euler " + std::to_string(e) + " at " + v + " is not <= -2");
    }
    return r;
}

namespace {

void check_augmentation(const PlumbingGraph& g, const Augmentation& aug) {
    std::set<std::string> names;
    for (auto& a : aug.arrows) {
        if (!names.insert(a.curvetta).second)
            throw Error("DuplicateCurvetta", "curvetta '" + a.curvetta + "' used twice");
        if (!g.has(a.vertex))
            throw Error("UnknownVertex", "curvetta '" + a.curvetta + "' sits on unknown vertex '" + a.vertex + "'");
        if (!a.direct && g.has(arrow_curve(a.curvetta)))
            throw Error("NameCollision", "vertex name '" + arrow_curve(a.curvetta) + "' is reserved");
    }
}

}  // namespace

BlowDownTrace blow_down(const PlumbingGraph& g, const Augmentation& aug, const Chooser& choose) {
    if (!g.is_tree()) throw Error("NotATree", "plumbing graph is not a tree");
    check_augmentation(g, aug);

    std::vector<std::string> names;
    std::map<std::string, int> idx;
    for (auto& [v, e] : g.euler) {
        idx[v] = static_cast<int>(names.size());
        names.push_back(v);
    }
    for (auto& a : aug.arrows) {
        if (a.direct) continue;
        idx[arrow_curve(a.curvetta)] = static_cast<int>(names.size());
        names.push_back(arrow_curve(a.curvetta));
    }
    const int C = static_cast<int>(names.size());
    const int K = static_cast<int>(aug.arrows.size());
    const int T = C + K;
    std::vector<int> euler(C);
    for (auto& [v, e] : g.euler) euler[idx[v]] = e;
    for (auto& a : aug.arrows)
        if (!a.direct) euler[idx[arrow_curve(a.curvetta)]] = -1;

    std::vector<std::vector<long long>> I(T, std::vector<long long>(T, 0));
    auto link = [&](int a, int b) { I[a][b] = I[b][a] = 1; };
    for (auto& [a, b] : g.edges) link(idx[a], idx[b]);
    for (int k = 0; k < K; ++k) {
        if (aug.arrows[k].direct) {
            link(idx[aug.arrows[k].vertex], C + k);
            continue;
        }
        int ac = idx[arrow_curve(aug.arrows[k].curvetta)];
        link(ac, idx[aug.arrows[k].vertex]);
        link(ac, C + k);
    }
    auto label = [&](int x) { return x < C ? names[x] : aug.arrows[x - C].curvetta; };

    BlowDownTrace t;
    for (auto& a : aug.arrows) t.curvettas.push_back(a.curvetta);
    t.w.assign(K, {});
    std::vector<bool> alive(C, true);
    int remaining = C;
    while (remaining > 0) {
        std::vector<std::string> avail;
        for (int x = 0; x < C; ++x)
            if (alive[x] && euler[x] == -1) avail.push_back(names[x]);
        if (avail.empty()) throw Error("NotSandwiched", "no (-1) curve left to contract");
        std::sort(avail.begin(), avail.end());
        size_t pick = choose ? choose(avail) : 0;
        const int E = idx[avail.at(pick)];

        BlowDownStep step;
        step.curve = names[E];
        std::vector<int> nb;
        for (int x = 0; x < T; ++x) {
            if (x == E || (x < C && !alive[x]) || I[x][E] == 0) continue;
            nb.push_back(x);
            step.snapshot[label(x)] = static_cast<int>(I[x][E]);
        }
        for (int k = 0; k < K; ++k) t.w[k].push_back(static_cast<int>(I[C + k][E]));
        for (int x : nb)
            if (x < C) euler[x] += static_cast<int>(I[x][E] * I[x][E]);
        for (size_t p = 0; p < nb.size(); ++p)
            for (size_t q = p + 1; q < nb.size(); ++q) {
                long long add = I[nb[p]][E] * I[nb[q]][E];
                I[nb[p]][nb[q]] += add;
                I[nb[q]][nb[p]] += add;
            }
        for (int x = 0; x < T; ++x) I[x][E] = I[E][x] = 0;
        alive[E] = false;
        --remaining;
        if (g.has(names[E])) t.lastVertex = names[E];
        t.steps.push_back(std::move(step));
    }
    t.finalPairwise.assign(K, std::vector<int>(K, 0));
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < K; ++b)
            if (a != b) t.finalPairwise[a][b] = static_cast<int>(I[C + a][C + b]);
    return t;
}

int delta_of(const std::vector<int>& seq) {
    int d = 0;
    for (int m : seq) d += m * (m - 1) / 2;
    return d;
}

int cap_framing(const Branch& b) { return -b.weight - 2 * b.delta; }

DecoratedGerm germ_from_trace(const BlowDownTrace& t, const Augmentation& aug) {
    DecoratedGerm germ;
    germ.rootVertex = t.lastVertex;
    const size_t K = t.curvettas.size();
    for (size_t i = 0; i < K; ++i) {
        Branch b;
        b.name = t.curvettas[i];
        for (int m : t.w[i])
            if (m > 0) b.multiplicitySeq.push_back(m);
        if (b.multiplicitySeq.empty())
            throw Error("InternalInconsistency", "curvetta '" + b.name + "' never met a contracted curve");
        b.weight = std::accumulate(b.multiplicitySeq.begin(), b.multiplicitySeq.end(), 0);
        b.delta = delta_of(b.multiplicitySeq);
        b.originMultiplicity = t.w[i].back();
        b.sitsOn = aug.arrows.at(i).vertex;
        germ.branches.push_back(b);
    }
    germ.pairwise = t.finalPairwise;
    for (size_t a = 0; a < K; ++a)
        for (size_t b = 0; b < K; ++b) {
            if (a == b) continue;
            int noether = 0;
            for (size_t j = 0; j < t.steps.size(); ++j) noether += t.w[a][j] * t.w[b][j];
            if (noether != germ.pairwise[a][b])
                throw Error("InternalInconsistency", "Noether sum disagrees with final intersection for " +
                                                         t.curvettas[a] + "," + t.curvettas[b]);
        }
    for (size_t j = 0; j < t.steps.size(); ++j) {
        GermPoint p{t.steps[j].curve, {}};
        bool any = false;
        for (size_t i = 0; i < K; ++i) {
            p.mult.push_back(t.w[i][j]);
            any = any || t.w[i][j] > 0;
        }
        if (any) germ.points.push_back(p);
    }
    return germ;
}

DecoratedGerm germ_from_augmentation(const PlumbingGraph& g, const Augmentation& aug, const Chooser& choose) {
    return germ_from_trace(blow_down(g, aug, choose), aug);
}

DecoratedGerm restrict_germ(const DecoratedGerm& germ, const std::vector<std::string>& keep) {
    std::vector<int> ix;
    for (auto& k : keep) {
        int i = germ.index_of(k);
        if (i < 0) throw Error("UnknownBranch", "no branch named '" + k + "'");
        ix.push_back(i);
    }
    DecoratedGerm r;
    r.rootVertex = germ.rootVertex;
    for (int i : ix) r.branches.push_back(germ.branches[i]);
    r.pairwise.assign(ix.size(), std::vector<int>(ix.size(), 0));
    for (size_t a = 0; a < ix.size(); ++a)
        for (size_t b = 0; b < ix.size(); ++b) r.pairwise[a][b] = germ.pairwise[ix[a]][ix[b]];
    for (auto& p : germ.points) {
        GermPoint q{p.name, {}};
        bool any = false;
        for (int i : ix) {
            q.mult.push_back(p.mult[i]);
            any = any || p.mult[i] > 0;
        }
        if (any) r.points.push_back(q);
    }
    return r;
}

std::pair<PlumbingGraph, Augmentation> extend_chains(const PlumbingGraph& g, const Augmentation& aug,
                                                     const std::vector<int>& lengths) {
    if (lengths.size() != aug.arrows.size())
        throw Error("IndexMismatch", "expected " + std::to_string(aug.arrows.size()) + " chain lengths, got " +
                                         std::to_string(lengths.size()));
    PlumbingGraph h = g;
    Augmentation out;
    for (size_t k = 0; k < lengths.size(); ++k) {
        const Arrow& a = aug.arrows[k];
        if (lengths[k] < 0) throw Error("RangeError", "negative chain length");
        std::string prev = a.vertex;
        int len = lengths[k];
        if (a.direct && len > 0) {
            // blowing up where the curvetta meets its vertex
            h.euler[a.vertex] -= 1;
            --len;
        } else if (a.direct) {
            out.arrows.push_back(a);
            continue;
        }
        for (int s = 1; s <= len; ++s) {
            std::string v = a.curvetta + "~" + std::to_string(s);
            if (h.has(v)) throw Error("NameCollision", "chain vertex '" + v + "' already exists");
            h.add_vertex(v, -2);
            h.add_edge(prev, v);
            prev = v;
        }
        out.arrows.push_back({a.curvetta, prev});
    }
    return {h, out};
}

namespace {

// one chain of points per branch, root first
std::vector<std::vector<std::string>> branch_chains(const Cluster& c) {
    std::map<std::string, const ClusterPoint*> byId;
    for (auto& p : c.points) byId[p.id] = &p;
    std::vector<std::vector<std::string>> chains(c.branches.size());
    for (size_t b = 0; b < c.branches.size(); ++b) {
        std::vector<std::string> on;
        for (auto& p : c.points)
            if (c.mults.at(p.id)[b] > 0) on.push_back(p.id);
        if (on.empty()) throw Error("ProximityViolation", "branch '" + c.branches[b] + "' has no points");
        std::set<std::string> onset(on.begin(), on.end());
        std::map<std::string, int> children;
        for (auto& id : on) {
            const auto& par = byId[id]->parent;
            if (par.empty()) continue;
            if (!onset.count(par))
                throw Error("ProximityViolation", "branch '" + c.branches[b] + "' passes " + id +
                                                      " but not its parent " + par);
            if (++children[par] > 1)
                throw Error("ProximityViolation", "branch '" + c.branches[b] + "' splits at " + par);
        }
        chains[b] = on;  // points are listed parents first
    }
    return chains;
}

}  // namespace

void validate_cluster(const Cluster& c) {
    if (c.branches.empty()) throw Error("InvalidCluster", "cluster has no branches");
    std::set<std::string> seen;
    int roots = 0;
    for (auto& p : c.points) {
        if (p.id == "root") throw Error("InvalidCluster", "'root' is reserved");
        if (p.parent.empty())
            ++roots;
        else if (!seen.count(p.parent))
            throw Error("InvalidCluster", "point " + p.id + " listed before its parent " + p.parent);
        if (!seen.insert(p.id).second) throw Error("InvalidCluster", "point " + p.id + " defined twice");
        if (!c.mults.count(p.id) || c.mults.at(p.id).size() != c.branches.size())
            throw Error("InvalidCluster", "point " + p.id + " lacks multiplicities");
        for (int m : c.mults.at(p.id))
            if (m < 0) throw Error("InvalidCluster", "negative multiplicity at " + p.id);
        if (p.prox.size() > 1) throw Error("ProximityViolation", "point " + p.id + " is proximate to three points");
    }
    if (roots != 1) throw Error("InvalidCluster", "cluster needs exactly one point with parent root");

    std::map<std::string, const ClusterPoint*> byId;
    for (auto& p : c.points) byId[p.id] = &p;
    auto ancestor = [&](const std::string& a, const std::string& of) {
        for (std::string u = byId[of]->parent; !u.empty(); u = byId[u]->parent)
            if (u == a) return true;
        return false;
    };
    std::map<std::string, std::vector<std::string>> proximate;  // q -> points proximate to q
    for (auto& p : c.points) {
        if (!p.parent.empty()) proximate[p.parent].push_back(p.id);
        for (auto& r : p.prox) {
            if (!byId.count(r) || !ancestor(r, p.id) || r == p.parent)
                throw Error("ProximityViolation", "point " + p.id + " cannot be proximate to " + r);
            proximate[r].push_back(p.id);
        }
    }
    for (auto& p : c.points)
        for (size_t b = 0; b < c.branches.size(); ++b) {
            int sum = 0;
            for (auto& q : proximate[p.id]) sum += c.mults.at(q)[b];
            if (c.mults.at(p.id)[b] < sum)
                throw Error("ProximityViolation", "proximity inequality fails at " + p.id + " for branch " +
                                                      c.branches[b]);
        }
    auto chains = branch_chains(c);
    for (size_t b = 0; b < c.branches.size(); ++b) {
        const auto& ch = chains[b];
        if (byId[ch.front()]->parent != "")
            throw Error("ProximityViolation", "branch '" + c.branches[b] + "' misses the root point");
        for (size_t s = 1; s < ch.size(); ++s)
            if (c.mults.at(ch[s])[b] > c.mults.at(ch[s - 1])[b])
                throw Error("ProximityViolation", "multiplicity of '" + c.branches[b] + "' increases at " + ch[s]);
        int total = 0;
        for (auto& id : ch) total += c.mults.at(id)[b];
        auto w = c.weights.find(c.branches[b]);
        if (w != c.weights.end() && w->second != total)
            throw Error("WeightMismatch", "branch '" + c.branches[b] + "' has multiplicity sum " +
                                              std::to_string(total) + " but weight " + std::to_string(w->second));
        if (c.mults.at(ch.back())[b] != 1)
            throw Error("InvalidCluster", "branch '" + c.branches[b] + "' must end with multiplicity 1");
        for (size_t s = 0; s + 1 < ch.size(); ++s) {
            int sum = 0;
            for (auto& q : proximate[ch[s]]) sum += c.mults.at(q)[b];
            if (sum != c.mults.at(ch[s])[b])
                throw Error("ProximityViolation", "proximity equality fails at " + ch[s] + " for branch " +
                                                      c.branches[b]);
        }
    }
}

std::pair<PlumbingGraph, Augmentation> graph_from_cluster(const Cluster& c) {
    validate_cluster(c);
    auto chains = branch_chains(c);
    std::map<std::string, const ClusterPoint*> byId;
    std::set<std::string> hasChild;
    for (auto& p : c.points) {
        byId[p.id] = &p;
        if (!p.parent.empty()) hasChild.insert(p.parent);
        for (auto& r : p.prox) hasChild.insert(r);
    }
    // a free point of one branch alone becomes that branch's (-1) arrow
    std::map<std::string, int> leafOf;
    for (size_t b = 0; b < chains.size(); ++b) {
        const auto& q = chains[b].back();
        const auto* p = byId[q];
        int total = 0;
        for (int m : c.mults.at(q)) total += m;
        if (total == 1 && !hasChild.count(q) && p->prox.empty() && !p->parent.empty())
            leafOf[q] = static_cast<int>(b);
    }

    std::map<std::string, int> euler;
    std::set<std::pair<std::string, std::string>> edges;
    auto key = [](const std::string& a, const std::string& b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
    for (auto& p : c.points) {
        std::vector<std::string> prox;
        if (!p.parent.empty()) prox.push_back(p.parent);
        prox.insert(prox.end(), p.prox.begin(), p.prox.end());
        for (auto& q : prox) --euler[q];
        if (prox.size() == 2) {
            if (!edges.erase(key(prox[0], prox[1])))
                throw Error("ProximityViolation", "satellite point " + p.id + " does not lie on " + prox[0] +
                                                      " and " + prox[1]);
        }
        euler[p.id] += -1;
        for (auto& q : prox) edges.insert(key(p.id, q));
    }
    PlumbingGraph g;
    Augmentation aug;
    for (auto& p : c.points)
        if (!leafOf.count(p.id)) g.add_vertex(p.id, euler[p.id]);
    for (auto& [a, b] : edges)
        if (!leafOf.count(a) && !leafOf.count(b)) g.add_edge(a, b);
    for (size_t b = 0; b < chains.size(); ++b) {
        const auto& q = chains[b].back();
        if (leafOf.count(q))
            aug.arrows.push_back({c.branches[b], byId[q]->parent, false});
        else
            aug.arrows.push_back({c.branches[b], q, true});
    }
    return {g, aug};
}

DecoratedGerm germ_from_cluster(const Cluster& c) {
    auto [g, aug] = graph_from_cluster(c);
    return germ_from_augmentation(g, aug);
}

namespace {

struct Rooted {
    const std::map<std::string, std::vector<std::string>>& adj;
    const PlumbingGraph& g;
    std::map<std::pair<std::string, std::string>, std::string> memo;

    // canonical string of the subtree at v hanging away from parent
    const std::string& canon(const std::string& v, const std::string& parent) {
        auto k = std::make_pair(v, parent);
        auto it = memo.find(k);
        if (it != memo.end()) return it->second;
        std::vector<std::string> kids;
        for (auto& u : adj.at(v))
            if (u != parent) kids.push_back(canon(u, v));
        std::sort(kids.begin(), kids.end());
        std::string s = "(" + std::to_string(g.euler.at(v));
        for (auto& x : kids) s += x;
        s += ")";
        return memo[k] = s;
    }

    std::vector<std::string> children(const std::string& v, const std::string& parent) {
        std::vector<std::string> kids;
        for (auto& u : adj.at(v))
            if (u != parent) kids.push_back(u);
        return kids;
    }

    std::uint64_t order(const std::string& v, const std::string& parent) {
        std::map<std::string, std::vector<std::string>> groups;
        for (auto& u : children(v, parent)) groups[canon(u, v)].push_back(u);
        std::uint64_t r = 1;
        for (auto& [c, mem] : groups) {
            for (size_t f = 2; f <= mem.size(); ++f) r *= f;
            for (auto& u : mem) r *= order(u, v);
        }
        return r;
    }

    // all isomorphisms from subtree (v, pv) onto subtree (w, pw), appended to partial maps
    std::vector<VertexMap> isos(const std::string& v, const std::string& pv, const std::string& w,
                                const std::string& pw, size_t limit) {
        std::vector<VertexMap> acc{VertexMap{{v, w}}};
        std::map<std::string, std::vector<std::string>> gv, gw;
        for (auto& u : children(v, pv)) gv[canon(u, v)].push_back(u);
        for (auto& u : children(w, pw)) gw[canon(u, w)].push_back(u);
        for (auto& [c, src] : gv) {
            auto dst = gw[c];
            std::vector<size_t> perm(dst.size());
            std::iota(perm.begin(), perm.end(), 0);
            std::vector<VertexMap> next;
            do {
                std::vector<VertexMap> combos{VertexMap{}};
                for (size_t s = 0; s < src.size(); ++s) {
                    auto sub = isos(src[s], v, dst[perm[s]], w, limit);
                    std::vector<VertexMap> grown;
                    for (auto& base : combos)
                        for (auto& m : sub) {
                            VertexMap x = base;
                            x.insert(m.begin(), m.end());
                            grown.push_back(std::move(x));
                            if (grown.size() >= limit) break;
                        }
                    combos.swap(grown);
                }
                for (auto& base : acc)
                    for (auto& m : combos) {
                        VertexMap x = base;
                        x.insert(m.begin(), m.end());
                        next.push_back(std::move(x));
                        if (next.size() >= limit) break;
                    }
            } while (next.size() < limit && std::next_permutation(perm.begin(), perm.end()));
            acc.swap(next);
        }
        return acc;
    }
};

std::vector<std::string> centroids(const PlumbingGraph& g, const std::map<std::string, std::vector<std::string>>& adj) {
    const size_t n = g.euler.size();
    std::map<std::string, size_t> size;
    std::function<size_t(const std::string&, const std::string&)> dfs = [&](const std::string& v,
                                                                          const std::string& p) {
        size_t s = 1;
        for (auto& u : adj.at(v))
            if (u != p) s += dfs(u, v);
        return size[v] = s;
    };
    const std::string root = g.euler.begin()->first;
    dfs(root, "");
    std::map<std::string, std::string> par;
    std::function<void(const std::string&, const std::string&)> mark = [&](const std::string& v,
                                                                          const std::string& p) {
        par[v] = p;
        for (auto& u : adj.at(v))
            if (u != p) mark(u, v);
    };
    mark(root, "");
    std::vector<std::string> out;
    for (auto& [v, e] : g.euler) {
        size_t worst = n - size[v];
        for (auto& u : adj.at(v))
            if (u != par[v]) worst = std::max(worst, size[u]);
        if (2 * worst <= n) out.push_back(v);
    }
    return out;
}

}  // namespace

std::vector<VertexMap> automorphisms(const PlumbingGraph& g, size_t limit) {
    if (!g.is_tree()) throw Error("NotATree", "automorphisms need a tree");
    auto adj = g.adjacency();
    Rooted R{adj, g, {}};
    auto cs = centroids(g, adj);
    std::vector<VertexMap> out;
    if (cs.size() == 1) {
        out = R.isos(cs[0], "", cs[0], "", limit);
    } else {
        const auto &a = cs[0], &b = cs[1];
        for (auto& m : R.isos(a, b, a, b, limit))
            for (auto& k : R.isos(b, a, b, a, limit)) {
                VertexMap x = m;
                x.insert(k.begin(), k.end());
                out.push_back(std::move(x));
            }
        if (R.canon(a, b) == R.canon(b, a))
            for (auto& m : R.isos(a, b, b, a, limit))
                for (auto& k : R.isos(b, a, a, b, limit)) {
                    VertexMap x = m;
                    x.insert(k.begin(), k.end());
                    out.push_back(std::move(x));
                }
    }
    if (out.size() > limit) out.resize(limit);
    std::sort(out.begin(), out.end());
    return out;
}

std::uint64_t automorphism_count(const PlumbingGraph& g) {
    if (!g.is_tree()) throw Error("NotATree", "automorphisms need a tree");
    auto adj = g.adjacency();
    Rooted R{adj, g, {}};
    auto cs = centroids(g, adj);
    if (cs.size() == 1) return R.order(cs[0], "");
    const auto &a = cs[0], &b = cs[1];
    std::uint64_t r = R.order(a, b) * R.order(b, a);
    return R.canon(a, b) == R.canon(b, a) ? 2 * r : r;
}

std::vector<std::pair<std::string, int>> spinal_binding(const DecoratedGerm& germ) {
    std::vector<std::pair<std::string, int>> out{{germ.rootVertex, 1}};
    for (auto& b : germ.branches) out.emplace_back(b.sitsOn, b.originMultiplicity);
    return out;
}

UnexpectedGraph build_unexpected(const PlumbingGraph& g, const Augmentation& aug, int N, int wmax) {
    if (N < 1) throw Error("RangeError", "N must be positive");
    if (wmax < 1) throw Error("RangeError", "wmax must be positive");
    DecoratedGerm germ = germ_from_augmentation(g, aug);
    const int m = 2 * N + 5;
    UnexpectedGraph u;
    PlumbingGraph k = g;
    Augmentation ka;
    u.vstar = "v*";
    auto fresh = [&](const std::string& v) {
        if (k.has(v)) throw Error("NameCollision", "vertex '" + v + "' already exists in the input graph");
    };
    fresh(u.vstar);
    k.add_vertex(u.vstar, -m - 2);
    k.add_edge(u.vstar, germ.rootVertex);
    for (int leg = 1; leg <= m; ++leg) {
        std::string prev = u.vstar;
        for (int s = 1; s <= m - 1; ++s) {
            std::string v = "leg" + std::to_string(leg) + "." + std::to_string(s);
            fresh(v);
            k.add_vertex(v, -2);
            k.add_edge(prev, v);
            prev = v;
        }
        std::string c = "line" + std::to_string(leg);
        for (auto& a : aug.arrows)
            if (a.curvetta == c) throw Error("NameCollision", "curvetta '" + c + "' already exists");
        ka.arrows.push_back({c, prev});
        u.lines.push_back(c);
    }
    for (auto& a : aug.arrows) {
        ka.arrows.push_back(a);
        u.inherited.push_back(a.curvetta);
    }
    auto [kg, kaug] = extend_chains(k, ka, std::vector<int>(ka.arrows.size(), wmax));
    u.graph = kg;
    u.aug = kaug;
    blow_down(u.graph, u.aug);  // must succeed
    return u;
}

namespace {

struct Tok {
    std::string text;
    int col;
};

std::vector<Tok> tokenize(const std::string& line) {
    std::vector<Tok> out;
    size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '#') ++j;
        out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
        i = j;
    }
    return out;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

int to_int(const Tok& t, int line) {
    try {
        size_t used = 0;
        int v = std::stoi(t.text, &used);
        if (used != t.text.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got '" + t.text + "'", line, t.col);
    }
}

void check_name(const Tok& t, int line) {
    for (char ch : t.text)
        if (ch == '@' || ch == '=' || ch == ',')
            throw ParseError("name '" + t.text + "' contains a reserved character", line, t.col);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

PlumbFile parse_plumb(const std::string& text) {
    PlumbFile f;
    std::vector<std::pair<std::vector<Tok>, int>> edges, curvettas;
    auto lines = lines_of(text);
    for (size_t ln = 0; ln < lines.size(); ++ln) {
        const int L = static_cast<int>(ln) + 1;
        auto t = tokenize(lines[ln]);
        if (t.empty()) continue;
        const auto& kw = t[0].text;
        if (kw == "vertex") {
            if (t.size() != 3) throw ParseError("usage: vertex <name> <euler>", L, t[0].col);
            check_name(t[1], L);
            if (f.graph.has(t[1].text)) throw ParseError("vertex '" + t[1].text + "' defined twice", L, t[1].col);
            f.graph.add_vertex(t[1].text, to_int(t[2], L));
        } else if (kw == "edge") {
            if (t.size() != 3) throw ParseError("usage: edge <name> <name>", L, t[0].col);
            edges.push_back({t, L});
        } else if (kw == "curvetta") {
            if (t.size() != 4 || (t[2].text != "on" && t[2].text != "at"))
                throw ParseError("usage: curvetta <name> on|at <vertex>", L, t[0].col);
            check_name(t[1], L);
            curvettas.push_back({t, L});
        } else if (kw == "chains") {
            if (t.size() < 2) throw ParseError("usage: chains <c>=<len>[,...]", L, t[0].col);
            std::string joined;
            for (size_t k = 1; k < t.size(); ++k) joined += t[k].text;
            for (auto& part : split(joined, ',')) {
                auto kv = split(part, '=');
                if (kv.size() != 2 || kv[0].empty()) throw ParseError("bad chains entry '" + part + "'", L, t[1].col);
                f.chains.emplace_back(kv[0], to_int(Tok{kv[1], t[1].col}, L));
            }
        } else {
            throw ParseError("unknown directive '" + kw + "'", L, t[0].col);
        }
    }
    for (auto& [t, L] : edges) {
        for (int k : {1, 2})
            if (!f.graph.has(t[k].text)) throw ParseError("unknown vertex '" + t[k].text + "'", L, t[k].col);
        if (t[1].text == t[2].text) throw ParseError("edge from a vertex to itself", L, t[1].col);
        f.graph.add_edge(t[1].text, t[2].text);
    }
    std::set<std::string> seen;
    for (auto& [t, L] : curvettas) {
        if (!f.graph.has(t[3].text)) throw ParseError("unknown vertex '" + t[3].text + "'", L, t[3].col);
        if (!seen.insert(t[1].text).second) throw ParseError("curvetta '" + t[1].text + "' defined twice", L, t[1].col);
        f.aug.arrows.push_back({t[1].text, t[3].text, t[2].text == "at"});
    }
    for (auto& [c, len] : f.chains)
        if (!seen.count(c)) throw Error("UnknownCurvetta", "chains names unknown curvetta '" + c + "'");
    return f;
}

std::string serialize_plumb(const PlumbingGraph& g, const Augmentation& aug) {
    std::string s;
    for (auto& [v, e] : g.euler) s += "vertex " + v + " " + std::to_string(e) + "\n";
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end());
    for (auto& [a, b] : edges) s += "edge " + a + " " + b + "\n";
    for (auto& a : aug.arrows) s += "curvetta " + a.curvetta + (a.direct ? " at " : " on ") + a.vertex + "\n";
    return s;
}

Cluster parse_germ(const std::string& text) {
    Cluster c;
    struct MultLine {
        std::vector<Tok> t;
        int L;
    };
    std::vector<MultLine> mults;
    std::vector<std::pair<std::vector<Tok>, int>> weights;
    std::set<std::string> ids;
    auto lines = lines_of(text);
    for (size_t ln = 0; ln < lines.size(); ++ln) {
        const int L = static_cast<int>(ln) + 1;
        auto t = tokenize(lines[ln]);
        if (t.empty()) continue;
        const auto& kw = t[0].text;
        if (kw == "branch") {
            if (t.size() < 2) throw ParseError("usage: branch <name> ...", L, t[0].col);
            for (size_t k = 1; k < t.size(); ++k) {
                check_name(t[k], L);
                if (std::find(c.branches.begin(), c.branches.end(), t[k].text) != c.branches.end())
                    throw ParseError("branch '" + t[k].text + "' declared twice", L, t[k].col);
                c.branches.push_back(t[k].text);
            }
        } else if (kw == "point") {
            if ((t.size() != 4 && t.size() != 6) || t[2].text != "parent" || (t.size() == 6 && t[4].text != "prox"))
                throw ParseError("usage: point <id> parent <id|root> [prox <id>,...]", L, t[0].col);
            check_name(t[1], L);
            ClusterPoint p{t[1].text, t[3].text == "root" ? "" : t[3].text, {}};
            if (!p.parent.empty() && !ids.count(p.parent))
                throw ParseError("parent '" + p.parent + "' not defined yet", L, t[3].col);
            if (t.size() == 6)
                for (auto& r : split(t[5].text, ',')) {
                    if (!ids.count(r)) throw ParseError("prox point '" + r + "' not defined yet", L, t[5].col);
                    p.prox.push_back(r);
                }
            if (!ids.insert(p.id).second) throw ParseError("point '" + p.id + "' defined twice", L, t[1].col);
            c.points.push_back(p);
        } else if (kw == "mult") {
            if (t.size() < 3) throw ParseError("usage: mult <id> <branch>=<k> ...", L, t[0].col);
            mults.push_back({t, L});
        } else if (kw == "weight") {
            if (t.size() != 3) throw ParseError("usage: weight <branch> <w>", L, t[0].col);
            weights.push_back({t, L});
        } else {
            throw ParseError("unknown directive '" + kw + "'", L, t[0].col);
        }
    }
    for (auto& p : c.points) c.mults[p.id].assign(c.branches.size(), 0);
    for (auto& [t, L] : mults) {
        if (!ids.count(t[1].text)) throw ParseError("unknown point '" + t[1].text + "'", L, t[1].col);
        for (size_t k = 2; k < t.size(); ++k) {
            auto kv = split(t[k].text, '=');
            if (kv.size() != 2) throw ParseError("expected <branch>=<k>", L, t[k].col);
            auto it = std::find(c.branches.begin(), c.branches.end(), kv[0]);
            if (it == c.branches.end()) throw ParseError("unknown branch '" + kv[0] + "'", L, t[k].col);
            c.mults[t[1].text][it - c.branches.begin()] = to_int(Tok{kv[1], t[k].col}, L);
        }
    }
    for (auto& [t, L] : weights) {
        if (std::find(c.branches.begin(), c.branches.end(), t[1].text) == c.branches.end())
            throw ParseError("unknown branch '" + t[1].text + "'", L, t[1].col);
        c.weights[t[1].text] = to_int(t[2], L);
    }
    return c;
}

}  // namespace sandwich
