#include "agr/engel.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace agr {

Element engel_iterate(const Element& g, const Element& h, int c, int max_states,
                      std::vector<int>* profile) {
    if (c < 0) throw std::invalid_argument("negative iteration count");
    if (g.alphabet() != h.alphabet()) throw AlphabetMismatch(g.alphabet(), h.alphabet());
    Element e = g;
    if (profile) {
        profile->clear();
        profile->push_back(e.state_count());
    }
    for (int i = 1; i <= c; ++i) {
        e = commutator(e, h);
        if (max_states > 0 && e.state_count() > max_states)
            throw BudgetExceeded("iterate " + std::to_string(i) + " has " +
                                 std::to_string(e.state_count()) + " states (limit " +
                                 std::to_string(max_states) + ")");
        if (profile) profile->push_back(e.state_count());
    }
    return e;
}

bool TupleVertex::trivial() const {
    for (const Element& e : entries)
        if (!e.trivial()) return false;
    return true;
}

int TupleVertex::max_states() const {
    int m = 0;
    for (const Element& e : entries) m = std::max(m, e.state_count());
    return m;
}

std::string TupleVertex::key() const {
    std::string k;
    for (const Element& e : entries) k += e.key();  // element keys self-delimit
    return k;
}

TupleVertex start_tuple(const Element& g, const Element& h, int n) {
    if (g.alphabet() != h.alphabet()) throw AlphabetMismatch(g.alphabet(), h.alphabet());
    const int p = g.alphabet();
    if (n < 1 || n % p != 0)
        throw BadTupleLength("tuple length " + std::to_string(n) + " is not a positive multiple of p=" +
                             std::to_string(p));
    OrderResult ord = order_bounded(h);
    if (!ord.bounded)
        throw OrderMismatch("order of h not bounded within the exploration limit");
    if (n % ord.value != 0)
        throw OrderMismatch("h^" + std::to_string(n) + " != 1 (order is " +
                            std::to_string(ord.value) + ")");
    TupleVertex t;
    t.entries.reserve(n);
    t.entries.push_back(g);
    for (int i = 1; i < n; ++i) t.entries.push_back(conjugate(t.entries.back(), h));
    return t;
}

StepResult step_tuple(const TupleVertex& t) {
    const int n = static_cast<int>(t.entries.size());
    if (n == 0) throw BadTupleLength("empty tuple");
    std::vector<Element> diffs;
    diffs.reserve(n);
    bool all_fix = true;
    for (int i = 0; i < n; ++i) {
        diffs.push_back(mul(inv(t.entries[i]), t.entries[(i + 1) % n]));
        all_fix = all_fix && diffs.back().root_trivial();
    }
    StepResult r;
    if (!all_fix) {
        r.descended = false;
        r.successors.push_back({std::move(diffs)});
        return r;
    }
    r.descended = true;
    const int p = t.alphabet();
    std::vector<RootDecomposition> dec;
    dec.reserve(n);
    for (const Element& d : diffs) dec.push_back(root_decompose(d));
    for (int x = 0; x < p; ++x) {
        TupleVertex s;
        s.entries.reserve(n);
        for (int i = 0; i < n; ++i) s.entries.push_back(dec[i].sections[x]);
        r.successors.push_back(std::move(s));
    }
    return r;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::EngelYes: return "EngelYes";
        case Verdict::EngelNo: return "EngelNo";
        default: return "ResourceExceeded";
    }
}

namespace {

// Tuples are compared by the addresses of their interned canonical machines;
// the interner guarantees one machine per canonical form within a run.
using TupleId = std::vector<const MealyMachine*>;

struct TupleIdHash {
    size_t operator()(const TupleId& t) const {
        size_t h = 1469598103934665603ull;
        for (const MealyMachine* m : t) {
            h ^= reinterpret_cast<uintptr_t>(m);
            h *= 1099511628211ull;
        }
        return h;
    }
};

class Interner {
public:
    const Element& canonical(const Element& e) {
        auto [it, fresh] = pool_.emplace(e.key(), e);
        return it->second;
    }

private:
    std::unordered_map<std::string, Element> pool_;
};

TupleId identify(const TupleVertex& t, Interner& interner, TupleVertex* canonical) {
    TupleId id;
    id.reserve(t.entries.size());
    if (canonical) canonical->entries.clear();
    for (const Element& e : t.entries) {
        const Element& c = interner.canonical(e);
        id.push_back(&c.machine());
        if (canonical) canonical->entries.push_back(c);
    }
    return id;
}

}  // namespace

ExploreReport explore(const TupleVertex& t0, const EngelBudget& budget) {
    if (t0.entries.empty()) throw BadTupleLength("empty tuple");
    ExploreReport rep;
    if (budget.max_states > 0 && t0.max_states() > budget.max_states) {
        rep.truncated = true;
        return rep;  // verdict defaults to ResourceExceeded
    }
    Interner interner;
    std::unordered_map<TupleId, int32_t, TupleIdHash> ids;

    // Returns the vertex id, or -1 when the vertex budget is exhausted.
    // `fresh` reports first discovery.
    auto add_vertex = [&](const TupleVertex& t, bool* fresh) -> int32_t {
        TupleVertex canon;
        TupleId id = identify(t, interner, &canon);
        auto it = ids.find(id);
        if (it != ids.end()) {
            *fresh = false;
            return it->second;
        }
        if (rep.vertices.size() >= budget.max_vertices) return -1;
        int32_t v = static_cast<int32_t>(rep.vertices.size());
        ids.emplace(std::move(id), v);
        rep.vertices.push_back(std::move(canon));
        *fresh = true;
        return v;
    };

    bool fresh = false;
    add_vertex(t0, &fresh);
    for (int32_t v = 0; v < static_cast<int32_t>(rep.vertices.size()); ++v) {
        StepResult sr = step_tuple(rep.vertices[v]);
        for (size_t sx = 0; sx < sr.successors.size(); ++sx) {
            int letter = sr.descended ? static_cast<int>(sx) + 1 : 0;
            const TupleVertex& s = sr.successors[sx];
            if (budget.max_states > 0 && s.max_states() > budget.max_states) {
                rep.edges.push_back({v, -1, sr.descended, letter});
                rep.truncated = true;
                continue;
            }
            int32_t w = add_vertex(s, &fresh);
            if (w < 0) {
                rep.edges.push_back({v, -1, sr.descended, letter});
                rep.truncated = true;
                continue;
            }
            rep.edges.push_back({v, w, sr.descended, letter});
        }
    }

    const int32_t nv = static_cast<int32_t>(rep.vertices.size());
    std::vector<std::vector<int32_t>> adj(nv);
    for (const ExploreReport::Edge& e : rep.edges)
        if (e.to >= 0) adj[e.from].push_back(e.to);

    // Tarjan's algorithm, iterative.  comp[v] numbers components in pop
    // order (reverse topological).
    std::vector<int32_t> index(nv, -1), low(nv, 0), comp(nv, -1);
    std::vector<char> on_stack(nv, 0);
    std::vector<int32_t> scc_stack;
    int32_t counter = 0, ncomp = 0;
    struct Frame {
        int32_t v;
        size_t child = 0;
    };
    std::vector<Frame> stack;
    for (int32_t root = 0; root < nv; ++root) {
        if (index[root] >= 0) continue;
        index[root] = low[root] = counter++;
        on_stack[root] = 1;
        scc_stack.push_back(root);
        stack.push_back({root});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.child < adj[f.v].size()) {
                int32_t w = adj[f.v][f.child++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    on_stack[w] = 1;
                    scc_stack.push_back(w);
                    stack.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            int32_t v = f.v;
            stack.pop_back();
            if (low[v] == index[v]) {
                for (;;) {
                    int32_t w = scc_stack.back();
                    scc_stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                    if (w == v) break;
                }
                ++ncomp;
            }
            if (!stack.empty()) low[stack.back().v] = std::min(low[stack.back().v], low[v]);
        }
    }

    // Components that really contain a cycle: more than one vertex, or a
    // self-loop.
    std::vector<int32_t> comp_size(ncomp, 0), comp_min(ncomp, nv);
    std::vector<char> comp_self(ncomp, 0);
    for (int32_t v = 0; v < nv; ++v) {
        ++comp_size[comp[v]];
        comp_min[comp[v]] = std::min(comp_min[comp[v]], v);
        for (int32_t w : adj[v]) comp_self[comp[v]] |= (w == v);
    }
    std::vector<int32_t> cyclic;
    for (int32_t c = 0; c < ncomp; ++c)
        if (comp_size[c] > 1 || comp_self[c]) cyclic.push_back(c);
    std::sort(cyclic.begin(), cyclic.end(),
              [&](int32_t a, int32_t b) { return comp_min[a] < comp_min[b]; });

    for (int32_t c : cyclic) {
        // Shortest closed walk from the least vertex of the component,
        // staying inside it.
        int32_t root = comp_min[c];
        if (comp_size[c] == 1) {
            rep.cycles.push_back({root});
            continue;
        }
        std::vector<int32_t> parent(nv, -1);
        std::deque<int32_t> queue{root};
        std::vector<char> seen(nv, 0);
        seen[root] = 1;
        int32_t closer = -1;
        while (!queue.empty() && closer < 0) {
            int32_t u = queue.front();
            queue.pop_front();
            for (int32_t w : adj[u]) {
                if (comp[w] != c) continue;
                if (w == root) {
                    closer = u;
                    break;
                }
                if (!seen[w]) {
                    seen[w] = 1;
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        std::vector<int32_t> cycle;  // [root, ..., closer], closing edge implied
        for (int32_t u = closer; u != -1; u = parent[u]) cycle.push_back(u);
        std::reverse(cycle.begin(), cycle.end());
        rep.cycles.push_back(std::move(cycle));
    }

    // Longest run of consecutive non-descending edges over all walks from
    // the start.  Non-descending edges cannot cycle when root permutations
    // are powers of one p-cycle; the cap is a defensive stop for machines
    // outside that assumption.
    {
        std::vector<int32_t> run(nv, -1);
        run[0] = 0;
        const int32_t cap = nv + 1;
        bool changed = true;
        while (changed) {
            changed = false;
            for (const ExploreReport::Edge& e : rep.edges) {
                if (run[e.from] < 0) continue;
                int32_t through = e.descended ? 0 : std::min(run[e.from] + 1, cap);
                if (!e.descended)
                    rep.max_nondescend_run = std::max(rep.max_nondescend_run, through);
                if (e.to >= 0 && through > run[e.to]) {
                    run[e.to] = through;
                    changed = changed || through < cap;
                }
            }
        }
    }

    // Verdict.  A cycle that is not the trivial tuple's self-loop certifies
    // EngelNo even if the walk was truncated elsewhere.
    for (size_t i = 0; i < rep.cycles.size(); ++i) {
        bool all_trivial = true;
        for (int32_t v : rep.cycles[i]) all_trivial = all_trivial && rep.vertices[v].trivial();
        if (!all_trivial) {
            rep.verdict = Verdict::EngelNo;
            rep.witness_cycle = static_cast<int>(i);
            return rep;
        }
    }
    if (rep.truncated) {
        rep.verdict = Verdict::ResourceExceeded;
        return rep;
    }
    rep.verdict = Verdict::EngelYes;

    // Longest walk from the start through non-trivial vertices; every walk
    // of that length ends at the all-trivial tuple, so E_length = 1.
    {
        std::vector<int32_t> depth(nv, -1);
        struct DFrame {
            int32_t v;
            size_t child = 0;
            int32_t best = 0;
        };
        std::vector<DFrame> dstack{{0}};
        while (!dstack.empty()) {
            DFrame& f = dstack.back();
            if (rep.vertices[f.v].trivial()) {
                depth[f.v] = 0;
                dstack.pop_back();
                continue;
            }
            if (f.child < adj[f.v].size()) {
                int32_t w = adj[f.v][f.child++];
                if (depth[w] < 0)
                    dstack.push_back({w});
                else
                    f.best = std::max(f.best, depth[w]);
                continue;
            }
            depth[f.v] = 1 + f.best;
            int32_t d = depth[f.v];
            dstack.pop_back();
            if (!dstack.empty()) dstack.back().best = std::max(dstack.back().best, d);
        }
        rep.engel_class = depth[0];
    }
    return rep;
}

std::string ExploreReport::records() const {
    std::ostringstream os;
    for (size_t v = 0; v < vertices.size(); ++v) {
        os << "vertex id=" << v << " n=" << vertices[v].entries.size()
           << " trivial=" << (vertices[v].trivial() ? 1 : 0) << " sizes=";
        for (size_t i = 0; i < vertices[v].entries.size(); ++i)
            os << (i ? "," : "") << vertices[v].entries[i].state_count();
        os << "\n";
    }
    for (const Edge& e : edges) {
        os << "edge from=" << e.from << " to=";
        if (e.to < 0)
            os << "cut";
        else
            os << e.to;
        os << " descend=" << (e.descended ? 1 : 0) << " letter=";
        if (e.letter > 0)
            os << e.letter;
        else
            os << "-";
        os << "\n";
    }
    for (size_t c = 0; c < cycles.size(); ++c) {
        os << "cycle index=" << c << " ids=";
        for (size_t i = 0; i < cycles[c].size(); ++i) os << (i ? "," : "") << cycles[c][i];
        os << "\n";
    }
    os << "verdict " << agr::to_string(verdict) << " c=";
    if (engel_class >= 0)
        os << engel_class;
    else
        os << "-";
    os << " witness=";
    if (witness_cycle >= 0)
        os << witness_cycle;
    else
        os << "-";
    os << " truncated=" << (truncated ? 1 : 0) << " maxrun=" << max_nondescend_run << "\n";
    return os.str();
}

PairDecision decide_engel_pair(const Element& g, const Element& h, const EngelBudget& budget) {
    if (g.alphabet() != h.alphabet()) throw AlphabetMismatch(g.alphabet(), h.alphabet());
    PairDecision d;

    // Fast path: iterate while the machines stay small; gives the least c.
    Element e = g;
    for (int c = 0;; ++c) {
        if (e.trivial()) {
            d.verdict = Verdict::EngelYes;
            d.c = c;
            d.by_iteration = true;
            return d;
        }
        if (c >= budget.max_c) break;
        Element next = commutator(e, h);
        if (budget.max_states > 0 && next.state_count() > budget.max_states) break;
        e = std::move(next);
    }

    // Graph path: tuple length n = lcm(order(h), p).
    OrderResult ord = order_bounded(h);
    if (!ord.bounded) {
        d.verdict = Verdict::ResourceExceeded;
        return d;
    }
    uint64_t n = std::lcm(ord.value, static_cast<uint64_t>(g.alphabet()));
    if (n > 4096) {
        d.verdict = Verdict::ResourceExceeded;
        return d;
    }
    ExploreReport rep = explore(start_tuple(g, h, static_cast<int>(n)), budget);
    d.verdict = rep.verdict;
    if (rep.verdict == Verdict::EngelYes) d.c = rep.engel_class;
    d.report = std::move(rep);
    return d;
}

namespace {

// Rotation-independent key for a simple cycle of tuples.
std::string cycle_key(const std::vector<TupleVertex>& cycle) {
    std::vector<std::string> ks;
    ks.reserve(cycle.size());
    for (const TupleVertex& t : cycle) ks.push_back(t.key());
    size_t best = 0;
    for (size_t i = 1; i < ks.size(); ++i)
        if (ks[i] < ks[best]) best = i;
    std::string key;
    for (size_t i = 0; i < ks.size(); ++i) {
        const std::string& part = ks[(best + i) % ks.size()];
        uint64_t len = part.size();
        for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((len >> (8 * b)) & 0xff));
        key += part;
    }
    return key;
}

}  // namespace

SurveyResult exponent_survey(const GroupPresentation& G, int n, int r, const EngelBudget& budget,
                             const std::vector<TupleVertex>& seeds) {
    if (n < 1) throw BadTupleLength("tuple length must be positive");
    std::vector<BallEntry> ball = enumerate_ball(G, r);
    double total = 1;
    for (int i = 0; i < n; ++i) total *= static_cast<double>(ball.size());
    if (total > 100000)
        throw BudgetExceeded("survey of " + std::to_string(ball.size()) + "^" +
                             std::to_string(n) + " tuples is too large");

    SurveyResult res;
    std::set<std::string> seen_cycles;
    std::set<std::string> seen_tuples;
    auto run = [&](const TupleVertex& t0) {
        if (!seen_tuples.insert(t0.key()).second) return;
        ExploreReport rep = explore(t0, budget);
        res.truncated = res.truncated || rep.truncated;
        ++res.tuples;
        for (const std::vector<int32_t>& ids : rep.cycles) {
            std::vector<TupleVertex> cycle;
            bool all_trivial = true;
            for (int32_t v : ids) {
                cycle.push_back(rep.vertices[v]);
                all_trivial = all_trivial && rep.vertices[v].trivial();
            }
            if (all_trivial) continue;
            if (seen_cycles.insert(cycle_key(cycle)).second) res.cycles.push_back(std::move(cycle));
        }
    };

    for (const TupleVertex& s : seeds) {
        if (static_cast<int>(s.entries.size()) != n)
            throw BadTupleLength("seed tuple length mismatch");
        run(s);
    }
    std::vector<size_t> odo(n, 0);
    for (;;) {
        TupleVertex t;
        t.entries.reserve(n);
        for (size_t i : odo) t.entries.push_back(ball[i].g);
        run(t);
        int pos = n - 1;
        while (pos >= 0 && ++odo[pos] == ball.size()) odo[pos--] = 0;
        if (pos < 0) break;
    }
    return res;
}

BranchCertificate branch_certificate(const std::vector<TupleVertex>& cycle, const KMembership& k) {
    BranchCertificate cert;
    if (cycle.empty()) return cert;
    cert.n = static_cast<int>(cycle[0].entries.size());
    for (size_t i = 0; i < cycle.size(); ++i) {
        if (cycle[i].trivial()) continue;
        bool all_in_k = true;
        for (const Element& e : cycle[i].entries)
            all_in_k = all_in_k && k.test(e) == KVerdict::InK;
        if (all_in_k) {
            cert.certified = true;
            cert.vertex = static_cast<int>(i);
            return cert;
        }
    }
    return cert;
}

PeriodicCertificate lemma_check(const std::vector<Element>& a0, int period, const Word& word) {
    if (a0.empty()) throw std::invalid_argument("empty tuple");
    if (period < 1) throw std::invalid_argument("period must be positive");
    PeriodicCertificate cert;
    cert.a0 = a0;
    cert.period = period;
    cert.word = word;

    const int kk = static_cast<int>(a0.size());
    std::vector<Element> a = a0;
    for (int step = 0; step < period; ++step) {
        std::vector<Element> next;
        next.reserve(kk);
        for (int i = 0; i < kk; ++i) next.push_back(mul(inv(a[i]), a[(i + 1) % kk]));
        a = std::move(next);
    }
    for (int i = 0; i < kk; ++i) {
        if (a[i].apply(word) != word) {
            cert.detail = "entry " + std::to_string(i + 1) + " does not fix the word";
            return cert;
        }
        if (a[i].trivial()) {
            cert.detail = "entry " + std::to_string(i + 1) + " is trivial after the recursion";
            return cert;
        }
        if (!(section_at(a[i], word) == a0[i])) {
            cert.detail = "entry " + std::to_string(i + 1) + " does not return to its start";
            return cert;
        }
    }
    cert.checked = true;
    return cert;
}

WitnessData build_witness(const Element& h, const std::vector<Element>& a0, int level_limit) {
    if (a0.empty()) throw std::invalid_argument("empty tuple");
    const int p = h.alphabet();
    for (const Element& e : a0)
        if (e.alphabet() != p) throw AlphabetMismatch(e.alphabet(), p);
    OrderResult ord = order_bounded(h);
    if (!ord.bounded)
        throw OrderNotMultiple("order of h not bounded within the exploration limit");
    const uint64_t m = ord.value;
    const uint64_t kk = a0.size();
    if (m < 2) throw OrderNotMultiple("h is trivial");
    if (m % kk != 0)
        throw OrderNotMultiple("tuple length " + std::to_string(kk) + " does not divide order " +
                               std::to_string(m));

    for (int level = 1; level <= level_limit; ++level) {
        uint64_t points = 1;
        bool too_big = false;
        for (int i = 0; i < level; ++i) {
            points *= p;
            too_big = too_big || points > 59049;
        }
        if (too_big) break;
        Perm perm = level_perm(h, level);

        // First orbit of length exactly m, scanning points in order; its
        // least point is the lexicographically smallest word it contains.
        std::vector<char> visited(points, 0);
        std::vector<int32_t> orbit_pts;
        for (uint64_t pt = 0; pt < points && orbit_pts.empty(); ++pt) {
            if (visited[pt]) continue;
            std::vector<int32_t> cyc;
            int32_t u = static_cast<int32_t>(pt);
            do {
                visited[u] = 1;
                cyc.push_back(u);
                u = perm[u];
            } while (u != static_cast<int32_t>(pt));
            if (cyc.size() == m) orbit_pts = std::move(cyc);
        }
        if (orbit_pts.empty()) continue;

        auto word_of = [&](int32_t pt) {
            Word w(level);
            uint64_t v = static_cast<uint64_t>(pt);
            for (int i = level - 1; i >= 0; --i) {
                w[i] = static_cast<int>(v % p) + 1;
                v /= p;
            }
            return w;
        };

        // v_1: prefer the least point whose h-section is trivial, for a clean
        // anchor E_c(g,h)@v_1 = A_{c,1}.
        std::vector<int32_t> sorted = orbit_pts;
        std::sort(sorted.begin(), sorted.end());
        int32_t v1 = -1;
        for (int32_t pt : sorted)
            if (section_at(h, word_of(pt)).trivial()) {
                v1 = pt;
                break;
            }
        if (v1 < 0) v1 = sorted[0];

        // v_{i+1} = v_i^{h^-1}, i.e. walk the orbit against the permutation.
        Perm back = perm_inverse(perm);
        WitnessData w;
        w.h = h;
        w.level = level;
        int32_t pt = v1;
        for (uint64_t i = 0; i < m; ++i) {
            w.orbit.push_back(word_of(pt));
            pt = back[pt];
        }

        Element hi = Element::identity(p);
        Element g = Element::identity(p);
        for (uint64_t i = 0; i < m; ++i) {
            hi = mul(hi, inv(section_at(h, w.orbit[i])));
            w.cocycle.push_back(hi);
            g = mul(g, insert(w.orbit[i], conjugate(a0[i % kk], hi)));
        }
        if (!w.cocycle.back().trivial())
            throw std::logic_error("section cocycle does not close; h^m != 1?");
        w.g = std::move(g);
        return w;
    }
    throw NoOrbit("no orbit of length " + std::to_string(m) + " up to level " +
                  std::to_string(level_limit));
}

SearchResult periodic_state_search(const Element& g, const Element& h, int cmax, int pmax,
                                   const EngelBudget& budget, const KMembership* k) {
    if (cmax < 0 || pmax < 1) throw std::invalid_argument("bad search bounds");
    SearchResult res;

    std::vector<Element> iters{g};
    res.profile.push_back(g.state_count());
    for (int c = 1; c <= cmax; ++c) {
        Element next = commutator(iters.back(), h);
        if (budget.max_states > 0 && next.state_count() > budget.max_states) break;
        res.profile.push_back(next.state_count());
        iters.push_back(std::move(next));
    }
    res.c_reached = static_cast<int>(iters.size()) - 1;

    // A trivial iterate means the pair is Engel: the tail is all-trivial and
    // there is no periodic behaviour to hunt for.
    for (const Element& e : iters)
        if (e.trivial()) return res;

    // Non-trivial states of each iterate's canonical machine, as elements.
    std::vector<std::map<std::string, Element>> states(iters.size());
    for (size_t c = 0; c < iters.size(); ++c) {
        const MealyMachine& m = iters[c].machine();
        for (int q = 0; q < m.states(); ++q) {
            Element e = Element::of(m, q);
            if (!e.trivial()) states[c].emplace(e.key(), std::move(e));
        }
    }

    std::map<std::string, bool> k_memo;
    auto in_k = [&](const Element& e) {
        if (!k) return false;
        auto [it, fresh] = k_memo.emplace(e.key(), false);
        if (fresh) it->second = k->test(e) == KVerdict::InK;
        return it->second;
    };

    for (int period = 1; period <= pmax; ++period)
        for (int c = 0; c + period <= res.c_reached; ++c) {
            SearchCandidate cand;
            cand.c = c;
            cand.period = period;
            for (const auto& [key, e] : states[c]) {
                auto it = states[c + period].find(key);
                if (it == states[c + period].end()) continue;
                cand.common.push_back(e);
                cand.total_states += e.state_count();
                cand.has_k_member = cand.has_k_member || in_k(e);
            }
            if (!cand.common.empty()) res.candidates.push_back(std::move(cand));
        }
    std::sort(res.candidates.begin(), res.candidates.end(),
              [](const SearchCandidate& a, const SearchCandidate& b) {
                  if (a.has_k_member != b.has_k_member) return a.has_k_member;
                  if (a.total_states != b.total_states) return a.total_states < b.total_states;
                  if (a.c != b.c) return a.c < b.c;
                  return a.period < b.period;
              });
    return res;
}

}  // namespace agr
