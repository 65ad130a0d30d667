#include "agr/element.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace agr {

namespace {

uint64_t fnv1a(const MealyMachine& m) {
    uint64_t h = 14695981039346656037ull;
    auto mix = [&](uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            h ^= (v >> (8 * i)) & 0xff;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<uint64_t>(m.p));
    for (int32_t v : m.out) mix(static_cast<uint64_t>(v));
    for (int32_t v : m.next) mix(static_cast<uint64_t>(v));
    return h;
}

Element make_canonical(PointedMachine&& pm) {
    pm.machine.names.clear();
    return Element::of(pm.machine, pm.start);
}

}  // namespace

Element Element::identity(int p) {
    if (p < 2) throw BadAlphabet(p);
    MealyMachine m;
    m.p = p;
    m.out.resize(p);
    m.next.assign(p, 0);
    std::iota(m.out.begin(), m.out.end(), 0);
    return of(m, 0);
}

Element Element::of(const MealyMachine& m, int start) {
    if (start < 0 || start >= m.states()) throw MealyError("start state out of range");
    PointedMachine canon = minimize(m, start);
    Element e;
    e.hash_ = fnv1a(canon.machine);
    e.m_ = std::make_shared<const MealyMachine>(std::move(canon.machine));
    return e;
}

Element Element::of(const PointedMachine& pm) { return of(pm.machine, pm.start); }

bool Element::trivial() const {
    if (m_->states() != 1) return false;
    for (int x = 0; x < m_->p; ++x)
        if (m_->output(0, x) != x) return false;
    return true;
}

bool Element::root_trivial() const {
    for (int x = 0; x < m_->p; ++x)
        if (m_->output(0, x) != x) return false;
    return true;
}

std::string Element::key() const {
    const MealyMachine& m = *m_;
    std::string k;
    k.reserve(8 + m.out.size() * 8);
    auto put = [&k](int32_t v) {
        for (int i = 0; i < 4; ++i) k.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    };
    put(m.p);
    put(m.states());
    for (int32_t v : m.out) put(v);
    for (int32_t v : m.next) put(v);
    return k;
}

bool Element::operator==(const Element& o) const {
    if (m_ == o.m_) return true;
    if (!m_ || !o.m_) return false;
    return hash_ == o.hash_ && *m_ == *o.m_;
}

Element mul(const Element& a, const Element& b) {
    return make_canonical(product(a.machine(), 0, b.machine(), 0));
}

Element inv(const Element& g) { return make_canonical(invert(g.machine(), 0)); }

Element conjugate(const Element& g, const Element& h) { return mul(mul(inv(h), g), h); }

Element commutator(const Element& g, const Element& h) {
    return mul(mul(inv(g), inv(h)), mul(g, h));
}

Element power(const Element& g, long long n) {
    Element base = n < 0 ? inv(g) : g;
    unsigned long long e = n < 0 ? -static_cast<unsigned long long>(n) : n;
    Element acc = Element::identity(g.alphabet());
    while (e) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e) base = mul(base, base);
    }
    return acc;
}

RootDecomposition root_decompose(const Element& g) {
    const MealyMachine& m = g.machine();
    RootDecomposition d;
    d.pi.resize(m.p);
    d.sections.reserve(m.p);
    for (int x = 0; x < m.p; ++x) {
        d.pi[x] = m.output(0, x) + 1;
        d.sections.push_back(Element::of(m, m.successor(0, x)));
    }
    return d;
}

Element section_at(const Element& g, const Word& v) {
    return Element::of(g.machine(), walk(g.machine(), 0, v));
}

Element insert(const Word& v, const Element& g) {
    if (v.empty()) return g;
    const MealyMachine& gm = g.machine();
    const int p = gm.p;
    for (int letter : v)
        if (letter < 1 || letter > p) throw LetterOutOfRange(letter, p);

    // States: |v| path states, then g's states, then one identity sink.
    const int k = static_cast<int>(v.size());
    const int base = k;                  // g's states shifted here
    const int sink = k + gm.states();    // identity state
    MealyMachine m;
    m.p = p;
    m.out.resize(static_cast<size_t>(sink + 1) * p);
    m.next.resize(static_cast<size_t>(sink + 1) * p);
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < p; ++x) {
            m.out[static_cast<size_t>(i) * p + x] = x;
            m.next[static_cast<size_t>(i) * p + x] =
                (x == v[i] - 1) ? (i + 1 < k ? i + 1 : base) : sink;
        }
    for (int q = 0; q < gm.states(); ++q)
        for (int x = 0; x < p; ++x) {
            m.out[static_cast<size_t>(base + q) * p + x] = gm.output(q, x);
            m.next[static_cast<size_t>(base + q) * p + x] = base + gm.successor(q, x);
        }
    for (int x = 0; x < p; ++x) {
        m.out[static_cast<size_t>(sink) * p + x] = x;
        m.next[static_cast<size_t>(sink) * p + x] = sink;
    }
    return Element::of(m, 0);
}

bool equals(const Element& a, const Element& b) {
    if (a.alphabet() != b.alphabet()) throw AlphabetMismatch(a.alphabet(), b.alphabet());
    return a == b;
}

namespace {

// Completed finite orders, shared across calls.  Pure cache: hits never
// change results, only skip work.
std::mutex order_memo_lock;
std::unordered_map<std::string, uint64_t> order_memo;

constexpr uint64_t kTooBig = ~0ull;

uint64_t perm_order(const MealyMachine& m) {
    // lcm of root cycle lengths
    std::vector<char> seen(m.p);
    uint64_t r = 1;
    for (int x = 0; x < m.p; ++x) {
        if (seen[x]) continue;
        uint64_t len = 0;
        for (int y = x; !seen[y]; y = m.output(0, y)) {
            seen[y] = 1;
            ++len;
        }
        r = std::lcm(r, len);
    }
    return r;
}

uint64_t mul_clamped(uint64_t a, uint64_t b) {
    if (a == kTooBig || b == kTooBig || (b && a > (1ull << 62) / b)) return kTooBig;
    return a * b;
}

uint64_t lcm_clamped(uint64_t a, uint64_t b) {
    if (a == kTooBig || b == kTooBig) return kTooBig;
    return mul_clamped(a / std::gcd(a, b), b);
}

}  // namespace

OrderResult order_bounded(const Element& g, size_t limit) {
    // Nodes of the order graph.  kind 0: trivial.  kind 1: root-trivial,
    // successors are the sections.  kind 2: root permutation of order r > 1,
    // single successor g^r with multiplier r.
    struct Node {
        Element el;
        int kind;
        uint64_t r = 1;
        std::vector<int> succ;
        int index = -1, low = -1;
        bool on_stack = false;
        uint64_t value = 0;   // 0 = unresolved, kTooBig = unbounded
        bool proven = false;  // with value == kTooBig: infinite by proof
    };
    std::vector<Node> nodes;
    std::unordered_map<std::string, int> ids;

    auto discover = [&](const Element& e) -> int {
        auto [it, fresh] = ids.emplace(e.key(), static_cast<int>(nodes.size()));
        if (!fresh) return it->second;
        if (nodes.size() >= limit) {
            ids.erase(it);
            return -1;
        }
        Node n;
        n.el = e;
        if (e.trivial()) {
            n.kind = 0;
            n.value = 1;
        } else {
            std::lock_guard<std::mutex> lk(order_memo_lock);
            auto memo = order_memo.find(e.key());
            if (memo != order_memo.end()) {
                n.kind = 0;
                n.value = memo->second;
            } else {
                n.r = perm_order(e.machine());
                n.kind = n.r > 1 ? 2 : 1;
            }
        }
        nodes.push_back(std::move(n));
        return it->second;
    };

    int root = discover(g);
    if (root < 0) return {false, 0};

    auto expand = [&](int v) -> bool {
        if (nodes[v].kind == 1) {
            RootDecomposition d = root_decompose(nodes[v].el);
            for (Element& s : d.sections) {
                int id = discover(s);
                if (id < 0) return false;
                nodes[v].succ.push_back(id);
            }
        } else if (nodes[v].kind == 2) {
            int id = discover(power(nodes[v].el, static_cast<long long>(nodes[v].r)));
            if (id < 0) return false;
            nodes[v].succ.push_back(id);
        }
        return true;
    };

    // Resolve one popped component.  Its external successors are in earlier
    // components and already carry values.
    auto resolve = [&](const std::vector<int>& comp) {
        bool cyclic = comp.size() > 1;
        bool has_pow = false;
        uint64_t external = 1;
        bool proven = false;
        for (int w : comp) {
            has_pow = has_pow || nodes[w].kind == 2;
            for (int s : nodes[w].succ) {
                if (nodes[s].low == nodes[comp[0]].low && nodes[s].index >= nodes[comp[0]].low) {
                    cyclic = true;  // stays inside the component
                } else {
                    external = lcm_clamped(external, nodes[s].value);
                    proven = proven || nodes[s].proven;
                }
            }
        }
        uint64_t resolved;
        if (!cyclic) {
            Node& solo = nodes[comp[0]];
            resolved = solo.kind == 0   ? solo.value
                       : solo.kind == 2 ? mul_clamped(solo.r, external)
                                        : external;
        } else {
            // A cycle through a powering edge repeats g -> g^r forever:
            // unbounded.  A pure-section cycle has every member's order equal
            // to the lcm of the section orders outside it.
            resolved = has_pow ? kTooBig : external;
            proven = proven || has_pow;
        }
        for (int w : comp) {
            nodes[w].value = resolved;
            nodes[w].proven = proven && resolved == kTooBig;
        }
        if (resolved != kTooBig) {
            std::lock_guard<std::mutex> lk(order_memo_lock);
            for (int w : comp) order_memo.emplace(nodes[w].el.key(), resolved);
        }
    };

    // Iterative Tarjan; components pop bottom-up.
    struct Frame {
        int v;
        size_t next_child = 0;
    };
    std::vector<Frame> stack;
    std::vector<int> scc_stack;
    int counter = 0;

    auto push = [&](int v) -> bool {
        nodes[v].index = nodes[v].low = counter++;
        nodes[v].on_stack = true;
        scc_stack.push_back(v);
        if (!expand(v)) return false;
        stack.push_back({v});
        return true;
    };

    if (!push(root)) return {false, 0};
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_child < nodes[f.v].succ.size()) {
            int w = nodes[f.v].succ[f.next_child++];
            if (nodes[w].index < 0) {
                if (!push(w)) return {false, 0};
            } else if (nodes[w].on_stack) {
                nodes[f.v].low = std::min(nodes[f.v].low, nodes[w].index);
            }
            continue;
        }
        int v = f.v;
        stack.pop_back();
        if (nodes[v].low == nodes[v].index) {
            std::vector<int> comp;
            for (;;) {
                int w = scc_stack.back();
                scc_stack.pop_back();
                nodes[w].on_stack = false;
                nodes[w].low = nodes[v].index;  // component id for resolve()
                comp.push_back(w);
                if (w == v) break;
            }
            resolve(comp);
        }
        if (!stack.empty())
            nodes[stack.back().v].low = std::min(nodes[stack.back().v].low, nodes[v].low);
    }

    uint64_t v = nodes[root].value;
    if (v == kTooBig) return {false, 0, nodes[root].proven};
    return {true, v, false};
}

}  // namespace agr
