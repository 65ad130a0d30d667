#include "agr/groups.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace agr {

Element GroupPresentation::element(const std::string& state_name) const {
    for (int q = 0; q < machine.states(); ++q)
        if (machine.name_of(q) == state_name) return Element::of(machine, q);
    throw UnknownState(state_name);
}

ExprEnv GroupPresentation::env() const {
    ExprEnv e;
    for (int q = 0; q < machine.states(); ++q) e[machine.name_of(q)] = Element::of(machine, q);
    return e;
}

GroupPresentation group_from_machine(std::string name, MealyMachine m) {
    m.validate();
    GroupPresentation G;
    G.name = std::move(name);
    G.p = m.p;
    for (int q = 0; q < m.states(); ++q)
        if (!Element::of(m, q).trivial()) G.generators.emplace_back(m.name_of(q), q);
    G.machine = std::move(m);
    return G;
}

GroupPresentation grigorchuk() {
    static const char* text =
        "mealy p=2 states=5\n"
        "a | 2:e 1:e\n"
        "b | 1:a 2:c\n"
        "c | 1:a 2:d\n"
        "d | 1:e 2:b\n"
        "e | 1:e 2:e\n";
    return group_from_machine("grigorchuk", parse_machine(text));
}

GroupPresentation gupta_sidki() {
    static const char* text =
        "mealy p=3 states=5\n"
        "a | 2:e 3:e 1:e\n"
        "ainv | 3:e 1:e 2:e\n"
        "t | 1:a 2:ainv 3:t\n"
        "tinv | 1:ainv 2:a 3:tinv\n"
        "e | 1:e 2:e 3:e\n";
    return group_from_machine("gupta-sidki", parse_machine(text));
}

std::array<Element, 3> grig_k_generators() {
    GroupPresentation G = grigorchuk();
    Element a = G.element("a"), b = G.element("b"), c = G.element("c");
    Element x = commutator(a, b);
    return {x, conjugate(x, c), conjugate(x, mul(c, a))};
}

PeriodicSeed grig_periodic_seed() {
    GroupPresentation G = grigorchuk();
    Element a = G.element("a"), b = G.element("b"), c = G.element("c");
    Element x2 = power(commutator(a, b), 2);
    Element x2ca = conjugate(x2, mul(c, a));
    Element x2cab = conjugate(x2ca, b);
    PeriodicSeed s;
    s.tuple = {mul(inv(x2), x2ca), mul(inv(x2ca), mul(x2, x2cab)), mul(inv(x2cab), inv(x2)), x2};
    s.period = 9;
    s.word = {1, 1, 1, 1, 1, 2};
    return s;
}

PeriodicSeed gs_periodic_seed() {
    GroupPresentation G = gupta_sidki();
    Element a = G.element("a"), t = G.element("t");
    Element x = commutator(inv(a), t);
    PeriodicSeed s;
    s.tuple = {x, conjugate(x, a), conjugate(x, inv(a))};
    s.period = 4;
    s.word = {1, 2, 2};
    return s;
}

std::vector<BallEntry> enumerate_ball(const GroupPresentation& G, int radius, size_t max_size) {
    // Symmetrized generating set, deduplicated, in declaration order.
    std::vector<Element> gens;
    auto admit = [&gens](const Element& g) {
        for (const Element& s : gens)
            if (s == g) return;
        gens.push_back(g);
    };
    for (auto& [name, q] : G.generators) admit(Element::of(G.machine, q));
    for (auto& [name, q] : G.generators) admit(inv(Element::of(G.machine, q)));

    std::vector<BallEntry> ball;
    std::unordered_map<std::string, size_t> seen;
    ball.push_back({Element::identity(G.p), 0});
    seen.emplace(ball[0].g.key(), 0);
    size_t layer_begin = 0;
    for (int len = 1; len <= radius; ++len) {
        size_t layer_end = ball.size();
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (const Element& s : gens) {
                Element g = mul(ball[i].g, s);
                if (seen.emplace(g.key(), ball.size()).second) {
                    if (ball.size() >= max_size)
                        throw BallTooLarge("ball of radius " + std::to_string(radius) +
                                           " exceeds " + std::to_string(max_size) + " elements");
                    ball.push_back({std::move(g), len});
                }
            }
        layer_begin = layer_end;
    }
    return ball;
}

Perm level_perm(const Element& g, int m) {
    const int p = g.alphabet();
    uint64_t points = 1;
    for (int i = 0; i < m; ++i) points *= p;
    Perm perm(points);
    Word w(m);
    for (uint64_t idx = 0; idx < points; ++idx) {
        uint64_t v = idx;
        for (int i = m - 1; i >= 0; --i) {
            w[i] = static_cast<int>(v % p) + 1;
            v /= p;
        }
        Word img = g.apply(w);
        uint64_t out = 0;
        for (int i = 0; i < m; ++i) out = out * p + (img[i] - 1);
        perm[idx] = static_cast<int32_t>(out);
    }
    return perm;
}

LevelQuotient level_quotient(const GroupPresentation& G, int m, uint64_t max_points) {
    if (m < 1) throw LevelTooLarge("level must be >= 1");
    uint64_t points = 1;
    for (int i = 0; i < m; ++i) {
        points *= G.p;
        if (points > max_points)
            throw LevelTooLarge("p^m = " + std::to_string(points) + "+ exceeds " +
                                std::to_string(max_points) + " points");
    }
    LevelQuotient q;
    q.level = m;
    for (auto& [name, state] : G.generators) {
        q.names.push_back(name);
        q.perms.push_back(level_perm(Element::of(G.machine, state), m));
    }
    q.order = make_chain(static_cast<int>(points), q.perms).order();
    return q;
}

namespace {

// Level-m data for the Grigorchuk group and its subgroup K.
struct GrigLevel {
    FactoredInt index;
    StabilizerChain k_chain;
};

GrigLevel grig_level(int m) {
    GroupPresentation G = grigorchuk();
    LevelQuotient q = level_quotient(G, m);
    int points = static_cast<int>(q.perms[0].size());
    std::vector<Perm> seeds;
    for (const Element& k : grig_k_generators()) seeds.push_back(level_perm(k, m));
    StabilizerChain k_chain = normal_closure_chain(points, seeds, q.perms);
    FactoredInt index = q.order.divide(k_chain.order());
    return {index, std::move(k_chain)};
}

}  // namespace

KMembership::KMembership(int level_limit) : mstar_(-1) {
    for (int m = 1; m <= level_limit; ++m) {
        GrigLevel lv = grig_level(m);
        if (lv.index == FactoredInt::of(16)) {
            mstar_ = m;
            k_chain_ = std::make_shared<const StabilizerChain>(std::move(lv.k_chain));
            return;
        }
    }
    throw QuotientLimitExceeded("image index of K never reaches 16 up to level " +
                                std::to_string(level_limit));
}

KVerdict KMembership::test(const Element& g) const {
    if (g.alphabet() != 2) throw AlphabetMismatch(g.alphabet(), 2);
    return k_chain_->contains(level_perm(g, mstar_)) ? KVerdict::InK : KVerdict::NotInK;
}

FactoredInt KMembership::index_at(int m) { return grig_level(m).index; }

Rational::Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string Rational::to_string() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

ContractionEstimate estimate_contraction(const GroupPresentation& G, int L, size_t max_ball) {
    std::vector<BallEntry> ball = enumerate_ball(G, L, max_ball);
    std::unordered_map<std::string, int> length_of;
    for (const BallEntry& e : ball) length_of.emplace(e.g.key(), e.length);

    ContractionEstimate est;
    est.radius = L;
    est.ball_size = ball.size();

    const int p = G.p;
    // Candidate slopes form the grid k/p, k = 1..p.  Every slope admits the
    // finite bound C = max(0, max over samples of |g@x| - (k/p)|g|), and
    // smaller slopes only need larger offsets, so the smallest grid slope 1/p
    // is the minimal feasible one; report it with its least covering C,
    // tracked as a numerator over the fixed denominator p.
    long long worst = 0;
    for (const BallEntry& e : ball) {
        RootDecomposition d = root_decompose(e.g);
        for (const Element& s : d.sections) {
            auto it = length_of.find(s.key());
            if (it == length_of.end()) {
                ++est.skipped;
                continue;
            }
            ++est.samples;
            worst = std::max(worst, static_cast<long long>(it->second) * p -
                                        static_cast<long long>(e.length));
        }
    }
    est.eta_hat = Rational(1, p);
    est.c_hat = Rational(worst, p);
    return est;
}

}  // namespace agr
