// acceptance -- end-to-end checks of the certified computations.
//
// Each criterion prints exactly one PASS/FAIL line; the exit code is the
// number of failures.  Numbers asserted here were produced once by the
// library, verified against independent oracles, and frozen.
#include <chrono>
#include <cstdio>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "agr/element.hpp"
#include "agr/engel.hpp"
#include "agr/expr.hpp"
#include "agr/groups.hpp"
#include "agr/mealy.hpp"

#include "oracle.hpp"

using namespace agr;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail = "") {
    std::printf("criterion %d: %s - %s%s%s\n", n, ok ? "PASS" : "FAIL", what.c_str(),
                detail.empty() ? "" : ": ", detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// criterion 1: the period-9 quadruple below 111112 certifies, in under 10 s.
void criterion1() {
    GroupPresentation G = grigorchuk();
    Element a = G.element("a"), b = G.element("b"), c = G.element("c");
    Element x2 = power(commutator(a, b), 2);
    Element x2ca = conjugate(x2, mul(c, a));
    Element x2cab = conjugate(x2ca, b);
    std::vector<Element> a0{mul(inv(x2), x2ca), mul(mul(inv(x2ca), x2), x2cab),
                            mul(inv(x2cab), inv(x2)), x2};

    Clock::time_point t0 = Clock::now();
    PeriodicCertificate cert = lemma_check(a0, 9, Word{1, 1, 1, 1, 1, 2});
    double dt = seconds_since(t0);

    bool ok = cert.checked && dt < 10.0;
    report(1, ok, "Grigorchuk period-9 quadruple certifies below word 111112",
           cert.checked ? "" : cert.detail);
}

/// criterion 2: the Gupta-Sidki triple ([a^-1,t], [a,t]^a, [t^-1,a^-1]),
/// period 4 below word 122.
void criterion2() {
    GroupPresentation S = gupta_sidki();
    Element a = S.element("a"), t = S.element("t");
    std::vector<Element> printed{commutator(inv(a), t), conjugate(commutator(a, t), a),
                                 commutator(inv(t), inv(a))};

    Clock::time_point t0 = Clock::now();
    PeriodicCertificate cert = lemma_check(printed, 4, Word{1, 2, 2});
    double dt = seconds_since(t0);

    // the symmetric variant that the library ships as gs_periodic_seed()
    PeriodicSeed variant = gs_periodic_seed();
    PeriodicCertificate vcert = lemma_check(variant.tuple, variant.period, variant.word);

    bool ok = cert.checked && dt < 10.0;
    report(2, ok, "Gupta-Sidki triple ([a^-1,t], [a,t]^a, [t^-1,a^-1]) certifies at period 4 below 122",
           cert.checked ? ""
                        : cert.detail + "; the symmetric variant (x, x^a, x^(a^-1)) with x = [a^-1,t] " +
                              (vcert.checked ? "does certify" : "also fails"));
}

/// criterion 3: every pair over involutive h decides EngelYes with c <= 64,
/// matching the alternating-square identity and the direct iteration.
void criterion3(std::vector<ExploreReport>& explores) {
    GroupPresentation G = grigorchuk();
    ExprEnv env = G.env();
    std::vector<std::string> gnames{"a", "b", "c", "d", "a*b", "a*d", "(b*a)^4*c"};
    std::vector<std::string> hnames{"a", "b", "c", "d"};

    bool ok = true;
    std::string detail;
    for (const std::string& gn : gnames) {
        for (const std::string& hn : hnames) {
            Element g = parse_expression(gn, env);
            Element h = parse_expression(hn, env);
            PairDecision p = decide_engel_pair(g, h);
            bool pair_ok = p.verdict == Verdict::EngelYes && p.c >= 0 && p.c <= 64 &&
                           engel_iterate(g, h, p.c).trivial();
            // h^2 = 1, so E_{1+k}(g,h) = [g,h]^((-2)^k)
            Element x = commutator(g, h);
            long long e = 1;
            for (int k = 0; pair_ok && 1 + k <= p.c; ++k) {
                pair_ok = engel_iterate(g, h, 1 + k) == power(x, e);
                e *= -2;
            }
            explores.push_back(explore(start_tuple(g, h, 2)));
            pair_ok = pair_ok && explores.back().verdict == Verdict::EngelYes;
            if (!pair_ok && detail.empty()) detail = "first failing pair (" + gn + ", " + hn + ")";
            ok = ok && pair_ok;
        }
    }
    report(3, ok, "28 pairs over involutive h decide EngelYes with c <= 64", detail);
}

/// criterion 4: the order-4 element h = ad and the inserted witness g keep
/// the anchor section through full periods: E_{9m}(g,h) @ v1 (111112)^m is
/// the first quadruple entry, m = 0 and 1.
void criterion4(std::vector<ExploreReport>& explores) {
    GroupPresentation G = grigorchuk();
    Element h = mul(G.element("a"), G.element("d"));
    OrderResult ord = order_bounded(h);
    PeriodicSeed seed = grig_periodic_seed();

    bool ok = ord.bounded && ord.value == 4;
    std::string detail = ok ? "" : "order of ad is not 4";
    if (ok) {
        WitnessData w = build_witness(h, seed.tuple);
        Word down = w.orbit[0];
        for (int m = 0; m <= 1 && ok; ++m) {
            Element ec = engel_iterate(w.g, h, 9 * m);
            Element sec = section_at(ec, down);
            ok = !sec.trivial() && equals(sec, seed.tuple[0]);
            if (!ok) detail = "anchor section mismatch at m = " + std::to_string(m);
            for (int x : seed.word) down.push_back(x);
        }
        explores.push_back(explore(TupleVertex{seed.tuple}));
        explores.push_back(explore(start_tuple(w.g, h, 4)));
        if (ok && explores[explores.size() - 2].verdict != Verdict::EngelNo) {
            ok = false;
            detail = "quadruple graph did not certify EngelNo";
        }
    }
    report(4, ok, "witness for h = ad of order 4 returns its anchor section after 0 and 9 steps",
           detail);
}

/// criterion 5: iterates of ((ba)^4 c, ad) grow inside a linear envelope and
/// share non-trivial states nine steps apart, including at c = 23.
void criterion5() {
    GroupPresentation G = grigorchuk();
    Element g = parse_expression("(b*a)^4*c", G.env());
    Element h = parse_expression("a*d", G.env());
    KMembership k;
    SearchResult sr = periodic_state_search(g, h, 32, 9, {}, &k);

    // golden growth constant, measured once: sizes stay below |E_1|*(1+c)
    const int growth_constant = 1;
    bool ok = sr.c_reached == 32 && sr.profile.size() == 33;
    std::string detail = ok ? "" : "iteration stopped early";
    for (int c = 1; c <= 30 && ok; ++c) {
        ok = sr.profile[c] <= sr.profile[1] * (1 + c) * growth_constant;
        if (!ok) detail = "size of iterate " + std::to_string(c) + " escapes the linear envelope";
    }
    if (ok) {
        std::set<int> period9;
        for (const SearchCandidate& sc : sr.candidates) {
            if (sc.period != 9 || sc.c > 30) continue;
            bool nontrivial = false;
            for (const Element& x : sc.common) nontrivial = nontrivial || !x.trivial();
            if (nontrivial) period9.insert(sc.c);
        }
        ok = !period9.empty() && period9.count(23) == 1;
        if (!ok) detail = "no period-9 state alignment at c = 23";
    }
    report(5, ok, "((ba)^4 c, ad) iterates grow linearly and realign states at period 9, c = 23",
           detail);
}

/// criterion 6: the K-image index stabilizes at 16 and membership classifies
/// generators and 100 random K-products correctly.
void criterion6() {
    GroupPresentation G = grigorchuk();
    KMembership k;
    int mstar = k.stable_level();

    bool ok = KMembership::index_at(mstar) == FactoredInt::of(16) &&
              KMembership::index_at(mstar + 1) == FactoredInt::of(16) &&
              (mstar == 1 || !(KMembership::index_at(mstar - 1) == FactoredInt::of(16)));
    std::string detail = ok ? "" : "index does not stabilize at 16";

    std::array<Element, 3> kg = grig_k_generators();
    if (ok) {
        ok = k.test(kg[0]) == KVerdict::InK && k.test(G.element("a")) == KVerdict::NotInK;
        if (!ok) detail = "x or a misclassified";
    }
    if (ok) {
        std::mt19937_64 rng(2026);
        std::vector<BallEntry> ball = enumerate_ball(G, 4);
        Element prod = Element::identity(2);
        for (int i = 0; i < 100 && ok; ++i) {
            Element sample = conjugate(kg[rng() % 3], ball[rng() % ball.size()].g);
            prod = mul(prod, sample);
            ok = k.test(sample) == KVerdict::InK && k.test(prod) == KVerdict::InK;
            if (prod.state_count() > 600) prod = kg[rng() % 3];
        }
        if (!ok) detail = "a K-product was rejected";
    }
    report(6, ok,
           "K-image index stabilizes at 16 from level " + std::to_string(mstar) +
               "; membership classifies generators and 100 K-products",
           detail);
}

/// criterion 7: randomized identity suite against the letter-by-letter
/// oracle; every named identity checked on at least 1000 cases in total.
void criterion7() {
    std::mt19937_64 rng(40289);
    GroupPresentation G = grigorchuk();
    GroupPresentation S = gupta_sidki();
    std::vector<Element> grig_gens{G.element("a"), G.element("b"), G.element("c"),
                                   G.element("d")};
    std::vector<Element> gs_gens{S.element("a"), S.element("t")};

    size_t cases = 0;
    bool ok = true;
    std::string detail;
    auto fail = [&](const std::string& what) {
        if (ok) detail = what;
        ok = false;
    };

    for (int iter = 0; iter < 250 && ok; ++iter) {
        bool use_gs = iter % 3 == 2;
        int p = use_gs ? 3 : 2;
        const std::vector<Element>& gens = use_gs ? gs_gens : grig_gens;
        Element g = oracle::random_product(rng, gens, 2 + static_cast<int>(rng() % 5));
        Element h = oracle::random_product(rng, gens, 2 + static_cast<int>(rng() % 5));
        Word u = oracle::random_word(rng, p, 1 + static_cast<int>(rng() % 3));
        Word v = oracle::random_word(rng, p, 1 + static_cast<int>(rng() % 3));
        Word uv = u;
        uv.insert(uv.end(), v.begin(), v.end());

        // section composition: g@(uv) = (g@u)@v
        Element lhs = section_at(g, uv);
        Element rhs = section_at(section_at(g, u), v);
        ++cases;
        if (!oracle::same_action(lhs.machine(), 0, rhs.machine(), 0, 8)) fail("section composition");

        // insertion inverts sectioning: (v*g)@v = g
        ++cases;
        if (ok && !oracle::same_action(section_at(insert(v, g), v).machine(), 0, g.machine(), 0, 8))
            fail("insert/section inversion");

        // twist: (v*g)^h = v^h * (g^{h@v})
        ++cases;
        if (ok) {
            Element tl = conjugate(insert(v, g), h);
            Element tr = insert(h.apply(v), conjugate(g, section_at(h, v)));
            if (!oracle::same_action(tl.machine(), 0, tr.machine(), 0, 8)) fail("twist identity");
        }

        // products act by composition, letter for letter
        ++cases;
        if (ok) {
            Word w = oracle::random_word(rng, p, 12);
            Word via_product = oracle::image(mul(g, h).machine(), 0, w);
            Word via_steps = oracle::image(h.machine(), 0, oracle::image(g.machine(), 0, w));
            if (via_product != via_steps) fail("product/action homomorphism");
        }

        // minimization preserves the action on words up to length 12
        ++cases;
        if (ok) {
            MealyMachine m = oracle::random_machine(rng, p, 2 + static_cast<int>(rng() % 4));
            int s = static_cast<int>(rng() % m.states());
            PointedMachine mini = minimize(m, s);
            if (!oracle::same_action(m, s, mini.machine, mini.start, 12)) fail("minimization");
        }
    }

    report(7, ok && cases >= 1000,
           "identity suite held on " + std::to_string(cases) + " randomized oracle cases", detail);
}

/// criterion 8: the section-growth estimate at radius 8 is exactly 1/2.
void criterion8() {
    ContractionEstimate ce = estimate_contraction(grigorchuk(), 8);
    bool ok = ce.eta_hat == Rational(1, 2);
    report(8, ok, "contraction estimate at radius 8 is eta = " + ce.eta_hat.to_string(),
           ok ? "" : "expected 1/2");
}

/// criterion 9: no explored path of the earlier runs strings together more
/// consecutive non-descending edges than the tuple length.
void criterion9(const std::vector<ExploreReport>& explores) {
    bool ok = !explores.empty();
    std::string detail = ok ? "" : "no exploration reports collected";
    for (const ExploreReport& r : explores) {
        if (r.vertices.empty()) continue;
        int n = static_cast<int>(r.vertices[0].entries.size());
        if (r.max_nondescend_run > n) {
            ok = false;
            detail = "a run of " + std::to_string(r.max_nondescend_run) +
                     " non-descending edges exceeds the tuple length " + std::to_string(n);
        }
    }
    report(9, ok,
           "descent within n steps held across " + std::to_string(explores.size()) +
               " exploration runs",
           detail);
}

}  // namespace

int main() {
    std::vector<ExploreReport> explores;
    criterion1();
    criterion2();
    criterion3(explores);
    criterion4(explores);
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9(explores);
    if (failures == 0)
        std::printf("all 9 criteria passed\n");
    else
        std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
