// agr -- command line calculator for automaton groups
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agr/element.hpp"
#include "agr/engel.hpp"
#include "agr/expr.hpp"
#include "agr/groups.hpp"
#include "agr/mealy.hpp"

namespace {

using namespace agr;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kResource = 2;

/// Flags shared by every subcommand.
struct Common {
    std::string group = "grigorchuk";
    std::vector<std::string> defines;
    std::string format = "text";
    int max_states = 20000;
    int max_vertices = 100000;
    int max_c = 64;

    EngelBudget budget() const {
        EngelBudget b;
        b.max_vertices = static_cast<size_t>(max_vertices);
        b.max_states = max_states;
        b.max_c = max_c;
        return b;
    }
};

void add_common(CLI::App* sub, Common& o) {
    sub->set_help_flag("--help", "print this help and exit");
    sub->add_option("-G,--group", o.group,
                    "built-in group (grigorchuk, gupta-sidki) or path to a machine file")
        ->capture_default_str();
    sub->add_option("--define", o.defines, "extra binding name=expr, evaluated left to right");
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"text", "records"}))
        ->capture_default_str();
    sub->add_option("--max-states", o.max_states, "cap on canonical machine size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-vertices", o.max_vertices, "cap on explored tuples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--max-c", o.max_c, "cap on direct iteration depth")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

GroupPresentation load_group(const std::string& spec) {
    if (spec == "grigorchuk") return grigorchuk();
    if (spec == "gupta-sidki") return gupta_sidki();
    std::ifstream in(spec);
    if (!in) throw std::runtime_error("cannot open group file '" + spec + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return group_from_machine(spec, parse_machine(text.str()));
}

ExprEnv build_env(const GroupPresentation& G, const std::vector<std::string>& defines) {
    ExprEnv env = G.env();
    for (const std::string& d : defines) {
        size_t eq = d.find('=');
        if (eq == std::string::npos || eq == 0)
            throw std::runtime_error("bad --define '" + d + "', expected name=expr");
        env[d.substr(0, eq)] = parse_expression(d.substr(eq + 1), env);
    }
    return env;
}

void print_element(std::ostream& os, const Element& g) {
    RootDecomposition d = root_decompose(g);
    os << "states: " << g.state_count() << "\n";
    os << "trivial: " << (g.trivial() ? "yes" : "no") << "\n";
    os << "root:";
    for (int x : d.pi) os << ' ' << x;
    os << "\n" << g.serialize();
}

PeriodicSeed builtin_seed(const GroupPresentation& G) {
    if (G.name == "grigorchuk") return grig_periodic_seed();
    if (G.name == "gupta-sidki") return gs_periodic_seed();
    throw std::runtime_error("no built-in periodic tuple for group '" + G.name + "'");
}

std::optional<KMembership> maybe_k_membership(const GroupPresentation& G) {
    if (G.name != "grigorchuk") return std::nullopt;
    return KMembership();
}

void print_certificate(std::ostream& os, const PeriodicCertificate& cert) {
    os << "period: " << cert.period << "\n";
    os << "word: " << format_word(cert.word, cert.a0.at(0).alphabet()) << "\n";
    os << "tuple sizes:";
    for (const Element& e : cert.a0) os << ' ' << e.state_count();
    os << "\n";
    os << "checked: " << (cert.checked ? "yes" : "no") << "\n";
    if (!cert.checked) os << "failure: " << cert.detail << "\n";
}

int run_act(const Common& o, const std::string& expr, const std::string& word) {
    GroupPresentation G = load_group(o.group);
    Element g = parse_expression(expr, build_env(G, o.defines));
    std::cout << format_word(g.apply(parse_word(word, G.p)), G.p) << "\n";
    return kOk;
}

int run_mul(const Common& o, const std::vector<std::string>& exprs) {
    GroupPresentation G = load_group(o.group);
    ExprEnv env = build_env(G, o.defines);
    Element g = Element::identity(G.p);
    for (const std::string& e : exprs) g = mul(g, parse_expression(e, env));
    print_element(std::cout, g);
    return kOk;
}

int run_order(const Common& o, const std::string& expr, size_t limit) {
    GroupPresentation G = load_group(o.group);
    Element g = parse_expression(expr, build_env(G, o.defines));
    OrderResult r = order_bounded(g, limit);
    if (r.bounded) {
        std::cout << "order: " << r.value << "\n";
        return kOk;
    }
    if (r.proven_infinite) {
        std::cout << "order: infinite\n";
        return kOk;
    }
    std::cout << "order: unknown (more than " << limit << " elements explored)\n";
    return kResource;
}

int run_section(const Common& o, const std::string& expr, const std::string& word) {
    GroupPresentation G = load_group(o.group);
    Element g = parse_expression(expr, build_env(G, o.defines));
    print_element(std::cout, section_at(g, parse_word(word, G.p)));
    return kOk;
}

int run_insert(const Common& o, const std::string& expr, const std::string& word) {
    GroupPresentation G = load_group(o.group);
    Element g = parse_expression(expr, build_env(G, o.defines));
    print_element(std::cout, insert(parse_word(word, G.p), g));
    return kOk;
}

int run_engel_pair(const Common& o, const std::string& gexpr, const std::string& hexpr) {
    GroupPresentation G = load_group(o.group);
    ExprEnv env = build_env(G, o.defines);
    Element g = parse_expression(gexpr, env);
    Element h = parse_expression(hexpr, env);
    PairDecision d = decide_engel_pair(g, h, o.budget());
    if (o.format == "records") {
        if (d.report) {
            std::cout << d.report->records();
        } else {
            std::cout << "verdict " << to_string(d.verdict) << " c=";
            if (d.c >= 0)
                std::cout << d.c;
            else
                std::cout << "-";
            std::cout << " witness=- truncated=0 maxrun=0\n";
        }
    } else {
        std::cout << "verdict: " << to_string(d.verdict) << "\n";
        if (d.verdict == Verdict::EngelYes)
            std::cout << "iterations: " << d.c << " (E_" << d.c << "(g,h) = 1)\n";
        std::cout << "decided by: " << (d.by_iteration ? "direct iteration" : "tuple graph")
                  << "\n";
        if (d.report) {
            const ExploreReport& r = *d.report;
            std::cout << "graph: " << r.vertices.size() << " tuples, " << r.edges.size()
                      << " edges, " << r.cycles.size() << " cycles"
                      << (r.truncated ? " (truncated)" : "") << "\n";
            std::cout << "longest non-descending run: " << r.max_nondescend_run << "\n";
            if (d.verdict == Verdict::EngelNo) {
                std::cout << "witness cycle:";
                for (int32_t v : r.cycles[r.witness_cycle]) std::cout << ' ' << v;
                std::cout << "\n";
            }
        }
    }
    return d.verdict == Verdict::ResourceExceeded ? kResource : kOk;
}

int run_engel_element(const Common& o, const std::string& hexpr, int radius, bool seed_builtin) {
    GroupPresentation G = load_group(o.group);
    Element h = parse_expression(hexpr, build_env(G, o.defines));
    OrderResult ord = order_bounded(h);
    if (!ord.bounded) {
        std::cout << (ord.proven_infinite ? "h has infinite order; out of scope\n"
                                          : "order of h not decided within the limit\n");
        return kResource;
    }
    uint64_t n = std::lcm<uint64_t>(std::max<uint64_t>(ord.value, 1), G.p);
    std::cout << "order: " << ord.value << "\n";
    std::cout << "tuple length: " << n << "\n";

    // Certificate route first: a verified periodic tuple whose difference
    // iterates all stay inside K decides every h whose order its length
    // divides, with no sweep at all.
    if (std::optional<KMembership> k = maybe_k_membership(G)) {
        try {
            PeriodicSeed s = builtin_seed(G);
            PeriodicCertificate cert = lemma_check(s.tuple, s.period, s.word);
            if (cert.checked) {
                std::vector<TupleVertex> cycle;
                std::vector<Element> cur = s.tuple;
                for (int i = 0; i < s.period; ++i) {
                    cycle.push_back(TupleVertex{cur});
                    std::vector<Element> next;
                    next.reserve(cur.size());
                    for (size_t j = 0; j < cur.size(); ++j)
                        next.push_back(mul(inv(cur[j]), cur[(j + 1) % cur.size()]));
                    cur = std::move(next);
                }
                BranchCertificate bc = branch_certificate(cycle, *k);
                if (bc.certified && ord.value % bc.n == 0) {
                    std::cout << "periodic tuple certificate: period " << s.period
                              << ", all difference iterates in K^" << bc.n << "\n";
                    std::cout << "certified: no element whose order is a multiple of " << bc.n
                              << " is Engel\n";
                    std::cout << "h is not an Engel element\n";
                    return kOk;
                }
            }
        } catch (const std::runtime_error&) {
            // no built-in tuple for this group; fall through to the sweep
        }
    }

    std::vector<TupleVertex> seeds;
    if (seed_builtin) {
        PeriodicSeed s = builtin_seed(G);
        if (s.tuple.size() != n)
            throw std::runtime_error("built-in tuple has length " +
                                     std::to_string(s.tuple.size()) + ", need " +
                                     std::to_string(n));
        seeds.push_back(TupleVertex{s.tuple});
    }

    SurveyResult sr = exponent_survey(G, static_cast<int>(n), radius, o.budget(), seeds);
    std::cout << "tuples examined: " << sr.tuples << (sr.truncated ? " (truncated)" : "")
              << "\n";
    std::cout << "non-trivial cycles: " << sr.cycles.size() << "\n";

    std::optional<KMembership> k = maybe_k_membership(G);
    for (size_t i = 0; i < sr.cycles.size(); ++i) {
        std::cout << "cycle " << i << ": length " << sr.cycles[i].size();
        if (k) {
            BranchCertificate bc = branch_certificate(sr.cycles[i], *k);
            if (bc.certified) {
                std::cout << " passes through K^" << n << " at position " << bc.vertex << "\n";
                std::cout << "certified: no element whose order is a multiple of " << n
                          << " is Engel\n";
                if (ord.value % n == 0) {
                    std::cout << "h is not an Engel element\n";
                    return kOk;
                }
                std::cout << "h has order " << ord.value << ", not a multiple of " << n
                          << "; h itself stays undecided\n";
                return kResource;
            }
        }
        std::cout << "\n";
    }
    std::cout << (sr.cycles.empty() ? "no obstruction found; sweep is partial, not conclusive\n"
                                    : "cycles found but none certified through K\n");
    return kResource;
}

int run_survey(const Common& o, int n, int radius, bool seed_builtin) {
    GroupPresentation G = load_group(o.group);
    std::vector<TupleVertex> seeds;
    if (seed_builtin) {
        PeriodicSeed s = builtin_seed(G);
        if (static_cast<int>(s.tuple.size()) != n)
            throw std::runtime_error("built-in tuple has length " +
                                     std::to_string(s.tuple.size()) + ", need " +
                                     std::to_string(n));
        seeds.push_back(TupleVertex{s.tuple});
    }
    SurveyResult sr = exponent_survey(G, n, radius, o.budget(), seeds);
    std::cout << "tuples examined: " << sr.tuples << (sr.truncated ? " (truncated)" : "")
              << "\n";
    std::cout << "non-trivial cycles: " << sr.cycles.size() << "\n";
    std::optional<KMembership> k = maybe_k_membership(G);
    for (size_t i = 0; i < sr.cycles.size(); ++i) {
        std::cout << "cycle " << i << ": length " << sr.cycles[i].size() << ", entry sizes";
        for (const TupleVertex& t : sr.cycles[i]) {
            std::cout << " (";
            for (size_t j = 0; j < t.entries.size(); ++j)
                std::cout << (j ? "," : "") << t.entries[j].state_count();
            std::cout << ")";
        }
        if (k) {
            BranchCertificate bc = branch_certificate(sr.cycles[i], *k);
            std::cout << (bc.certified ? " [in K]" : " [not certified in K]");
        }
        std::cout << "\n";
    }
    if (sr.truncated && sr.cycles.empty()) return kResource;
    return kOk;
}

int run_lemma(const Common& o, const std::string& which, const std::vector<std::string>& entries,
              int period, const std::string& word) {
    PeriodicSeed seed;
    if (!entries.empty()) {
        if (period <= 0 || word.empty())
            throw std::runtime_error("custom tuples need --period and --word");
        GroupPresentation G = load_group(o.group);
        ExprEnv env = build_env(G, o.defines);
        for (const std::string& e : entries) seed.tuple.push_back(parse_expression(e, env));
        seed.period = period;
        seed.word = parse_word(word, G.p);
    } else if (which == "grigorchuk") {
        seed = grig_periodic_seed();
    } else if (which == "gupta-sidki") {
        seed = gs_periodic_seed();
    } else {
        throw std::runtime_error("expected 'lemma grigorchuk', 'lemma gupta-sidki', or --entry");
    }
    PeriodicCertificate cert = lemma_check(seed.tuple, seed.period, seed.word);
    print_certificate(std::cout, cert);
    return cert.checked ? kOk : kResource;
}

int run_witness(const Common& o, const std::string& hexpr, const std::vector<std::string>& entries,
                int level_limit) {
    GroupPresentation G = load_group(o.group);
    ExprEnv env = build_env(G, o.defines);
    Element h = parse_expression(hexpr, env);
    std::vector<Element> a0;
    if (entries.empty()) {
        a0 = builtin_seed(G).tuple;
    } else {
        for (const std::string& e : entries) a0.push_back(parse_expression(e, env));
    }
    WitnessData w = build_witness(h, a0, level_limit);
    std::cout << "level: " << w.level << "\n";
    std::cout << "orbit:";
    for (const Word& v : w.orbit) std::cout << ' ' << format_word(v, G.p);
    std::cout << "\n";
    std::cout << "witness states: " << w.g.state_count() << "\n";
    bool anchored = equals(section_at(w.g, w.orbit[0]), a0[0]);
    std::cout << "g@v1 = first tuple entry: " << (anchored ? "yes" : "no") << "\n";
    return kOk;
}

int run_search(const Common& o, const std::string& gexpr, const std::string& hexpr, int cmax,
               int pmax, size_t top) {
    GroupPresentation G = load_group(o.group);
    ExprEnv env = build_env(G, o.defines);
    Element g = parse_expression(gexpr, env);
    Element h = parse_expression(hexpr, env);
    std::optional<KMembership> k = maybe_k_membership(G);
    SearchResult r = periodic_state_search(g, h, cmax, pmax, o.budget(), k ? &*k : nullptr);
    std::cout << "sizes:";
    for (int s : r.profile) std::cout << ' ' << s;
    std::cout << "\n";
    if (r.c_reached < cmax)
        std::cout << "iteration stopped at c=" << r.c_reached << " (budget)\n";
    std::cout << "candidates: " << r.candidates.size() << "\n";
    for (size_t i = 0; i < r.candidates.size() && i < top; ++i) {
        const SearchCandidate& c = r.candidates[i];
        std::cout << "c=" << c.c << " period=" << c.period << " common states=" << c.common.size()
                  << " total size=" << c.total_states
                  << (c.has_k_member ? " [contains K-member]" : "") << "\n";
    }
    return kOk;
}

int run_contraction(const Common& o, int radius) {
    GroupPresentation G = load_group(o.group);
    ContractionEstimate e = estimate_contraction(G, radius);
    std::cout << "eta: " << e.eta_hat.to_string() << "\n";
    std::cout << "C: " << e.c_hat.to_string() << "\n";
    std::cout << "radius: " << e.radius << "\n";
    std::cout << "ball size: " << e.ball_size << "\n";
    std::cout << "samples: " << e.samples << " (skipped " << e.skipped << ")\n";
    return kOk;
}

int run_quotient(const Common& o, int level, bool k_index) {
    GroupPresentation G = load_group(o.group);
    LevelQuotient q = level_quotient(G, level);
    std::cout << "level: " << q.level << "\n";
    std::cout << "points: " << q.perms.at(0).size() << "\n";
    std::cout << "generators:";
    for (const std::string& n : q.names) std::cout << ' ' << n;
    std::cout << "\n";
    std::cout << "order: " << q.order.to_string() << "\n";
    if (k_index) {
        if (G.name != "grigorchuk")
            throw std::runtime_error("--k-index only applies to the Grigorchuk group");
        std::cout << "K-image index: " << KMembership::index_at(level).to_string() << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"automaton group calculator: canonical elements, orders, Engel decisions"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    Common common;
    int rc = kOk;

    std::string expr, gexpr, hexpr, word, which;
    std::vector<std::string> exprs, entries;
    size_t order_limit = 4096;
    int radius = 1, n = 2, period = 0, level = 1, level_limit = 10;
    int cmax = 32, pmax = 12;
    bool seed_builtin = false, k_index = false;

    CLI::App* act = app.add_subcommand("act", "apply an element to a word");
    add_common(act, common);
    act->add_option("-e,--element", expr, "word expression")->required();
    act->add_option("-w,--word", word, "input word, e.g. 12 or 1,2")->required();
    act->callback([&] { rc = run_act(common, expr, word); });

    CLI::App* mul_cmd = app.add_subcommand("mul", "multiply expressions, print canonical form");
    add_common(mul_cmd, common);
    mul_cmd->add_option("-e,--element", exprs, "word expression (repeatable)")->required();
    mul_cmd->callback([&] { rc = run_mul(common, exprs); });

    CLI::App* order = app.add_subcommand("order", "order of an element");
    add_common(order, common);
    order->add_option("-e,--element", expr, "word expression")->required();
    order->add_option("--limit", order_limit, "element budget for the order graph")
        ->capture_default_str();
    order->callback([&] { rc = run_order(common, expr, order_limit); });

    CLI::App* section = app.add_subcommand("section", "section g@v below a vertex");
    add_common(section, common);
    section->add_option("-e,--element", expr, "word expression")->required();
    section->add_option("-w,--word", word, "vertex v")->required();
    section->callback([&] { rc = run_section(common, expr, word); });

    CLI::App* insert_cmd = app.add_subcommand("insert", "insertion v*g acting below a vertex");
    add_common(insert_cmd, common);
    insert_cmd->add_option("-e,--element", expr, "word expression")->required();
    insert_cmd->add_option("-w,--word", word, "vertex v")->required();
    insert_cmd->callback([&] { rc = run_insert(common, expr, word); });

    CLI::App* pair = app.add_subcommand("engel-pair", "decide whether (g,h) is an Engel pair");
    add_common(pair, common);
    pair->add_option("-g", gexpr, "element g")->required();
    pair->add_option("-h", hexpr, "element h (must have finite order)")->required();
    pair->callback([&] { rc = run_engel_pair(common, gexpr, hexpr); });

    CLI::App* elem = app.add_subcommand(
        "engel-element", "search for a certificate that h is not an Engel element");
    add_common(elem, common);
    elem->add_option("-h", hexpr, "element h")->required();
    elem->add_option("-r,--radius", radius, "ball radius for start tuples")
        ->capture_default_str();
    elem->add_flag("--seed-lemma", seed_builtin, "also start from the built-in periodic tuple");
    elem->callback([&] { rc = run_engel_element(common, hexpr, radius, seed_builtin); });

    CLI::App* survey =
        app.add_subcommand("exponent-survey", "sweep n-tuples over a ball for cycles");
    add_common(survey, common);
    survey->add_option("-n", n, "tuple length (multiple of the alphabet size)")->required();
    survey->add_option("-r,--radius", radius, "ball radius")->capture_default_str();
    survey->add_flag("--seed-lemma", seed_builtin, "also start from the built-in periodic tuple");
    survey->callback([&] { rc = run_survey(common, n, radius, seed_builtin); });

    CLI::App* lemma = app.add_subcommand("lemma", "verify a periodic difference cycle");
    add_common(lemma, common);
    lemma->add_option("certificate", which, "built-in certificate: grigorchuk or gupta-sidki");
    lemma->add_option("--entry", entries, "tuple entry expression (repeatable)");
    lemma->add_option("--period", period, "difference steps for a custom tuple");
    lemma->add_option("--word", word, "fixed word for a custom tuple");
    lemma->callback([&] { rc = run_lemma(common, which, entries, period, word); });

    CLI::App* witness = app.add_subcommand(
        "witness", "build g from an orbit of h so that (g,h) inherits a periodic cycle");
    add_common(witness, common);
    witness->add_option("-h", hexpr, "element h of finite order")->required();
    witness->add_option("--entry", entries, "tuple entry (default: built-in periodic tuple)");
    witness->add_option("--level-limit", level_limit, "orbit search depth")
        ->capture_default_str();
    witness->callback([&] { rc = run_witness(common, hexpr, entries, level_limit); });

    CLI::App* search = app.add_subcommand("search", "scan E_c sizes for periodic common states");
    add_common(search, common);
    search->add_option("-g", gexpr, "element g")->required();
    search->add_option("-h", hexpr, "element h")->required();
    search->add_option("--cmax", cmax, "largest iteration depth")->capture_default_str();
    search->add_option("--pmax", pmax, "largest period tested")->capture_default_str();
    search->callback([&] { rc = run_search(common, gexpr, hexpr, cmax, pmax, 10); });

    CLI::App* contraction = app.add_subcommand("contraction", "empirical contraction bound");
    add_common(contraction, common);
    contraction->add_option("-L,--radius", radius, "ball radius")->default_val(8);
    contraction->callback([&] { rc = run_contraction(common, radius); });

    CLI::App* quotient = app.add_subcommand("quotient", "finite action on words of length m");
    add_common(quotient, common);
    quotient->add_option("-m,--level", level, "tree level")->required();
    quotient->add_flag("--k-index", k_index, "also report the index of K's image (Grigorchuk)");
    quotient->callback([&] { rc = run_quotient(common, level, k_index); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    } catch (const BallTooLarge& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const LevelTooLarge& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const QuotientLimitExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const BudgetExceeded& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const NoOrbit& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return rc;
}
