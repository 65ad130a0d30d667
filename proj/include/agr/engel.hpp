// engel.hpp -- deciding the Engel property on automaton groups
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agr/element.hpp"
#include "agr/groups.hpp"

namespace agr {

struct EngelBudget {
    size_t max_vertices = 100000;  // distinct tuples explored per run
    int max_states = 20000;        // canonical machine size per element
    int max_c = 64;                // direct iteration depth
};

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OrderMismatch : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class BadTupleLength : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoOrbit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class OrderNotMultiple : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Iterated commutator E_0 = g, E_c = [E_{c-1}, h].  With max_states > 0,
/// throws BudgetExceeded as soon as an iterate's machine grows past it.
/// When given, `profile` receives the state counts of E_0..E_c.
Element engel_iterate(const Element& g, const Element& h, int c, int max_states = 0,
                      std::vector<int>* profile = nullptr);

/// One vertex of the Engel graph: an n-tuple of elements.
struct TupleVertex {
    std::vector<Element> entries;

    bool trivial() const;
    int alphabet() const { return entries.at(0).alphabet(); }
    int max_states() const;
    std::string key() const;
    bool operator==(const TupleVertex& o) const { return entries == o.entries; }
};

/// The tuple (g, g^h, g^{h^2}, ..., g^{h^{n-1}}).  Requires h^n = 1
/// (verified through order_bounded) and p | n.
TupleVertex start_tuple(const Element& g, const Element& h, int n);

/// One step of the graph: take cyclic differences d_i = t_i^-1 t_{i+1}.
/// If every difference fixes the first letter, the step descends and yields
/// one successor of sections per letter; otherwise the single successor is
/// the difference tuple itself.
struct StepResult {
    std::vector<TupleVertex> successors;
    bool descended = false;
};
StepResult step_tuple(const TupleVertex& t);

enum class Verdict { EngelYes, EngelNo, ResourceExceeded };
std::string to_string(Verdict v);

/**
 * Exhaustive walk of the graph reachable from a start tuple.
 *
 * Vertices are numbered in breadth-first discovery order (start = 0) and
 * deduplicated by canonical form.  Successors whose entries outgrow
 * max_states, or that would exceed max_vertices, become cut edges (to = -1)
 * and mark the report truncated.  The verdict is:
 *  - EngelNo when a reachable cycle avoids the all-trivial tuple; the cycle
 *    itself certifies the verdict, truncated or not;
 *  - EngelYes when the walk is complete and the only cycle is the trivial
 *    tuple's self-loop; then every walk of length engel_class from the start
 *    reaches the trivial tuple, so E_{engel_class}(g,h) = 1;
 *  - ResourceExceeded when the walk was truncated and no witness cycle was
 *    found.
 */
struct ExploreReport {
    struct Edge {
        int32_t from;
        int32_t to;  // vertex id, or -1 for a cut edge
        bool descended;
        int letter;  // 1..p on descending edges, 0 otherwise
    };
    std::vector<TupleVertex> vertices;
    std::vector<Edge> edges;
    std::vector<std::vector<int32_t>> cycles;  // vertex ids, cyclically closed
    Verdict verdict = Verdict::ResourceExceeded;
    int engel_class = -1;     // set for EngelYes
    int witness_cycle = -1;   // index into cycles, set for EngelNo
    bool truncated = false;
    int max_nondescend_run = 0;  // longest run of consecutive non-descending edges

    /// Stable line-oriented record dump (vertex/edge/cycle/verdict lines).
    std::string records() const;
};
ExploreReport explore(const TupleVertex& t0, const EngelBudget& budget = {});

/// Decision for one pair: direct iteration within budget first (giving the
/// least c), then the graph walk with n = lcm(order(h), p).
struct PairDecision {
    Verdict verdict = Verdict::ResourceExceeded;
    int c = -1;                          // EngelYes: E_c(g,h) = 1
    bool by_iteration = false;           // decided on the fast path
    std::optional<ExploreReport> report; // present when the graph ran
};
PairDecision decide_engel_pair(const Element& g, const Element& h, const EngelBudget& budget = {});

/// Sweeps all n-tuples over the radius-r ball (plus optional extra seed
/// tuples) and collects the distinct non-trivial cycles their graphs reach.
struct SurveyResult {
    std::vector<std::vector<TupleVertex>> cycles;
    size_t tuples = 0;
    bool truncated = false;
};
SurveyResult exponent_survey(const GroupPresentation& G, int n, int r,
                             const EngelBudget& budget = {},
                             const std::vector<TupleVertex>& seeds = {});

/// A cycle through a tuple of non-trivial elements of the branching subgroup
/// K certifies that no element of order dividing n (n = tuple length) can be
/// Engel; scans the cycle for such a vertex.
struct BranchCertificate {
    bool certified = false;
    int n = 0;
    int vertex = -1;  // index into the cycle
};
BranchCertificate branch_certificate(const std::vector<TupleVertex>& cycle, const KMembership& k);

/**
 * Periodicity certificate: runs the cyclic difference recursion `period`
 * steps from the tuple a0 and checks that every resulting entry fixes
 * `word`, is non-trivial, and has section a0's entry back at `word`.  Such
 * a tuple reproduces itself forever, so the iterated differences never die
 * out; build_witness turns it into a concrete non-Engel pair.
 */
struct PeriodicCertificate {
    std::vector<Element> a0;
    int period = 0;
    Word word;
    bool checked = false;
    std::string detail;  // first failing condition when !checked
};
PeriodicCertificate lemma_check(const std::vector<Element>& a0, int period, const Word& word);

/**
 * Explicit non-Engel witness for h of finite order m: an orbit
 * {v_1..v_m} of h on level `level` with v_{i+1}^h = v_i, the section
 * cocycle h_i = (h@v_1)^-1 ... (h@v_i)^-1, and
 *   g = prod_i v_i * (a0_{i % k})^{h_i},
 * which satisfies E_c(g,h) = prod_i v_i * (A_c,{i % k})^{h_i}.  v_1 is
 * chosen with h@v_1 trivial when possible, making E_c(g,h)@v_1 = A_{c,1}.
 */
struct WitnessData {
    Element g;
    Element h;
    int level = 0;
    std::vector<Word> orbit;      // v_1..v_m
    std::vector<Element> cocycle; // h_1..h_m
};
WitnessData build_witness(const Element& h, const std::vector<Element>& a0, int level_limit = 10);

/**
 * Search for periodic behaviour in the iterated commutators: computes the
 * state-count profile of E_0..E_cmax, and for every period P <= pmax and
 * every c with c + P <= cmax reports the non-trivial states common to the
 * machines of E_c and E_{c+P}.  Candidates are sorted by K-membership of
 * some common state (when a tester is supplied), then total size.
 */
struct SearchCandidate {
    int c = 0;
    int period = 0;
    std::vector<Element> common;  // non-trivial shared states
    bool has_k_member = false;
    size_t total_states = 0;
};
struct SearchResult {
    std::vector<int> profile;  // state counts of E_0..E_creached
    int c_reached = 0;         // < cmax when the budget stopped the iteration
    std::vector<SearchCandidate> candidates;
};
SearchResult periodic_state_search(const Element& g, const Element& h, int cmax, int pmax,
                                   const EngelBudget& budget = {},
                                   const KMembership* k = nullptr);

}  // namespace agr
