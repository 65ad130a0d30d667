// groups.hpp -- concrete automaton groups and their finite-level analysis
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "agr/element.hpp"
#include "agr/expr.hpp"
#include "agr/mealy.hpp"
#include "agr/permgroup.hpp"

namespace agr {

/**
 * A group given by a Mealy machine: the group generated by the machine's
 * states.  `generators` lists the named states that act non-trivially;
 * states behaving as the identity stay addressable by name but generate
 * nothing.
 */
struct GroupPresentation {
    std::string name;
    MealyMachine machine;
    int p = 0;
    std::vector<std::pair<std::string, int>> generators;

    /// Element of a named state; throws UnknownState.
    Element element(const std::string& state_name) const;
    /// All named states as expression bindings.
    ExprEnv env() const;
};

/// Builds a presentation from a machine, classifying states as above.
GroupPresentation group_from_machine(std::string name, MealyMachine m);

/// Grigorchuk's first group: states a,b,c,d (and identity e) on {1,2}.
GroupPresentation grigorchuk();

/// The Gupta-Sidki 3-group: states a,t and their inverses on {1,2,3}.
GroupPresentation gupta_sidki();

/// Generators (x, x^c, x^{ca}) of the branching subgroup K of the Grigorchuk
/// group, the normal closure of x = [a,b].
std::array<Element, 3> grig_k_generators();

/// Seed of a periodic difference cycle: a tuple expected to reappear, entry
/// by entry, as the sections at `word` after `period` cyclic difference
/// steps.  Verified by lemma_check (engel.hpp), never assumed.
struct PeriodicSeed {
    std::vector<Element> tuple;
    int period = 0;
    Word word;
};

/// The period-9 Grigorchuk quadruple below the word 111112.
PeriodicSeed grig_periodic_seed();

/// The period-4 Gupta-Sidki triple below the word 122.
PeriodicSeed gs_periodic_seed();

class BallTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BallEntry {
    Element g;
    int length;  // geodesic word length in the symmetrized generators
};

/// All distinct elements of word length <= radius, breadth-first, so entry
/// lengths are exact geodesic lengths.  Throws BallTooLarge past max_size.
std::vector<BallEntry> enumerate_ball(const GroupPresentation& G, int radius,
                                      size_t max_size = 1u << 20);

class LevelTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Permutation induced by g on the p^m words of length m, points indexed by
/// the word read as a big-endian base-p number.
Perm level_perm(const Element& g, int m);

/// Action of the group's generators on level m, with a certified order.
struct LevelQuotient {
    int level = 0;
    std::vector<std::string> names;
    std::vector<Perm> perms;
    FactoredInt order;
};
LevelQuotient level_quotient(const GroupPresentation& G, int m, uint64_t max_points = 59049);

class QuotientLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class KVerdict { InK, NotInK };

/**
 * Membership test for the branching subgroup K of the Grigorchuk group.
 * K has index 16, so its image at a deep enough level m* also has index 16,
 * and from that level on, membership in the image decides membership in K.
 * The constructor finds m* (the first level whose image index is exactly 16)
 * and keeps the stabilizer chains; throws QuotientLimitExceeded if no level
 * up to `level_limit` reaches index 16.
 */
class KMembership {
public:
    explicit KMembership(int level_limit = 8);

    KVerdict test(const Element& g) const;
    int stable_level() const { return mstar_; }
    /// Index of the K-image in the level-m quotient (recomputed fresh).
    static FactoredInt index_at(int m);

private:
    int mstar_;
    std::shared_ptr<const StabilizerChain> k_chain_;
};

/// Exact rational number (word-length bounds stay tiny).
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<=(const Rational& o) const { return num * o.den <= o.num * den; }
    std::string to_string() const;
};

/**
 * Empirical contraction data: over all elements g in the ball of radius L
 * whose sections also lie in the ball, the bound |g@x| <= eta*|g| + C.
 * eta_hat is the smallest grid value k/p admitting a finite bound (k=1
 * always does), and c_hat the least C covering every sample at that eta.
 */
struct ContractionEstimate {
    Rational eta_hat;
    Rational c_hat;
    int radius = 0;
    size_t ball_size = 0;
    size_t samples = 0;
    size_t skipped = 0;  // sections falling outside the ball
};
ContractionEstimate estimate_contraction(const GroupPresentation& G, int L,
                                         size_t max_ball = 1u << 20);

}  // namespace agr
