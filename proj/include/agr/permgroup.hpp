// permgroup.hpp -- permutation groups via stabilizer chains
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace agr {

/// A permutation of {0..n-1} as its image table.
using Perm = std::vector<int32_t>;

Perm perm_identity(int n);
Perm perm_mul(const Perm& a, const Perm& b);  // apply a, then b
Perm perm_inverse(const Perm& a);
bool perm_is_identity(const Perm& a);

/// A positive integer kept as its prime factorization, so that group orders
/// far beyond 64 bits stay exact.
class FactoredInt {
public:
    FactoredInt() = default;  // one
    static FactoredInt of(uint64_t n);

    void multiply(uint64_t n);
    void multiply(const FactoredInt& o);
    /// Exact quotient; throws std::invalid_argument if not divisible.
    FactoredInt divide(const FactoredInt& o) const;

    bool operator==(const FactoredInt& o) const { return primes_ == o.primes_; }
    bool is_one() const { return primes_.empty(); }

    /// The value when it fits in 64 bits.
    std::optional<uint64_t> as_u64() const;
    /// "1", "16", or "2^82" style; factored form when too large for decimal.
    std::string to_string() const;

private:
    std::map<uint64_t, int> primes_;
};

/**
 * Stabilizer chain (base and strong generating set) for a permutation group
 * on {0..n-1}.  Generators are admitted by randomized sifting first, then the
 * chain is completed by the deterministic Schreier-generator check, so order
 * and membership answers are certified.
 */
class StabilizerChain {
public:
    explicit StabilizerChain(int npoints);

    /// Adds a generator and re-certifies the chain.
    void extend(const Perm& g);

    bool contains(const Perm& g) const;
    FactoredInt order() const;
    int base_length() const { return static_cast<int>(levels_.size()); }
    int npoints() const { return npoints_; }

private:
    struct Level {
        int32_t beta = -1;
        std::vector<Perm> gens;
        // Schreier tree over the orbit of beta: how each point was reached.
        std::vector<int32_t> from;  // previous point, -1 if root or unreached
        std::vector<int32_t> via;   // generator index, -1 if root or unreached
        std::vector<int32_t> orbit;

        bool in_orbit(int32_t pt) const { return via[pt] != -2; }
    };

    int npoints_;
    std::vector<Level> levels_;

    void rebuild_orbit(size_t i);
    Perm coset_rep(size_t i, int32_t pt) const;  // maps beta_i to pt
    // Returns the level where g leaves the chain (levels_.size() if none)
    // and the residue after dividing out coset representatives.
    std::pair<size_t, Perm> sift(const Perm& g) const;
    void add_at(size_t i, const Perm& g);
    void complete();  // deterministic Schreier-generator closure
};

/// Chain for the group generated by `gens`.
StabilizerChain make_chain(int npoints, const std::vector<Perm>& gens);

/// Chain for the normal closure of `seeds` under the group generated by
/// `group_gens` (all perms on the same point set).
StabilizerChain normal_closure_chain(int npoints, const std::vector<Perm>& seeds,
                                     const std::vector<Perm>& group_gens);

}  // namespace agr
