// element.hpp -- group elements as canonical minimized pointed machines
#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "agr/mealy.hpp"

namespace agr {

/**
 * One element of an automaton group, held in canonical form: the minimized
 * machine of its transformation, renumbered breadth-first so the element is
 * state 0.  Two elements are equal iff their canonical machines are
 * structurally identical, so equality, hashing and memo keys are all cheap.
 * Instances are immutable and share their machine.
 */
class Element {
public:
    Element() = default;  // empty handle; only assignment is valid on it

    /// The identity transformation on {1..p} words (p >= 2).
    static Element identity(int p);

    /// Canonicalizes an arbitrary pointed machine.
    static Element of(const MealyMachine& m, int start);
    static Element of(const PointedMachine& pm);

    bool valid() const { return m_ != nullptr; }
    int alphabet() const { return m_->p; }
    int state_count() const { return m_->states(); }
    const MealyMachine& machine() const { return *m_; }
    PointedMachine pointed() const { return {*m_, 0}; }
    uint64_t hash() const { return hash_; }

    bool trivial() const;
    /// True when the root output permutation is the identity (the element
    /// fixes the first letter of every word).
    bool root_trivial() const;

    Word apply(const Word& w) const { return act(*m_, 0, w); }
    std::string serialize() const { return serialize_machine(*m_); }
    /// Compact byte string identifying the canonical form; equal elements and
    /// only they produce equal keys.
    std::string key() const;

    bool operator==(const Element& o) const;
    bool operator!=(const Element& o) const { return !(*this == o); }

private:
    std::shared_ptr<const MealyMachine> m_;
    uint64_t hash_ = 0;
};

struct ElementHash {
    size_t operator()(const Element& g) const { return static_cast<size_t>(g.hash()); }
};

Element mul(const Element& a, const Element& b);  // apply a, then b
Element inv(const Element& g);
Element conjugate(const Element& g, const Element& h);   // h^-1 g h
Element commutator(const Element& g, const Element& h);  // g^-1 h^-1 g h
Element power(const Element& g, long long n);

/// Root permutation pi (pi[x-1] = image of letter x, 1-based) and the p
/// sections, so that g = <<sections>> pi.
struct RootDecomposition {
    std::vector<int> pi;
    std::vector<Element> sections;
};
RootDecomposition root_decompose(const Element& g);

/// Section g@v: the transformation induced on the subtree below v, where
/// (vw)^g = v^g (w^{g@v}).
Element section_at(const Element& g, const Word& v);

/// Insertion v*g: acts as g on words below v and fixes everything else,
/// so that (vw)^{v*g} = v (w^g).
Element insert(const Word& v, const Element& g);

/// Canonical-form equality; throws AlphabetMismatch on different alphabets.
bool equals(const Element& a, const Element& b);

struct OrderResult {
    bool bounded = false;
    uint64_t value = 0;           // the exact order when bounded
    bool proven_infinite = false; // unbounded by proof, not by budget
};

/// Decides finiteness of the order of g and computes it when finite.
///
/// Works on the graph of elements where a root-trivial element points to its
/// sections and an element with root permutation of order r > 1 points to
/// g^r.  Strongly connected components resolve bottom-up: a component that
/// contains a powering edge has unbounded order (proven_infinite); a
/// pure-section component's members all have order lcm of the orders of the
/// sections outside it.  Exploring more than `limit` distinct elements (or
/// overflowing the order value) reports unbounded without proof.
OrderResult order_bounded(const Element& g, size_t limit = 4096);

}  // namespace agr
