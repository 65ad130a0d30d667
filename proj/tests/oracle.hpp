// oracle.hpp -- brute-force reference implementations for the test suites.
//
// Everything here works by direct letter-by-letter simulation on the original
// machines and plain word bookkeeping, never through the library's composite
// constructions (product, minimize, sections), so a library bug cannot hide
// behind the same code path twice.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "agr/element.hpp"
#include "agr/mealy.hpp"

namespace oracle {

/// Image of w under the state q, simulated one letter at a time.
inline agr::Word image(const agr::MealyMachine& m, int q, const agr::Word& w) {
    agr::Word out;
    out.reserve(w.size());
    for (int letter : w) {
        out.push_back(m.output(q, letter - 1) + 1);
        q = m.successor(q, letter - 1);
    }
    return out;
}

/// All words of length 0..max_len over {1..p}, shortest first.
inline std::vector<agr::Word> words_upto(int p, int max_len) {
    std::vector<agr::Word> all{agr::Word{}};
    size_t layer_begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        size_t layer_end = all.size();
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (int x = 1; x <= p; ++x) {
                agr::Word w = all[i];
                w.push_back(x);
                all.push_back(std::move(w));
            }
        layer_begin = layer_end;
    }
    return all;
}

/// Do the two pointed machines act identically on every word up to max_len?
inline bool same_action(const agr::MealyMachine& a, int sa, const agr::MealyMachine& b, int sb,
                        int max_len) {
    for (const agr::Word& w : words_upto(a.p, max_len))
        if (image(a, sa, w) != image(b, sb, w)) return false;
    return true;
}

inline bool identity_action(const agr::MealyMachine& m, int s, int max_len) {
    for (const agr::Word& w : words_upto(m.p, max_len))
        if (image(m, s, w) != w) return false;
    return true;
}

/// Order of the permutation induced on words of length <= depth: the least
/// k <= kmax whose k-fold application fixes them all, or 0 if none does.
/// It divides the true order and equals it once depth is large enough.
inline uint64_t order_on_truncation(const agr::MealyMachine& m, int s, int depth, uint64_t kmax) {
    std::vector<agr::Word> words = words_upto(m.p, depth);
    std::vector<agr::Word> cur = words;
    for (uint64_t k = 1; k <= kmax; ++k) {
        bool all_fixed = true;
        for (size_t i = 0; i < words.size(); ++i) {
            cur[i] = image(m, s, cur[i]);
            all_fixed = all_fixed && cur[i] == words[i];
        }
        if (all_fixed) return k;
    }
    return 0;
}

inline uint64_t order_on_truncation(const agr::Element& g, int depth, uint64_t kmax) {
    return order_on_truncation(g.machine(), 0, depth, kmax);
}

/// Uniformly random invertible machine: random output permutation and random
/// successor per (state, letter).
inline agr::MealyMachine random_machine(std::mt19937_64& rng, int p, int nstates) {
    agr::MealyMachine m;
    m.p = p;
    m.out.resize(static_cast<size_t>(nstates) * p);
    m.next.resize(static_cast<size_t>(nstates) * p);
    for (int q = 0; q < nstates; ++q) {
        std::vector<int32_t> perm(p);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (int x = 0; x < p; ++x) {
            m.out[static_cast<size_t>(q) * p + x] = perm[x];
            m.next[static_cast<size_t>(q) * p + x] = static_cast<int32_t>(rng() % nstates);
        }
    }
    return m;
}

inline agr::Word random_word(std::mt19937_64& rng, int p, int len) {
    agr::Word w(len);
    for (int& x : w) x = static_cast<int>(rng() % p) + 1;
    return w;
}

/// Random product of the given elements (library mul; used as a generator of
/// test inputs, not as a reference).
inline agr::Element random_product(std::mt19937_64& rng, const std::vector<agr::Element>& gens,
                                   int len) {
    agr::Element g = agr::Element::identity(gens.at(0).alphabet());
    for (int i = 0; i < len; ++i) g = mul(g, gens[rng() % gens.size()]);
    return g;
}

}  // namespace oracle
