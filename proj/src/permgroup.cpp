#include "agr/permgroup.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>
#include <stdexcept>

namespace agr {

Perm perm_identity(int n) {
    Perm p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm perm_mul(const Perm& a, const Perm& b) {
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
    return r;
}

Perm perm_inverse(const Perm& a) {
    Perm r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[a[i]] = static_cast<int32_t>(i);
    return r;
}

bool perm_is_identity(const Perm& a) {
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != static_cast<int32_t>(i)) return false;
    return true;
}

FactoredInt FactoredInt::of(uint64_t n) {
    FactoredInt f;
    f.multiply(n);
    return f;
}

void FactoredInt::multiply(uint64_t n) {
    if (n == 0) throw std::invalid_argument("zero has no factorization");
    for (uint64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            ++primes_[d];
            n /= d;
        }
    if (n > 1) ++primes_[n];
}

void FactoredInt::multiply(const FactoredInt& o) {
    for (auto [p, e] : o.primes_) primes_[p] += e;
}

FactoredInt FactoredInt::divide(const FactoredInt& o) const {
    FactoredInt q = *this;
    for (auto [p, e] : o.primes_) {
        auto it = q.primes_.find(p);
        if (it == q.primes_.end() || it->second < e)
            throw std::invalid_argument("not divisible");
        it->second -= e;
        if (it->second == 0) q.primes_.erase(it);
    }
    return q;
}

std::optional<uint64_t> FactoredInt::as_u64() const {
    uint64_t v = 1;
    for (auto [p, e] : primes_)
        for (int i = 0; i < e; ++i) {
            if (v > ~0ull / p) return std::nullopt;
            v *= p;
        }
    return v;
}

std::string FactoredInt::to_string() const {
    if (auto v = as_u64()) return std::to_string(*v);
    std::string s;
    for (auto [p, e] : primes_) {
        if (!s.empty()) s += "*";
        s += std::to_string(p);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

StabilizerChain::StabilizerChain(int npoints) : npoints_(npoints) {}

void StabilizerChain::rebuild_orbit(size_t i) {
    Level& lv = levels_[i];
    lv.from.assign(npoints_, -1);
    lv.via.assign(npoints_, -2);
    lv.orbit.clear();
    lv.via[lv.beta] = -1;
    lv.orbit.push_back(lv.beta);
    for (size_t k = 0; k < lv.orbit.size(); ++k) {
        int32_t pt = lv.orbit[k];
        for (size_t gi = 0; gi < lv.gens.size(); ++gi) {
            int32_t img = lv.gens[gi][pt];
            if (!lv.in_orbit(img)) {
                lv.from[img] = pt;
                lv.via[img] = static_cast<int32_t>(gi);
                lv.orbit.push_back(img);
            }
        }
    }
}

Perm StabilizerChain::coset_rep(size_t i, int32_t pt) const {
    const Level& lv = levels_[i];
    Perm rep = perm_identity(npoints_);
    // Walk the Schreier tree back to beta, composing edge generators.
    while (lv.from[pt] != -1) {
        rep = perm_mul(lv.gens[lv.via[pt]], rep);
        pt = lv.from[pt];
    }
    return rep;
}

std::pair<size_t, Perm> StabilizerChain::sift(const Perm& g) const {
    Perm h = g;
    for (size_t i = 0; i < levels_.size(); ++i) {
        int32_t img = h[levels_[i].beta];
        if (!levels_[i].in_orbit(img)) return {i, h};
        h = perm_mul(h, perm_inverse(coset_rep(i, img)));
    }
    return {levels_.size(), h};
}

void StabilizerChain::add_at(size_t i, const Perm& g) {
    if (i == levels_.size()) {
        Level lv;
        for (int32_t pt = 0; pt < npoints_; ++pt)
            if (g[pt] != pt) {
                lv.beta = pt;
                break;
            }
        levels_.push_back(std::move(lv));
    }
    // g fixes beta_0..beta_{i-1}, so it belongs to the generating set of
    // every stabilizer level j <= i.  It cannot move those base points, but
    // it can move other orbit points, so all those orbits may grow.
    for (size_t j = 0; j <= i; ++j) {
        levels_[j].gens.push_back(g);
        rebuild_orbit(j);
    }
}

void StabilizerChain::extend(const Perm& g) {
    if (static_cast<int>(g.size()) != npoints_)
        throw std::invalid_argument("permutation degree mismatch");
    auto [drop, residue] = sift(g);
    if (perm_is_identity(residue)) return;
    add_at(drop, residue);

    // Randomized warm-up: residues of random words fill the chain in cheaply
    // before the deterministic pass certifies it.
    std::mt19937_64 rng(0x5eed5eedull + levels_.size());
    std::vector<const Perm*> pool;
    for (const Level& lv : levels_)
        for (const Perm& s : lv.gens) pool.push_back(&s);
    Perm walk = perm_identity(npoints_);
    int quiet = 0;
    for (int step = 0; step < 512 && quiet < 16 && !pool.empty(); ++step) {
        walk = perm_mul(walk, *pool[rng() % pool.size()]);
        auto [d, r] = sift(walk);
        if (perm_is_identity(r)) {
            ++quiet;
        } else {
            quiet = 0;
            add_at(d, r);
            pool.clear();
            for (const Level& lv : levels_)
                for (const Perm& s : lv.gens) pool.push_back(&s);
        }
    }
    complete();
}

void StabilizerChain::complete() {
    // Deterministic certification: at every level each Schreier generator
    // must sift to the identity through the rest of the chain.  Any residue
    // is added where it drops and the check resumes there.
    size_t i = levels_.size();
    while (i > 0) {
        --i;
        bool clean = true;
        // add_at below may grow levels_, so re-check clean before touching lv.
        const Level& lv = levels_[i];
        for (size_t k = 0; clean && k < lv.orbit.size(); ++k) {
            Perm u = coset_rep(i, lv.orbit[k]);
            for (size_t gi = 0; clean && gi < lv.gens.size(); ++gi) {
                Perm sg = perm_mul(u, lv.gens[gi]);
                sg = perm_mul(sg, perm_inverse(coset_rep(i, sg[lv.beta])));
                if (perm_is_identity(sg)) continue;
                // Sift only through the levels below i.
                size_t drop = i + 1;
                Perm h = sg;
                for (; drop < levels_.size(); ++drop) {
                    int32_t img = h[levels_[drop].beta];
                    if (!levels_[drop].in_orbit(img)) break;
                    h = perm_mul(h, perm_inverse(coset_rep(drop, img)));
                }
                if (perm_is_identity(h)) continue;
                add_at(drop, h);
                i = drop + 1;  // recheck from the level we touched
                clean = false;
            }
        }
    }
}

bool StabilizerChain::contains(const Perm& g) const {
    if (static_cast<int>(g.size()) != npoints_)
        throw std::invalid_argument("permutation degree mismatch");
    auto [drop, residue] = sift(g);
    return drop == levels_.size() && perm_is_identity(residue);
}

FactoredInt StabilizerChain::order() const {
    FactoredInt n;
    for (const Level& lv : levels_) n.multiply(lv.orbit.size());
    return n;
}

StabilizerChain make_chain(int npoints, const std::vector<Perm>& gens) {
    StabilizerChain chain(npoints);
    for (const Perm& g : gens) chain.extend(g);
    return chain;
}

StabilizerChain normal_closure_chain(int npoints, const std::vector<Perm>& seeds,
                                     const std::vector<Perm>& group_gens) {
    StabilizerChain chain(npoints);
    std::deque<Perm> todo;
    for (const Perm& s : seeds)
        if (!chain.contains(s)) {
            chain.extend(s);
            todo.push_back(s);
        }
    while (!todo.empty()) {
        Perm s = std::move(todo.front());
        todo.pop_front();
        for (const Perm& t : group_gens) {
            Perm c = perm_mul(perm_mul(perm_inverse(t), s), t);
            if (!chain.contains(c)) {
                chain.extend(c);
                todo.push_back(c);
            }
        }
    }
    return chain;
}

}  // namespace agr
