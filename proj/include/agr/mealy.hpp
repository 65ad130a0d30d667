// mealy.hpp -- invertible Mealy automata over the alphabet {1..p}
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace agr {

/// A word over the alphabet, letters 1..p.  The empty word is allowed.
using Word = std::vector<int>;

class MealyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed machine text; carries the 1-based line number.
class SyntaxError : public MealyError {
public:
    int line;
    SyntaxError(int line, const std::string& what)
        : MealyError("line " + std::to_string(line) + ": " + what), line(line) {}
};

/// Some state's output function is not a permutation of the alphabet.
class NotInvertible : public MealyError {
public:
    std::string state;
    explicit NotInvertible(const std::string& state)
        : MealyError("state '" + state + "' is not invertible"), state(state) {}
};

/// A transition names a state that is never declared.
class UnknownState : public MealyError {
public:
    std::string state;
    explicit UnknownState(const std::string& state)
        : MealyError("unknown state '" + state + "'"), state(state) {}
};

/// Two machines with different alphabets were combined.
class AlphabetMismatch : public MealyError {
public:
    AlphabetMismatch(int p1, int p2)
        : MealyError("alphabet mismatch: p=" + std::to_string(p1) + " vs p=" + std::to_string(p2)) {}
};

/// A word contains a letter outside 1..p.
class LetterOutOfRange : public MealyError {
public:
    LetterOutOfRange(int letter, int p)
        : MealyError("letter " + std::to_string(letter) + " outside 1.." + std::to_string(p)) {}
};

/// Alphabet size out of range for the requested operation.
class BadAlphabet : public MealyError {
public:
    explicit BadAlphabet(int p) : MealyError("bad alphabet size p=" + std::to_string(p)) {}
};

/**
 * Finite invertible Mealy automaton (letter transducer).
 *
 * Every state reads one letter, emits one letter and moves to a successor
 * state; the output function of each state is a permutation of the alphabet.
 * Letters are 1..p in all I/O and 0..p-1 in storage.  Transition tables are
 * flattened row-major: entry q*p + x describes state q reading letter x.
 * `names` may be empty, in which case states display as s0, s1, ...
 */
struct MealyMachine {
    int p = 0;
    std::vector<std::string> names;
    std::vector<int32_t> out;   // emitted letter (0-based)
    std::vector<int32_t> next;  // successor state

    int states() const { return static_cast<int>(next.size() / (p ? p : 1)); }
    int32_t output(int q, int x) const { return out[static_cast<size_t>(q) * p + x]; }
    int32_t successor(int q, int x) const { return next[static_cast<size_t>(q) * p + x]; }
    std::string name_of(int q) const;

    /// Throws NotInvertible / UnknownState / BadAlphabet on a bad table.
    void validate() const;

    bool operator==(const MealyMachine& o) const {
        return p == o.p && out == o.out && next == o.next;
    }
};

/// A machine together with a distinguished start state: one group element.
struct PointedMachine {
    MealyMachine machine;
    int start = 0;
};

/// Parses the line-oriented machine format:
///   mealy p=<int> states=<int>
///   <name> | <out>:<next> ... (one field per input letter, in order)
/// '#' starts a comment; blank lines are ignored.
MealyMachine parse_machine(const std::string& text);

/// Inverse of parse_machine, bit-exact: single spaces, states in table order.
std::string serialize_machine(const MealyMachine& m);

/// Image of `w` under the transformation of the pointed machine.
Word act(const MealyMachine& m, int start, const Word& w);
Word act(const PointedMachine& pm, const Word& w);

/// State reached from `start` by feeding `v` as input.
int walk(const MealyMachine& m, int start, const Word& v);

/// Pointed machine computing "apply a, then apply b" (reachable pair states).
PointedMachine product(const MealyMachine& a, int sa, const MealyMachine& b, int sb);
PointedMachine product(const PointedMachine& a, const PointedMachine& b);

/// Pointed machine computing the inverse transformation.
PointedMachine invert(const MealyMachine& m, int start);
PointedMachine invert(const PointedMachine& pm);

/// Canonical minimal form: trims to reachable states, merges behaviourally
/// equivalent ones, and renumbers breadth-first from the start state (which
/// becomes state 0, with letters tried in ascending order).  Two pointed
/// machines define the same transformation iff their minimized forms are
/// structurally equal.
PointedMachine minimize(const MealyMachine& m, int start);
PointedMachine minimize(const PointedMachine& pm);

/// Bisimulation check: do the two pointed machines act identically on all
/// words?  Independent of minimize(); used to cross-check it.
bool equal_coinductive(const MealyMachine& a, int sa, const MealyMachine& b, int sb);
bool equal_coinductive(const PointedMachine& a, const PointedMachine& b);

/// Parses "121" (digits, p <= 9) or "10,2,3" (comma-separated) into a word.
Word parse_word(const std::string& text, int p);
std::string format_word(const Word& w, int p);

}  // namespace agr
