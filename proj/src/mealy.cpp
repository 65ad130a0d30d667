#include "agr/mealy.hpp"

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace agr {

std::string MealyMachine::name_of(int q) const {
    if (q >= 0 && static_cast<size_t>(q) < names.size() && !names[q].empty())
        return names[q];
    return "s" + std::to_string(q);
}

void MealyMachine::validate() const {
    if (p < 1) throw BadAlphabet(p);
    const int n = states();
    if (out.size() != next.size() || out.size() != static_cast<size_t>(n) * p)
        throw MealyError("inconsistent transition table size");
    std::vector<char> seen(p);
    for (int q = 0; q < n; ++q) {
        std::fill(seen.begin(), seen.end(), 0);
        for (int x = 0; x < p; ++x) {
            int32_t y = output(q, x);
            if (y < 0 || y >= p || seen[y]) throw NotInvertible(name_of(q));
            seen[y] = 1;
            int32_t r = successor(q, x);
            if (r < 0 || r >= n) throw UnknownState("#" + std::to_string(r));
        }
    }
}

namespace {

// Strips a trailing comment and surrounding whitespace.
std::string strip(const std::string& line) {
    std::string s = line.substr(0, line.find('#'));
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// State names: a letter followed by letters, digits, or underscores.
bool valid_state_name(const std::string& s) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin() + 1, s.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '_';
    });
}

}  // namespace

MealyMachine parse_machine(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    // Header.
    int p = -1, declared = -1;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty()) continue;
        std::istringstream hs(s);
        std::string kw, pf, sf;
        hs >> kw >> pf >> sf;
        if (kw != "mealy" || pf.rfind("p=", 0) != 0 || sf.rfind("states=", 0) != 0)
            throw SyntaxError(lineno, "expected header 'mealy p=<int> states=<int>'");
        try {
            p = std::stoi(pf.substr(2));
            declared = std::stoi(sf.substr(7));
        } catch (const std::exception&) {
            throw SyntaxError(lineno, "bad integer in header");
        }
        if (p < 1 || declared < 1) throw SyntaxError(lineno, "p and states must be positive");
        break;
    }
    if (p < 0) throw SyntaxError(lineno, "missing header");

    // State rows: first pass collects names and raw fields.
    struct Row {
        std::string name;
        std::vector<std::pair<int, std::string>> fields;  // (output letter, successor name)
        int line;
    };
    std::vector<Row> rows;
    std::map<std::string, int> index;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = strip(line);
        if (s.empty()) continue;
        size_t bar = s.find('|');
        if (bar == std::string::npos) throw SyntaxError(lineno, "missing '|'");
        Row row;
        row.line = lineno;
        {
            std::istringstream ns(s.substr(0, bar));
            ns >> row.name;
            std::string extra;
            if (row.name.empty() || (ns >> extra))
                throw SyntaxError(lineno, "expected a single state name before '|'");
            if (!valid_state_name(row.name))
                throw SyntaxError(lineno, "bad state name '" + row.name + "'");
        }
        std::istringstream fs(s.substr(bar + 1));
        std::string field;
        while (fs >> field) {
            size_t colon = field.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == field.size())
                throw SyntaxError(lineno, "expected '<out>:<next>' fields");
            int y;
            try {
                y = std::stoi(field.substr(0, colon));
            } catch (const std::exception&) {
                throw SyntaxError(lineno, "bad output letter in '" + field + "'");
            }
            if (y < 1 || y > p) throw LetterOutOfRange(y, p);
            row.fields.emplace_back(y, field.substr(colon + 1));
        }
        if (static_cast<int>(row.fields.size()) != p)
            throw SyntaxError(lineno, "expected " + std::to_string(p) + " transition fields");
        if (index.count(row.name)) throw SyntaxError(lineno, "duplicate state '" + row.name + "'");
        index[row.name] = static_cast<int>(rows.size());
        rows.push_back(std::move(row));
    }
    if (static_cast<int>(rows.size()) != declared)
        throw SyntaxError(lineno, "declared states=" + std::to_string(declared) + " but found " +
                                      std::to_string(rows.size()));

    // Second pass resolves successor names (forward references allowed).
    MealyMachine m;
    m.p = p;
    m.out.resize(rows.size() * p);
    m.next.resize(rows.size() * p);
    for (size_t q = 0; q < rows.size(); ++q) {
        m.names.push_back(rows[q].name);
        for (int x = 0; x < p; ++x) {
            auto& [y, succ] = rows[q].fields[x];
            auto it = index.find(succ);
            if (it == index.end()) throw UnknownState(succ);
            m.out[q * p + x] = y - 1;
            m.next[q * p + x] = it->second;
        }
    }
    m.validate();
    return m;
}

std::string serialize_machine(const MealyMachine& m) {
    std::ostringstream os;
    os << "mealy p=" << m.p << " states=" << m.states() << "\n";
    for (int q = 0; q < m.states(); ++q) {
        os << m.name_of(q) << " |";
        for (int x = 0; x < m.p; ++x)
            os << ' ' << m.output(q, x) + 1 << ':' << m.name_of(m.successor(q, x));
        os << "\n";
    }
    return os.str();
}

Word act(const MealyMachine& m, int start, const Word& w) {
    Word img;
    img.reserve(w.size());
    int q = start;
    for (int letter : w) {
        if (letter < 1 || letter > m.p) throw LetterOutOfRange(letter, m.p);
        img.push_back(m.output(q, letter - 1) + 1);
        q = m.successor(q, letter - 1);
    }
    return img;
}

Word act(const PointedMachine& pm, const Word& w) { return act(pm.machine, pm.start, w); }

int walk(const MealyMachine& m, int start, const Word& v) {
    int q = start;
    for (int letter : v) {
        if (letter < 1 || letter > m.p) throw LetterOutOfRange(letter, m.p);
        q = m.successor(q, letter - 1);
    }
    return q;
}

PointedMachine product(const MealyMachine& a, int sa, const MealyMachine& b, int sb) {
    if (a.p != b.p) throw AlphabetMismatch(a.p, b.p);
    const int p = a.p;
    // Breadth-first over reachable state pairs: apply a first, feed its
    // output to b.
    std::unordered_map<uint64_t, int32_t> id;
    std::deque<std::pair<int32_t, int32_t>> queue;
    auto intern = [&](int32_t qa, int32_t qb) {
        uint64_t key = (static_cast<uint64_t>(qa) << 32) | static_cast<uint32_t>(qb);
        auto [it, fresh] = id.emplace(key, static_cast<int32_t>(id.size()));
        if (fresh) queue.emplace_back(qa, qb);
        return it->second;
    };
    MealyMachine m;
    m.p = p;
    intern(sa, sb);
    while (!queue.empty()) {
        auto [qa, qb] = queue.front();
        queue.pop_front();
        for (int x = 0; x < p; ++x) {
            int32_t y = a.output(qa, x);
            m.out.push_back(b.output(qb, y));
            m.next.push_back(intern(a.successor(qa, x), b.successor(qb, y)));
        }
    }
    return {std::move(m), 0};
}

PointedMachine product(const PointedMachine& a, const PointedMachine& b) {
    return product(a.machine, a.start, b.machine, b.start);
}

PointedMachine invert(const MealyMachine& m, int start) {
    // Swap input and output labels: state q reading y emits the x with
    // out(q,x) = y and moves to the inverse of the successor on x.
    MealyMachine r;
    r.p = m.p;
    r.out.resize(m.out.size());
    r.next.resize(m.next.size());
    for (int q = 0; q < m.states(); ++q)
        for (int x = 0; x < m.p; ++x) {
            int32_t y = m.output(q, x);
            r.out[static_cast<size_t>(q) * m.p + y] = x;
            r.next[static_cast<size_t>(q) * m.p + y] = m.successor(q, x);
        }
    return {std::move(r), start};
}

PointedMachine invert(const PointedMachine& pm) { return invert(pm.machine, pm.start); }

PointedMachine minimize(const MealyMachine& m, int start) {
    const int p = m.p;

    // Reachable states in breadth-first discovery order.
    std::vector<int32_t> order;
    std::vector<int32_t> pos(m.states(), -1);
    order.push_back(start);
    pos[start] = 0;
    for (size_t i = 0; i < order.size(); ++i)
        for (int x = 0; x < p; ++x) {
            int32_t r = m.successor(order[i], x);
            if (pos[r] < 0) {
                pos[r] = static_cast<int32_t>(order.size());
                order.push_back(r);
            }
        }
    const int nr = static_cast<int>(order.size());

    // Partition refinement: start from the output rows, split by successor
    // classes until stable.  Classes are numbered by first occurrence so the
    // refinement itself is deterministic.
    std::vector<int32_t> cls(nr);
    {
        std::map<std::vector<int32_t>, int32_t> first;
        for (int i = 0; i < nr; ++i) {
            std::vector<int32_t> row(m.out.begin() + static_cast<size_t>(order[i]) * p,
                                     m.out.begin() + static_cast<size_t>(order[i]) * p + p);
            cls[i] = first.emplace(std::move(row), static_cast<int32_t>(first.size())).first->second;
        }
    }
    for (;;) {
        std::map<std::vector<int32_t>, int32_t> first;
        std::vector<int32_t> refined(nr);
        for (int i = 0; i < nr; ++i) {
            std::vector<int32_t> sig(p + 1);
            sig[0] = cls[i];
            for (int x = 0; x < p; ++x) sig[x + 1] = cls[pos[m.successor(order[i], x)]];
            refined[i] = first.emplace(std::move(sig), static_cast<int32_t>(first.size())).first->second;
        }
        if (refined == cls) break;
        cls = std::move(refined);
    }

    // Canonical numbering: breadth-first over classes from the start class.
    // Any member represents its class, so take the first discovered.
    std::vector<int32_t> rep_of_class;
    std::vector<int32_t> newid(nr, -1);  // indexed by class
    {
        int nc = 1 + *std::max_element(cls.begin(), cls.end());
        newid.assign(nc, -1);
        std::vector<int32_t> rep(nc, -1);
        for (int i = 0; i < nr; ++i)
            if (rep[cls[i]] < 0) rep[cls[i]] = order[i];
        newid[cls[0]] = 0;
        rep_of_class.push_back(rep[cls[0]]);
        for (size_t i = 0; i < rep_of_class.size(); ++i)
            for (int x = 0; x < p; ++x) {
                int32_t c = cls[pos[m.successor(rep_of_class[i], x)]];
                if (newid[c] < 0) {
                    newid[c] = static_cast<int32_t>(rep_of_class.size());
                    rep_of_class.push_back(rep[c]);
                }
            }
    }

    MealyMachine out;
    out.p = p;
    out.out.reserve(rep_of_class.size() * p);
    out.next.reserve(rep_of_class.size() * p);
    for (int32_t q : rep_of_class)
        for (int x = 0; x < p; ++x) {
            out.out.push_back(m.output(q, x));
            out.next.push_back(newid[cls[pos[m.successor(q, x)]]]);
        }
    return {std::move(out), 0};
}

PointedMachine minimize(const PointedMachine& pm) { return minimize(pm.machine, pm.start); }

bool equal_coinductive(const MealyMachine& a, int sa, const MealyMachine& b, int sb) {
    if (a.p != b.p) throw AlphabetMismatch(a.p, b.p);
    // The relation grown here is a bisimulation candidate: two states are
    // assumed equal, then every pair of successors must be equal too.  A
    // mismatch anywhere refutes the initial pair.
    std::set<std::pair<int32_t, int32_t>> assumed;
    std::deque<std::pair<int32_t, int32_t>> todo;
    todo.emplace_back(sa, sb);
    assumed.emplace(sa, sb);
    while (!todo.empty()) {
        auto [qa, qb] = todo.front();
        todo.pop_front();
        for (int x = 0; x < a.p; ++x) {
            if (a.output(qa, x) != b.output(qb, x)) return false;
            std::pair<int32_t, int32_t> s(a.successor(qa, x), b.successor(qb, x));
            if (assumed.insert(s).second) todo.push_back(s);
        }
    }
    return true;
}

bool equal_coinductive(const PointedMachine& a, const PointedMachine& b) {
    return equal_coinductive(a.machine, a.start, b.machine, b.start);
}

Word parse_word(const std::string& text, int p) {
    Word w;
    if (text.empty()) return w;
    if (text.find(',') != std::string::npos) {
        std::istringstream in(text);
        std::string part;
        while (std::getline(in, part, ',')) {
            int letter;
            try {
                letter = std::stoi(part);
            } catch (const std::exception&) {
                throw MealyError("bad word '" + text + "'");
            }
            if (letter < 1 || letter > p) throw LetterOutOfRange(letter, p);
            w.push_back(letter);
        }
    } else {
        for (char c : text) {
            if (c < '0' || c > '9') throw MealyError("bad word '" + text + "'");
            int letter = c - '0';
            if (letter < 1 || letter > p) throw LetterOutOfRange(letter, p);
            w.push_back(letter);
        }
    }
    return w;
}

std::string format_word(const Word& w, int p) {
    std::string s;
    for (size_t i = 0; i < w.size(); ++i) {
        if (p > 9 && i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

}  // namespace agr
