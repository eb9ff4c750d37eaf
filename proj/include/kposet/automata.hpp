#pragma once

// Regular languages as canonical minimal DFAs.
//
// Regex texts are words over the alphabet plus the five operator symbols
// '+', '*', '·' (U+00B7), '(' and ')'. Concatenation is always explicit and
// "()" denotes the empty word. Every text that is not a well-formed
// expression denotes the empty language, so parsing is total.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "kposet/error.hpp"

namespace kposet {

// ---------------------------------------------------------------------------
// Alphabet

/// The declared symbol listing of a regular-language alphabet. Symbols are
/// single ASCII characters distinct from the operator characters.
class Alphabet {
public:
    Alphabet() = default;
    explicit Alphabet(std::string_view symbols) : symbols_(symbols) {
        if (symbols_.empty()) throw ArgumentError("alphabet must not be empty");
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            const char c = symbols_[i];
            if (c == '+' || c == '*' || c == '(' || c == ')' || c == '.' || c == ';' || c == '<' ||
                c == ',' || static_cast<unsigned char>(c) >= 0x80 || c <= ' ')
                throw ArgumentError(std::string("reserved character in alphabet: '") + c + "'");
            if (symbols_.find(c) != i) throw ArgumentError(std::string("duplicate symbol '") + c + "'");
        }
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    char operator[](std::size_t i) const { return symbols_[i]; }
    const std::string& symbols() const noexcept { return symbols_; }

    std::optional<std::size_t> index_of(char c) const {
        const auto pos = symbols_.find(c);
        if (pos == std::string::npos) return std::nullopt;
        return pos;
    }

    friend bool operator==(const Alphabet&, const Alphabet&) = default;

private:
    std::string symbols_;
};

// ---------------------------------------------------------------------------
// Regex syntax trees

struct RegexNode;
using RegexPtr = std::shared_ptr<const RegexNode>;

struct RegexNode {
    enum class Kind { epsilon, symbol, alt, cat, star };
    Kind kind = Kind::epsilon;
    char symbol = 0;
    RegexPtr left;
    RegexPtr right;
};

struct RegexAst {
    RegexPtr root;
    std::string source;
};

namespace regex_detail {

inline constexpr std::string_view kDot = "\xC2\xB7";  // '·'

enum class Tok { symbol, plus, star, dot, lparen, rparen, end };

struct Token {
    Tok kind;
    char symbol = 0;
};

inline std::optional<std::vector<Token>> tokenize(std::string_view text, const Alphabet& sigma) {
    std::vector<Token> out;
    for (std::size_t i = 0; i < text.size();) {
        if (text.substr(i, kDot.size()) == kDot) {
            out.push_back({Tok::dot});
            i += kDot.size();
            continue;
        }
        const char c = text[i++];
        switch (c) {
            case '+': out.push_back({Tok::plus}); break;
            case '*': out.push_back({Tok::star}); break;
            case '(': out.push_back({Tok::lparen}); break;
            case ')': out.push_back({Tok::rparen}); break;
            default:
                if (!sigma.index_of(c)) return std::nullopt;
                out.push_back({Tok::symbol, c});
        }
    }
    out.push_back({Tok::end});
    return out;
}

inline RegexPtr make(RegexNode::Kind k, RegexPtr l = nullptr, RegexPtr r = nullptr, char s = 0) {
    auto n = std::make_shared<RegexNode>();
    n->kind = k;
    n->left = std::move(l);
    n->right = std::move(r);
    n->symbol = s;
    return n;
}

class Parser {
public:
    explicit Parser(const std::vector<Token>& toks) : toks_(toks) {}

    RegexPtr parse() {
        auto r = alt();
        if (!r || peek() != Tok::end) return nullptr;
        return r;
    }

private:
    Tok peek() const { return toks_[pos_].kind; }

    RegexPtr alt() {
        auto lhs = cat();
        while (lhs && peek() == Tok::plus) {
            ++pos_;
            auto rhs = cat();
            if (!rhs) return nullptr;
            lhs = make(RegexNode::Kind::alt, lhs, rhs);
        }
        return lhs;
    }

    RegexPtr cat() {
        auto lhs = postfix();
        while (lhs && peek() == Tok::dot) {
            ++pos_;
            auto rhs = postfix();
            if (!rhs) return nullptr;
            lhs = make(RegexNode::Kind::cat, lhs, rhs);
        }
        return lhs;
    }

    RegexPtr postfix() {
        auto a = atom();
        while (a && peek() == Tok::star) {
            ++pos_;
            a = make(RegexNode::Kind::star, a);
        }
        return a;
    }

    RegexPtr atom() {
        const Token& t = toks_[pos_];
        if (t.kind == Tok::symbol) {
            ++pos_;
            return make(RegexNode::Kind::symbol, nullptr, nullptr, t.symbol);
        }
        if (t.kind != Tok::lparen) return nullptr;
        ++pos_;
        if (peek() == Tok::rparen) {
            ++pos_;
            return make(RegexNode::Kind::epsilon);
        }
        auto inner = alt();
        if (!inner || peek() != Tok::rparen) return nullptr;
        ++pos_;
        return inner;
    }

    const std::vector<Token>& toks_;
    std::size_t pos_ = 0;
};

}  // namespace regex_detail

/// The total map from texts to languages: empty optional = empty language.
inline std::optional<RegexAst> parse_regex(std::string_view text, const Alphabet& sigma) {
    const auto toks = regex_detail::tokenize(text, sigma);
    if (!toks) return std::nullopt;
    regex_detail::Parser parser(*toks);
    auto root = parser.parse();
    if (!root) return std::nullopt;
    return RegexAst{std::move(root), std::string(text)};
}

inline void print_regex(const RegexPtr& n, int ctx, std::string& out) {
    using K = RegexNode::Kind;
    switch (n->kind) {
        case K::epsilon: out += "()"; return;
        case K::symbol: out.push_back(n->symbol); return;
        case K::star:
            print_regex(n->left, 2, out);
            out.push_back('*');
            return;
        case K::cat:
            if (ctx > 1) out.push_back('(');
            print_regex(n->left, 1, out);
            out += regex_detail::kDot;
            print_regex(n->right, 1, out);
            if (ctx > 1) out.push_back(')');
            return;
        case K::alt:
            if (ctx > 0) out.push_back('(');
            print_regex(n->left, 0, out);
            out.push_back('+');
            print_regex(n->right, 0, out);
            if (ctx > 0) out.push_back(')');
            return;
    }
}

inline std::string print_regex(const RegexPtr& n) {
    std::string s;
    print_regex(n, 0, s);
    return s;
}

// ---------------------------------------------------------------------------
// DFAs

struct Dfa {
    Alphabet alphabet;
    std::uint32_t start = 0;
    std::vector<bool> accept;
    /// delta[state][symbol index]
    std::vector<std::vector<std::uint32_t>> delta;
    bool canonical = false;

    std::size_t size() const noexcept { return accept.size(); }

    std::uint32_t run(std::uint32_t from, std::string_view word) const {
        for (char c : word) {
            const auto idx = alphabet.index_of(c);
            if (!idx) throw DomainError(std::string("symbol not in alphabet: '") + c + "'");
            from = delta[from][*idx];
        }
        return from;
    }

    bool accepts(std::string_view word) const { return accept[run(start, word)]; }

    /// Number of states from which an accepting state is reachable.
    std::size_t live_states() const {
        std::vector<std::vector<std::uint32_t>> rev(size());
        for (std::uint32_t s = 0; s < size(); ++s)
            for (auto t : delta[s]) rev[t].push_back(s);
        std::vector<bool> live(size(), false);
        std::deque<std::uint32_t> queue;
        for (std::uint32_t s = 0; s < size(); ++s)
            if (accept[s]) {
                live[s] = true;
                queue.push_back(s);
            }
        while (!queue.empty()) {
            const auto s = queue.front();
            queue.pop_front();
            for (auto p : rev[s])
                if (!live[p]) {
                    live[p] = true;
                    queue.push_back(p);
                }
        }
        return static_cast<std::size_t>(std::count(live.begin(), live.end(), true));
    }

    /// Structural key; equal keys on canonical DFAs mean equal languages.
    std::string key() const {
        std::string k = alphabet.symbols();
        k.push_back('|');
        k += std::to_string(start);
        for (std::uint32_t s = 0; s < size(); ++s) {
            k.push_back(accept[s] ? 'F' : 'n');
            for (auto t : delta[s]) {
                k += std::to_string(t);
                k.push_back(',');
            }
        }
        return k;
    }

    friend bool operator==(const Dfa& a, const Dfa& b) {
        return a.alphabet == b.alphabet && a.start == b.start && a.accept == b.accept && a.delta == b.delta;
    }
};

inline nlohmann::json dfa_to_json(const Dfa& d) {
    nlohmann::json j;
    j["n"] = d.size();
    j["start"] = d.start;
    std::vector<std::uint32_t> acc;
    for (std::uint32_t s = 0; s < d.size(); ++s)
        if (d.accept[s]) acc.push_back(s);
    j["accept"] = acc;
    j["delta"] = d.delta;
    j["alphabet"] = d.alphabet.symbols();
    return j;
}

Dfa canonicalize(const Dfa& d);

inline Dfa dfa_from_json(const nlohmann::json& j, const std::optional<Alphabet>& sigma = std::nullopt) {
    try {
        Dfa d;
        if (sigma)
            d.alphabet = *sigma;
        else
            d.alphabet = Alphabet(j.at("alphabet").get<std::string>());
        const auto n = j.at("n").get<std::size_t>();
        if (n == 0) throw ParseError("DFA needs at least one state");
        d.start = j.at("start").get<std::uint32_t>();
        d.accept.assign(n, false);
        for (auto s : j.at("accept").get<std::vector<std::uint32_t>>()) {
            if (s >= n) throw ParseError("accepting state out of range");
            d.accept[s] = true;
        }
        d.delta = j.at("delta").get<std::vector<std::vector<std::uint32_t>>>();
        if (d.delta.size() != n || d.start >= n) throw ParseError("DFA delta/start inconsistent with n");
        for (const auto& row : d.delta) {
            if (row.size() != d.alphabet.size()) throw ParseError("DFA delta row has wrong arity");
            for (auto t : row)
                if (t >= n) throw ParseError("DFA transition target out of range");
        }
        return d;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad DFA JSON: ") + e.what());
    }
}

namespace automata_detail {

struct Nfa {
    struct State {
        std::vector<std::pair<std::size_t, std::uint32_t>> on_symbol;  // (symbol index, target)
        std::vector<std::uint32_t> eps;
    };
    std::vector<State> states;
    std::uint32_t start = 0;
    std::uint32_t final = 0;

    std::uint32_t add() {
        states.emplace_back();
        return static_cast<std::uint32_t>(states.size() - 1);
    }
};

// Thompson fragment: (entry, exit)
inline std::pair<std::uint32_t, std::uint32_t> thompson(Nfa& nfa, const RegexPtr& n, const Alphabet& sigma) {
    using K = RegexNode::Kind;
    switch (n->kind) {
        case K::epsilon: {
            auto s = nfa.add(), f = nfa.add();
            nfa.states[s].eps.push_back(f);
            return {s, f};
        }
        case K::symbol: {
            auto s = nfa.add(), f = nfa.add();
            nfa.states[s].on_symbol.emplace_back(*sigma.index_of(n->symbol), f);
            return {s, f};
        }
        case K::cat: {
            auto [s1, f1] = thompson(nfa, n->left, sigma);
            auto [s2, f2] = thompson(nfa, n->right, sigma);
            nfa.states[f1].eps.push_back(s2);
            return {s1, f2};
        }
        case K::alt: {
            auto [s1, f1] = thompson(nfa, n->left, sigma);
            auto [s2, f2] = thompson(nfa, n->right, sigma);
            auto s = nfa.add(), f = nfa.add();
            nfa.states[s].eps = {s1, s2};
            nfa.states[f1].eps.push_back(f);
            nfa.states[f2].eps.push_back(f);
            return {s, f};
        }
        case K::star: {
            auto [s1, f1] = thompson(nfa, n->left, sigma);
            auto s = nfa.add(), f = nfa.add();
            nfa.states[s].eps = {s1, f};
            nfa.states[f1].eps = {s1, f};
            return {s, f};
        }
    }
    return {0, 0};
}

inline void eps_close(const Nfa& nfa, std::vector<std::uint32_t>& set) {
    std::vector<bool> seen(nfa.states.size(), false);
    std::vector<std::uint32_t> stack;
    for (auto s : set) {
        seen[s] = true;
        stack.push_back(s);
    }
    while (!stack.empty()) {
        const auto s = stack.back();
        stack.pop_back();
        for (auto t : nfa.states[s].eps)
            if (!seen[t]) {
                seen[t] = true;
                set.push_back(t);
                stack.push_back(t);
            }
    }
    std::sort(set.begin(), set.end());
}

/// Subset construction starting from an arbitrary set of states of a
/// transition structure given by `step`.
template <class Step, class Accepting>
Dfa subset_construct(const Alphabet& sigma, std::vector<std::uint32_t> start, Step&& step, Accepting&& accepting) {
    Dfa out;
    out.alphabet = sigma;
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::vector<std::uint32_t>> pending;
    auto id_of = [&](std::vector<std::uint32_t> s) {
        auto [it, inserted] = ids.emplace(std::move(s), static_cast<std::uint32_t>(ids.size()));
        if (inserted) {
            pending.push_back(it->first);
            out.accept.push_back(accepting(it->first));
            out.delta.emplace_back(sigma.size(), 0);
        }
        return it->second;
    };
    out.start = id_of(std::move(start));
    for (std::size_t next = 0; next < pending.size(); ++next) {
        const auto cur = pending[next];
        const auto cur_id = ids.at(cur);
        for (std::size_t a = 0; a < sigma.size(); ++a) {
            const auto target = id_of(step(cur, a));
            out.delta[cur_id][a] = target;
        }
    }
    return out;
}

}  // namespace automata_detail

/// Minimal DFA with states numbered in breadth-first order from the start,
/// exploring symbols in declared order. Language-equal DFAs over the same
/// alphabet become structurally identical.
inline Dfa canonicalize(const Dfa& d) {
    const std::size_t k = d.alphabet.size();
    // reachable part
    std::vector<std::int64_t> reach_id(d.size(), -1);
    std::vector<std::uint32_t> order{d.start};
    reach_id[d.start] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            const auto t = d.delta[order[i]][a];
            if (reach_id[t] < 0) {
                reach_id[t] = static_cast<std::int64_t>(order.size());
                order.push_back(t);
            }
        }
    const std::size_t n = order.size();
    // Moore partition refinement
    std::vector<std::uint32_t> cls(n);
    for (std::size_t i = 0; i < n; ++i) cls[i] = d.accept[order[i]] ? 1 : 0;
    std::size_t classes = 0;
    while (true) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> sig_ids;
        std::vector<std::uint32_t> next(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> sig{cls[i]};
            for (std::size_t a = 0; a < k; ++a)
                sig.push_back(cls[static_cast<std::size_t>(reach_id[d.delta[order[i]][a]])]);
            next[i] = sig_ids.emplace(std::move(sig), static_cast<std::uint32_t>(sig_ids.size())).first->second;
        }
        cls = std::move(next);
        if (sig_ids.size() == classes) break;
        classes = sig_ids.size();
    }
    // BFS renumbering of the quotient automaton
    std::vector<std::uint32_t> rep(classes);  // class -> some reachable index
    for (std::size_t i = n; i-- > 0;) rep[cls[i]] = static_cast<std::uint32_t>(i);
    std::vector<std::int64_t> canon(classes, -1);
    std::vector<std::uint32_t> bfs{cls[0]};
    canon[cls[0]] = 0;
    for (std::size_t i = 0; i < bfs.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            const auto c = cls[static_cast<std::size_t>(reach_id[d.delta[order[rep[bfs[i]]]][a]])];
            if (canon[c] < 0) {
                canon[c] = static_cast<std::int64_t>(bfs.size());
                bfs.push_back(c);
            }
        }
    Dfa out;
    out.alphabet = d.alphabet;
    out.start = 0;
    out.canonical = true;
    out.accept.resize(bfs.size());
    out.delta.assign(bfs.size(), std::vector<std::uint32_t>(k));
    for (std::size_t s = 0; s < bfs.size(); ++s) {
        const auto orig = order[rep[bfs[s]]];
        out.accept[s] = d.accept[orig];
        for (std::size_t a = 0; a < k; ++a)
            out.delta[s][a] = static_cast<std::uint32_t>(
                canon[cls[static_cast<std::size_t>(reach_id[d.delta[orig][a]])]]);
    }
    return out;
}

inline Dfa empty_language_dfa(const Alphabet& sigma) {
    Dfa d;
    d.alphabet = sigma;
    d.accept = {false};
    d.delta.assign(1, std::vector<std::uint32_t>(sigma.size(), 0));
    d.canonical = true;
    return d;
}

inline Dfa universal_language_dfa(const Alphabet& sigma) {
    Dfa d = empty_language_dfa(sigma);
    d.accept = {true};
    return d;
}

/// Thompson construction, subset construction, minimization, canonical
/// renumbering.
inline Dfa to_canonical_dfa(const std::optional<RegexAst>& r, const Alphabet& sigma) {
    using namespace automata_detail;
    if (!r) return empty_language_dfa(sigma);
    Nfa nfa;
    auto [s, f] = thompson(nfa, r->root, sigma);
    nfa.start = s;
    nfa.final = f;
    std::vector<std::uint32_t> init{s};
    eps_close(nfa, init);
    auto step = [&](const std::vector<std::uint32_t>& cur, std::size_t a) {
        std::vector<std::uint32_t> next;
        for (auto q : cur)
            for (auto [sym, t] : nfa.states[q].on_symbol)
                if (sym == a) next.push_back(t);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        eps_close(nfa, next);
        return next;
    };
    auto accepting = [&](const std::vector<std::uint32_t>& set) {
        return std::binary_search(set.begin(), set.end(), nfa.final);
    };
    return canonicalize(subset_construct(sigma, std::move(init), step, accepting));
}

inline Dfa to_canonical_dfa(std::string_view text, const Alphabet& sigma) {
    return to_canonical_dfa(parse_regex(text, sigma), sigma);
}

/// L(lhs) ⊆ L(rhs), via emptiness of the product automaton for lhs \ rhs.
inline bool language_leq(const Dfa& lhs, const Dfa& rhs) {
    if (!(lhs.alphabet == rhs.alphabet)) throw ArgumentError("language_leq: alphabet mismatch");
    const std::size_t k = lhs.alphabet.size();
    std::vector<bool> seen(lhs.size() * rhs.size(), false);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> stack{{lhs.start, rhs.start}};
    seen[lhs.start * rhs.size() + rhs.start] = true;
    while (!stack.empty()) {
        auto [p, q] = stack.back();
        stack.pop_back();
        if (lhs.accept[p] && !rhs.accept[q]) return false;
        for (std::size_t a = 0; a < k; ++a) {
            const auto np = lhs.delta[p][a], nq = rhs.delta[q][a];
            const auto idx = np * rhs.size() + nq;
            if (!seen[idx]) {
                seen[idx] = true;
                stack.emplace_back(np, nq);
            }
        }
    }
    return true;
}

/// Canonical DFA of the language read from the state set X.
inline Dfa language_from_states(const Dfa& d, std::vector<std::uint32_t> states) {
    std::sort(states.begin(), states.end());
    states.erase(std::unique(states.begin(), states.end()), states.end());
    if (states.empty()) return empty_language_dfa(d.alphabet);
    auto step = [&](const std::vector<std::uint32_t>& cur, std::size_t a) {
        std::vector<std::uint32_t> next;
        for (auto q : cur) next.push_back(d.delta[q][a]);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        return next;
    };
    auto accepting = [&](const std::vector<std::uint32_t>& set) {
        return std::any_of(set.begin(), set.end(), [&](auto q) { return static_cast<bool>(d.accept[q]); });
    };
    return canonicalize(automata_detail::subset_construct(d.alphabet, std::move(states), step, accepting));
}

/// States reached from the start by the words of M.
inline std::vector<std::uint32_t> reached_states(const Dfa& d, const std::vector<std::string>& words) {
    std::vector<std::uint32_t> x;
    for (const auto& w : words) x.push_back(d.run(d.start, w));
    std::sort(x.begin(), x.end());
    x.erase(std::unique(x.begin(), x.end()), x.end());
    return x;
}

/// M^{-1}L = {u : exists v in M, vu in L}.
inline Dfa quotient(const Dfa& lang, const std::vector<std::string>& words) {
    return language_from_states(lang, reached_states(lang, words));
}

// ---------------------------------------------------------------------------
// State elimination: a fixed DFA -> regex text algorithm.

namespace automata_detail {

using regex_detail::make;
using K = RegexNode::Kind;

// nullptr stands for the empty language during elimination.
inline bool same(const RegexPtr& a, const RegexPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return print_regex(a) == print_regex(b);
}

inline RegexPtr alt(RegexPtr a, RegexPtr b) {
    if (!a) return b;
    if (!b) return a;
    if (same(a, b)) return a;
    return make(K::alt, std::move(a), std::move(b));
}

inline RegexPtr cat(RegexPtr a, RegexPtr b) {
    if (!a || !b) return nullptr;
    if (a->kind == K::epsilon) return b;
    if (b->kind == K::epsilon) return a;
    return make(K::cat, std::move(a), std::move(b));
}

inline RegexPtr star(RegexPtr a) {
    if (!a || a->kind == K::epsilon) return make(K::epsilon);
    if (a->kind == K::star) return a;
    return make(K::star, std::move(a));
}

}  // namespace automata_detail

/// Text T with to_canonical_dfa(T) == d. States are eliminated in
/// ascending number; the empty language maps to the empty text.
inline std::string canonical_regex(const Dfa& d) {
    using namespace automata_detail;
    const std::size_t n = d.size();
    const std::size_t src = n, dst = n + 1;
    std::vector<std::vector<RegexPtr>> edge(n + 2, std::vector<RegexPtr>(n + 2));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t a = 0; a < d.alphabet.size(); ++a)
            edge[s][d.delta[s][a]] = alt(edge[s][d.delta[s][a]],
                                         make(K::symbol, nullptr, nullptr, d.alphabet[a]));
        if (d.accept[s]) edge[s][dst] = make(K::epsilon);
    }
    edge[src][d.start] = make(K::epsilon);
    std::vector<bool> gone(n + 2, false);
    for (std::size_t k = 0; k < n; ++k) {
        const RegexPtr loop = star(edge[k][k]);
        for (std::size_t i = 0; i < n + 2; ++i) {
            if (gone[i] || i == k || !edge[i][k]) continue;
            for (std::size_t j = 0; j < n + 2; ++j) {
                if (gone[j] || j == k || !edge[k][j]) continue;
                edge[i][j] = alt(edge[i][j], cat(cat(edge[i][k], loop), edge[k][j]));
            }
        }
        gone[k] = true;
        for (std::size_t i = 0; i < n + 2; ++i) edge[i][k] = edge[k][i] = nullptr;
    }
    if (!edge[src][dst]) return "";
    return print_regex(edge[src][dst]);
}

// ---------------------------------------------------------------------------
// The enumeration eta of regex texts, deduplicated by language: rank k is
// the k-th distinct language met while listing texts in length-lexicographic
// order over the alphabet followed by + * · ( ).

class RegEnumeration {
public:
    explicit RegEnumeration(Alphabet sigma, std::size_t max_text_length = 8)
        : sigma_(std::move(sigma)), max_len_(max_text_length) {
        for (std::size_t i = 0; i < sigma_.size(); ++i) tokens_.push_back(std::string(1, sigma_[i]));
        for (std::string_view op : {std::string_view("+"), std::string_view("*"), regex_detail::kDot,
                                     std::string_view("("), std::string_view(")")})
            tokens_.emplace_back(op);
    }

    const Alphabet& alphabet() const noexcept { return sigma_; }

    struct Entry {
        std::shared_ptr<const Dfa> dfa;
        std::string text;
    };

    Entry unrank(std::uint64_t k) {
        std::lock_guard lock(mu_);
        while (entries_.size() <= k)
            if (!advance()) throw ResourceError("reg_unrank: text-length ceiling reached before rank " + std::to_string(k));
        return entries_[k];
    }

    std::uint64_t rank(const Dfa& d) {
        const Dfa c = d.canonical ? d : canonicalize(d);
        const std::string k = c.key();
        std::lock_guard lock(mu_);
        while (true) {
            if (auto it = index_.find(k); it != index_.end()) return it->second;
            if (!advance()) throw ResourceError("reg_rank: language not reached within the text-length ceiling");
        }
    }

    std::size_t known() const {
        std::lock_guard lock(mu_);
        return entries_.size();
    }

private:
    // Examine the next text; false once the ceiling is exhausted.
    bool advance() {
        while (true) {
            if (exhausted_) return false;
            std::string text;
            for (auto i : odometer_) text += tokens_[i];
            bump();
            Dfa d = to_canonical_dfa(text, sigma_);
            std::string key = d.key();
            if (index_.emplace(key, entries_.size()).second) {
                entries_.push_back({std::make_shared<const Dfa>(std::move(d)), std::move(text)});
                return true;
            }
        }
    }

    void bump() {
        std::size_t i = odometer_.size();
        while (i > 0) {
            --i;
            if (++odometer_[i] < tokens_.size()) return;
            odometer_[i] = 0;
        }
        if (odometer_.size() == max_len_) {
            exhausted_ = true;
            return;
        }
        odometer_.assign(odometer_.size() + 1, 0);
    }

    Alphabet sigma_;
    std::size_t max_len_;
    std::vector<std::string> tokens_;
    std::vector<std::size_t> odometer_;  // current text as token indices
    bool exhausted_ = false;
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::uint64_t> index_;
    mutable std::mutex mu_;
};

/// Process-wide enumeration cache, one per alphabet.
inline RegEnumeration& reg_enumeration(const Alphabet& sigma) {
    static std::mutex mu;
    static std::map<std::string, std::unique_ptr<RegEnumeration>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[sigma.symbols()];
    if (!slot) slot = std::make_unique<RegEnumeration>(sigma);
    return *slot;
}

inline std::uint64_t reg_rank(const Dfa& d) { return reg_enumeration(d.alphabet).rank(d); }

inline std::shared_ptr<const Dfa> reg_unrank(std::uint64_t k, const Alphabet& sigma) {
    return reg_enumeration(sigma).unrank(k).dfa;
}

}  // namespace kposet
