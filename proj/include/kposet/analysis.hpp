#pragma once

// Finite-order combinatorics: antichains, Dilworth chain covers, and the
// two conditions on a pair of orders (weak ⊆ strong) on one carrier:
//   (*) for each k, some strong chain of k elements is a weak antichain,
//   (†) for each k, some strong chain is not a union of k weak chains.
// Both are decided here on finite fragments by ordered exhaustive search.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kposet/error.hpp"
#include "kposet/poset.hpp"

namespace kposet {

inline constexpr std::size_t kMaxFiniteCarrier = 20;

using Indices = std::vector<std::size_t>;

/// Strict order on {0..n-1}, transitively closed and irreflexive.
struct FinitePoset {
    std::size_t n = 0;
    std::vector<std::vector<bool>> lt;
    std::vector<std::string> names;

    FinitePoset() = default;
    explicit FinitePoset(std::size_t size) : n(size), lt(size, std::vector<bool>(size, false)) {
        for (std::size_t i = 0; i < n; ++i) names.push_back(std::to_string(i));
    }

    /// Closes `pairs` (i < j) transitively.
    static FinitePoset from_relation(std::size_t size, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
        FinitePoset fp(size);
        for (auto [a, b] : pairs) {
            if (a >= size || b >= size) throw ArgumentError("relation index out of range");
            fp.lt[a][b] = true;
        }
        fp.lt = poset_detail::close_strict(std::move(fp.lt));
        return fp;
    }

    static FinitePoset chain(std::size_t size) {
        FinitePoset fp(size);
        for (std::size_t i = 0; i < size; ++i)
            for (std::size_t j = i + 1; j < size; ++j) fp.lt[i][j] = true;
        return fp;
    }

    bool less(std::size_t i, std::size_t j) const { return lt[i][j]; }
    bool comparable(std::size_t i, std::size_t j) const { return i == j || lt[i][j] || lt[j][i]; }

    /// Throws ArgumentError unless lt is a strict order.
    void check() const {
        if (lt.size() != n) throw ArgumentError("relation matrix has wrong size");
        for (std::size_t i = 0; i < n; ++i) {
            if (lt[i].size() != n) throw ArgumentError("relation matrix has wrong size");
            if (lt[i][i]) throw ArgumentError("relation is not irreflexive at " + names[i]);
            for (std::size_t j = 0; j < n; ++j) {
                if (lt[i][j] && lt[j][i]) throw ArgumentError("relation is not antisymmetric");
                if (!lt[i][j]) continue;
                for (std::size_t k = 0; k < n; ++k)
                    if (lt[j][k] && !lt[i][k]) throw ArgumentError("relation is not transitive");
            }
        }
    }

    FinitePoset restricted(const Indices& subset) const {
        FinitePoset out(subset.size());
        for (std::size_t a = 0; a < subset.size(); ++a) {
            out.names[a] = names[subset[a]];
            for (std::size_t b = 0; b < subset.size(); ++b) out.lt[a][b] = lt[subset[a]][subset[b]];
        }
        return out;
    }

    FinitePoset reversed() const {
        FinitePoset out = *this;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out.lt[i][j] = lt[j][i];
        return out;
    }
};

/// Two orders on one carrier; weak.lt ⊆ strong.lt.
struct OrderPair {
    FinitePoset weak;
    FinitePoset strong;

    void check() const {
        weak.check();
        strong.check();
        if (weak.n != strong.n) throw ArgumentError("order pair: carriers differ in size");
        for (std::size_t i = 0; i < weak.n; ++i)
            for (std::size_t j = 0; j < weak.n; ++j)
                if (weak.lt[i][j] && !strong.lt[i][j])
                    throw ArgumentError("order pair: strong order does not extend weak at (" + weak.names[i] + ", " +
                                        weak.names[j] + ")");
    }
};

inline bool is_chain(const FinitePoset& fp, const Indices& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (!fp.comparable(s[a], s[b])) return false;
    return true;
}

inline bool is_antichain(const FinitePoset& fp, const Indices& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (s[a] == s[b] || fp.comparable(s[a], s[b])) return false;
    return true;
}

namespace analysis_detail {

inline void check_bound(const FinitePoset& fp, const char* who) {
    if (fp.n > kMaxFiniteCarrier)
        throw ResourceError(std::string(who) + ": carrier of " + std::to_string(fp.n) + " elements exceeds the bound " +
                            std::to_string(kMaxFiniteCarrier));
}

// Branch and bound over "take v or not", lowest index first, so among the
// maximum antichains the lexicographically first is found.
inline void antichain_search(const FinitePoset& fp, std::size_t v, Indices& cur, std::vector<bool>& blocked,
                             Indices& best) {
    if (v == fp.n) {
        if (cur.size() > best.size()) best = cur;
        return;
    }
    std::size_t free_left = 0;
    for (std::size_t u = v; u < fp.n; ++u) free_left += !blocked[u];
    if (cur.size() + free_left <= best.size()) return;
    if (!blocked[v]) {
        std::vector<std::size_t> newly;
        for (std::size_t u = v + 1; u < fp.n; ++u)
            if (!blocked[u] && fp.comparable(v, u)) {
                blocked[u] = true;
                newly.push_back(u);
            }
        cur.push_back(v);
        antichain_search(fp, v + 1, cur, blocked, best);
        cur.pop_back();
        for (auto u : newly) blocked[u] = false;
    }
    antichain_search(fp, v + 1, cur, blocked, best);
}

inline bool augment(const FinitePoset& fp, std::size_t u, std::vector<bool>& seen, std::vector<long>& match_right) {
    for (std::size_t w = 0; w < fp.n; ++w) {
        if (!fp.lt[u][w] || seen[w]) continue;
        seen[w] = true;
        if (match_right[w] < 0 || augment(fp, static_cast<std::size_t>(match_right[w]), seen, match_right)) {
            match_right[w] = static_cast<long>(u);
            return true;
        }
    }
    return false;
}

}  // namespace analysis_detail

/// A maximum-cardinality antichain (exact).
inline Indices max_antichain(const FinitePoset& fp) {
    analysis_detail::check_bound(fp, "max_antichain");
    Indices cur, best;
    std::vector<bool> blocked(fp.n, false);
    analysis_detail::antichain_search(fp, 0, cur, blocked, best);
    return best;
}

/// Minimum chain cover from a maximum matching of the bipartite graph
/// {(u, w) : u < w}: each matched edge links u to its successor in a chain.
/// Chains are listed by their least index, each in increasing order.
inline std::vector<Indices> min_chain_cover(const FinitePoset& fp) {
    analysis_detail::check_bound(fp, "min_chain_cover");
    const std::size_t n = fp.n;
    std::vector<long> match_right(n, -1);
    std::vector<bool> left_done(n, false);
    // greedy pass first: keeps covers of simple posets intuitive
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t w = 0; w < n; ++w)
            if (fp.lt[u][w] && match_right[w] < 0) {
                match_right[w] = static_cast<long>(u);
                left_done[u] = true;
                break;
            }
    for (std::size_t u = 0; u < n; ++u) {
        if (left_done[u]) continue;
        std::vector<bool> seen(n, false);
        analysis_detail::augment(fp, u, seen, match_right);
    }
    std::vector<long> next(n, -1);
    std::vector<bool> has_pred(n, false);
    for (std::size_t w = 0; w < n; ++w)
        if (match_right[w] >= 0) {
            next[static_cast<std::size_t>(match_right[w])] = static_cast<long>(w);
            has_pred[w] = true;
        }
    std::vector<Indices> chains;
    for (std::size_t s = 0; s < n; ++s) {
        if (has_pred[s]) continue;
        Indices c;
        for (long v = static_cast<long>(s); v >= 0; v = next[static_cast<std::size_t>(v)])
            c.push_back(static_cast<std::size_t>(v));
        chains.push_back(std::move(c));
    }
    std::sort(chains.begin(), chains.end());
    return chains;
}

inline std::size_t width(const FinitePoset& fp) { return min_chain_cover(fp).size(); }

/// Orders the members of a chain increasingly.
inline Indices sort_as_chain(const FinitePoset& fp, Indices s) {
    std::sort(s.begin(), s.end(), [&](std::size_t a, std::size_t b) { return fp.lt[a][b]; });
    return s;
}

namespace analysis_detail {

// Extends cur with candidates in [from, m) in increasing order until it has
// k members; all members and m are pairwise strong-comparable and
// weak-incomparable.
inline bool star_extend(const OrderPair& pr, std::size_t k, std::size_t from, std::size_t m, Indices& cur) {
    if (cur.size() == k) return true;
    for (std::size_t v = from; v < m; ++v) {
        if (cur.size() + (m - v) < k) return false;
        auto fits = [&](std::size_t u) { return pr.strong.comparable(u, v) && !pr.weak.comparable(u, v); };
        if (!fits(m) || !std::all_of(cur.begin(), cur.end(), fits)) continue;
        cur.push_back(v);
        if (star_extend(pr, k, v + 1, m, cur)) return true;
        cur.pop_back();
    }
    return false;
}

inline void maximal_chains(const FinitePoset& fp, std::size_t from, Indices& cur, std::vector<Indices>& out) {
    bool extended = false;
    for (std::size_t v = 0; v < fp.n; ++v) {
        if (std::find(cur.begin(), cur.end(), v) != cur.end()) continue;
        if (!std::all_of(cur.begin(), cur.end(), [&](std::size_t u) { return fp.comparable(u, v); })) continue;
        extended = true;
        // each chain is generated once, members in increasing index order
        if (v < from) continue;
        cur.push_back(v);
        maximal_chains(fp, v + 1, cur, out);
        cur.pop_back();
    }
    if (!extended) out.push_back(cur);
}

}  // namespace analysis_detail

/// The first strong chain of k elements that is a weak antichain, searching
/// by increasing maximum index, then lexicographically. Sorted ascending.
inline std::optional<Indices> check_star(const OrderPair& pr, std::size_t k) {
    analysis_detail::check_bound(pr.strong, "check_star");
    if (k == 0) return Indices{};
    for (std::size_t m = k - 1; m < pr.strong.n; ++m) {
        Indices cur;
        if (analysis_detail::star_extend(pr, k - 1, 0, m, cur)) {
            cur.push_back(m);
            return cur;
        }
    }
    return std::nullopt;
}

/// All maximal chains, ordered by increasing maximum index, then
/// lexicographically. Each is sorted ascending by index.
inline std::vector<Indices> maximal_chains(const FinitePoset& fp) {
    analysis_detail::check_bound(fp, "maximal_chains");
    std::vector<Indices> out;
    if (fp.n == 0) return out;
    Indices cur;
    analysis_detail::maximal_chains(fp, 0, cur, out);
    std::sort(out.begin(), out.end(), [](const Indices& a, const Indices& b) {
        if (a.back() != b.back()) return a.back() < b.back();
        return a < b;
    });
    return out;
}

/// The first maximal strong chain whose weak restriction needs more than k
/// chains. A strong chain inside it needs at most as many, so this decides
/// whether any strong chain does.
inline std::optional<Indices> check_dagger(const OrderPair& pr, std::size_t k) {
    analysis_detail::check_bound(pr.strong, "check_dagger");
    for (const auto& c : maximal_chains(pr.strong))
        if (width(pr.weak.restricted(c)) > k) return c;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Fragments of computable posets

/// The first `bound` ranks of p (fewer if p is finite), names = format(d).
inline FinitePoset fragment(const Poset& p, std::uint64_t bound) {
    auto n = static_cast<std::size_t>(bound);
    if (auto c = p.cardinality()) n = std::min<std::size_t>(n, static_cast<std::size_t>(*c));
    FinitePoset fp(n);
    std::vector<Element> el;
    for (std::size_t i = 0; i < n; ++i) {
        el.push_back(p.unrank(i));
        fp.names[i] = p.format(el.back());
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) fp.lt[i][j] = i != j && p.leq(el[i], el[j]);
    return fp;
}

/// Both orders must share the carrier and ranking.
inline OrderPair fragment_pair(const Poset& weak, const Poset& strong, std::uint64_t bound) {
    OrderPair pr{fragment(weak, bound), fragment(strong, bound)};
    if (pr.weak.names != pr.strong.names) throw ArgumentError("order pair: the two posets rank their carriers differently");
    pr.check();
    return pr;
}

/// Fragment of the words of length <= max_len (ranks are length-lex).
inline OrderPair word_fragment_pair(const Poset& weak, const Poset& strong, std::size_t alphabet_size,
                                    std::size_t max_len) {
    std::uint64_t count = 0, layer = 1;
    for (std::size_t l = 0; l <= max_len; ++l, layer *= alphabet_size) count += layer;
    return fragment_pair(weak, strong, count);
}

inline FinitePoset finite_poset_from_json_matrix(const nlohmann::json& j) {
    try {
        auto names = j.at("elements").get<std::vector<std::string>>();
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& p : j.at("lt")) pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
        auto fp = FinitePoset::from_relation(names.size(), pairs);
        fp.names = std::move(names);
        return fp;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("finite poset JSON: ") + e.what());
    } catch (const ArgumentError& e) {
        throw ParseError(std::string("finite poset JSON: ") + e.what());
    }
}

/// `{"elements":[...], "weak":[[i,j],...], "strong":[[i,j],...]}`, both
/// closed transitively.
inline OrderPair order_pair_from_json(const nlohmann::json& j) {
    try {
        const auto names = j.at("elements").get<std::vector<std::string>>();
        auto load = [&](const char* key) {
            nlohmann::json one{{"elements", names}, {"lt", j.at(key)}};
            return finite_poset_from_json_matrix(one);
        };
        OrderPair pr{load("weak"), load("strong")};
        pr.check();
        return pr;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("order pair JSON: ") + e.what());
    }
}

inline nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Chain-antichain families

enum class FamilyKind { prefix_vs_lexico, lexico1_vs_lexico, generic_search };

/// True iff s is a strong chain and a weak antichain.
inline bool is_chain_antichain(const Poset& weak, const Poset& strong, const ElementSet& s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) {
            if (s[a] == s[b] || !strong.comparable(s[a], s[b]) || weak.comparable(s[a], s[b])) return false;
        }
    return true;
}

/// {lo^j hi : j < size}, increasing in the strong order, for the closed-form
/// kinds; the first check_star witness on the first `rank_bound` ranks for
/// generic search. Verified before returning.
inline ElementSet chain_antichain_family(const Poset& weak, const Poset& strong, FamilyKind kind, std::size_t size,
                                         char lo = 'a', char hi = 'b', std::uint64_t rank_bound = 15) {
    ElementSet out;
    if (kind == FamilyKind::generic_search) {
        const auto pr = fragment_pair(weak, strong, rank_bound);
        const auto w = check_star(pr, size);
        if (!w) throw ResourceError("no chain-antichain of size " + std::to_string(size) + " among the first " +
                                    std::to_string(rank_bound) + " ranks");
        for (auto i : sort_as_chain(pr.strong, *w)) out.push_back(strong.unrank(i));
    } else {
        for (std::size_t j = size; j-- > 0;) out.push_back(word(std::string(j, lo) + hi));
    }
    if (!is_chain_antichain(weak, strong, out)) {
        std::string w;
        for (const auto& d : out) w += (w.empty() ? "" : ", ") + strong.format(d);
        throw Error("family {" + w + "} is not a strong chain and weak antichain for " + weak.spec() + " / " +
                    strong.spec());
    }
    return out;
}

}  // namespace kposet
