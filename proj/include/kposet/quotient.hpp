#pragma once

// The quotient M^{-1}L as an approximation process in (Reg, ⊆): f(L, t) is
// the quotient of L by the words of M enumerated up to step t. Only the set
// of DFA states reached matters, so the process changes value at most
// once per state of L.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kposet/automata.hpp"
#include "kposet/limitops.hpp"
#include "kposet/poset.hpp"

namespace kposet {

/// m(i): the i-th enumerated word of M, or nothing at step i.
using WordEnumerator = std::function<std::optional<std::string>(std::uint64_t)>;

inline WordEnumerator list_enumerator(std::vector<std::string> words) {
    auto w = std::make_shared<const std::vector<std::string>>(std::move(words));
    return [w](std::uint64_t i) -> std::optional<std::string> {
        if (i < w->size()) return (*w)[i];
        return std::nullopt;
    };
}

/// Evaluator over canonical DFAs L (passed as RegLang elements).
inline Evaluator<Element> quotient_evaluator(WordEnumerator m) {
    Evaluator<Element> e;
    e.sweep = [m](const Element& x, std::uint64_t t_max, std::uint64_t fuel, const Evaluator<Element>::Visit& visit) {
        const auto* l = std::get_if<RegLang>(&x);
        if (!l || !l->dfa) throw DomainError("quotient process: input must be a regular language");
        const Dfa& lang = *l->dfa;
        std::vector<bool> reached(lang.size(), false);
        std::optional<Element> cur;
        for (std::uint64_t t = 0; t <= t_max; ++t) {
            if (t > fuel) {
                visit(t, Outcome::pending());
                continue;
            }
            bool grew = !cur;
            if (auto w = m(t)) {
                const auto q = lang.run(lang.start, *w);
                if (!reached[q]) reached[q] = grew = true;
            }
            if (grew) {
                std::vector<std::uint32_t> states;
                for (std::uint32_t q = 0; q < reached.size(); ++q)
                    if (reached[q]) states.push_back(q);
                cur = Element{RegLang{std::make_shared<const Dfa>(language_from_states(lang, states))}};
            }
            visit(t, Outcome::of(*cur));
        }
    };
    e.eval = [sweep = e.sweep](const Element& x, std::uint64_t t, std::uint64_t fuel) {
        Outcome last;
        sweep(x, t, fuel, [&](std::uint64_t u, const Outcome& o) {
            if (u == t) last = o;
        });
        return last;
    };
    return e;
}

/// Number of value changes after the first defined point.
inline std::size_t count_changes(const Trace& tr) {
    std::size_t n = 0;
    for (std::size_t i = 1; i < tr.size(); ++i) n += !(tr[i].d == tr[i - 1].d);
    return n;
}

}  // namespace kposet
