#pragma once

// RankVM: a two-register machine whose programs are raw bit strings and
// whose OUT instruction proposes the poset element unrank(reg_a). Every
// program is a monotone approximation process once proposals that would
// break monotonicity are skipped.
//
// Opcodes (3 bits, read left to right):
//   000 INC_A   001 INC_B   010 DEC_A   011 DEC_B   (DEC floors at 0)
//   100 JZ_A o  101 JZ_B o  jump by the 5-bit two's-complement offset o
//                           (relative to the jump itself) when the register is 0
//   110 OUT     111 HALT
// A trailing incomplete instruction invalidates the program. Falling off
// the end or jumping outside the program spins forever.
//
// Also here: the small Turing machines behind the busy beaver process, the
// cardinality process of enumerated sets and the set-interaction processes.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "kposet/codec.hpp"
#include "kposet/error.hpp"
#include "kposet/limitops.hpp"
#include "kposet/poset.hpp"

namespace kposet {

enum class Op : std::uint8_t { inc_a, inc_b, dec_a, dec_b, jz_a, jz_b, out, halt };

struct Instr {
    Op op = Op::halt;
    int offset = 0;  // jumps only, -16..15
    friend bool operator==(const Instr&, const Instr&) = default;
};

using Listing = std::vector<Instr>;

struct Program {
    BinaryWord code;
    friend bool operator==(const Program&, const Program&) = default;
};

inline std::optional<Listing> parse_program(const BinaryWord& code) {
    Listing out;
    std::size_t i = 0;
    auto bits = [&](std::size_t n) {
        unsigned v = 0;
        for (std::size_t k = 0; k < n; ++k) v = (v << 1) | static_cast<unsigned>(code[i + k] == '1');
        i += n;
        return v;
    };
    while (i < code.size()) {
        if (code.size() - i < 3) return std::nullopt;
        const auto op = static_cast<Op>(bits(3));
        Instr ins{op, 0};
        if (op == Op::jz_a || op == Op::jz_b) {
            if (code.size() - i < 5) return std::nullopt;
            const int raw = static_cast<int>(bits(5));
            ins.offset = raw >= 16 ? raw - 32 : raw;
        }
        out.push_back(ins);
    }
    return out;
}

inline std::optional<Listing> parse_program(const Program& p) { return parse_program(p.code); }

inline BinaryWord assemble(const Listing& listing) {
    std::string s;
    for (const auto& ins : listing) {
        const auto op = static_cast<unsigned>(ins.op);
        for (int b = 2; b >= 0; --b) s.push_back(((op >> b) & 1U) ? '1' : '0');
        if (ins.op == Op::jz_a || ins.op == Op::jz_b) {
            if (ins.offset < -16 || ins.offset > 15) throw ArgumentError("jump offset out of range -16..15");
            const auto raw = static_cast<unsigned>(ins.offset < 0 ? ins.offset + 32 : ins.offset);
            for (int b = 4; b >= 0; --b) s.push_back(((raw >> b) & 1U) ? '1' : '0');
        }
    }
    return BinaryWord(s);
}

/// Mnemonic form, e.g. "INC_A OUT JZ_B -2 HALT".
inline BinaryWord assemble(std::string_view text) {
    static const std::map<std::string, Op, std::less<>> names{
        {"INC_A", Op::inc_a}, {"INC_B", Op::inc_b}, {"DEC_A", Op::dec_a}, {"DEC_B", Op::dec_b},
        {"JZ_A", Op::jz_a},   {"JZ_B", Op::jz_b},   {"OUT", Op::out},     {"HALT", Op::halt}};
    std::istringstream in{std::string(text)};
    Listing listing;
    std::string tok;
    while (in >> tok) {
        auto it = names.find(tok);
        if (it == names.end()) throw ParseError("unknown mnemonic \"" + tok + "\"");
        Instr ins{it->second, 0};
        if (ins.op == Op::jz_a || ins.op == Op::jz_b) {
            if (!(in >> ins.offset)) throw ParseError("jump needs an offset");
        }
        listing.push_back(ins);
    }
    return assemble(listing);
}

/// Execution result of one run.
struct VmState {
    std::size_t pc = 0;
    std::uint64_t reg_a = 0;
    std::uint64_t reg_b = 0;
    std::uint64_t steps_used = 0;
    Trace emissions;
};

struct RunResult {
    VmState state;
    bool halted = false;
};

/// Runs `listing` for at most `fuel` steps. `on_out(step, reg_a)` sees every
/// OUT; steps are numbered from 1.
template <class OnOut>
RunResult run_raw(const std::optional<Listing>& listing, std::uint64_t input_b, std::uint64_t fuel, OnOut&& on_out) {
    RunResult res;
    auto& st = res.state;
    st.reg_b = input_b;
    if (!listing) {
        st.steps_used = fuel;
        return res;
    }
    const auto& code = *listing;
    const std::size_t n = code.size();
    while (st.steps_used < fuel) {
        if (st.pc >= n) {  // dead spin
            st.steps_used = fuel;
            break;
        }
        const Instr ins = code[st.pc];
        const std::uint64_t step = ++st.steps_used;
        switch (ins.op) {
            case Op::inc_a: ++st.reg_a; ++st.pc; break;
            case Op::inc_b: ++st.reg_b; ++st.pc; break;
            case Op::dec_a: st.reg_a -= st.reg_a > 0; ++st.pc; break;
            case Op::dec_b: st.reg_b -= st.reg_b > 0; ++st.pc; break;
            case Op::jz_a:
            case Op::jz_b: {
                const bool zero = (ins.op == Op::jz_a ? st.reg_a : st.reg_b) == 0;
                if (!zero) {
                    ++st.pc;
                    break;
                }
                const auto target = static_cast<std::int64_t>(st.pc) + ins.offset;
                if (target < 0 || target >= static_cast<std::int64_t>(n)) {
                    st.steps_used = fuel;
                    return res;
                }
                st.pc = static_cast<std::size_t>(target);
                break;
            }
            case Op::out: on_out(step, st.reg_a); ++st.pc; break;
            case Op::halt: res.halted = true; return res;
        }
    }
    return res;
}

/// Runs p on (reg_a = 0, reg_b = input_b). An OUT is kept only if its
/// element is >= every kept emission; equal ones do not extend the trace,
/// so the trace is strictly increasing in p.
inline RunResult run_emitting(const Poset& poset, const std::optional<Listing>& listing, std::uint64_t input_b,
                              std::uint64_t fuel) {
    Trace kept;
    auto r = run_raw(listing, input_b, fuel, [&](std::uint64_t step, std::uint64_t a) {
        Element d = poset.unrank(a);
        if (kept.empty() || (!(kept.back().d == d) && poset.leq(kept.back().d, d))) kept.push_back({step, std::move(d)});
    });
    r.state.emissions = std::move(kept);
    return r;
}

inline RunResult run_emitting(const Poset& poset, const Program& p, std::uint64_t input_b, std::uint64_t fuel) {
    return run_emitting(poset, parse_program(p), input_b, fuel);
}

/// phi_n(x, t): the last kept emission of program b_word(n) on input
/// b_index(x) within t steps.
inline Evaluator<BinaryWord> vm_program_evaluator(const Poset& poset, const BinaryWord& code) {
    auto listing = std::make_shared<const std::optional<Listing>>(parse_program(code));
    Evaluator<BinaryWord> e;
    e.sweep = [poset, listing](const BinaryWord& x, std::uint64_t t_max, std::uint64_t fuel,
                               const Evaluator<BinaryWord>::Visit& visit) {
        if (!*listing) {  // nowhere defined
            for (std::uint64_t t = 0; t <= t_max; ++t)
                visit(t, t <= fuel ? Outcome::divergent() : Outcome::pending());
            return;
        }
        const auto run = run_emitting(poset, *listing, b_index(x), std::min(t_max, fuel));
        const auto& em = run.state.emissions;
        const std::uint64_t exact_until = run.halted ? t_max : std::min(t_max, fuel);
        std::size_t next = 0;
        std::optional<Outcome> cur;
        for (std::uint64_t t = 0; t <= t_max; ++t) {
            if (t > exact_until) {
                visit(t, Outcome::pending());
                continue;
            }
            if (next < em.size() && em[next].t <= t) {
                while (next < em.size() && em[next].t <= t) ++next;
                cur = Outcome::of(em[next - 1].d);
            }
            visit(t, cur ? *cur : Outcome::divergent());
        }
    };
    e.eval = [sweep = e.sweep](const BinaryWord& x, std::uint64_t t, std::uint64_t fuel) {
        Outcome last;
        sweep(x, t, fuel, [&](std::uint64_t u, const Outcome& o) {
            if (u == t) last = o;
        });
        return last;
    };
    return e;
}

inline Evaluator<BinaryWord> vm_max_evaluator(const Poset& poset, std::uint64_t n) {
    return vm_program_evaluator(poset, b_word(n));
}

/// Replaces every HALT by OUT; HALT, adjusting jump offsets. Empty if an
/// offset no longer fits in 5 bits.
inline std::optional<Listing> wrap_emit_on_halt(const Listing& listing) {
    std::vector<std::int64_t> new_index(listing.size() + 1);
    std::int64_t pos = 0;
    for (std::size_t i = 0; i < listing.size(); ++i) {
        if (listing[i].op == Op::halt) ++pos;  // the inserted OUT takes the old slot
        new_index[i] = listing[i].op == Op::halt ? pos - 1 : pos;
        ++pos;
    }
    new_index[listing.size()] = pos;
    Listing out;
    for (std::size_t i = 0; i < listing.size(); ++i) {
        Instr ins = listing[i];
        if (ins.op == Op::halt) {
            out.push_back({Op::out, 0});
            out.push_back(ins);
            continue;
        }
        if (ins.op == Op::jz_a || ins.op == Op::jz_b) {
            const auto target = static_cast<std::int64_t>(i) + ins.offset;
            if (target >= 0 && target <= static_cast<std::int64_t>(listing.size())) {
                // jump targets that are HALTs land on the inserted OUT
                const auto off = new_index[static_cast<std::size_t>(target)] - new_index[i];
                if (off < -16 || off > 15) return std::nullopt;
                ins.offset = static_cast<int>(off);
            } else if (target < 0) {
                // must stay before the start although this jump moved right
                const auto off = std::max<std::int64_t>(-16, ins.offset - (new_index[i] - static_cast<std::int64_t>(i)));
                if (new_index[i] + off >= 0) return std::nullopt;
                ins.offset = static_cast<int>(off);
            } else {
                // still outside the program after the shift
                const auto off = ins.offset + (pos - static_cast<std::int64_t>(listing.size()));
                if (off < -16 || off > 15) return std::nullopt;
                ins.offset = static_cast<int>(off);
            }
        }
        out.push_back(ins);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Busy beaver

struct TmTransition {
    std::uint8_t write = 0;
    std::int8_t move = 1;  // -1 left, +1 right
    std::int16_t next = -1;  // -1 halts
    friend bool operator==(const TmTransition&, const TmTransition&) = default;
};

/// States 0..states-1 (0 = start) over tape symbols {0 = blank, 1}.
struct TmSpec {
    std::size_t states = 1;
    std::vector<TmTransition> table;  // index 2*state + symbol

    const TmTransition& at(std::size_t q, std::uint8_t s) const { return table[2 * q + s]; }
};

inline TmSpec tm_from_json(const nlohmann::json& j) {
    try {
        TmSpec tm;
        tm.states = j.at("states").get<std::size_t>();
        if (tm.states == 0) throw ParseError("TM needs at least one state");
        tm.table.assign(2 * tm.states, TmTransition{});
        std::vector<bool> seen(2 * tm.states, false);
        for (const auto& [key, val] : j.at("table").items()) {
            const auto comma = key.find(',');
            if (comma == std::string::npos) throw ParseError("TM table key must be \"q,s\"");
            const auto q = std::stoul(key.substr(0, comma));
            const auto s = std::stoul(key.substr(comma + 1));
            if (q >= tm.states || s > 1) throw ParseError("TM table key out of range: " + key);
            TmTransition tr;
            tr.write = static_cast<std::uint8_t>(val.at(0).get<int>());
            if (tr.write > 1) throw ParseError("TM write symbol must be 0 or 1");
            const auto& mv = val.at(1);
            if (mv.is_string())
                tr.move = mv.get<std::string>() == "L" ? -1 : (mv.get<std::string>() == "R" ? 1 : 0);
            else
                tr.move = static_cast<std::int8_t>(mv.get<int>());
            if (tr.move != -1 && tr.move != 1) throw ParseError("TM move must be L or R");
            const auto& nx = val.at(2);
            if (nx.is_string()) {
                if (nx.get<std::string>() != "H") throw ParseError("TM next state must be an index or \"H\"");
                tr.next = -1;
            } else {
                const auto nq = nx.get<std::size_t>();
                if (nq >= tm.states) throw ParseError("TM next state out of range");
                tr.next = static_cast<std::int16_t>(nq);
            }
            tm.table[2 * q + s] = tr;
            seen[2 * q + s] = true;
        }
        if (std::find(seen.begin(), seen.end(), false) != seen.end()) throw ParseError("TM table is not total");
        return tm;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("TM JSON: ") + e.what());
    } catch (const std::logic_error& e) {
        throw ParseError(std::string("TM JSON: ") + e.what());
    }
}

struct TmRun {
    bool halted = false;
    std::uint64_t steps = 0;          // transitions executed, the halting one included
    std::uint64_t cells_visited = 0;  // distinct head positions, initial and final included
};

/// Runs from a blank tape for at most max_steps transitions.
inline TmRun run_tm(const TmSpec& tm, std::uint64_t max_steps) {
    const std::size_t width = 2 * max_steps + 3;
    std::vector<std::uint8_t> tape(width, 0), visited(width, 0);
    std::size_t head = max_steps + 1;
    std::size_t q = 0;
    TmRun r;
    visited[head] = 1;
    r.cells_visited = 1;
    while (r.steps < max_steps) {
        const auto& tr = tm.at(q, tape[head]);
        tape[head] = tr.write;
        head = static_cast<std::size_t>(static_cast<std::int64_t>(head) + tr.move);
        ++r.steps;
        if (!visited[head]) {
            visited[head] = 1;
            ++r.cells_visited;
        }
        if (tr.next < 0) {
            r.halted = true;
            return r;
        }
        q = static_cast<std::size_t>(tr.next);
    }
    return r;
}

inline constexpr std::uint64_t kBusyBeaverMaxN = 2;

/// bb(n, t) for t = 0..t_max: max of 0 and the cells visited by machines
/// with n+1 states that halt within t steps from a blank tape. Machines
/// with fewer states are covered through unreachable states.
inline std::vector<std::uint64_t> busy_beaver_series(std::uint64_t n, std::uint64_t t_max) {
    if (n > kBusyBeaverMaxN)
        throw ResourceError("busy_beaver: n = " + std::to_string(n) + " exceeds the enumeration bound " +
                            std::to_string(kBusyBeaverMaxN));
    const std::size_t states = n + 1;
    const std::size_t slots = 2 * states;
    const std::size_t choices = 2 * 2 * (states + 1);  // write x move x next
    std::vector<std::uint64_t> best_at(t_max + 1, 0);  // best halting exactly at step t
    TmSpec tm;
    tm.states = states;
    tm.table.assign(slots, TmTransition{});
    std::vector<std::size_t> digit(slots, 0);
    auto decode = [&](std::size_t slot) {
        const std::size_t c = digit[slot];
        auto& tr = tm.table[slot];
        tr.write = static_cast<std::uint8_t>(c % 2);
        tr.move = (c / 2) % 2 ? 1 : -1;
        const auto nx = static_cast<std::int16_t>(c / 4);
        tr.next = nx == static_cast<std::int16_t>(states) ? -1 : nx;
    };
    for (std::size_t s = 0; s < slots; ++s) decode(s);
    while (true) {
        const bool can_halt =
            std::any_of(tm.table.begin(), tm.table.end(), [](const TmTransition& tr) { return tr.next < 0; });
        if (can_halt) {
            const auto r = run_tm(tm, t_max);
            if (r.halted) best_at[r.steps] = std::max(best_at[r.steps], r.cells_visited);
        }
        std::size_t s = 0;
        while (s < slots && ++digit[s] == choices) {
            digit[s] = 0;
            decode(s);
            ++s;
        }
        if (s == slots) break;
        decode(s);
    }
    std::vector<std::uint64_t> out(t_max + 1, 0);
    std::uint64_t acc = 0;
    for (std::uint64_t t = 0; t <= t_max; ++t) out[t] = acc = std::max(acc, best_at[t]);
    return out;
}

inline std::uint64_t busy_beaver_bb(std::uint64_t n, std::uint64_t t) { return busy_beaver_series(n, t)[t]; }

// ---------------------------------------------------------------------------
// Cardinality of enumerated sets

/// Values emitted (unfiltered) by program b_word(n) on input 0 within t steps,
/// as (step, value) in emission order.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> emission_log(const BinaryWord& code, std::uint64_t fuel) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> log;
    run_raw(parse_program(code), 0, fuel, [&](std::uint64_t step, std::uint64_t a) { log.emplace_back(step, a); });
    return log;
}

/// h(n, t) for t = 0..t_max: the number of distinct values W_n has shown
/// after t steps.
inline std::vector<std::uint64_t> card_re_series(std::uint64_t n, std::uint64_t t_max) {
    const auto log = emission_log(b_word(n), t_max);
    std::vector<std::uint64_t> out(t_max + 1, 0);
    std::set<std::uint64_t> seen;
    std::size_t next = 0;
    for (std::uint64_t t = 0; t <= t_max; ++t) {
        while (next < log.size() && log[next].first <= t) seen.insert(log[next++].second);
        out[t] = seen.size();
    }
    return out;
}

inline std::uint64_t card_re(std::uint64_t n, std::uint64_t t) { return card_re_series(n, t)[t]; }

/// h as a process over N (input = program index n), for budgeted limits in nat.
inline Evaluator<std::uint64_t> card_re_evaluator() {
    Evaluator<std::uint64_t> e;
    e.sweep = [](const std::uint64_t& n, std::uint64_t t_max, std::uint64_t fuel,
                 const Evaluator<std::uint64_t>::Visit& visit) {
        const auto h = card_re_series(n, std::min(t_max, fuel));
        for (std::uint64_t t = 0; t <= t_max; ++t)
            visit(t, t < h.size() ? Outcome::of(integer(static_cast<std::int64_t>(h[t]))) : Outcome::pending());
    };
    e.eval = [](const std::uint64_t& n, std::uint64_t t, std::uint64_t fuel) {
        if (t > fuel) return Outcome::pending();
        return Outcome::of(integer(static_cast<std::int64_t>(card_re(n, t))));
    };
    return e;
}

// ---------------------------------------------------------------------------
// Finite sets interacting with an enumerated set A

enum class SetMode { cap, minus, setminus };

/// f(X,t) = X ∩ A_t, g(X,t) = X - A_t = {x - y : x >= y}, h(X,t) = X \ A_t where
/// A_t is the set of values emitted by `enumerator` (input 0) within t steps.
/// cap and minus increase in finsets; setminus decreases (use rev(finsets)).
inline Evaluator<Element> set_interaction_evaluator(const BinaryWord& enumerator, SetMode mode) {
    auto listing = std::make_shared<const std::optional<Listing>>(parse_program(enumerator));
    Evaluator<Element> e;
    e.eval = [listing, mode](const Element& x, std::uint64_t t, std::uint64_t fuel) {
        if (t > fuel) return Outcome::pending();
        const auto* xs = std::get_if<FinSet>(&x);
        if (!xs) throw DomainError("set interaction: input must be a finite set");
        std::set<std::uint64_t> a;
        run_raw(*listing, 0, t, [&](std::uint64_t, std::uint64_t v) { a.insert(v); });
        std::vector<std::uint64_t> out;
        for (auto v : xs->items) {
            switch (mode) {
                case SetMode::cap:
                    if (a.count(v)) out.push_back(v);
                    break;
                case SetMode::setminus:
                    if (!a.count(v)) out.push_back(v);
                    break;
                case SetMode::minus:
                    for (auto y : a)
                        if (v >= y) out.push_back(v - y);
                    break;
            }
        }
        return Outcome::of(FinSet::of(std::move(out)));
    };
    return e;
}

inline Evaluator<Element> set_interaction_evaluator(std::uint64_t enumerator_index, SetMode mode) {
    return set_interaction_evaluator(b_word(enumerator_index), mode);
}

}  // namespace kposet
