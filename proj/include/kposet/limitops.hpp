#pragma once

// Approximation processes f(x, t) and the budgeted limit operators built on
// them, together with the trace-level constructions that turn one kind of
// process into another (normalization, totalization, prefix normal form,
// monotone filtering, splitting, restriction, common-value dovetailing).
//
// A process is an Evaluator: a deterministic procedure (x, t, fuel) ->
// value | pending | divergent. "pending" means the computation of f(x,t)
// did not finish within `fuel`; "divergent" means f(x,t) is known to be
// undefined. A value obtained at some fuel is obtained at every larger fuel.
//
// min-limits are never computed separately: pass poset.reversed().

#include <algorithm>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "kposet/error.hpp"
#include "kposet/poset.hpp"

namespace kposet {

enum class Status { value, pending, divergent };

struct Outcome {
    Status status = Status::divergent;
    std::optional<Element> value;

    static Outcome of(Element d) { return {Status::value, std::move(d)}; }
    static Outcome pending() { return {Status::pending, std::nullopt}; }
    static Outcome divergent() { return {Status::divergent, std::nullopt}; }

    bool defined() const noexcept { return status == Status::value; }
};

template <class X>
struct Evaluator {
    using Eval = std::function<Outcome(const X&, std::uint64_t t, std::uint64_t fuel)>;
    using Visit = std::function<void(std::uint64_t t, const Outcome&)>;
    using Sweep = std::function<void(const X&, std::uint64_t t_max, std::uint64_t fuel, const Visit&)>;

    Eval eval;
    /// Optional fast path visiting t = 0..t_max in order; must agree with eval.
    Sweep sweep;
    std::function<bool(const X&)> domain_hint;

    Outcome operator()(const X& x, std::uint64_t t, std::uint64_t fuel) const { return eval(x, t, fuel); }

    void scan(const X& x, std::uint64_t t_max, std::uint64_t fuel, const Visit& visit) const {
        if (sweep) {
            sweep(x, t_max, fuel, visit);
            return;
        }
        for (std::uint64_t t = 0; t <= t_max; ++t) visit(t, eval(x, t, fuel));
    }
};

struct TracePoint {
    std::uint64_t t = 0;
    Element d;
    friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

/// Defined points of t -> f(x,t), strictly increasing in t.
using Trace = std::vector<TracePoint>;

template <class X>
Trace materialize(const Evaluator<X>& e, const X& x, std::uint64_t t_max, std::uint64_t fuel) {
    Trace out;
    e.scan(x, t_max, fuel, [&](std::uint64_t t, const Outcome& o) {
        if (o.defined()) out.push_back({t, *o.value});
    });
    return out;
}

/// Evaluator replaying a fixed trace for every input; each point needs
/// `cost` fuel, other t are undefined.
template <class X>
Evaluator<X> trace_evaluator(Trace trace, std::uint64_t cost = 0) {
    auto pts = std::make_shared<const Trace>(std::move(trace));
    Evaluator<X> e;
    e.eval = [pts, cost](const X&, std::uint64_t t, std::uint64_t fuel) {
        auto it = std::lower_bound(pts->begin(), pts->end(), t,
                                   [](const TracePoint& p, std::uint64_t v) { return p.t < v; });
        if (it == pts->end() || it->t != t) return Outcome::divergent();
        if (fuel < cost) return Outcome::pending();
        return Outcome::of(it->d);
    };
    return e;
}

/// `t,rank(d)` per line.
inline void write_trace_csv(const Poset& p, const Trace& trace, std::ostream& out) {
    for (const auto& pt : trace) out << pt.t << ',' << p.rank(pt.d) << '\n';
}

inline Trace read_trace_csv(const Poset& p, std::istream& in) {
    Trace out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw ParseError("trace CSV: expected t,rank in \"" + line + "\"");
        try {
            const auto t = std::stoull(line.substr(0, comma));
            const auto r = std::stoull(line.substr(comma + 1));
            if (!out.empty() && out.back().t >= t) throw ParseError("trace CSV: t must strictly increase");
            out.push_back({t, p.unrank(r)});
        } catch (const std::logic_error&) {
            throw ParseError("trace CSV: bad line \"" + line + "\"");
        }
    }
    return out;
}

/// `{"points":[[t,rank],...],"cost":fuel_per_point}`
template <class X>
Evaluator<X> synthetic_evaluator_from_json(const Poset& p, const nlohmann::json& j) {
    try {
        Trace trace;
        for (const auto& pt : j.at("points")) {
            const auto t = pt.at(0).get<std::uint64_t>();
            if (!trace.empty() && trace.back().t >= t) throw ParseError("synthetic evaluator: t must strictly increase");
            trace.push_back({t, p.unrank(pt.at(1).get<Rank>())});
        }
        return trace_evaluator<X>(std::move(trace), j.value("cost", std::uint64_t{0}));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("synthetic evaluator JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Budgeted limits

enum class LimitStatus { stabilized, still_changing, no_value };

inline const char* to_string(LimitStatus s) {
    switch (s) {
        case LimitStatus::stabilized: return "stabilized-within-budget";
        case LimitStatus::still_changing: return "still-changing";
        case LimitStatus::no_value: return "no-value";
    }
    return "?";
}

/// Never a convergence claim: only "the value did not change during the
/// last `window` defined points".
struct LimitReport {
    std::optional<Element> current;
    std::uint64_t last_change_t = 0;
    /// defined points seen after last_change_t
    std::uint64_t stable_for = 0;
    LimitStatus status = LimitStatus::no_value;
};

namespace limit_detail {

[[noreturn]] inline void violation(const Poset& p, const Element& before, const Element& after, std::uint64_t t) {
    const auto a = p.format(before), b = p.format(after);
    throw MonotonicityViolation(a, b,
                                "process not monotone in " + p.spec() + " at t=" + std::to_string(t) + ": \"" + a +
                                    "\" then \"" + b + "\"");
}

/// Accumulates the greatest element of a growing chain.
class ChainMax {
public:
    explicit ChainMax(const Poset& p) : p_(p) {}

    // true iff the current value changed
    bool push(const Element& v, std::uint64_t t) {
        if (!cur_) {
            cur_ = v;
            return true;
        }
        if (*cur_ == v) return false;
        if (p_.leq(*cur_, v)) {
            cur_ = v;
            return true;
        }
        if (!p_.leq(v, *cur_)) violation(p_, *cur_, v, t);
        return false;
    }

    const std::optional<Element>& current() const noexcept { return cur_; }

private:
    const Poset& p_;
    std::optional<Element> cur_;
};

}  // namespace limit_detail

/// Evaluates e(x, t, fuel) for t = 0..t_budget. Defined values must form an
/// increasing sequence in p.
template <class X>
LimitReport budgeted_limit(const Poset& p, const Evaluator<X>& e, const X& x, std::uint64_t t_budget,
                           std::uint64_t fuel, std::uint64_t window) {
    if (window == 0) throw ArgumentError("budgeted_limit: window must be >= 1");
    LimitReport rep;
    e.scan(x, t_budget, fuel, [&](std::uint64_t t, const Outcome& o) {
        if (!o.defined()) return;
        const Element& v = *o.value;
        if (!rep.current) {
            rep.current = v;
            rep.last_change_t = t;
            return;
        }
        if (*rep.current == v) {
            ++rep.stable_for;
            return;
        }
        if (!p.leq(*rep.current, v)) limit_detail::violation(p, *rep.current, v, t);
        rep.current = v;
        rep.last_change_t = t;
        rep.stable_for = 0;
    });
    if (!rep.current)
        rep.status = LimitStatus::no_value;
    else
        rep.status = rep.stable_for >= window ? LimitStatus::stabilized : LimitStatus::still_changing;
    return rep;
}

/// Budgeted limit of an explicit trace, budget = its last time point.
inline LimitReport trace_limit(const Poset& p, const Trace& trace, std::uint64_t window) {
    const std::uint64_t t_max = trace.empty() ? 0 : trace.back().t;
    return budgeted_limit(p, trace_evaluator<int>(trace), 0, t_max, 0, window);
}

// ---------------------------------------------------------------------------
// Monotone filtering of an enumerated graph

template <class X>
struct GraphTuple {
    std::uint64_t n = 0;
    X x{};
    std::uint64_t t = 0;
    Element d;
};

/// Keeps tuple i iff it is consistent, in both time directions, with every
/// previously kept tuple of the same (n, x).
template <class X>
std::vector<GraphTuple<X>> monotone_filter(const Poset& p, const std::vector<GraphTuple<X>>& stream) {
    std::vector<GraphTuple<X>> kept;
    for (const auto& cand : stream) {
        bool ok = true;
        for (const auto& k : kept) {
            if (k.n != cand.n || !(k.x == cand.x)) continue;
            if (k.t < cand.t && !p.leq(k.d, cand.d)) ok = false;
            if (k.t > cand.t && !p.leq(cand.d, k.d)) ok = false;
            if (!ok) break;
        }
        if (ok) kept.push_back(cand);
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Normalization to a rectangular domain

/// First value met when dovetailing (u, steps) pairs diagonally: by
/// increasing u + steps, then by u. Searches diagonals up to `fuel`.
template <class X>
std::optional<Element> first_dovetailed_value(const Evaluator<X>& e, const X& x, std::uint64_t fuel) {
    for (std::uint64_t s = 0; s <= fuel; ++s)
        for (std::uint64_t u = 0; u <= s; ++u) {
            auto o = e(x, u, s - u);
            if (o.defined()) return *o.value;
        }
    return std::nullopt;
}

/// f(x,t) = greatest of {theta(x)} ∪ {e(x,u) : u <= t, converging in <= t steps}
/// where theta(x) is the first dovetailed value of e at x. Defined at no t
/// or at every t, except that theta may stay pending for small fuel.
template <class X>
Evaluator<X> normalize(const Poset& p, Evaluator<X> e) {
    auto src = std::make_shared<const Evaluator<X>>(std::move(e));
    auto value_at = [p, src](const X& x, std::uint64_t t, const Element& theta) {
        limit_detail::ChainMax acc(p);
        acc.push(theta, t);
        for (std::uint64_t u = 0; u <= t; ++u) {
            auto o = (*src)(x, u, t);
            if (o.defined()) acc.push(*o.value, u);
        }
        return *acc.current();
    };
    Evaluator<X> out;
    out.eval = [src, value_at](const X& x, std::uint64_t t, std::uint64_t fuel) {
        auto theta = first_dovetailed_value(*src, x, fuel);
        if (!theta) return Outcome::pending();
        return Outcome::of(value_at(x, t, *theta));
    };
    out.sweep = [src, value_at](const X& x, std::uint64_t t_max, std::uint64_t fuel,
                                const typename Evaluator<X>::Visit& visit) {
        auto theta = first_dovetailed_value(*src, x, fuel);
        for (std::uint64_t t = 0; t <= t_max; ++t)
            visit(t, theta ? Outcome::of(value_at(x, t, *theta)) : Outcome::pending());
    };
    return out;
}

/// Total process: greatest of {bottom} ∪ {e(x,u) : u <= t, converging in <= t
/// steps}. Every value of e must lie above `bottom`.
template <class X>
Evaluator<X> totalize(const Poset& p, Evaluator<X> e, Element bottom) {
    auto src = std::make_shared<const Evaluator<X>>(std::move(e));
    auto value_at = [p, src, bottom](const X& x, std::uint64_t t) {
        limit_detail::ChainMax acc(p);
        acc.push(bottom, 0);
        for (std::uint64_t u = 0; u <= t; ++u) {
            auto o = (*src)(x, u, t);
            if (!o.defined()) continue;
            if (!p.leq(bottom, *o.value))
                throw ArgumentError("totalize: value \"" + p.format(*o.value) + "\" is not above bottom \"" +
                                    p.format(bottom) + "\"");
            acc.push(*o.value, u);
        }
        return *acc.current();
    };
    Evaluator<X> out;
    out.eval = [value_at](const X& x, std::uint64_t t, std::uint64_t) { return Outcome::of(value_at(x, t)); };
    return out;
}

/// Prefix normal form of a total prefix-monotone word process: the output
/// starts empty and grows by at most one symbol per step towards f(s,t).
template <class X>
Evaluator<X> prefix_normal_form(Evaluator<X> f) {
    auto src = std::make_shared<const Evaluator<X>>(std::move(f));
    // Calls visit(t, value) for t = 0..t_max; false if f was pending.
    auto run = [src](const X& s, std::uint64_t t_max, std::uint64_t fuel, auto&& visit) {
        std::string cur;
        std::optional<std::string> prev;
        for (std::uint64_t t = 0; t <= t_max; ++t) {
            auto o = (*src)(s, t, fuel);
            if (o.status == Status::pending) return false;
            if (!o.defined()) throw ArgumentError("prefix_normal_form: source undefined at t=" + std::to_string(t));
            const auto* v = std::get_if<std::string>(&*o.value);
            if (!v) throw DomainError("prefix_normal_form: source must produce words");
            if (prev && v->compare(0, prev->size(), *prev) != 0)
                throw MonotonicityViolation(*prev, *v, "prefix_normal_form: \"" + *prev + "\" is not a prefix of \"" + *v +
                                                           "\" (t=" + std::to_string(t) + ")");
            if (t > 0) cur = v->substr(0, std::min(cur.size() + 1, v->size()));
            prev = *v;
            visit(t, cur);
        }
        return true;
    };
    Evaluator<X> out;
    out.eval = [run](const X& s, std::uint64_t t, std::uint64_t fuel) {
        std::string last;
        if (!run(s, t, fuel, [&](std::uint64_t, const std::string& v) { last = v; })) return Outcome::pending();
        return Outcome::of(word(last));
    };
    out.sweep = [run](const X& s, std::uint64_t t_max, std::uint64_t fuel, const typename Evaluator<X>::Visit& visit) {
        std::uint64_t done = 0;
        bool all = run(s, t_max, fuel, [&](std::uint64_t t, const std::string& v) {
            visit(t, Outcome::of(word(v)));
            done = t + 1;
        });
        if (!all)
            for (std::uint64_t t = done; t <= t_max; ++t) visit(t, Outcome::pending());
    };
    return out;
}

// ---------------------------------------------------------------------------
// Splitting a bounded-height trace into single values

/// i-th distinct value in order of first appearance.
inline std::vector<Element> split_by_distinct(const Trace& tr, std::size_t k) {
    std::vector<Element> out;
    for (const auto& pt : tr)
        if (std::find(out.begin(), out.end(), pt.d) == out.end()) {
            if (out.size() == k)
                throw ResourceError("split_by_distinct: more than " + std::to_string(k) + " distinct values");
            out.push_back(pt.d);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Restriction of a partial function to an (exists R) ∧ (forall S) set

/// Memoized strict successor gamma(d) > d, found by scanning ranks.
class SuccessorCache {
public:
    SuccessorCache(Poset p, std::uint64_t bound) : p_(std::move(p)), bound_(bound) {}

    Element next(const Element& d) {
        const Rank r = p_.rank(d);
        {
            std::lock_guard lock(mu_);
            if (auto it = memo_.find(r); it != memo_.end()) return it->second;
        }
        auto up = first_strictly_above(p_, d, bound_);
        if (!up)
            throw ArgumentError("no element above \"" + p_.format(d) + "\" within rank bound " + std::to_string(bound_));
        std::lock_guard lock(mu_);
        return memo_.emplace(r, *up).first->second;
    }

    Element iterate(Element d, std::uint64_t times) {
        for (std::uint64_t i = 0; i < times; ++i) d = next(d);
        return d;
    }

private:
    Poset p_;
    std::uint64_t bound_;
    std::mutex mu_;
    std::map<Rank, Element> memo_;
};

template <class X>
using TimedPredicate = std::function<bool(const X&, std::uint64_t t)>;

/// The process whose max-limit is F restricted to {x : ∃t R(x,t) ∧ ∀t S(x,t)}:
///   F(x)            if F(x) converged in <= t steps, ∃t'<=t R, ∀t'<=t S
///   gamma^(t)(F(x)) if F(x) converged in <= t steps and ∃t'<=t ¬S
///   undefined       otherwise
/// F is t-independent: its value is read from F(x, 0, steps).
template <class X>
Evaluator<X> restrict_to_mixed_set(const Poset& p, Evaluator<X> f, TimedPredicate<X> r, TimedPredicate<X> s,
                                   std::uint64_t successor_bound = 4096) {
    auto src = std::make_shared<const Evaluator<X>>(std::move(f));
    auto gamma = std::make_shared<SuccessorCache>(p, successor_bound);
    Evaluator<X> out;
    out.eval = [src, gamma, r = std::move(r), s = std::move(s)](const X& x, std::uint64_t t, std::uint64_t fuel) {
        auto v = (*src)(x, 0, std::min(t, fuel));
        if (!v.defined()) return (v.status == Status::pending && fuel < t) ? Outcome::pending() : Outcome::divergent();
        bool seen_r = false;
        for (std::uint64_t u = 0; u <= t; ++u) {
            if (!s(x, u)) return Outcome::of(gamma->iterate(*v.value, t));
            seen_r = seen_r || r(x, u);
        }
        if (seen_r) return Outcome::of(*v.value);
        return Outcome::divergent();
    };
    return out;
}

// ---------------------------------------------------------------------------
// Common value of an increasing and a decreasing process

/// Dovetails f(p, t') (increasing in `poset`) against g(q, t'') (decreasing
/// in `poset`) over t', t'' <= budget with fuel = budget, in diagonal order
/// (t' + t'', then t'), and returns the first common value.
template <class X>
std::optional<Element> common_value_dovetail(const Poset& poset, const Evaluator<X>& f, const Evaluator<X>& g,
                                             const X& p, const X& q, std::uint64_t budget) {
    (void)poset;
    // first time each value appears
    auto firsts = [&](const Evaluator<X>& e, const X& x) {
        std::vector<std::pair<Element, std::uint64_t>> out;
        e.scan(x, budget, budget, [&](std::uint64_t t, const Outcome& o) {
            if (!o.defined()) return;
            if (std::none_of(out.begin(), out.end(), [&](const auto& fv) { return fv.first == *o.value; }))
                out.emplace_back(*o.value, t);
        });
        return out;
    };
    const auto fs = firsts(f, p);
    const auto gs = firsts(g, q);
    std::optional<std::pair<std::uint64_t, std::uint64_t>> best;
    std::optional<Element> found;
    for (const auto& [v, tf] : fs)
        for (const auto& [w, tg] : gs)
            if (v == w) {
                const std::pair key{tf + tg, tf};
                if (!best || key < *best) {
                    best = key;
                    found = v;
                }
            }
    return found;
}

}  // namespace kposet
