#pragma once

// Budgeted complexity estimates on a computable poset, relative to RankVM:
//   k_plain(d): shortest program halting with reg_a = rank(d),
//   k_max(d):   shortest code q = 0^n 1 p whose budgeted max-limit U(q) is d,
//   k_min(d):   the same over the reversed order.
// All values are upper bounds for this machine and budget.
//
// Also: the paired decompressor phi(c(p,q)), the diagonal construction of
// elements that are hard for every short weak-order program, and the
// two-call oracle protocol for the graph of a limit function.

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "kposet/analysis.hpp"
#include "kposet/codec.hpp"
#include "kposet/error.hpp"
#include "kposet/limitops.hpp"
#include "kposet/poset.hpp"
#include "kposet/rankvm.hpp"

namespace kposet {

struct Budget {
    std::uint64_t max_prog_len = 14;
    std::uint64_t fuel = 4096;
    std::uint64_t t_budget = 4096;
    std::uint64_t window = 1024;

    void check() const {
        if (max_prog_len == 0 || fuel == 0 || t_budget == 0 || window == 0)
            throw ArgumentError("budget fields must be positive");
        if (window > t_budget) throw ArgumentError("window must not exceed t_budget");
        if (max_prog_len > 30) throw ResourceError("max_prog_len above 30 bits is beyond desk scale");
    }
};

struct Estimate {
    std::uint64_t length = 0;
    BinaryWord witness;
};

/// Shorter wins, then shortlex on the witness.
inline bool better(const Estimate& a, const Estimate& b) {
    if (a.length != b.length) return a.length < b.length;
    return shortlex_less(a.witness, b.witness);
}

inline void keep_better(std::optional<Estimate>& slot, const Estimate& cand) {
    if (!slot || better(cand, *slot)) slot = cand;
}

enum class Semantics { plain, max, min };

inline const char* to_string(Semantics s) {
    switch (s) {
        case Semantics::plain: return "plain";
        case Semantics::max: return "max";
        case Semantics::min: return "min";
    }
    return "?";
}

/// A code whose budgeted limit did not stabilize.
struct CensoredRun {
    BinaryWord code;
    Rank current = 0;
};

struct ComplexityTable {
    Semantics semantics = Semantics::plain;
    std::string poset;  // spec of the order the limits were taken in
    Budget budget;
    std::vector<std::optional<Estimate>> rows;  // indexed by rank
    std::vector<CensoredRun> censored;
};

// ---------------------------------------------------------------------------
// The machine U

/// U(q) as a process over codes q: q = 0^n 1 p runs program b_word(n) on
/// input b_index(p); other codes are nowhere defined.
inline Evaluator<BinaryWord> u_evaluator(const Poset& poset) {
    Evaluator<BinaryWord> e;
    e.sweep = [poset](const BinaryWord& q, std::uint64_t t_max, std::uint64_t fuel,
                      const Evaluator<BinaryWord>::Visit& visit) {
        const auto np = decode_padded(q);
        if (!np) {
            for (std::uint64_t t = 0; t <= t_max; ++t) visit(t, Outcome::divergent());
            return;
        }
        vm_program_evaluator(poset, b_word(np->first)).scan(np->second, t_max, fuel, visit);
    };
    e.eval = [sweep = e.sweep](const BinaryWord& q, std::uint64_t t, std::uint64_t fuel) {
        Outcome last;
        sweep(q, t, fuel, [&](std::uint64_t u, const Outcome& o) {
            if (u == t) last = o;
        });
        return last;
    };
    return e;
}

inline LimitReport u_limit(const Poset& poset, const BinaryWord& q, const Budget& b) {
    return budgeted_limit(poset, u_evaluator(poset), q, b.t_budget, b.fuel, b.window);
}

/// phi(p) for plain complexity: reg_a at HALT within fuel, no input.
inline std::optional<Rank> plain_output(const BinaryWord& p, std::uint64_t fuel) {
    const auto r = run_raw(parse_program(p), 0, fuel, [](std::uint64_t, std::uint64_t) {});
    if (!r.halted) return std::nullopt;
    return r.state.reg_a;
}

namespace complexity_detail {

inline std::uint64_t worker_count(std::uint64_t threads) {
    if (threads == 0) threads = std::max(1U, std::thread::hardware_concurrency());
    return threads;
}

/// Runs body(code, local_table) over all words of length <= max_len split
/// across workers, then merges per-rank minima and censored runs. The
/// result does not depend on the worker count.
template <class Body>
ComplexityTable enumerate(Semantics sem, const Poset& poset, std::uint64_t ranks, const Budget& b,
                          std::uint64_t threads, Body body) {
    b.check();
    const std::uint64_t total = (std::uint64_t{1} << (b.max_prog_len + 1)) - 1;
    const std::uint64_t workers = std::min<std::uint64_t>(worker_count(threads), total);
    std::vector<ComplexityTable> parts(workers);
    for (auto& part : parts) part.rows.assign(ranks, std::nullopt);
    std::vector<std::exception_ptr> errors(workers);
    auto job = [&](std::uint64_t w) {
        try {
            const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
            for (std::uint64_t i = lo; i < hi; ++i) body(b_word(i), parts[w]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        job(0);
    } else {
        std::vector<std::thread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(job, w);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    ComplexityTable out;
    out.semantics = sem;
    out.poset = poset.spec();
    out.budget = b;
    out.rows.assign(ranks, std::nullopt);
    for (auto& part : parts) {
        for (std::uint64_t r = 0; r < ranks; ++r)
            if (part.rows[r]) keep_better(out.rows[r], *part.rows[r]);
        for (auto& c : part.censored) out.censored.push_back(std::move(c));
    }
    std::sort(out.censored.begin(), out.censored.end(),
              [](const CensoredRun& a, const CensoredRun& b) { return shortlex_less(a.code, b.code); });
    return out;
}

}  // namespace complexity_detail

/// The poset only fixes how ranks are displayed: plain outputs are ranks.
inline ComplexityTable k_plain_table(const Poset& poset, std::uint64_t ranks, const Budget& b,
                                     std::uint64_t threads = 1) {
    return complexity_detail::enumerate(Semantics::plain, poset, ranks, b, threads,
                                        [&](const BinaryWord& p, ComplexityTable& t) {
                                            const auto out = plain_output(p, b.fuel);
                                            if (out && *out < ranks) keep_better(t.rows[*out], {p.size(), p});
                                        });
}

namespace complexity_detail {

inline ComplexityTable limit_table(Semantics sem, const Poset& order, std::uint64_t ranks, const Budget& b,
                                   std::uint64_t threads) {
    const auto u = u_evaluator(order);
    return enumerate(sem, order, ranks, b, threads, [&](const BinaryWord& q, ComplexityTable& t) {
        const auto np = decode_padded(q);
        if (!np) return;
        const auto listing = parse_program(b_word(np->first));
        if (!listing || listing->empty()) return;  // nowhere defined
        const auto rep = budgeted_limit(order, u, q, b.t_budget, b.fuel, b.window);
        if (rep.status == LimitStatus::no_value) return;
        const Rank r = order.rank(*rep.current);
        if (rep.status == LimitStatus::still_changing) {
            t.censored.push_back({q, r});
            return;
        }
        if (r < ranks) keep_better(t.rows[r], {q.size(), q});
    });
}

}  // namespace complexity_detail

inline ComplexityTable k_max_table(const Poset& poset, std::uint64_t ranks, const Budget& b,
                                   std::uint64_t threads = 1) {
    return complexity_detail::limit_table(Semantics::max, poset, ranks, b, threads);
}

inline ComplexityTable k_min_table(const Poset& poset, std::uint64_t ranks, const Budget& b,
                                   std::uint64_t threads = 1) {
    return complexity_detail::limit_table(Semantics::min, poset.reversed(), ranks, b, threads);
}

/// Re-runs every witness; returns one message per mismatch.
inline std::vector<std::string> audit_table(const Poset& poset, const ComplexityTable& t) {
    std::vector<std::string> bad;
    const Poset order = t.semantics == Semantics::min ? poset.reversed() : poset;
    for (Rank r = 0; r < t.rows.size(); ++r) {
        const auto& e = t.rows[r];
        if (!e) continue;
        const std::string who = std::string(to_string(t.semantics)) + " rank " + std::to_string(r) + ": ";
        if (e->length != e->witness.size()) bad.push_back(who + "length does not match witness");
        if (t.semantics == Semantics::plain) {
            const auto out = plain_output(e->witness, t.budget.fuel);
            if (!out || *out != r) bad.push_back(who + "witness " + e->witness.str() + " does not output it");
            continue;
        }
        const auto rep = u_limit(order, e->witness, t.budget);
        if (rep.status != LimitStatus::stabilized || order.rank(*rep.current) != r)
            bad.push_back(who + "witness " + e->witness.str() + " does not stabilize on it");
    }
    return bad;
}

/// |{d : k(d) <= L}|
inline std::uint64_t count_at_most(const ComplexityTable& t, std::uint64_t len) {
    return static_cast<std::uint64_t>(
        std::count_if(t.rows.begin(), t.rows.end(), [&](const auto& e) { return e && e->length <= len; }));
}

// ---------------------------------------------------------------------------
// Wrapping halting programs as emitting ones

/// U-code length of the wrapped form of a plain witness p: the code is
/// 0^n 1 with b_word(n) = wrap(p), so its length is b_index(wrap(p)) + 1.
struct WrappedWitness {
    BinaryWord program;      // wrap(p)
    std::uint64_t code_length = 0;
};

inline std::optional<WrappedWitness> wrap_plain_witness(const BinaryWord& p) {
    const auto listing = parse_program(p);
    if (!listing) return std::nullopt;
    const auto wrapped = wrap_emit_on_halt(*listing);
    if (!wrapped) return std::nullopt;
    WrappedWitness w;
    w.program = assemble(*wrapped);
    if (w.program.size() > 62) return std::nullopt;
    w.code_length = b_index(w.program) + 1;
    return w;
}

struct WrapMeasurement {
    std::uint64_t c_wrap = 0;
    std::size_t rows = 0;
    std::vector<std::string> failures;
};

/// c_wrap = max over plain rows of |U-code of wrap(p)| - |p|, checking that
/// each wrapped program's limit in `order` is the row's element.
inline WrapMeasurement measure_wrap_constant(const Poset& order, const ComplexityTable& plain) {
    WrapMeasurement m;
    const Budget& b = plain.budget;
    for (Rank r = 0; r < plain.rows.size(); ++r) {
        const auto& e = plain.rows[r];
        if (!e) continue;
        ++m.rows;
        const auto w = wrap_plain_witness(e->witness);
        if (!w) {
            m.failures.push_back("rank " + std::to_string(r) + ": witness cannot be wrapped");
            continue;
        }
        const auto rep =
            budgeted_limit(order, vm_program_evaluator(order, w->program), BinaryWord(), b.t_budget, b.fuel, b.window);
        if (rep.status != LimitStatus::stabilized || order.rank(*rep.current) != r)
            m.failures.push_back("rank " + std::to_string(r) + ": wrapped witness does not stabilize on it");
        m.c_wrap = std::max(m.c_wrap, w->code_length - e->length);
    }
    return m;
}

// ---------------------------------------------------------------------------
// The paired decompressor

/// phi(r): if r = c(p,q), dovetail U(p) over `poset` against V(q) over its
/// reverse and return the first common value.
inline std::optional<Element> pair_decompress(const Poset& poset, const BinaryWord& r, const Budget& b) {
    const auto pq = decode_pair(r);
    if (!pq) return std::nullopt;
    return common_value_dovetail(poset, u_evaluator(poset), u_evaluator(poset.reversed()), pq->first, pq->second,
                                 std::max(b.t_budget, b.fuel));
}

/// Decompresses c(p,q) for the k_max witness p and k_min witness q of rank
/// d_rank.
inline std::optional<Element> paired_decompress(const Poset& poset, const ComplexityTable& max_table,
                                                const ComplexityTable& min_table, Rank d_rank, const Budget& b) {
    auto side = [&](const ComplexityTable& t, const char* name) -> const Estimate& {
        if (d_rank >= t.rows.size() || !t.rows[d_rank])
            throw ArgumentError(std::string("paired_decompress: no ") + name + " witness for rank " +
                                std::to_string(d_rank));
        return *t.rows[d_rank];
    };
    const auto& p = side(max_table, "k_max");
    const auto& q = side(min_table, "k_min");
    return pair_decompress(poset, encode_pair(p.witness, q.witness), b);
}

// ---------------------------------------------------------------------------
// Diagonal construction against short weak-order programs

/// Z_i as sigma(i, 0) < ... < sigma(i, size-1) in the strong order.
using FamilyGenerator = std::function<ElementSet(std::uint64_t i, std::size_t size)>;

/// sigma(i, j) = lo^(size-1-j) hi: an increasing lexico chain that is a
/// prefix antichain.
inline FamilyGenerator word_family_generator(const Poset& weak, const Poset& strong, char lo = 'a', char hi = 'b') {
    return [weak, strong, lo, hi](std::uint64_t, std::size_t size) {
        return chain_antichain_family(weak, strong, FamilyKind::prefix_vs_lexico, size, lo, hi);
    };
}

/// The weak-order semantics to diagonalize against: f increasing and g
/// decreasing in the weak order, both indexed by programs.
struct WeakSemantics {
    Evaluator<BinaryWord> max_eval;
    Evaluator<BinaryWord> min_eval;
};

inline WeakSemantics rankvm_weak_semantics(const Poset& weak) {
    return {u_evaluator(weak), u_evaluator(weak.reversed())};
}

struct DiagonalAudit {
    std::uint64_t i = 0;
    std::uint64_t alpha = 0;
    ElementSet family;
    Element f_value;
    Element g_value;
    LimitStatus f_status = LimitStatus::no_value;
    LimitStatus g_status = LimitStatus::no_value;
    std::size_t programs = 0;
    std::size_t max_excluded = 0;  // max over t of |excluded ∩ Z_i|
    std::size_t bound = 0;         // 2^(alpha+1) - 2
    bool counting_ok = true;       // |excluded ∩ Z_i| <= bound and each X^t_p, Y^t_p hits Z_i at most once
    bool in_family = false;
    bool avoids_short_programs = false;
    std::vector<std::string> notes;

    bool passed() const { return counting_ok && in_family && avoids_short_programs; }
};

/// F_i = strong max-limit of l(i,t) = sigma(i, least j not excluded at t);
/// G_i = strong min-limit of l'(i,t) = sigma(i, greatest j not excluded at t),
/// where "excluded at t" means produced within t steps by some weak max or
/// min process of a program shorter than alpha(i).
inline DiagonalAudit diagonal_hard(const Poset& weak, const Poset& strong, const FamilyGenerator& sigma,
                                   const std::function<std::uint64_t(std::uint64_t)>& alpha, std::uint64_t i,
                                   const Budget& b, const WeakSemantics& sem) {
    DiagonalAudit a;
    a.i = i;
    a.alpha = alpha(i);
    if (a.alpha > 20) throw ResourceError("diagonal_hard: alpha(i) = " + std::to_string(a.alpha) + " is beyond desk scale");
    const std::size_t size = std::size_t{1} << (a.alpha + 1);
    a.family = sigma(i, size);
    if (a.family.size() != size) throw Error("diagonal_hard: generator returned a family of the wrong size");
    if (!is_chain_antichain(weak, strong, a.family)) throw Error("diagonal_hard: generator family is invalid");
    for (std::size_t j = 1; j < size; ++j)
        if (!strong.lt(a.family[j - 1], a.family[j])) throw Error("diagonal_hard: family is not increasing");
    a.bound = size - 2;

    std::vector<BinaryWord> programs;
    for (std::uint64_t k = 0; k + 1 < (std::uint64_t{1} << a.alpha); ++k) programs.push_back(b_word(k));
    a.programs = programs.size();
    auto index_in_family = [&](const Element& d) -> std::optional<std::size_t> {
        for (std::size_t j = 0; j < size; ++j)
            if (a.family[j] == d) return j;
        return std::nullopt;
    };

    const std::uint64_t T = b.t_budget;
    Trace up, down;
    for (std::uint64_t t = 0; t <= T; ++t) {
        std::vector<bool> excluded(size, false);
        for (const auto& p : programs)
            for (const auto* e : {&sem.max_eval, &sem.min_eval}) {
                // X^t_p: values f(p,t'), t' <= t, converging in <= t steps
                std::vector<std::size_t> hits;
                e->scan(p, t, t, [&](std::uint64_t, const Outcome& o) {
                    if (!o.defined()) return;
                    if (auto j = index_in_family(*o.value);
                        j && std::find(hits.begin(), hits.end(), *j) == hits.end())
                        hits.push_back(*j);
                });
                if (hits.size() > 1) {
                    a.counting_ok = false;
                    a.notes.push_back("program " + p.str() + " meets Z_i twice at t=" + std::to_string(t));
                }
                for (auto j : hits) excluded[j] = true;
            }
        const auto n_ex = static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), true));
        a.max_excluded = std::max(a.max_excluded, n_ex);
        if (n_ex > a.bound) {
            a.counting_ok = false;
            a.notes.push_back("excluded " + std::to_string(n_ex) + " elements at t=" + std::to_string(t));
            break;
        }
        std::size_t lo = 0, hi = size - 1;
        while (excluded[lo]) ++lo;
        while (excluded[hi]) --hi;
        if (up.empty() || !(up.back().d == a.family[lo])) up.push_back({t, a.family[lo]});
        if (down.empty() || !(down.back().d == a.family[hi])) down.push_back({t, a.family[hi]});
    }
    if (!a.counting_ok) return a;

    // limits of l and l' over [0, T]
    auto limit_of = [&](const Poset& order, const Trace& tr) {
        return budgeted_limit(order, trace_evaluator<int>([&] {
                                  Trace full;
                                  std::size_t k = 0;
                                  for (std::uint64_t t = 0; t <= T; ++t) {
                                      while (k + 1 < tr.size() && tr[k + 1].t <= t) ++k;
                                      full.push_back({t, tr[k].d});
                                  }
                                  return full;
                              }()),
                              0, T, 0, b.window);
    };
    const auto f = limit_of(strong, up);
    const auto g = limit_of(strong.reversed(), down);
    a.f_value = *f.current;
    a.g_value = *g.current;
    a.f_status = f.status;
    a.g_status = g.status;
    a.in_family = index_in_family(a.f_value) && index_in_family(a.g_value);

    // no short program's weak max- or min-limit is F_i or G_i
    a.avoids_short_programs = true;
    for (const auto& p : programs) {
        const auto um = budgeted_limit(weak, sem.max_eval, p, T, T, b.window);
        const auto vm = budgeted_limit(weak.reversed(), sem.min_eval, p, T, T, b.window);
        for (const auto* rep : {&um, &vm}) {
            if (!rep->current) continue;
            if (*rep->current == a.f_value || *rep->current == a.g_value) {
                a.avoids_short_programs = false;
                a.notes.push_back("program " + p.str() + " produces a diagonal value");
            }
        }
    }
    return a;
}

// ---------------------------------------------------------------------------
// Deciding F(x) = d with two oracle calls

/// Answers "exists t <= horizon with pred(t)" by brute force; counts calls.
class OracleStub {
public:
    explicit OracleStub(std::uint64_t horizon) : horizon_(horizon) {}

    bool exists(const std::function<bool(std::uint64_t)>& pred) {
        ++calls_;
        for (std::uint64_t t = 0; t <= horizon_; ++t)
            if (pred(t)) return true;
        return false;
    }

    std::uint64_t calls() const noexcept { return calls_; }
    std::uint64_t horizon() const noexcept { return horizon_; }

private:
    std::uint64_t horizon_;
    std::uint64_t calls_ = 0;
};

/// Graph of F as (exists t sigma(x,t,d)) ∧ (forall t pi(x,t,d)).
template <class X>
struct GraphPredicates {
    std::function<bool(const X&, std::uint64_t, const Element&)> sigma;
    std::function<bool(const X&, std::uint64_t, const Element&)> pi;
};

/// For F = max-limit of an increasing f: some f(x,t) equals d, and every
/// f(x,t) converging within t steps is <= d.
template <class X>
GraphPredicates<X> max_process_graph(const Poset& p, const Evaluator<X>& f) {
    GraphPredicates<X> g;
    g.sigma = [f](const X& x, std::uint64_t t, const Element& d) {
        const auto o = f(x, t, t);
        return o.defined() && *o.value == d;
    };
    g.pi = [p, f](const X& x, std::uint64_t t, const Element& d) {
        const auto o = f(x, t, t);
        return !o.defined() || p.leq(*o.value, d);
    };
    return g;
}

struct OracleDecision {
    bool value = false;
    std::uint64_t calls = 0;
    int decided_by = 0;  // 1 or 2
};

/// Always exactly two calls: exists t sigma, then exists t not pi.
template <class X>
OracleDecision oracle_decide(const GraphPredicates<X>& graph, OracleStub& o, const X& x, const Element& d) {
    const auto before = o.calls();
    const bool attained = o.exists([&](std::uint64_t t) { return graph.sigma(x, t, d); });
    const bool exceeded = o.exists([&](std::uint64_t t) { return !graph.pi(x, t, d); });
    OracleDecision r;
    r.value = attained && !exceeded;
    r.calls = o.calls() - before;
    r.decided_by = attained ? 2 : 1;
    return r;
}

// ---------------------------------------------------------------------------
// Hierarchy report

struct HierarchyTables {
    ComplexityTable plain;
    ComplexityTable max;
    ComplexityTable min;
};

inline HierarchyTables estimate_hierarchy(const Poset& poset, std::uint64_t ranks, const Budget& b,
                                          std::uint64_t threads = 1) {
    return {k_plain_table(poset, ranks, b, threads), k_max_table(poset, ranks, b, threads),
            k_min_table(poset, ranks, b, threads)};
}

struct HierarchySummary {
    std::optional<std::int64_t> c1;  // max(k_max - k_plain)
    std::optional<std::int64_t> c2;  // max(k_min - k_plain)
    WrapMeasurement wrap;
    std::uint64_t max_gap = 0;  // max |k_max - k_min|
    std::size_t doubly_witnessed = 0;
};

inline HierarchySummary summarize(const Poset& poset, const HierarchyTables& h) {
    HierarchySummary s;
    for (Rank r = 0; r < h.plain.rows.size(); ++r) {
        const auto &kp = h.plain.rows[r], &kx = h.max.rows[r], &kn = h.min.rows[r];
        auto diff = [](const Estimate& a, const Estimate& b) {
            return static_cast<std::int64_t>(a.length) - static_cast<std::int64_t>(b.length);
        };
        if (kp && kx) s.c1 = std::max(s.c1.value_or(diff(*kx, *kp)), diff(*kx, *kp));
        if (kp && kn) s.c2 = std::max(s.c2.value_or(diff(*kn, *kp)), diff(*kn, *kp));
        if (kx && kn) {
            ++s.doubly_witnessed;
            s.max_gap = std::max<std::uint64_t>(s.max_gap, static_cast<std::uint64_t>(std::llabs(diff(*kx, *kn))));
        }
    }
    s.wrap = measure_wrap_constant(poset, h.plain);
    return s;
}

namespace complexity_detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

}  // namespace complexity_detail

/// CSV rows `rank,element,k_plain,k_max,k_min,witness_plain,witness_max,
/// witness_min,pair_len,status`, preceded by `#` lines from `header` and
/// followed by `#` summary lines.
inline void write_hierarchy_report(const Poset& poset, const HierarchyTables& h, const HierarchySummary& s,
                                   const std::vector<std::string>& header, std::ostream& out) {
    using complexity_detail::csv_field;
    for (const auto& line : header) out << "# " << line << '\n';
    out << "rank,element,k_plain,k_max,k_min,witness_plain,witness_max,witness_min,pair_len,status\n";
    auto censored_at = [](const ComplexityTable& t, Rank r) {
        return std::any_of(t.censored.begin(), t.censored.end(), [&](const CensoredRun& c) { return c.current == r; });
    };
    for (Rank r = 0; r < h.plain.rows.size(); ++r) {
        const auto &kp = h.plain.rows[r], &kx = h.max.rows[r], &kn = h.min.rows[r];
        auto len = [](const std::optional<Estimate>& e) { return e ? std::to_string(e->length) : std::string(); };
        auto wit = [](const std::optional<Estimate>& e) { return e ? e->witness.str() : std::string(); };
        std::string status;
        if ((!kx && censored_at(h.max, r)) || (!kn && censored_at(h.min, r)))
            status = "censored";
        else if (kp || kx || kn)
            status = "ok";
        else
            status = "unreached";
        out << r << ',' << csv_field(poset.format(poset.unrank(r))) << ',' << len(kp) << ',' << len(kx) << ','
            << len(kn) << ',' << wit(kp) << ',' << wit(kx) << ',' << wit(kn) << ','
            << (kx && kn ? std::to_string(pair_length(kx->length, kn->length)) : std::string()) << ',' << status
            << '\n';
    }
    auto opt = [](const std::optional<std::int64_t>& v) { return v ? std::to_string(*v) : std::string("none"); };
    out << "# c1=" << opt(s.c1) << " c2=" << opt(s.c2) << " c_wrap=" << s.wrap.c_wrap << '\n';
    out << "# doubly_witnessed=" << s.doubly_witnessed << " max_gap=" << s.max_gap
        << " censored_max=" << h.max.censored.size() << " censored_min=" << h.min.censored.size()
        << " wrap_failures=" << s.wrap.failures.size() << '\n';
}

}  // namespace kposet
