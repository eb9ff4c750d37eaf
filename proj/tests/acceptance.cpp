// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kposet/analysis.hpp"
#include "kposet/automata.hpp"
#include "kposet/codec.hpp"
#include "kposet/complexity.hpp"
#include "kposet/limitops.hpp"
#include "kposet/poset.hpp"
#include "kposet/quotient.hpp"
#include "kposet/rankvm.hpp"
#include "oracles.hpp"

using namespace kposet;

namespace {

// Collects the first few failures; a criterion passes when none were seen.
class Check {
public:
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (ok) return;
        if (failures_.size() < 3) failures_.push_back(what);
        ++failed_;
    }
    bool ok() const { return failed_ == 0; }
    std::size_t checks() const { return checks_; }
    std::string summary() const {
        std::string s = std::to_string(failed_) + " of " + std::to_string(checks_) + " checks failed";
        for (const auto& f : failures_) s += "; " + f;
        return s;
    }
    std::string note;

private:
    std::size_t checks_ = 0, failed_ = 0;
    std::vector<std::string> failures_;
};

struct Criterion {
    int id;
    const char* title;
    double limit_s;
    std::function<void(Check&)> body;
};

BinaryWord random_word(std::mt19937_64& rng, std::size_t max_len) {
    std::string s(rng() % (max_len + 1), '0');
    for (auto& c : s) c = (rng() & 1) ? '1' : '0';
    return BinaryWord(s);
}

std::vector<BinaryWord> words_up_to(std::size_t max_len) {
    std::vector<BinaryWord> out;
    for (const auto& w : oracle::all_words("01", max_len)) out.emplace_back(w);
    return out;
}

std::uint64_t floor_log2(std::uint64_t m) {
    std::uint64_t l = 0;
    while (m > 1) m >>= 1, ++l;
    return l;
}

// ---------------------------------------------------------------------------

void codec_exactness(Check& c) {
    const auto words = words_up_to(8);
    for (const auto& p : words)
        for (const auto& q : words) {
            const auto m = std::min(p.size(), q.size());
            const auto want = p.size() + q.size() + 2 * floor_log2(m) + 3;
            const auto r = encode_pair(p, q);
            c.expect(r.size() == want, "|c(" + p.str() + "," + q.str() + ")|");
            const auto d = decode_pair(r);
            c.expect(d && d->first == p && d->second == q, "pair round trip " + p.str() + "," + q.str());
        }
    std::mt19937_64 rng(101);
    for (int i = 0; i < 100000; ++i) {
        const std::uint64_t n = rng() >> (rng() % 64);
        c.expect(parse_bin(bin(n)) == n, "bin " + std::to_string(n));
        const std::uint64_t k = rng() % (std::uint64_t{1} << 40);
        c.expect(b_index(b_word(k)) == k, "b_word " + std::to_string(k));
        const auto p = random_word(rng, 24), q = random_word(rng, 24);
        const std::uint64_t m = rng() % 5000;
        const auto pd = decode_padded(encode_padded(m, p));
        c.expect(pd && pd->first == m && pd->second == p, "padded");
        const std::uint64_t span = 1 + rng() % 1000, j = 1 + rng() % span;
        const auto sd = decode_split(encode_split(j, span, p), span);
        c.expect(sd && sd->first == j && sd->second == p, "split");
        const auto qd = decode_pair(encode_pair(p, q));
        c.expect(qd && qd->first == p && qd->second == q, "pair");
    }
}

void prefix_normal_form_equivalence(Check& c) {
    const auto pre = parse_poset_spec("prefix:ab");
    std::mt19937_64 rng(202);
    for (int i = 0; i < 500; ++i) {
        // per-input traces of growing words, stable after t = 20
        std::map<int, std::vector<std::string>> vals;
        for (int x = 0; x < 3; ++x) {
            std::string cur;
            for (int t = 0; t <= 40; ++t) {
                if (t < 20 && rng() % 3 == 0)
                    for (std::uint64_t k = rng() % 5; k > 0; --k) cur += "ab"[rng() % 2];
                vals[x].push_back(cur);
            }
        }
        Evaluator<int> src;
        src.eval = [vals](const int& x, std::uint64_t t, std::uint64_t) {
            const auto& v = vals.at(x);
            return Outcome::of(word(v[std::min<std::size_t>(t, v.size() - 1)]));
        };
        const auto f = prefix_normal_form(src);
        for (int x = 0; x < 3; ++x) {
            std::string prev;
            for (std::uint64_t t = 0; t <= 120; ++t) {
                const auto v = std::get<std::string>(*f(x, t, 0).value);
                c.expect(v.compare(0, prev.size(), prev) == 0 && v.size() <= prev.size() + 1,
                         "one symbol per step at t=" + std::to_string(t));
                prev = v;
            }
            const auto a = budgeted_limit(pre, src, x, 400, 0, 20);
            const auto b = budgeted_limit(pre, f, x, 400, 0, 20);
            c.expect(a.status == LimitStatus::stabilized && b.status == a.status && a.current == b.current,
                     "limit preserved");
        }
    }
}

void monotone_filter_repair(Check& c) {
    using G = GraphTuple<int>;
    auto audit = [&](const Poset& p, const std::vector<G>& s) {
        const auto kept = monotone_filter(p, s);
        for (const auto& a : kept)
            for (const auto& b : kept)
                if (a.n == b.n && a.x == b.x && a.t < b.t && !p.leq(a.d, b.d)) {
                    c.expect(false, "kept tuples out of order in " + p.spec());
                    return;
                }
        c.expect(monotone_filter(p, kept).size() == kept.size(), "filter idempotent");
    };
    std::size_t posets = 0, streams = 0;
    std::mt19937_64 rng(303);
    for (std::size_t n = 1; n <= 5; ++n)
        for (const auto& lt : oracle::all_posets(n)) {
            ++posets;
            const auto p = finite_poset_from_json(oracle::poset_json(lt));
            std::vector<std::vector<G>> bases;
            for (std::size_t len = 1; len <= 6; ++len)
                for (int trial = 0; trial < 6; ++trial) {
                    std::vector<G> s;
                    for (std::size_t k = 0; k < len; ++k)
                        s.push_back({0, static_cast<int>(rng() % 2), rng() % len, p.unrank(rng() % n)});
                    bases.push_back(s);
                }
            // every value assignment over one input with distinct times
            if (n <= 3)
                for (std::size_t code = 0; code < n * n * n * n * n; ++code) {
                    std::vector<G> s;
                    for (std::size_t k = 0, v = code; k < 5; ++k, v /= n) s.push_back({0, 0, k, p.unrank(v % n)});
                    bases.push_back(s);
                }
            for (auto s : bases) {
                std::vector<std::size_t> perm(s.size());
                std::iota(perm.begin(), perm.end(), 0);
                do {
                    std::vector<G> ordered;
                    for (auto k : perm) ordered.push_back(s[k]);
                    audit(p, ordered);
                    ++streams;
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    // regression: the one-directional comparison keeps both of these
    const auto nat = parse_poset_spec("nat");
    const auto back = monotone_filter<int>(nat, {G{0, 0, 1, integer(3)}, G{0, 0, 0, integer(5)}});
    c.expect(back.size() == 1 && back[0].t == 1 && back[0].d == integer(3), "regression stream");
    c.note = std::to_string(posets) + " posets, " + std::to_string(streams) + " streams";
}

void normalize_rectangular(Check& c) {
    const auto nat = parse_poset_spec("nat");
    std::mt19937_64 rng(404);
    std::size_t convergent = 0;
    for (int i = 0; i < 1000; ++i) {
        // sparse increasing trace over the whole budget, constant after t = 30
        Trace tr;
        std::int64_t v = static_cast<std::int64_t>(rng() % 5);
        for (std::uint64_t t = 0; t <= 120; ++t) {
            if (rng() % 3 == 0) continue;
            if (t < 30 && rng() % 6 == 0) v += 1 + static_cast<std::int64_t>(rng() % 4);
            tr.push_back({t, integer(v)});
        }
        ++convergent;
        const auto cost = rng() % 3;
        const auto src = trace_evaluator<int>(tr, cost);
        Evaluator<int> none;
        none.eval = [](const int&, std::uint64_t, std::uint64_t) { return Outcome::divergent(); };
        Evaluator<int> both;
        both.eval = [src, none](const int& x, std::uint64_t t, std::uint64_t fuel) {
            return x == 0 ? src(x, t, fuel) : none(x, t, fuel);
        };
        const auto f = normalize(nat, both);
        bool rect = true;
        for (std::uint64_t t = 0; t <= 120; ++t) {
            rect = rect && f(0, t, 120).defined();
            rect = rect && !f(1, t, 120).defined();
        }
        c.expect(rect, "domain is rectangular");
        const auto a = budgeted_limit(nat, both, 0, 120, 120, 40);
        const auto b = budgeted_limit(nat, f, 0, 120, 120, 40);
        c.expect(a.status == LimitStatus::stabilized && b.status == a.status && a.current == b.current,
                 "limit preserved");
        c.expect(budgeted_limit(nat, f, 1, 60, 60, 10).status == LimitStatus::no_value, "empty row stays empty");
    }
    c.note = std::to_string(convergent) + " processes";
}

void dilworth(Check& c) {
    std::mt19937_64 rng(505);
    for (int i = 0; i < 500; ++i) {
        const auto fp = oracle::random_poset(rng, 1 + rng() % 10, 0.05 + 0.1 * static_cast<double>(rng() % 8));
        const auto cover = min_chain_cover(fp);
        const auto ac = max_antichain(fp);
        const auto brute = oracle::antichain_size(fp);
        c.expect(ac.size() == brute && cover.size() == brute, "sizes match brute force");
        c.expect(is_antichain(fp, ac), "antichain");
        std::vector<int> seen(fp.n, 0);
        for (const auto& ch : cover) {
            c.expect(is_chain(fp, ch), "cover chain");
            for (auto v : ch) ++seen[v];
        }
        c.expect(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }), "cover partitions");
    }
}

// Every weak order inside `strong`: closures of subsets of its relation.
std::vector<FinitePoset> weak_suborders(const FinitePoset& strong) {
    std::vector<std::pair<std::size_t, std::size_t>> rel;
    for (std::size_t i = 0; i < strong.n; ++i)
        for (std::size_t j = 0; j < strong.n; ++j)
            if (strong.lt[i][j]) rel.emplace_back(i, j);
    std::set<std::vector<std::vector<bool>>> seen;
    std::vector<FinitePoset> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rel.size()); ++mask) {
        std::vector<std::pair<std::size_t, std::size_t>> sub;
        for (std::size_t k = 0; k < rel.size(); ++k)
            if (mask >> k & 1) sub.push_back(rel[k]);
        auto w = FinitePoset::from_relation(strong.n, sub);
        if (seen.insert(w.lt).second) out.push_back(std::move(w));
    }
    return out;
}

void star_dagger(Check& c) {
    std::size_t pairs = 0;
    auto audit = [&](const OrderPair& pr) {
        ++pairs;
        const auto chains = maximal_chains(pr.strong);
        for (std::size_t k = 0; k <= pr.strong.n; ++k) {
            const auto star = check_star(pr, k + 1);
            const auto dagger = check_dagger(pr, k);
            if (star) {
                c.expect(is_chain(pr.strong, *star) && is_antichain(pr.weak, *star) && star->size() == k + 1,
                         "star witness");
                c.expect(dagger.has_value(), "star(k+1) without dagger(k)");
            }
            if (dagger) {
                c.expect(is_chain(pr.strong, *dagger) && min_chain_cover(pr.weak.restricted(*dagger)).size() > k,
                         "dagger witness");
            } else {
                c.expect(!star, "dagger(k) fails while star(k+1) holds");
            }
            if (!star) {
                // each strong chain splits into at most k weak chains
                for (const auto& ch : chains) {
                    const auto weak = pr.weak.restricted(ch);
                    const auto cover = min_chain_cover(weak);
                    bool valid = cover.size() <= k;
                    for (const auto& piece : cover) valid = valid && is_chain(weak, piece);
                    c.expect(valid, "cover bound at k=" + std::to_string(k));
                }
            }
        }
    };
    for (std::size_t n = 1; n <= 4; ++n)
        for (const auto& lt : oracle::all_posets(n)) {
            FinitePoset strong(n);
            strong.lt = lt;
            for (auto& w : weak_suborders(strong)) audit(OrderPair{std::move(w), strong});
        }
    std::mt19937_64 rng(606);
    while (pairs < 12000) {
        const std::size_t n = 5 + rng() % 2;
        OrderPair pr;
        pr.strong = oracle::random_poset(rng, n, 0.2 + 0.1 * static_cast<double>(rng() % 7));
        std::vector<std::pair<std::size_t, std::size_t>> sub;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (pr.strong.lt[i][j] && rng() % 3) sub.emplace_back(i, j);
        pr.weak = FinitePoset::from_relation(n, sub);
        audit(pr);
    }
    c.note = std::to_string(pairs) + " pairs";
}

Budget full_budget() {
    Budget b;
    b.max_prog_len = 14;
    b.fuel = 4096;
    b.t_budget = 4096;
    b.window = 1024;
    return b;
}

// Tables shared by criteria 7, 9 and 11.
struct Tables {
    std::vector<std::pair<std::string, ComplexityTable>> all;
    void add(const std::string& name, ComplexityTable t) { all.emplace_back(name, std::move(t)); }
};

Tables& tables() {
    static Tables t;
    return t;
}

void lemma_decompressor(Check& c) {
    const auto nat = parse_poset_spec("nat");
    const auto b = full_budget();
    const auto mx = k_max_table(nat, 32, b), mn = k_min_table(nat, 32, b);
    const auto plain = k_plain_table(nat, 32, b);
    c.expect(audit_table(nat, mx).empty() && audit_table(nat, mn).empty(), "tables replay");
    std::size_t doubly = 0;
    for (Rank r = 0; r < 32; ++r) {
        if (!(mx.rows[r] && mn.rows[r])) continue;
        ++doubly;
        c.expect(paired_decompress(nat, mx, mn, r, b) == nat.unrank(r), "row " + std::to_string(r));
    }
    c.expect(doubly > 0, "at least one doubly-witnessed row");
    // wrapped plain witnesses give a doubly-witnessed code for every plain row
    std::size_t wrapped = 0;
    for (Rank r = 0; r < 32; ++r) {
        if (!plain.rows[r]) continue;
        const auto w = wrap_plain_witness(plain.rows[r]->witness);
        if (!w || w->program.size() > 40) continue;
        ++wrapped;
        const auto u = encode_padded(b_index(w->program), BinaryWord());
        c.expect(pair_decompress(nat, encode_pair(u, u), b) == nat.unrank(r), "wrapped row " + std::to_string(r));
    }
    c.note = std::to_string(doubly) + " doubly-witnessed table rows, " + std::to_string(wrapped) + " wrapped rows";
    tables().add("nat k_plain", plain);
    tables().add("nat k_max", mx);
    tables().add("nat k_min", mn);
}

void lemma_diagonal(Check& c) {
    const auto weak = parse_poset_spec("prefix:ab"), strong = parse_poset_spec("lexico:a<b");
    const auto sigma = word_family_generator(weak, strong);
    Budget b;
    b.max_prog_len = 14;
    b.t_budget = b.fuel = 256;
    b.window = 64;
    const auto alpha = [](std::uint64_t i) { return i + 1; };
    for (std::uint64_t i = 0; i <= 3; ++i) {
        const auto a = diagonal_hard(weak, strong, sigma, alpha, i, b, rankvm_weak_semantics(weak));
        const auto tag = "i=" + std::to_string(i);
        c.expect(a.passed(), tag + (a.notes.empty() ? "" : ": " + a.notes[0]));
        c.expect(a.bound == (std::size_t{1} << (a.alpha + 1)) - 2 && a.max_excluded <= a.bound, tag + " counting");
        const auto& fam = a.family;
        c.expect(std::find(fam.begin(), fam.end(), a.f_value) != fam.end() &&
                     std::find(fam.begin(), fam.end(), a.g_value) != fam.end(),
                 tag + " F, G in Z");
        c.expect(fam.size() == (std::size_t{1} << (a.alpha + 1)), tag + " family size");
        for (std::size_t j = 0; j + 1 < fam.size(); ++j)
            c.expect(strong.leq(fam[j], fam[j + 1]) && !weak.leq(fam[j], fam[j + 1]) && !weak.leq(fam[j + 1], fam[j]),
                     tag + " family is a strong chain and weak antichain");
    }
    // semantics that spend every short program on a family member
    const std::uint64_t al = 2;
    const auto fam = sigma(0, std::size_t{1} << (al + 1));
    auto make = [&](bool low) {
        Evaluator<BinaryWord> e;
        e.eval = [fam, low](const BinaryWord& p, std::uint64_t t, std::uint64_t) {
            const auto k = b_index(p);
            if (t < 3 * k) return Outcome::divergent();
            return Outcome::of(low ? fam[k] : fam[fam.size() - 1 - k]);
        };
        return e;
    };
    Budget small;
    small.t_budget = small.fuel = 40;
    small.window = 8;
    const auto a = diagonal_hard(weak, strong, sigma, [&](std::uint64_t) { return al; }, 0, small,
                                 WeakSemantics{make(true), make(false)});
    c.expect(a.passed() && a.max_excluded == a.bound && a.f_value == fam[3] && a.g_value == fam[4], "adversarial");
}

std::optional<std::uint64_t> len(const ComplexityTable& t, Rank r) {
    if (r >= t.rows.size() || !t.rows[r]) return std::nullopt;
    return t.rows[r]->length;
}

std::uint64_t gap(std::uint64_t a, std::uint64_t b) { return a > b ? a - b : b - a; }

void discrete_shadow(Check& c) {
    const auto d = parse_poset_spec("discrete(nat)");
    const auto b = full_budget();
    const auto mx = k_max_table(d, 32, b), mn = k_min_table(d, 32, b), plain = k_plain_table(d, 32, b);
    const auto m = measure_wrap_constant(d, plain);
    c.expect(m.failures.empty(), m.failures.empty() ? "" : m.failures[0]);
    std::size_t rows = 0;
    for (Rank r = 0; r < 32; ++r) {
        const auto kx = len(mx, r), kn = len(mn, r), kp = len(plain, r);
        c.expect(kx.has_value() == kn.has_value(), "max and min rows recorded together at " + std::to_string(r));
        if (kx && kn) {
            ++rows;
            c.expect(gap(*kx, *kn) <= m.c_wrap, "|k_max - k_min| at " + std::to_string(r));
            if (kp) c.expect(*kx <= *kp + m.c_wrap && *kn <= *kp + m.c_wrap, "k_max, k_min <= k_plain + c_wrap");
        }
    }
    c.expect(rows > 0, "at least one recorded row");
    c.note = std::to_string(rows) + " rows, c_wrap=" + std::to_string(m.c_wrap);
    tables().add("discrete k_plain", plain);
    tables().add("discrete k_max", mx);
    tables().add("discrete k_min", mn);
}

void quotient_correctness(Check& c) {
    const Alphabet ab("ab");
    std::mt19937_64 rng(1010);
    const auto short_words = oracle::all_words("ab", 3);
    const auto probe = oracle::all_words("ab", 5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto l = canonicalize(oracle::random_dfa(rng, ab, 5));
        std::vector<std::string> m;
        for (const auto& w : short_words)
            if (rng() % 4 == 0) m.push_back(w);
        std::shuffle(m.begin(), m.end(), rng);
        const auto q = quotient(l, m);
        bool agree = true;
        for (const auto& u : probe) agree = agree && q.accepts(u) == oracle::in_quotient(l, m, u);
        c.expect(agree, "brute force agreement");
        const auto e = quotient_evaluator(list_enumerator(m));
        const Element x{RegLang{std::make_shared<const Dfa>(l)}};
        const auto tr = materialize(e, x, m.size() + 2, m.size() + 2);
        c.expect(count_changes(tr) <= l.size(), "trace changes bounded by states");
        c.expect(!tr.empty() && std::get<RegLang>(tr.back().d).dfa && *std::get<RegLang>(tr.back().d).dfa == q,
                 "trace ends at the quotient");
    }
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = canonicalize(oracle::random_dfa(rng, ab, 5));
        const auto re = canonical_regex(d);
        c.expect(to_canonical_dfa(re, ab) == d, "round trip via " + re);
    }
}

void pigeonhole(Check& c) {
    for (const auto& [name, t] : tables().all)
        for (std::uint64_t l = 0; l <= t.budget.max_prog_len + 2; ++l) {
            std::uint64_t n = 0;
            for (const auto& r : t.rows) n += r && r->length <= l;
            c.expect(n == count_at_most(t, l) && n <= (std::uint64_t{1} << (l + 1)) - 1,
                     name + " at L=" + std::to_string(l));
        }
    c.expect(tables().all.size() == 6, "tables from criteria 7 and 9 present");
    c.note = std::to_string(tables().all.size()) + " tables";
}

void busy_beaver(Check& c) {
    const std::uint64_t t_max = 40;
    std::vector<std::vector<std::uint64_t>> series;
    for (std::uint64_t n = 0; n <= 2; ++n) series.push_back(busy_beaver_series(n, t_max));
    for (std::uint64_t n = 0; n <= 2; ++n)
        for (std::uint64_t t = 1; t <= t_max; ++t)
            c.expect(series[n][t - 1] <= series[n][t], "monotone in t, n=" + std::to_string(n));
    for (std::uint64_t n = 0; n < 2; ++n)
        for (std::uint64_t t = 0; t <= t_max; ++t)
            c.expect(series[n][t] <= series[n + 1][t], "monotone in n at t=" + std::to_string(t));
    for (std::uint64_t n = 0; n <= 1; ++n)
        c.expect(busy_beaver_series(n, 30) == oracle::busy_beaver(n + 1, 30), "oracle n=" + std::to_string(n));
    c.note = "bb(2," + std::to_string(t_max) + ")=" + std::to_string(series[2][t_max]);
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "codec exactness", 10, codec_exactness},
        {2, "prefix normal form preserves limits", 10, prefix_normal_form_equivalence},
        {3, "monotone filter repair", 60, monotone_filter_repair},
        {4, "normalization is rectangular", 30, normalize_rectangular},
        {5, "Dilworth cover equals antichain", 60, dilworth},
        {6, "star(k+1) iff dagger(k)", 300, star_dagger},
        {7, "paired decompressor", 600, lemma_decompressor},
        {8, "diagonal construction", 600, lemma_diagonal},
        {9, "discrete shadow", 600, discrete_shadow},
        {10, "quotient correctness", 120, quotient_correctness},
        {11, "pigeonhole bound", 10, pigeonhole},
        {12, "busy beaver", 120, busy_beaver},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        std::string error;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.body(c);
        } catch (const std::exception& e) {
            error = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs <= cr.limit_s;
        const bool pass = error.empty() && c.ok() && in_time;
        failed += !pass;
        std::ostringstream line;
        line << (pass ? "PASS" : "FAIL") << "  [" << cr.id << "] " << cr.title << " (" << c.checks() << " checks, ";
        line.precision(2);
        line << std::fixed << secs << " s of " << cr.limit_s << " s)";
        if (!c.note.empty()) line << "  " << c.note;
        if (!error.empty()) line << "  " << error;
        if (!c.ok()) line << "  " << c.summary();
        if (!in_time) line << "  over time limit";
        std::printf("%s\n", line.str().c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
