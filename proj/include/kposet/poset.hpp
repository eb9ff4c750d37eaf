#pragma once

// Computable partial orders (D, <, rho): a carrier enumerated by a total
// bijection rho : N -> D together with a decidable order.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "kposet/automata.hpp"
#include "kposet/error.hpp"

namespace kposet {

using Rank = std::uint64_t;

/// A finite subset of N, kept sorted and duplicate-free.
struct FinSet {
    std::vector<std::uint64_t> items;

    static FinSet of(std::vector<std::uint64_t> xs) {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return FinSet{std::move(xs)};
    }
    bool contains(std::uint64_t x) const { return std::binary_search(items.begin(), items.end(), x); }
    friend bool operator==(const FinSet&, const FinSet&) = default;
};

/// A regular language, held as its canonical DFA.
struct RegLang {
    std::shared_ptr<const Dfa> dfa;
    friend bool operator==(const RegLang& a, const RegLang& b) {
        return a.dfa == b.dfa || (a.dfa && b.dfa && *a.dfa == *b.dfa);
    }
};

/// Element representations of all built-in carriers: integers (N and Z),
/// words (also the names of finite-poset elements), finite sets of
/// naturals, regular languages.
using Element = std::variant<std::int64_t, std::string, FinSet, RegLang>;

inline Element integer(std::int64_t v) { return Element{v}; }
inline Element word(std::string w) { return Element{std::move(w)}; }

struct PosetMetadata {
    bool has_minimum = false;
    std::optional<Rank> minimum_rank;
    bool has_maximum = false;
    std::optional<Rank> maximum_rank;
    std::optional<std::vector<Rank>> minimal_elements;
    std::optional<std::uint64_t> height_bound;
};

/// The instance interface. Implementations may assume their arguments
/// passed validate().
class PosetModel {
public:
    virtual ~PosetModel() = default;
    virtual std::string spec() const = 0;
    virtual void validate(const Element& e) const = 0;
    virtual bool leq(const Element& a, const Element& b) const = 0;
    virtual Rank rank(const Element& e) const = 0;
    virtual Element unrank(Rank r) const = 0;
    virtual std::optional<Rank> cardinality() const { return std::nullopt; }
    virtual std::string format(const Element& e) const = 0;
    virtual Element parse_element(std::string_view text) const = 0;
    virtual PosetMetadata metadata() const = 0;
};

/// Immutable, cheaply copyable handle on a computable poset.
class Poset {
public:
    Poset() = default;
    explicit Poset(std::shared_ptr<const PosetModel> m) : model_(std::move(m)) {}

    std::string spec() const { return model_->spec(); }

    bool leq(const Element& a, const Element& b) const {
        model_->validate(a);
        model_->validate(b);
        return model_->leq(a, b);
    }
    bool lt(const Element& a, const Element& b) const { return !(a == b) && leq(a, b); }
    bool comparable(const Element& a, const Element& b) const { return leq(a, b) || leq(b, a); }

    Rank rank(const Element& e) const {
        model_->validate(e);
        return model_->rank(e);
    }
    Element unrank(Rank r) const {
        if (auto n = model_->cardinality(); n && r >= *n)
            throw DomainError("rank " + std::to_string(r) + " out of range for " + spec());
        return model_->unrank(r);
    }
    std::optional<Rank> cardinality() const { return model_->cardinality(); }
    void validate(const Element& e) const { model_->validate(e); }
    std::string format(const Element& e) const { return model_->format(e); }
    Element parse_element(std::string_view text) const { return model_->parse_element(text); }
    PosetMetadata metadata() const { return model_->metadata(); }

    Poset reversed() const;
    Poset discrete() const;

    const PosetModel& model() const { return *model_; }

private:
    std::shared_ptr<const PosetModel> model_;
};

using ElementSet = std::vector<Element>;

/// Throws DomainError when S has two elements with the same rank.
inline void check_element_set(const Poset& p, const ElementSet& s) {
    std::vector<Rank> ranks;
    for (const auto& e : s) ranks.push_back(p.rank(e));
    std::sort(ranks.begin(), ranks.end());
    if (std::adjacent_find(ranks.begin(), ranks.end()) != ranks.end())
        throw DomainError("element set contains duplicates");
}

// ---------------------------------------------------------------------------
// Instances

namespace poset_detail {

inline std::int64_t as_int(const Element& e, const char* who) {
    if (auto p = std::get_if<std::int64_t>(&e)) return *p;
    throw DomainError(std::string(who) + ": expected an integer element");
}

inline const std::string& as_word(const Element& e, const char* who) {
    if (auto p = std::get_if<std::string>(&e)) return *p;
    throw DomainError(std::string(who) + ": expected a word element");
}

inline std::int64_t parse_int(std::string_view text) {
    if (text.empty()) throw ParseError("expected an integer, got empty text");
    std::size_t used = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(std::string(text), &used);
    } catch (const std::exception&) {
        throw ParseError("expected an integer, got \"" + std::string(text) + "\"");
    }
    if (used != text.size()) throw ParseError("expected an integer, got \"" + std::string(text) + "\"");
    return v;
}

class NatModel final : public PosetModel {
public:
    std::string spec() const override { return "nat"; }
    void validate(const Element& e) const override {
        if (as_int(e, "nat") < 0) throw DomainError("nat: negative element");
    }
    bool leq(const Element& a, const Element& b) const override { return std::get<std::int64_t>(a) <= std::get<std::int64_t>(b); }
    Rank rank(const Element& e) const override { return static_cast<Rank>(std::get<std::int64_t>(e)); }
    Element unrank(Rank r) const override {
        if (r > static_cast<Rank>(INT64_MAX)) throw DomainError("nat: rank too large");
        return integer(static_cast<std::int64_t>(r));
    }
    std::string format(const Element& e) const override { return std::to_string(std::get<std::int64_t>(e)); }
    Element parse_element(std::string_view t) const override {
        auto e = integer(parse_int(t));
        validate(e);
        return e;
    }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        m.has_minimum = true;
        m.minimum_rank = 0;
        m.minimal_elements = std::vector<Rank>{0};
        return m;
    }
};

/// Z enumerated as 0, 1, -1, 2, -2, ...
class IntModel final : public PosetModel {
public:
    std::string spec() const override { return "int"; }
    void validate(const Element& e) const override {
        if (as_int(e, "int") == INT64_MIN) throw DomainError("int: value out of range");
    }
    bool leq(const Element& a, const Element& b) const override { return std::get<std::int64_t>(a) <= std::get<std::int64_t>(b); }
    Rank rank(const Element& e) const override {
        const auto z = std::get<std::int64_t>(e);
        return z > 0 ? 2 * static_cast<Rank>(z) - 1 : 2 * static_cast<Rank>(-z);
    }
    Element unrank(Rank r) const override {
        if (r % 2 == 1) return integer(static_cast<std::int64_t>((r + 1) / 2));
        return integer(-static_cast<std::int64_t>(r / 2));
    }
    std::string format(const Element& e) const override { return std::to_string(std::get<std::int64_t>(e)); }
    Element parse_element(std::string_view t) const override { return integer(parse_int(t)); }
    PosetMetadata metadata() const override { return {}; }
};

/// Words over a listed alphabet, enumerated length-lexicographically in the
/// listing order. Ordered either by prefix or lexicographically over a
/// (possibly partial) strict order on symbols.
class WordModel final : public PosetModel {
public:
    // sym_lt empty => prefix order
    WordModel(std::string spec, std::string alphabet, std::vector<std::vector<bool>> sym_lt)
        : spec_(std::move(spec)), alphabet_(std::move(alphabet)), sym_lt_(std::move(sym_lt)) {}

    std::string spec() const override { return spec_; }
    void validate(const Element& e) const override {
        for (char c : as_word(e, spec_.c_str()))
            if (alphabet_.find(c) == std::string::npos)
                throw DomainError(spec_ + ": symbol '" + std::string(1, c) + "' not in alphabet");
    }
    bool leq(const Element& a, const Element& b) const override {
        const auto& u = std::get<std::string>(a);
        const auto& v = std::get<std::string>(b);
        const std::size_t n = std::min(u.size(), v.size());
        std::size_t i = 0;
        while (i < n && u[i] == v[i]) ++i;
        if (i == u.size()) return true;  // u is a prefix of v
        if (i == v.size() || sym_lt_.empty()) return false;
        return sym_lt_[alphabet_.find(u[i])][alphabet_.find(v[i])];
    }
    Rank rank(const Element& e) const override {
        const auto& w = std::get<std::string>(e);
        const Rank k = alphabet_.size();
        Rank offset = 0, block = 1, value = 0;
        for (std::size_t l = 0; l < w.size(); ++l) {
            offset = checked_add(offset, block);
            block = checked_mul(block, k);
        }
        for (char c : w) value = checked_add(checked_mul(value, k), alphabet_.find(c));
        return checked_add(offset, value);
    }
    Element unrank(Rank r) const override {
        const Rank k = alphabet_.size();
        std::size_t len = 0;
        Rank block = 1;
        while (r >= block) {
            r -= block;
            ++len;
            if (block > UINT64_MAX / k) break;
            block *= k;
        }
        std::string w(len, alphabet_[0]);
        for (std::size_t i = len; i-- > 0;) {
            w[i] = alphabet_[r % k];
            r /= k;
        }
        return word(std::move(w));
    }
    std::string format(const Element& e) const override { return std::get<std::string>(e); }
    Element parse_element(std::string_view t) const override {
        auto e = word(std::string(t));
        validate(e);
        return e;
    }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        m.has_minimum = true;
        m.minimum_rank = 0;
        m.minimal_elements = std::vector<Rank>{0};
        return m;
    }

    const std::string& alphabet() const noexcept { return alphabet_; }
    bool is_prefix_order() const noexcept { return sym_lt_.empty(); }
    bool symbol_lt(char a, char b) const {
        if (sym_lt_.empty()) return false;
        return sym_lt_[alphabet_.find(a)][alphabet_.find(b)];
    }

private:
    static Rank checked_add(Rank a, Rank b) {
        if (a > UINT64_MAX - b) throw DomainError("word rank overflows 64 bits");
        return a + b;
    }
    static Rank checked_mul(Rank a, Rank b) {
        if (b != 0 && a > UINT64_MAX / b) throw DomainError("word rank overflows 64 bits");
        return a * b;
    }

    std::string spec_;
    std::string alphabet_;
    std::vector<std::vector<bool>> sym_lt_;
};

/// Finite subsets of N, ranked by bit mask: rank n <-> {i : bit i of n set}.
class FinsetsModel final : public PosetModel {
public:
    std::string spec() const override { return "finsets"; }
    void validate(const Element& e) const override {
        const auto* s = std::get_if<FinSet>(&e);
        if (!s) throw DomainError("finsets: expected a finite set element");
        for (std::size_t i = 0; i < s->items.size(); ++i) {
            if (s->items[i] >= 64) throw DomainError("finsets: members must be < 64 to be rankable");
            if (i > 0 && s->items[i - 1] >= s->items[i]) throw DomainError("finsets: members must be sorted and distinct");
        }
    }
    bool leq(const Element& a, const Element& b) const override {
        const auto& x = std::get<FinSet>(a).items;
        const auto& y = std::get<FinSet>(b).items;
        return std::includes(y.begin(), y.end(), x.begin(), x.end());
    }
    Rank rank(const Element& e) const override {
        Rank r = 0;
        for (auto x : std::get<FinSet>(e).items) r |= Rank{1} << x;
        return r;
    }
    Element unrank(Rank r) const override {
        FinSet s;
        for (std::uint64_t i = 0; i < 64; ++i)
            if (r & (Rank{1} << i)) s.items.push_back(i);
        return s;
    }
    std::string format(const Element& e) const override {
        std::string out = "{";
        const auto& xs = std::get<FinSet>(e).items;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) out.push_back(',');
            out += std::to_string(xs[i]);
        }
        return out + "}";
    }
    Element parse_element(std::string_view t) const override {
        if (t.size() < 2 || t.front() != '{' || t.back() != '}') throw ParseError("finsets: expected {a,b,...}");
        std::vector<std::uint64_t> xs;
        std::string body(t.substr(1, t.size() - 2));
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto v = parse_int(item);
            if (v < 0) throw ParseError("finsets: negative member");
            xs.push_back(static_cast<std::uint64_t>(v));
        }
        Element e = FinSet::of(std::move(xs));
        validate(e);
        return e;
    }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        m.has_minimum = true;
        m.minimum_rank = 0;
        m.minimal_elements = std::vector<Rank>{0};
        return m;
    }
};

class RegModel final : public PosetModel {
public:
    explicit RegModel(Alphabet sigma) : sigma_(std::move(sigma)) {}

    std::string spec() const override { return "reg:" + sigma_.symbols(); }
    void validate(const Element& e) const override {
        const auto* r = std::get_if<RegLang>(&e);
        if (!r || !r->dfa) throw DomainError("reg: expected a regular-language element");
        if (!(r->dfa->alphabet == sigma_)) throw DomainError("reg: alphabet mismatch");
        if (!r->dfa->canonical) throw DomainError("reg: element DFA must be canonical");
    }
    bool leq(const Element& a, const Element& b) const override {
        return language_leq(*std::get<RegLang>(a).dfa, *std::get<RegLang>(b).dfa);
    }
    Rank rank(const Element& e) const override { return reg_rank(*std::get<RegLang>(e).dfa); }
    Element unrank(Rank r) const override { return RegLang{reg_unrank(r, sigma_)}; }
    std::string format(const Element& e) const override { return canonical_regex(*std::get<RegLang>(e).dfa); }
    Element parse_element(std::string_view t) const override {
        return RegLang{std::make_shared<const Dfa>(to_canonical_dfa(t, sigma_))};
    }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        m.has_minimum = true;
        m.minimum_rank = 0;
        m.minimal_elements = std::vector<Rank>{0};
        m.has_maximum = true;
        m.maximum_rank = reg_rank(universal_language_dfa(sigma_));
        return m;
    }

    const Alphabet& alphabet() const noexcept { return sigma_; }

private:
    Alphabet sigma_;
};

class ReverseModel final : public PosetModel {
public:
    explicit ReverseModel(std::shared_ptr<const PosetModel> inner) : inner_(std::move(inner)) {}

    std::string spec() const override { return "rev(" + inner_->spec() + ")"; }
    void validate(const Element& e) const override { inner_->validate(e); }
    bool leq(const Element& a, const Element& b) const override { return inner_->leq(b, a); }
    Rank rank(const Element& e) const override { return inner_->rank(e); }
    Element unrank(Rank r) const override { return inner_->unrank(r); }
    std::optional<Rank> cardinality() const override { return inner_->cardinality(); }
    std::string format(const Element& e) const override { return inner_->format(e); }
    Element parse_element(std::string_view t) const override { return inner_->parse_element(t); }
    PosetMetadata metadata() const override {
        const auto in = inner_->metadata();
        PosetMetadata m;
        m.has_minimum = in.has_maximum;
        m.minimum_rank = in.maximum_rank;
        m.has_maximum = in.has_minimum;
        m.maximum_rank = in.minimum_rank;
        if (in.has_maximum && in.maximum_rank) m.minimal_elements = std::vector<Rank>{*in.maximum_rank};
        m.height_bound = in.height_bound;
        return m;
    }

    const std::shared_ptr<const PosetModel>& inner() const noexcept { return inner_; }

private:
    std::shared_ptr<const PosetModel> inner_;
};

/// Same carrier, empty strict order.
class DiscreteModel final : public PosetModel {
public:
    explicit DiscreteModel(std::shared_ptr<const PosetModel> inner) : inner_(std::move(inner)) {}

    std::string spec() const override { return "discrete(" + inner_->spec() + ")"; }
    void validate(const Element& e) const override { inner_->validate(e); }
    bool leq(const Element& a, const Element& b) const override { return a == b; }
    Rank rank(const Element& e) const override { return inner_->rank(e); }
    Element unrank(Rank r) const override { return inner_->unrank(r); }
    std::optional<Rank> cardinality() const override { return inner_->cardinality(); }
    std::string format(const Element& e) const override { return inner_->format(e); }
    Element parse_element(std::string_view t) const override { return inner_->parse_element(t); }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        m.height_bound = 1;
        if (auto n = inner_->cardinality()) {
            std::vector<Rank> all(*n);
            for (Rank i = 0; i < *n; ++i) all[i] = i;
            m.minimal_elements = std::move(all);
            if (*n == 1) {
                m.has_minimum = m.has_maximum = true;
                m.minimum_rank = m.maximum_rank = 0;
            }
        }
        return m;
    }

private:
    std::shared_ptr<const PosetModel> inner_;
};

/// A finite poset given by element names and a strict relation, closed
/// transitively on construction.
class FiniteModel final : public PosetModel {
public:
    FiniteModel(std::vector<std::string> names, std::vector<std::vector<bool>> lt, std::string label)
        : names_(std::move(names)), lt_(std::move(lt)), label_(std::move(label)) {}

    std::string spec() const override { return label_; }
    void validate(const Element& e) const override { (void)index(e); }
    bool leq(const Element& a, const Element& b) const override {
        const auto i = index(a), j = index(b);
        return i == j || lt_[i][j];
    }
    Rank rank(const Element& e) const override { return index(e); }
    Element unrank(Rank r) const override { return word(names_.at(r)); }
    std::optional<Rank> cardinality() const override { return names_.size(); }
    std::string format(const Element& e) const override { return std::get<std::string>(e); }
    Element parse_element(std::string_view t) const override {
        auto e = word(std::string(t));
        validate(e);
        return e;
    }
    PosetMetadata metadata() const override {
        PosetMetadata m;
        const std::size_t n = names_.size();
        std::vector<Rank> minimal;
        for (std::size_t i = 0; i < n; ++i) {
            bool is_min = true, is_least = true, is_greatest = true;
            for (std::size_t j = 0; j < n; ++j) {
                if (lt_[j][i]) is_min = false;
                if (j != i && !lt_[i][j]) is_least = false;
                if (j != i && !lt_[j][i]) is_greatest = false;
            }
            if (is_min) minimal.push_back(i);
            if (is_least) {
                m.has_minimum = true;
                m.minimum_rank = i;
            }
            if (is_greatest) {
                m.has_maximum = true;
                m.maximum_rank = i;
            }
        }
        m.minimal_elements = std::move(minimal);
        // longest chain by dynamic programming over a topological order
        std::vector<std::uint64_t> depth(n, 1);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        auto below = [&](std::size_t i) {
            std::size_t c = 0;
            for (std::size_t j = 0; j < n; ++j) c += lt_[j][i];
            return c;
        };
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return below(a) < below(b); });
        std::uint64_t height = n ? 1 : 0;
        for (auto i : order)
            for (auto j : order)
                if (lt_[j][i]) {
                    depth[i] = std::max(depth[i], depth[j] + 1);
                    height = std::max(height, depth[i]);
                }
        m.height_bound = height;
        return m;
    }

    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::vector<std::vector<bool>>& strict() const noexcept { return lt_; }

private:
    std::size_t index(const Element& e) const {
        const auto* s = std::get_if<std::string>(&e);
        if (!s) throw DomainError(label_ + ": expected an element name");
        auto it = std::find(names_.begin(), names_.end(), *s);
        if (it == names_.end()) throw DomainError(label_ + ": unknown element \"" + *s + "\"");
        return static_cast<std::size_t>(it - names_.begin());
    }

    std::vector<std::string> names_;
    std::vector<std::vector<bool>> lt_;
    std::string label_;
};

/// Transitive closure; throws ParseError on cycles.
inline std::vector<std::vector<bool>> close_strict(std::vector<std::vector<bool>> lt) {
    const std::size_t n = lt.size();
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            if (lt[i][k])
                for (std::size_t j = 0; j < n; ++j)
                    if (lt[k][j]) lt[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (lt[i][i]) throw ParseError("order relation has a cycle");
    return lt;
}

class SpecParser {
public:
    explicit SpecParser(std::string_view s) : s_(s) {}

    std::shared_ptr<const PosetModel> parse() {
        auto m = expr();
        if (pos_ != s_.size()) fail("trailing input");
        return m;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        std::string tok(s_.substr(pos_, std::min<std::size_t>(s_.size() - pos_, 12)));
        if (tok.empty()) tok = "<end>";
        throw ParseError("poset spec: " + why + " at '" + tok + "' (offset " + std::to_string(pos_) + ")");
    }

    bool eat(std::string_view lit) {
        if (s_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }

    std::string until_close() {
        const auto start = pos_;
        while (pos_ < s_.size() && s_[pos_] != ')') ++pos_;
        return std::string(s_.substr(start, pos_ - start));
    }

    std::shared_ptr<const PosetModel> expr() {
        if (eat("rev(")) {
            auto inner = expr();
            if (!eat(")")) fail("expected ')'");
            return std::make_shared<ReverseModel>(std::move(inner));
        }
        if (eat("discrete(")) {
            auto inner = expr();
            if (!eat(")")) fail("expected ')'");
            return std::make_shared<DiscreteModel>(std::move(inner));
        }
        if (eat("prefix:")) {
            const auto at = pos_;
            auto alpha = until_close();
            check_alphabet(alpha, at);
            return std::make_shared<WordModel>("prefix:" + alpha, alpha, std::vector<std::vector<bool>>{});
        }
        if (eat("lexico:")) {
            const auto at = pos_;
            return lexico(until_close(), at);
        }
        if (eat("reg:")) {
            const auto at = pos_;
            auto alpha = until_close();
            try {
                return std::make_shared<RegModel>(Alphabet(alpha));
            } catch (const ArgumentError& e) {
                pos_ = at;
                fail(e.what());
            }
        }
        if (eat("finsets")) return std::make_shared<FinsetsModel>();
        if (eat("nat")) return std::make_shared<NatModel>();
        if (eat("int")) return std::make_shared<IntModel>();
        fail("unknown poset");
    }

    void check_alphabet(const std::string& alpha, std::size_t at) {
        if (alpha.empty()) {
            pos_ = at;
            fail("empty alphabet");
        }
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            const char c = alpha[i];
            if (c == '(' || c == '<' || c == ';' || c == '/' || c == ',' || c == ' ' || alpha.find(c) != i) {
                pos_ = at + i;
                fail("bad alphabet symbol");
            }
        }
    }

    std::shared_ptr<const PosetModel> lexico(const std::string& expr, std::size_t at) {
        std::string alphabet;
        std::vector<std::pair<char, char>> pairs;
        std::vector<std::string> chains;
        std::stringstream ss(expr);
        std::string chain;
        std::size_t offset = at;
        while (std::getline(ss, chain, ';')) {
            std::string norm;
            for (std::size_t i = 0; i < chain.size(); ++i) {
                const bool sym_slot = i % 2 == 0;
                const char c = chain[i];
                if (sym_slot) {
                    if (c == '<' || c == ';' || c == '(' || c == '/' || c == ',' || c == ' ') {
                        pos_ = offset + i;
                        fail("expected a symbol");
                    }
                    if (alphabet.find(c) == std::string::npos) alphabet.push_back(c);
                    if (i >= 2) pairs.emplace_back(chain[i - 2], c);
                } else if (c != '<') {
                    pos_ = offset + i;
                    fail("expected '<'");
                }
            }
            if (chain.empty() || chain.size() % 2 == 0) {
                pos_ = offset + chain.size();
                fail("incomplete order chain");
            }
            chains.push_back(chain);
            offset += chain.size() + 1;
        }
        if (chains.empty()) {
            pos_ = at;
            fail("empty order expression");
        }
        std::vector<std::vector<bool>> lt(alphabet.size(), std::vector<bool>(alphabet.size(), false));
        for (auto [a, b] : pairs) lt[alphabet.find(a)][alphabet.find(b)] = true;
        try {
            lt = close_strict(std::move(lt));
        } catch (const ParseError&) {
            pos_ = at;
            fail("symbol order has a cycle");
        }
        std::string spec = "lexico:";
        for (std::size_t i = 0; i < chains.size(); ++i) spec += (i ? ";" : "") + chains[i];
        return std::make_shared<WordModel>(spec, alphabet, std::move(lt));
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace poset_detail

inline Poset Poset::reversed() const { return Poset(std::make_shared<poset_detail::ReverseModel>(model_)); }
inline Poset Poset::discrete() const { return Poset(std::make_shared<poset_detail::DiscreteModel>(model_)); }

/// `nat | int | prefix:<alphabet> | lexico:<order-expr> | finsets |
///  reg:<alphabet> | rev(<spec>) | discrete(<spec>)`
inline Poset parse_poset_spec(std::string_view spec) {
    return Poset(poset_detail::SpecParser(spec).parse());
}

/// Finite poset from `{"elements":[names...],"lt":[[i,j],...]}`; the
/// relation is closed transitively.
inline Poset finite_poset_from_json(const nlohmann::json& j, std::string label = "finite") {
    try {
        auto names = j.at("elements").get<std::vector<std::string>>();
        const std::size_t n = names.size();
        for (std::size_t i = 0; i < n; ++i)
            if (std::find(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i), names[i]) !=
                names.begin() + static_cast<std::ptrdiff_t>(i))
                throw ParseError("finite poset: duplicate element name \"" + names[i] + "\"");
        std::vector<std::vector<bool>> lt(n, std::vector<bool>(n, false));
        for (const auto& pr : j.at("lt")) {
            const auto a = pr.at(0).get<std::size_t>(), b = pr.at(1).get<std::size_t>();
            if (a >= n || b >= n) throw ParseError("finite poset: relation index out of range");
            lt[a][b] = true;
        }
        return Poset(std::make_shared<poset_detail::FiniteModel>(std::move(names),
                                                                 poset_detail::close_strict(std::move(lt)),
                                                                 std::move(label)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("finite poset JSON: ") + e.what());
    }
}

inline Poset finite_poset_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return finite_poset_from_json(j, "file:" + path);
}

// ---------------------------------------------------------------------------
// Order utilities on finite sets

/// The greatest element of S (above every member), if it exists.
inline std::optional<Element> finite_greatest(const Poset& p, const ElementSet& s) {
    for (const auto& g : s)
        if (std::all_of(s.begin(), s.end(), [&](const Element& x) { return p.leq(x, g); })) return g;
    return std::nullopt;
}

/// First d among ranks [0, bound) with s not <= d for every s in S.
inline std::optional<Element> escape_element(const Poset& p, const ElementSet& s, std::uint64_t bound) {
    const auto card = p.cardinality();
    for (Rank r = 0; r < bound && (!card || r < *card); ++r) {
        Element d = p.unrank(r);
        if (std::none_of(s.begin(), s.end(), [&](const Element& x) { return p.leq(x, d); })) return d;
    }
    return std::nullopt;
}

/// First d among ranks [0, bound) strictly above e.
inline std::optional<Element> first_strictly_above(const Poset& p, const Element& e, std::uint64_t bound) {
    const auto card = p.cardinality();
    for (Rank r = 0; r < bound && (!card || r < *card); ++r) {
        Element d = p.unrank(r);
        if (p.lt(e, d)) return d;
    }
    return std::nullopt;
}

}  // namespace kposet
