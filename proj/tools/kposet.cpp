// kposet: command-line front end. Every output embeds the run configuration
// and is written once, atomically; reruns with the same flags are
// byte-identical.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "kposet.hpp"

using namespace kposet;
using nlohmann::json;

namespace {

struct RunConfig {
    std::string command;
    std::string poset = "nat";
    std::string pair = "prefix:ab/lexico:a<b";
    // unset fields get the command's default after parsing
    std::uint64_t max_len = 0;
    std::uint64_t fuel = 4096;
    std::uint64_t t_budget = 0;
    std::uint64_t window = 0;
    std::uint64_t ranks = 0;
    std::string out;
    std::uint64_t seed = 0;
    std::uint64_t threads = 0;

    // command-specific
    std::string regex, alphabet = "ab", m_words, file, mode = "cap", set = "{}", program;
    std::uint64_t k = 3, i = 0, alpha_offset = 1, states = 1, t_max = 50, n = 0;

    Budget budget() const {
        Budget b;
        b.max_prog_len = max_len;
        b.fuel = fuel;
        b.t_budget = t_budget;
        b.window = window;
        b.check();
        return b;
    }

    std::vector<std::pair<std::string, std::string>> fields() const {
        std::vector<std::pair<std::string, std::string>> f{{"command", command}};
        auto num = [&](const char* k, std::uint64_t v) { f.emplace_back(k, std::to_string(v)); };
        if (command == "estimate") {
            f.emplace_back("poset", poset);
            num("max_len", max_len);
            num("fuel", fuel);
            num("t_budget", t_budget);
            num("window", window);
            num("ranks", ranks);
        } else if (command == "quotient") {
            f.emplace_back("regex", regex);
            f.emplace_back("alphabet", alphabet);
            f.emplace_back("m_words", m_words);
        } else if (command == "conditions") {
            f.emplace_back("pair", pair);
            num("k", k);
            num("max_len", max_len);
        } else if (command == "dilworth") {
            f.emplace_back("file", std::filesystem::path(file).filename().string());
        } else if (command == "diagonal") {
            f.emplace_back("pair", pair);
            num("i", i);
            num("alpha_offset", alpha_offset);
            num("t_budget", t_budget);
            num("window", window);
        } else if (command == "bb") {
            num("states", states);
            num("t_max", t_max);
        } else if (command == "cardre") {
            f.emplace_back("program", program);
            num("n", n);
            num("t_max", t_max);
            num("window", window);
        } else if (command == "interact") {
            f.emplace_back("program", program);
            f.emplace_back("mode", mode);
            f.emplace_back("set", set);
            num("t_budget", t_budget);
            num("window", window);
        }
        num("seed", seed);
        return f;
    }

    json to_json() const {
        json j = json::object();
        for (const auto& [k, v] : fields()) j[k] = v;
        return j;
    }

    std::vector<std::string> header() const {
        std::vector<std::string> h;
        for (const auto& [k, v] : fields()) h.push_back(k + "=" + v);
        return h;
    }
};

void write_output(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    const std::filesystem::path target(cfg.out);
    auto tmp = target;
    tmp += ".tmp";
    {
        std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
        if (!o) throw ArgumentError("cannot write " + tmp.string());
        o << text;
        if (!o.flush()) throw ArgumentError("cannot write " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw ArgumentError("cannot rename " + tmp.string() + " to " + target.string() + ": " + ec.message());
}

Poset load_poset(const std::string& spec) {
    if (!spec.empty() && spec[0] == '@') return finite_poset_from_file(spec.substr(1));
    return parse_poset_spec(spec);
}

std::pair<Poset, Poset> load_pair(const std::string& text) {
    const auto slash = text.find('/');
    if (slash == std::string::npos) throw ParseError("--pair must be WEAK/STRONG, got \"" + text + "\"");
    return {load_poset(text.substr(0, slash)), load_poset(text.substr(slash + 1))};
}

json names(const FinitePoset& fp, const Indices& s) {
    json a = json::array();
    for (auto v : s) a.push_back(fp.names[v]);
    return a;
}

json elements(const Poset& p, const ElementSet& s) {
    json a = json::array();
    for (const auto& d : s) a.push_back(p.format(d));
    return a;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

const poset_detail::WordModel* word_model(const Poset& p) {
    return dynamic_cast<const poset_detail::WordModel*>(&p.model());
}

// ---------------------------------------------------------------------------

void cmd_estimate(const RunConfig& cfg) {
    const auto p = load_poset(cfg.poset);
    const auto b = cfg.budget();
    if (auto c = p.cardinality(); c && cfg.ranks > *c)
        throw ArgumentError("--ranks " + std::to_string(cfg.ranks) + " exceeds the poset's " + std::to_string(*c) +
                            " elements");
    const auto h = estimate_hierarchy(p, cfg.ranks, b, cfg.threads);
    const auto s = summarize(p, h);
    std::ostringstream out;
    write_hierarchy_report(p, h, s, cfg.header(), out);
    write_output(cfg, out.str());
}

void cmd_quotient(const RunConfig& cfg) {
    const Alphabet sigma(cfg.alphabet);
    const auto ast = parse_regex(cfg.regex, sigma);
    if (!ast) throw ParseError("not a regular expression over \"" + cfg.alphabet + "\": \"" + cfg.regex + "\"");
    std::vector<std::string> words;
    std::stringstream ss(cfg.m_words);
    for (std::string w; std::getline(ss, w, ',');) words.push_back(w);
    if (cfg.m_words.empty() || cfg.m_words.back() == ',') words.push_back("");
    for (const auto& w : words)
        for (char c : w)
            if (!sigma.index_of(c)) throw ParseError("word \"" + w + "\" uses a symbol outside the alphabet");
    const auto lang = std::make_shared<const Dfa>(to_canonical_dfa(ast, sigma));
    const Element x = RegLang{lang};
    const auto tr = materialize(quotient_evaluator(list_enumerator(words)), x, words.size(), words.size());
    std::ostringstream out;
    for (const auto& line : cfg.header()) out << "# " << line << '\n';
    out << "t,quotient\n";
    for (std::size_t k = 0; k < tr.size(); ++k)
        if (k == 0 || !(tr[k].d == tr[k - 1].d))
            out << tr[k].t << ',' << complexity_detail::csv_field(canonical_regex(*std::get<RegLang>(tr[k].d).dfa))
                << '\n';
    const auto& fin = *std::get<RegLang>(tr.back().d).dfa;
    out << "# final=" << canonical_regex(fin) << '\n';
    out << "# states=" << lang->size() << " changes=" << count_changes(tr)
        << " equals_input=" << (fin == *lang ? "true" : "false") << '\n';
    write_output(cfg, out.str());
}

void cmd_conditions(const RunConfig& cfg) {
    const auto [weak, strong] = load_pair(cfg.pair);
    const auto* ww = word_model(weak);
    const auto* sw = word_model(strong);
    OrderPair pr;
    if (ww && sw) {
        if (ww->alphabet() != sw->alphabet()) throw ArgumentError("--pair: the two word orders use different alphabets");
        pr = word_fragment_pair(weak, strong, ww->alphabet().size(), cfg.max_len);
    } else {
        pr = fragment_pair(weak, strong, cfg.ranks);
    }
    json j;
    j["config"] = cfg.to_json();
    j["carrier"] = pr.strong.n;
    const auto star = check_star(pr, cfg.k);
    j["star_witness"] = star ? names(pr.strong, sort_as_chain(pr.strong, *star)) : json(nullptr);
    const auto dagger = cfg.k > 0 ? check_dagger(pr, cfg.k - 1) : std::optional<Indices>{};
    j["dagger_witness"] = dagger ? names(pr.strong, *dagger) : json(nullptr);
    j["dagger_k"] = cfg.k > 0 ? json(cfg.k - 1) : json(nullptr);
    j["family"] = nullptr;
    if (ww && sw && ww->is_prefix_order() && !sw->is_prefix_order() && ww->alphabet().size() >= 2) {
        const auto& a = ww->alphabet();
        const char lo = sw->symbol_lt(a[1], a[0]) ? a[1] : a[0];
        const char hi = lo == a[0] ? a[1] : a[0];
        try {
            j["family"] = elements(strong, chain_antichain_family(weak, strong, FamilyKind::prefix_vs_lexico, cfg.k, lo, hi));
        } catch (const Error&) {
            // the closed form does not apply to this symbol order
        }
    }
    write_output(cfg, dump(j));
}

void cmd_dilworth(const RunConfig& cfg) {
    const auto doc = load_json_file(cfg.file);
    const FinitePoset fp = doc.contains("weak") ? order_pair_from_json(doc).strong : finite_poset_from_json_matrix(doc);
    fp.check();
    const auto ac = max_antichain(fp);
    const auto cover = min_chain_cover(fp);
    json j;
    j["config"] = cfg.to_json();
    j["elements"] = fp.n;
    j["antichain"] = names(fp, ac);
    j["antichain_size"] = ac.size();
    j["cover"] = json::array();
    for (const auto& c : cover) j["cover"].push_back(names(fp, sort_as_chain(fp, c)));
    j["cover_size"] = cover.size();
    j["dilworth_equal"] = ac.size() == cover.size();
    write_output(cfg, dump(j));
}

const char* status_name(LimitStatus s) { return to_string(s); }

void cmd_diagonal(const RunConfig& cfg) {
    const auto [weak, strong] = load_pair(cfg.pair);
    const auto* ww = word_model(weak);
    if (!ww || ww->alphabet().size() < 2) throw ArgumentError("diagonal: --pair needs a word order over two symbols");
    Budget b;
    b.t_budget = b.fuel = cfg.t_budget;
    b.window = std::min(cfg.window, b.t_budget);
    b.check();
    const char lo = ww->alphabet()[0], hi = ww->alphabet()[1];
    const std::uint64_t off = cfg.alpha_offset;
    const auto a = diagonal_hard(weak, strong, word_family_generator(weak, strong, lo, hi),
                                 [off](std::uint64_t i) { return i + off; }, cfg.i, b, rankvm_weak_semantics(weak));
    json j;
    j["config"] = cfg.to_json();
    j["i"] = a.i;
    j["alpha"] = a.alpha;
    j["family_size"] = a.family.size();
    j["family_first"] = strong.format(a.family.front());
    j["family_last"] = strong.format(a.family.back());
    j["F"] = strong.format(a.f_value);
    j["G"] = strong.format(a.g_value);
    j["F_status"] = status_name(a.f_status);
    j["G_status"] = status_name(a.g_status);
    j["programs"] = a.programs;
    j["max_excluded"] = a.max_excluded;
    j["bound"] = a.bound;
    j["counting_ok"] = a.counting_ok;
    j["in_family"] = a.in_family;
    j["avoids_short_programs"] = a.avoids_short_programs;
    j["passed"] = a.passed();
    j["notes"] = a.notes;
    write_output(cfg, dump(j));
}

void cmd_bb(const RunConfig& cfg) {
    if (cfg.states == 0) throw ArgumentError("--states must be at least 1");
    const auto series = busy_beaver_series(cfg.states - 1, cfg.t_max);
    std::ostringstream out;
    for (const auto& line : cfg.header()) out << "# " << line << '\n';
    out << "t,bb\n";
    for (std::uint64_t t = 0; t < series.size(); ++t) out << t << ',' << series[t] << '\n';
    write_output(cfg, out.str());
}

BinaryWord program_arg(const RunConfig& cfg) {
    if (cfg.program.empty()) return b_word(cfg.n);
    if (cfg.program.find_first_not_of("01") == std::string::npos) return BinaryWord(cfg.program);
    return assemble(cfg.program);
}

void cmd_cardre(const RunConfig& cfg) {
    const auto code = program_arg(cfg);
    const auto n = b_index(code);
    const auto h = card_re_series(n, cfg.t_max);
    const auto window = std::min<std::uint64_t>(cfg.window, std::max<std::uint64_t>(cfg.t_max, 1));
    const auto rep = budgeted_limit(parse_poset_spec("nat"), card_re_evaluator(), n, cfg.t_max, cfg.t_max, window);
    std::ostringstream out;
    for (const auto& line : cfg.header()) out << "# " << line << '\n';
    out << "t,h\n";
    for (std::uint64_t t = 0; t < h.size(); ++t)
        if (t == 0 || h[t] != h[t - 1]) out << t << ',' << h[t] << '\n';
    out << "# code=" << code << " limit=" << h.back() << " status=" << to_string(rep.status) << '\n';
    write_output(cfg, out.str());
}

void cmd_interact(const RunConfig& cfg) {
    SetMode mode;
    if (cfg.mode == "cap")
        mode = SetMode::cap;
    else if (cfg.mode == "minus")
        mode = SetMode::minus;
    else if (cfg.mode == "setminus")
        mode = SetMode::setminus;
    else
        throw ArgumentError("--mode must be cap, minus or setminus");
    const Poset fs = parse_poset_spec("finsets");
    const Poset order = mode == SetMode::setminus ? fs.reversed() : fs;
    const Element x = fs.parse_element(cfg.set);
    const std::uint64_t t = cfg.t_budget;
    const auto e = set_interaction_evaluator(program_arg(cfg), mode);
    const auto rep = budgeted_limit(order, e, x, t, t, std::min(cfg.window, t));
    json j;
    j["config"] = cfg.to_json();
    j["order"] = order.spec();
    j["trace"] = json::array();
    for (const auto& pt : materialize(e, x, t, t))
        if (j["trace"].empty() || j["trace"].back()[1] != fs.format(pt.d)) j["trace"].push_back({pt.t, fs.format(pt.d)});
    j["limit"] = rep.current ? json(fs.format(*rep.current)) : json(nullptr);
    j["status"] = to_string(rep.status);
    write_output(cfg, dump(j));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Complexity and limit computations on computable posets"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto shared = [&](CLI::App* c) {
        c->add_option("--seed", cfg.seed, "Seed recorded in the report");
        c->add_option("--out", cfg.out, "Output file (default: stdout)");
    };
    auto budget = [&](CLI::App* c) {
        c->add_option("--max-len", cfg.max_len, "Longest program or code, in bits");
        c->add_option("--fuel", cfg.fuel, "VM steps per run");
        c->add_option("--t-budget", cfg.t_budget, "Time points per limit (default: fuel)");
        c->add_option("--window", cfg.window, "Stability window");
    };

    auto* est = app.add_subcommand("estimate", "k_plain / k_max / k_min report as CSV");
    est->add_option("--poset", cfg.poset, "Poset spec, or @file.json for a finite poset");
    est->add_option("--ranks", cfg.ranks, "Number of ranks to report (default 32)");
    est->add_option("--threads", cfg.threads, "Worker threads (0: all)");
    budget(est);
    shared(est);

    auto* quo = app.add_subcommand("quotient", "Trace of the quotient process M^-1 L");
    quo->add_option("--regex", cfg.regex, "Regular expression for L")->required();
    quo->add_option("--alphabet", cfg.alphabet, "Alphabet symbols");
    quo->add_option("--m-words", cfg.m_words, "Comma-separated words of M, in enumeration order");
    shared(quo);

    auto* con = app.add_subcommand("conditions", "(*) and (dagger) witnesses on a fragment of an order pair");
    con->add_option("--pair", cfg.pair, "WEAK/STRONG poset specs");
    con->add_option("--k", cfg.k, "Chain-antichain size");
    con->add_option("--max-len", cfg.max_len, "Word length of the fragment for word orders (default 3)");
    con->add_option("--ranks", cfg.ranks, "Ranks in the fragment for other orders (default 12)");
    shared(con);

    auto* dil = app.add_subcommand("dilworth", "Maximum antichain and minimum chain cover");
    dil->add_option("--file", cfg.file, "Finite poset JSON")->required();
    shared(dil);

    auto* dia = app.add_subcommand("diagonal", "Diagonal construction audit");
    dia->add_option("--pair", cfg.pair, "WEAK/STRONG word orders");
    dia->add_option("--i", cfg.i, "Index i");
    dia->add_option("--alpha-offset", cfg.alpha_offset, "alpha(i) = i + offset");
    dia->add_option("--t-budget", cfg.t_budget, "Time points (default 256)");
    dia->add_option("--window", cfg.window, "Stability window (default 64)");
    shared(dia);

    auto* bb = app.add_subcommand("bb", "Busy beaver series bb(n, t)");
    bb->add_option("--states", cfg.states, "Number of machine states (n + 1)");
    bb->add_option("--t-max", cfg.t_max, "Last time point");
    shared(bb);

    auto* card = app.add_subcommand("cardre", "Cardinality process of an enumerated set");
    card->add_option("--program", cfg.program, "Enumerator as bits or mnemonics");
    card->add_option("--n", cfg.n, "Enumerator as a program index");
    card->add_option("--t-max", cfg.t_max, "Last time point");
    card->add_option("--window", cfg.window, "Stability window (default 16)");
    shared(card);

    auto* inter = app.add_subcommand("interact", "X cap A, X - A, X \\ A for an enumerated set A");
    inter->add_option("--program", cfg.program, "Enumerator of A as bits or mnemonics");
    inter->add_option("--n", cfg.n, "Enumerator as a program index");
    inter->add_option("--mode", cfg.mode, "cap, minus or setminus");
    inter->add_option("--set", cfg.set, "The finite set X, e.g. {1,2}");
    inter->add_option("--t-budget", cfg.t_budget, "Time points (default 256)");
    inter->add_option("--window", cfg.window, "Stability window (default 16)");
    shared(inter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    cfg.command = app.get_subcommands().front()->get_name();
    CLI::App* sub = app.get_subcommands().front();
    // per-command defaults for flags that several commands share
    auto fill = [&](const char* flag, std::uint64_t& v, std::uint64_t d) {
        if (sub->count(flag) == 0) v = d;
    };
    if (cfg.command == "estimate") {
        fill("--max-len", cfg.max_len, 14);
        fill("--ranks", cfg.ranks, 32);
        fill("--t-budget", cfg.t_budget, cfg.fuel);
        fill("--window", cfg.window, 1024);
    } else if (cfg.command == "conditions") {
        fill("--max-len", cfg.max_len, 3);
        fill("--ranks", cfg.ranks, 12);
    } else if (cfg.command == "diagonal" || cfg.command == "interact") {
        fill("--t-budget", cfg.t_budget, 256);
        fill("--window", cfg.window, cfg.command == "diagonal" ? 64 : 16);
    } else if (cfg.command == "cardre") {
        fill("--window", cfg.window, 16);
    }

    try {
        if (cfg.command == "estimate") cmd_estimate(cfg);
        else if (cfg.command == "quotient") cmd_quotient(cfg);
        else if (cfg.command == "conditions") cmd_conditions(cfg);
        else if (cfg.command == "dilworth") cmd_dilworth(cfg);
        else if (cfg.command == "diagonal") cmd_diagonal(cfg);
        else if (cfg.command == "bb") cmd_bb(cfg);
        else if (cfg.command == "cardre") cmd_cardre(cfg);
        else if (cfg.command == "interact") cmd_interact(cfg);
    } catch (const ResourceError& e) {
        std::cerr << "kposet: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "kposet: " << e.what() << '\n';
        return 2;
    } catch (const ArgumentError& e) {
        std::cerr << "kposet: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "kposet: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "kposet: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
