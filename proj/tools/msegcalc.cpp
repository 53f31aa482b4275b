#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "msegcalc/distinction.hpp"
#include "msegcalc/dsl.hpp"
#include "msegcalc/solver.hpp"
#include "msegcalc/structure.hpp"
#include "msegcalc/verify.hpp"

using namespace msegcalc;
using Json = nlohmann::ordered_json;

namespace {

enum Exit { Ok = 0, Usage = 1, Partial = 2, VerifyFailed = 3 };

struct Options {
    std::string e = "inf";
    std::optional<int> ell;
    bool json = false;
    bool trace = false;
    std::string beta;
    int k = 1;
    std::string expr;
    std::vector<std::string> suites;
    bool list = false;
};

ModContext make_ctx(const Options& o) {
    if (o.e == "inf") return ModContext(o.ell.value_or(0), std::nullopt);
    int e = 0;
    try {
        std::size_t used = 0;
        e = std::stoi(o.e, &used);
        if (used != o.e.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw std::invalid_argument("--e expects a positive integer or 'inf'");
    }
    return ModContext(o.ell, e);
}

Json groth_json(const GrothElt& g) {
    Json terms = Json::array();
    for (const auto& [k, v] : g.terms)
        terms.push_back({{"label", render(k)}, {"multiplicity", v}, {"at_least", g.at_least.count(k) > 0}});
    return terms;
}

Json tuples_json(const TupleSum& t) {
    Json terms = Json::array();
    for (const auto& [k, v] : t.terms) {
        Json parts = Json::array();
        for (const auto& e : k) parts.push_back(render(e));
        terms.push_back({{"tuple", parts}, {"multiplicity", v}});
    }
    return terms;
}

Json header(const std::string& cmd, const Options& o, const ModContext& ctx) {
    Json j;
    j["schema"] = "msegcalc/1";
    j["command"] = cmd;
    j["context"] = {{"e", ctx.e_infinite() ? Json("inf") : Json(ctx.e())}, {"ell", ctx.ell() >= 0 ? Json(ctx.ell()) : Json(nullptr)}};
    if (!o.expr.empty()) j["input"] = o.expr;
    return j;
}

int emit(const Options& o, const Json& j, const std::string& text, int code) {
    if (o.json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
    return code;
}

Composition parse_beta(const std::string& s) {
    Composition c;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t used = 0;
        int v = std::stoi(part, &used);
        if (used != part.size() || v < 1) throw std::invalid_argument("--beta expects positive integers");
        c.push_back(v);
    }
    if (c.empty()) throw std::invalid_argument("--beta is empty");
    return c;
}

int cmd_classify(const Options& o, const ModContext& ctx, const Expr& x) {
    auto v = classify(x, ctx);
    Json j = header("classify", o, ctx);
    j["status"] = dstatus_name(v.status);
    if (v.dimension) j["dimension"] = *v.dimension;
    j["certificate"] = v.certificate;
    if (v.dual_hypothesis) j["dual_hypothesis"] = true;
    std::string text = std::string(dstatus_name(v.status));
    if (v.dimension) text += " (d = " + std::to_string(*v.dimension) + ")";
    text += "\n  " + v.certificate + "\n";
    if (v.dual_hypothesis) text += "  note: d = 2 is stated under two different hypotheses on ell\n";
    return emit(o, j, text, v.status == DStatus::Unknown ? Partial : Ok);
}

int cmd_semisimplify(const Options& o, const ModContext& ctx, const Expr& x) {
    auto s = semisimplify(x, ctx);
    Json j = header("semisimplify", o, ctx);
    if (!s.value) {
        j["status"] = "unknown";
        j["reason"] = s.reason;
        return emit(o, j, "unknown: " + s.reason + "\n", Partial);
    }
    bool partial = s.value->lower_bound();
    j["status"] = partial ? "partial" : "exact";
    j["terms"] = groth_json(*s.value);
    j["length"] = s.value->total();
    return emit(o, j, render(*s.value) + "\n", partial ? Partial : Ok);
}

int cmd_structure(const Options& o, const ModContext& ctx, const Expr& x) {
    auto r = structure_of(x, ctx);
    Json j = header("structure", o, ctx);
    j["known"] = r.known;
    j["reason"] = r.reason;
    if (!r.known) return emit(o, j, "unknown: " + r.reason + "\n", Partial);
    j["constituents"] = groth_json(r.constituents);
    j["length"] = r.length();
    if (r.socle) j["socle"] = render(*r.socle);
    if (r.cosocle) j["cosocle"] = render(*r.cosocle);
    if (!r.sequence.empty()) {
        Json seq = Json::array();
        for (const auto& s : r.sequence) seq.push_back(render(s));
        j["sequence"] = seq;
    }
    if (r.indecomposable) j["indecomposable"] = *r.indecomposable;
    if (r.semisimple) j["semisimple"] = *r.semisimple;
    if (!r.descriptor.empty()) j["descriptor"] = r.descriptor;
    std::string text = "constituents: " + render(r.constituents) + "\n";
    if (r.socle) text += "socle: " + render(*r.socle) + "\n";
    if (r.cosocle) text += "cosocle: " + render(*r.cosocle) + "\n";
    if (!r.sequence.empty()) {
        text += "series (bottom to top):";
        for (const auto& s : r.sequence) text += " " + render(s) + ";";
        text.pop_back();
        text += "\n";
    }
    if (r.indecomposable) text += std::string("indecomposable: ") + (*r.indecomposable ? "yes" : "no") + "\n";
    if (r.semisimple) text += std::string("semisimple: ") + (*r.semisimple ? "yes" : "no") + "\n";
    text += "reason: " + r.reason + "\n";
    return emit(o, j, text, r.length_exact() ? Ok : Partial);
}

int cmd_jacquet(const Options& o, const ModContext& ctx, const Expr& x) {
    Composition beta = o.beta.empty() ? ones(x.degree()) : parse_beta(o.beta);
    int total = 0;
    for (int b : beta) total += b;
    if (total != x.degree())
        throw std::invalid_argument("--beta sums to " + std::to_string(total) + ", expression has degree " +
                                    std::to_string(x.degree()));
    auto t = geometric_lemma(x, beta, ctx);
    Json j = header("jacquet", o, ctx);
    j["beta"] = beta;
    if (!t) {
        j["status"] = "unknown";
        return emit(o, j, "unknown: a factor has no computable Jacquet module\n", Partial);
    }
    j["status"] = "exact";
    j["terms"] = tuples_json(*t);
    j["length"] = t->total();
    return emit(o, j, render(*t) + "\n", Ok);
}

int cmd_derive(const Options& o, const ModContext& ctx, const Expr& x) {
    if (o.k < 0 || o.k > x.degree()) throw std::invalid_argument("--k must lie between 0 and the degree");
    auto d = derivative(x, o.k, ctx);
    Json j = header("derive", o, ctx);
    j["k"] = o.k;
    if (!d) {
        j["status"] = "unknown";
        return emit(o, j, "unknown: no closed form for a factor\n", Partial);
    }
    j["status"] = d->lower_bound() ? "partial" : "exact";
    j["terms"] = groth_json(*d);
    return emit(o, j, render(*d) + "\n", d->lower_bound() ? Partial : Ok);
}

int cmd_irreducible(const Options& o, const ModContext& ctx, const Expr& x) {
    auto v = is_irreducible_product(x, ctx);
    const char* name = v.status == Tri::Irreducible ? "irreducible" : v.status == Tri::Reducible ? "reducible" : "unknown";
    Json j = header("irreducible", o, ctx);
    j["status"] = name;
    j["reason"] = v.reason;
    if (v.key) j["label"] = render(*v.key);
    std::string text = std::string(name) + (v.key ? " = " + render(*v.key) : "") + "\n  " + v.reason + "\n";
    return emit(o, j, text, v.status == Tri::Unknown ? Partial : Ok);
}

int cmd_solve(const Options& o, const ModContext& ctx, const Expr& x) {
    auto d = decompose(x, ctx);
    Json j = header("solve", o, ctx);
    j["status"] = d.exact ? "exact" : "partial";
    j["terms"] = groth_json(d.value);
    if (d.jacquet_length) j["jacquet_length"] = *d.jacquet_length;
    if (!d.notes.empty()) j["notes"] = d.notes;
    std::string text = render(d.value) + (d.exact ? "" : "  (partial)") + "\n";
    for (const auto& n : d.notes) text += "  note: " + n + "\n";
    if (o.trace) {
        Json tr = Json::array();
        text += "candidates:\n";
        for (const auto& t : trace_of(d)) {
            tr.push_back({{"candidate", t.candidate}, {"mu", t.mu}, {"st", t.st},
                          {"multiplicity", t.multiplicity}, {"verdict", t.verdict}});
            text += "  " + t.candidate;
            if (!t.mu.empty()) text += "  mu=" + t.mu;
            if (!t.multiplicity.empty()) text += "  St-mult=" + t.multiplicity;
            text += "  " + t.verdict + "\n";
        }
        j["trace"] = tr;
    }
    return emit(o, j, text, d.exact ? Ok : Partial);
}

int cmd_dual(const Options& o, const ModContext& ctx, const Expr& x) {
    Expr d = product_key(dual(x), ctx);
    Json j = header("dual", o, ctx);
    j["result"] = render(d);
    return emit(o, j, render(d) + "\n", Ok);
}

int cmd_verify(const Options& o) {
    if (o.list) {
        for (const auto& s : suites()) std::cout << s.name << "\t" << s.summary << "\n";
        return Ok;
    }
    std::vector<const SuiteInfo*> run;
    if (o.suites.empty() || (o.suites.size() == 1 && o.suites[0] == "all")) {
        for (const auto& s : suites()) run.push_back(&s);
    } else {
        for (const auto& n : o.suites) {
            const SuiteInfo* s = find_suite(n);
            if (!s) throw std::invalid_argument("unknown suite '" + n + "' (see verify --list)");
            run.push_back(s);
        }
    }
    Json j;
    j["schema"] = "msegcalc/1";
    j["command"] = "verify";
    Json arr = Json::array();
    bool ok = true;
    std::string text;
    for (const auto* s : run) {
        CheckResult r = s->run();
        ok = ok && r.pass;
        arr.push_back({{"suite", s->name}, {"criterion", s->criterion}, {"pass", r.pass}, {"checked", r.checked},
                       {"failed", r.failed}, {"detail", r.detail}, {"failures", r.failures}});
        text += s->name + ": " + (r.pass ? "PASS" : "FAIL") + " (" + std::to_string(r.checked - r.failed) + "/" +
                std::to_string(r.checked) + ") " + r.detail + "\n";
        for (const auto& f : r.failures) text += "    " + f + "\n";
    }
    j["suites"] = arr;
    j["pass"] = ok;
    return emit(o, j, text, ok ? Ok : VerifyFailed);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modular multisegment calculus for GL_n"};
    app.require_subcommand(1);
    Options o;
    app.add_option("--e", o.e, "order of q in the coefficient field: a positive integer or 'inf'")->capture_default_str();
    app.add_option("--ell", o.ell, "characteristic of the coefficient field; required with --e 1");
    app.add_flag("--json", o.json, "emit JSON");

    auto expr_cmd = [&](const std::string& name, const std::string& help) {
        auto* c = app.add_subcommand(name, help);
        c->add_option("expr", o.expr, "expression, e.g. \"Z[1,3] x nu^1 x 1_1\"")->required();
        return c;
    };
    auto* classify_c = expr_cmd("classify", "decide distinction by the mirabolic-type subgroup GL_{n-1}");
    auto* ss_c = expr_cmd("semisimplify", "semisimplification in the Grothendieck group");
    auto* structure_c = expr_cmd("structure", "constituents, socle, cosocle and composition series");
    auto* jacquet_c = expr_cmd("jacquet", "semisimplified Jacquet module by the geometric lemma");
    jacquet_c->add_option("--beta", o.beta, "composition, e.g. 3,2 (default 1,...,1)");
    auto* derive_c = expr_cmd("derive", "k-th derivative");
    derive_c->add_option("--k", o.k, "order of the derivative")->capture_default_str();
    auto* irr_c = expr_cmd("irreducible", "decide irreducibility of a product");
    auto* solve_c = expr_cmd("solve", "decompose a product by candidate elimination");
    solve_c->add_flag("--trace", o.trace, "print every candidate with its verdict");
    auto* dual_c = expr_cmd("dual", "contragredient");
    auto* verify_c = app.add_subcommand("verify", "run the built-in verification suites");
    verify_c->add_option("suites", o.suites, "suite names, or 'all'");
    verify_c->add_flag("--list", o.list, "list the suites");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? Ok : Usage;
    }

    try {
        if (verify_c->parsed()) return cmd_verify(o);
        ModContext ctx = make_ctx(o);
        Expr x = parse_expr(o.expr, ctx);
        if (classify_c->parsed()) return cmd_classify(o, ctx, x);
        if (ss_c->parsed()) return cmd_semisimplify(o, ctx, x);
        if (structure_c->parsed()) return cmd_structure(o, ctx, x);
        if (jacquet_c->parsed()) return cmd_jacquet(o, ctx, x);
        if (derive_c->parsed()) return cmd_derive(o, ctx, x);
        if (irr_c->parsed()) return cmd_irreducible(o, ctx, x);
        if (solve_c->parsed()) return cmd_solve(o, ctx, x);
        if (dual_c->parsed()) return cmd_dual(o, ctx, x);
    } catch (const ParseError& e) {
        if (o.json) {
            Json j{{"schema", "msegcalc/1"}, {"error", e.what()}, {"position", e.pos}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cerr << o.expr << "\n" << std::string(e.pos, ' ') << "^\n" << e.what() << "\n";
        }
        return Usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Usage;
    }
    return Usage;
}
