#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "checks.hpp"
#include "json_io.hpp"

namespace kgraph::cli {

using io::json;

enum exit_code : int { ok = 0, failure = 1, violation = 2 };

// omega:k,m1,..,mk | lambda_n:n,tail | figure2:A|B
inline KGraph build_from_spec(const std::string& spec)
{
    const auto colon = spec.find(':');
    if (colon == std::string::npos) fail(errc::parse_error, "builder spec needs a ':' in '" + spec + "'");
    const std::string kind = spec.substr(0, colon), rest = spec.substr(colon + 1);
    std::vector<std::int64_t> nums;
    if (kind != "figure2") {
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                nums.push_back(std::stoll(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                fail(errc::parse_error, "bad integer '" + tok + "' in '" + spec + "'");
            }
        }
    }
    if (kind == "omega") {
        if (nums.empty() || nums[0] < 1 || nums.size() != static_cast<std::size_t>(nums[0]) + 1)
            fail(errc::parse_error, "omega needs k followed by k bounds");
        return build_omega(static_cast<std::size_t>(nums[0]), Degree(std::vector<std::int64_t>(nums.begin() + 1, nums.end())));
    }
    if (kind == "lambda_n") {
        if (nums.size() != 2) fail(errc::parse_error, "lambda_n needs n,tail");
        return build_lambda_n(static_cast<int>(nums[0]), static_cast<int>(nums[1]));
    }
    if (kind == "figure2") {
        if (rest == "A") return build_figure2(Figure2Regime::A);
        if (rest == "B") return build_figure2(Figure2Regime::B);
        fail(errc::parse_error, "figure2 regime must be A or B");
    }
    fail(errc::parse_error, "unknown builder '" + kind + "'");
}

struct Input {
    std::string file;
    std::string builder;

    KGraph load() const
    {
        if (file.empty() == builder.empty()) fail(errc::parse_error, "give exactly one of <file> or --builder");
        return builder.empty() ? io::load_graph(file) : build_from_spec(builder);
    }
};

inline json suite_json(const SuiteResult& r)
{
    return {{"name", r.name}, {"checked", r.checked}, {"failed", r.failed}, {"first_failure", r.first_failure}};
}

struct Outcome {
    json report;
    int code = ok;
    std::string summary;
};

// ---------------------------------------------------------------- subcommands

inline Outcome cmd_validate(const KGraph& g)
{
    json r{{"k", g.rank()},
           {"vertices", g.vertex_count()},
           {"edges", g.edge_count()},
           {"squares", g.regime().squares.size()},
           {"locally_convex", g.locally_convex()},
           {"no_sinks", g.no_sinks()},
           {"no_sources", g.no_sources()},
           {"truncation_vertex", g.truncation_vertex() ? json(g.vertex_name(*g.truncation_vertex())) : json(nullptr)}};
    return {r, ok,
            "valid " + std::to_string(g.rank()) + "-graph, " + std::to_string(g.vertex_count()) + " vertices, " +
                std::to_string(g.edge_count()) + " edges"};
}

inline Outcome cmd_trace(const KGraph& g, std::int64_t full_check)
{
    auto s = find_faithful_graph_trace(g);
    Outcome o{io::trace_report_json(g, s), ok, {}};
    std::vector<std::string> bad;
    if (s.trace) {
        const bool pass = is_graph_trace(*s.trace, g, FullUpTo{Degree::constant(g.rank(), full_check)});
        o.report["full_check"] = {{"level", full_check}, {"passed", pass}};
        if (!pass) bad.push_back("faithful trace fails the full check");
    }
    for (const auto& r : s.obstructions)
        if (!replay(r, g)) bad.push_back(std::string(obstruction_name(r.kind)) + " does not replay");
    if (s.trace && !s.obstructions.empty()) bad.push_back("faithful trace reported together with an obstruction");
    o.summary = s.trace ? "faithful graph trace found" : "no faithful graph trace";
    for (const auto& r : s.obstructions) o.summary += std::string("; ") + obstruction_name(r.kind);
    if (!bad.empty()) {
        o.code = violation;
        o.report["violations"] = bad;
    }
    return o;
}

inline Outcome cmd_ends(const KGraph& g)
{
    auto ends = find_ends(g);
    auto sc = check_sufficient_condition(g);
    json n = json::object();
    for (const auto& [v, d] : sc.n_map) n[g.vertex_name(v)] = d.coords();
    json r{{"ends", io::ends_json(g)},
           {"descriptors", ends.size()},
           {"sufficient_condition", {{"ok", sc.ok()}, {"n", n}, {"exhausted", io::vertex_names(g, sc.exhausted)}}}};
    const bool oracle = ends_agree_with_oracle(g, Degree::constant(g.rank(), 3));
    r["oracle_agrees"] = oracle;
    Outcome o{r, oracle ? ok : violation,
              std::to_string(end_classes(ends).size()) + " end class(es), sufficient condition " +
                  (sc.ok() ? "holds" : "fails")};
    return o;
}

inline Outcome cmd_ktheory(const KGraph& g)
{
    auto s = k_theory(g);
    return {io::ktheory_json(g, s), ok,
            "K0 rank " + std::to_string(s.k0_rank) + ", K1 rank " + std::to_string(s.k1_rank) + ", " +
                s.morita_description()};
}

inline Outcome cmd_algebra_check(const KGraph& g, std::int64_t cap_level, std::size_t samples, std::uint64_t seed)
{
    if (!g.locally_convex()) fail(errc::not_locally_convex, "the CK suites need a locally convex graph");
    const Degree cap = Degree::constant(g.rank(), cap_level);
    std::mt19937_64 rng(seed);
    auto search = find_faithful_graph_trace(g);
    GraphTrace tr = search.trace ? *search.trace
                    : search.nonfaithful ? *search.nonfaithful
                                         : GraphTrace(std::vector<Rational>(g.vertex_count(), Rational(0)));
    std::vector<SuiteResult> suites{ck_axioms_suite(g, cap), expectation_suite(g, cap, rng, samples),
                                    finite_rank_suite(g, cap), trace_property_suite(g, tr, cap, rng, samples)};
    if (!has_cycle(g)) suites.push_back(tau_tilde_suite(g, tr, cap, rng, samples));
    json arr = json::array();
    std::size_t failed = 0, checked = 0;
    for (const auto& s : suites) {
        arr.push_back(suite_json(s));
        failed += s.failed;
        checked += s.checked;
    }
    json r{{"degree_cap", cap_level},
           {"samples", samples},
           {"seed", seed},
           {"trace", search.trace ? "faithful" : search.nonfaithful ? "nonfaithful" : "zero"},
           {"suites", arr},
           {"passed", failed == 0}};
    return {r, failed == 0 ? ok : violation,
            std::to_string(checked) + " checks, " + std::to_string(failed) + " failed"};
}

inline Outcome cmd_dixmier(std::size_t k, std::int64_t nmax)
{
    auto e = spectral::dixmier_estimate(k, spectral::default_dixmier_list(nmax));
    std::ostringstream s;
    s << "C_" << k << " = " << e.target << ", fitted " << e.fitted << ", relative error " << e.rel_err();
    return {io::dixmier_json(e), ok, s.str()};
}

inline Outcome cmd_pair(const std::string& example, int n, std::size_t grid)
{
    if (example != "lambda_n") fail(errc::invalid_argument, "only --example lambda_n is available");
    if (grid < 8) fail(errc::invalid_argument, "--grid must be at least 8");
    const auto field = spectral::bott_projector(grid, grid);
    const double raw = spectral::chern_raw(field);
    const int chern = spectral::chern_number(field);
    const int stable = spectral::chern_number_stable(
        [](std::size_t g) { return spectral::bott_projector(g, g); }, {grid / 2, grid, grid * 2});
    const auto idx = spectral::truncated_index([](double p, double t) { return spectral::CMat(spectral::bott_closed_form(p, t)); }, 8);
    const int pairing = spectral::lambda_n_pairing(n, grid);
    const auto mult = lambda_n_core_multiplicity(n);

    auto r = io::pairing_json(chern, idx.index, pairing);
    r["n"] = n;
    r["multiplicity"] = mult;
    r["chern_raw"] = raw;
    r["grid"] = grid;
    r["kernel"] = idx.kernel;
    r["cokernel"] = idx.cokernel;
    std::vector<std::string> bad;
    if (std::abs(raw - chern) > 1e-6) bad.push_back("Chern number is not quantized to 1e-6");
    if (stable != chern) bad.push_back("Chern number changes across grids");
    if (idx.index != chern) bad.push_back("truncated index differs from the Chern number");
    if (pairing != -static_cast<int>(mult) * chern) bad.push_back("pairing differs from -multiplicity * chern");
    Outcome o{r, bad.empty() ? ok : violation,
              "pairing " + std::to_string(pairing) + " (multiplicity " + std::to_string(mult) + ", chern " +
                  std::to_string(chern) + ", index " + std::to_string(idx.index) + ")"};
    if (!bad.empty()) o.report["violations"] = bad;
    return o;
}

// ---------------------------------------------------------------- entry point

// JSON report on `out`, human summary on `err`.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"k-graph algebra toolkit"};
    app.require_subcommand(1, 1);

    Input in;
    auto add_input = [&](CLI::App* sub) {
        sub->add_option("file", in.file, "skeleton JSON file");
        sub->add_option("--builder", in.builder, "omega:k,m1,..,mk | lambda_n:n,tail | figure2:A|B");
    };
    auto* validate_cmd = app.add_subcommand("validate", "validate a skeleton and print its flags");
    add_input(validate_cmd);
    std::int64_t full_check = 2;
    auto* trace_cmd = app.add_subcommand("trace", "faithful graph trace or obstruction reports");
    add_input(trace_cmd);
    trace_cmd->add_option("--full-check", full_check, "level of the full graph trace check")->check(CLI::PositiveNumber);
    auto* ends_cmd = app.add_subcommand("ends", "ends, end classes and the sufficient condition");
    add_input(ends_cmd);
    auto* kt_cmd = app.add_subcommand("ktheory", "K-theory ranks from end groups");
    add_input(kt_cmd);
    std::int64_t cap = 2;
    std::size_t samples = 100;
    std::uint64_t seed = 1;
    auto* alg_cmd = app.add_subcommand("algebra-check", "CK, expectation, finite-rank and trace suites");
    add_input(alg_cmd);
    alg_cmd->add_option("--degree-cap", cap, "constant degree cap")->check(CLI::NonNegativeNumber);
    alg_cmd->add_option("--samples", samples, "random samples per suite");
    alg_cmd->add_option("--seed", seed, "random seed");
    std::size_t dk = 2;
    std::int64_t nmax = 100;
    auto* dix_cmd = app.add_subcommand("dixmier", "Dixmier constant estimate for the torus Dirac operator");
    dix_cmd->add_option("--k", dk, "torus dimension")->required()->check(CLI::Range(1, 6));
    dix_cmd->add_option("--nmax", nmax, "largest radius")->required()->check(CLI::Range(8, 100000));
    std::string example;
    int pn = 1;
    std::size_t grid = 64;
    auto* pair_cmd = app.add_subcommand("pair", "index pairing for a built-in example");
    pair_cmd->add_option("--example", example, "lambda_n")->required();
    pair_cmd->add_option("--n", pn, "n")->required()->check(CLI::Range(1, 64));
    pair_cmd->add_option("--grid", grid, "Chern grid size");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        err << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        out << json{{"error", "ParseError"}, {"message", e.what()}}.dump(2) << '\n';
        err << "error: " << e.what() << '\n';
        return failure;
    }

    try {
        Outcome o;
        if (*validate_cmd) o = cmd_validate(in.load());
        else if (*trace_cmd) o = cmd_trace(in.load(), full_check);
        else if (*ends_cmd) o = cmd_ends(in.load());
        else if (*kt_cmd) o = cmd_ktheory(in.load());
        else if (*alg_cmd) o = cmd_algebra_check(in.load(), cap, samples, seed);
        else if (*dix_cmd) o = cmd_dixmier(dk, nmax);
        else o = cmd_pair(example, pn, grid);
        out << o.report.dump(2) << '\n';
        err << o.summary << '\n';
        if (o.code == violation) err << "property violation\n";
        return o.code;
    } catch (const error& e) {
        out << io::error_json(e).dump(2) << '\n';
        err << "error: " << e.what() << '\n';
        return failure;
    }
}

} // namespace kgraph::cli
