#pragma once

// Command-line driver. run() never calls exit(); it returns the process exit code:
//   0  the command produced a value or its verification passed
//   1  a verification failed
//   2  usage error (bad flags, unreadable input, malformed expression)

#include <cstdlib>
#include <future>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "atlas.hpp"
#include "cech.hpp"
#include "families.hpp"
#include "io.hpp"
#include "properties.hpp"
#include "supermat.hpp"
#include "text.hpp"

namespace supergeo::cli {

inline constexpr const char* version = "1.0.0";

enum class Outcome { pass, fail, value };

inline const char* outcome_name(Outcome o)
{
    switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::value: return "value";
    }
    return "value";
}

/// Result of one subcommand. `result` keys are also copied to the top level of the JSON form.
struct Report {
    std::string command;
    Json inputs = Json::object();
    Outcome outcome = Outcome::value;
    std::string outcome_label;  // overrides the outcome name in the output when set
    Json result = Json::object();
    Json details = Json::object();

    Json to_json() const
    {
        Json j = result;
        j["command"] = command;
        j["inputs"] = inputs;
        j["outcome"] = outcome_label.empty() ? outcome_name(outcome) : outcome_label;
        j["details"] = details;
        j["version"] = version;
        j["exact"] = true;
        return j;
    }

    int exit_code() const { return outcome == Outcome::fail ? 1 : 0; }
};

namespace detail {

inline void write_text_value(std::ostream& out, const std::string& key, const Json& v, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    if (v.is_object() && !v.empty()) {
        out << pad << key << ":\n";
        for (const auto& [k, x] : v.items()) write_text_value(out, k, x, indent + 1);
    } else if (v.is_array() && !v.empty() && (v.front().is_object() || v.front().is_array())) {
        out << pad << key << ":\n";
        for (std::size_t i = 0; i < v.size(); ++i) write_text_value(out, "[" + std::to_string(i) + "]", v[i], indent + 1);
    } else if (v.is_string()) {
        out << pad << key << ": " << v.get<std::string>() << '\n';
    } else {
        out << pad << key << ": " << v.dump() << '\n';
    }
}

inline void write_report(std::ostream& out, const Report& r, bool json)
{
    if (json) {
        out << r.to_json().dump(2) << '\n';
        return;
    }
    out << r.command << ": " << (r.outcome_label.empty() ? outcome_name(r.outcome) : r.outcome_label) << '\n';
    for (const auto& [k, v] : r.result.items()) write_text_value(out, k, v, 1);
    if (!r.details.empty()) write_text_value(out, "details", r.details, 1);
}

struct FamilyArgs {
    std::string family = "decomposable";
    std::string lambda = "1";
    std::string cocycle_file;
    std::string atlas_file;
};

inline void add_family_flags(CLI::App* sub, FamilyArgs& a, bool with_lambda = true)
{
    sub->add_option("--family", a.family,
                    "decomposable | omega1 | pi-plane | generic | decomposable-literal | omega1-literal | split-minus-one")
        ->capture_default_str();
    if (with_lambda) sub->add_option("--lambda", a.lambda, "obstruction parameter, rational such as 3/2")->capture_default_str();
    sub->add_option("--cocycle", a.cocycle_file, "matrix cocycle JSON (required for --family generic)");
    sub->add_option("--atlas", a.atlas_file, "load the atlas from a JSON file instead of a family");
}

struct UsageError : error {
    using error::error;
};

inline Json load_json(const std::string& path)
{
    try {
        return read_json_file(path);
    } catch (const parse_error&) {
        throw;
    } catch (const error& e) {
        throw UsageError(e.what());
    }
}

inline Atlas build_family(const FamilyArgs& a)
{
    if (!a.atlas_file.empty()) return atlas_from_json(load_json(a.atlas_file));
    const Rational lambda = parse_rational(a.lambda);
    if (a.family == "decomposable") return build_decomposable(lambda);
    if (a.family == "omega1") return build_omega1(lambda);
    if (a.family == "pi-plane") return build_pi_plane();
    if (a.family == "decomposable-literal") return build_decomposable_literal(lambda);
    if (a.family == "omega1-literal") return build_omega1_literal(lambda);
    if (a.family == "split-minus-one") return build_split_minus_one();
    if (a.family == "generic") {
        if (a.cocycle_file.empty()) throw UsageError("--family generic needs --cocycle FILE");
        return build_generic(matrix_cocycle_from_json(load_json(a.cocycle_file)), lambda);
    }
    throw UsageError("unknown family '" + a.family + "'");
}

inline Json family_inputs(const FamilyArgs& a, const Atlas& atlas)
{
    Json j{{"family", atlas.family}, {"lambda", to_string(atlas.lambda)}};
    if (!a.atlas_file.empty()) j["atlas"] = a.atlas_file;
    if (!a.cocycle_file.empty()) j["cocycle"] = a.cocycle_file;
    return j;
}

inline Json loop_json(const LoopReport& r)
{
    Json residuals = Json::object();
    for (const auto& res : r.residuals) residuals[res.coordinate] = format(res.value);
    Json j{{"closed", r.closed}, {"defined", r.defined}, {"residuals", residuals}, {"failing", r.failing()}};
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

inline Json basis_json(const std::vector<HomMonomial>& basis)
{
    Json out = Json::array();
    for (const auto& m : basis) out.push_back(format_monomial(m));
    return out;
}

inline std::string pair_label(int i, int j)
{
    return std::to_string(i) + "<-" + std::to_string(j);
}

} // namespace detail

/// Parses `args` (without the program name), runs one subcommand and writes its report.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact verification of 2|2 supermanifolds over P^2", "supergeo"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false;
    app.add_flag("--json", json, "write the report as JSON");
    app.set_version_flag("--version", version);

    Report report;
    std::function<void()> action;

    int n = 2;
    int k = -3;
    int q = 2;
    int p = 1;

    auto* cohomology = app.add_subcommand("cohomology", "dimension and monomial basis of H^q(P^n, O(k))");
    cohomology->add_option("--n", n, "projective dimension")->required();
    cohomology->add_option("--k", k, "twist")->required()->allow_extra_args(false);
    cohomology->add_option("--q", q, "cohomological degree")->required();
    cohomology->callback([&] {
        action = [&] {
            report.command = "cohomology";
            report.inputs = {{"n", n}, {"k", k}, {"q", q}};
            report.result = {{"n", n}, {"k", k}, {"q", q}, {"dim", h_line(n, k, q)},
                             {"basis", detail::basis_json(cohomology_basis(n, k, q))}};
        };
    });

    auto* bott_cmd = app.add_subcommand("bott", "dimension of H^q(P^n, Omega^p(k)) by the Bott formula");
    bott_cmd->add_option("--n", n, "projective dimension")->required();
    bott_cmd->add_option("--p", p, "form degree")->required();
    bott_cmd->add_option("--k", k, "twist")->required();
    bott_cmd->add_option("--q", q, "cohomological degree")->required();
    bott_cmd->callback([&] {
        action = [&] {
            report.command = "bott";
            report.inputs = {{"n", n}, {"p", p}, {"k", k}, {"q", q}};
            report.result = {{"dim", bott(n, p, k, q)}};
        };
    });

    auto* h1 = app.add_subcommand("h1-tangent", "dimension of H^1(P^n, T(k)); on P^2 by two independent methods");
    h1->add_option("--n", n, "projective dimension")->required();
    h1->add_option("--k", k, "twist")->required();
    h1->callback([&] {
        action = [&] {
            report.command = "h1-tangent";
            report.inputs = {{"n", n}, {"k", k}};
            const long dim = h1_tangent(n, k);
            report.result = {{"dim", dim}};
            if (n == 2) {
                const long dual = h1_tangent_bott(k);
                report.details = {{"euler_kernel", dim}, {"bott_serre", dual}, {"agree", dim == dual}};
                report.outcome = dim == dual ? Outcome::value : Outcome::fail;
            }
        };
    });

    detail::FamilyArgs fam;
    bool print_atlas = false;
    int corrupt = -1;
    auto* verify = app.add_subcommand("verify-atlas", "check that the cyclic composition of transition maps is the identity");
    detail::add_family_flags(verify, fam);
    verify->add_flag("--print-atlas", print_atlas, "include the atlas JSON in the report");
    verify->add_option("--corrupt", corrupt, "flip the sign of the lambda term on cyclic overlap 0, 1 or 2");
    verify->callback([&] {
        action = [&] {
            Atlas atlas = detail::build_family(fam);
            if (corrupt >= 0) {
                if (corrupt > 2) throw detail::UsageError("--corrupt must be 0, 1 or 2");
                atlas = corrupt_lambda_sign(atlas, static_cast<std::size_t>(corrupt));
            }
            report.command = "verify-atlas";
            report.inputs = detail::family_inputs(fam, atlas);
            if (corrupt >= 0) report.inputs["corrupt"] = corrupt;
            const LoopReport loop = check_cocycle_loop(atlas);
            report.result = {{"closed", loop.closed}};
            report.details = {{"loop", detail::loop_json(loop)}};
            if (fam.atlas_file.empty() && corrupt < 0 && (fam.family == "decomposable" || fam.family == "omega1")) {
                const Rational lambda = parse_rational(fam.lambda);
                const Atlas literal = fam.family == "decomposable" ? build_decomposable_literal(lambda) : build_omega1_literal(lambda);
                report.details["literal_2_0_odd_block"] = {
                    {"images", {{"t12", format(literal.maps[2].image("t12"))}, {"t22", format(literal.maps[2].image("t22"))}}},
                    {"loop", detail::loop_json(check_cocycle_loop(literal))}};
                report.details["cocycle_2_0_odd_block"] = {
                    {"t12", format(atlas.maps[2].image("t12"))}, {"t22", format(atlas.maps[2].image("t22"))}};
            }
            if (print_atlas) report.details["atlas"] = to_json(atlas);
            report.outcome = loop.closed ? Outcome::pass : Outcome::fail;
        };
    });

    std::vector<int> pair{0, 1};
    auto* ber = app.add_subcommand("berezinian", "Berezinian of the Jacobian of one transition map");
    detail::add_family_flags(ber, fam);
    ber->add_option("--pair", pair, "target and source chart, e.g. --pair 0 1")->expected(2)->capture_default_str();
    ber->callback([&] {
        action = [&] {
            const Atlas atlas = detail::build_family(fam);
            if (pair.size() != 2) throw detail::UsageError("--pair needs two chart ids");
            for (int c : pair) {
                if (c < 0 || c >= static_cast<int>(atlas.size())) throw detail::UsageError("--pair: chart id out of range");
            }
            const TransitionMap m = atlas.transition(pair[0], pair[1]);
            const SuperElem value = berezinian(jacobian(m));
            report.command = "berezinian";
            report.inputs = detail::family_inputs(fam, atlas);
            report.inputs["pair"] = pair;
            report.result = {{"value", format(value)}};
            report.details = {{"constant", value.is_constant()}, {"cross_check", format(berezinian_via_a(jacobian(m)))}};
        };
    });

    auto* cy = app.add_subcommand("calabi-yau", "Berezinians of all cyclic transition maps; flags a trivial Berezinian sheaf");
    detail::add_family_flags(cy, fam);
    cy->callback([&] {
        action = [&] {
            const Atlas atlas = detail::build_family(fam);
            const CalabiYauReport r = is_calabi_yau(atlas);
            report.command = "calabi-yau";
            report.inputs = detail::family_inputs(fam, atlas);
            Json values = Json::object();
            for (const auto& e : r.entries) values[detail::pair_label(e.target, e.source)] = format(e.value);
            report.result = {{"calabi_yau", r.calabi_yau}, {"berezinians", values}};
            report.outcome = r.calabi_yau ? Outcome::pass : Outcome::fail;
        };
    });

    auto* obs = app.add_subcommand("obstruction", "class in H^2(O(-3)) of the connecting map applied to the obstruction cocycle");
    detail::add_family_flags(obs, fam);
    obs->callback([&] {
        action = [&] {
            const Atlas atlas = detail::build_family(fam);
            const ObstructionReport r = obstruction_delta(atlas);
            report.command = "obstruction";
            report.inputs = detail::family_inputs(fam, atlas);
            report.result = {{"class", to_json(r.cls)}, {"projected", r.cls.is_zero()}};
            report.details = {{"euler_factor", to_json(r.h)}};
        };
    });

    std::string lift = "standard";
    auto* pic = app.add_subcommand("picard-chase", "image of [O(1)] under the connecting map Pic -> H^2(O(-3))");
    detail::add_family_flags(pic, fam);
    pic->add_option("--lift", lift, "standard (z11, z22, z20) or trivial (1, 1, 1)")->capture_default_str();
    pic->callback([&] {
        action = [&] {
            const Atlas atlas = detail::build_family(fam);
            if (lift != "standard" && lift != "trivial") throw detail::UsageError("--lift must be standard or trivial");
            const PicardLift l = lift == "standard" ? standard_picard_lift() : trivial_picard_lift();
            const PicardReport r = picard_delta(atlas, l);
            report.command = "picard-chase";
            report.inputs = detail::family_inputs(fam, atlas);
            report.inputs["lift"] = lift;
            report.result = {{"class", to_json(r.cls)}};
            report.details = {{"coboundary", format(r.coboundary)}};
            report.outcome_label = r.cls.is_zero() ? "projected/split branch" : "non-projective branch";
        };
    });

    auto* omega = app.add_subcommand("omega-cocycle", "push the three obstruction fields into chart 0 and add them");
    detail::add_family_flags(omega, fam);
    omega->callback([&] {
        action = [&] {
            const Atlas atlas = detail::build_family(fam);
            const OmegaSumReport r = omega_cocycle_sum(atlas);
            report.command = "omega-cocycle";
            report.inputs = detail::family_inputs(fam, atlas);
            Json terms = Json::object();
            for (std::size_t i = 0; i < r.terms.size(); ++i) {
                terms[detail::pair_label(atlas.maps[i].target().id, atlas.maps[i].source().id)] = to_json(r.terms[i]);
            }
            report.result = {{"zero", r.zero}};
            report.details = {{"terms_in_chart_0", terms}, {"sum", to_json(r.sum)}};
            report.outcome = r.zero ? Outcome::pass : Outcome::fail;
        };
    });

    auto* pi = app.add_subcommand("pi-plane-compare", "compare the big-cell atlas of the Pi-projective plane with omega1 at lambda = 1");
    pi->callback([&] {
        action = [&] {
            const Atlas a = build_pi_plane();
            const Atlas b = build_omega1(1);
            Json cmp = Json::object();
            long identical = 0;
            for (std::size_t i = 0; i < a.maps.size(); ++i) {
                for (std::size_t c = 0; c < a.maps[i].images().size(); ++c) {
                    const bool same = a.maps[i].image(c) == b.maps[i].image(c);
                    identical += same ? 1 : 0;
                    cmp[detail::pair_label(a.maps[i].target().id, a.maps[i].source().id) + " " + a.maps[i].coordinate_name(c)] =
                        {{"pi_plane", format(a.maps[i].image(c))}, {"omega1", format(b.maps[i].image(c))}, {"identical", same}};
                }
            }
            const bool equal = atlas_equal(a, b);
            report.command = "pi-plane-compare";
            report.result = {{"equal", equal}, {"identical_assignments", identical}};
            report.details = {{"assignments", cmp}};
            report.outcome = equal ? Outcome::pass : Outcome::fail;
        };
    });

    long sym_k = 1;
    auto* sym = app.add_subcommand("sym-rank", "rank of Sym^k of the tangent sheaf restricted to P^2");
    sym->add_option("--k", sym_k, "symmetric power, at least 1")->required();
    sym->callback([&] {
        action = [&] {
            const SuperRank r = sym_restricted_rank(sym_k);
            report.command = "sym-rank";
            report.inputs = {{"k", sym_k}};
            report.result = {{"even", r.even}, {"odd", r.odd}};
        };
    });

    std::string expr;
    int chart = 1;
    std::vector<std::string> even_names;
    std::vector<std::string> odd_names;
    std::vector<std::string> params;
    auto* parse_cmd = app.add_subcommand("parse", "parse an expression and print its canonical form");
    parse_cmd->add_option("expr", expr, "expression")->required();
    parse_cmd->add_option("--chart", chart, "use the variables of P^2 chart 0, 1 or 2")->capture_default_str();
    parse_cmd->add_option("--even", even_names, "even variable names (overrides --chart)")->delimiter(',');
    parse_cmd->add_option("--odd", odd_names, "odd variable names (overrides --chart)")->delimiter(',');
    parse_cmd->add_option("--param", params, "parameter binding name=rational, e.g. l=1")->delimiter(',');
    parse_cmd->callback([&] {
        action = [&] {
            TablePtr table;
            if (!even_names.empty() || !odd_names.empty()) {
                table = make_table(even_names, odd_names);
            } else {
                if (chart < 0 || chart > 2) throw detail::UsageError("--chart must be 0, 1 or 2");
                table = p2_chart(chart).table;
            }
            ParamMap bound;
            for (const auto& s : params) {
                const auto eq = s.find('=');
                if (eq == std::string::npos || eq == 0) throw detail::UsageError("--param expects name=value");
                bound[s.substr(0, eq)] = parse_rational(s.substr(eq + 1));
            }
            const SuperElem e = parse(expr, table, bound);
            report.command = "parse";
            report.inputs = {{"expr", expr}, {"even", table->even_names()}, {"odd", table->odd_names()}};
            const auto par = e.parity();
            report.result = {{"canonical", format(e)},
                             {"terms", e.size()},
                             {"parity", par ? (*par == Parity::even ? "even" : "odd") : "mixed"}};
            report.details = {{"min_j_degree", e.min_j_degree() ? Json(*e.min_j_degree()) : Json(nullptr)},
                              {"round_trip", parse(format(e), table) == e}};
        };
    });

    long cases = 10000;
    auto* self = app.add_subcommand("selftest", "randomized algebraic property checks (seed from SUPERGEO_SEED)");
    self->add_option("--cases", cases, "total number of random cases")->capture_default_str();
    self->callback([&] {
        action = [&] {
            std::uint64_t seed = default_seed;
            if (const char* env = std::getenv("SUPERGEO_SEED"); env != nullptr && *env != '\0') {
                try {
                    seed = std::stoull(env);
                } catch (const std::exception&) {
                    throw detail::UsageError("SUPERGEO_SEED must be a nonnegative integer");
                }
            }
            if (cases < 1) throw detail::UsageError("--cases must be positive");
            const auto results = run_properties(seed, cases);
            Json props = Json::object();
            bool ok = true;
            long total = 0;
            for (const auto& r : results) {
                Json entry{{"cases", r.cases}, {"failures", r.failures}};
                if (!r.first_failure.empty()) entry["first_failure"] = r.first_failure;
                props[r.name] = entry;
                ok = ok && r.ok();
                total += r.cases;
            }
            report.command = "selftest";
            report.inputs = {{"cases", cases}, {"seed", seed}};
            report.result = {{"total_cases", total}, {"properties", props}};
            report.outcome = ok ? Outcome::pass : Outcome::fail;
        };
    });

    std::vector<std::string> argv_store{"supergeo"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << version << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n\n";
        const CLI::App* failed = &app;
        for (const auto* s : app.get_subcommands()) failed = s;
        err << failed->help();
        return 2;
    }

    if (!action) {
        err << app.help();
        return 2;
    }
    try {
        action();
    } catch (const detail::UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const parse_error& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const error& e) {
        // Library precondition failures are verification failures of the requested object.
        report.outcome = Outcome::fail;
        report.details["error"] = e.what();
        if (report.command.empty()) report.command = app.get_subcommands().front()->get_name();
    }
    detail::write_report(out, report, json);
    return report.exit_code();
}

} // namespace supergeo::cli
