// One line per acceptance criterion. All comparisons are exact (rational arithmetic, tolerance 0).
// Pinned budgets: property suite 12000 cases with seed default_seed, runtime limit 30 s.

#include <chrono>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "supergeo/atlas.hpp"
#include "supergeo/cech.hpp"
#include "supergeo/families.hpp"
#include "supergeo/properties.hpp"
#include "supergeo/text.hpp"

using namespace supergeo;

namespace {

constexpr long property_cases = 12000;
constexpr double property_seconds_limit = 30.0;
const HomMonomial xyz{-1, -1, -1};

struct Line {
    std::string id;
    bool pass;
    std::string what;
    std::string detail;
};

std::vector<Line> lines;
int informational_failures = 0;

void report(const std::string& id, bool pass, const std::string& what, const std::string& detail)
{
    lines.push_back({id, pass, what, detail});
    std::printf("[%s] %s %s: %s\n", pass ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
    std::fflush(stdout);
}

std::vector<Atlas> named_families()
{
    std::vector<Atlas> out;
    for (int l = 0; l <= 2; ++l) {
        out.push_back(build_decomposable(l));
        out.push_back(build_omega1(l));
    }
    return out;
}

std::string label(const Atlas& a)
{
    return a.family + "(l=" + a.lambda.get_str() + ")";
}

void berezinian_theorem()
{
    int ok = 0;
    int abs_one = 0;
    std::ostringstream seen;
    for (const Atlas& a : named_families()) {
        const CalabiYauReport r = is_calabi_yau(a);
        seen << label(a) << " [";
        for (const auto& e : r.entries) {
            const SuperElem minus_one = SuperElem::constant(a.chart(e.source).table, -1);
            ok += e.value == minus_one ? 1 : 0;
            abs_one += (e.value == minus_one || e.value == -minus_one) ? 1 : 0;
            seen << ' ' << format(e.value);
        }
        seen << " ] ";
    }
    report("C1", ok == 18, "Ber(Jac) = -1 on 18 family/overlap/lambda cases",
           std::to_string(ok) + "/18 equal -1; values " + seen.str());
    std::printf("[%s] C1-info |Ber(Jac)| = 1 on the same 18 cases: %d/18\n", abs_one == 18 ? "PASS" : "FAIL", abs_one);
    if (abs_one != 18) ++informational_failures;
}

void cocycle_loops()
{
    std::vector<Atlas> atlases = named_families();
    atlases.push_back(build_pi_plane());
    int closed = 0;
    std::string failing;
    for (const Atlas& a : atlases) {
        const LoopReport r = check_cocycle_loop(a);
        bool all_zero = r.defined && r.residuals.size() == 4;
        for (const auto& res : r.residuals) all_zero = all_zero && res.value.is_zero();
        if (all_zero) {
            ++closed;
        } else {
            failing += " " + label(a);
        }
    }
    report("C2", closed == 7, "loop (0<-1)(1<-2)(2<-0) is the identity",
           std::to_string(closed) + "/7 atlases with 4 zero residuals" + (failing.empty() ? "" : ", failing:" + failing));
}

void trichotomy()
{
    int ok = 0;
    for (int k = -10; k <= 10; ++k) {
        const long euler = h1_tangent(2, k);
        const long dual = h1_tangent_bott(k);
        ok += (euler == dual && euler == (k == -3 ? 1 : 0)) ? 1 : 0;
    }
    report("C3", ok == 21, "h1(T(k)) = [k = -3] by Euler kernel and Bott+Serre", std::to_string(ok) + "/21 values agree");
}

void ladder()
{
    int ok = 0;
    for (int l = 4; l <= 12; ++l) ok += h_line(1, 2 - l, 1) == l - 3 ? 1 : 0;
    report("C4", ok == 9, "h1(P1, O(2-l)) = l-3 for l in [4,12]", std::to_string(ok) + "/9");
}

void picard_chase()
{
    int ok = 0;
    for (const Atlas& a : named_families()) {
        const PicardReport r = picard_delta(a, standard_picard_lift());
        const bool coeff = r.cls.coefficient(xyz) == a.lambda && r.cls.coeffs.size() <= 1;
        ok += (coeff && r.cls.is_zero() == (a.lambda == 0)) ? 1 : 0;
    }
    report("C5", ok == 6, "Picard chase gives lambda [1/(X0X1X2)]", std::to_string(ok) + "/6 family/lambda cases");
}

void obstruction()
{
    int ok = 0;
    int omega_zero = 0;
    for (const Atlas& a : named_families()) {
        const CohClass c = obstruction_delta(a).cls;
        ok += (c.coefficient(xyz) == a.lambda && c.coeffs.size() <= 1) ? 1 : 0;
        omega_zero += omega_cocycle_sum(a).sum.is_zero() ? 1 : 0;
    }
    report("C6", ok == 6 && omega_zero == 6, "obstruction class lambda [1/(X0X1X2)], omega cocycle sums to 0",
           std::to_string(ok) + "/6 classes, " + std::to_string(omega_zero) + "/6 zero sums");
}

void pi_plane()
{
    const Atlas pi = build_pi_plane();
    const Atlas om = build_omega1(1);
    int identical = 0;
    for (std::size_t i = 0; i < pi.maps.size(); ++i) {
        for (std::size_t c = 0; c < pi.maps[i].images().size(); ++c) {
            identical += format(pi.maps[i].image(c)) == format(om.maps[i].image(c)) ? 1 : 0;
        }
    }
    const bool eq = atlas_equal(pi, om);
    report("C7", eq && identical == 12, "Pi-plane atlas equals omega1 at lambda = 1",
           std::string("atlas_equal ") + (eq ? "true" : "false") + ", " + std::to_string(identical) + "/12 identical assignments");
}

void pi_vanishing()
{
    const long a = h_line(2, -1, 1);
    const long b = h_line(2, -2, 1);
    report("C8", a == 0 && b == 0, "h1(P2, O(-1)) = h1(P2, O(-2)) = 0", std::to_string(a) + ", " + std::to_string(b));
}

void ranks()
{
    int ok = 0;
    for (long k = 1; k <= 20; ++k) ok += sym_restricted_rank(k) == SuperRank{2 * k, 2 * k} ? 1 : 0;
    report("C9", ok == 20, "Sym^k rank is 2k|2k for k in [1,20]", std::to_string(ok) + "/20");
}

void properties()
{
    const auto start = std::chrono::steady_clock::now();
    const auto results = run_properties(default_seed, property_cases);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    long total = 0;
    long failures = 0;
    std::string first;
    for (const auto& r : results) {
        total += r.cases;
        failures += r.failures;
        if (first.empty() && !r.ok()) first = r.name + ": " + r.first_failure;
    }
    std::ostringstream d;
    d << total << " cases, " << failures << " failures, " << results.size() << " laws, seed " << default_seed << ", "
      << secs << " s (limit " << property_seconds_limit << " s)";
    if (!first.empty()) d << "; " << first;
    report("C10", failures == 0 && total >= 10000 && secs < property_seconds_limit, "randomized algebraic laws", d.str());
}

void negative_controls()
{
    const LoopReport corrupted = check_cocycle_loop(corrupt_lambda_sign(build_decomposable(1), 0));
    std::string named;
    for (const auto& c : corrupted.failing()) named += c + " ";
    const bool loop_fails = !corrupted.closed && !corrupted.failing().empty();

    bool rejected = false;
    try {
        build_generic(split_minus_one_cocycle(), 1);
    } catch (const domain_error&) {
        rejected = true;
    }
    const bool not_cy = !is_calabi_yau(build_split_minus_one()).calabi_yau;
    report("C11", loop_fails && rejected && not_cy, "negative controls",
           "corrupted loop residual on " + (named.empty() ? std::string("none ") : named) + "| det-violating cocycle " +
               (rejected ? "rejected" : "accepted") + " | split O(-1)+O(-1) " + (not_cy ? "not Calabi-Yau" : "Calabi-Yau"));
}

} // namespace

int main()
{
    berezinian_theorem();
    cocycle_loops();
    trichotomy();
    ladder();
    picard_chase();
    obstruction();
    pi_plane();
    pi_vanishing();
    ranks();
    properties();
    negative_controls();
    int failed = 0;
    for (const auto& l : lines) failed += l.pass ? 0 : 1;
    std::printf("%d/%zu criteria passed\n", static_cast<int>(lines.size()) - failed, lines.size());
    return failed == 0 && informational_failures == 0 ? 0 : 1;
}
