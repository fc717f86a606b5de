#include "annlab/scenario.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <utility>

#include "annlab/levelset.hpp"
#include "annlab/meromorphic.hpp"

namespace annlab {
namespace {

using nlohmann::json;

constexpr const char* kLibVersion = "0.1.0";
constexpr int kScenarioFormat = 1;
constexpr int kReportFormat = 1;

const std::set<std::string>& known_analyses() {
    static const std::set<std::string> k{
        "trace",  "ends",      "pole",      "flux",        "boundedness",
        "angular-limits", "slice", "curvature", "equivalence", "conformal-type"};
    return k;
}

const std::set<std::string>& known_tolerances() {
    static const std::set<std::string> k{"trace_f_tol_rel", "trace_g_tol_rel",
                                         "curvature_bottom", "sor_tol",
                                         "sor_max_iters", "walks"};
    return k;
}

[[noreturn]] void bad(const std::string& msg) { throw DomainError("scenario: " + msg); }

double tol_or(const Scenario& sc, const char* key, double dflt) {
    auto it = sc.tolerances.find(key);
    return it == sc.tolerances.end() ? dflt : it->second;
}

double num_at(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number()) bad(std::string("'") + key + "' must be a number");
    return v.get<double>();
}

int int_at(const json& j, const char* key) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) bad(std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

void check_keys(const json& obj, const char* what, const std::set<std::string>& allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            bad(std::string("unknown ") + what + " key '" + it.key() + "'");
}

LaurentSeries series_from(const json& arr, const char* what) {
    if (!arr.is_array()) bad(std::string(what) + " must be an array of [index, re, im]");
    std::vector<std::pair<int, cplx>> terms;
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 3 || !t[0].is_number_integer() ||
            !t[1].is_number() || !t[2].is_number())
            bad(std::string(what) + " terms must be [index, re, im]");
        terms.emplace_back(t[0].get<int>(), cplx(t[1].get<double>(), t[2].get<double>()));
    }
    return LaurentSeries(terms);
}

json series_to(const LaurentSeries& s) {
    json arr = json::array();
    for (const auto& [m, c] : s.terms())
        arr.push_back(json::array({m, c.real(), c.imag()}));
    return arr;
}

void parse_field(const json& field, Scenario& sc) {
    if (!field.is_object()) bad("'field' must be an object");
    if (field.contains("builtin")) {
        if (!field.at("builtin").is_string()) bad("'builtin' must be a name");
        Scenario base = builtin_scenario(field.at("builtin").get<std::string>());
        sc.kind = base.kind;
        sc.log_coeff = base.log_coeff;
        sc.analytic = base.analytic;
        sc.gauss_winding = base.gauss_winding;
        sc.H = base.H;
        sc.height_form = base.height_form;
        sc.r_prime = base.r_prime;
        sc.builtin_source = base.builtin_source;
        return;
    }
    if (field.contains("closed_form")) {
        const json& cf = field.at("closed_form");
        check_keys(cf, "closed_form", {"log_coeff", "series"});
        sc.kind = FieldKind::ClosedForm;
        if (cf.contains("log_coeff")) sc.log_coeff = num_at(cf, "log_coeff");
        if (cf.contains("series")) sc.analytic = series_from(cf.at("series"), "series");
        if (sc.log_coeff == 0.0 && sc.analytic.terms().empty())
            bad("closed-form field is identically constant");
        return;
    }
    if (field.contains("weierstrass")) {
        const json& w = field.at("weierstrass");
        check_keys(w, "weierstrass", {"winding", "H", "height_form", "r_prime"});
        sc.kind = FieldKind::Weierstrass;
        sc.gauss_winding = int_at(w, "winding");
        if (w.contains("H")) sc.H = series_from(w.at("H"), "H");
        sc.height_form = series_from(w.at("height_form"), "height_form");
        if (w.contains("r_prime")) sc.r_prime = num_at(w, "r_prime");
        return;
    }
    bad("'field' must give a builtin name, a closed form, or weierstrass data");
}

// ---------------------------------------------------------------------------
// analysis handlers

using Warn = std::function<void(const char*, const std::string&)>;

TraceOptions trace_opts(const Scenario& sc) {
    TraceOptions o;
    o.f_tol_rel = tol_or(sc, "trace_f_tol_rel", o.f_tol_rel);
    o.g_tol_rel = tol_or(sc, "trace_g_tol_rel", o.g_tol_rel);
    return o;
}

void forward_trace_warnings(const LevelSetComplex& c, const Warn& warn) {
    for (const auto& w : c.warnings)
        if (w.rfind("CriticalLevel", 0) == 0) warn("CriticalLevel", w);
}

json run_trace(const Scenario& sc, const Warn& warn, bool want_ends) {
    PolarGrid g = sc.grid();
    HarmonicField f = scenario_field(sc);
    LevelSetComplex c = trace_level(f, sc.level, g, trace_opts(sc));
    forward_trace_warnings(c, warn);
    if (want_ends) {
        RadiusSchedule sched = RadiusSchedule::for_grid(g);
        EndCount ec = count_ends(c, sched);
        return json{{"count", ec.count},
                    {"level", sc.level},
                    {"schedule_top", sched.top()},
                    {"schedule_bottom", sched.bottom()}};
    }
    int loops = 0;
    for (const auto& arc : c.arcs) loops += arc.closed ? 1 : 0;
    return json{{"level", sc.level},
                {"arcs", int(c.arcs.size())},
                {"closed_loops", loops},
                {"open_arcs", int(c.arcs.size()) - loops},
                {"crossing_nodes", int(c.nodes.size())},
                {"warnings", c.warnings}};
}

json run_pole(const Scenario& sc) {
    OneForm w = omega_of(scenario_field(sc));
    PoleReport rep = pole_order_of(w);
    return json{{"order", rep.pole_order},
                {"predicted_end_count", rep.predicted_end_count},
                {"agreement_score", rep.agreement_score},
                {"principal_coefficients", series_to(LaurentSeries(rep.principal_coefficients))}};
}

json run_flux(const Scenario& sc) {
    double r = std::sqrt(sc.r_inner * sc.r_outer);
    return json{{"radius", r}, {"value", flux(scenario_field(sc), r)}};
}

const char* boundedness_name(BoundednessKind k) {
    switch (k) {
        case BoundednessKind::Bounded: return "Bounded";
        case BoundednessKind::UnboundedPole: return "UnboundedPole";
        default: return "EssentialSuspected";
    }
}

json run_boundedness(const Scenario& sc, const Warn& warn) {
    BoundednessVerdict v = classify_boundedness(scenario_field(sc));
    if (v.kind == BoundednessKind::EssentialSuspected)
        warn("EssentialSuspected", "one-form recovery cannot reconcile its circles");
    return json{{"kind", boundedness_name(v.kind)},
                {"pole_order", v.pole_order},
                {"score", v.score}};
}

json run_angular(const Scenario& sc) {
    // sector vertices live on the grid's inner circle, so cut the field's
    // domain there
    HarmonicField f0 = scenario_field(sc);
    HarmonicField f = HarmonicField::closed_form(f0.log_coeff(), f0.analytic(),
                                                 AnnulusDomain(sc.r_inner), sc.r_outer);
    double reach = std::min(0.3, 0.75 * (sc.r_outer - sc.r_inner));
    json pts = json::array();
    for (int k = 0; k < 8; ++k) {
        double th = k * PI / 4.0;
        AngularSector sector{std::polar(sc.r_inner, th), PI / 6.0, reach};
        AngularLimitReport rep = angular_limit(f, sector);
        pts.push_back(json{{"theta", th},
                           {"convergent", rep.convergent},
                           {"value", rep.value}});
    }
    return json{{"points", pts}, {"half_angle", PI / 6.0}, {"reach", reach}};
}

json run_slice(const Scenario& sc, const Warn& warn) {
    WeierstrassData data = scenario_surface(sc);
    SliceReport rep = plane_slice(data, Plane{{0.0, 0.0, 1.0}, sc.level}, sc.grid(),
                                  trace_opts(sc));
    forward_trace_warnings(rep.curves, warn);
    return json{{"offset", sc.level},
                {"arcs", int(rep.curves.arcs.size())},
                {"ends", rep.ends.count}};
}

json run_curvature(const Scenario& sc, const Warn& warn) {
    WeierstrassData data = scenario_surface(sc);
    PolarGrid g = sc.grid();
    double top = std::exp(g.s_min() + 0.75 * (g.s_max() - g.s_min()));
    double bottom = tol_or(sc, "curvature_bottom", g.r_min);
    RadiusSchedule sched = RadiusSchedule::geometric(top, bottom, 12);
    CurvatureReport rep = total_curvature(data, data.r_prime, sched);
    bool infinite = rep.verdict == CurvatureReport::Verdict::InfiniteSuspected;
    if (infinite)
        warn("EssentialSuspected", "swept spherical area keeps growing toward the puncture");
    return json{{"verdict", infinite ? "InfiniteSuspected" : "Finite"},
                {"spherical_area", rep.value},
                {"multiplicity", rep.spherical_multiplicity},
                {"total_curvature", rep.total_curvature},
                {"schedule_top", top},
                {"schedule_bottom", bottom}};
}

json leg_json(const EquivalenceLeg& leg) {
    return json{{"ok", leg.ok}, {"finite", leg.finite}, {"value", leg.value}, {"note", leg.note}};
}

json run_equivalence(const Scenario& sc, const Warn& warn) {
    WeierstrassData data = scenario_surface(sc);
    EquivalenceReport rep = check_corollary_equivalence(
        data, Plane{{0.0, 0.0, 1.0}, sc.level}, Plane{{1.0, 0.0, 0.0}, 0.0}, sc.grid());
    if (rep.h_bounded.ok && !rep.h_bounded.finite)
        warn("EssentialSuspected", "gauss factor H carries principal terms");
    return json{{"pass", rep.pass},
                {"curvature", leg_json(rep.curvature)},
                {"h_bounded", leg_json(rep.h_bounded)},
                {"slices", leg_json(rep.slices)}};
}

const char* verdict_name(TypeVerdict v) {
    switch (v) {
        case TypeVerdict::Parabolic: return "Parabolic";
        case TypeVerdict::Hyperbolic: return "Hyperbolic";
        default: return "Indeterminate";
    }
}

json run_conformal(const Scenario& sc, const Warn& warn) {
    std::string variant = sc.conformal_variant;
    if (variant == "auto")
        variant = sc.kind == FieldKind::Weierstrass ? "halfspace" : "annulus";
    PolarGrid g = sc.grid();
    cplx z0 = sc.basepoint;
    if (z0 == cplx(0.0, 0.0)) z0 = cplx(std::sqrt(g.r_min * g.r_outer), 0.0);

    if (variant == "annulus") {
        ClassifyOptions opts;
        opts.seed = sc.seed;
        opts.tol = tol_or(sc, "sor_tol", opts.tol);
        opts.max_iters = std::int64_t(tol_or(sc, "sor_max_iters", double(opts.max_iters)));
        opts.walks = std::int64_t(tol_or(sc, "walks", double(opts.walks)));
        HarmonicMeasureReport rep = classify_type(
            [z0](const PolarGrid& gg) { return full_mask(gg, z0); }, g, opts);
        if (rep.mc_flagged || rep.mc_censored > 0)
            warn("Censored", "walker censored " + std::to_string(rep.mc_censored) +
                                 " walk(s) at the step cap");
        return json{{"variant", "annulus"},
                    {"basepoint", json::array({z0.real(), z0.imag()})},
                    {"u_solver", rep.u_solver},
                    {"u_solver_coarse", rep.u_solver_coarse},
                    {"u_mc", rep.u_mc},
                    {"half_width", rep.half_width},
                    {"delta", rep.delta},
                    {"resolutions", json::array({rep.resolutions[0], rep.resolutions[1]})},
                    {"verdict", verdict_name(rep.verdict)}};
    }
    if (variant == "puncture") {
        std::vector<double> radii =
            sc.inner_radii.empty() ? std::vector<double>{1e-2, 1e-3, 1e-4} : sc.inner_radii;
        for (double r : radii)
            if (r >= std::abs(z0))
                throw DomainError("puncture trend radius must undercut the basepoint");
        PunctureTrendReport rep =
            classify_puncture_trend(z0, radii, g.n_radial, g.n_angular);
        return json{{"variant", "puncture"},
                    {"basepoint", json::array({z0.real(), z0.imag()})},
                    {"inner_radii", rep.inner_radii},
                    {"u_values", rep.u_values},
                    {"fitted_constant", rep.fitted_constant},
                    {"expected_constant", rep.expected_constant},
                    {"monotone_decreasing", rep.monotone_decreasing},
                    {"parabolic_trend", rep.parabolic_trend}};
    }
    // halfspace: needs the surface to partition by height
    WeierstrassData data = scenario_surface(sc);
    HalfspaceReport rep = halfspace_cross_check(data, sc.level, g);
    json comps = json::array();
    for (const auto& c : rep.components)
        comps.push_back(json{{"below", c.below},
                             {"seed", json::array({c.seed.real(), c.seed.imag()})},
                             {"extreme", c.extreme},
                             {"confined", c.confined},
                             {"touches_ideal", c.touches_ideal},
                             {"u_trend", c.u_trend},
                             {"verdict", verdict_name(c.verdict)},
                             {"contradiction", c.contradiction},
                             {"note", c.note}});
    return json{{"variant", "halfspace"},
                {"level", rep.level},
                {"shrink", rep.shrink},
                {"below_vacuous", rep.below_vacuous},
                {"above_vacuous", rep.above_vacuous},
                {"any_contradiction", rep.any_contradiction},
                {"components", comps}};
}

json run_one(const Scenario& sc, const std::string& a, const Warn& warn) {
    if (a == "trace") return run_trace(sc, warn, false);
    if (a == "ends") return run_trace(sc, warn, true);
    if (a == "pole") return run_pole(sc);
    if (a == "flux") return run_flux(sc);
    if (a == "boundedness") return run_boundedness(sc, warn);
    if (a == "angular-limits") return run_angular(sc);
    if (a == "slice") return run_slice(sc, warn);
    if (a == "curvature") return run_curvature(sc, warn);
    if (a == "equivalence") return run_equivalence(sc, warn);
    return run_conformal(sc, warn);
}

const char* error_type(const Error& e) {
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const NonMeromorphicSuspected*>(&e)) return "NonMeromorphicSuspected";
    if (dynamic_cast<const ResolutionError*>(&e)) return "ResolutionError";
    if (dynamic_cast<const UndeterminedEnd*>(&e)) return "UndeterminedEnd";
    if (dynamic_cast<const NumericalNonconvergence*>(&e)) return "NumericalNonconvergence";
    if (dynamic_cast<const DegenerateMetric*>(&e)) return "DegenerateMetric";
    if (dynamic_cast<const WindingUnresolved*>(&e)) return "WindingUnresolved";
    if (dynamic_cast<const BranchError*>(&e)) return "BranchError";
    if (dynamic_cast<const SlicePeriodError*>(&e)) return "SlicePeriodError";
    if (dynamic_cast<const InsufficientResolution*>(&e)) return "InsufficientResolution";
    return "Error";
}

json error_json(const Error& e) {
    json err{{"type", error_type(e)}, {"message", e.what()}};
    if (auto* p = dynamic_cast<const NumericalNonconvergence*>(&e))
        err["residual"] = p->residual;
    else if (auto* q = dynamic_cast<const NonMeromorphicSuspected*>(&e))
        err["score"] = q->score;
    else if (auto* s = dynamic_cast<const SlicePeriodError*>(&e))
        err["period"] = s->period;
    else if (auto* w = dynamic_cast<const WindingUnresolved*>(&e))
        err["residual"] = w->residual;
    else if (auto* u = dynamic_cast<const UndeterminedEnd*>(&e))
        err["arc_id"] = u->arc_id;
    return json{{"error", err}};
}

// ---------------------------------------------------------------------------
// builtin catalog

Scenario base(const char* name) {
    Scenario sc;
    sc.name = name;
    sc.builtin_source = name;
    return sc;
}

Scenario closed(const char* name, double log_coeff,
                std::vector<std::pair<int, cplx>> terms,
                std::vector<std::string> analyses, double r_inner, int nr, int na,
                double level) {
    Scenario sc = base(name);
    sc.log_coeff = log_coeff;
    sc.analytic = LaurentSeries(std::move(terms));
    sc.analyses = std::move(analyses);
    sc.r_inner = r_inner;
    sc.n_radial = nr;
    sc.n_angular = na;
    sc.level = level;
    return sc;
}

Scenario surface(const char* name, int winding, std::vector<std::pair<int, cplx>> H,
                 std::vector<std::pair<int, cplx>> dh,
                 std::vector<std::string> analyses, double r_inner, int nr, int na,
                 double level) {
    Scenario sc = base(name);
    sc.kind = FieldKind::Weierstrass;
    sc.gauss_winding = winding;
    sc.H = LaurentSeries(std::move(H));
    sc.height_form = LaurentSeries(std::move(dh));
    sc.r_prime = 0.8;
    sc.r_outer = 0.8;
    sc.analyses = std::move(analyses);
    sc.r_inner = r_inner;
    sc.n_radial = nr;
    sc.n_angular = na;
    sc.level = level;
    return sc;
}

Scenario pole_k(int k) {
    static const char* names[] = {"pole1_end", "pole2_end", "pole3_end", "pole4_end"};
    int nr = k <= 1 ? 96 : (k == 2 ? 128 : 129);
    int na = k <= 2 ? 512 : 1024;
    return closed(names[k - 1], 0.1, {{-k, {1.0, 0.0}}}, {"trace", "ends", "pole"},
                  0.004, nr, na, 0.5);
}

struct BuiltinDef {
    const char* name;
    const char* summary;
    Scenario (*make)();
};

const BuiltinDef kBuiltins[] = {
    {"log_end", "pure log field: one level circle, residue one, full flux",
     [] { return closed("log_end", 1.0, {}, {"trace", "ends", "pole", "flux", "boundedness"},
                        0.05, 129, 256, -0.5); }},
    {"dipole_end", "real part of 1/z: order-two pole, two ends",
     [] { return closed("dipole_end", 0.0, {{-1, {1.0, 0.0}}},
                        {"trace", "ends", "pole", "boundedness"}, 0.004, 96, 512, 0.0); }},
    {"quadrupole_end", "real part of 1/z^2: order-three pole, four ends",
     [] { return closed("quadrupole_end", 0.0, {{-2, {1.0, 0.0}}},
                        {"trace", "ends", "pole", "boundedness"}, 0.005, 96, 512, 0.0); }},
    {"bounded_end", "real part of z on a thick annulus: no pole, radial limits",
     [] { return closed("bounded_end", 0.0, {{1, {1.0, 0.0}}},
                        {"trace", "ends", "pole", "flux", "boundedness", "angular-limits"},
                        0.5, 129, 256, 0.0); }},
    {"pole1_end", "order-two pole plus a log drift: two ends", [] { return pole_k(1); }},
    {"pole2_end", "order-three pole plus a log drift: four ends", [] { return pole_k(2); }},
    {"pole3_end", "order-four pole plus a log drift: six ends", [] { return pole_k(3); }},
    {"pole4_end", "order-five pole plus a log drift: eight ends", [] { return pole_k(4); }},
    {"catenoid_end", "gauss map z, height form dz/z: finite cap area, no ends",
     [] {
         Scenario sc = surface("catenoid_end", 1, {}, {{-1, {1.0, 0.0}}},
                               {"pole", "ends", "curvature", "equivalence"}, 0.05, 96,
                               256, -1.0);
         sc.tolerances["curvature_bottom"] = 1e-3;
         return sc;
     }},
    {"planar_end", "gauss map z, height form dz: a graph over a plane",
     [] { return surface("planar_end", 1, {}, {{0, {1.0, 0.0}}},
                         {"pole", "ends", "curvature", "equivalence", "slice"}, 0.04, 64,
                         256, -0.5); }},
    {"enneper_end", "gauss map 1/z, height form -dz/z^3: four-winged end",
     [] { return surface("enneper_end", -1, {}, {{-3, {-1.0, 0.0}}},
                         {"pole", "ends", "curvature", "equivalence"}, 0.02, 96, 512,
                         -0.5); }},
    {"unbounded_H_end", "gauss map z e^{1/z}: essential growth, infinite area",
     [] { return surface("unbounded_H_end", 1, {{-1, {1.0, 0.0}}}, {{-1, {1.0, 0.0}}},
                         {"pole", "ends", "curvature", "equivalence"}, 0.04, 64, 512,
                         -1.0); }},
    {"halfspace_component", "height split of the catenoid chart: parabolic trends",
     [] {
         Scenario sc = surface("halfspace_component", 1, {}, {{-1, {1.0, 0.0}}},
                               {"conformal-type"}, 0.05, 96, 256, -1.0);
         sc.conformal_variant = "halfspace";
         return sc;
     }},
    {"full_annulus", "harmonic measure at the geometric mean of a plain annulus",
     [] {
         Scenario sc = closed("full_annulus", 1.0, {}, {"conformal-type"}, 0.25, 97,
                              256, 0.0);
         sc.conformal_variant = "annulus";
         sc.tolerances["walks"] = 100000;
         return sc;
     }},
    {"punctured_disk", "shrinking-core measure trend: the 1/log decay of a puncture",
     [] {
         Scenario sc = closed("punctured_disk", 1.0, {}, {"conformal-type"}, 0.25, 129,
                              64, 0.0);
         sc.conformal_variant = "puncture";
         return sc;
     }},
};

}  // namespace

Scenario scenario_from_json(const json& doc) {
    if (!doc.is_object()) bad("document must be a JSON object");
    check_keys(doc, "scenario",
               {"format_version", "name", "field", "analyses", "grid", "level", "seed",
                "tolerances", "conformal"});
    if (doc.contains("format_version") && doc.at("format_version") != kScenarioFormat)
        bad("unsupported format_version");

    Scenario sc;
    if (!doc.contains("name") || !doc.at("name").is_string() ||
        doc.at("name").get<std::string>().empty())
        bad("'name' must be a nonempty string");
    sc.name = doc.at("name").get<std::string>();

    if (!doc.contains("field")) bad("missing 'field'");
    parse_field(doc.at("field"), sc);

    if (!doc.contains("analyses") || !doc.at("analyses").is_array() ||
        doc.at("analyses").empty())
        bad("'analyses' must be a nonempty array");
    std::set<std::string> seen;
    for (const auto& a : doc.at("analyses")) {
        if (!a.is_string() || !known_analyses().count(a.get<std::string>()))
            bad("unknown analysis '" + a.dump() + "'");
        if (!seen.insert(a.get<std::string>()).second)
            bad("duplicate analysis '" + a.get<std::string>() + "'");
        sc.analyses.push_back(a.get<std::string>());
    }

    if (sc.kind == FieldKind::Weierstrass) sc.r_outer = sc.r_prime;
    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        check_keys(g, "grid", {"r_inner", "n_radial", "n_angular", "r_outer"});
        if (g.contains("r_inner")) sc.r_inner = num_at(g, "r_inner");
        if (g.contains("n_radial")) sc.n_radial = int_at(g, "n_radial");
        if (g.contains("n_angular")) sc.n_angular = int_at(g, "n_angular");
        if (g.contains("r_outer")) sc.r_outer = num_at(g, "r_outer");
    }
    if (doc.contains("level")) sc.level = num_at(doc, "level");
    if (doc.contains("seed")) {
        const json& s = doc.at("seed");
        if (!s.is_number_unsigned() &&
            !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            bad("'seed' must be a nonnegative integer");
        sc.seed = s.get<std::uint64_t>();
    }
    if (doc.contains("tolerances")) {
        const json& t = doc.at("tolerances");
        if (!t.is_object()) bad("'tolerances' must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            if (!known_tolerances().count(it.key()))
                bad("unknown tolerance '" + it.key() + "'");
            if (!it.value().is_number()) bad("tolerance values must be numbers");
            sc.tolerances[it.key()] = it.value().get<double>();
        }
    }
    if (doc.contains("conformal")) {
        const json& c = doc.at("conformal");
        check_keys(c, "conformal", {"variant", "basepoint", "inner_radii"});
        if (c.contains("variant")) {
            if (!c.at("variant").is_string()) bad("'variant' must be a string");
            sc.conformal_variant = c.at("variant").get<std::string>();
        }
        if (c.contains("basepoint")) {
            const json& b = c.at("basepoint");
            if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
                bad("'basepoint' must be [re, im]");
            sc.basepoint = cplx(b[0].get<double>(), b[1].get<double>());
        }
        if (c.contains("inner_radii")) {
            for (const auto& r : c.at("inner_radii")) {
                if (!r.is_number() || r.get<double>() <= 0.0)
                    bad("'inner_radii' must be positive numbers");
                sc.inner_radii.push_back(r.get<double>());
            }
            for (std::size_t i = 1; i < sc.inner_radii.size(); ++i)
                if (sc.inner_radii[i] >= sc.inner_radii[i - 1])
                    bad("'inner_radii' must decrease strictly");
        }
    }
    static const std::set<std::string> variants{"auto", "annulus", "puncture", "halfspace"};
    if (!variants.count(sc.conformal_variant))
        bad("unknown conformal variant '" + sc.conformal_variant + "'");
    if (sc.conformal_variant == "halfspace" && sc.kind != FieldKind::Weierstrass)
        bad("halfspace variant needs weierstrass data");

    sc.grid();  // constructor validates the resolution
    if (sc.kind == FieldKind::Weierstrass) {
        try {
            scenario_surface(sc);
        } catch (const DomainError&) {
            throw;
        } catch (const Error& e) {
            bad(std::string("surface data rejected: ") + e.what());
        }
    }
    return sc;
}

Scenario parse_scenario(const std::string& text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) bad("unparseable JSON");
    return scenario_from_json(doc);
}

json scenario_to_json(const Scenario& sc) {
    json field = json::object();
    if (!sc.builtin_source.empty()) field["builtin"] = sc.builtin_source;
    if (sc.kind == FieldKind::ClosedForm)
        field["closed_form"] =
            json{{"log_coeff", sc.log_coeff}, {"series", series_to(sc.analytic)}};
    else
        field["weierstrass"] = json{{"winding", sc.gauss_winding},
                                    {"H", series_to(sc.H)},
                                    {"height_form", series_to(sc.height_form)},
                                    {"r_prime", sc.r_prime}};
    return json{
        {"format_version", kScenarioFormat},
        {"name", sc.name},
        {"field", std::move(field)},
        {"analyses", sc.analyses},
        {"grid",
         json{{"r_inner", sc.r_inner},
              {"n_radial", sc.n_radial},
              {"n_angular", sc.n_angular},
              {"r_outer", sc.r_outer}}},
        {"level", sc.level},
        {"seed", sc.seed},
        {"tolerances", sc.tolerances},
        {"conformal",
         json{{"variant", sc.conformal_variant},
              {"basepoint", json::array({sc.basepoint.real(), sc.basepoint.imag()})},
              {"inner_radii", sc.inner_radii}}},
    };
}

HarmonicField scenario_field(const Scenario& sc) {
    if (sc.kind == FieldKind::Weierstrass) return height_field(scenario_surface(sc));
    return HarmonicField::closed_form(sc.log_coeff, sc.analytic, AnnulusDomain(0.0),
                                      sc.r_outer);
}

WeierstrassData scenario_surface(const Scenario& sc) {
    if (sc.kind != FieldKind::Weierstrass)
        throw DomainError("scenario carries no surface data");
    return make_weierstrass(sc.gauss_winding, sc.H, sc.height_form, sc.r_prime);
}

const std::vector<CatalogEntry>& catalog() {
    static const std::vector<CatalogEntry> entries = [] {
        std::vector<CatalogEntry> v;
        for (const auto& b : kBuiltins) v.push_back({b.name, b.summary});
        return v;
    }();
    return entries;
}

Scenario builtin_scenario(const std::string& name) {
    for (const auto& b : kBuiltins)
        if (name == b.name) return b.make();
    throw DomainError("scenario: no builtin named '" + name + "'");
}

RunReport run_scenario(const Scenario& sc) {
    auto t0 = std::chrono::steady_clock::now();
    json results = json::object();
    json warnings = json::array();
    bool nonconv = false;

    for (const std::string& a : sc.analyses) {
        Warn warn = [&](const char* kind, const std::string& msg) {
            warnings.push_back(json{{"analysis", a}, {"kind", kind}, {"message", msg}});
        };
        try {
            results[a] = run_one(sc, a, warn);
        } catch (const NumericalNonconvergence& e) {
            results[a] = error_json(e);
            nonconv = true;
        } catch (const NonMeromorphicSuspected& e) {
            results[a] = error_json(e);
            warn("EssentialSuspected", e.what());
        } catch (const Error& e) {
            results[a] = error_json(e);
        }
    }

    json doc;
    doc["format_version"] = kReportFormat;
    doc["name"] = sc.name;
    doc["scenario"] = scenario_to_json(sc);
    doc["results"] = std::move(results);
    doc["warnings"] = std::move(warnings);
    doc["versions"] = json{{"annlab", kLibVersion},
                           {"report_format", kReportFormat},
                           {"scenario_format", kScenarioFormat}};
    double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    auto unix_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
    doc["timestamp"] = json{{"unix_ms", unix_ms}, {"wall_ms", wall_ms}};

    RunReport rep;
    rep.document = std::move(doc);
    rep.nonconvergence = nonconv;
    return rep;
}

std::string deterministic_dump(const RunReport& report) {
    json doc = report.document;
    doc.erase("timestamp");
    return doc.dump(2) + "\n";
}

}  // namespace annlab
